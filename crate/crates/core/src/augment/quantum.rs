use crate::grid::Channel;
use crate::qcore::{extract, AmplitudeState};

/// Element-wise real part of the extracted state.
pub fn project_real(state: &AmplitudeState) -> Channel {
    extract(state).map(|a| a.re)
}

/// Element-wise modulus of the extracted state.
pub fn project_abs(state: &AmplitudeState) -> Channel {
    extract(state).map(|a| a.norm())
}

/// Element-wise imaginary part of the extracted state.
pub fn project_imag(state: &AmplitudeState) -> Channel {
    extract(state).map(|a| a.im)
}

/// Result of [`minmax_renormalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Renormalized {
    pub channel: Channel,
    /// Set when either input was constant and the output was pinned to the
    /// original minimum.
    pub degenerate: bool,
}

/// Affinely map `augmented`'s `[min, max]` onto `original`'s `[min, max]`.
///
/// Written as `lo·(1−t) + hi·t` so the output extremes equal the original
/// extremes bit for bit.
pub fn minmax_renormalize(augmented: &Channel, original: &Channel) -> Renormalized {
    let (amin, amax) = augmented.min_max();
    let (omin, omax) = original.min_max();
    let span = amax - amin;
    if !(span > 0.0 && span.is_finite()) || omin == omax {
        return Renormalized {
            channel: augmented.map(|_| omin),
            degenerate: true,
        };
    }
    let channel = augmented.map(|&v| {
        let t = (v - amin) / span;
        omin * (1.0 - t) + omax * t
    });
    Renormalized {
        channel,
        degenerate: false,
    }
}
