use crate::error::{invalid, Result};
use crate::grid::Channel;

/// A real-valued multi-channel image. All channels share one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    channels: Vec<Channel>,
}

impl ImageBuffer {
    pub fn new(channels: Vec<Channel>) -> Result<Self> {
        let Some(first) = channels.first() else {
            return Err(invalid("an image needs at least one channel"));
        };
        let shape = first.shape();
        if shape.0 == 0 || shape.1 == 0 {
            return Err(invalid(format!("image dimensions must be positive, got {shape:?}")));
        }
        if let Some(bad) = channels.iter().find(|c| c.shape() != shape) {
            return Err(invalid(format!(
                "channel shape {:?} differs from {shape:?}",
                bad.shape()
            )));
        }
        Ok(Self { channels })
    }

    pub fn gray(channel: Channel) -> Result<Self> {
        Self::new(vec![channel])
    }

    pub fn rows(&self) -> usize {
        self.channels[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.channels[0].cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.channels[0].shape()
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn channel(&self, i: usize) -> &Channel {
        &self.channels[i]
    }

    pub fn into_channels(self) -> Vec<Channel> {
        self.channels
    }

    /// Observed `(min, max)` of every channel.
    pub fn value_ranges(&self) -> Vec<(f64, f64)> {
        self.channels.iter().map(Channel::min_max).collect()
    }

    /// Apply `f` to every channel. `f` must return equally shaped channels.
    pub fn map_channels(&self, f: impl FnMut(&Channel) -> Channel) -> Result<Self> {
        Self::new(self.channels.iter().map(f).collect())
    }

    /// Channel-wise mean, i.e. an unweighted luminance average.
    pub fn to_gray(&self) -> Channel {
        let n = self.channels.len() as f64;
        let mut out = self.channels[0].clone();
        for ch in &self.channels[1..] {
            for (o, v) in out.as_mut_slice().iter_mut().zip(ch.as_slice()) {
                *o += v;
            }
        }
        for o in out.as_mut_slice() {
            *o /= n;
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.num_channels(), other.num_channels());
        self.channels
            .iter()
            .zip(&other.channels)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}
