use std::process::ExitCode;

fn main() -> ExitCode {
    qiaug::cli::run(std::env::args_os())
}
