use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(staircase::cli::run(std::env::args_os()))
}
