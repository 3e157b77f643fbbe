use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(netsheaf::cli::run_from(std::env::args_os()) as u8)
}
