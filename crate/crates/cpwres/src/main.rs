use std::process::ExitCode;

fn main() -> ExitCode {
    cpwres::cli::run()
}
