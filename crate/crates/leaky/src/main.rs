use std::process::ExitCode;

fn main() -> ExitCode {
    leaky::cli::main_with_args(std::env::args_os())
}
