use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = quiverdt_cli::run(
        std::env::args(),
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code)
}
