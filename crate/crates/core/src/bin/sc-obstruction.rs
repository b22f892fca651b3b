use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    ExitCode::from(sc_obstruction::cli::run(args, &mut std::io::stdout(), &mut std::io::stderr()))
}
