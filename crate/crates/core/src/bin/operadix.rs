use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = operadix::cli::run(std::env::args_os());
    let out = result.output();
    if result.exit_code == operadix::cli::EXIT_USAGE && !result.json {
        eprint!("{out}");
    } else {
        let mut stdout = std::io::stdout().lock();
        // A closed pipe is not worth a panic.
        let _ = stdout.write_all(out.as_bytes());
    }
    ExitCode::from(result.exit_code as u8)
}
