use std::process::ExitCode;

fn main() -> ExitCode {
    match zetascope::cli::run(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zetascope: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
