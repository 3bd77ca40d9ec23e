use std::fs;
use std::io::Write;
use std::process::ExitCode;

use facering_cli::{parse_args, run};

fn main() -> ExitCode {
    let config = match parse_args(std::env::args_os()) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            match &e {
                facering_cli::ArgsError::Clap(c) => {
                    let _ = c.print();
                }
                other => eprintln!("facering: {other}"),
            }
            return ExitCode::from(code as u8);
        }
    };
    let out = run(&config);
    let body = match &out.text {
        Some(text) => text.clone(),
        None => out.report.to_json(config.timings),
    };
    let written = match &config.output {
        Some(path) => fs::write(path, &body).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("facering: {e}");
        return ExitCode::from(3);
    }
    if let Some(err) = &out.report.error {
        eprintln!("facering: {err}");
    }
    ExitCode::from(out.report.exit_code as u8)
}
