use std::process::ExitCode;

use swapkit_cli::{parse_args, render, run, CliError};

fn main() -> ExitCode {
    let cfg = match parse_args(std::env::args_os().skip(1)) {
        Ok(c) => c,
        Err(CliError::Info(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code());
        }
    };
    match run(&cfg) {
        Ok(out) => {
            if cfg.output.is_none() {
                match render(&out.report) {
                    Ok(text) => println!("{text}"),
                    Err(e) => {
                        eprintln!("{e}");
                        return ExitCode::from(e.exit_code());
                    }
                }
            }
            if let Some(v) = &out.violation {
                eprintln!("invariant violation: {v}");
            }
            ExitCode::from(out.exit_code())
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
