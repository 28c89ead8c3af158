use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use admpair::cli::{render, run, RunConfig};

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            let doc = json!({"error": "usage", "path": "", "detail": e.kind().to_string()});
            print!("{}", render(&doc));
            return ExitCode::from(1);
        }
    };
    let (code, doc) = run(&cfg);
    let text = render(&doc);
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if code != 0 {
        if let Some(detail) = doc.get("detail").and_then(|d| d.as_str()) {
            eprintln!("error: {detail}");
        }
    }
    ExitCode::from(code as u8)
}
