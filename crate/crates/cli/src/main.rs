mod args;
mod commands;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Format};
use commands::{Failure, Outcome, Table};

fn render_csv(table: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn render(command: &str, outcome: Outcome, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => {
            let body = json!({"command": command, "verdict": outcome.verdict, "evidence": outcome.evidence});
            Ok(serde_json::to_string_pretty(&body).expect("serializable") + "\n")
        }
        Format::Csv => {
            outcome.table.as_ref().map(render_csv).ok_or_else(|| {
                Failure::input("INVALID_ARGUMENT", format!("{command} has no CSV form; use --format json"))
            })
        }
    }
}

fn error_body(f: &Failure) -> String {
    let body = json!({"error": {"code": f.code, "message": f.message}});
    serde_json::to_string_pretty(&body).expect("serializable") + "\n"
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input("IO", format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn apply_cap() -> Result<(), Failure> {
    match std::env::var("CANTOR_MAX_BITS") {
        Ok(v) => {
            let bits: u64 = v
                .trim()
                .parse()
                .map_err(|_| Failure::input("INVALID_ARGUMENT", format!("CANTOR_MAX_BITS is not an integer: {v:?}")))?;
            cantor_core::product::set_materialization_cap(bits);
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

fn exit_code(f: &Failure) -> u8 {
    if f.hypothesis {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            print!("{}", error_body(&Failure::input("USAGE", e.kind().to_string())));
            return ExitCode::from(1);
        }
    };
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let name = cli.command.name();

    let result =
        apply_cap().and_then(|()| commands::run(&cli.command)).and_then(|outcome| render(name, outcome, cli.format));
    let (text, code) = match result {
        Ok(text) => (text, 0),
        Err(f) => {
            eprintln!("cantor {name}: {} ({})", f.message, f.code);
            (error_body(&f), exit_code(&f))
        }
    };
    if let Err(f) = emit(cli.out.as_deref(), &text) {
        eprintln!("cantor {name}: {}", f.message);
        return ExitCode::from(1);
    }
    if let Some(out) = &cli.out {
        let meta = json!({
            "command": name,
            "argv": std::env::args().collect::<Vec<_>>(),
            "version": env!("CARGO_PKG_VERSION"),
            "started_unix": started,
            "elapsed_ms": clock.elapsed().as_millis() as u64,
            "exit_code": code,
            "max_bits": cantor_core::product::materialization_cap(),
        });
        let text = serde_json::to_string_pretty(&meta).expect("serializable") + "\n";
        if let Err(e) = fs::write(sidecar(out), text) {
            eprintln!("cantor {name}: could not write metadata: {e}");
        }
    }
    ExitCode::from(code)
}
