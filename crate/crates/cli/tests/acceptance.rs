//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Criteria 1-12 run in-process and are timed against their
//! limits; criterion 13 runs `hardy suite` twice and compares the reports.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hardy_cli::strip_timestamps;
use hardy_cli::suite::criteria;

const SEED: u64 = 20_240_917;

fn line(ok: bool, id: usize, title: &str, elapsed: Duration, limit: Option<Duration>, detail: &str) {
    let limit = limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
    println!(
        "{} {id:>2} {title:<28} {:>7.2}s{limit}  {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
}

fn suite_report(config: &std::path::Path) -> Result<(String, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hardy"))
        .args(["suite", "--config"])
        .arg(config)
        .output()
        .map_err(|e| format!("cannot launch hardy: {e}"))?;
    let code = out.status.code().unwrap_or(-1);
    let stdout = String::from_utf8(out.stdout).map_err(|e| format!("non-UTF-8 report: {e}"))?;
    Ok((strip_timestamps(&stdout), code))
}

fn determinism() -> (bool, String) {
    let path = std::env::temp_dir().join(format!("hardy-acceptance-{}.json", std::process::id()));
    if let Err(e) = std::fs::write(&path, format!("{{\"seed\": {SEED}}}")) {
        return (false, format!("cannot write config: {e}"));
    }
    let result = suite_report(&path).and_then(|a| suite_report(&path).map(|b| (a, b)));
    let _ = std::fs::remove_file(&path);
    match result {
        Ok(((a, ca), (b, cb))) if a == b && ca == cb && !a.trim().is_empty() => {
            (true, format!("{} bytes identical after stripping timing; exit {ca} both runs", a.len()))
        }
        Ok(((a, ca), (b, cb))) => (false, format!("reports differ ({} vs {} bytes, exit {ca} vs {cb})", a.len(), b.len())),
        Err(e) => (false, e),
    }
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    println!("acceptance suite, seed {SEED}");
    let mut failed = 0;
    for c in criteria() {
        let start = Instant::now();
        let outcome = (c.run)(SEED);
        let elapsed = start.elapsed();
        let in_time = c.limit.map_or(true, |l| elapsed <= l);
        let (ok, detail) = match outcome {
            Ok(o) if in_time => (o.passed, o.detail),
            Ok(o) => (false, format!("over time limit; {}", o.detail)),
            Err(e) => (false, format!("error: {e}")),
        };
        line(ok, c.id, c.title, elapsed, c.limit, &detail);
        failed += usize::from(!ok);
    }

    let start = Instant::now();
    let (ok, detail) = determinism();
    line(ok, 13, "determinism", start.elapsed(), None, &detail);
    failed += usize::from(!ok);

    println!("{} of 13 criteria passed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
