use std::io::Write;
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context};
use serde::Serialize;
use serde_json::Value;

/// Envelope around every subcommand's result. Field order is fixed.
#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub result: Value,
    pub wallclock_ms: u64,
}

impl Report {
    pub fn new(command: &'static str, result: Value, took: Duration) -> Self {
        Report {
            tool: "lcllab",
            version: env!("CARGO_PKG_VERSION"),
            command,
            result,
            wallclock_ms: took.as_millis() as u64,
        }
    }
}

pub fn render(r: &Report) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(r)? + "\n")
}

pub fn write_report(r: &Report, path: Option<&Path>) -> anyhow::Result<()> {
    let text = render(r)?;
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn strip_wallclock(mut v: Value) -> Value {
    if let Some(m) = v.as_object_mut() {
        m.remove("wallclock_ms");
    }
    v
}

/// Fails unless `earlier` equals `r` apart from the wallclock field.
pub fn replay(r: &Report, earlier: &str) -> anyhow::Result<()> {
    let old: Value = serde_json::from_str(earlier).context("replay file is not JSON")?;
    let new = strip_wallclock(serde_json::to_value(r)?);
    let old = strip_wallclock(old);
    if old != new {
        let cmd = old.get("command").and_then(Value::as_str).unwrap_or("?");
        bail!("replay mismatch: report differs from the recorded `{cmd}` run");
    }
    Ok(())
}
