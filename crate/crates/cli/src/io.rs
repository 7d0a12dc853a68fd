use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use mlcover::json::{canonical, instance_from_json};
use mlcover::Instance;
use serde_json::Value;

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    Ok(instance_from_json(&read_text(path)?)?)
}

/// Writes bytes to `out`, or to standard output.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            Ok(stdout.flush()?)
        }
    }
}

/// Canonical JSON plus a trailing newline.
pub fn emit_json(out: Option<&Path>, v: &Value) -> Result<()> {
    let mut text = canonical(v);
    text.push('\n');
    emit(out, text.as_bytes())
}
