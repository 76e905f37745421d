//! Result emission: CSV with a `#` header, JSON wrapped with the configuration, 12 significant
//! digits throughout.

use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::config::Settings;
use crate::failure::Failure;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `x` with 12 significant digits.
pub fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Rounds every number in `v` to 12 significant digits.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().unwrap_or(f64::NAN);
                if let Some(r) = fmt12(x).parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

pub enum Payload {
    Json(Value),
    Csv { columns: Vec<String>, rows: Vec<Vec<String>>, notes: Vec<String> },
}

fn header(command: &str, settings: &Settings, notes: &[String]) -> String {
    let mut h = format!("# tjchain {VERSION} {command}\n");
    for line in settings.echo().iter().chain(notes) {
        h.push_str("# ");
        h.push_str(line);
        h.push('\n');
    }
    h
}

fn csv_text(columns: &[String], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Failure::io(e.to_string());
    w.write_record(columns).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::io(e.to_string()))
}

/// Writes `payload` to the `output` setting, or to stdout. Files always carry the
/// configuration; stdout JSON is the bare result.
pub fn emit(command: &str, settings: &Settings, payload: Payload) -> Result<(), Failure> {
    let output = settings.get("output").map(str::to_string);
    let text = match payload {
        Payload::Json(mut v) => {
            round_json(&mut v);
            let body = if output.is_some() {
                serde_json::json!({ "tjchain": VERSION, "command": command, "config": settings.to_json(), "result": v })
            } else {
                v
            };
            let mut s = serde_json::to_string_pretty(&body).map_err(|e| Failure::io(e.to_string()))?;
            s.push('\n');
            s
        }
        Payload::Csv { columns, rows, notes } => header(command, settings, &notes) + &csv_text(&columns, &rows)?,
    };
    match output {
        Some(path) => {
            let path = Path::new(&path);
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::io(e.to_string())),
    }
}
