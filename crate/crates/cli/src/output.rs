//! Report bodies, the header block, and atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::{json, Map, Value};

use crate::CliError;

pub const OUT_DIR_ENV: &str = "POWERBOUND_OUT_DIR";

pub enum Body {
    Csv(String),
    Json(Value),
}

impl Body {
    fn extension(&self) -> &'static str {
        match self {
            Body::Csv(_) => "csv",
            Body::Json(_) => "json",
        }
    }
}

pub struct Report {
    pub body: Body,
    /// Set when the computation stopped early and the body is incomplete.
    pub partial: bool,
    /// Summary values added to the header.
    pub notes: Map<String, Value>,
}

impl Report {
    pub fn csv(text: String) -> Self {
        Report {
            body: Body::Csv(text),
            partial: false,
            notes: Map::new(),
        }
    }

    pub fn json(v: Value) -> Self {
        Report {
            body: Body::Json(v),
            partial: false,
            notes: Map::new(),
        }
    }

    pub fn note(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.notes.insert(key.into(), v.into());
        self
    }

    pub fn partial(mut self, partial: bool) -> Self {
        self.partial = partial;
        self
    }
}

fn header(subcommand: &str, config: &Value, wall: Duration, report: &Report) -> Map<String, Value> {
    let mut h = Map::new();
    h.insert(
        "tool".into(),
        json!(format!("powerbound {}", env!("CARGO_PKG_VERSION"))),
    );
    h.insert("subcommand".into(), json!(subcommand));
    h.insert("config".into(), config.clone());
    h.insert("wall_time_s".into(), json!(wall.as_secs_f64()));
    h.insert("partial".into(), json!(report.partial));
    for (k, v) in &report.notes {
        h.insert(k.clone(), v.clone());
    }
    h
}

/// CSV gets `# key: value` comment lines before the table; JSON gets a
/// `header` object beside `result`.
pub fn render(subcommand: &str, config: &Value, wall: Duration, report: &Report) -> String {
    let h = header(subcommand, config, wall, report);
    match &report.body {
        Body::Csv(text) => {
            let mut out = String::new();
            for (k, v) in &h {
                out.push_str(&format!("# {k}: {v}\n"));
            }
            out.push_str(text);
            out
        }
        Body::Json(v) => {
            let doc = json!({ "header": Value::Object(h), "result": v });
            serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"
        }
    }
}

/// Where output goes: the explicit path, else the environment directory,
/// else standard output (`None`).
pub fn target(explicit: Option<PathBuf>, subcommand: &str, report: &Report) -> Option<PathBuf> {
    explicit.or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(format!("{subcommand}.{}", report.body.extension())))
    })
}

/// Writes through a temporary file in the destination directory and renames
/// it into place, so readers never see a half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Param(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    // temporary files are created owner-only; reports are ordinary files
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))
            .map_err(io)?;
    }
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Param(format!("cannot write to stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_precedes_body() {
        let r = Report::csv("a,b\n1,2\n".into()).note("k", 1.5);
        let text = render("x", &json!({"p": 1}), Duration::from_millis(3), &r);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# tool: \"powerbound 0.1.0\"");
        assert_eq!(lines[2], "# config: {\"p\":1}");
        assert!(lines.contains(&"# k: 1.5"));
        assert_eq!(&lines[lines.len() - 2..], ["a,b", "1,2"]);
    }

    #[test]
    fn json_report_wraps_result() {
        let r = Report::json(json!([1, 2])).partial(true);
        let v: Value = serde_json::from_str(&render("x", &json!({}), Duration::ZERO, &r)).unwrap();
        assert_eq!(v["result"], json!([1, 2]));
        assert_eq!(v["header"]["partial"], json!(true));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/out.csv");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
