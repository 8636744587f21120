//! Parameter resolution: built-in defaults, then the JSON config file, then
//! command-line flags, each layer overriding the one before.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

/// Options shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON file with parameter values; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file. Defaults to `$POWERBOUND_OUT_DIR/<subcommand>.<ext>`,
    /// or standard output when the variable is unset.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Seed for randomized experiments.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Keys a config file may hold besides the subcommand parameters.
const COMMON_KEYS: [&str; 2] = ["output", "seed"];

/// A subcommand's parameter set. Every field is optional so that flags,
/// config values and defaults can be layered.
pub trait Params: Serialize + DeserializeOwned + Default {
    /// Default values, as a JSON object.
    const DEFAULTS: &'static str = "{}";
}

/// The outcome of layering: parameters plus the resolved common options.
pub struct Resolved<P> {
    pub params: P,
    pub output: Option<PathBuf>,
    pub seed: u64,
    /// Every resolved value, echoed into the output header.
    pub echo: Value,
}

fn object(v: Value, what: &str) -> Result<Map<String, Value>, CliError> {
    match v {
        Value::Object(m) => Ok(m),
        _ => Err(CliError::Param(format!("{what} must be a JSON object"))),
    }
}

fn to_json<T: Serialize>(v: &T) -> Map<String, Value> {
    match serde_json::to_value(v).expect("parameter structs serialize") {
        Value::Object(m) => m,
        _ => unreachable!("parameter structs serialize to objects"),
    }
}

fn read_config(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Param(format!("cannot read config {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Param(format!("config {} is not valid JSON: {e}", path.display())))?;
    object(v, "config file")
}

/// Flag values that count as "given": non-null, and `true` for switches.
fn given(v: &Value) -> bool {
    !matches!(v, Value::Null | Value::Bool(false))
}

pub fn resolve<P: Params>(flags: &P, common: &Common) -> Result<Resolved<P>, CliError> {
    let known: BTreeSet<String> = to_json(&P::default())
        .keys()
        .cloned()
        .chain(COMMON_KEYS.iter().map(|k| k.to_string()))
        .collect();
    let mut merged = object(
        serde_json::from_str(P::DEFAULTS).expect("defaults are valid JSON"),
        "defaults",
    )?;
    let mut output = None;
    let mut seed = 0;
    if let Some(path) = &common.config {
        for (k, v) in read_config(path)? {
            if !known.contains(&k) {
                return Err(CliError::Param(format!("unknown config key `{k}`")));
            }
            match k.as_str() {
                "output" => {
                    let s = v
                        .as_str()
                        .ok_or_else(|| CliError::Param("`output` must be a string".into()))?;
                    output = Some(PathBuf::from(s));
                }
                "seed" => {
                    seed = v
                        .as_u64()
                        .ok_or_else(|| CliError::Param("`seed` must be an integer".into()))?
                }
                _ => {
                    merged.insert(k, v);
                }
            }
        }
    }
    for (k, v) in to_json(flags) {
        if given(&v) {
            merged.insert(k, v);
        }
    }
    let output = common.output.clone().or(output);
    let seed = common.seed.unwrap_or(seed);
    let params: P = serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::Param(format!("invalid parameter: {e}")))?;
    // echo the parameters as they were understood, not as they were written
    let mut echo = to_json(&params);
    echo.retain(|_, v| !v.is_null());
    echo.insert("seed".into(), seed.into());
    Ok(Resolved {
        params,
        output,
        seed,
        echo: Value::Object(echo),
    })
}

pub fn require<T: Clone>(v: &Option<T>, name: &str) -> Result<T, CliError> {
    v.clone()
        .ok_or_else(|| CliError::Param(format!("missing required parameter --{}", name.replace('_', "-"))))
}

/// Parameters naming a function family.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct FamilyArgs {
    /// zexp, zpow, zpowplus, powdiff, expdiff, expsin, onepow, zexpm, identity,
    /// exp, invpow, sin, oneminusexp.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
}

/// A dense operator given either as a file or as a diagonal.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct MatrixArgs {
    /// Matrix file: `.json` in the library's matrix format, otherwise CSV.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Real diagonal entries, comma separated (used when no file is given).
    #[arg(long, value_delimiter = ',')]
    pub diag: Option<Vec<f64>>,
    /// Induced norm: 1, 2 or inf.
    #[arg(long)]
    pub norm: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Default, Serialize, Deserialize)]
    struct P {
        order: Option<usize>,
        name: Option<String>,
        #[serde(default)]
        flag: bool,
    }

    impl Params for P {
        const DEFAULTS: &'static str = r#"{"order": 7, "name": "d"}"#;
    }

    fn with_config(text: &str) -> (tempfile::NamedTempFile, Common) {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        std::io::Write::write_all(&mut f, text.as_bytes()).unwrap();
        let common = Common {
            config: Some(f.path().to_path_buf()),
            ..Common::default()
        };
        (f, common)
    }

    #[test]
    fn layers_override_in_order() {
        let r = resolve(&P::default(), &Common::default()).unwrap();
        assert_eq!((r.params.order, r.params.name.as_deref()), (Some(7), Some("d")));

        let (_f, common) = with_config(r#"{"order": 9, "name": "c", "seed": 5, "output": "x.csv"}"#);
        let r = resolve(&P::default(), &common).unwrap();
        assert_eq!(
            (r.params.order, r.params.name.as_deref(), r.seed),
            (Some(9), Some("c"), 5)
        );
        assert_eq!(r.output, Some(PathBuf::from("x.csv")));

        let flags = P {
            order: Some(11),
            ..P::default()
        };
        let r = resolve(&flags, &common).unwrap();
        assert_eq!((r.params.order, r.params.name.as_deref()), (Some(11), Some("c")));
        assert_eq!(r.echo["order"], 11);
    }

    #[test]
    fn unknown_and_malformed_keys_are_rejected() {
        let (_f, common) = with_config(r#"{"ordr": 3}"#);
        assert!(matches!(resolve(&P::default(), &common), Err(CliError::Param(m)) if m.contains("ordr")));
        let (_f, common) = with_config(r#"{"order": "many"}"#);
        assert!(resolve(&P::default(), &common).is_err());
        let (_f, common) = with_config("[1, 2]");
        assert!(resolve(&P::default(), &common).is_err());
    }

    #[test]
    fn unset_switch_does_not_clear_config() {
        let (_f, common) = with_config(r#"{"flag": true}"#);
        assert!(resolve(&P::default(), &common).unwrap().params.flag);
    }
}
