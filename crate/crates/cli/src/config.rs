//! Run configuration: defaults, then a key=value file, then flags.

use std::collections::BTreeMap;
use std::path::PathBuf;

use prolate_core::boundary_algebra::UnitaryMatrix2;
use prolate_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Raw settings before validation; every field optional so sources can be layered.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Flags {
    /// Half-width of the interval (-a, a).
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// `identity`, `neg-identity`, `swap`, or eight reals re11,im11,re12,im12,re21,im21,re22,im22.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub unitary: Option<String>,
    /// Number of eigenvalues or eigenfunctions.
    #[arg(long, global = true)]
    pub modes: Option<usize>,
    /// Galerkin truncation N.
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    /// Lower end of the eigenvalue search window
    #[arg(long = "range-min", global = true, allow_hyphen_values = true)]
    pub range_min: Option<f64>,
    /// Upper end of the eigenvalue search window
    #[arg(long = "range-max", global = true, allow_hyphen_values = true)]
    pub range_max: Option<f64>,
    /// `VALUE` (sets `scan`) or `NAME=VALUE`; repeatable. Names: scan, double_root.
    #[arg(long, global = true)]
    pub tol: Vec<String>,
    /// Output format (default json)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// key=value file with the same keys as the long flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub a: f64,
    pub unitary: UnitaryMatrix2,
    pub n_modes: usize,
    pub truncation: Option<usize>,
    pub range: (Option<f64>, Option<f64>),
    pub tolerances: BTreeMap<String, f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

pub const TOLERANCE_NAMES: [&str; 2] = ["scan", "double_root"];

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e| bad(format!("{key}: {e}")))
}

/// Parse a key=value file into flags. Blank lines and `#` comments are ignored.
pub fn parse_config(text: &str) -> Result<Flags> {
    let mut f = Flags::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("config line {}: expected key=value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "a" => f.a = Some(num(k, v)?),
            "unitary" => f.unitary = Some(v.to_string()),
            "modes" => f.modes = Some(num(k, v)?),
            "truncation" => f.truncation = Some(num(k, v)?),
            "range-min" => f.range_min = Some(num(k, v)?),
            "range-max" => f.range_max = Some(num(k, v)?),
            "tol" => f.tol.push(v.to_string()),
            "format" => {
                f.format = Some(match v {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    _ => return Err(bad(format!("format must be json or csv, got `{v}`"))),
                })
            }
            "out" => f.out = Some(PathBuf::from(v)),
            _ => return Err(bad(format!("config line {}: unknown key `{k}`", i + 1))),
        }
    }
    Ok(f)
}

impl Flags {
    /// `self` wins over `base` field by field; tolerances accumulate with `self` last.
    pub fn over(self, base: Flags) -> Flags {
        let mut tol = base.tol;
        tol.extend(self.tol);
        Flags {
            a: self.a.or(base.a),
            unitary: self.unitary.or(base.unitary),
            modes: self.modes.or(base.modes),
            truncation: self.truncation.or(base.truncation),
            range_min: self.range_min.or(base.range_min),
            range_max: self.range_max.or(base.range_max),
            tol,
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            config: self.config.or(base.config),
        }
    }

    /// Layer in the config file, if any, and validate.
    pub fn resolve(self) -> Result<RunConfig> {
        let merged = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| bad(format!("{}: {e}", p.display())))?;
                self.over(parse_config(&text)?)
            }
            None => self,
        };
        merged.validate()
    }

    pub fn validate(self) -> Result<RunConfig> {
        let a = self.a.unwrap_or(1.0);
        if !(a > 0.0 && a.is_finite()) {
            return Err(bad(format!("a must be positive and finite, got {a}")));
        }
        let n_modes = self.modes.unwrap_or(5);
        if n_modes < 1 {
            return Err(bad("modes must be at least 1"));
        }
        let unitary = UnitaryMatrix2::parse(self.unitary.as_deref().unwrap_or("identity"))?;
        let mut tolerances = BTreeMap::from([("double_root".to_string(), 1e-6), ("scan".to_string(), 1e-12)]);
        for t in &self.tol {
            let (name, v) = t.split_once('=').unwrap_or(("scan", t));
            let name = name.trim();
            if !TOLERANCE_NAMES.contains(&name) {
                return Err(bad(format!("unknown tolerance `{name}`")));
            }
            let v: f64 = num("tol", v.trim())?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(bad(format!("tolerance {name} must be positive, got {v}")));
            }
            tolerances.insert(name.to_string(), v);
        }
        if let (Some(lo), Some(hi)) = (self.range_min, self.range_max) {
            if !(lo < hi) {
                return Err(bad(format!("empty range [{lo}, {hi}]")));
            }
        }
        for x in [self.range_min, self.range_max].into_iter().flatten() {
            if !x.is_finite() {
                return Err(bad("range bounds must be finite"));
            }
        }
        Ok(RunConfig {
            a,
            unitary,
            n_modes,
            truncation: self.truncation,
            range: (self.range_min, self.range_max),
            tolerances,
            format: self.format.unwrap_or_default(),
            out: self.out,
        })
    }
}

impl RunConfig {
    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    /// Truncation for `modes` eigenpairs: the flag if given, else the library default.
    pub fn truncation_for(&self, modes: usize) -> usize {
        self.truncation
            .unwrap_or_else(|| prolate_core::legendre::default_truncation(self.a, modes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = parse_config("# sweep\na = 2\nunitary = swap\ntol = scan=1e-9\nformat = csv\n").unwrap();
        let flags = Flags {
            a: Some(0.5),
            tol: vec!["double_root=1e-5".into()],
            ..Default::default()
        };
        let c = flags.over(file).validate().unwrap();
        assert_eq!(c.a, 0.5);
        assert_eq!(c.unitary, UnitaryMatrix2::swap());
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.tol("scan"), 1e-9);
        assert_eq!(c.tol("double_root"), 1e-5);
    }

    #[test]
    fn validation() {
        let v = |f: Flags| f.validate().unwrap_err();
        assert!(matches!(
            v(Flags {
                a: Some(-1.0),
                ..Default::default()
            }),
            Error::InvalidInput(_)
        ));
        assert!(matches!(
            v(Flags {
                modes: Some(0),
                ..Default::default()
            }),
            Error::InvalidInput(_)
        ));
        assert!(matches!(
            v(Flags {
                tol: vec!["0".into()],
                ..Default::default()
            }),
            Error::InvalidInput(_)
        ));
        assert!(matches!(
            v(Flags {
                tol: vec!["foo=1".into()],
                ..Default::default()
            }),
            Error::InvalidInput(_)
        ));
        assert!(matches!(
            v(Flags {
                unitary: Some("1,0,0,0,1,1,0,0".into()),
                ..Default::default()
            }),
            Error::NotUnitary { .. }
        ));
        assert!(parse_config("a 1").is_err());
        assert!(parse_config("colour = red").is_err());
    }
}
