//! Deterministic number formatting and report records.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::boundary_algebra::{boundary_condition_matrix, UnitaryMatrix2};
use crate::endpoint_forms::{boundary_values_numeric, BoundaryValues, Endpoint};
use crate::error::{Error, Result};
use crate::extension_solver::{eigenfunctions_shoot, Eigenvalue, ShotEigenfunction};
use crate::legendre::EigenPair;
use crate::operator::Operator;

/// Round to 15 significant digits; the shortest representation of the result
/// is what serializers emit.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                if let Some(x) = n.as_f64() {
                    if let Some(r) = serde_json::Number::from_f64(round_sig(x)) {
                        *n = r;
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 15 significant digits and keys sorted.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
    round_value(&mut v);
    serde_json::to_string_pretty(&v).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Shortest text for `round_sig(x)`: plain decimal for magnitudes in `[1e-4, 1e15)`,
/// scientific otherwise.
pub fn format_sig(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 || !r.is_finite() || (1e-4..1e15).contains(&r.abs()) {
        r.to_string()
    } else {
        format!("{r:e}")
    }
}

/// Write rows through a CSV writer into a string.
pub fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(|x| format_sig(*x)))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub multiplicity: u8,
    /// `|B(U) q| / |B(U)|` for the numerically extracted boundary values `q` of
    /// each eigenfunction, largest over the eigenspace.
    pub boundary_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub a: f64,
    #[serde(rename = "U")]
    pub unitary: UnitaryMatrix2,
    pub method: String,
    pub eigenvalues: Vec<SpectrumEntry>,
}

impl SpectrumReport {
    pub fn to_csv(&self) -> String {
        csv_string(
            &["k", "lambda", "multiplicity", "boundary_residual"],
            self.eigenvalues
                .iter()
                .enumerate()
                .map(|(k, e)| vec![(k + 1) as f64, e.lambda, e.multiplicity as f64, e.boundary_residual]),
        )
    }
}

/// Numerical boundary values of a shot eigenfunction.
pub fn shot_boundary_values(f: &ShotEigenfunction) -> Result<BoundaryValues> {
    let a = f.half_width();
    let mut bv = BoundaryValues::default();
    for ep in [Endpoint::MinusA, Endpoint::PlusA] {
        let lim = boundary_values_numeric(
            |s| {
                let j = f.jet_near(ep, s);
                (j.value, j.d1)
            },
            ep,
            a,
        )?;
        bv.set(ep, lim.b, lim.c);
    }
    Ok(bv)
}

/// `|B(U) q| / |B(U)|`.
pub fn boundary_residual(u: &UnitaryMatrix2, bv: &BoundaryValues) -> f64 {
    let b = boundary_condition_matrix(u);
    (b * nalgebra::Vector4::from(bv.as_array())).norm() / b.norm()
}

/// Spectrum report for shooting eigenvalues, with boundary residuals of the eigenfunctions.
pub fn shooting_report(op: Operator, u: &UnitaryMatrix2, a: f64, eigenvalues: &[Eigenvalue]) -> Result<SpectrumReport> {
    let mut entries = Vec::new();
    for e in eigenvalues {
        let fs = eigenfunctions_shoot(op, u, a, e.lambda)?;
        let mut worst: f64 = 0.0;
        for f in &fs {
            worst = worst.max(boundary_residual(u, &shot_boundary_values(f)?));
        }
        entries.push(SpectrumEntry {
            lambda: e.lambda,
            multiplicity: e.multiplicity,
            boundary_residual: worst,
        });
    }
    Ok(SpectrumReport {
        a,
        unitary: *u,
        method: "shooting".into(),
        eigenvalues: entries,
    })
}

/// Spectrum report for Galerkin eigenpairs of the distinguished extension; the
/// eigenfunctions are polynomials, so `b = 0` and `B(I) q = 0` exactly.
pub fn galerkin_report(a: f64, pairs: &[EigenPair]) -> SpectrumReport {
    SpectrumReport {
        a,
        unitary: UnitaryMatrix2::identity(),
        method: "galerkin".into(),
        eigenvalues: pairs
            .iter()
            .map(|p| SpectrumEntry {
                lambda: p.lambda,
                multiplicity: 1,
                boundary_residual: 0.0,
            })
            .collect(),
    }
}

/// `k, lambda, residual` rows.
pub fn eigenpairs_csv(pairs: &[EigenPair]) -> String {
    csv_string(
        &["k", "lambda", "residual"],
        pairs
            .iter()
            .enumerate()
            .map(|(k, p)| vec![(k + 1) as f64, p.lambda, p.residual]),
    )
}

/// `t, chi_1, ..., chi_n` on the points `ts`.
pub fn eigenfunctions_csv(pairs: &[EigenPair], ts: &[f64]) -> String {
    let names: Vec<String> = (1..=pairs.len()).map(|k| format!("chi_{k}")).collect();
    let mut header = vec!["t"];
    header.extend(names.iter().map(String::as_str));
    csv_string(
        &header,
        ts.iter().map(|&t| {
            let mut row = vec![t];
            row.extend(pairs.iter().map(|p| p.eigenfunction.eval(t).re));
            row
        }),
    )
}

/// Samples `(t, x)` read from CSV text with columns `t,re[,im]` (header optional).
pub fn read_samples(text: &str) -> Result<(Vec<f64>, Vec<num_complex::Complex64>)> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut t = Vec::new();
    let mut x = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::InvalidInput(e.to_string()))?;
        let nums: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match nums {
            Ok(v) if v.len() == 2 || v.len() == 3 => {
                t.push(v[0]);
                x.push(num_complex::Complex64::new(v[1], v.get(2).copied().unwrap_or(0.0)));
            }
            Err(_) if i == 0 => continue,
            _ => return Err(Error::InvalidInput(format!("line {}: expected t,re[,im]", i + 1))),
        }
    }
    Ok((t, x))
}
