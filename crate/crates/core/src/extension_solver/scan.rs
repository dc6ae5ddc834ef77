use serde::{Deserialize, Serialize};

use super::{connection, secular_from_connection, SecularPhase, SecularReport};
use crate::boundary_algebra::UnitaryMatrix2;
use crate::error::{Error, Result};
use crate::operator::Operator;

/// Uniform scan cells per requested range.
pub const DEFAULT_CELLS: usize = 400;

/// An eigenvalue with its multiplicity (1 or 2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub lambda: f64,
    pub multiplicity: u8,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub op: Operator,
    pub cells: usize,
    /// Root tolerance, relative to `max(1, |lambda|)`.
    pub tol: f64,
    /// Both singular values of the secular system below this (relative to its
    /// scale) certify a double root.
    pub double_root_tol: f64,
    /// Rescans allowed when roots fall closer than two cells.
    pub max_refinements: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            op: Operator::Prolate,
            cells: DEFAULT_CELLS,
            tol: 1e-12,
            double_root_tol: 1e-6,
            max_refinements: 3,
        }
    }
}

struct Indicator<'a> {
    u: &'a UnitaryMatrix2,
    phase: SecularPhase,
    a: f64,
    op: Operator,
}

impl Indicator<'_> {
    fn report(&self, lambda: f64) -> Result<SecularReport> {
        let conn = connection(self.op, self.a, lambda)?;
        Ok(secular_from_connection(self.u, &self.phase, &conn))
    }

    fn f(&self, lambda: f64) -> Result<f64> {
        Ok(self.report(lambda)?.indicator)
    }
}

fn illinois(ind: &Indicator, mut lo: f64, mut hi: f64, mut flo: f64, mut fhi: f64, tol: f64) -> Result<f64> {
    // iterate to floating resolution: steep indicators need the root to the last ulp
    // for the eigenfunction null space to be resolved; `tol` is the accuracy guaranteed
    let mut side = 0i8;
    for _ in 0..200 {
        if (hi - lo).abs() <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
        let mut m = (lo * fhi - hi * flo) / (fhi - flo);
        if !(m > lo && m < hi) {
            m = 0.5 * (lo + hi);
        }
        let fm = ind.f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = m;
            flo = fm;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = m;
            fhi = fm;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    if (hi - lo).abs() > tol * lo.abs().max(hi.abs()).max(1.0) {
        return Err(Error::ScanTooCoarse {
            lambda: 0.5 * (lo + hi),
        });
    }
    Ok(if flo.abs() <= fhi.abs() { lo } else { hi })
}

enum MinimumOutcome {
    Pair(f64, f64),
    Double(f64),
    Nothing,
}

fn inspect_minimum(ind: &Indicator, lo: f64, hi: f64, fmid: f64, opts: &ScanOptions) -> Result<MinimumOutcome> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x0, mut x3) = (lo, hi);
    let mut x1 = x3 - g * (x3 - x0);
    let mut x2 = x0 + g * (x3 - x0);
    let mut f1 = ind.f(x1)?;
    let mut f2 = ind.f(x2)?;
    let sign = fmid > 0.0;
    let flip = |x: f64, fx: f64| -> Option<f64> { ((fx > 0.0) != sign || fx == 0.0).then_some(x) };
    for _ in 0..80 {
        if let Some(m) = flip(x1, f1).or(flip(x2, f2)) {
            let flo = ind.f(lo)?;
            let fhi = ind.f(hi)?;
            let fm = ind.f(m)?;
            if fm == 0.0 {
                return Ok(MinimumOutcome::Double(m));
            }
            let r1 = illinois(ind, lo, m, flo, fm, opts.tol)?;
            let r2 = illinois(ind, m, hi, fm, fhi, opts.tol)?;
            return Ok(MinimumOutcome::Pair(r1, r2));
        }
        if (x3 - x0) <= 1e-3 * opts.tol.sqrt() * x0.abs().max(1.0) {
            break;
        }
        if f1.abs() < f2.abs() {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - g * (x3 - x0);
            f1 = ind.f(x1)?;
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + g * (x3 - x0);
            f2 = ind.f(x2)?;
        }
    }
    let m = if f1.abs() < f2.abs() { x1 } else { x2 };
    let r = ind.report(m)?;
    let conn = connection(ind.op, ind.a, m)?;
    let b = crate::boundary_algebra::boundary_condition_matrix(ind.u);
    let sv = (b * conn.boundary_columns()).singular_values();
    if sv.max() <= opts.double_root_tol * r.scale {
        return Ok(MinimumOutcome::Double(m));
    }
    Ok(MinimumOutcome::Nothing)
}

fn scan_window(ind: &Indicator, lo: f64, hi: f64, opts: &ScanOptions, depth: usize) -> Result<Vec<Eigenvalue>> {
    let n = opts.cells.max(4);
    let cell = (hi - lo) / n as f64;
    let grid: Vec<f64> = (0..=n).map(|k| lo + cell * k as f64).collect();
    let vals = grid.iter().map(|&x| ind.f(x)).collect::<Result<Vec<f64>>>()?;
    let mut roots: Vec<Eigenvalue> = Vec::new();
    let simple = |lambda| Eigenvalue {
        lambda,
        multiplicity: 1,
    };
    for k in 0..n {
        if vals[k] == 0.0 {
            roots.push(simple(grid[k]));
        } else if vals[k + 1] != 0.0 && (vals[k] > 0.0) != (vals[k + 1] > 0.0) {
            roots.push(simple(illinois(
                ind,
                grid[k],
                grid[k + 1],
                vals[k],
                vals[k + 1],
                opts.tol,
            )?));
        }
    }
    for k in 1..n {
        let (l, m, r) = (vals[k - 1], vals[k], vals[k + 1]);
        let same = (l > 0.0) == (m > 0.0) && (m > 0.0) == (r > 0.0) && l != 0.0 && m != 0.0 && r != 0.0;
        if same && m.abs() < l.abs() && m.abs() <= r.abs() {
            match inspect_minimum(ind, grid[k - 1], grid[k + 1], m, opts)? {
                MinimumOutcome::Pair(r1, r2) => {
                    roots.push(simple(r1));
                    roots.push(simple(r2));
                }
                MinimumOutcome::Double(x) => roots.push(Eigenvalue {
                    lambda: x,
                    multiplicity: 2,
                }),
                MinimumOutcome::Nothing => {}
            }
        }
    }
    roots.sort_by(|p, q| p.lambda.total_cmp(&q.lambda));
    roots.dedup_by(|q, p| (q.lambda - p.lambda).abs() <= 10.0 * opts.tol * p.lambda.abs().max(1.0));
    roots.retain(|r| r.lambda >= lo && r.lambda < hi);

    let mut out: Vec<Eigenvalue> = Vec::new();
    let mut i = 0;
    while i < roots.len() {
        let mut j = i;
        while j + 1 < roots.len() && roots[j + 1].lambda - roots[j].lambda < 2.0 * cell {
            j += 1;
        }
        if j == i {
            out.push(roots[i]);
        } else if depth >= opts.max_refinements {
            return Err(Error::ScanTooCoarse {
                lambda: roots[i].lambda,
            });
        } else {
            let wlo = (roots[i].lambda - cell).max(lo);
            let whi = (roots[j].lambda + cell).min(hi);
            out.extend(scan_window(ind, wlo, whi, opts, depth + 1)?);
        }
        i = j + 1;
    }
    Ok(out)
}

/// Eigenvalues of `L_U` in `[lambda_min, lambda_max)` with multiplicities.
pub fn eigenvalues_scan_with(
    u: &UnitaryMatrix2,
    a: f64,
    lambda_min: f64,
    lambda_max: f64,
    opts: &ScanOptions,
) -> Result<Vec<Eigenvalue>> {
    if !(lambda_min < lambda_max) || !lambda_min.is_finite() || !lambda_max.is_finite() {
        return Err(Error::InvalidInput(format!(
            "empty scan range [{lambda_min}, {lambda_max})"
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let ind = Indicator {
        u,
        phase: SecularPhase::new(u),
        a,
        op: opts.op,
    };
    scan_window(&ind, lambda_min, lambda_max, opts, 0)
}

/// Ascending eigenvalues of the prolate extension `L_U` in `[lambda_min, lambda_max)`,
/// repeated according to multiplicity.
/// Scan window `[-100/a^2, mu_{n+1} + a^2 + 1]`, `mu_k = k(k+1)/a^2`. The negative part
/// holds the at most two negative eigenvalues for moderate `U`; a rank-two change of
/// boundary condition shifts eigenvalue indices by at most two, so the window holds at
/// least `n` eigenvalues of any `L_U`.
pub fn default_window(a: f64, n: usize) -> (f64, f64) {
    let k = (n + 1) as f64;
    (-100.0 / (a * a), k * (k + 1.0) / (a * a) + a * a + 1.0)
}

pub fn eigenvalues_scan(u: &UnitaryMatrix2, a: f64, lambda_min: f64, lambda_max: f64, tol: f64) -> Result<Vec<f64>> {
    let opts = ScanOptions {
        tol,
        ..ScanOptions::default()
    };
    Ok(eigenvalues_scan_with(u, a, lambda_min, lambda_max, &opts)?
        .iter()
        .flat_map(|e| std::iter::repeat_n(e.lambda, e.multiplicity as usize))
        .collect())
}
