use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Full spectrum of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Eigenvalues ascending, eigenvectors orthonormal.
pub fn symmetric_eigensolve(a: &DMatrix<f64>) -> Result<Vec<(f64, DVector<f64>)>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidInput("matrix must be square".into()));
    }
    let scale = a.amax();
    let asymmetry = (a - a.transpose()).amax();
    if asymmetry > 1e-12 * scale {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let mut m = (a + a.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let frob = m.norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)] * m[(p, q)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-16 * frob || frob == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- J^T A J, rotating rows/cols p and q
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut pairs: Vec<(f64, DVector<f64>)> = (0..n).map(|k| (m[(k, k)], v.column(k).into_owned())).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(m: &DMatrix<f64>) -> Vec<f64> {
        symmetric_eigensolve(m).unwrap().into_iter().map(|p| p.0).collect()
    }

    #[test]
    fn trivial_spectra() {
        assert_eq!(values(&DMatrix::identity(3, 3)), vec![1.0, 1.0, 1.0]);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0, 9.0]));
        assert_eq!(values(&d), vec![1.0, 4.0, 9.0]);
        let swap = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let v = values(&swap);
        assert!((v[0] + 1.0).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonsymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(symmetric_eigensolve(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn agrees_with_nalgebra_and_has_small_residuals() {
        let n = 30;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let x = ((i * 7 + j * 13) % 17) as f64 - 8.0 + 1.0 / (1.0 + (i + j) as f64);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        let pairs = symmetric_eigensolve(&m).unwrap();
        let mut reference: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        let norm = m.norm();
        for ((lam, vec), r) in pairs.iter().zip(&reference) {
            assert!((lam - r).abs() < 1e-11 * norm);
            assert!((&m * vec - vec * *lam).norm() <= 1e-10 * norm);
        }
        for i in 0..n {
            for j in 0..n {
                let d = pairs[i].1.dot(&pairs[j].1);
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((d - e).abs() < 1e-12);
            }
        }
    }
}
