/// `(P_k(s), P_k'(s))` by the three-term recurrence.
///
/// The derivative uses `P'_{k+1} = P'_{k-1} + (2k+1) P_k`, which stays exact at `s = ±1`.
pub fn legendre_eval(k: usize, s: f64) -> (f64, f64) {
    if k == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, s);
    let (mut d_prev, mut d) = (0.0, 1.0);
    for j in 1..k {
        let jf = j as f64;
        let p_next = ((2.0 * jf + 1.0) * s * p - jf * p_prev) / (jf + 1.0);
        let d_next = d_prev + (2.0 * jf + 1.0) * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

/// Values and `t`-derivatives of `v_k(t) = sqrt((2k+1)/(2a)) P_k(t/a)` for `k < n`.
pub fn orthonormal_basis(n: usize, t: f64, a: f64) -> (Vec<f64>, Vec<f64>) {
    let s = t / a;
    let mut vals = Vec::with_capacity(n);
    let mut ders = Vec::with_capacity(n);
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for k in 0..n {
        let kf = k as f64;
        let norm = ((2.0 * kf + 1.0) / (2.0 * a)).sqrt();
        vals.push(norm * p);
        ders.push(norm * d / a);
        let p_next = ((2.0 * kf + 1.0) * s * p - kf * p_prev) / (kf + 1.0);
        let d_next = d_prev + (2.0 * kf + 1.0) * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (vals, ders)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_values() {
        assert_eq!(legendre_eval(0, 0.3), (1.0, 0.0));
        assert_eq!(legendre_eval(1, 0.3), (0.3, 1.0));
        for k in 0..12 {
            assert!((legendre_eval(k, 1.0).0 - 1.0).abs() < 1e-14);
            let dk = (k * (k + 1)) as f64 / 2.0;
            assert!((legendre_eval(k, 1.0).1 - dk).abs() < 1e-12);
        }
        let (p3, d3) = legendre_eval(3, 0.5);
        assert!((p3 + 0.4375).abs() < 1e-15);
        assert!((d3 - (15.0 * 0.25 - 3.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn basis_matches_scalar_evaluation() {
        let a = 1.7;
        let t = -0.4;
        let (v, d) = orthonormal_basis(9, t, a);
        for k in 0..9 {
            let (p, dp) = legendre_eval(k, t / a);
            let norm = ((2 * k + 1) as f64 / (2.0 * a)).sqrt();
            assert!((v[k] - norm * p).abs() < 1e-14);
            assert!((d[k] - norm * dp / a).abs() < 1e-13);
        }
    }
}
