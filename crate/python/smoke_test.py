"""Smoke test for the `prolate` Python module.

Build and install first:  pip install --no-build-isolation ./crates/python
"""

import cmath
import math

import prolate

try:
    from scipy.special import pro_cv
except ImportError:  # scipy is optional
    pro_cv = None


def close(x, y, tol):
    return abs(x - y) <= tol * max(1.0, abs(y))


def check_pswf():
    for a in (0.5, 1.0, 2.0):
        modes = prolate.pswf(a, 5)
        lams = [m.eigenvalue for m in modes]
        assert all(y > x for x, y in zip(lams, lams[1:])), lams
        assert lams[0] > 0
        if pro_cv is not None:
            # t = a u turns L into the classical prolate operator with c = a^2
            for n, lam in enumerate(lams):
                assert close(lam, pro_cv(0, n, a * a) / (a * a), 1e-10), (a, n, lam)
    # time-frequency concentration for c = 4 (Slepian's tables, 5 digits)
    table = [0.99589, 0.91211, 0.51905, 0.11021]
    for m, mu in zip(prolate.pswf(2.0, 4), table):
        gamma, res = m.fourier_eigenvalue()
        assert res < 1e-8
        assert abs(abs(gamma) ** 2 - mu) < 1e-5, (m.index, abs(gamma) ** 2)
    chi = prolate.pswf(1.0, 1)[0]
    n = 2000
    h = 2.0 / n
    vals = chi([-1.0 + h * (k + 0.5) for k in range(n)])
    assert close(h * sum(v * v for v in vals), 1.0, 1e-6)


def check_unitary():
    u = prolate.UnitaryMatrix.parse("swap")
    assert u.self_orthogonality_residual() < 1e-12
    assert len(u.boundary_condition_matrix()) == 2
    assert len(u.admissible_boundary_values()) == 2
    try:
        prolate.UnitaryMatrix.parse("1,0,0,0,1,1,0,0")
    except prolate.ValidationError as e:
        assert "NotUnitary" in str(e)
    else:
        raise AssertionError("non-unitary matrix accepted")
    assert isinstance(prolate.ValidationError("x"), ValueError)
    r = prolate.UnitaryMatrix.random(7)
    e = r.entries()
    assert abs(abs(e[0]) ** 2 + abs(e[1]) ** 2 - 1) < 1e-12


def check_extensions():
    a = 1.0
    ident = prolate.eigenvalues(prolate.UnitaryMatrix.identity(), a, n_modes=5)
    for (lam, mult), m in zip(ident, prolate.pswf(a, 5)):
        assert mult == 1 and close(lam, m.eigenvalue, 1e-9)
    neg = prolate.eigenvalues(prolate.UnitaryMatrix.neg_identity(), a, n_modes=3)
    assert neg[0][0] < 0
    u = prolate.UnitaryMatrix.random(3)
    lams = prolate.eigenvalues(u, a, lambda_min=-100.0, lambda_max=0.0)
    assert sum(m for _, m in lams) <= 2
    d = prolate.secular_determinant(u, a, 1.234)
    assert d["imaginary_residue"] < 1e-10 * d["scale"]
    t = prolate.connection(a, 2.0)
    assert abs(t[0][0] * t[1][1] - t[0][1] * t[1][0] + 1) < 1e-9
    lam = neg[0][0]
    (f,) = prolate.eigenfunctions(prolate.UnitaryMatrix.neg_identity(), a, lam, [-0.5, 0.5])
    assert abs(f[0] - f[1]) < 1e-8  # symmetric boundary condition, even ground state


def check_boundary_values():
    a = 1.5
    n = 3000
    ts = [-a + 2 * a * k / n for k in range(1, n)]
    xs = [complex(math.log(a + t) + 2 * math.log(a - t) + 3) for t in ts]
    bv = prolate.boundary_values(ts, xs, a)
    l = math.log(2 * a)
    assert abs(bv["b_minus"] - 1) < 1e-7
    assert abs(bv["b_plus"] - 2) < 1e-7
    assert abs(bv["c_minus"] + 3 + 2 * l) < 1e-7
    assert abs(bv["c_plus"] + 3 + l) < 1e-7


def check_commutator():
    a = 1.0
    assert close(prolate.fourier_commutator_constant(a), 2 / a / math.sqrt(2 * math.pi), 1e-15)
    w = prolate.witness(prolate.UnitaryMatrix.neg_identity(), a)
    assert w["case"] == "commutator"
    bmax = max(abs(w["boundary_values"]["b_minus"]), abs(w["boundary_values"]["b_plus"]))
    assert w["residual_norm"] >= 0.1 * (2 / a) * bmax
    try:
        prolate.witness(prolate.UnitaryMatrix.identity(), a)
    except prolate.ValidationError:
        pass
    else:
        raise AssertionError("identity produced a witness")
    assert not cmath.isnan(w["residual_norm"])


if __name__ == "__main__":
    for check in (check_pswf, check_unitary, check_extensions, check_boundary_values, check_commutator):
        check()
        print(f"ok {check.__name__}")
    print("smoke test passed")
