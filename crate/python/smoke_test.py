"""Smoke test for the rellich_py extension.

Build and install with `maturin develop -m crates/py/Cargo.toml`, or copy
`target/<profile>/librellich_py.so` to `rellich_py.so` on `PYTHONPATH`.
"""

import math

import rellich_py as r


def close(a, b, rel):
    return abs(a / b - 1.0) <= rel


def main():
    classical = r.Params(5, 2.0, 0.0)
    est = r.best_constant(classical)
    assert est.kind == "exact" and est.value == 1.25, est
    assert r.rellich_validity(classical).holds

    failing = r.Params(3, 1.5, 0.0)
    v = r.rellich_validity(failing)
    assert not v.holds and v.violating_modes[0][0] == 0, v.violating_modes

    assert r.lambda_n(3, 2) == 6.0
    assert r.omega_p(3, 2.0) == -0.75
    assert r.Params(4, "inf", 0.5).p == math.inf
    g = r.gamma_p(r.Params(3, 3.0, 0.4, c=0.3 + 0.9j))
    assert isinstance(g, complex)

    distance, argmin = r.spectrum_distance(classical, 0j)
    assert abs(distance - 1.25) < 1e-9 and argmin == 0

    scan = r.rellich_scan(r.Params(4, 2.0, 0.0, b=-4.0), n=0)
    assert close(scan.empirical_inf_power, 12.0, 0.03), scan.empirical_inf_power
    assert scan.verdict == "SatisfiesBound"

    q = r.plateau_quotient(r.Params(5, 3.0, 0.0), -1.0, 1.0, 0.5)
    assert q.quotient >= q.predicted.lower

    w = r.witness_quotient(classical, log_k=50.0)
    assert close(w.quotient, 1.25, 0.01), w.quotient

    h = r.hardy_quotient(3, 2.0, 0.0, eps=0.01, m=64.0)
    assert abs(h - 0.25) < 0.01, h

    checks = r.run_suite("constants")
    assert checks and all(c.passed for c in checks)

    try:
        r.Params(3, 0.5, 0.0)
    except ValueError:
        pass
    else:
        raise AssertionError("exponent below one accepted")

    print(f"smoke test passed ({len(checks)} suite checks)")


if __name__ == "__main__":
    main()
