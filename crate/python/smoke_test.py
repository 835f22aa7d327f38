#!/usr/bin/env python3
"""Smoke test for the conefix_py extension module.

Builds nothing itself: run `cargo build -p conefix-py` (or --release) first,
then `python3 python/smoke_test.py`. The script copies the freshest built
cdylib next to a temp dir under the import name Python expects.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def import_extension():
    candidates = [
        ROOT / "target" / profile / "libconefix_py.so"
        for profile in ("release", "debug")
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit(
            "libconefix_py.so not found; run `cargo build -p conefix-py` first"
        )
    newest = max(built, key=lambda p: p.stat().st_mtime)
    stage = Path(tempfile.mkdtemp(prefix="conefix_py_"))
    shutil.copy2(newest, stage / "conefix_py.so")
    sys.path.insert(0, str(stage))
    import conefix_py

    return conefix_py


def approx(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    m = import_extension()
    checks = 0

    # delta distance: directed enumeration example.
    assert m.delta([[0.0]], [[1.0], [3.0]], norm="euclidean") == 3.0
    assert m.delta([[1.0, 2.0]], [[1.0, 2.0]]) == 0.0
    print("ok: delta")
    checks += 1

    assert m.membership_residual([2.0], [[0.0], [5.0]], norm="euclidean") == 2.0
    print("ok: membership_residual")
    checks += 1

    cone = m.ConeOrder.orthant(2)
    assert cone.dimension == 2 and cone.is_lattice
    assert cone.leq([1.0, 1.0], [2.0, 3.0])
    assert not cone.leq([1.0, 3.0], [2.0, 2.0])
    assert cone.interval_contains([0.0, 0.0], [1.0, 1.0], [0.5, 0.5])
    assert cone.chain_sup([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]) == [2.0, 2.0]
    lower, analytic, used = cone.estimate_normality(norm="sup", samples=500, seed=1)
    assert analytic == 1.0 and lower <= 1.0 and used > 0
    print("ok: ConeOrder (leq, intervals, chain_sup, normality)")
    checks += 1

    result = m.iterate_increasing(lambda x: [(x[0] + 2.0) / 2.0], [0.0])
    assert result["terminated_by"] == "converged"
    assert approx(result["point"][0], 2.0, 1e-8)
    assert result["above_start"]
    print("ok: iterate_increasing")
    checks += 1

    result = m.iterate_decreasing(lambda x: [2.0 / (1.0 + x[0])], 1)
    assert result["terminated_by"] == "converged"
    assert approx(result["point"][0], 1.0, 1e-9)
    assert result["h1_gap"] <= 1e-10
    print("ok: iterate_decreasing")
    checks += 1

    # A Python exception inside the callable must propagate.
    try:
        m.iterate_decreasing(lambda x: 1 / 0, 1)
    except ZeroDivisionError:
        print("ok: python errors propagate from callables")
        checks += 1
    else:
        sys.exit("expected ZeroDivisionError to propagate")

    report = m.check_h2([1, 0])
    assert report["two_cycles"] == [(0, 1)]
    assert not report["h1_holds"] and not report["h2_holds"] and report["equivalent"]
    print("ok: check_h2")
    checks += 1

    solution = m.solve_integral("separable_unit", grid_size=129)
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    assert solution["terminated_by"] == "converged"
    assert max(abs(v - phi) for v in solution["psi"]) <= 1e-6
    assert max(abs(v - phi) for v in solution["Psi"]) <= 1e-6
    assert solution["analytic_gap"] <= 1e-8
    print("ok: solve_integral (golden ratio)")
    checks += 1

    print(f"SMOKE TEST PASSED ({checks} checks)")


if __name__ == "__main__":
    main()
