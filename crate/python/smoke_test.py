#!/usr/bin/env python3
"""Smoke test for the bohr_szego extension module.

Build the module first:

    cargo build -p bohr-szego-py --release

then run

    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def import_module():
    candidates = [
        ROOT / "target" / "release" / "libbohr_szego.so",
        ROOT / "target" / "debug" / "libbohr_szego.so",
        ROOT / "target" / "release" / "bohr_szego.so",
    ]
    src = next((p for p in candidates if p.exists()), None)
    if src is None:
        sys.exit("build the extension first: cargo build -p bohr-szego-py --release")
    stage = Path(tempfile.mkdtemp(prefix="bohr_szego_py_"))
    shutil.copy(src, stage / "bohr_szego.so")
    sys.path.insert(0, str(stage))
    import bohr_szego

    return bohr_szego


def close(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def main():
    bs = import_module()

    # prime factorization multi-indices
    assert bs.factorize(12) == [(1, 2), (2, 1)]
    assert bs.factorize(1) == []
    assert bs.index_of([(25, 1)]) == 97
    assert bs.prime(25) == 97
    for n in (1, 2, 360, 9973, 123456):
        assert bs.index_of(bs.factorize(n)) == n

    # lift / unlift round trip
    f = bs.DirichletSeries({1: 1.0, 2: -2.0, 6: 3.0})
    F = f.lift()
    assert len(F) == 3
    assert F.unlift() == f

    # multiplicativity of the lift
    g = bs.DirichletSeries({2: 1.0 + 1.0j, 9: -0.5})
    assert f.multiply(g).lift() == F * g.lift()

    # metrics: Parseval and the d0 value of 1 + z1
    one_plus_z = bs.LiftedPolynomial([([], 1.0), ([(1, 1)], 1.0)])
    close(one_plus_z.metric_p(2.0), math.sqrt(2.0), 1e-12)
    close(one_plus_z.metric_p(4.0), 6.0 ** 0.25, 1e-12)
    prof = one_plus_z.d0_profile([0.0, 0.5, 1.0])
    close(prof[0], math.log(2.0), 1e-12)
    assert prof[0] < prof[1] < prof[2]

    # outer criterion
    outer = bs.LiftedPolynomial([([], 1.0), ([(1, 1)], -0.5)]).outer_gap()
    assert outer["outer"] and abs(outer["gamma"]) < 1e-10
    inner = bs.LiftedPolynomial([([(1, 1)], 1.0), ([], -0.5)]).outer_gap()
    assert not inner["outer"]
    close(inner["gamma"], math.log(2.0), 1e-8)

    # Jensen gap at the origin for the non-outer example
    gap = bs.LiftedPolynomial([([(1, 1)], 1.0), ([], -0.5)]).jensen_gap([0j])
    close(gap, math.log(2.0), 1e-8)

    # Szego: K = |1 - z/2|^2 at d = 1 has value 1.05 by hand
    h = bs.LiftedPolynomial([([], 1.0), ([(1, 1)], -0.5)])
    r = bs.szego_modulus(h, 2.0, 2.0, 1, 1)
    close(r["S"], 1.05, 1e-12)
    close(r["lower"], 1.0, 1e-12)
    close(r["upper"], 1.25, 1e-12)

    # Szego: K = 1 + cos(t1 - t2) sits at the upper endpoint with lower 1/2
    r = bs.szego_table(
        [([], 1.0), ([(1, 1), (2, -1)], 0.5), ([(1, -1), (2, 1)], 0.5)],
        2.0,
        2,
        4,
    )
    close(r["S"], 1.0, 1e-10)
    close(r["lower"], 0.5, 1e-6)

    # ergodic average approaches the torus integral
    stages, value = bs.DirichletSeries({1: 1.0, 2: 1.0}).line_average(t_max=4096.0)
    torus = one_plus_z.metric_d0()
    assert abs(value - torus) < 1e-2

    # l1 factorization verifies
    a = [0.5 ** n for n in range(1, 2001)]
    b, c, breaks, ok = bs.factorize_l1(a)
    assert ok and len(breaks) >= 5
    assert max(abs(x * y - v) for x, y, v in zip(b, c, a)) < 1e-18

    print("smoke test passed")


if __name__ == "__main__":
    main()
