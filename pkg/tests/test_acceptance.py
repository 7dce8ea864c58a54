"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from rotbeta.algebra import NumberField
from rotbeta.bounds import ergodic_bounds
from rotbeta.discontinuity import intercept_closure, nonsofic_growth_check, nonsofic_witness
from rotbeta.model import build_model, digit_set, expand, reconstruct, step_float
from rotbeta.partition import build_arrangement, euler_count
from rotbeta.simulate import (
    detect_components,
    face_occupancy,
    four_f,
    four_g,
    iid_samples,
    nonergode_model,
    nonergodic_region_check,
    run_ensemble,
    support_fraction,
    verify_set_equation,
)
from rotbeta.sofic import build_sofic, is_primitive, stationary_density

from conftest import example
from tables import FIVEFOLD, THREEFOLD, isomorphic_to_table


@pytest.fixture
def report(capsys):
    def emit(criterion, checks):
        ok = all(v for _, v in checks)
        detail = "; ".join(f"{name}={'ok' if v else 'FAIL'}" for name, v in checks)
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        bad = [name for name, v in checks if not v]
        assert not bad, f"criterion {criterion} failed: {bad}"

    return emit


def _exact(raw):
    # raw mpf tuple (sign, mantissa, exponent, bitcount), independent of the working precision
    sgn, man, exp, _ = raw
    return (-1) ** sgn * Fraction(man) * Fraction(2) ** exp


def _encloses(interval, value, tol):
    """``interval`` contains the rational ``value`` and has radius at most ``tol``."""
    lo, hi = (_exact(r) for r in interval._mpi_)
    return lo <= value <= hi and hi - lo <= 2 * tol


def test_criterion_1_bounds(report):
    t0 = time.perf_counter()
    three = ergodic_bounds(example("threefold"))
    t_three = time.perf_counter() - t0
    t0 = time.perf_counter()
    seven = ergodic_bounds(example("sevenfold"))
    t_seven = time.perf_counter() - t0
    s = seven.summary()
    print(f"threefold B2 = {three.B2}; sevenfold B1 = {s['B1']:.6f}, B2 = {s['B2']:.6f}")
    report(1, [
        ("threefold B2 = 7/3 to 1e-9", _encloses(three.B2, Fraction(7, 3), Fraction(1, 10**9))),
        ("threefold beta > B2", three.beta_gt_B2 is True),
        ("sevenfold B1 = 2.00272 +- 1e-4", abs(s["B1"] - 2.00272) <= 1e-4),
        ("sevenfold B2 = 2.41964 +- 1e-4", abs(s["B2"] - 2.41964) <= 1e-4),
        ("runtime < 1 s each", t_three < 1 and t_seven < 1),
    ])


def test_criterion_2_sofic_graphs(report):
    checks = []
    for name, table, faces in (("threefold", THREEFOLD, 12), ("fivefold", FIVEFOLD, 40)):
        params = example(name)
        t0 = time.perf_counter()
        _, arr, g = build_sofic(params)
        dt = time.perf_counter() - t0
        print(f"{name}: {len(arr.faces)} faces, {len(g.edges)} edges, {dt:.2f} s")
        checks += [
            (f"{name} faces = {faces}", len(arr.faces) == faces),
            (f"{name} transitions match the table", isomorphic_to_table(g, table)),
            (f"{name} primitive", is_primitive(g)),
            (f"{name} runtime < 60 s", dt < 60),
        ]
    five = example("fivefold")
    checks.append(("fivefold alphabet has 6 digits", len(digit_set(five)) == 6))
    report(2, checks)


def test_criterion_3_sevenfold(report):
    params = example("sevenfold")
    t0 = time.perf_counter()
    closure, arr, g = build_sofic(params)
    dt = time.perf_counter() - t0
    prim = is_primitive(g)
    print(f"sevenfold: {len(closure.segments)} segments, {len(arr.faces)} faces, "
          f"primitive={prim}, {dt:.1f} s")
    report(3, [
        ("224 segments", len(closure.segments) == 224),
        ("3292 faces", len(arr.faces) == 3292),
        ("primitive", prim),
        ("runtime < 10 min", dt < 600),
    ])


def test_criterion_4_nonsofic(report):
    t0 = time.perf_counter()
    checks = []
    for b in (3, 4, 5):
        cert = nonsofic_witness(b)
        d = cert.data
        print(f"beta = {b}: |sigma(C1)| = {d['lhs']} ({d['lhs_float']:.6f}) vs "
              f"{d['rhs']} ({d['rhs_float']:.6f}): {cert.status}")
        checks.append((f"beta={b} exact inequality", d["lhs"] > d["rhs"]))
        checks.append((f"beta={b} diverges", cert.status == "diverges"))
    # below the threshold: a rational and a quadratic beta (sqrt 5 not in Q(sqrt 2))
    K2 = NumberField([1, 0, -2], name="r", approx=1.414)
    for label, b in (("29/10", Fraction(29, 10)), ("1+sqrt2", K2.gen + 1)):
        cert = nonsofic_witness(b)
        d = cert.data
        print(f"beta = {label}: lhs = {d['lhs_float']:.6f}, rhs = {d['rhs_float']:.6f}: {cert.status}")
        checks.append((f"beta={label} inconclusive", cert.status == "inconclusive"))
        checks.append((f"beta={label} both sides reported", "lhs_float" in d and "rhs_float" in d))
    dt = time.perf_counter() - t0
    checks.append(("runtime < 1 s", dt < 1))
    # the divergence mechanism itself, over the fivefold lattice with beta = 3
    E = NumberField([1, -1, -1], name="omega", approx=1.618)
    m = build_model(E, 5, "3", "1", "zeta", xi="0", trace="omega - 1")
    mins, ok = nonsofic_growth_check(m, steps=8)
    print("beta = 3 growth of min |sigma(C)|:", [round(float(x), 3) for x in mins])
    checks.append(("beta=3 growth check", all(ok)))
    report(4, checks)


def test_criterion_5_intercept_bounds(report):
    t0 = time.perf_counter()
    checks = []
    for name in ("threefold", "fivefold"):
        params = example(name)
        cert = intercept_closure(params)
        b = cert.bounds
        worst = 0.0
        conj_ok = True
        real_ok = True
        for line in cert.intercepts:
            mods = line.C.conjugate_moduli()
            for m, bound in zip(mods, b["conjugate"]):
                conj_ok &= m <= bound
                worst = max(worst, m / bound)
            real_ok &= abs(line.C) <= b["real"]
        print(f"{name}: {cert.count} intercepts, max |sigma(C)|/bound = {worst:.4f}, "
              f"pruned = {cert.data['pruned']}")
        checks += [
            (f"{name} finite", cert.status == "finite"),
            (f"{name} nothing pruned", cert.data["pruned"] == 0),
            (f"{name} conjugate bound", conj_ok),
            (f"{name} real bound", real_ok),
        ]
    checks.append(("runtime < 30 s", time.perf_counter() - t0 < 30))
    report(5, checks)


def test_criterion_6_acim_density(report):
    params = example("fivefold")
    t0 = time.perf_counter()
    _, arr, g = build_sofic(params)
    h, res, _ = stationary_density(g, params.beta)
    areas = np.array([float(a) for a in g.areas])
    p = h * areas
    n = 10_000_000
    counts, lost = face_occupancy(arr, iid_samples(params, n, 60, rng_seed=0))
    m = counts.sum()
    sigma = np.sqrt(m * p * (1 - p))
    z = np.abs(counts - m * p) / sigma
    dt = time.perf_counter() - t0
    print(f"fivefold: residual {res:.2e}, min density {h.min():.4f}, max |z| {z.max():.3f} "
          f"over {len(p)} faces, {lost} unlocated points, {dt:.1f} s")
    report(6, [
        ("residual <= 1e-12", res <= 1e-12),
        ("density positive", bool((h > 0).all())),
        ("occupancy within 3 sigma", bool((z <= 3).all())),
        ("runtime < 2 min", dt < 120),
    ])


def test_criterion_7_nonergode(report):
    t0 = time.perf_counter()
    rep = verify_set_equation("1039/1000", "292/100")
    region, lo, hi = nonergodic_region_check("1039/1000", "292/100")
    params = nonergode_model()
    ens = run_ensemble(params, seeds=64, burn_in=1000, n=20_000, rng_seed=0, grid=64)
    comp = detect_components(ens)
    dt = time.perf_counter() - t0
    print(f"set equation {rep['set_equation']}, region [{float(lo):.5f}, {float(hi):.5f}], "
          f"components {comp.count}, {dt:.1f} s")
    report(7, [
        ("E u F = T(E) u T^3(F)", rep["set_equation"] is True),
        ("region check", region),
        ("two components from 64 seeds", comp.count == 2 and not comp.inconclusive),
        ("runtime < 2 min", dt < 120),
    ])


def test_criterion_8_four(report):
    rng = np.random.default_rng(0)
    beta = 1.3
    x = -rng.random(10_000)
    ident = float(np.max(np.abs(four_g(beta * x, beta) - beta * four_f(x, beta))))
    # T^2 separates: two float steps of the model equal (f(Re z), g(Im z))
    m = example("four")
    b = m.beta_f
    xs, ys = rng.random(10_000), rng.random(10_000)
    nx, ny = xs, ys
    for _ in range(2):
        nx, ny, _, _ = step_float(nx, ny, m)
    z = np.array([m.to_complex(q) for q in zip(xs, ys)])
    t2 = np.array([m.to_complex(q) for q in zip(nx, ny)])
    sep = float(np.max(np.abs(t2.real - four_f(z.real, b)) + np.abs(t2.imag - four_g(z.imag, b))))
    lo, _ = support_fraction(1.2)
    hi, _ = support_fraction(1.35)
    print(f"|g(bx) - b f(x)| max {ident:.2e}; T^2 separation error {sep:.2e}; "
          f"support fraction beta=1.2: {lo:.3f}, beta=1.35: {hi:.3f} (threshold {math.sqrt((1 + 5 ** 0.5) / 2):.4f})")
    report(8, [
        ("g(beta x) = beta f(x) to 1e-12", ident <= 1e-12),
        ("T^2 separation", sep <= 1e-9),
        ("support difference across the threshold", lo < 0.9 and hi > 0.99),
    ])


def test_criterion_9_properties(report):
    t0 = time.perf_counter()
    checks = []
    K = NumberField([1, -2, -1, 1], name="b", approx=1.8)
    rng = np.random.default_rng(9)

    def rand():
        return K.from_coeffs([Fraction(int(c), int(rng.integers(1, 9))) for c in rng.integers(-20, 21, 3)])

    axioms = True
    for _ in range(10_000):
        x, y, z = rand(), rand(), rand()
        axioms &= (x + y) + z == x + (y + z) and (x * y) * z == x * (y * z) and x * (y + z) == x * y + x * z
    checks.append(("ring axioms on 1e4 triples", axioms))

    floor_ok = True
    for _ in range(500):
        x = rand()
        f = x.floor()
        floor_ok &= f <= x < f + 1
    checks.append(("floor brackets", floor_ok))

    euler_ok = True
    shuffle_ok = True
    for name in ("threefold", "fivefold"):
        closure, arr, _ = build_sofic(example(name))
        euler_ok &= arr.euler() == 2 and euler_count(arr) == len(arr.faces)
        segs = [(s.p, s.q) for s in closure.segments + closure.boundary]
        random.Random(1).shuffle(segs)
        again = build_arrangement(segs)
        shuffle_ok &= [(f.vertices, f.rep) for f in again.faces] == [(f.vertices, f.rep) for f in arr.faces]
    checks.append(("Euler formula", euler_ok))
    checks.append(("determinism under shuffling", shuffle_ok))

    trip = True
    for name in ("threefold", "fivefold"):
        params = example(name)
        for a, c in rng.integers(0, 10**6, size=(100, 2)):
            p = (Fraction(int(a), 10**6), Fraction(int(c), 10**6))
            ds = expand(p, 40, params)
            centre, r = reconstruct(ds, params)
            trip &= abs(params.to_complex(p) - centre) <= r + 1e-14
            trip &= r <= params.diameter() * params.beta_f ** -40
    checks.append(("expand/reconstruct round trip", trip))
    dt = time.perf_counter() - t0
    print(f"property checks in {dt:.1f} s")
    checks.append(("runtime < 5 min", dt < 300))
    report(9, checks)
