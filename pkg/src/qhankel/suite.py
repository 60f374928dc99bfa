"""Self-consistency battery run by ``qhankel selftest``.

Every check is tolerance-based, so pass/fail does not depend on the seed.
The returned report carries the discrepancy ledger alongside the checks.
"""

from __future__ import annotations

import itertools
from typing import Callable

import numpy as np

from . import bounds
from .carath import CarathCoeffs, Degenerate, gs_extract, gs_reconstruct, sample_carath
from .classdef import build_lhs, closed_form_lhs_coeffs, forward_arrays, hankel_arrays, \
    inverse_coeffs
from .ledger import discrepancy_ledger
from .phis import caratheodory, crescent, janowski
from .pseries import TruncatedSeries, comp_inverse, compose, pow_real, sym_q_derivative
from .qkernel import ClassParams, sym_q_number, sym_q_number_sum
from .report import SCHEMA
from .verify import extract_PQR, pi_maximum_check, sup_hankel

__all__ = ["consistency_suite", "CHECKS"]

PHIS = {"caratheodory": caratheodory, "crescent": crescent,
        "janowski:0.5,-0.5": lambda: janowski(0.5, -0.5)}


def _rand_series(rng, order=6, scale=0.5, normalized=False):
    c = (rng.uniform(-scale, scale, order + 1) + 1j * rng.uniform(-scale, scale, order + 1))
    if normalized:
        c[0], c[1] = 0, 1
    return TruncatedSeries(c)


def _max_err(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex))))


def check_series_ring(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(50):
        a, b, c = (_rand_series(rng) for _ in range(3))
        worst = max(worst,
                    _max_err(((a * b) * c).coeffs, (a * (b * c)).coeffs),
                    _max_err((a * (b + c)).coeffs, (a * b + a * c).coeffs),
                    _max_err(((a * b) / b).coeffs, a.coeffs) if abs(b[0]) > 0.2 else 0.0)
    return worst < 1e-10, f"max error {worst:.3e}"


def check_series_power(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(50):
        f = _rand_series(rng, scale=0.3)
        f = TruncatedSeries(np.r_[1.0, f.coeffs[1:]])
        s, t = rng.uniform(-2, 2, 2)
        worst = max(worst,
                    _max_err((pow_real(f, s) * pow_real(f, t)).coeffs, pow_real(f, s + t).coeffs),
                    _max_err(pow_real(f, 2.0).coeffs, (f * f).coeffs))
    return worst < 1e-10, f"max error {worst:.3e}"


def check_series_inverse(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(50):
        f = _rand_series(rng, normalized=True)
        g = comp_inverse(f)
        ident = TruncatedSeries.identity(f.order)
        worst = max(worst, _max_err(compose(f, g).coeffs, ident.coeffs),
                    _max_err(compose(g, f).coeffs, ident.coeffs),
                    _max_err(g.coeffs[2:5], inverse_coeffs(*f.coeffs[2:5])))
    return worst < 1e-10, f"max error {worst:.3e}"


def check_q_derivative(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(20):
        f = _rand_series(rng)
        q = rng.uniform(0.2, 0.95)
        z = 0.3 * np.exp(1j * rng.uniform(0, 2 * np.pi))
        direct = (f(q * z) - f(z / q)) / ((q - 1 / q) * z)
        worst = max(worst, abs(sym_q_derivative(f, q)(z) - direct))
    return worst < 1e-10, f"max error {worst:.3e}"


def check_q_numbers(rng) -> tuple[bool, str]:
    worst = 0.0
    for n, q in itertools.product(range(1, 9), rng.uniform(0.05, 0.999, 10)):
        worst = max(worst, abs(sym_q_number(n, q) - sym_q_number_sum(n, q)) / n)
    limit = max(abs(sym_q_number(n, 1 - 1e-8) - n) for n in range(1, 9))
    return worst < 1e-12 and limit < 1e-6, f"sum/ratio {worst:.3e}, q->1 {limit:.3e}"


def check_lhs_reduced(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(100):
        params = ClassParams(q=rng.uniform(0.1, 0.95), lam=rng.uniform(1, 3))
        a = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
        lhs = build_lhs(TruncatedSeries.from_normalized(a), params)
        cf = closed_form_lhs_coeffs(params, *a, variant="engine")
        worst = max(worst, _max_err(lhs.coeffs[1:4], cf))
    return worst < 1e-9, f"engine variant, max error {worst:.3e}"


def check_lhs_general(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(100):
        params = ClassParams(q=rng.uniform(0.1, 0.95), lam=rng.uniform(1, 3),
                             mu=rng.uniform(0, 1), eta=rng.uniform(0, 2),
                             bernardi=bool(rng.integers(2)))
        a = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
        lhs = build_lhs(TruncatedSeries.from_normalized(a), params)
        worst = max(worst, _max_err(lhs.coeffs[1:3], closed_form_lhs_coeffs(params, *a)))
    return worst < 1e-9, f"max error {worst:.3e}"


def check_inverse_side(rng) -> tuple[bool, str]:
    """LHS built on the inverse series equals the closed form at the inverse coefficients."""
    worst = 0.0
    for _ in range(50):
        params = ClassParams(q=rng.uniform(0.1, 0.95), lam=rng.uniform(1, 3))
        a = rng.uniform(-0.5, 0.5, 3) + 1j * rng.uniform(-0.5, 0.5, 3)
        g = comp_inverse(TruncatedSeries.from_normalized(a))
        lhs = build_lhs(g, params)
        cf = closed_form_lhs_coeffs(params, *inverse_coeffs(*a), variant="engine")
        worst = max(worst, _max_err(lhs.coeffs[1:4], cf))
    return worst < 1e-9, f"max error {worst:.3e}"


def check_gs_roundtrip(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(200):
        p1 = rng.uniform(0, 1.99)
        x = np.sqrt(rng.uniform(0, 0.99)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        s = np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        p2, p3 = gs_reconstruct(p1, x, s)
        got = gs_extract(CarathCoeffs(p1, p2, p3))
        if isinstance(got, Degenerate):
            return False, "unexpected degenerate extraction"
        worst = max(worst, abs(got[0] - x), abs(got[1] - s))
    for _ in range(100):
        k = int(rng.integers(1, 5))
        w = rng.dirichlet(np.ones(k))
        t = rng.uniform(0, 2 * np.pi, k)
        got = gs_extract(_rotate(sample_carath(w, t)))
        if not isinstance(got, Degenerate) and (abs(got[0]) > 1 + 1e-6 or abs(got[1]) > 1 + 1e-6):
            return False, "measure sample left the disk"
    return worst < 1e-9, f"max error {worst:.3e}"


def _rotate(p: CarathCoeffs) -> CarathCoeffs:
    """Rotate ``z`` so that ``p1`` becomes real and nonnegative."""
    u = np.exp(-1j * np.angle(p.p1))
    return CarathCoeffs(abs(p.p1), p.p2 * u ** 2, p.p3 * u ** 3)


def check_two_path_hankel(rng) -> tuple[bool, str]:
    n = 10_000
    worst = 0.0
    for name, lam, q in (("caratheodory", 1.0, 0.9), ("crescent", 2.0, 0.5)):
        phi, params = PHIS[name](), ClassParams(q=q, lam=lam)
        disk = [np.sqrt(rng.uniform(size=n)) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
                for _ in range(4)]
        c1 = rng.uniform(0, 2, n)
        a2, a3, a4 = forward_arrays(phi, params, c1, *disk)
        worst = max(worst, _max_err(a2 * a4 - a3 * a3, hankel_arrays(phi, params, c1, *disk)))
    return worst < 1e-9, f"max error {worst:.3e}"


def check_corollaries(rng) -> tuple[bool, str]:
    worst = 0.0
    for lam, q, eta, bern, name in itertools.product(
            (1.0, 2.0), (0.5, 0.9), (0.0, 1.0), (False, True), PHIS):
        phi = PHIS[name]()
        p1 = ClassParams(q=q, lam=lam, mu=1.0, eta=eta, bernardi=bern)
        p0 = ClassParams(q=q, lam=lam, mu=0.0, eta=eta, bernardi=bern)
        t1, t0 = bounds.thm2_bounds(p1, phi), bounds.thm2_bounds(p0, phi)
        c1, c2 = bounds.corollary1(p1, phi), bounds.corollary2(p0, phi)
        worst = max(worst, abs(c1["a2_bound"] - t1.a2_bound), abs(c1["a3_bound"] - t1.a3_bound),
                    abs(c2["a2_bound"] - t0.a2_bound), abs(c2["a3_bound"] - t0.a3_bound),
                    abs(bounds.corollary5(p1, phi) - bounds.thm3_bound(p1, phi, 1.0)))
        for rho in (-3.0, -0.5, 0.5, 2.0, 5.0):
            worst = max(worst,
                        abs(bounds.corollary3(p1, phi, rho) - bounds.thm3_bound(p1, phi, rho)),
                        abs(bounds.corollary4(p0, phi, rho) - bounds.thm3_bound(p0, phi, rho)))
    return worst < 1e-12, f"max error {worst:.3e}"


def check_q_limit(rng) -> tuple[bool, str]:
    params = ClassParams(q=1 - 1e-8, lam=1.0, eta=1.0, bernardi=True)
    lerr = max(abs(params.L(2) - 2 / 3), abs(params.L(3) - 1 / 2))
    parts = bounds.thm1_parts(1.0, 1 - 1e-8, caratheodory())
    P, Q, R = parts.P, parts.Q, parts.R
    perr = max(abs(P + 3 / 128), abs(Q - 3 / 32), abs(R - 1))
    berr = abs(bounds.thm1_bound(1.0, 1 - 1e-8, caratheodory()) - 35 / 32)
    return max(lerr, perr, berr) < 1e-6, f"L {lerr:.3e}, PQR {perr:.3e}, bound {berr:.3e}"


def check_pqr(rng) -> tuple[bool, str]:
    worst = 0.0
    for lam, q, name in itertools.product((1.0, 1.5, 2.0, 3.0), (0.3, 0.6, 0.9), PHIS):
        phi = PHIS[name]()
        parts = bounds.thm1_parts(lam, q, phi)
        worst = max(worst, _max_err(extract_PQR(lam, q, phi), (parts.P, parts.Q, parts.R)))
    return worst < 1e-9, f"max error {worst:.3e}"


def check_pi_maximum(rng) -> tuple[bool, str]:
    failed = [(lam, q, name) for lam, q, name in itertools.product((1.0, 2.0), (0.5, 0.9), PHIS)
              if not pi_maximum_check(lam, q, PHIS[name](), grid=101)["ok"]]
    return not failed, f"failed configurations: {failed}" if failed else "maximum at (1, 1)"


def check_quad_max(rng) -> tuple[bool, str]:
    t = np.linspace(0, 4, 100_001)
    worst = 0.0
    for P, Q, R in rng.uniform(-2, 2, (200, 3)):
        grid = float(np.max(P * t * t + Q * t + R))
        exact = bounds.quad_max(P, Q, R)
        if exact < grid - 1e-12:
            return False, f"grid exceeds exact maximum at {(P, Q, R)}"
        worst = max(worst, exact - grid)
    return worst < 1e-7, f"max excess over grid {worst:.3e}"


def check_r_witness(rng) -> tuple[bool, str]:
    worst = 0.0
    for lam, q, name in itertools.product((1.0, 2.0), (0.5, 0.9, 0.999), PHIS):
        phi, params = PHIS[name](), ClassParams(q=q, lam=lam)
        val = abs(complex(hankel_arrays(phi, params, 0.0, 1.0, -1.0, 0.0, 0.0)))
        worst = max(worst, abs(val - bounds.thm1_parts(lam, q, phi).R))
    return worst < 1e-12, f"max error {worst:.3e}"


def check_sampling_determinism(rng) -> tuple[bool, str]:
    seed = int(rng.integers(2 ** 31))
    params, phi = ClassParams(q=0.9, lam=1.0), caratheodory()
    runs = [sup_hankel(params, phi, n_samples=20_000, seed=seed, workers=w).to_dict()
            for w in (1, 3)]
    same = runs[0] == runs[1]
    ok = same and runs[0]["violation_count"] == 0
    return ok, f"identical across worker counts: {same}, violations: {runs[0]['violation_count']}"


CHECKS: dict[str, Callable] = {
    "series-ring": check_series_ring,
    "series-power": check_series_power,
    "series-inverse": check_series_inverse,
    "q-derivative": check_q_derivative,
    "q-numbers": check_q_numbers,
    "lhs-reduced-engine": check_lhs_reduced,
    "lhs-general": check_lhs_general,
    "lhs-inverse-side": check_inverse_side,
    "gs-roundtrip": check_gs_roundtrip,
    "two-path-hankel": check_two_path_hankel,
    "corollary-specializations": check_corollaries,
    "q-limit": check_q_limit,
    "pqr-structure": check_pqr,
    "pi-maximum": check_pi_maximum,
    "quad-max": check_quad_max,
    "r-witness": check_r_witness,
    "sampling-determinism": check_sampling_determinism,
}


def consistency_suite(seed: int = 0) -> dict:
    """Run every check with an RNG seeded by ``seed``; never raises on a failed check."""
    results = []
    for i, (name, fn) in enumerate(CHECKS.items()):
        rng = np.random.default_rng([seed, i])
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crashing check is reported, not propagated
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append({"name": name, "ok": bool(ok), "detail": detail})
    ledger = discrepancy_ledger()
    return {"schema": SCHEMA, "seed": seed, "ok": all(r["ok"] for r in results),
            "checks": results, "ledger": ledger}
