"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import itertools
import json
import subprocess
import sys
import time

import numpy as np
import pytest

from qhankel import bounds
from qhankel.classdef import QConstants, build_lhs, closed_form_lhs_coeffs, hankel_expression
from qhankel.carath import GSSample
from qhankel.phis import caratheodory, crescent, janowski
from qhankel.pseries import TruncatedSeries, comp_inverse, compose
from qhankel.qkernel import ClassParams
from qhankel.report import dumps
from qhankel.verify import TOL, extract_PQR, sup_a2_a3, sup_fekete, sup_hankel

PHIS = {"caratheodory": caratheodory, "crescent": crescent}
HANKEL_CONFIGS = list(itertools.product((1.0, 2.0), (0.5, 0.9, 0.999), PHIS))
NEAR_ONE = 0.999


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail
    return emit


def _random_triples(rng, n):
    mag = np.sqrt(rng.uniform(size=(n, 3)))
    return mag * np.exp(2j * np.pi * rng.uniform(size=(n, 3)))


def test_criterion_1_engine_vs_closed_form_expansion(verdict):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst_reduced, worst_cell = 0.0, None
    per_lambda = {}
    for q, lam in itertools.product((0.3, 0.6, 0.9), (1.0, 2.0, 3.0)):
        params = ClassParams(q=q, lam=lam)
        for a in _random_triples(rng, 100):
            lhs = build_lhs(TruncatedSeries.from_normalized(a), params).coeffs[1:4]
            err = np.abs(lhs - closed_form_lhs_coeffs(params, *a, variant="printed"))
            per_lambda[lam] = max(per_lambda.get(lam, 0.0), float(err.max()))
            if err.max() > worst_reduced:
                worst_reduced, worst_cell = float(err.max()), (q, lam, int(np.argmax(err)) + 1)
    worst_general = 0.0
    for q, lam, mu, eta in itertools.product((0.3, 0.6, 0.9), (1.0, 2.0, 3.0), (0.0, 0.5, 1.0),
                                             (0.0, 1.0)):
        params = ClassParams(q=q, lam=lam, mu=mu, eta=eta, bernardi=eta != 0.0)
        for a in _random_triples(rng, 100):
            lhs = build_lhs(TruncatedSeries.from_normalized(a), params).coeffs[1:3]
            worst_general = max(worst_general,
                                float(np.abs(lhs - closed_form_lhs_coeffs(params, *a)[:2]).max()))
    seconds = time.perf_counter() - start
    ok = worst_reduced < 1e-9 and worst_general < 1e-9 and seconds < 5
    by_lam = ", ".join(f"lambda={lam:g}: {e:.1e}" for lam, e in per_lambda.items())
    verdict(1, ok, f"reduced max err {worst_reduced:.3e} (worst q, lambda, power = {worst_cell}; "
                   f"{by_lam}); "
                   f"general max err {worst_general:.3e}; {seconds:.2f}s")


def test_criterion_2_inverse_series(verdict):
    rng = np.random.default_rng(2)
    worst_closed, worst_round = 0.0, 0.0
    for a2, a3, a4 in _random_triples(rng, 100):
        g = comp_inverse(TruncatedSeries.from_normalized([a2, a3, a4]))
        expected = [-a2, 2 * a2 ** 2 - a3, -(5 * a2 ** 3 - 5 * a2 * a3 + a4)]
        worst_closed = max(worst_closed, float(np.abs(g.coeffs[2:5] - expected).max()))
    ident = TruncatedSeries.identity(6).coeffs
    for _ in range(100):
        f = TruncatedSeries.from_normalized(rng.uniform(-1, 1, 5) + 1j * rng.uniform(-1, 1, 5))
        worst_round = max(worst_round,
                          float(np.abs(compose(f, comp_inverse(f)).coeffs - ident).max()))
    ok = worst_closed < 1e-12 and worst_round < 1e-10
    verdict(2, ok, f"closed-form err {worst_closed:.3e}, roundtrip err {worst_round:.3e}")


def test_criterion_3_pqr_oracle(verdict):
    phis = {"caratheodory": caratheodory(), "crescent": crescent(),
            "janowski": janowski(0.5, -0.5)}
    worst = 0.0
    for lam, q, name in itertools.product((1.0, 1.5, 2.0, 3.0), (0.3, 0.6, 0.9), phis):
        parts = bounds.thm1_parts(lam, q, phis[name])
        worst = max(worst, float(np.max(np.abs(
            np.subtract(extract_PQR(lam, q, phis[name]), (parts.P, parts.Q, parts.R))))))
    anchor = bounds.thm1_parts(1.0, NEAR_ONE, caratheodory())
    pqr_err = max(abs(anchor.P + 3 / 128), abs(anchor.Q - 3 / 32), abs(anchor.R - 1))
    oracle = extract_PQR(1.0, NEAR_ONE, caratheodory())
    oracle_err = max(abs(oracle[0] + 3 / 128), abs(oracle[1] - 3 / 32), abs(oracle[2] - 1))
    bound_err = abs(bounds.thm1_bound(1.0, NEAR_ONE, caratheodory()) - 35 / 32)
    ok = worst < 1e-9 and pqr_err < 1e-3 and oracle_err < 1e-3 and bound_err < 1e-3
    verdict(3, ok, f"grid err {worst:.3e}; anchor PQR err {pqr_err:.3e}, oracle {oracle_err:.3e}, "
                   f"bound err {bound_err:.3e}")


def _hankel_runs(workers):
    out = []
    for seed, (lam, q, name) in enumerate(HANKEL_CONFIGS):
        start = time.perf_counter()
        rep = sup_hankel(ClassParams(q=q, lam=lam), PHIS[name](), n_samples=100_000, seed=seed,
                         workers=workers)
        out.append((rep, time.perf_counter() - start))
    return out


@pytest.fixture(scope="module")
def hankel_runs():
    return _hankel_runs(workers=1)


def test_criterion_4_hankel_bound_on_relaxation(verdict, hankel_runs):
    bad = []
    for (lam, q, name), (rep, seconds) in zip(HANKEL_CONFIGS, hankel_runs):
        bound = bounds.thm1_bound(lam, q, PHIS[name]())
        if rep.sampled_sup > bound + TOL or rep.violation_count or seconds >= 30:
            links = {v.get("failed_link") for v in rep.violations}
            bad.append((lam, q, name, rep.sampled_sup, bound, sorted(map(str, links)), seconds))
    slowest = max(s for _, s in hankel_runs)
    min_gap = min(rep.gap for rep, _ in hankel_runs)
    verdict(4, not bad, f"12 configurations, min gap {min_gap:.3e}, slowest {slowest:.2f}s"
                        + (f", violations {bad}" if bad else ""))


def test_criterion_5_witness_of_r(verdict):
    worst = 0.0
    for lam, q, name in HANKEL_CONFIGS:
        phi, params = PHIS[name](), ClassParams(q=q, lam=lam)
        k = QConstants.of(params)
        value = abs(hankel_expression(phi, params, GSSample(0.0, 1.0, -1.0, 0.0, 0.0)))
        worst = max(worst, abs(value - phi.E1 ** 2 / k.D3 ** 2),
                    abs(value - bounds.thm1_parts(lam, q, phi).R))
    verdict(5, worst < 1e-12, f"max |H(witness)| - R = {worst:.3e}")


def test_criterion_6_coefficient_and_fekete_entries(verdict):
    bad = []
    for seed, (lam, q, name) in enumerate(HANKEL_CONFIGS):
        params, phi = ClassParams(q=q, lam=lam), PHIS[name]()
        reports = sup_a2_a3(params, phi, n_samples=100_000, seed=seed)
        reports += [sup_fekete(params, phi, rho, n_samples=100_000, seed=seed)
                    for rho in (-3.0, 0.0, 0.5, 1.0, 2.0, 5.0)]
        bad += [(lam, q, name, r.config["entry"], r.config.get("rho"), r.sampled_sup,
                 r.closed_form) for r in reports if r.sampled_sup > r.closed_form + TOL]
    cb = bounds.thm2_bounds(ClassParams(q=NEAR_ONE, lam=1.0), caratheodory())
    entries = list(cb.a2_entries.values())
    spread = max(entries) - min(entries)
    anchor_ok = abs(cb.a2_bound - 1) < 1e-3 and len(entries) == 3 and spread < 1e-3
    verdict(6, not bad and anchor_ok,
            f"a2 anchor {cb.a2_bound:.6f}, entry spread {spread:.3e}"
            + (f", exceedances {bad}" if bad else ", all entries within bounds"))


def test_criterion_7_specialization_identities(verdict):
    worst = 0.0
    for lam, q, eta, bern, name in itertools.product((1.0, 2.0, 3.0), (0.3, 0.6, 0.9),
                                                     (0.0, 1.0), (False, True), PHIS):
        phi = PHIS[name]()
        p1 = ClassParams(q=q, lam=lam, mu=1.0, eta=eta, bernardi=bern)
        p0 = ClassParams(q=q, lam=lam, mu=0.0, eta=eta, bernardi=bern)
        t1, t0 = bounds.thm2_bounds(p1, phi), bounds.thm2_bounds(p0, phi)
        c1, c2 = bounds.corollary1(p1, phi), bounds.corollary2(p0, phi)
        worst = max(worst, abs(c1["a2_bound"] - t1.a2_bound), abs(c1["a3_bound"] - t1.a3_bound),
                    abs(c2["a2_bound"] - t0.a2_bound), abs(c2["a3_bound"] - t0.a3_bound),
                    abs(bounds.corollary5(p1, phi) - bounds.thm3_bound(p1, phi, 1.0)))
        for rho in (-3.0, -1.0, 0.0, 0.5, 2.0, 4.0):
            worst = max(worst,
                        abs(bounds.corollary3(p1, phi, rho) - bounds.thm3_bound(p1, phi, rho)))
    from qhankel.ledger import discrepancy_ledger
    upsilon = [e for e in discrepancy_ledger() if e["id"] == "corollary4-upsilon"]
    has_delta = bool(upsilon) and upsilon[0]["delta"] not in (None, 0)
    verdict(7, worst < 1e-12 and has_delta,
            f"max identity err {worst:.3e}; Upsilon ledger delta "
            f"{upsilon[0]['delta'] if upsilon else None}")


def test_criterion_8_ledger_completeness(verdict):
    proc = subprocess.run([sys.executable, "-m", "qhankel.cli", "selftest"], capture_output=True,
                          text=True)
    ledger = json.loads(proc.stdout)["ledger"] if proc.stdout else []
    by_id = {}
    for e in ledger:
        by_id.setdefault(e["id"], e)
    needed = ["hankel-statement-P", "hankel-statement-Q", "hankel-statement-first-case",
              "hankel-case-table-third-case", "fekete-second-branch-power"]
    missing = [n for n in needed if n not in by_id or by_id[n]["recomputed"] is None]
    ok = proc.returncode == 0 and not missing
    verdict(8, ok, f"exit {proc.returncode}, {len(ledger)} ledger entries, missing {missing}")


def test_criterion_9_determinism_across_workers(verdict, hankel_runs):
    many = _hankel_runs(workers=4)
    same = [dumps(a) == dumps(b) for (a, _), (b, _) in zip(hankel_runs, many)]
    verdict(9, all(same), f"{sum(same)}/12 reports byte-identical with 1 vs 4 workers")
