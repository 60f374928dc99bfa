"""Supremum estimation over the parameter box and proof-chain checks.

Sampling is counter based: the box is cut into fixed blocks of
``BLOCK_SIZE`` samples and block ``b`` draws from a Philox generator keyed by
``(seed, b)``. Results therefore depend only on ``(seed, n_samples)``, never
on how many workers evaluate the blocks; the running maximum is reduced with
ties broken by the lower sample index.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bounds
from .carath import GSSample, gs_reconstruct
from .classdef import QConstants, forward_arrays, hankel_arrays
from .errors import DomainError, StructureViolationError
from .phis import PhiSpec
from .qkernel import ClassParams

__all__ = [
    "BLOCK_SIZE",
    "TOL",
    "BoundReport",
    "block_rng",
    "sup_hankel",
    "sup_fekete",
    "sup_a2_a3",
    "hankel_chain",
    "f_terms",
    "pi_value",
    "extract_PQR",
    "pi_maximum_check",
]

BLOCK_SIZE = 8192
TOL = 1e-9
MAX_STORED_VIOLATIONS = 20

# coordinate layouts: c1 then (re, im) pairs of the disk parameters
HANKEL_DIMS = 9   # c1, x, y, sigma, tau
SECOND_DIMS = 5   # c1, x, y


@dataclass
class BoundReport:
    config: dict
    closed_form: float
    sampled_sup: float
    argmax: dict
    n_samples: int
    seed: int
    violations: list = field(default_factory=list)
    violation_count: int = 0
    variant_deltas: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        return self.closed_form - self.sampled_sup

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "config": self.config,
            "closed_form": self.closed_form,
            "sampled_sup": self.sampled_sup,
            "gap": self.gap,
            "argmax": self.argmax,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "violation_count": self.violation_count,
            "violations": self.violations,
            "variant_deltas": [list(v) for v in self.variant_deltas],
            "notes": self.notes,
        }


# ---------------------------------------------------------------------------
# sampling machinery


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Independent generator for one block, keyed by ``(seed, block)``."""
    key = (int(seed) & (2 ** 64 - 1)) | (int(block) << 64)
    return np.random.Generator(np.random.Philox(key=key))


def _draw(rng: np.random.Generator, n: int, dims: int) -> np.ndarray:
    """``n`` points: ``c1`` uniform on [0, 2], disk parameters uniform on the unit disk."""
    pts = np.empty((n, dims))
    pts[:, 0] = 2.0 * rng.random(n)
    for j in range(1, dims, 2):
        r = np.sqrt(rng.random(n))
        th = 2 * np.pi * rng.random(n)
        pts[:, j] = r * np.cos(th)
        pts[:, j + 1] = r * np.sin(th)
    return pts


def _project(pt: np.ndarray) -> np.ndarray:
    pt = pt.copy()
    pt[..., 0] = np.clip(pt[..., 0], 0.0, 2.0)
    for j in range(1, pt.shape[-1], 2):
        r = np.hypot(pt[..., j], pt[..., j + 1])
        scale = np.where(r > 1.0, 1.0 / np.maximum(r, 1e-300), 1.0)
        pt[..., j] *= scale
        pt[..., j + 1] *= scale
    return pt


def _complex(pts: np.ndarray, j: int) -> np.ndarray:
    return pts[..., j] + 1j * pts[..., j + 1]


def _point_dict(pt: np.ndarray) -> dict:
    out = {"c1": float(pt[0])}
    for name, j in zip(("x", "y", "sigma", "tau"), range(1, len(pt), 2)):
        out[name] = [float(pt[j]), float(pt[j + 1])]
    return out


def _to_sample(pt: np.ndarray) -> GSSample:
    vals = [complex(pt[j], pt[j + 1]) for j in range(1, len(pt), 2)]
    vals += [0j] * (4 - len(vals))
    return GSSample(float(pt[0]), *vals)


def _scan(objective: Callable[[np.ndarray], np.ndarray], dims: int, n_samples: int,
          seed: int, threshold: float, workers: int | None):
    """Evaluate all blocks; return best value, its point and index, and violations."""
    n_blocks = -(-n_samples // BLOCK_SIZE)

    def run(b: int):
        n = min(BLOCK_SIZE, n_samples - b * BLOCK_SIZE)
        pts = _draw(block_rng(seed, b), n, dims)
        vals = objective(pts)
        i = int(np.argmax(vals))  # first occurrence: lowest index wins ties
        bad = np.flatnonzero(vals > threshold)
        viol = [(b * BLOCK_SIZE + int(k), pts[k], float(vals[k]))
                for k in bad[:MAX_STORED_VIOLATIONS]]
        return float(vals[i]), b * BLOCK_SIZE + i, pts[i], len(bad), viol

    if workers and workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(n_blocks)))
    else:
        results = [run(b) for b in range(n_blocks)]

    best_val, best_idx, best_pt = -math.inf, -1, None
    count, violations = 0, []
    for val, idx, pt, nbad, viol in results:  # block order == index order
        if val > best_val:
            best_val, best_idx, best_pt = val, idx, pt
        count += nbad
        violations.extend(viol)
    return best_val, best_idx, best_pt, count, violations[:MAX_STORED_VIOLATIONS]


def refine(objective: Callable[[np.ndarray], np.ndarray], start: np.ndarray,
           step: float = 0.1, min_step: float = 1e-6, max_iter: int = 200):
    """Cyclic coordinate ascent with projection; never lowers the value."""
    best = _project(start)
    best_val = float(objective(best[None, :])[0])
    for _ in range(max_iter):
        if step < min_step:
            break
        improved = False
        for j in range(len(best)):
            trial = np.repeat(best[None, :], 2, axis=0)
            trial[0, j] += step
            trial[1, j] -= step
            trial = _project(trial)
            vals = objective(trial)
            k = int(np.argmax(vals))
            if vals[k] > best_val:
                best_val, best = float(vals[k]), trial[k]
                improved = True
        if not improved:
            step /= 2
    return best_val, best


def _is_real(pt: np.ndarray) -> bool:
    return bool(np.all(np.abs(pt[2::2]) < 1e-9))


def _estimate(objective, dims, n_samples, seed, closed_form, config, workers,
              refine_search=True, chain=None) -> BoundReport:
    if n_samples < 1:
        raise DomainError("n_samples must be positive")
    threshold = closed_form + TOL
    best_val, best_idx, best_pt, count, viol = _scan(
        objective, dims, n_samples, seed, threshold, workers)
    notes = {"argmax_index": best_idx, "sampled_max_before_refinement": best_val}
    if refine_search:
        ref_val, ref_pt = refine(objective, best_pt)
        if ref_val > best_val:
            best_val, best_pt = ref_val, ref_pt
        if ref_val > threshold:
            count += 1
            viol.append(("refined", ref_pt, ref_val))
    notes["argmax_on_real_slice"] = _is_real(best_pt)
    records = []
    for idx, pt, val in viol[:MAX_STORED_VIOLATIONS]:
        rec = {"index": idx, "sample": _point_dict(pt), "value": val,
               "excess": val - closed_form}
        if chain is not None:
            rec["failed_link"] = chain(pt)
        records.append(rec)
    return BoundReport(config, float(closed_form), float(best_val), _point_dict(best_pt),
                       int(n_samples), int(seed), records, int(count), [], notes)


# ---------------------------------------------------------------------------
# Hankel determinant


def f_terms(lam: float, q: float, phi: PhiSpec, c):
    """The four coefficient functions ``F1..F4`` of the square bound, at ``c`` in [0, 2]."""
    k = QConstants.of(ClassParams(q=q, lam=lam))
    B2, B3, B4, D3 = k.B2, k.B3, k.B4, k.D3
    E1, E2, E3 = phi.E1, phi.E2, phi.E3
    c = np.asarray(c, dtype=float)
    w = 4 - c * c
    base = lam ** 2 * B2 * B4
    F1 = (E1 * c ** 4 / (96 * lam ** 4 * B2 ** 4 * B4)
          * (E1 ** 3 * ((lam - 1) * abs(lam - 2) * B2 ** 3 + 3 * (lam - 1) * B2 * B3
                        + 6 * (B4 - B2))
             + 6 * abs(E3) * lam ** 2 * B2 ** 3)
          + E1 ** 2 * c * w / (8 * base))
    F2 = (E1 * abs(E2) / (32 * base)
          + abs(5 - 4 * B4) * E1 ** 3 / (64 * lam ** 2 * B2 ** 2 * B4 * D3)) * c * c * w
    F3 = -E1 ** 2 * c * (2 - c) * w / (32 * base)
    F4 = E1 ** 2 * w * w / (64 * D3 ** 2)
    return F1, F2, F3, F4


def pi_value(F, xi, zeta):
    F1, F2, F3, F4 = F
    s = xi + zeta
    return F1 + s * F2 + (xi * xi + zeta * zeta) * F3 + s * s * F4


def hankel_chain(phi: PhiSpec, params: ClassParams, sample: GSSample,
                 closed_form: float | None = None, tol: float = TOL) -> list[dict]:
    """Check each inequality link from the coefficient map to the closed form."""
    lam, q = params.lam, params.q
    args = (sample.c1, sample.x, sample.y, sample.sigma, sample.tau)
    a2, a3, a4 = forward_arrays(phi, params, *args)
    direct = complex(a2 * a4 - a3 * a3)
    expanded = complex(hankel_arrays(phi, params, *args))
    F = f_terms(lam, q, phi, sample.c1)
    pi_xy = float(pi_value(F, abs(sample.x), abs(sample.y)))
    pi_11 = float(pi_value(F, 1.0, 1.0))
    parts = bounds.thm1_parts(lam, q, phi)
    t = sample.c1 ** 2
    g = parts.P * t * t + parts.Q * t + parts.R
    qmax = bounds.quad_max(parts.P, parts.Q, parts.R)
    if closed_form is None:
        closed_form = bounds.thm1_bound(lam, q, phi)
    links = [
        ("expansion", abs(direct - expanded), tol * max(1.0, abs(direct)), "|difference|"),
        ("triangle", abs(expanded), pi_xy + tol, "|H| <= Pi(|x|,|y|)"),
        ("square", pi_xy, pi_11 + tol, "Pi(|x|,|y|) <= Pi(1,1)"),
        ("quadratic-identity", abs(pi_11 - g), tol * max(1.0, abs(g)), "Pi(1,1) == P t^2 + Q t + R"),
        ("quadratic-max", g, qmax + tol, "P t^2 + Q t + R <= max over [0,4]"),
        ("closed-form", qmax, closed_form + tol, "max <= reported bound"),
    ]
    return [{"link": n, "lhs": float(l), "rhs": float(r), "ok": bool(l <= r), "relation": d}
            for n, l, r, d in links]


def _first_failure(links: list[dict]) -> str | None:
    for item in links:
        if not item["ok"]:
            return item["link"]
    return None


def sup_hankel(params: ClassParams, phi: PhiSpec, n_samples: int = 100_000, seed: int = 0,
               workers: int | None = None, refine_search: bool = True,
               closed_form: float | None = None) -> BoundReport:
    """Sampled supremum of ``|a2 a4 - a3**2|`` against the closed-form bound.

    ``closed_form`` overrides the bound under test (used to exercise the
    violation path); by default it is the proof-chain bound.
    """
    if not params.is_reduced:
        raise DomainError("the Hankel bound needs mu = 1 with the Bernardi operator off")
    lam, q = params.lam, params.q
    bound = bounds.thm1_bound(lam, q, phi) if closed_form is None else float(closed_form)

    def objective(pts):
        return np.abs(hankel_arrays(phi, params, pts[:, 0], _complex(pts, 1), _complex(pts, 3),
                                    _complex(pts, 5), _complex(pts, 7)))

    def chain(pt):
        return _first_failure(hankel_chain(phi, params, _to_sample(pt), bound))

    config = {"theorem": "hankel2", "entry": "a2a4-a3^2", "params": params.to_dict(),
              "phi": phi.to_dict()}
    rep = _estimate(objective, HANKEL_DIMS, n_samples, seed, bound, config, workers,
                    refine_search, chain)
    stmt = bounds.thm1_parts(lam, q, phi, bounds.STATEMENT)
    case, printed, third = bounds.printed_case_table(stmt)
    rep.variant_deltas = [
        ("proof", bounds.thm1_bound(lam, q, phi)),
        ("theorem-statement-exact-max", bounds.quad_max(stmt.P, stmt.Q, stmt.R)),
        ("theorem-statement-case-table", printed if printed is not None else math.nan),
    ]
    return rep


# ---------------------------------------------------------------------------
# a2, a3 and Fekete-Szego over (c1, x, y)


def _second_order(pts: np.ndarray):
    c1 = pts[:, 0]
    c2, _ = gs_reconstruct(c1, _complex(pts, 1), 0)
    d2, _ = gs_reconstruct(-c1, _complex(pts, 3), 0)
    return c1, c2, d2


def sup_fekete(params: ClassParams, phi: PhiSpec, rho: float, n_samples: int = 100_000,
               seed: int = 0, workers: int | None = None,
               refine_search: bool = True) -> BoundReport:
    """Sampled supremum of ``|a3 - rho a2**2|`` in its difference/sum decomposition."""
    k = QConstants.of(params)
    E1 = phi.E1
    theta = bounds.theta_omega(params, phi).Theta
    bound = bounds.thm3_bound(params, phi, rho)
    head = 4 * k.D3 * k.m3 * k.L3

    def objective(pts):
        _, c2, d2 = _second_order(pts)
        return np.abs(E1 * (c2 - d2) / head + (1 - rho) * E1 ** 3 * (c2 + d2) / (2 * theta))

    config = {"theorem": "fekete", "entry": "a3-rho*a2^2", "rho": rho,
              "params": params.to_dict(), "phi": phi.to_dict()}
    rep = _estimate(objective, SECOND_DIMS, n_samples, seed, bound, config, workers,
                    refine_search)
    br = bounds.fekete_branches(params, phi, rho)
    rep.notes["branch"] = br["branch"]
    rep.variant_deltas = [
        ("consistent", bound),
        ("proof-conclusion", br["first"] if br["branch"] == 1
         else bounds.fekete_branches(params, phi, rho, power=2)["second"]),
    ]
    return rep


def sup_a2_a3(params: ClassParams, phi: PhiSpec, n_samples: int = 100_000, seed: int = 0,
              workers: int | None = None, refine_search: bool = True) -> list[BoundReport]:
    """One report per min-entry of the ``|a2|`` and ``|a3|`` bounds.

    Each entry is checked against the supremum of the expression it bounds;
    entries whose bound is undefined are skipped (see the flags of
    :func:`bounds.thm2_bounds`).
    """
    k = QConstants.of(params)
    lam, E1, E2 = k.lam, phi.E1, phi.E2
    cb = bounds.thm2_bounds(params, phi)
    omega, theta = cb.theta_omega.Omega, cb.theta_omega.Theta
    lin = 2 * lam * k.m2 * k.B2 * k.L2
    head = 4 * k.D3 * k.m3 * k.L3
    sq = 8 * lam ** 2 * k.m2 ** 2 * k.B2 ** 2 * k.L2 ** 2

    def omega_square(c1, c2, d2):
        return ((E2 - E1) * 2 * c1 * c1 / 4 + E1 * (c2 + d2) / 2) / omega

    def a2_linear(p):
        return np.abs(E1 * p[:, 0] / lin)

    def a2_omega(p):
        return np.sqrt(np.abs(omega_square(*_second_order(p))))

    def a2_theta(p):
        _, c2, d2 = _second_order(p)
        return np.sqrt(np.abs(E1 ** 3 * (c2 + d2) / (2 * theta)))

    def a3_square(p):
        c1, c2, d2 = _second_order(p)
        return np.abs(E1 * (c2 - d2) / head + E1 ** 2 * 2 * c1 * c1 / sq)

    def a3_omega(p):
        c1, c2, d2 = _second_order(p)
        return np.abs(E1 * (c2 - d2) / head + omega_square(c1, c2, d2))

    def a3_entry(name):
        v = cb.a3_entries.get(name)
        return None if v is None else cb.a3_head + v

    exprs = {
        "a2:linear": (a2_linear, cb.a2_entries.get("linear")),
        "a2:omega": (a2_omega, cb.a2_entries.get("omega")),
        "a2:theta": (a2_theta, cb.a2_entries.get("theta")),
        "a3:square": (a3_square, a3_entry("square")),
        "a3:omega": (a3_omega, a3_entry("omega")),
    }
    reports = []
    for entry, (objective, bound) in exprs.items():
        if bound is None or not math.isfinite(bound):
            continue
        config = {"theorem": "coeffs", "entry": entry, "params": params.to_dict(),
                  "phi": phi.to_dict()}
        rep = _estimate(objective, SECOND_DIMS, n_samples, seed, bound, config, workers,
                        refine_search)
        rep.variant_deltas = [("a2_bound", cb.a2_bound), ("a3_bound", cb.a3_bound)]
        reports.append(rep)
    return reports


# ---------------------------------------------------------------------------
# quadratic structure oracle


def g_value(lam: float, q: float, phi: PhiSpec, c) -> np.ndarray:
    F1, F2, F3, F4 = f_terms(lam, q, phi, c)
    return F1 + 2 * F2 + 2 * F3 + 4 * F4


def extract_PQR(lam: float, q: float, phi: PhiSpec, tol: float = 1e-6):
    """Recover ``(P, Q, R)`` from ``G(c) = F1 + 2 F2 + 2 F3 + 4 F4`` at ``c**2 = 0, 1, 4``.

    A fourth point ``c**2 = 2`` confirms that ``G`` is quadratic in ``c**2``.
    """
    ts = np.array([0.0, 1.0, 4.0])
    vals = g_value(lam, q, phi, np.sqrt(ts))
    P, Q, R = np.linalg.solve(np.vander(ts, 3), vals)
    resid = float(abs(g_value(lam, q, phi, math.sqrt(2.0)) - (4 * P + 2 * Q + R)))
    if resid > tol:
        raise StructureViolationError(f"G is not quadratic in c^2: residual {resid:.3e}")
    return float(P), float(Q), float(R)


def pi_maximum_check(lam: float, q: float, phi: PhiSpec, c: float | None = None,
                     grid: int = 401, n_c: int = 21, tol: float = TOL) -> dict:
    """Grid-check that ``Pi(xi, zeta)`` peaks at ``(1, 1)`` on the unit square."""
    cs = [float(c)] if c is not None else np.linspace(0.0, 2.0, n_c).tolist()
    xi = np.linspace(0.0, 1.0, grid)
    X, Z = np.meshgrid(xi, xi, indexing="ij")
    rows = []
    for cv in cs:
        F = f_terms(lam, q, phi, cv)
        vals = pi_value(F, X, Z)
        i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
        corner = float(pi_value(F, 1.0, 1.0))
        top = float(vals[i, j])
        rows.append({"c": cv, "max": top, "at": [float(xi[i]), float(xi[j])],
                     "corner": corner, "ok": bool(top <= corner + tol)})
    return {"lambda": lam, "q": q, "phi": phi.label, "ok": all(r["ok"] for r in rows),
            "rows": rows}
