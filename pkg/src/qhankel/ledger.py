"""Discrepancy ledger: printed formulas recomputed against derived ones.

Each entry records a formula as displayed next to the value the artifact
actually uses (or derives with the series engine), evaluated at a concrete
reference configuration. Entries are findings, not failures.
"""

from __future__ import annotations

import numpy as np

from . import bounds
from .carath import GSSample
from .classdef import a2a3_coefficient, build_lhs, forward_arrays
from .phis import caratheodory, crescent
from .pseries import TruncatedSeries
from .qkernel import ClassParams

__all__ = ["discrepancy_ledger", "engine_a2a3_coefficient"]

ANCHOR = {"lambda": 1.0, "q": 0.999, "phi": "caratheodory"}
SECOND = {"lambda": 2.0, "q": 0.5, "phi": "caratheodory"}


def _entry(id_, item, context, printed, recomputed, note="", kind="delta"):
    delta = None
    if printed is not None and recomputed is not None:
        delta = printed - recomputed
    return {"id": id_, "kind": kind, "item": item, "context": context,
            "printed": printed, "recomputed": recomputed, "delta": delta, "note": note}


def engine_a2a3_coefficient(params: ClassParams) -> float:
    """``a2 a3`` coefficient at ``z**3`` of the reduced left-hand side, read off the engine.

    The ``z**3`` coefficient is a polynomial in ``(a2, a3, a4)`` of weight 3,
    so the mixed second difference in ``(a2, a3)`` isolates the bilinear term.
    """
    def c3(a2, a3):
        return build_lhs(TruncatedSeries.from_normalized([a2, a3, 0.0]), params).coeffs[3]

    return float((c3(1, 1) - c3(1, 0) - c3(0, 1) + c3(0, 0)).real)


def _phi(name):
    return caratheodory() if name == "caratheodory" else crescent()


def discrepancy_ledger() -> list[dict]:
    out = []

    # Hankel bound: displayed theorem block versus proof chain
    for ctx in (ANCHOR, SECOND):
        lam, q, phi = ctx["lambda"], ctx["q"], _phi(ctx["phi"])
        proof = bounds.thm1_parts(lam, q, phi, bounds.PROOF)
        stmt = bounds.thm1_parts(lam, q, phi, bounds.STATEMENT)
        out.append(_entry("hankel-statement-P", "quadratic coefficient P", ctx, stmt.P, proof.P))
        out.append(_entry("hankel-statement-Q", "linear coefficient Q", ctx, stmt.Q, proof.Q))
        out.append(_entry("hankel-statement-first-case", "first-case value E1^2/(3 lambda-1)^2 vs R",
                          ctx, stmt.first_case, proof.R))

    lam, q, phi = ANCHOR["lambda"], ANCHOR["q"], caratheodory()
    proof = bounds.thm1_parts(lam, q, phi)
    case, value, third = bounds.printed_case_table(proof)
    vertex = (4 * proof.P * proof.R - proof.Q ** 2) / (4 * proof.P)
    out.append(_entry(
        "hankel-case-table-third-case", "third case (4PQ-Q^2)/(4P) omits R", ANCHOR, third, vertex,
        "exact vertex value is (4PR-Q^2)/(4P) = R - Q^2/(4P)"))
    out.append(_entry(
        "hankel-case-table-coverage", "printed case conditions", ANCHOR,
        value, bounds.quad_max(proof.P, proof.Q, proof.R),
        f"printed table selects case {case}; 'Q>=0, P>=-Q/8' appears in cases 2 and 3 and "
        "no case covers Q>0, P<-Q/8 (interior vertex)"))

    # Fekete-Szego second branch exponent
    params = ClassParams(q=0.999, lam=1.0)
    rho = -2.0
    b3 = bounds.fekete_branches(params, phi, rho, power=3)
    b2 = bounds.fekete_branches(params, phi, rho, power=2)
    ctx = {"lambda": 1.0, "q": 0.999, "mu": 1.0, "bernardi": False, "phi": "caratheodory",
           "rho": rho, "branch": b3["branch"]}
    out.append(_entry("fekete-second-branch-power", "second branch 2|1-rho|E1^k/|Theta|", ctx,
                      b2["second"], b3["second"],
                      "proof concludes with E1^2, statement and a2^2 relation give E1^3; "
                      "E1^3 is used"))
    out.append(_entry("fekete-branch-conditions", "branch conditions", ctx, None, None,
                      "statement prints '<=' for both branches; read as '<=' then '>='",
                      kind="reading"))

    # convex-type corollary: Upsilon factor
    params = ClassParams(q=0.9, lam=2.0, mu=0.0, eta=1.0, bernardi=True)
    cphi = crescent()
    ctx = dict(params.to_dict(), phi="crescent")
    out.append(_entry("corollary4-upsilon", "Upsilon with lambda(E1-E2) vs 2 lambda(E1-E2)", ctx,
                      bounds._upsilon(params, cphi, printed=True),
                      bounds._upsilon(params, cphi, printed=False),
                      "2 lambda matches Theta at mu = 0 and the a2 corollary; used throughout"))
    out.append(_entry("corollary4-bound", "Fekete-Szego bound with each Upsilon", dict(ctx, rho=-3.0),
                      bounds.corollary4(params, cphi, -3.0, printed=True),
                      bounds.corollary4(params, cphi, -3.0, printed=False)))

    # series-engine findings on the reduced left-hand side
    for lam in (2.0, 3.0):
        p = ClassParams(q=0.5, lam=lam)
        ctx = {"lambda": lam, "q": 0.5, "monomial": "a2*a3", "power": "z^3"}
        out.append(_entry("lhs-z3-a2a3", "a2 a3 coefficient at z^3", ctx,
                          a2a3_coefficient(p, "printed"), engine_a2a3_coefficient(p),
                          "engine gives lambda((lambda-1)[3]_q - 1)[2]_q; printed halves (lambda-1)"))
    p = ClassParams(q=0.9, lam=1.0)
    s = GSSample(1.2, 0.3 + 0.4j, -0.5 + 0.1j, 0.2j, 0.6)
    args = (s.c1, s.x, s.y, s.sigma, s.tau)
    a4_printed = complex(forward_arrays(caratheodory(), p, *args, variant="printed")[2])
    a4_engine = complex(forward_arrays(caratheodory(), p, *args, variant="engine")[2])
    out.append(_entry("a4-relation", "a4 from the third-order relations",
                      {"lambda": 1.0, "q": 0.9, "phi": "caratheodory", "sample": s.to_dict()},
                      abs(a4_printed), abs(a4_engine),
                      "printed relation scales a2(a2^2-a3) by 5/(2[4]_q) instead of 5/2 and "
                      "inherits the halved a2 a3 and E2 terms; the Hankel bound is derived "
                      "from the printed relation (moduli shown)"))
    c1, c2 = s.c1, s.c_side().p2
    out.append(_entry("phi-third-order-E2", "E2 term of the z^3 coefficient of phi(u(z))",
                      {"phi": "caratheodory", "c1": c1, "c2": [c2.real, c2.imag]},
                      abs(2.0 * c1 * (c2 - c1 ** 2 / 2) / 4), abs(2.0 * c1 * (c2 - c1 ** 2 / 2) / 2),
                      "2 E2 u1 u2 = E2 c1 (c2 - c1^2/2)/2; the third-order relations print /4"))

    out.append(_entry("hankel-expansion-modulus", "(1-x^2)s, (1-y^2)t in the expanded Hankel form",
                      {}, None, None,
                      "read as (1-|x|^2), (1-|y|^2) as the parametrization requires for complex x, y",
                      kind="reading"))
    out.append(_entry("a3-bound-bars", "|2(E2-E1|+E1)", {}, None, None,
                      "read as 2(|E2-E1|+E1)", kind="reading"))
    return out
