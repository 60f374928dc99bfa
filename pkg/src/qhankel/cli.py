"""Command-line front end.

Exit codes: 0 success, 1 usage or domain error, 2 verification found
violations, 3 internal invariant failure (including a failed self-test).
"""

from __future__ import annotations

import argparse
import itertools
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from . import bounds
from .classdef import build_lhs, closed_form_lhs_coeffs
from .errors import DomainError, QHankelError
from .phis import parse_phi
from .pseries import DEFAULT_ORDER, TruncatedSeries
from .qkernel import ClassParams
from .report import CSV_COLUMNS, dumps, format_csv, format_table, to_jsonable
from .suite import consistency_suite
from .verify import sup_a2_a3, sup_fekete, sup_hankel

__all__ = ["RunConfig", "build_parser", "config_from_args", "run", "main"]

EXIT_OK, EXIT_USAGE, EXIT_VIOLATIONS, EXIT_INTERNAL = 0, 1, 2, 3
COMMANDS = ("bound", "verify", "sweep", "expand", "selftest")
THEOREMS = ("hankel2", "coeffs", "fekete")
OUTPUTS = ("json", "csv", "table")
SWEEP_KEYS = ("lambda", "mu", "eta", "q", "rho")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation; round-trips through :meth:`to_dict`."""

    command: str
    theorem: str = "hankel2"
    q: float = 0.5
    lam: float = 1.0
    mu: float = 1.0
    eta: float = 0.0
    bernardi: bool = False
    phi: str = "caratheodory"
    rho: float = 0.0
    n_samples: int = 100_000
    seed: int = 0
    order: int = DEFAULT_ORDER
    output: str = "json"
    workers: int | None = None
    coeffs: tuple[complex, ...] = (0.3, 0.2, 0.1)
    sweep: dict[str, tuple[float, ...]] = field(default_factory=dict)

    @property
    def params(self) -> ClassParams:
        return ClassParams(q=self.q, lam=self.lam, mu=self.mu, eta=self.eta,
                           bernardi=self.bernardi)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coeffs"] = list(self.coeffs)
        d["sweep"] = {k: list(v) for k, v in self.sweep.items()}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        d["coeffs"] = tuple(d.get("coeffs", cls.coeffs))
        d["sweep"] = {k: tuple(v) for k, v in d.get("sweep", {}).items()}
        return cls(**d)


# ---------------------------------------------------------------------------
# parsing


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def _sweep_spec(text: str) -> tuple[str, tuple[float, ...]]:
    key, sep, rng = text.partition("=")
    parts = rng.split(":")
    if not sep or key not in SWEEP_KEYS or len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected key=start:stop:count with key in {SWEEP_KEYS}, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric sweep range in {text!r}") from None
    if count < 1:
        raise argparse.ArgumentTypeError("sweep count must be >= 1")
    return key, tuple(float(v) for v in np.linspace(start, stop, count))


def _coeff_list(text: str) -> tuple[complex, ...]:
    try:
        vals = tuple(complex(v.replace(" ", "")) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse coefficients {text!r}") from None
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("expected three coefficients a2,a3,a4")
    return vals


_CSV_HELP = "CSV columns, in order: " + ", ".join(CSV_COLUMNS) + "."

# flag name -> (RunConfig field, converter used for config-file values)
_FLAGS = {
    "theorem": ("theorem", str),
    "lambda": ("lam", float),
    "mu": ("mu", float),
    "eta": ("eta", float),
    "q": ("q", float),
    "bernardi": ("bernardi", _on_off),
    "phi": ("phi", str),
    "rho": ("rho", float),
    "samples": ("n_samples", int),
    "seed": ("seed", int),
    "order": ("order", int),
    "output": ("output", str),
    "workers": ("workers", int),
    "coeffs": ("coeffs", _coeff_list),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theorem", choices=THEOREMS)
    common.add_argument("--lambda", dest="lambda", type=float, metavar="L")
    common.add_argument("--mu", type=float)
    common.add_argument("--eta", type=float)
    common.add_argument("--q", type=float, help="0 < q < 1; use 1-eps for the classical limit")
    common.add_argument("--bernardi", type=_on_off, metavar="{on,off}")
    common.add_argument("--phi", help="caratheodory | janowski:A,B | crescent | custom:E1,E2,E3")
    common.add_argument("--rho", type=float, help="Fekete-Szego parameter")
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--order", type=int, help="series truncation order")
    common.add_argument("--output", choices=OUTPUTS)
    common.add_argument("--workers", type=int)
    common.add_argument("--sweep", type=_sweep_spec, action="append", metavar="KEY=START:STOP:COUNT")
    common.add_argument("--coeffs", type=_coeff_list, metavar="A2,A3,A4",
                        help="coefficients for 'expand' (complex literals allowed)")
    common.add_argument("--config", type=Path, help="key = value file; flags override it")

    parser = argparse.ArgumentParser(
        prog="qhankel",
        description="Closed-form coefficient bounds for q-analogue bi-univalent classes "
                    "and their numerical verification.",
        epilog=_CSV_HELP + " JSON reports carry \"schema\": 1.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "bound": "print closed-form bounds with variant flags",
        "verify": "estimate the supremum by sampling and compare with the bound",
        "sweep": "run 'verify' over a parameter grid (CSV by default). " + _CSV_HELP,
        "expand": "compare the series-engine expansion with the closed forms",
        "selftest": "run the consistency battery and print the discrepancy ledger",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], description=helps[name])
    return parser


def read_config_file(path: Path) -> dict:
    """``key = value`` lines; ``#`` starts a comment. Keys are flag names."""
    values: dict = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().lstrip("-"), value.strip()
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        if key == "sweep":
            values.setdefault("sweep", []).append(_parse_value(_sweep_spec, value, path, lineno))
        elif key in _FLAGS:
            values[key] = _parse_value(_FLAGS[key][1], value, path, lineno)
        else:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
    return values


def _parse_value(conv, value, path, lineno):
    try:
        return conv(value)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(f"{path}:{lineno}: {exc}") from None


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    """Merge config-file values with flags (flags win) into a :class:`RunConfig`."""
    merged = read_config_file(ns.config) if ns.config else {}
    for flag in (*_FLAGS, "sweep"):
        value = getattr(ns, flag)
        if value is not None:
            merged[flag] = value
    kwargs = {_FLAGS[k][0]: v for k, v in merged.items() if k in _FLAGS}
    kwargs["sweep"] = dict(merged.get("sweep", []))
    if ns.command == "sweep" and "output" not in merged:
        kwargs["output"] = "csv"
    if kwargs.get("theorem") is not None and kwargs["theorem"] not in THEOREMS:
        raise UsageError(f"--theorem must be one of {THEOREMS}")
    if kwargs.get("output") is not None and kwargs["output"] not in OUTPUTS:
        raise UsageError(f"--output must be one of {OUTPUTS}")
    return RunConfig(command=ns.command, **kwargs)


def validate(config: RunConfig) -> None:
    """Range-check every numeric setting before any computation."""
    config.params  # raises DomainError naming the violated invariant
    parse_phi(config.phi, config.order)
    if config.n_samples < 1:
        raise DomainError(f"samples must be >= 1, got {config.n_samples}")
    if config.order < 4:
        raise DomainError(f"order must be >= 4, got {config.order}")
    if config.workers is not None and config.workers < 1:
        raise DomainError(f"workers must be >= 1, got {config.workers}")
    if config.command == "sweep":
        if not config.sweep:
            raise UsageError("sweep needs at least one --sweep key=start:stop:count")
        for point in _grid(config):
            point.params
    if config.theorem == "hankel2" and config.command in ("bound", "verify", "sweep"):
        for point in _grid(config) if config.command == "sweep" else [config]:
            if not point.params.is_reduced:
                raise DomainError("the Hankel bound needs mu = 1 with --bernardi off")


def _grid(config: RunConfig) -> list[RunConfig]:
    names = {"lambda": "lam"}
    keys = list(config.sweep)
    points = []
    for values in itertools.product(*(config.sweep[k] for k in keys)):
        points.append(replace(config, **{names.get(k, k): v for k, v in zip(keys, values)}))
    return points


# ---------------------------------------------------------------------------
# commands


def _bound_payload(config: RunConfig) -> dict:
    params, phi = config.params, parse_phi(config.phi, config.order)
    head = {"schema": 1, "command": "bound", "theorem": config.theorem,
            "params": params.to_dict(), "phi": phi.to_dict()}
    flags: list[str] = []
    if config.theorem == "hankel2":
        proof = bounds.thm1_parts(params.lam, params.q, phi, bounds.PROOF)
        stmt = bounds.thm1_parts(params.lam, params.q, phi, bounds.STATEMENT)
        case, printed, third = bounds.printed_case_table(stmt)
        for name in ("P", "Q"):
            a, b = getattr(stmt, name), getattr(proof, name)
            if a != b:
                flags.append(f"theorem-statement {name} = {a:.17g} differs from proof {b:.17g}")
        if stmt.first_case != proof.R:
            flags.append(f"theorem-statement first-case value {stmt.first_case:.17g} "
                         f"differs from R = {proof.R:.17g}")
        if case is None:
            flags.append("printed case table: no case applies to the theorem-statement P, Q")
        value = bounds.thm1_bound(params.lam, params.q, phi)
        variants = {
            "proof": dict(proof.to_dict(), bound=value),
            "theorem-statement": dict(stmt.to_dict(),
                                      exact_max=bounds.quad_max(stmt.P, stmt.Q, stmt.R),
                                      case_table={"case": case, "value": printed,
                                                  "third_case_formula": third}),
        }
        return dict(head, value=value, variants=variants, flags=flags)
    if config.theorem == "coeffs":
        cb = bounds.thm2_bounds(params, phi)
        return dict(head, value={"a2": cb.a2_bound, "a3": cb.a3_bound}, details=cb.to_dict(),
                    flags=list(cb.flags))
    branches = bounds.fekete_branches(params, phi, config.rho)
    value = bounds.thm3_bound(params, phi, config.rho)
    variants = {"consistent": value}
    if branches["branch"] == 2:
        alt = bounds.fekete_branches(params, phi, config.rho, power=2)["second"]
        variants["proof-conclusion"] = alt
        if alt != value:
            flags.append("second branch: proof concludes with E1^2, E1^3 used")
    if params.mu == 0:
        printed = bounds.corollary4(params, phi, config.rho, printed=True)
        variants["convex-corollary-printed-upsilon"] = printed
        if printed != value:
            flags.append("convex specialization: printed Upsilon uses lambda(E1-E2), "
                         "2 lambda(E1-E2) used")
    return dict(head, rho=config.rho, value=value, branches=branches, variants=variants,
                flags=flags)


def _verify_reports(config: RunConfig) -> list:
    params, phi = config.params, parse_phi(config.phi, config.order)
    kw = {"n_samples": config.n_samples, "seed": config.seed, "workers": config.workers}
    if config.theorem == "hankel2":
        return [sup_hankel(params, phi, **kw)]
    if config.theorem == "fekete":
        return [sup_fekete(params, phi, config.rho, **kw)]
    return sup_a2_a3(params, phi, **kw)


def _expand_payload(config: RunConfig) -> dict:
    params = config.params
    a2, a3, a4 = config.coeffs
    f = TruncatedSeries.from_normalized([a2, a3, a4], order=config.order)
    engine = build_lhs(f, params).coeffs
    rows = []
    if params.is_reduced:
        forms = {v: closed_form_lhs_coeffs(params, a2, a3, a4, variant=v)
                 for v in ("printed", "engine")}
    else:
        forms = {"printed": closed_form_lhs_coeffs(params, a2, a3, a4)}
    for n in range(1, len(engine)):
        row = {"power": n, "engine": complex(engine[n])}
        for name, vals in forms.items():
            if n <= len(vals):
                row[name] = complex(vals[n - 1])
                row[f"{name}_delta"] = abs(complex(vals[n - 1]) - engine[n])
        rows.append(row)
    return {"schema": 1, "command": "expand", "params": params.to_dict(),
            "coeffs": list(config.coeffs), "order": config.order, "rows": rows}


def _table_rows(payload, prefix=""):
    if isinstance(payload, dict):
        for k, v in payload.items():
            yield from _table_rows(v, f"{prefix}{k}.")
    elif isinstance(payload, list) and payload and isinstance(payload[0], (dict, list)):
        for i, v in enumerate(payload):
            yield from _table_rows(v, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), payload


def _emit(payload, config: RunConfig, out: TextIO, reports=None) -> None:
    if config.output == "json":
        out.write(dumps(payload))
    elif config.output == "csv":
        if reports is None:
            raise UsageError("--output csv is only available for verify and sweep")
        out.write(format_csv(reports))
    else:
        out.write(format_table(list(_table_rows(to_jsonable(payload)))))


def run(config: RunConfig, out: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    validate(config)
    if config.command == "bound":
        _emit(_bound_payload(config), config, out)
        return EXIT_OK
    if config.command == "verify":
        reports = _verify_reports(config)
        payload = reports[0].to_dict() if len(reports) == 1 else \
            {"schema": 1, "reports": [r.to_dict() for r in reports]}
        _emit(payload, config, out, reports)
        return EXIT_OK if all(r.ok for r in reports) else EXIT_VIOLATIONS
    if config.command == "sweep":
        reports = [r for point in _grid(config) for r in _verify_reports(point)]
        _emit({"schema": 1, "reports": [r.to_dict() for r in reports]}, config, out, reports)
        return EXIT_OK if all(r.ok for r in reports) else EXIT_VIOLATIONS
    if config.command == "expand":
        _emit(_expand_payload(config), config, out)
        return EXIT_OK
    result = consistency_suite(config.seed)
    _emit(result, config, out)
    return EXIT_OK if result["ok"] else EXIT_INTERNAL


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return run(config_from_args(ns))
    except (UsageError, DomainError, OSError) as exc:
        print(f"qhankel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QHankelError as exc:
        print(f"qhankel: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # anything unexpected is an internal failure
        print(f"qhankel: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
