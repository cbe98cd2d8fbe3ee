"""Command dispatch and report documents.

A report has a canonical part (everything that depends only on the input)
and a timings part.  Only the canonical part is compared for determinism
and equality.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .errors import (
    AdeTorelliError,
    BudgetExceeded,
    ConsistencyError,
    InputError,
    UnsupportedParity,
)
from .instance import instance_to_dict
from .jacobian import (
    HypersurfaceInstance,
    completeness_certificate,
    duality_report,
    evaluation_map,
    hilbert_table,
    hodge_graded,
    p_value,
    quotient_dims,
    torelli_report,
    total_tjurina,
)
from .poly import format_fraction
from .koszul import KoszulSetup, build_koszul, composition_vanishes, euler_characteristic, koszul_cohomology

COMMANDS = ("analyze", "hilbert", "duality", "hodge", "torelli", "koszul", "pvalue")

# every verdict string belongs to exactly one exit-code class
EXIT_CLASS = {
    "pass": 0,
    "fail": 3,
    "symmetric": 0,
    "asymmetric": 3,
    "injective": 0,
    "kernel_equals_J_d": 0,
    "hypotheses_not_satisfied": 2,
    "kernel_exceeds_J_d": 3,
    "consistent": 0,
    "violated": 3,
    "computed": 0,
    "agrees": 0,
    "discrepancy": 0,
    "not_reported": 0,
}

EXIT_OK, EXIT_USAGE, EXIT_HYPOTHESES, EXIT_CONSISTENCY, EXIT_BUDGET = 0, 1, 2, 3, 4


def exit_code_for_error(exc: BaseException) -> int:
    if isinstance(exc, BudgetExceeded):
        return EXIT_BUDGET
    if isinstance(exc, ConsistencyError):
        return EXIT_CONSISTENCY
    if isinstance(exc, (InputError, ValueError)):
        return EXIT_USAGE
    if isinstance(exc, AdeTorelliError):
        return EXIT_CONSISTENCY
    return EXIT_USAGE


def _plain(x):
    """Normalize to JSON-native values so parse(emit(r)) == r holds."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, float):
        raise TypeError("floating point values are not allowed in reports")
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, Fraction):
        return format_fraction(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


@dataclass
class ReportDocument:
    command: str
    instance: dict
    results: dict
    verdicts: dict
    warnings: list = field(default_factory=list)
    version: str = __version__
    timings: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        self.instance = _plain(self.instance)
        self.results = _plain(self.results)
        self.verdicts = _plain(self.verdicts)
        self.warnings = _plain(self.warnings)
        self.timings = _plain(self.timings)
        for name, v in self.verdicts.items():
            if v not in EXIT_CLASS:
                raise ValueError(f"unknown verdict {v!r} for {name}")

    @property
    def exit_code(self) -> int:
        return max((EXIT_CLASS[v] for v in self.verdicts.values()), default=EXIT_OK)

    def canonical(self) -> dict:
        return {
            "command": self.command,
            "instance": self.instance,
            "results": self.results,
            "verdicts": self.verdicts,
            "warnings": self.warnings,
            "version": self.version,
        }

    def canonical_json(self) -> str:
        return json.dumps(self.canonical(), sort_keys=True, indent=2)

    def to_json(self) -> str:
        return json.dumps({"canonical": self.canonical(), "timings": self.timings}, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        doc = json.loads(text)
        c = doc["canonical"]
        return cls(c["command"], c["instance"], c["results"], c["verdicts"], c.get("warnings", []),
                   c["version"], doc.get("timings", {}))


def emit(report: ReportDocument) -> str:
    return report.to_json()


def parse(text: str) -> ReportDocument:
    return ReportDocument.from_json(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def parse_degree_range(text: str) -> range:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError as exc:
        raise InputError(f"degree range must look like a..b, got {text!r}") from exc
    if lo < 0 or hi < lo:
        raise InputError(f"empty or negative degree range {text!r}")
    return range(lo, hi + 1)


def _summary(H: HypersurfaceInstance, variables=None) -> dict:
    d = instance_to_dict(H, variables)
    d.pop("options")
    d["sigma"] = H.sigma
    return d


def _certificate_dict(H):
    cert = completeness_certificate(H)
    return {"passed": cert.passed, "tau": cert.tau, "dims_sigma_plus_1_2": list(cert.dims)}, cert


def _analyze(H, flags):
    cert, c = _certificate_dict(H)
    res = {
        "records": [r.as_dict() for r in H.records],
        "tau_total": total_tjurina(H),
        "certificate": cert,
    }
    return res, {"certificate": "pass" if c.passed else "fail"}


def _hilbert(H, flags):
    degrees = flags.get("degree_range") or range(0, H.sigma + 3)
    rows = [list(r) for r in hilbert_table(H, degrees)]
    return {"columns": ["m", "dim A/J", "dim I/J"], "rows": rows}, {"hilbert": "computed"}


def _duality(H, flags):
    rep = duality_report(H)
    res = {
        "sigma": rep.sigma,
        "columns": ["m", "dim (I/J)_m", "dim (I/J)_(sigma-m)", "equal"],
        "rows": [list(r) for r in rep.rows],
        "vanishing_above_sigma": rep.vanishing_above,
    }
    return res, {"duality": "symmetric" if rep.symmetric else "asymmetric"}


def _hodge(H, flags):
    top, second = hodge_graded(H)
    return {"gr_F_top": top, "gr_F_next": second}, {"hodge": "computed"}


def _torelli(H, flags):
    rep = torelli_report(H)
    res = {
        "hypotheses": dict(rep.hypotheses),
        "domain_dim": rep.domain_dim,
        "source_dim": rep.source_dim,
        "target_dim": rep.target_dim,
        "map_rank": rep.map_rank,
        "kernel_dim": rep.kernel_dim,
        "J_d_dim": rep.j_d.dim,
        "lifted_kernel_dim": rep.kernel_lift.dim,
        "lifted_kernel_equals_J_d": rep.kernel_equals_j_d,
    }
    return res, {"torelli": rep.verdict}


def _koszul(H, flags):
    if flags.get("degree") is not None:
        degrees = [flags["degree"]]
    else:
        degrees = list(flags.get("degree_range") or range(0, H.sigma + 4))
    s = H.sigma
    rows = []
    ok = True
    for m in degrees:
        setup = KoszulSetup.from_instance(H, m)
        piece = build_koszul(setup)
        h = koszul_cohomology(piece)
        cok = evaluation_map(H, s - m).coker_dim
        aj = quotient_dims(H, m)[0]
        euler = sum((-1) ** p * x for p, x in enumerate(h)) == euler_characteristic(setup)
        row = {
            "m": m,
            "h": list(h),
            "coker_ev_sigma_minus_m": cok,
            "dim_AJ": aj,
            "low_vanish": all(x == 0 for x in h[: H.n + 1]),
            "top_matches_AJ": h[-1] == aj,
            "next_matches_coker": h[-2] == cok,
            "euler_ok": euler,
            "d_squared_zero": composition_vanishes(piece),
        }
        ok = ok and all(row[k] for k in ("low_vanish", "top_matches_AJ", "next_matches_coker", "euler_ok", "d_squared_zero"))
        rows.append(row)
    return {"rows": rows}, {"koszul": "consistent" if ok else "violated"}


def _pvalue(H, flags):
    pv = p_value(H)
    res = {
        "p": pv.p,
        "cokernels": [list(r) for r in pv.cokernels],
        "monotone": pv.monotone,
        "length": pv.length,
        "reported_s": pv.reported_s,
        "discrepancy": pv.discrepancy,
    }
    if pv.reported_s is None:
        cmp = "not_reported"
    else:
        cmp = "discrepancy" if pv.discrepancy else "agrees"
    return res, {"s_k_comparison": cmp}


_HANDLERS = {
    "analyze": _analyze,
    "hilbert": _hilbert,
    "duality": _duality,
    "hodge": _hodge,
    "torelli": _torelli,
    "koszul": _koszul,
    "pvalue": _pvalue,
}


def run_command(cmd: str, H: HypersurfaceInstance, flags: dict | None = None, variables=None) -> ReportDocument:
    """Run one command; library errors propagate and map to exit codes."""
    flags = dict(flags or {})
    if cmd not in _HANDLERS:
        raise InputError(f"unknown command {cmd!r}; choose one of {', '.join(COMMANDS)}")
    warnings = []
    if H.n % 2:
        if cmd in ("hodge", "torelli"):
            raise UnsupportedParity(f"n = {H.n} is odd; {cmd} needs n even")
        msg = f"n = {H.n} is odd; results are algebraic only"
        if flags.get("strict_parity"):
            raise UnsupportedParity(msg)
        warnings.append(msg)
    t0 = time.perf_counter()
    results, verdicts = _HANDLERS[cmd](H, flags)
    ms = int((time.perf_counter() - t0) * 1000)
    return ReportDocument(cmd, _summary(H, variables), results, verdicts, warnings, timings={"total_ms": ms})


# ---------------------------------------------------------------------------
# human-readable output
# ---------------------------------------------------------------------------


def _table(header, rows) -> str:
    cells = [[str(c) for c in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def render_text(report: ReportDocument) -> str:
    inst, res = report.instance, report.results
    out = [f"{report.command}: n={inst['n']} d={inst['d']} sigma={inst['sigma']} "
           f"declared points={len(inst['singular_points'])}"]
    for w in report.warnings:
        out.append(f"warning: {w}")
    cmd = report.command
    if cmd == "analyze":
        recs = res["records"]
        if recs:
            out.append(_table(["point", "type", "mu", "tau", "weights", "alpha~"],
                              [[":".join(r["point"]), r["type"], r["mu"], r["tau"], ",".join(r["weights"]),
                                r["alpha_tilde"]] for r in recs]))
        c = res["certificate"]
        out.append(f"total tau = {res['tau_total']}")
        out.append(f"certificate: dim A/J at sigma+1, sigma+2 = {tuple(c['dims_sigma_plus_1_2'])}")
    elif cmd in ("hilbert", "duality"):
        out.append(_table(res["columns"], res["rows"]))
        if cmd == "duality":
            out.append(f"(I/J) vanishes above sigma: {res['vanishing_above_sigma']}")
    elif cmd == "hodge":
        out.append(f"dim Gr_F^(n+1) = {res['gr_F_top']}")
        out.append(f"dim Gr_F^n     = {res['gr_F_next']}")
    elif cmd == "torelli":
        for k, v in res["hypotheses"].items():
            out.append(f"  [{'x' if v else ' '}] {k}")
        out.append(f"domain (I/J)_d = {res['domain_dim']}, source = {res['source_dim']}, "
                   f"target = {res['target_dim']}")
        out.append(f"rank = {res['map_rank']}, kernel = {res['kernel_dim']}, "
                   f"lifted kernel = J_d: {res['lifted_kernel_equals_J_d']}")
    elif cmd == "koszul":
        rows = [[r["m"], " ".join(map(str, r["h"])), r["coker_ev_sigma_minus_m"], r["dim_AJ"],
                 r["low_vanish"] and r["top_matches_AJ"] and r["next_matches_coker"]
                 and r["euler_ok"] and r["d_squared_zero"]] for r in res["rows"]]
        out.append(_table(["m", "h^0..h^r", "coker ev", "dim A/J", "ok"], rows))
    elif cmd == "pvalue":
        out.append(_table(["m", "h^1(I(m))"], res["cokernels"]))
        out.append(f"p = {res['p']} (length {res['length']}, monotone: {res['monotone']})")
        if res["reported_s"] is not None:
            out.append(f"reported s_{res['length']} = {res['reported_s']}, discrepancy: {res['discrepancy']}")
    for name, v in report.verdicts.items():
        out.append(f"{name}: {v}")
    return "\n".join(out) + "\n"
