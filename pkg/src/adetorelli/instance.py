"""Instance files: JSON documents describing (f, declared singular points).

Example::

    {
      "n": 2,
      "d": 5,
      "variables": ["x", "y", "z", "w"],
      "f": [[[2, 0, 0, 3], "1"], [[5, 0, 0, 0], "1"]],
      "singular_points": [["0", "0", "0", "1"]],
      "options": {"nmax": 16, "budget": 200000}
    }

Coefficients and coordinates are integers or "p/q" strings; floats are
rejected so no inexact value ever enters the computation.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import InputError
from .jacobian import DEFAULT_BUDGET, HypersurfaceInstance
from .local import DEFAULT_NMAX
from .poly import HomogeneousPoly, format_fraction


def _rational(x, what: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"{what}: {x!r} is not an exact rational (use an int or 'p/q')")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{what}: cannot parse {x!r}") from exc
    raise InputError(f"{what}: unexpected value {x!r}")


def instance_from_dict(doc: dict, *, nmax: int | None = None, budget: int | None = None) -> HypersurfaceInstance:
    try:
        n = doc["n"]
        d = doc["d"]
        terms = doc["f"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"missing field in instance: {exc}") from exc
    if not isinstance(n, int) or not isinstance(d, int) or d < 1:
        raise InputError("n and d must be integers, d >= 1")
    v = n + 2
    names = doc.get("variables")
    if names is not None and len(names) != v:
        raise InputError(f"expected {v} variable names, got {len(names)}")
    coeffs: dict = {}
    for k, term in enumerate(terms):
        try:
            exps, c = term
        except (TypeError, ValueError) as exc:
            raise InputError(f"term {k}: expected [exponents, coefficient]") from exc
        if len(exps) != v or any(not isinstance(e, int) or e < 0 for e in exps):
            raise InputError(f"term {k}: exponent vector must have {v} non-negative integers")
        if sum(exps) != d:
            raise InputError(f"term {k}: f is not homogeneous of degree {d}")
        exps = tuple(exps)
        coeffs[exps] = coeffs.get(exps, 0) + _rational(c, f"term {k}")
    f = HomogeneousPoly(v, d, coeffs)
    points = []
    for k, pt in enumerate(doc.get("singular_points", [])):
        if len(pt) != v:
            raise InputError(f"point {k}: expected {v} coordinates")
        coords = [_rational(x, f"point {k}") for x in pt]
        if not any(coords):
            raise InputError(f"point {k}: all coordinates are zero")
        points.append(coords)
    opts = doc.get("options", {}) or {}
    nmax = nmax if nmax is not None else int(opts.get("nmax", DEFAULT_NMAX))
    budget = budget if budget is not None else int(opts.get("budget", DEFAULT_BUDGET))
    return HypersurfaceInstance.build(f, n, points, nmax=nmax, budget=budget)


def parse_instance(path, **kw) -> HypersurfaceInstance:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed instance file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("instance file must hold a JSON object")
    return instance_from_dict(doc, **kw)


def instance_to_dict(H: HypersurfaceInstance, variables=None) -> dict:
    return {
        "n": H.n,
        "d": H.d,
        "variables": list(variables) if variables else [f"x{i}" for i in range(H.v)],
        "f": [[list(m), format_fraction(c)] for m, c in sorted(H.f.terms.items(), reverse=True)],
        "singular_points": [[format_fraction(x) for x in P.projective()] for P in H.singular_points],
        "options": {"nmax": H.nmax, "budget": H.budget},
    }
