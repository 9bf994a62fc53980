"""Named metric families, addressable from the command line.

Accepted names::

    flat:m=4[,p=1]
    constcurv:K=1,m=4
    gf:p=3,f=sum_sq | f=indef | f=<polynomial in x1..xp>
    gF:s=2,f=quartic | f=<polynomial in z>
    rescale:alpha=exp_x1@<any family name>
"""

from __future__ import annotations

import re

from .expr import parse_polynomial
from .geometry import (
    MetricField,
    constant_curvature_model,
    exp_first_coordinate,
    family_gf,
    family_gF,
    flat,
    rescale_field,
)


class UnknownFamily(ValueError):
    pass


GF_PRESETS = {
    "sum_sq": lambda p: " + ".join(f"x{i + 1}^2" for i in range(p)),
    # alternating signs: indefinite Hessian for p >= 2
    "indef": lambda p: " ".join(("+ " if i % 2 == 0 else "- ") + f"x{i + 1}^2" for i in range(p)).lstrip("+ "),
}
GF_CURVE_PRESETS = {"quartic": "z^4"}
ALPHAS = {"exp_x1": exp_first_coordinate, "one": lambda x: 1.0 + 0.0 * x[0]}

_PARAM = re.compile(r"^\s*([A-Za-z_]\w*)\s*=\s*(.+?)\s*$")


def _params(text: str, allowed: set[str], family: str) -> dict[str, str]:
    out: dict[str, str] = {}
    if not text.strip():
        return out
    for part in text.split(","):
        m = _PARAM.match(part)
        if not m:
            raise UnknownFamily(f"{family}: cannot parse parameter {part!r}")
        key, value = m.groups()
        if key not in allowed:
            raise UnknownFamily(f"{family}: unknown parameter {key!r}; allowed: {', '.join(sorted(allowed))}")
        out[key] = value
    return out


def _int(params, key, family, default=None) -> int:
    if key not in params:
        if default is None:
            raise UnknownFamily(f"{family}: missing parameter {key!r}")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise UnknownFamily(f"{family}: {key} must be an integer, got {params[key]!r}") from None


def resolve_family(name: str) -> MetricField:
    """Build the :class:`MetricField` denoted by ``name``; raises :class:`UnknownFamily`."""
    name = name.strip()
    head, _, rest = name.partition(":")
    if head == "rescale":
        spec, at, inner = rest.partition("@")
        if not at:
            raise UnknownFamily("rescale: expected 'rescale:alpha=<name>@<family>'")
        params = _params(spec, {"alpha"}, "rescale")
        alpha = params.get("alpha", "exp_x1")
        if alpha not in ALPHAS:
            raise UnknownFamily(f"rescale: unknown alpha {alpha!r}; known: {', '.join(sorted(ALPHAS))}")
        return rescale_field(resolve_family(inner), ALPHAS[alpha], alpha)
    if head == "flat":
        params = _params(rest, {"m", "p"}, head)
        m = _int(params, "m", head, 4)
        p = _int(params, "p", head, 0)
        if m < 3 or not 0 <= p <= m:
            raise UnknownFamily(f"flat: need m >= 3 and 0 <= p <= m, got m={m}, p={p}")
        return flat(m, p)
    if head == "constcurv":
        params = _params(rest, {"K", "m"}, head)
        m = _int(params, "m", head, 4)
        try:
            K = float(params.get("K", "1"))
        except ValueError:
            raise UnknownFamily(f"constcurv: K must be a number, got {params['K']!r}") from None
        if m < 3:
            raise UnknownFamily(f"constcurv: need m >= 3, got {m}")
        return constant_curvature_model(K, m)
    if head == "gf":
        params = _params(rest, {"p", "f"}, head)
        p = _int(params, "p", head, 3)
        if p < 2:
            raise UnknownFamily(f"gf: need p >= 2, got {p}")
        ftext = params.get("f", "sum_sq")
        text = GF_PRESETS[ftext](p) if ftext in GF_PRESETS else ftext
        variables = tuple(f"x{i + 1}" for i in range(p))
        try:
            f = parse_polynomial(text, variables)
        except ValueError as exc:
            raise UnknownFamily(f"gf: {exc}") from None
        return family_gf(p, f, name=f"gf:p={p},f={ftext}")
    if head == "gF":
        params = _params(rest, {"s", "f"}, head)
        s = _int(params, "s", head, 2)
        if s < 2:
            raise UnknownFamily(f"gF: need s >= 2, got {s}")
        ftext = params.get("f", "quartic")
        text = GF_CURVE_PRESETS.get(ftext, ftext)
        try:
            f = parse_polynomial(text, ("z",))
        except ValueError as exc:
            raise UnknownFamily(f"gF: {exc}") from None
        return family_gF(s, [f] * s, name=f"gF:s={s},f={ftext}")
    raise UnknownFamily(f"unknown family {head!r}; known: flat, constcurv, gf, gF, rescale")

