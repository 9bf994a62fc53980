"""Tiny polynomial language for user-supplied scalar fields.

Grammar: a sum of terms, each term a ``*``-separated product of rational
coefficients (``3``, ``-1/2``, ``0.25``) and powers of variables
(``x1``, ``x2^3``, ``z^4``). Examples: ``x1^2 - x2^2 + x3^2``,
``1/2*x1*x2^2 + 3``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

_TERM_SPLIT = re.compile(r"(?<![\^*/eE])\s*([+-])\s*")
_VAR = re.compile(r"^([a-z]+)(\d*)(?:\^(\d+))?$")


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in named variables; ``terms`` maps exponent tuples to coefficients."""

    variables: tuple[str, ...]
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]

    def __call__(self, values):
        if len(values) != len(self.variables):
            raise ValueError(f"expected {len(self.variables)} values, got {len(values)}")
        total = 0.0
        for exps, c in self.terms:
            t = float(c)
            for v, e in zip(values, exps):
                if e:
                    t = t * v**e if e > 1 else t * v
            total = total + t
        return total

    def partial(self, i: int) -> "Polynomial":
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms:
            e = exps[i]
            if e == 0:
                continue
            new = exps[:i] + (e - 1,) + exps[i + 1 :]
            out[new] = out.get(new, Fraction(0)) + c * e
        return Polynomial(self.variables, tuple(sorted((k, v) for k, v in out.items() if v != 0)))

    def hessian_at(self, values) -> list[list[float]]:
        n = len(self.variables)
        return [[float(self.partial(i).partial(j)(values)) for j in range(n)] for i in range(n)]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms:
            factors = [str(c)] if c != 1 or not any(exps) else []
            for name, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


def parse_polynomial(text: str, variables: tuple[str, ...]) -> Polynomial:
    """Parse ``text`` into a :class:`Polynomial` over ``variables``.

    Raises ``ValueError`` on unknown variables or malformed terms.
    """
    src = text.strip()
    if not src:
        raise ValueError("empty expression")
    if src[0] not in "+-":
        src = "+" + src
    pieces = _TERM_SPLIT.split(src)
    # split yields ['', sign, term, sign, term, ...]
    if pieces[0].strip():
        raise ValueError(f"cannot parse expression {text!r}")
    index = {v: k for k, v in enumerate(variables)}
    acc: dict[tuple[int, ...], Fraction] = {}
    for sign, term in zip(pieces[1::2], pieces[2::2]):
        term = term.strip()
        if not term:
            raise ValueError(f"empty term in {text!r}")
        coeff = Fraction(-1 if sign == "-" else 1)
        exps = [0] * len(variables)
        for factor in term.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"empty factor in {text!r}")
            try:
                coeff *= Fraction(factor)
                continue
            except ValueError:
                pass
            m = _VAR.match(factor)
            if not m:
                raise ValueError(f"cannot parse factor {factor!r}")
            name = m.group(1) + m.group(2)
            if name not in index:
                raise ValueError(f"unknown variable {name!r}; expected one of {', '.join(variables)}")
            exps[index[name]] += int(m.group(3) or 1)
        key = tuple(exps)
        acc[key] = acc.get(key, Fraction(0)) + coeff
    return Polynomial(tuple(variables), tuple(sorted((k, v) for k, v in acc.items() if v != 0)))
