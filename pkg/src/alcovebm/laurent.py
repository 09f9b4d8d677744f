"""Laurent polynomials in one variable ``v`` with integer coefficients.

These are the coefficients of Hecke algebra elements and the values of graded
ranks.  The representation is a sparse ``{exponent: coefficient}`` mapping with
no stored zeros, so equality is structural.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping


class LaurentPoly:
    """Immutable element of ``Z[v, v^-1]``.

    >>> v = LaurentPoly.v()
    >>> (v + v**-1) * (v - v**-1)
    v^-2 + -1 + v^2
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        if coeffs:
            for e, a in coeffs.items():
                if a:
                    c[int(e)] = int(a)
        self._c = c
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def v(cls) -> "LaurentPoly":
        return cls({1: 1})

    @classmethod
    def monomial(cls, e: int, a: int = 1) -> "LaurentPoly":
        return cls({e: a})

    @classmethod
    def const(cls, a: int) -> "LaurentPoly":
        return cls({0: a})

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "LaurentPoly":
        """Sum of ``v^e`` over ``exps`` (a multiset)."""
        c: dict[int, int] = {}
        for e in exps:
            c[e] = c.get(e, 0) + 1
        return cls(c)

    # -- access -------------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def __getitem__(self, e: int) -> int:
        return self._c.get(e, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def min_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return min(self._c)

    def max_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return max(self._c)

    def exponents(self) -> list[int]:
        """Exponents listed with multiplicity (coefficients must be >= 0)."""
        out = []
        for e, a in sorted(self._c.items()):
            if a < 0:
                raise ValueError("negative coefficient in a graded rank")
            out.extend([e] * a)
        return out

    def eval_at_one(self) -> int:
        return sum(self._c.values())

    # -- algebra ------------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, a in other._c.items():
            c[e] = c.get(e, 0) + a
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -a for e, a in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, int] = {}
        for e1, a1 in self._c.items():
            for e2, a2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + a1 * a2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials are invertible")
            (e, a), = self._c.items()
            if a not in (1, -1):
                raise ValueError("only unit monomials are invertible")
            return LaurentPoly({e * n: a ** (-n)})
        out = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``v^k``."""
        return LaurentPoly({e + k: a for e, a in self._c.items()})

    def bar(self) -> "LaurentPoly":
        """The involution ``v -> v^-1``."""
        return LaurentPoly({-e: a for e, a in self._c.items()})

    conj = bar

    def nonpositive_part(self) -> "LaurentPoly":
        return LaurentPoly({e: a for e, a in self._c.items() if e <= 0})

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # -- printing -----------------------------------------------------------
    def __str__(self) -> str:
        if not self._c:
            return "0"
        out = ""
        for e, a in sorted(self._c.items()):
            sign = "-" if a < 0 else "+"
            b = abs(a)
            if e == 0:
                body = str(b)
            else:
                mon = "v" if e == 1 else f"v^{e}"
                body = mon if b == 1 else f"{b}{mon}"
            if not out:
                out = body if sign == "+" else f"-{body}"
            else:
                out += f" {sign} {body}"
        return out

    __repr__ = __str__

    _TERM = re.compile(r"^\s*([+-]?\d*)\s*(v(\^\s*(-?\d+))?)?\s*$")

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of ``str``: accepts terms like ``3``, ``-v``, ``2v^-3``."""
        text = text.strip()
        if text == "0":
            return cls()
        c: dict[int, int] = {}
        # split before every sign that is not part of an exponent
        compact = re.sub(r"\s+", "", text)
        for term in (t for t in re.split(r"(?<!\^)(?=[+-])", compact) if t):
            m = cls._TERM.match(term)
            if not m or term == "":
                raise ValueError(f"cannot parse term {term!r}")
            coef_s, vpart, _, exp_s = m.groups()
            if vpart is None:
                a, e = int(coef_s), 0
            else:
                a = int(coef_s + "1") if coef_s in ("", "+", "-") else int(coef_s)
                e = int(exp_s) if exp_s is not None else 1
            c[e] = c.get(e, 0) + a
        return cls(c)


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
V = LaurentPoly.v()
VINV = LaurentPoly.monomial(-1)
