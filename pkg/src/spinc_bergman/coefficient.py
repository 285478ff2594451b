"""Exact scalars: Gaussian rationals and Laurent polynomials in pi.

A :class:`Coefficient` is a finite sum ``sum_k c_k * pi**k * sqrt2**s`` with
``c_k`` a Gaussian rational and ``s`` in {0, 1}.  pi is kept formal; the
``sqrt2`` bit only shows up when converting between the coordinate frame
``d/dz_i`` and the orthonormal frame ``w_i = sqrt2 * d/dz_i``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    """``re + im * sqrt(-1)`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real).limit_denominator(10**12),
                       Fraction(x.imag).limit_denominator(10**12))
        return cls(x, 0)

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussianRational(o.re / den, -o.im / den)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        return f"({self.re}+{self.im}*i)"


I = GaussianRational(0, 1)


class Coefficient:
    """Exact scalar ``sum c_(k,s) pi^k sqrt2^s``; immutable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, Number] | None = None):
        clean = {}
        for key, val in (terms or {}).items():
            g = GaussianRational.coerce(val)
            if g:
                clean[key] = g
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, value: Number = 1, pi: int = 0, sqrt2: int = 0) -> "Coefficient":
        v = GaussianRational.coerce(value)
        if sqrt2 >= 0:
            v, s = v * (2 ** (sqrt2 // 2)), sqrt2 % 2
        else:
            m = -sqrt2
            v, s = v / (2 ** ((m + 1) // 2)), m % 2
        return cls({(pi, s): v})

    @classmethod
    def zero(cls) -> "Coefficient":
        return cls()

    @classmethod
    def one(cls) -> "Coefficient":
        return cls.const(1)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    __bool__ = lambda self: bool(self._terms)

    def __add__(self, other):
        o = as_coefficient(other)
        out = dict(self._terms)
        for k, v in o._terms.items():
            out[k] = out.get(k, GaussianRational()) + v
        return Coefficient(out)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-as_coefficient(other))

    def __rsub__(self, other):
        return as_coefficient(other) - self

    def __mul__(self, other):
        o = as_coefficient(other)
        out: dict = {}
        for (k1, s1), v1 in self._terms.items():
            for (k2, s2), v2 in o._terms.items():
                s = s1 + s2
                v = v1 * v2
                if s == 2:
                    s, v = 0, v * 2
                key = (k1 + k2, s)
                out[key] = out.get(key, GaussianRational()) + v
        return Coefficient(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = as_coefficient(other)
        if len(o._terms) != 1:
            raise ZeroDivisionError("can only divide by a single-term coefficient")
        (k, s), v = next(iter(o._terms.items()))
        inv_v = GaussianRational(1) / v
        if s:
            # 1/sqrt2 = sqrt2/2
            inv_v = inv_v / 2
        return self * Coefficient({(-k, s): inv_v})

    def conjugate(self) -> "Coefficient":
        return Coefficient({k: v.conjugate() for k, v in self._terms.items()})

    def __eq__(self, other):
        try:
            o = as_coefficient(other)
        except TypeError:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def evaluate(self) -> complex:
        import math
        return sum(complex(v) * math.pi ** k * math.sqrt(2) ** s
                   for (k, s), v in self._terms.items())

    __complex__ = evaluate

    def __repr__(self):
        return f"Coefficient({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (k, s), v in sorted(self._terms.items()):
            piece = str(v)
            if s:
                piece += "*sqrt2"
            if k:
                piece += f"*pi^{k}"
            parts.append(piece)
        return " + ".join(parts)


def as_coefficient(x) -> Coefficient:
    if isinstance(x, Coefficient):
        return x
    if isinstance(x, (int, Fraction, GaussianRational)):
        return Coefficient.const(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Coefficient")


def PI(power: int = 1) -> Coefficient:
    return Coefficient.const(1, pi=power)


def SQRT2(power: int = 1) -> Coefficient:
    return Coefficient.const(1, sqrt2=power)


def coeff_sum(items: Iterable[Coefficient]) -> Coefficient:
    total = Coefficient()
    for c in items:
        total = total + c
    return total
