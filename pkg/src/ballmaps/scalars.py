"""Exact scalar arithmetic in a multi-quadratic extension of the Gaussian
rationals, with a high-precision floating fallback.

An exact scalar is a finite sum  sum_d (a_d + i*b_d) * sqrt(d)  where the
a_d, b_d are rationals and the d are distinct squarefree positive integers
(d = 1 carries the rational part).  Radicands are kept squarefree and
merged on every operation, so e.g. sqrt(18) is stored as 3*sqrt(2).  The
field is closed under +, -, *, conjugation and division; division inverts
by multiplying through the Galois conjugates of every radical present.

Values are immutable, so scalars are safe to share across threads.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import isqrt
from typing import Union

import mpmath

logger = logging.getLogger(__name__)

#: Inversion of a sum spanning more than this many distinct radicals falls
#: back to the float backend (the conjugate product doubles per radical).
RADICAL_LIMIT = 4

_SIGN_PREC_LIMIT = 1 << 14


class SqrtNotRepresentable(ValueError):
    """Square root does not stay inside the quadratic-radical field."""


class FloatContext:
    """Working precision (bits) and zero tolerance of the float backend.

    Setting the precision also raises mpmath's global working precision,
    so that every operation on float-backend payloads (including plain
    negation and conjugation, which mpmath rounds) runs at full width.
    """

    def __init__(self, prec: int = 128, eps: float = 1e-25):
        self.prec = prec
        self.eps = eps
        self._sync()

    def set(self, prec: int | None = None, eps: float | None = None) -> None:
        if prec is not None:
            self.prec = int(prec)
        if eps is not None:
            self.eps = float(eps)
        self._sync()

    def _sync(self) -> None:
        mpmath.mp.prec = max(int(self.prec), 53)


FLOAT_CONTEXT = FloatContext()

RationalLike = Union[int, Fraction]


def _squarefree(n: int) -> tuple[int, int]:
    """Decompose n > 0 as s*s*r with r squarefree; returns (s, r)."""
    s, r = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                r *= p
        p += 1 if p == 2 else 2
    return s, r * n


def _fraction_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a rational, or None if x is not a square."""
    if x < 0:
        return None
    pn, pd = isqrt(x.numerator), isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return None


def _workprec():
    return mpmath.workprec(FLOAT_CONTEXT.prec)


class Scalar:
    """A complex number, exact (radical field) or floating (mpmath).

    Exact payload: dict {d: (a, b)} for sum (a + i b) sqrt(d) with d
    squarefree positive, a/b Fractions, no all-zero entries.  Float
    payload: an mpmath ``mpc``.
    """

    __slots__ = ("_terms", "_f")

    def __init__(self, terms=None, f=None):
        self._terms = terms
        self._f = f

    # -- constructors -------------------------------------------------

    @classmethod
    def exact(cls, re: RationalLike = 0, im: RationalLike = 0) -> "Scalar":
        re, im = Fraction(re), Fraction(im)
        if re == 0 and im == 0:
            return cls({}, None)
        return cls({1: (re, im)}, None)

    @classmethod
    def from_terms(cls, terms: dict) -> "Scalar":
        clean = {d: (Fraction(a), Fraction(b)) for d, (a, b) in terms.items()
                 if a != 0 or b != 0}
        return cls(clean, None)

    @classmethod
    def sqrt_rational(cls, x: RationalLike) -> "Scalar":
        """sqrt of a non-negative rational; sqrt(p/q) normalizes to sqrt(pq)/q."""
        x = Fraction(x)
        if x < 0:
            raise SqrtNotRepresentable("negative radicand")
        if x == 0:
            return cls.zero()
        n = x.numerator * x.denominator
        s, r = _squarefree(n)
        coeff = Fraction(s, x.denominator)
        if r == 1:
            return cls.exact(coeff)
        return cls({r: (coeff, Fraction(0))}, None)

    @classmethod
    def from_float(cls, re, im=0) -> "Scalar":
        with _workprec():
            return cls(None, mpmath.mpc(re, im))

    @classmethod
    def zero(cls) -> "Scalar":
        return cls({}, None)

    @classmethod
    def one(cls) -> "Scalar":
        return cls.exact(1)

    @classmethod
    def i(cls) -> "Scalar":
        return cls.exact(0, 1)

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar.exact(x)
        if isinstance(x, float):
            return Scalar.from_float(x)
        if isinstance(x, complex):
            return Scalar.from_float(x.real, x.imag)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    # -- backend handling ---------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self._terms is not None

    def to_float(self) -> "Scalar":
        if not self.is_exact:
            return self
        return Scalar(None, self.to_mpc())

    def to_mpc(self) -> mpmath.mpc:
        with _workprec():
            if not self.is_exact:
                return mpmath.mpc(self._f)
            total = mpmath.mpc(0)
            for d, (a, b) in self._terms.items():
                root = mpmath.sqrt(d) if d != 1 else mpmath.mpf(1)
                total += mpmath.mpc(
                    mpmath.mpf(a.numerator) / a.denominator,
                    mpmath.mpf(b.numerator) / b.denominator) * root
            return total

    def __complex__(self) -> complex:
        return complex(self.to_mpc())

    def __float__(self) -> float:
        c = complex(self)
        if abs(c.imag) > 1e-9 * (1 + abs(c.real)):
            raise ValueError("scalar is not real")
        return c.real

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = Scalar.coerce(other)
        if self.is_exact and other.is_exact:
            terms = dict(self._terms)
            for d, (a, b) in other._terms.items():
                ca, cb = terms.get(d, (Fraction(0), Fraction(0)))
                na, nb = ca + a, cb + b
                if na == 0 and nb == 0:
                    terms.pop(d, None)
                else:
                    terms[d] = (na, nb)
            return Scalar(terms, None)
        with _workprec():
            return Scalar(None, self.to_mpc() + other.to_mpc())

    __radd__ = __add__

    def __neg__(self):
        if self.is_exact:
            return Scalar({d: (-a, -b) for d, (a, b) in self._terms.items()}, None)
        with _workprec():
            return Scalar(None, -self._f)

    def __sub__(self, other):
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) + (-self)

    def __mul__(self, other):
        other = Scalar.coerce(other)
        if self.is_exact and other.is_exact:
            terms: dict = {}
            for d1, (a1, b1) in self._terms.items():
                for d2, (a2, b2) in other._terms.items():
                    ca = a1 * a2 - b1 * b2
                    cb = a1 * b2 + b1 * a2
                    if ca == 0 and cb == 0:
                        continue
                    if d1 == d2:
                        d, s = 1, d1
                    else:
                        s, d = _squarefree(d1 * d2)
                    ca, cb = ca * s, cb * s
                    pa, pb = terms.get(d, (Fraction(0), Fraction(0)))
                    terms[d] = (pa + ca, pb + cb)
            return Scalar({d: ab for d, ab in terms.items()
                           if ab[0] != 0 or ab[1] != 0}, None)
        with _workprec():
            return Scalar(None, self.to_mpc() * other.to_mpc())

    __rmul__ = __mul__

    def conj(self) -> "Scalar":
        if self.is_exact:
            return Scalar({d: (a, -b) for d, (a, b) in self._terms.items()}, None)
        with _workprec():
            return Scalar(None, mpmath.conj(self._f))

    def _flip_radical(self, d0: int) -> "Scalar":
        return Scalar({d: ((-a, -b) if d == d0 else (a, b))
                       for d, (a, b) in self._terms.items()}, None)

    def invert(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("scalar division by zero")
        if not self.is_exact:
            with _workprec():
                return Scalar(None, 1 / self._f)
        radicals = sorted(d for d in self._terms if d != 1)
        if len(radicals) > RADICAL_LIMIT:
            logger.warning(
                "inverting a sum over %d radicals; degrading to float backend",
                len(radicals))
            with _workprec():
                return Scalar(None, 1 / self.to_mpc())
        num = Scalar.one()
        cur = self
        for d in radicals:
            flipped = cur._flip_radical(d)
            num = num * flipped
            cur = cur * flipped
        # cur is now Gaussian rational a + ib
        a, b = cur._terms.get(1, (Fraction(0), Fraction(0)))
        norm = a * a + b * b
        return num * Scalar.exact(a / norm, -b / norm)

    def __truediv__(self, other):
        return self * Scalar.coerce(other).invert()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.invert()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("scalar powers must be integers")
        if k < 0:
            return self.invert() ** (-k)
        out = Scalar.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates and parts -----------------------------------------

    def is_zero(self) -> bool:
        if self.is_exact:
            return not self._terms
        with _workprec():
            return mpmath.fabs(self._f) < FLOAT_CONTEXT.eps

    def __eq__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        if not self.is_exact:
            raise TypeError("float-backend scalars are unhashable")
        return hash(tuple(sorted(self._terms.items())))

    def real(self) -> "Scalar":
        if self.is_exact:
            return Scalar({d: (a, Fraction(0)) for d, (a, b) in self._terms.items()
                           if a != 0}, None)
        with _workprec():
            return Scalar(None, mpmath.mpc(self._f.real, 0))

    def imag(self) -> "Scalar":
        if self.is_exact:
            return Scalar({d: (b, Fraction(0)) for d, (a, b) in self._terms.items()
                           if b != 0}, None)
        with _workprec():
            return Scalar(None, mpmath.mpc(self._f.imag, 0))

    def is_real(self) -> bool:
        return self.imag().is_zero()

    def is_rational(self) -> bool:
        return self.is_exact and self.is_real() and set(self._terms) <= {1}

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("scalar is not an exact rational")
        return self._terms.get(1, (Fraction(0), Fraction(0)))[0]

    def abs2(self) -> "Scalar":
        """|x|^2 = x * conj(x); always real."""
        return self * self.conj()

    # -- sign and order (real scalars) ---------------------------------

    def sign(self) -> int:
        """Exact sign of a real scalar (-1, 0, 1)."""
        if not self.is_real():
            raise ValueError("sign of a non-real scalar")
        if self.is_zero():
            return 0
        if not self.is_exact:
            return 1 if self._f.real > 0 else -1
        parts = {d: a for d, (a, _) in self._terms.items() if a != 0}
        if set(parts) == {1}:
            return 1 if parts[1] > 0 else -1
        prec = 64
        iv = mpmath.iv
        while prec <= _SIGN_PREC_LIMIT:
            old = iv.prec
            iv.prec = prec
            try:
                total = iv.mpf(0)
                for d, a in parts.items():
                    t = iv.mpf(a.numerator) / iv.mpf(a.denominator)
                    if d != 1:
                        t *= iv.sqrt(iv.mpf(d))
                    total += t
                if total.a > 0:
                    return 1
                if total.b < 0:
                    return -1
            finally:
                iv.prec = old
            prec *= 2
        raise ArithmeticError("sign undecided at maximum precision")

    def __lt__(self, other):
        return (self - Scalar.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - Scalar.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - Scalar.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - Scalar.coerce(other)).sign() >= 0

    # -- square root ----------------------------------------------------

    def sqrt(self) -> "Scalar":
        """Square root staying inside the field.

        Exact inputs must be a non-negative rational, a rational times a
        single radical that happens to be a perfect square in the field
        (e.g. 3 + 2*sqrt(2)), or a negative rational (handled as
        i*sqrt(-x)).  Anything else raises SqrtNotRepresentable; callers
        that can tolerate approximation should catch it and retry on
        ``to_float()``.
        """
        if not self.is_exact:
            with _workprec():
                return Scalar(None, mpmath.sqrt(self._f))
        if self.is_zero():
            return Scalar.zero()
        if self.is_rational():
            x = self.as_fraction()
            if x >= 0:
                return Scalar.sqrt_rational(x)
            return Scalar.i() * Scalar.sqrt_rational(-x)
        if self.is_real():
            parts = {d: a for d, (a, _) in self._terms.items() if a != 0}
            rads = [d for d in parts if d != 1]
            if len(rads) == 1:
                d = rads[0]
                A, B = parts.get(1, Fraction(0)), parts[d]
                disc = A * A - B * B * d
                s = _fraction_sqrt(disc) if disc >= 0 else None
                if s is not None:
                    for x2 in ((A + s) / 2, (A - s) / 2):
                        x = _fraction_sqrt(x2)
                        if x and x != 0:
                            y = B / (2 * x)
                            cand = Scalar.from_terms({1: (x, Fraction(0)),
                                                      d: (y, Fraction(0))})
                            if (cand * cand - self).is_zero() and cand.sign() > 0:
                                return cand
        raise SqrtNotRepresentable(f"sqrt of {self!r} leaves the radical field")

    # -- formatting -----------------------------------------------------

    def _fmt_fraction(self, x: Fraction) -> str:
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def to_expr(self) -> str:
        """Render in the coefficient-expression grammar (parseable back)."""
        if not self.is_exact:
            c = complex(self)
            if c.imag == 0:
                return repr(c.real)
            if c.real == 0:
                return f"{repr(c.imag)}*i"
            sign = "+" if c.imag >= 0 else "-"
            return f"{repr(c.real)} {sign} {repr(abs(c.imag))}*i"
        if not self._terms:
            return "0"
        pieces = []
        for d in sorted(self._terms):
            a, b = self._terms[d]
            for coeff, unit in ((a, ""), (b, "i")):
                if coeff == 0:
                    continue
                mag = abs(coeff)
                factors = []
                if mag != 1 or (unit == "" and d == 1):
                    factors.append(self._fmt_fraction(mag))
                if unit:
                    factors.append("i")
                if d != 1:
                    factors.append(f"sqrt({d})")
                body = "*".join(factors) if factors else "1"
                pieces.append(("-" if coeff < 0 else "+", body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sgn, body in pieces[1:]:
            out += f" {sgn} {body}"
        return out

    def __repr__(self):
        if self.is_exact:
            return f"Scalar({self.to_expr()})"
        return f"Scalar(~{complex(self)})"


ZERO = Scalar.zero()
ONE = Scalar.one()
I = Scalar.i()


def rational(p, q=1) -> Scalar:
    return Scalar.exact(Fraction(p, q))


def sqrt(x) -> Scalar:
    return Scalar.coerce(x).sqrt()
