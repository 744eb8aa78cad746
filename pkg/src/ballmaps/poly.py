"""Multivariate polynomials over Scalar coefficients.

Terms are keyed by exponent tuples; zero coefficients are never stored.
The monomial order used for division is graded lexicographic with the
*last* declared variable largest (z1 < z2 < ... < t), which keeps
remainders deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .scalars import Scalar, ZERO, ONE

ExpVec = tuple[int, ...]


def _grlex_key(exp: ExpVec):
    return (sum(exp), tuple(reversed(exp)))


class Poly:
    """Polynomial in ``nvars`` variables with Scalar coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[ExpVec, Scalar] | None = None,
                 _clean: bool = True):
        self.nvars = nvars
        if terms is None:
            terms = {}
        if _clean:
            terms = {e: c for e, c in terms.items() if not c.is_zero()}
        self.terms = terms

    # -- constructors --------------------------------------------------

    @classmethod
    def constant(cls, c, nvars: int) -> "Poly":
        c = Scalar.coerce(c)
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): ONE})

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars, {})

    @classmethod
    def monomial(cls, coeff, exps: Sequence[int]) -> "Poly":
        return cls(len(exps), {tuple(exps): Scalar.coerce(coeff)})

    # -- basic queries --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, ZERO)

    def coeff(self, exps: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exps), ZERO)

    def leading(self) -> tuple[ExpVec, Scalar]:
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def is_exact(self) -> bool:
        return all(c.is_exact for c in self.terms.values())

    def variables_used(self) -> set[int]:
        used: set[int] = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return used

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable-count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, ZERO) + c
            if s.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = s
        return Poly(self.nvars, terms, _clean=False)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()},
                    _clean=False)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            terms: dict[ExpVec, Scalar] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    prod = c1 * c2
                    s = terms.get(e)
                    terms[e] = prod if s is None else s + prod
            return Poly(self.nvars, terms)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = Scalar.coerce(c)
        if c.is_zero():
            return Poly.zero(self.nvars)
        return Poly(self.nvars, {e: k * c for e, k in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative polynomial power")
        out = Poly.constant(ONE, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and (self - other).is_zero()

    def map_coeffs(self, fn: Callable[[Scalar], Scalar]) -> "Poly":
        return Poly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def conj_coeffs(self) -> "Poly":
        return self.map_coeffs(lambda c: c.conj())

    def to_float(self) -> "Poly":
        return self.map_coeffs(lambda c: c.to_float())

    # -- evaluation and substitution -------------------------------------

    def eval(self, point: Sequence) -> Scalar:
        point = [Scalar.coerce(p) for p in point]
        if len(point) != self.nvars:
            raise ValueError("evaluation point has wrong length")
        powers: list[dict[int, Scalar]] = [{0: ONE} for _ in range(self.nvars)]

        def power(i: int, k: int) -> Scalar:
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * point[i]
            return cache[k]

        total = ZERO
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def eval_complex(self, point: Sequence[complex]) -> complex:
        """Fast double-precision evaluation (for sampling oracles)."""
        total = 0j
        for e, c in self.terms.items():
            term = complex(c)
            for i, k in enumerate(e):
                if k:
                    term *= point[i] ** k
            total += term
        return total

    def substitute(self, replacements: Sequence["Poly"]) -> "Poly":
        """Substitute replacements[i] (all sharing one ring) for variable i."""
        if len(replacements) != self.nvars:
            raise ValueError("need one replacement per variable")
        nv = replacements[0].nvars
        out = Poly.zero(nv)
        cache: list[dict[int, Poly]] = [
            {0: Poly.constant(ONE, nv)} for _ in range(self.nvars)]

        def power(i: int, k: int) -> Poly:
            c = cache[i]
            if k not in c:
                c[k] = power(i, k - 1) * replacements[i]
            return c[k]

        for e, coeff in self.terms.items():
            term = Poly.constant(coeff, nv)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def compose_linear(self, matrix: Sequence[Sequence[Scalar]]) -> "Poly":
        """p(M x): substitute variable i by sum_j M[i][j] * x_j."""
        nv = len(matrix[0])
        reps = [Poly(nv, {tuple(1 if j == c else 0 for c in range(nv)):
                          Scalar.coerce(matrix[i][j])
                          for j in range(nv)})
                for i in range(self.nvars)]
        return self.substitute(reps)

    def extend_vars(self, nvars: int) -> "Poly":
        """Reinterpret in a larger ring (new trailing variables)."""
        if nvars < self.nvars:
            raise ValueError("cannot shrink variable count")
        pad = (0,) * (nvars - self.nvars)
        return Poly(nvars, {e + pad: c for e, c in self.terms.items()},
                    _clean=False)

    # -- homogenization ---------------------------------------------------

    def homogenize(self, k: int) -> "Poly":
        """t^k * p(z/t): adds one trailing variable t; degree-k homogeneous."""
        d = self.degree()
        if k < d:
            raise ValueError(f"homogenization degree {k} below deg {d}")
        terms = {e + (k - sum(e),): c for e, c in self.terms.items()}
        return Poly(self.nvars + 1, terms, _clean=False)

    def dehomogenize(self) -> "Poly":
        """Set the last variable to 1."""
        terms: dict[ExpVec, Scalar] = {}
        for e, c in self.terms.items():
            base = e[:-1]
            s = terms.get(base, ZERO) + c
            if s.is_zero():
                terms.pop(base, None)
            else:
                terms[base] = s
        return Poly(self.nvars - 1, terms, _clean=False)

    # -- division ----------------------------------------------------------

    def divide(self, g: "Poly") -> tuple["Poly", "Poly"]:
        """Single-divisor division: self = q*g + r, no term of r reducible."""
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ge, gc = g.leading()
        gc_inv = gc.invert()
        q = Poly.zero(self.nvars)
        r = Poly.zero(self.nvars)
        work = self
        while not work.is_zero():
            we, wc = work.leading()
            diff = tuple(a - b for a, b in zip(we, ge))
            if all(d >= 0 for d in diff):
                t = Poly(self.nvars, {diff: wc * gc_inv})
                q = q + t
                work = work - t * g
            else:
                t = Poly(self.nvars, {we: wc})
                r = r + t
                work = work - t
        return q, r

    def exact_divide(self, g: "Poly") -> "Poly":
        q, r = self.divide(g)
        if not r.is_zero():
            raise NotDivisible(r)
        return q

    # -- presentation --------------------------------------------------------

    def sorted_terms(self) -> list[tuple[ExpVec, Scalar]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]),
                      reverse=True)

    def to_expr(self, names: Sequence[str]) -> str:
        if len(names) != self.nvars:
            raise ValueError("need one name per variable")
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"{names[i]}^{k}" if k > 1 else names[i]
                for i, k in enumerate(e) if k)
            cexpr = c.to_expr()
            if mono:
                if cexpr == "1":
                    parts.append(mono)
                elif cexpr == "-1":
                    parts.append(f"-{mono}")
                else:
                    wrap = cexpr if ("+" not in cexpr and "-" not in cexpr[1:]
                                     and " " not in cexpr) else f"({cexpr})"
                    parts.append(f"{wrap}*{mono}")
            else:
                parts.append(cexpr if ("+" not in cexpr and " " not in cexpr)
                             else f"({cexpr})")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        names = [f"x{i}" for i in range(self.nvars)]
        return f"Poly({self.to_expr(names)})"


class NotDivisible(ArithmeticError):
    """Raised by exact_divide; carries the nonzero remainder."""

    def __init__(self, remainder: Poly):
        super().__init__("polynomial is not divisible")
        self.remainder = remainder


@dataclass(frozen=True)
class HomPoly:
    """A homogeneous polynomial together with its (checked) degree."""

    poly: Poly
    degree: int

    def __post_init__(self):
        for e in self.poly.terms:
            if sum(e) != self.degree:
                raise ValueError("polynomial is not homogeneous of the "
                                 f"stated degree {self.degree}")

    @classmethod
    def wrap(cls, p: Poly) -> "HomPoly":
        if not p.is_homogeneous():
            raise ValueError("polynomial is not homogeneous")
        return cls(p, max(p.degree(), 0))


def homogenize(p: Poly, k: int) -> HomPoly:
    return HomPoly(p.homogenize(k), k)


def poly_gcd_univariate(p: Poly, q: Poly) -> Poly:
    """Monic gcd of univariate polynomials via the Euclidean algorithm."""
    if p.nvars != 1 or q.nvars != 1:
        raise ValueError("univariate gcd needs univariate inputs")
    a, b = p, q
    while not b.is_zero():
        _, r = a.divide(b)
        a, b = b, r
    if a.is_zero():
        return a
    _, lc = a.leading()
    return a.scale(lc.invert())


def restrict_to_line(p: Poly, direction: Sequence[Scalar],
                     offset: Sequence[Scalar]) -> Poly:
    """Univariate restriction p(direction*s + offset)."""
    reps = []
    for d, o in zip(direction, offset):
        reps.append(Poly(1, {(1,): Scalar.coerce(d), (0,): Scalar.coerce(o)}))
    return p.substitute(reps)


def coprime_check(polys: Iterable[Poly], trials: int = 5,
                  seed: int = 0) -> bool:
    """Probabilistic check that the family shares no common factor.

    Restricts every polynomial to ``trials`` random small-integer lines and
    takes univariate gcds; reports coprime iff every line gcd is constant.
    Deterministic for a given seed.  A shared factor is detected with
    overwhelming probability; a False result may (rarely) be a false alarm
    from an unlucky line through a common zero.
    """
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return False
    if any(p.is_constant() for p in polys):
        return True
    nvars = polys[0].nvars
    rng = random.Random(seed)
    for _ in range(max(1, trials)):
        direction = [Scalar.exact(rng.randint(1, 19)) for _ in range(nvars)]
        offset = [Scalar.exact(rng.randint(-19, 19)) for _ in range(nvars)]
        g = restrict_to_line(polys[0], direction, offset)
        for p in polys[1:]:
            if g.degree() <= 0:
                break
            g = poly_gcd_univariate(g, restrict_to_line(p, direction, offset))
        if g.degree() > 0:
            return False
    return True
