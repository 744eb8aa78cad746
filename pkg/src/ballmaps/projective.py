"""Projective points, hyperplanes, the two domain models, and the Cayley
transform.

Conventions used throughout the package:

* points are columns of homogeneous coordinates ``[z_1 : ... : z_n : t]``
  and transform as ``p -> A p``;
* hyperplanes are covectors ``c`` with equation
  ``sum_j c_j z_j + c_{n+1} t = 0`` and push forward as ``c -> c A^{-1}``,
  so point membership commutes with transport.

The ball region is ``sum |z_j|^2 < |t|^2``; the Siegel region is
``(z_n tbar - t z_n bar)/(2i) > |z'|^2``.  Both membership tests reduce to
an exact sign computation of a real scalar, so they are scale invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import sampling
from .linalg import (Matrix, identity, mat, mat_inverse, mat_vec, vec_mat,
                     vec_equal_up_to_scale)
from .scalars import Scalar, ZERO, ONE, I

BALL = "ball"
SIEGEL = "siegel"

INTERIOR = "interior"
BOUNDARY = "boundary"
CLOSURE = "closure"


@dataclass(frozen=True)
class ProjPoint:
    """Point of CP^n, coordinates ``(z_1, ..., z_n, t)``, not all zero."""

    coords: tuple[Scalar, ...]

    def __post_init__(self):
        if all(c.is_zero() for c in self.coords):
            raise ValueError("projective point needs a nonzero coordinate")

    @classmethod
    def of(cls, *coords) -> "ProjPoint":
        return cls(tuple(Scalar.coerce(c) for c in coords))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def same_as(self, other: "ProjPoint") -> bool:
        return vec_equal_up_to_scale(self.coords, other.coords)

    def transform(self, a: Matrix) -> "ProjPoint":
        return ProjPoint(mat_vec(a, self.coords))

    def to_complex(self) -> tuple[complex, ...]:
        return tuple(complex(c) for c in self.coords)

    def __repr__(self):
        return "[" + " : ".join(c.to_expr() if c.is_exact else str(complex(c))
                                for c in self.coords) + "]"


@dataclass(frozen=True)
class DomainModel:
    """Projectivized ball B^n_1 or Siegel region S^n_1."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (BALL, SIEGEL):
            raise ValueError(f"unknown model {self.kind!r}")
        if self.kind == SIEGEL and self.n < 1:
            raise ValueError("Siegel model needs n >= 1")

    def membership_value(self, p: ProjPoint) -> Scalar:
        """Real scalar, negative inside the region, zero on its boundary."""
        if p.n != self.n:
            raise ValueError("dimension mismatch")
        c = p.coords
        if self.kind == BALL:
            total = ZERO
            for z in c[:-1]:
                total = total + z.abs2()
            return total - c[-1].abs2()
        zn, t = c[self.n - 1], c[self.n]
        height = ((zn * t.conj()).imag())
        total = ZERO
        for z in c[:self.n - 1]:
            total = total + z.abs2()
        return total - height

    def membership_value_complex(self, p: Sequence[complex]) -> float:
        if self.kind == BALL:
            return sum(abs(z) ** 2 for z in p[:-1]) - abs(p[-1]) ** 2
        zn, t = p[self.n - 1], p[self.n]
        return (sum(abs(z) ** 2 for z in p[:self.n - 1])
                - (zn * t.conjugate()).imag)

    def contains(self, p: ProjPoint, where: str = INTERIOR) -> bool:
        s = self.membership_value(p).sign()
        if where == INTERIOR:
            return s < 0
        if where == BOUNDARY:
            return s == 0
        if where == CLOSURE:
            return s <= 0
        raise ValueError(f"unknown region {where!r}")


@dataclass(frozen=True)
class Hyperplane:
    """Hyperplane of CP^n with a model tag controlling disjointness tests."""

    covector: tuple[Scalar, ...]
    model: str

    def __post_init__(self):
        if all(c.is_zero() for c in self.covector):
            raise ValueError("hyperplane covector must be nonzero")
        if self.model not in (BALL, SIEGEL):
            raise ValueError(f"unknown model {self.model!r}")

    @classmethod
    def from_covector(cls, cov: Sequence, model: str) -> "Hyperplane":
        return cls(tuple(Scalar.coerce(c) for c in cov), model)

    @classmethod
    def from_siegel_coeffs(cls, k: Sequence) -> "Hyperplane":
        """Hyperplane -t = sum K_j z_j of the Siegel model."""
        cov = tuple(Scalar.coerce(c) for c in k) + (ONE,)
        return cls(cov, SIEGEL)

    @classmethod
    def from_ball_form(cls, a: Sequence, a_last) -> "Hyperplane":
        """Hyperplane sum a_j z_j - a_last * t = 0 of the ball model."""
        cov = tuple(Scalar.coerce(c) for c in a) + (-Scalar.coerce(a_last),)
        return cls(cov, BALL)

    @classmethod
    def infinity(cls, n: int, model: str = BALL) -> "Hyperplane":
        return cls((ZERO,) * n + (ONE,), model)

    @property
    def n(self) -> int:
        return len(self.covector) - 1

    def value_at(self, p: ProjPoint) -> Scalar:
        return sum((c * x for c, x in zip(self.covector, p.coords)), ZERO)

    def contains_point(self, p: ProjPoint) -> bool:
        return self.value_at(p).is_zero()

    def same_as(self, other: "Hyperplane") -> bool:
        return (self.model == other.model
                and vec_equal_up_to_scale(self.covector, other.covector))

    def siegel_coeffs(self) -> tuple[Scalar, ...]:
        """Coefficients K of the normalized form -t = sum K_j z_j."""
        t = self.covector[-1]
        if t.is_zero():
            raise ValueError("t-coefficient vanishes; no normalized form")
        inv = t.invert()
        return tuple(c * inv for c in self.covector[:-1])

    def transform(self, a: Matrix) -> "Hyperplane":
        """Push forward by the point transformation ``a``."""
        return Hyperplane(vec_mat(self.covector, mat_inverse(a)), self.model)

    def linear_form_poly(self):
        from .poly import Poly
        nv = self.n + 1
        return Poly(nv, {tuple(1 if j == i else 0 for j in range(nv)): c
                         for i, c in enumerate(self.covector)
                         if not c.is_zero()})

    def __repr__(self):
        return (f"Hyperplane({[c.to_expr() if c.is_exact else complex(c) for c in self.covector]},"
                f" {self.model})")


def ball_disjoint(h: Hyperplane) -> bool:
    """True iff H misses the closed ball region (exact norm comparison)."""
    if h.model != BALL:
        raise ValueError("ball_disjoint expects a ball-model hyperplane")
    t = h.covector[-1]
    if t.is_zero():
        return False
    lhs = sum((c.abs2() for c in h.covector[:-1]), ZERO)
    return (lhs - t.abs2()).sign() < 0


def ball_intersection_witness(h: Hyperplane) -> ProjPoint | None:
    """A point of H inside the closed ball, or None when H is disjoint."""
    if ball_disjoint(h):
        return None
    t = h.covector[-1]
    if t.is_zero():
        return ProjPoint((ZERO,) * h.n + (ONE,))
    a = tuple(-(c / t) for c in h.covector[:-1])
    beta = sum((x.abs2() for x in a), ZERO)
    # nearest point of the affine hyperplane sum a_j z_j = 1 to the origin
    scale = beta.invert()
    z = tuple(x.conj() * scale for x in a)
    return ProjPoint(z + (ONE,))


def siegel_disjoint(h: Hyperplane) -> bool:
    """Closed-region disjointness for the Siegel model.

    In the normalized form -t = sum K_j z_j this is the inequality
    4 Im(K_n) + sum_{j<n} |K_j|^2 < 0.  A vanishing t-coefficient never
    gives a disjoint hyperplane (see siegel_intersection_witness).
    """
    if h.model != SIEGEL:
        raise ValueError("siegel_disjoint expects a Siegel-model hyperplane")
    if h.covector[-1].is_zero():
        return False
    k = h.siegel_coeffs()
    val = Scalar.exact(4) * k[-1].imag()
    for c in k[:-1]:
        val = val + c.abs2()
    return val.sign() < 0


def siegel_intersection_witness(h: Hyperplane) -> ProjPoint | None:
    """A point of H in the closed Siegel region, or None when disjoint.

    For the normalized form the equality case of the disjointness
    inequality is attained at z_j = (i/2) conj(K_j) w; that point lies in
    the closure exactly when the inequality fails.
    """
    if siegel_disjoint(h):
        return None
    n = h.n
    t = h.covector[-1]
    model = DomainModel(SIEGEL, n)
    if t.is_zero():
        # H contains [0:...:0:1] when the z'-part allows w-freedom; otherwise
        # solve one z'_j from w = 1 and push the height up by choosing t.
        cprime = h.covector[:-1]
        idx = next((j for j in range(n - 1)
                    if not cprime[j].is_zero()), None)
        if cprime[-1].is_zero() or idx is None:
            # kernel of the z-part contains a vector with w != 0 (or H is
            # exactly {w = 0}); either way [0:...:0:w:t] works
            w = ONE if cprime[-1].is_zero() else ZERO
            if w.is_zero():
                p = ProjPoint((ZERO,) * n + (ONE,))
            else:
                p = ProjPoint((ZERO,) * (n - 1) + (w, -I))
        else:
            w = ONE
            zp = [ZERO] * (n - 1)
            zp[idx] = -(cprime[-1] / cprime[idx])
            big = Scalar.exact(1) + sum((z.abs2() for z in zp), ZERO)
            tval = -(I * big)  # height Im(w conj(t)) = big >= |z'|^2
            p = ProjPoint(tuple(zp) + (w, tval))
        if not h.contains_point(p) or not model.contains(p, CLOSURE):
            raise AssertionError("witness construction failed")
        return p
    k = h.siegel_coeffs()
    half_i = I / 2
    zp = tuple((half_i * c.conj()) for c in k[:-1])
    w = ONE
    tval = -(sum((c * z for c, z in zip(k[:-1], zp)), ZERO) + k[-1])
    p = ProjPoint(zp + (w, tval))
    if not h.contains_point(p) or not model.contains(p, CLOSURE):
        raise AssertionError("witness construction failed")
    return p


SIEGEL_TO_BALL = "siegel_to_ball"
BALL_TO_SIEGEL = "ball_to_siegel"


def cayley_matrix(n: int) -> Matrix:
    """Linear map [2z' : t + i z_n : t - i z_n] sending S^n_1 onto B^n_1."""
    rows = []
    for j in range(n - 1):
        row = [ZERO] * (n + 1)
        row[j] = Scalar.exact(2)
        rows.append(row)
    up = [ZERO] * (n + 1)
    up[n - 1], up[n] = I, ONE
    dn = [ZERO] * (n + 1)
    dn[n - 1], dn[n] = -I, ONE
    rows.append(up)
    rows.append(dn)
    return mat(rows)


def cayley(p: ProjPoint, direction: str, n: int | None = None) -> ProjPoint:
    n = p.n if n is None else n
    m = cayley_matrix(n)
    if direction == BALL_TO_SIEGEL:
        m = mat_inverse(m)
    elif direction != SIEGEL_TO_BALL:
        raise ValueError(f"unknown direction {direction!r}")
    return p.transform(m)


def cayley_hyperplane(h: Hyperplane, direction: str) -> Hyperplane:
    m = cayley_matrix(h.n)
    if direction == BALL_TO_SIEGEL:
        if h.model != BALL:
            raise ValueError("hyperplane is not in the ball model")
        m = mat_inverse(m)
        new_model = SIEGEL
    elif direction == SIEGEL_TO_BALL:
        if h.model != SIEGEL:
            raise ValueError("hyperplane is not in the Siegel model")
        new_model = BALL
    else:
        raise ValueError(f"unknown direction {direction!r}")
    moved = h.transform(m)
    return Hyperplane(moved.covector, new_model)


def sample_points_on_hyperplane(h: Hyperplane, count: int,
                                seed: int = 0) -> list[tuple[complex, ...]]:
    """Float points on H (solve the pivot coordinate), for sampling oracles."""
    cov = [complex(c) for c in h.covector]
    pivot = max(range(len(cov)), key=lambda j: abs(cov[j]))
    free = [j for j in range(len(cov)) if j != pivot]
    pts = []
    for vals in sampling.complex_box_points(len(free), count, seed):
        coords = [0j] * len(cov)
        for j, v in zip(free, vals):
            coords[j] = v
        coords[pivot] = -sum(cov[j] * coords[j] for j in free) / cov[pivot]
        pts.append(tuple(coords))
    return pts


def disjoint_by_sampling(h: Hyperplane, count: int = 2000, seed: int = 0,
                         tol: float = 1e-9) -> bool:
    """Sampling + constructive-witness oracle for closed-region disjointness.

    Independent of the analytic inequalities: it evaluates the membership
    form at float samples on H and at the exact constructed witness.
    """
    model = DomainModel(h.model, h.n)
    witness = (ball_intersection_witness(h) if h.model == BALL
               else siegel_intersection_witness(h))
    if witness is not None:
        return False
    for p in sample_points_on_hyperplane(h, count, seed):
        if model.membership_value_complex(p) <= tol * _scale(p):
            return False
    return True


def _scale(p: Sequence[complex]) -> float:
    return max(1.0, max(abs(x) ** 2 for x in p))
