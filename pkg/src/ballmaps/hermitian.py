"""Hermitian (z, zbar) forms and the sphere-divisibility properness test.

A Hermitian form on C^n is stored as a polynomial in 2n variables
``(z_1, ..., z_n, w_1, ..., w_n)`` with ``w_j`` standing for ``conj(z_j)``.
A ball map F = P/q is proper exactly when ``||P||^2 - |q|^2`` vanishes on
the unit sphere, which (the complexified sphere being irreducible and the
real sphere Zariski-dense in it) reduces to exact divisibility by
``sum_j z_j w_j - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import NotDivisible, Poly
from .projective import BALL
from .ratmap import RationalMap
from .sampling import complex_ball_points
from .scalars import Scalar, ZERO, ONE

PROPER = "proper"
NOT_SPHERE_PRESERVING = "not_sphere_preserving"
DENOMINATOR_VANISHES = "denominator_vanishes"


@dataclass(frozen=True)
class HermForm:
    """Polynomial in (z, w) = (z, zbar) with the Hermitian symmetry."""

    n: int
    poly: Poly

    def __post_init__(self):
        if self.poly.nvars != 2 * self.n:
            raise ValueError("a Hermitian form on C^n needs 2n variables")

    def swap_conj(self) -> Poly:
        terms = {}
        for e, c in self.poly.terms.items():
            terms[e[self.n:] + e[:self.n]] = c.conj()
        return Poly(self.poly.nvars, terms, _clean=False)

    def is_symmetric(self) -> bool:
        return (self.poly - self.swap_conj()).is_zero()

    def eval_at(self, z: tuple[complex, ...]) -> complex:
        point = tuple(z) + tuple(x.conjugate() for x in z)
        return self.poly.eval_complex(point)


def _conjugate_in_w(p: Poly, n: int) -> Poly:
    """P(z) -> conj(P)(w): conjugate coefficients, move z_j to w_j."""
    terms = {}
    for e, c in p.terms.items():
        terms[(0,) * n + e] = c.conj()
    return Poly(2 * n, terms, _clean=False)


def _extend_in_z(p: Poly, n: int) -> Poly:
    terms = {e + (0,) * n: c for e, c in p.terms.items()}
    return Poly(2 * n, terms, _clean=False)


def norm_defect(f: RationalMap) -> HermForm:
    """sum_j P_j(z) conj(P_j)(w) - q(z) conj(q)(w)."""
    if f.model != BALL:
        raise ValueError("norm_defect expects a ball-model map")
    n = f.n
    total = Poly.zero(2 * n)
    for p in f.components:
        total = total + _extend_in_z(p, n) * _conjugate_in_w(p, n)
    total = total - _extend_in_z(f.denominator, n) * _conjugate_in_w(
        f.denominator, n)
    return HermForm(n, total)


def sphere_ideal_generator(n: int) -> Poly:
    terms = {}
    for j in range(n):
        e = [0] * (2 * n)
        e[j] = e[n + j] = 1
        terms[tuple(e)] = ONE
    terms[(0,) * (2 * n)] = -ONE
    return Poly(2 * n, terms)


def _negligible(p: Poly, reference: Poly, rel_tol: float = 1e-18) -> bool:
    if p.is_zero():
        return True
    if p.is_exact():
        return False
    ref = max((abs(complex(c)) for c in reference.terms.values()), default=1.0)
    return all(abs(complex(c)) <= rel_tol * max(ref, 1.0)
               for c in p.terms.values())


def vanishes_on_sphere(h: HermForm) -> bool:
    """Ideal-membership test: divisibility by sum z_j w_j - 1."""
    gen = sphere_ideal_generator(h.n)
    try:
        h.poly.exact_divide(gen)
        return True
    except NotDivisible as exc:
        return _negligible(exc.remainder, h.poly)


@dataclass(frozen=True)
class ProperReport:
    status: str
    witness: tuple[complex, ...] | None = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.status == PROPER


def check_proper(f: RationalMap, samples: int = 400,
                 seed: int = 0) -> ProperReport:
    """Admission test for map inputs.

    Proper iff the norm defect is divisible by the sphere polynomial and
    the denominator has no zero among quasi-random points of the closed
    ball.  The denominator check is probabilistic (recorded in the note);
    the sphere test is exact for exact inputs.
    """
    if f.model != BALL:
        raise ValueError("check_proper expects a ball-model map "
                         "(transport Siegel maps first)")
    qmax = max((abs(complex(c)) for c in f.denominator.terms.values()),
               default=0.0)
    interior = complex_ball_points(f.n, samples, seed=seed)
    boundary = complex_ball_points(f.n, samples // 2, seed=seed + 1,
                                   boundary=True)
    for z in interior + boundary:
        val = f.denominator.eval_complex(z)
        if abs(val) <= 1e-12 * max(qmax, 1.0):
            return ProperReport(DENOMINATOR_VANISHES, z,
                                "denominator root found by sampling")
    if not vanishes_on_sphere(norm_defect(f)):
        return ProperReport(NOT_SPHERE_PRESERVING, None,
                            "norm defect does not vanish on the sphere")
    return ProperReport(
        PROPER, None,
        f"sphere test exact; denominator nonvanishing sampled at "
        f"{len(interior) + len(boundary)} points")
