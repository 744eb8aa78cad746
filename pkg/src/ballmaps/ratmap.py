"""Rational ball maps and their projectivizations.

A rational map ``F = (P_1, ..., P_N)/q`` between balls (or Siegel
domains) of dimensions n and N projectivizes to the CP^n -> CP^N map
``[t^k P(z/t) : t^k q(z/t)]`` where ``k = max(deg P_j, deg q)``.  The
homogeneous components live in the variables ``(z_1, ..., z_n, t)`` and
the last component is the homogenized denominator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import Matrix
from .poly import Poly, coprime_check
from .projective import (BALL, BALL_TO_SIEGEL, SIEGEL, SIEGEL_TO_BALL,
                         Hyperplane, ProjPoint, cayley_matrix)
from .scalars import Scalar, SqrtNotRepresentable, ZERO, ONE
from . import linalg

AT_INFINITY = "at_infinity"
GLOBAL_SAMPLED = "global_sampled"


@dataclass(frozen=True)
class RationalMap:
    """Map (P_1, ..., P_N)/q with a model tag for its presentation."""

    components: tuple[Poly, ...]
    denominator: Poly
    model: str = BALL
    validate: bool = True
    seed: int = 0

    def __post_init__(self):
        if not self.components:
            raise ValueError("a map needs at least one component")
        n = self.components[0].nvars
        if any(p.nvars != n for p in self.components) or self.denominator.nvars != n:
            raise ValueError("mixed variable counts in map data")
        if self.denominator.is_zero():
            raise ValueError("zero denominator")
        if self.model not in (BALL, SIEGEL):
            raise ValueError(f"unknown model {self.model!r}")
        if self.validate:
            if self.model == BALL and self.denominator.eval(
                    [ZERO] * n).is_zero():
                raise ValueError("denominator vanishes at the center")
            family = list(self.components) + [self.denominator]
            if all(p.is_exact() for p in family) and not coprime_check(
                    family, trials=4, seed=self.seed):
                raise ValueError("components and denominator share a factor "
                                 "(fails the coprimality check)")

    @property
    def n(self) -> int:
        return self.components[0].nvars

    @property
    def N(self) -> int:
        return len(self.components)

    def degree(self) -> int:
        return max(max(p.degree() for p in self.components),
                   self.denominator.degree())

    def eval(self, point: Sequence) -> tuple[Scalar, ...]:
        q = self.denominator.eval(point)
        if q.is_zero():
            raise ZeroDivisionError("denominator vanishes at the point")
        qi = q.invert()
        return tuple(p.eval(point) * qi for p in self.components)

    def is_exact(self) -> bool:
        return (all(p.is_exact() for p in self.components)
                and self.denominator.is_exact())

    def to_float(self) -> "RationalMap":
        return RationalMap(tuple(p.to_float() for p in self.components),
                           self.denominator.to_float(), self.model,
                           validate=False)


@dataclass(frozen=True)
class ProjMap:
    """Projectivized map: N+1 homogeneous components of common degree."""

    components: tuple[Poly, ...]
    degree: int
    model: str = BALL

    def __post_init__(self):
        for p in self.components:
            if not p.is_homogeneous():
                raise ValueError("projective components must be homogeneous")
            if not p.is_zero() and p.degree() != self.degree:
                raise ValueError("projective components must share one degree")
        if all(p.is_zero() for p in self.components):
            raise ValueError("projective map must have a nonzero component")

    @property
    def n(self) -> int:
        return self.components[0].nvars - 1

    @property
    def N(self) -> int:
        return len(self.components) - 1

    def eval(self, p: ProjPoint) -> ProjPoint:
        return ProjPoint(tuple(c.eval(p.coords) for c in self.components))

    def eval_complex(self, coords: Sequence[complex]) -> tuple[complex, ...]:
        return tuple(c.eval_complex(coords) for c in self.components)

    def is_exact(self) -> bool:
        return all(p.is_exact() for p in self.components)

    def to_float(self) -> "ProjMap":
        return ProjMap(tuple(p.to_float() for p in self.components),
                       self.degree, self.model)

    def chop(self, rel_tol: float = 1e-20) -> "ProjMap":
        """Drop float coefficients negligible next to the largest one."""
        mags = [abs(complex(c)) for p in self.components
                for c in p.terms.values()]
        cut = max(mags) * rel_tol if mags else 0.0
        comps = []
        for p in self.components:
            comps.append(Poly(p.nvars, {
                e: c for e, c in p.terms.items()
                if c.is_exact or abs(complex(c)) > cut}))
        return ProjMap(tuple(comps), self.degree, self.model)


def projectivize(f: RationalMap) -> ProjMap:
    k = f.degree()
    comps = tuple(p.homogenize(k) for p in f.components) + (
        f.denominator.homogenize(k),)
    return ProjMap(comps, k, f.model)


def dehomogenize(fh: ProjMap, validate: bool = True,
                 seed: int = 0) -> RationalMap:
    comps = tuple(p.dehomogenize() for p in fh.components)
    return RationalMap(comps[:-1], comps[-1], fh.model,
                       validate=validate, seed=seed)


def proj_equal(fh: ProjMap, gh: ProjMap) -> bool:
    """True iff the component tuples agree up to one nonzero scalar."""
    if fh.N != gh.N or fh.n != gh.n:
        return False
    a, b = fh.components, gh.components
    ref = next((k for k, p in enumerate(b) if not p.is_zero()), None)
    if ref is None:
        return all(p.is_zero() for p in a)
    if a[ref].is_zero():
        return False
    for p, q in zip(a, b):
        if not (p * b[ref] - q * a[ref]).is_zero():
            return False
    return True


def conjugate_by_matrices(tau: Matrix, fh: ProjMap, sigma: Matrix,
                          model: str | None = None) -> ProjMap:
    """tau o F o sigma for raw projective matrices."""
    if len(sigma) != fh.n + 1 or len(tau[0]) != fh.N + 1:
        raise ValueError("matrix dimensions do not match the map")
    pulled = [p.compose_linear(sigma) for p in fh.components]
    comps = []
    for row in tau:
        acc = Poly.zero(fh.n + 1)
        for coeff, p in zip(row, pulled):
            if not Scalar.coerce(coeff).is_zero():
                acc = acc + p.scale(coeff)
        comps.append(acc)
    out = ProjMap(tuple(comps), fh.degree, model or fh.model)
    exact = all(p.is_exact() for p in comps)
    if exact and not coprime_check(comps, trials=3, seed=11):
        raise ArithmeticError("conjugation produced a common factor")
    return out


def conjugate_by_autos(tau, fh: ProjMap, sigma) -> ProjMap:
    """tau o F o sigma for group elements (see autgroup.IndefUnitary)."""
    return conjugate_by_matrices(tau.matrix, fh, sigma.matrix)


def cayley_transport(f: RationalMap, seed: int = 0) -> RationalMap:
    """Move a map between the Siegel and ball presentations.

    Computed projectively as rho_N o F^ o rho_n^{-1} (or the inverse
    composition), then dehomogenized.
    """
    fh = projectivize(f)
    gh = cayley_transport_proj(fh)
    return dehomogenize(gh, validate=True, seed=seed)


def cayley_transport_proj(fh: ProjMap) -> ProjMap:
    rn = cayley_matrix(fh.n)
    rN = cayley_matrix(fh.N)
    if fh.model == SIEGEL:
        return conjugate_by_matrices(rN, fh, linalg.mat_inverse(rn),
                                     model=BALL)
    return conjugate_by_matrices(linalg.mat_inverse(rN), fh, rn,
                                 model=SIEGEL)


@dataclass(frozen=True)
class BaseLocus:
    points: tuple[ProjPoint, ...]
    complete: bool
    note: str = ""


def _binary_form_roots(forms: list[Poly]) -> tuple[list[ProjPoint], bool]:
    """Common projective roots of homogeneous binary forms in (z, w)."""
    from .poly import poly_gcd_univariate
    exact_only = True
    at_infinity = all(p.degree_in(0) < p.degree() for p in forms)
    gcd = None
    for p in forms:
        uni = Poly(1, {(e[0],): c for e, c in p.terms.items()})
        gcd = uni if gcd is None else poly_gcd_univariate(gcd, uni)
        if gcd.degree() == 0:
            break
    points: list[ProjPoint] = []
    if at_infinity:
        points.append(ProjPoint.of(ONE, ZERO, ZERO))
    if gcd is not None and gcd.degree() >= 1:
        d = gcd.degree()
        if d == 1:
            root = -(gcd.coeff((0,)) / gcd.coeff((1,)))
            points.append(ProjPoint((root, ONE, ZERO)))
        elif d == 2:
            a, b, c = gcd.coeff((2,)), gcd.coeff((1,)), gcd.coeff((0,))
            disc = b * b - Scalar.exact(4) * a * c
            try:
                s = disc.sqrt()
            except SqrtNotRepresentable:
                s = disc.to_float().sqrt()
                exact_only = False
            half = (Scalar.exact(2) * a).invert()
            for sign in (ONE, -ONE):
                root = (-b + sign * s) * half
                points.append(ProjPoint((root, ONE, ZERO)))
        else:
            coeffs = [complex(gcd.coeff((j,))) for j in range(d, -1, -1)]
            for r in np.roots(coeffs):
                points.append(ProjPoint((Scalar.from_float(r.real, r.imag),
                                         ONE, ZERO)))
            exact_only = False
    return points, exact_only


def base_locus(fh: ProjMap, scope: str = AT_INFINITY, samples: int = 64,
               seed: int = 0) -> BaseLocus:
    """Common zeros of all components (the indeterminacy set).

    ``at_infinity`` solves exactly on the line {t = 0} for n <= 2; the
    result is globally complete when the denominator is constant (the
    last component is then a pure power of t, confining the locus to
    {t = 0}).  ``global_sampled`` is a randomized search and never claims
    completeness.
    """
    n = fh.n
    if scope == AT_INFINITY:
        restricted = []
        for p in fh.components:
            cut = Poly(n + 1, {e: c for e, c in p.terms.items() if e[-1] == 0})
            if not cut.is_zero():
                restricted.append(Poly(n, {e[:-1]: c
                                           for e, c in cut.terms.items()}))
        q_constant = len(fh.components[-1].terms) == 1 and (
            (0,) * n + (fh.degree,) in fh.components[-1].terms)
        if not restricted:
            raise ArithmeticError("all components vanish on {t=0}; the map "
                                  "has a common factor")
        if n == 1:
            pts = [] if restricted else [ProjPoint.of(ONE, ZERO)]
            return BaseLocus(tuple(pts), q_constant,
                             "exact on the line at infinity")
        if n == 2:
            pts, exact = _binary_form_roots(restricted)
            note = "exact on the line at infinity" if exact else \
                "roots at infinity refined in floating point"
            return BaseLocus(tuple(pts), q_constant and exact, note)
        found = _sampled_base_points(fh, samples, seed, at_infinity=True)
        return BaseLocus(tuple(found), False, "sampled search on {t=0}")
    if scope == GLOBAL_SAMPLED:
        found = _sampled_base_points(fh, samples, seed, at_infinity=False)
        return BaseLocus(tuple(found), False, "sampled global search")
    raise ValueError(f"unknown scope {scope!r}")


def _sampled_base_points(fh: ProjMap, samples: int, seed: int,
                         at_infinity: bool) -> list[ProjPoint]:
    from scipy.optimize import least_squares

    dim = fh.n + (0 if at_infinity else 1)
    rng = np.random.default_rng(seed)
    comps = fh.components
    found: list[np.ndarray] = []

    def residual(x):
        coords = x[:2 * dim:2] + 1j * x[1:2 * dim:2]
        if at_infinity:
            coords = np.append(coords, 0.0)
        vec = np.array([p.eval_complex(tuple(coords)) for p in comps])
        scale = np.linalg.norm(coords) ** fh.degree or 1.0
        out = np.concatenate([vec.real, vec.imag]) / scale
        return np.append(out, np.linalg.norm(coords) - 1.0)

    for _ in range(samples):
        x0 = rng.normal(size=2 * dim)
        try:
            sol = least_squares(residual, x0, method="lm", max_nfev=400)
        except Exception:
            continue
        if sol.cost < 1e-18:
            coords = sol.x[:2 * dim:2] + 1j * sol.x[1:2 * dim:2]
            if at_infinity:
                coords = np.append(coords, 0.0)
            if all(_proj_distance(coords, f) > 1e-6 for f in found):
                found.append(coords)
    pts = []
    for coords in found:
        pts.append(ProjPoint(tuple(Scalar.from_float(c.real, c.imag)
                                   for c in coords)))
    return pts


def _proj_distance(u: np.ndarray, v: np.ndarray) -> float:
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    inner = abs(np.vdot(u, v))
    return float(np.sqrt(max(0.0, 1.0 - min(1.0, inner ** 2))))
