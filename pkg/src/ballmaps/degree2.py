"""Constructive polynomialization of the degree-2 normal forms.

Every proper rational map of degree two from the 2-ball reduces (after a
Cayley transform, by the known classification taken here as input) to one
of two Siegel-model normal-form families from H^2 to H^5:

  case I :  f = (z + (i/2) z w)/D,  phi = (z^2, c1 z w, 0)/D,  g = w/D,
            D = 1 + e2 w^2,            with  -e2 = 1/4 + c1^2,  c1 > 0;
  case II:  f = (z + (i/2 + i e1) z w)/D,
            phi = (z^2, c1 z w, c3 w^2)/D,  g = (w + i e1 w^2)/D,
            D = 1 + i e1 w + e2 w^2,
            with  e1, e2 < 0 < c1, c3,  e1 e2 = c3^2,  -e1 - e2 = 1/4 + c1^2.

For case I the witness pair is explicit.  For case II the source
hyperplane is sought on the slice mu = (0, i y) with y < 0; the target
inequality there reduces to J(y) < 0 with

    J(y) = (8y - 4 e1) e1 e2 + ((y - e1)^2 + e2)^2 ,

and a suitable y always exists at a negative critical point of J (the
rightmost root of J'(y) = 0, located by bisection on the cubic in
zeta = y - e1).  The full pipeline then Cayley-transports the map and
both hyperplanes to the ball model, sends the hyperplanes to infinity,
and conjugates, yielding a proper polynomial representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .autgroup import IndefUnitary, hyperplane_to_infinity
from .criterion import WitnessPair, check_pair
from .hermitian import PROPER, check_proper
from .poly import Poly
from .projective import (SIEGEL, SIEGEL_TO_BALL, Hyperplane,
                         cayley_hyperplane)
from .ratmap import (ProjMap, RationalMap, cayley_transport,
                     conjugate_by_autos, dehomogenize, proj_equal,
                     projectivize)
from .scalars import FLOAT_CONTEXT, Scalar, ZERO, ONE, I

CASE_I = "I"
CASE_II = "II"


@dataclass(frozen=True)
class NormalFormParams:
    """Parameters of the two families, with derived e2 and c3."""

    case: str
    c1: Scalar
    e1: Scalar | None = None

    def __post_init__(self):
        c1 = Scalar.coerce(self.c1)
        object.__setattr__(self, "c1", c1)
        if not c1.is_real() or c1.sign() <= 0:
            raise ValueError("c1 must be a positive real")
        if self.case == CASE_I:
            if self.e1 is not None:
                raise ValueError("case I has no e1 parameter")
        elif self.case == CASE_II:
            e1 = Scalar.coerce(self.e1)
            object.__setattr__(self, "e1", e1)
            if not e1.is_real() or e1.sign() >= 0:
                raise ValueError("e1 must be a negative real")
            if self.e2.sign() >= 0:
                raise ValueError("derived e2 = -e1 - 1/4 - c1^2 must be "
                                 "negative for case II")
        else:
            raise ValueError(f"unknown case {self.case!r}")

    @property
    def e2(self) -> Scalar:
        if self.case == CASE_I:
            return -(Scalar.exact(Fraction(1, 4)) + self.c1 * self.c1)
        return -self.e1 - Scalar.exact(Fraction(1, 4)) - self.c1 * self.c1

    @property
    def c3(self) -> Scalar:
        if self.case == CASE_I:
            raise ValueError("case I has no c3")
        return (self.e1 * self.e2).sqrt()


def _w_poly(coeffs: dict[int, Scalar]) -> Poly:
    """Polynomial in (z, w) with given w-powers (z-degree zero)."""
    return Poly(2, {(0, k): c for k, c in coeffs.items()})


def build_normal_form(params: NormalFormParams) -> RationalMap:
    """The 5-component Siegel-model map (f, phi_1, phi_2, phi_3, g)."""
    c1, e2 = params.c1, params.e2
    z = Poly.variable(0, 2)
    zw = Poly(2, {(1, 1): ONE})
    z2 = Poly(2, {(2, 0): ONE})
    w = Poly.variable(1, 2)
    w2 = Poly(2, {(0, 2): ONE})
    if params.case == CASE_I:
        denom = _w_poly({0: ONE, 2: e2})
        comps = (z + zw.scale(I / 2), z2, zw.scale(c1), Poly.zero(2), w)
    else:
        e1, c3 = params.e1, params.c3
        denom = _w_poly({0: ONE, 1: I * e1, 2: e2})
        comps = (z + zw.scale(I / 2 + I * e1), z2, zw.scale(c1),
                 w2.scale(c3), w + w2.scale(I * e1))
    return RationalMap(comps, denom, SIEGEL)


def case1_witness(params: NormalFormParams) -> WitnessPair:
    """mu = (0, -sqrt|e2| i), lam = (0, 0, 0, 0, -2 sqrt|e2| i)."""
    if params.case != CASE_I:
        raise ValueError("case1_witness needs case I parameters")
    root = (-params.e2).sqrt()
    mu2 = -(I * root)
    lam5 = -(Scalar.exact(2) * I * root)
    return WitnessPair.from_mu_lambda([ZERO, mu2],
                                      [ZERO, ZERO, ZERO, ZERO, lam5], SIEGEL)


def case2_lambdas(params: NormalFormParams, mu1, mu2) -> tuple[Scalar, ...]:
    """Target coefficients forced by the matching identity in case II."""
    if params.case != CASE_II:
        raise ValueError("case2_lambdas needs case II parameters")
    mu1, mu2 = Scalar.coerce(mu1), Scalar.coerce(mu2)
    e1, e2, c1, c3 = params.e1, params.e2, params.c1, params.c3
    two = Scalar.exact(2)
    lam1 = two * mu1
    lam2 = mu1 * mu1
    lam3 = (-(I * (ONE + two * e1)) * mu1 + two * mu1 * mu2) / c1
    lam4 = (mu2 * mu2 - e2 - two * I * e1 * mu2 - e1 * e1) / c3
    lam5 = two * mu2 - I * e1
    return (lam1, lam2, lam3, lam4, lam5)


def J(params: NormalFormParams, y) -> Scalar:
    """(8y - 4 e1) e1 e2 + ((y - e1)^2 + e2)^2 (case II target margin)."""
    if params.case != CASE_II:
        raise ValueError("J is defined for case II")
    y = Scalar.coerce(y)
    e1, e2 = params.e1, params.e2
    first = (Scalar.exact(8) * y - Scalar.exact(4) * e1) * e1 * e2
    inner = (y - e1) ** 2 + e2
    return first + inner * inner


def J_prime(params: NormalFormParams, y) -> Scalar:
    y = Scalar.coerce(y)
    e1, e2 = params.e1, params.e2
    return Scalar.exact(8) * e1 * e2 + \
        Scalar.exact(4) * ((y - e1) ** 2 + e2) * (y - e1)


def find_y0(params: NormalFormParams) -> Scalar:
    """A y0 < 0 with J'(y0) = 0 and J(y0) < 0.

    J'(0) = 4(-e1^3 + e1 e2) > 0 and J' -> -infinity to the left, so a
    sign change exists on (-M, 0); bisection locates the rightmost one,
    Newton sharpens it at working precision, and a rational candidate is
    promoted exactly when it solves the cubic exactly.  J(y0) < 0 then
    holds at every negative critical point; this is asserted, and on a
    (never observed) failure all real critical points are scanned.
    """
    if params.case != CASE_II:
        raise ValueError("find_y0 needs case II parameters")
    e1f = complex(params.e1).real
    e2f = complex(params.e2).real
    # cubic in zeta = y - e1: zeta^3 + e2 zeta + 2 e1 e2 = 0
    p, q = e2f, 2.0 * e1f * e2f
    bound = 1.0 + max(abs(p), abs(q))
    left, right = -bound + e1f, 0.0

    def dj(y: float) -> float:
        return 8 * e1f * e2f + 4 * ((y - e1f) ** 2 + e2f) * (y - e1f)

    if dj(right) <= 0:
        raise ArithmeticError("J'(0) <= 0; constraint violation in params")
    # walk left from 0 until J' changes sign, then bisect
    step = max(abs(e1f), 0.25)
    lo = right - step
    while dj(lo) > 0:
        lo -= step
        if lo < left - 1.0:
            raise ArithmeticError("no sign change of J' located")
    hi = right
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if dj(mid) > 0:
            hi = mid
        else:
            lo = mid
    y_approx = 0.5 * (lo + hi)
    with mpmath.workprec(FLOAT_CONTEXT.prec + 32):
        e1m = params.e1.to_mpc().real
        e2m = params.e2.to_mpc().real

        def djm(y):
            return 8 * e1m * e2m + 4 * ((y - e1m) ** 2 + e2m) * (y - e1m)

        try:
            y_ref = mpmath.findroot(djm, mpmath.mpf(y_approx))
        except Exception:
            y_ref = mpmath.mpf(y_approx)
    candidate = Fraction(float(y_ref)).limit_denominator(10 ** 6)
    y_exact = Scalar.exact(candidate)
    if params.e1.is_exact and params.e2.is_exact and \
            J_prime(params, y_exact).is_zero() and y_exact.sign() < 0:
        y0 = y_exact
    else:
        y0 = Scalar.from_float(float(y_ref))
    if not J(params, y0).real().sign() < 0:
        y0 = _rescue_y0(params, e1f, e2f)
    return y0


def _rescue_y0(params: NormalFormParams, e1f: float, e2f: float) -> Scalar:
    import numpy as np
    roots = np.roots([1.0, 0.0, e2f, 2.0 * e1f * e2f])
    for zeta in sorted(roots, key=lambda r: r.real, reverse=True):
        if abs(zeta.imag) > 1e-9:
            continue
        y = zeta.real + e1f
        if y < 0:
            cand = Scalar.from_float(y)
            if J(params, cand).real().sign() < 0:
                return cand
    raise ArithmeticError("no negative critical point with J < 0 found")


def case2_witness(params: NormalFormParams, y0: Scalar) -> WitnessPair:
    mu = (ZERO, I * y0)
    lam = case2_lambdas(params, mu[0], mu[1])
    return WitnessPair.from_mu_lambda(mu, lam, SIEGEL)


@dataclass(frozen=True)
class PipelineResult:
    """Everything the degree-2 polynomialization produces and verifies."""

    params: NormalFormParams
    normal_form: RationalMap
    y0: Scalar | None
    witness: WitnessPair           # Siegel model
    ball_map: RationalMap          # Cayley transport of the normal form
    witness_ball: WitnessPair      # transported hyperplane pair
    sigma1: IndefUnitary           # sends H_infinity to the source hyperplane
    sigma2: IndefUnitary           # sends the target hyperplane to H'_infinity
    polynomial_map: RationalMap    # constant denominator, ball model
    exact: bool

    def lambdas(self) -> tuple[Scalar, ...]:
        return self.witness.lam()


def polynomialize(params: NormalFormParams) -> PipelineResult:
    """Run the full constructive pipeline for one normal form.

    Builds the map and its witness pair, transports everything to the
    ball model, conjugates by the hyperplanes-to-infinity elements, and
    verifies: constant denominator, properness of the output, and the
    equivalence identity (exactly in the exact backend).
    """
    f = build_normal_form(params)
    fh = projectivize(f)
    if params.case == CASE_I:
        y0 = None
        w = case1_witness(params)
    else:
        y0 = find_y0(params)
        w = case2_witness(params, y0)
    if not check_pair(fh, w):
        raise ArithmeticError("witness pair fails the matching identity")

    f_ball = cayley_transport(f)
    h_src = cayley_hyperplane(w.source, SIEGEL_TO_BALL)
    h_tgt = cayley_hyperplane(w.target, SIEGEL_TO_BALL)
    w_ball = WitnessPair(h_src, h_tgt)
    fh_ball = projectivize(f_ball)
    if not check_pair(fh_ball, w_ball):
        raise ArithmeticError("transported witness fails the identity")

    sigma = hyperplane_to_infinity(h_src)
    tau = hyperplane_to_infinity(h_tgt)
    sigma1 = sigma.invert()
    gh = conjugate_by_autos(tau, fh_ball, sigma1)
    exact = gh.is_exact()
    if not exact:
        gh = gh.chop()
    tpow = (0, 0, fh_ball.degree)
    if set(gh.components[-1].terms) != {tpow}:
        raise ArithmeticError("conjugated map does not have a constant "
                              "denominator")
    g = dehomogenize(gh, validate=False)
    report = check_proper(g, seed=7)
    if report.status != PROPER:
        raise ArithmeticError(f"polynomialized map fails properness: "
                              f"{report.status}")
    back = conjugate_by_autos(tau.invert(), gh, sigma)
    if not exact:
        back = back.chop()
    if not proj_equal(back, fh_ball):
        raise ArithmeticError("equivalence identity failed verification")
    return PipelineResult(params, f, y0, w, f_ball, w_ball, sigma1, tau, g,
                          exact and w.source.covector[0].is_exact)
