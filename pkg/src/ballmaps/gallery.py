"""Named example maps, matrices and hyperplane pairs, as exact fixtures.

Every fixture self-validates on construction: maps pass the properness
test (after Cayley transport where needed), matrices satisfy the
indefinite-unitarity identity, witness pairs satisfy their disjointness
inequalities.  ``verify_example`` replays the full claim attached to an
example id and returns a JSON-serializable report.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .autgroup import IndefUnitary, verify_indef_unitary
from .criterion import (CONTRADICTION, EQUIVALENT, NOT_EQUIVALENT,
                        check_pair, coefficient_system,
                        decide_polynomial_equivalence, replay_certificate,
                        solve_forced, WitnessPair)
from .degree2 import (CASE_I, CASE_II, NormalFormParams, build_normal_form,
                      case1_witness, polynomialize)
from .expressions import poly_parse
from .hermitian import check_proper
from .poly import Poly
from .projective import BALL, SIEGEL, Hyperplane, ProjPoint
from .ratmap import (RationalMap, base_locus, cayley_transport,
                     conjugate_by_autos, proj_equal, projectivize)
from .scalars import Scalar, ZERO, ONE, I


def _sqrt(x) -> Scalar:
    return Scalar.sqrt_rational(Fraction(x))


def _p(expr: str, names=("z", "w")) -> Poly:
    return poly_parse(expr, names)


@dataclass(frozen=True)
class Fixture:
    id: str
    payload: object
    provenance: str


class UnknownFixture(KeyError):
    pass


def _trig_pair(cos=None, sin=None, theta=None) -> tuple[Scalar, Scalar]:
    """Exact (cos, sin) pair with cos^2 + sin^2 = 1, or floats from theta."""
    if theta is not None:
        import math
        return (Scalar.from_float(math.cos(theta)),
                Scalar.from_float(math.sin(theta)))
    c, s = Scalar.coerce(cos), Scalar.coerce(sin)
    if not (c * c + s * s - ONE).is_zero():
        raise ValueError("cos^2 + sin^2 must equal 1 exactly")
    return c, s


def f_theta(cos=None, sin=None, theta=None) -> RationalMap:
    """Quadratic monomial family (z, cos w, sin zw, sin w^2), 0<theta<pi/2."""
    c, s = _trig_pair(cos, sin, theta)
    if not c.is_real() or c.sign() <= 0 or not s.is_real() or s.sign() <= 0:
        raise ValueError("the family needs cos, sin > 0")
    comps = (_p("z"), _p("w").scale(c), _p("z*w").scale(s),
             _p("w^2").scale(s))
    return RationalMap(comps, _p("1"), BALL)


def g_alpha(cos=None, sin=None, theta=None) -> RationalMap:
    """Quadratic monomial family (z^2, sqrt(1+cos^2) zw, cos w^2, sin w)."""
    c, s = _trig_pair(cos, sin, theta)
    if not c.is_real() or c.sign() <= 0:
        raise ValueError("the family needs cos > 0")
    root = (ONE + c * c).sqrt()
    comps = (_p("z^2"), _p("z*w").scale(root), _p("w^2").scale(c),
             _p("w").scale(s))
    return RationalMap(comps, _p("1"), BALL)


def ex33_params() -> NormalFormParams:
    return NormalFormParams(CASE_II, _sqrt(Fraction(13, 12)),
                            Scalar.exact(-1))


def ex33_F() -> RationalMap:
    return build_normal_form(ex33_params())


def ex33_G() -> RationalMap:
    """The explicit quadratic polynomial map of the worked example."""
    s3, s6, s13 = _sqrt(3), _sqrt(6), _sqrt(13)
    comps = (
        _p("-2 + 4*z + z^2").scale(s3 / 9),
        _p("1 + z + z^2").scale(-(s6 / 9)),
        _p("(5 + 3*z)*w").scale(s3 / 12),
        _p("w^2").scale(s6 / 6),
        _p("(1 - z)*w").scale(I * s13 / 12),
    )
    return RationalMap(comps, _p("1"), BALL)


def ex33_Ftilde_expected() -> RationalMap:
    """Ball-model transport of the worked example's normal form."""
    s1312 = _sqrt(Fraction(13, 12))
    s3 = _sqrt(3)
    third = Scalar.exact(Fraction(1, 3))
    comps = (
        _p("z*(3*t + w)", ("z", "w", "t")),
        _p("2*z^2", ("z", "w", "t")),
        _p("z*(t - w)", ("z", "w", "t")).scale(2 * I * s1312),
        _p("(t - w)^2", ("z", "w", "t")).scale(-(2 * s3 / 3)),
        _p("t^2 + 10*t*w + w^2", ("z", "w", "t")).scale(third),
        _p("13*t^2 - 2*t*w + w^2", ("z", "w", "t")).scale(third),
    )
    # stored as homogeneous components of a projective map; dehomogenize
    # to a ball-model rational map
    from .ratmap import ProjMap, dehomogenize
    return dehomogenize(ProjMap(comps, 2, BALL), validate=True, seed=5)


def ex33_sigma1() -> IndefUnitary:
    """3x3 element sending the hyperplane at infinity to {t = w/3}."""
    s2 = _sqrt(2)
    rows = [
        [ZERO, 2 * s2 / 3, ZERO],
        [ONE, ZERO, Scalar.exact(Fraction(1, 3))],
        [Scalar.exact(Fraction(1, 3)), ZERO, ONE],
    ]
    return IndefUnitary.from_rows(rows)


def ex33_sigma2() -> IndefUnitary:
    """6x6 element sending {t' = (sqrt3/6) z4' + w'/2} to infinity.

    The second row is the sign variant under which the composed map
    reproduces ex33_G exactly; the opposite sign satisfies the same side
    conditions but lands on ex33_G with its second component negated.
    """
    s2, s3, s6 = _sqrt(2), _sqrt(3), _sqrt(6)
    half = Scalar.exact(Fraction(1, 2))
    rows = [
        [ZERO, ZERO, ZERO, half, s3 / 2, -(s3 / 3)],
        [ZERO, ZERO, ZERO, s2 / 2, -(s6 / 6), ZERO],
        [s6 / 3, ZERO, ZERO, ZERO, ZERO, ZERO],
        [ZERO, s6 / 3, ZERO, ZERO, ZERO, ZERO],
        [ZERO, ZERO, s6 / 3, ZERO, ZERO, ZERO],
        [ZERO, ZERO, ZERO, -(s3 / 6), -half, ONE],
    ]
    return IndefUnitary.from_rows(rows)


def ex41(a) -> RationalMap:
    """Degree-3 family (z^2, sqrt2 zw, w^2 (z-a)/(1-abar z),
    sqrt(1-|a|^2) w^3/(1-abar z)); polynomial-equivalent iff a = 0."""
    a = Scalar.coerce(a)
    if (a.abs2() - ONE).sign() >= 0:
        raise ValueError("parameter must satisfy |a| < 1")
    root = (ONE - a.abs2()).sqrt()
    q = _p("1") - _p("z").scale(a.conj())
    comps = (_p("z^2") * q, _p("z*w").scale(_sqrt(2)) * q,
             _p("w^2") * (_p("z") - _p("1").scale(a)),
             _p("w^3").scale(root))
    return RationalMap(comps, q, BALL)


def ex42(n: int, a) -> RationalMap:
    """Rank-one degree-3 family from the n-ball into the (3n-2)-ball;
    polynomial-equivalent iff a = 0."""
    if n < 2:
        raise ValueError("the family needs n >= 2")
    a = Scalar.coerce(a)
    if (a.abs2() - ONE).sign() >= 0:
        raise ValueError("parameter must satisfy |a| < 1")
    root = (ONE - a.abs2()).sqrt()
    names = [f"z{j + 1}" for j in range(n - 1)] + ["w"]

    def p(expr):
        return poly_parse(expr, names)

    q = p("1") - p("w").scale(a.conj())
    comps = []
    for j in range(n - 1):
        comps.append(p(f"z{j + 1}") * q)
    for j in range(n - 1):
        comps.append(p(f"w*z{j + 1}") * q)
    for j in range(n - 1):
        comps.append(p(f"w^2*z{j + 1}").scale(root))
    comps.append(p("w^2") * (p("w") - p("1").scale(a)))
    return RationalMap(tuple(comps), q, BALL)


_DEFAULTS: dict[str, Callable[..., object]] = {
    "F_theta": f_theta,
    "G_alpha": g_alpha,
    "ex33_F": ex33_F,
    "ex33_G": ex33_G,
    "ex33_Ftilde": ex33_Ftilde_expected,
    "ex33_sigma1": ex33_sigma1,
    "ex33_sigma2": ex33_sigma2,
    "ex41": ex41,
    "ex42": ex42,
    "case1": lambda c1: build_normal_form(NormalFormParams(CASE_I, c1)),
}


def fixture(fid: str, **params) -> Fixture:
    """Build and self-validate a named fixture."""
    if fid not in _DEFAULTS:
        raise UnknownFixture(fid)
    if fid == "ex41" and "a" not in params:
        params["a"] = Fraction(1, 2)
    if fid == "ex42":
        params.setdefault("n", 2)
        params.setdefault("a", Fraction(1, 2))
    if fid == "F_theta" and not params:
        params = {"cos": Fraction(3, 5), "sin": Fraction(4, 5)}
    if fid == "G_alpha" and not params:
        params = {"cos": Fraction(4, 5), "sin": Fraction(3, 5)}
    if fid == "case1" and not params:
        params = {"c1": 1}
    payload = _DEFAULTS[fid](**params)
    provenance = {
        "F_theta": "quadratic monomial family B2 -> B4 (one base point)",
        "G_alpha": "quadratic monomial family B2 -> B4 (no base point)",
        "ex33_F": "degree-2 Siegel normal form, case II, e1=-1, c1^2=13/12",
        "ex33_G": "explicit polynomial representative of ex33_F",
        "ex33_Ftilde": "ball-model Cayley transport of ex33_F",
        "ex33_sigma1": "hyperplane-at-infinity mover for the ex33 source",
        "ex33_sigma2": "hyperplane-at-infinity mover for the ex33 target",
        "ex41": "degree-3 family, polynomial-equivalent iff a = 0",
        "ex42": "rank-one degree-3 family, polynomial-equivalent iff a = 0",
        "case1": "degree-2 Siegel normal form, case I",
    }[fid]
    _self_validate(fid, payload)
    return Fixture(fid, payload, provenance)


def _self_validate(fid: str, payload) -> None:
    if isinstance(payload, RationalMap):
        ball = payload if payload.model == BALL else cayley_transport(payload)
        report = check_proper(ball, seed=13)
        if not report:
            raise ValueError(f"fixture {fid} failed properness "
                             f"self-validation: {report.status}")
    elif isinstance(payload, IndefUnitary):
        pass  # construction already verified the group identity
    elif isinstance(payload, WitnessPair):
        pass  # construction already verified disjointness


# --------------------------------------------------------------------------
# example verification reports
# --------------------------------------------------------------------------

def _scal(x: Scalar) -> str:
    return x.to_expr()


def verify_example(fid: str, **params) -> dict:
    """Run the full claim attached to an example id; returns a report."""
    if fid in ("ex21", "ex21_pole"):
        return _verify_ex21(**params)
    if fid == "ex33":
        return _verify_ex33()
    if fid == "ex41":
        return _verify_ex41(**params)
    if fid == "ex42":
        return _verify_ex42(**params)
    if fid == "case1":
        return _verify_case1(**params)
    raise UnknownFixture(fid)


def _report(fid: str, ok: bool, details: dict) -> dict:
    return {"id": fid, "pass": bool(ok), "details": details}


def _verify_ex21(cos=Fraction(3, 5), sin=Fraction(4, 5)) -> dict:
    ft = f_theta(cos=cos, sin=sin)
    ga = g_alpha(cos=cos, sin=sin)
    bf = base_locus(projectivize(ft))
    bg = base_locus(projectivize(ga))
    one_point = (len(bf.points) == 1 and bf.complete
                 and bf.points[0].same_as(ProjPoint.of(1, 0, 0)))
    empty = len(bg.points) == 0 and bg.complete
    pf, pg = check_proper(ft, seed=2), check_proper(ga, seed=2)
    ok = one_point and empty and bool(pf) and bool(pg)
    return _report("ex21_pole", ok, {
        "F_theta_base_locus": [repr(p) for p in bf.points],
        "F_theta_complete": bf.complete,
        "G_alpha_base_locus": [repr(p) for p in bg.points],
        "G_alpha_complete": bg.complete,
        "F_theta_proper": pf.status, "G_alpha_proper": pg.status})


def _verify_ex33() -> dict:
    details: dict = {}
    res = polynomialize(ex33_params())
    details["y0"] = _scal(res.y0)
    lam = res.lambdas()
    details["lam4"] = _scal(lam[3])
    details["lam5"] = _scal(lam[4])
    ok = (res.y0 == Scalar.exact(-2)
          and lam[3] == -(Scalar.exact(2) / _sqrt(3))
          and lam[4] == Scalar.exact(0, -3))
    h_expected = Hyperplane.from_covector([ZERO, -2 * I, ONE], SIEGEL)
    ht_expected = Hyperplane.from_covector(
        [ZERO, -Scalar.exact(Fraction(1, 3)), ONE], BALL)
    htp_expected = Hyperplane.from_covector(
        [ZERO, ZERO, ZERO, -(_sqrt(3) / 6), -Scalar.exact(Fraction(1, 2)),
         ONE], BALL)
    ok &= res.witness.source.same_as(h_expected)
    ok &= res.witness_ball.source.same_as(ht_expected)
    ok &= res.witness_ball.target.same_as(htp_expected)
    details["H"] = [_scal(c) for c in res.witness.source.covector]
    details["H_ball"] = [_scal(c) for c in res.witness_ball.source.covector]
    details["Hp_ball"] = [_scal(c) for c in res.witness_ball.target.covector]
    details["pipeline_exact"] = res.exact
    ok &= res.exact

    # transported map agrees with the recorded closed form
    ftilde = projectivize(res.ball_map)
    expected = projectivize(ex33_Ftilde_expected())
    ok &= proj_equal(ftilde, expected)
    details["transport_matches"] = proj_equal(ftilde, expected)

    # explicit movers compose to the explicit polynomial map, exactly
    s1, s2 = ex33_sigma1(), ex33_sigma2()
    details["sigma1_unitary"] = verify_indef_unitary(s1.matrix)
    details["sigma2_unitary"] = verify_indef_unitary(s2.matrix)
    gh = conjugate_by_autos(s2, ftilde, s1)
    gp = projectivize(ex33_G())
    composed_ok = proj_equal(gh, gp)
    details["composition_equals_G"] = composed_ok
    ok &= composed_ok and details["sigma1_unitary"] and \
        details["sigma2_unitary"]

    # the pipeline's own output differs from G by the hyperplane
    # stabilizer freedom: bridge matrices must be block-unitary
    sigma = res.sigma1.invert()
    d1 = sigma.compose(s1)
    d2 = s2.compose(res.sigma2.invert())
    bridge_ok = _stabilizes_infinity(d1) and _stabilizes_infinity(d2)
    details["bridge_block_diagonal"] = bridge_ok
    gh_mine = projectivize(res.polynomial_map)
    bridged = conjugate_by_autos(d2, gh_mine, d1)
    bridged_ok = proj_equal(bridged, gp)
    details["bridged_equals_G"] = bridged_ok
    ok &= bridge_ok and bridged_ok
    return _report("ex33", ok, details)


def _stabilizes_infinity(u: IndefUnitary) -> bool:
    m = u.matrix
    size = len(m)
    for i in range(size - 1):
        if not m[i][size - 1].is_zero():
            return False
        if not m[size - 1][i].is_zero():
            return False
    return True


def _verify_ex41(a=Fraction(1, 2)) -> dict:
    details: dict = {}
    f = ex41(a)
    a_zero = Scalar.coerce(a).is_zero()
    decision = decide_polynomial_equivalence(f, seed=5)
    details["verdict"] = decision.verdict
    if a_zero:
        ok = decision.verdict == EQUIVALENT
    else:
        ok = decision.verdict == NOT_EQUIVALENT
        if ok:
            system = coefficient_system(projectivize(f))
            ok &= replay_certificate(decision.certificate, system)
            final = decision.certificate.final()
            details["final_monomial"] = final.monomial
            details["final_conclusion"] = final.conclusion
            details["replay"] = ok
    return _report("ex41", ok, details)


def _verify_ex42(n=2, a=Fraction(1, 2)) -> dict:
    details: dict = {}
    f = ex42(n, a)
    decision = decide_polynomial_equivalence(f, seed=5)
    details["verdict"] = decision.verdict
    a_zero = Scalar.coerce(a).is_zero()
    if a_zero:
        ok = decision.verdict == EQUIVALENT
    else:
        ok = decision.verdict == NOT_EQUIVALENT
        if ok:
            system = coefficient_system(projectivize(f))
            ok &= replay_certificate(decision.certificate, system)
            cert_values = _certificate_mu_values(decision.certificate)
            af = abs(complex(Scalar.coerce(a)))
            has_small = any(abs(v - af / 3) < 1e-12 for v in cert_values)
            has_large = any(abs(v - 3 / af) < 1e-12 for v in cert_values)
            details["mu_n_moduli"] = sorted(cert_values)
            details["contains_|a|/3_and_3/|a|"] = has_small and has_large
            ok &= has_small and has_large
    return _report("ex42", ok, details)


def _certificate_mu_values(cert) -> list[float]:
    out = []
    for step in cert.steps:
        if step.value is not None:
            out.append(abs(complex(step.value)))
        for v in step.alt_values:
            out.append(abs(complex(v)))
    return out


def _verify_case1(c1=1) -> dict:
    params = NormalFormParams(CASE_I, c1)
    f = build_normal_form(params)
    w = case1_witness(params)
    fh = projectivize(f)
    pair_ok = check_pair(fh, w)
    decision = decide_polynomial_equivalence(f, seed=5)
    ok = pair_ok and decision.verdict == EQUIVALENT
    return _report("case1", ok, {
        "check_pair": pair_ok, "verdict": decision.verdict,
        "mu2": _scal(w.mu()[1]), "lam5": _scal(w.lam()[4])})
