"""The hyperplane criterion engine.

A proper rational map F is equivalent to a proper polynomial map iff
there are hyperplanes H (source) and H' (target), both missing the
closed domain, with F^(H) in H' and F^(complement) in the complement.
Writing H' with t'-coefficient 1 and H as t + sum mu_j z_j = 0 (both
normalizations are legal because disjoint hyperplanes have nonzero
t-coefficients), the two inclusions collapse into one polynomial
identity

    sum_j lam_j F^_j + F^_{N+1}  =  c * (t + sum_i mu_i z_i)^k ,

whose coefficientwise reading is the "coefficient system" below.  The
system is linear in (lam, c) and polynomial in mu.  ``solve_forced``
applies the small set of exact deduction rules used in the paper-style
arguments (definitions of lam from single equations, forcing of single
unknowns, substitution) and either solves the system, derives an exact
contradiction certificate, or hands a residual system to the numeric
search in ``search_witness``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .poly import Poly
from .projective import (BALL, SIEGEL, SIEGEL_TO_BALL, Hyperplane,
                         ball_disjoint, cayley_hyperplane, siegel_disjoint)
from .ratmap import ProjMap, RationalMap, cayley_transport, conjugate_by_autos, \
    dehomogenize, proj_equal, projectivize
from .scalars import FLOAT_CONTEXT, Scalar, SqrtNotRepresentable, ZERO, ONE
from . import sampling

FOUND = "found"
NOT_FOUND = "not_found"
SOLVED = "solved"
CONTRADICTION = "contradiction"
STUCK = "stuck"
EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent"
UNKNOWN = "unknown"


# --------------------------------------------------------------------------
# witness pairs and the matching identity
# --------------------------------------------------------------------------

def hyperplane_disjoint(h: Hyperplane) -> bool:
    return ball_disjoint(h) if h.model == BALL else siegel_disjoint(h)


@dataclass(frozen=True)
class WitnessPair:
    """Hyperplane pair (H, H') realizing the criterion; validated on build."""

    source: Hyperplane
    target: Hyperplane
    scale: Scalar = ONE

    def __post_init__(self):
        if not hyperplane_disjoint(self.source):
            raise ValueError("source hyperplane meets the closed region")
        if not hyperplane_disjoint(self.target):
            raise ValueError("target hyperplane meets the closed region")

    @classmethod
    def from_mu_lambda(cls, mu: Sequence, lam: Sequence, model: str,
                       scale=ONE) -> "WitnessPair":
        src = Hyperplane.from_covector(
            tuple(Scalar.coerce(m) for m in mu) + (ONE,), model)
        tgt = Hyperplane.from_covector(
            tuple(Scalar.coerce(x) for x in lam) + (ONE,), model)
        return cls(src, tgt, Scalar.coerce(scale))

    def mu(self) -> tuple[Scalar, ...]:
        return self.source.siegel_coeffs()

    def lam(self) -> tuple[Scalar, ...]:
        return self.target.siegel_coeffs()


def linear_pullback(cov: Sequence, fh: ProjMap) -> Poly:
    """sum_j cov_j * F^_j over all N+1 components (cov includes the
    t'-coefficient last)."""
    cov = [Scalar.coerce(c) for c in cov]
    if len(cov) != fh.N + 1:
        raise ValueError("covector length must be N+1")
    acc = Poly.zero(fh.n + 1)
    for c, p in zip(cov, fh.components):
        if not c.is_zero():
            acc = acc + p.scale(c)
    return acc


def proportional_scale(p: Poly, q: Poly) -> Scalar | None:
    """Scalar s with p = s*q, or None."""
    if q.is_zero():
        return ZERO if p.is_zero() else None
    exp, lead = q.leading()
    num = p.coeff(exp)
    s = num / lead
    return s if (p - q.scale(s)).is_zero() else None


def check_pair(fh: ProjMap, w: WitnessPair) -> bool:
    """The single-identity form of the two inclusion conditions."""
    pullback = linear_pullback(w.target.covector, fh)
    ell = w.source.linear_form_poly()
    s = proportional_scale(pullback, ell ** fh.degree)
    return s is not None and not s.is_zero()


def pair_scale(fh: ProjMap, w: WitnessPair) -> Scalar | None:
    pullback = linear_pullback(w.target.covector, fh)
    ell = w.source.linear_form_poly()
    return proportional_scale(pullback, ell ** fh.degree)


def power_of_linear(p: Poly, d: int) -> tuple[Poly, Scalar] | None:
    """Decide p = c * ell^d for a linear form ell; None when impossible.

    Recovery: pick a variable with a nonzero pure d-th power coefficient
    c_i, set that variable's coefficient in ell to 1, read the others off
    the x_i^{d-1} x_j coefficients divided by d*c_i, then verify.
    """
    if p.is_zero() or not p.is_homogeneous() or p.degree() != d:
        return None
    nv = p.nvars
    pivot = None
    for i in range(nv):
        e = [0] * nv
        e[i] = d
        if not p.coeff(e).is_zero():
            pivot = i
            break
    if pivot is None:
        return None
    e = [0] * nv
    e[pivot] = d
    c = p.coeff(e)
    coeffs = [ZERO] * nv
    coeffs[pivot] = ONE
    dinv = (Scalar.exact(d) * c).invert()
    for j in range(nv):
        if j == pivot:
            continue
        e = [0] * nv
        e[pivot], e[j] = d - 1, 1
        coeffs[j] = p.coeff(e) * dinv
    ell = Poly(nv, {tuple(1 if j == i else 0 for j in range(nv)): coeffs[i]
                    for i in range(nv) if not coeffs[i].is_zero()})
    if ((ell ** d).scale(c) - p).is_zero():
        return ell, c
    return None


# --------------------------------------------------------------------------
# the coefficient system
# --------------------------------------------------------------------------

def _default_names(n: int) -> list[str]:
    if n == 2:
        return ["z", "w", "t"]
    return [f"z{i + 1}" for i in range(n)] + ["t"]


def _multinomial(k: int, alpha: Sequence[int]) -> int:
    rest = k - sum(alpha)
    out = math.factorial(k) // math.factorial(rest)
    for a in alpha:
        out //= math.factorial(a)
    return out


@dataclass
class CoefficientSystem:
    """Equations {coeff_m(pullback) = coeff_m(c * ell^k)} over all
    degree-k monomials m, with unknowns lam_1..lam_N, c, mu_1..mu_n."""

    fh: ProjMap
    monomials: list[tuple[int, ...]]
    equations: dict[tuple[int, ...], Poly]
    unknown_names: list[str]
    source_names: list[str]

    @property
    def n(self) -> int:
        return self.fh.n

    @property
    def N(self) -> int:
        return self.fh.N

    @property
    def c_index(self) -> int:
        return self.fh.N

    def mu_index(self, j: int) -> int:
        return self.fh.N + 1 + j

    def is_mu(self, idx: int) -> bool:
        return idx > self.fh.N

    def monomial_name(self, m: tuple[int, ...]) -> str:
        parts = [f"{self.source_names[i]}^{k}" if k > 1 else self.source_names[i]
                 for i, k in enumerate(m) if k]
        return "*".join(parts) if parts else "1"

    def equation_text(self, eq: Poly) -> str:
        return f"{eq.to_expr(self.unknown_names)} = 0"


def coefficient_system(fh: ProjMap,
                       source_names: Sequence[str] | None = None
                       ) -> CoefficientSystem:
    n, N, k = fh.n, fh.N, fh.degree
    nunk = N + 1 + n
    names = [f"lam{j + 1}" for j in range(N)] + ["c"] + \
            [f"mu{i + 1}" for i in range(n)]
    src = list(source_names) if source_names else _default_names(n)

    def unit(idx: int) -> tuple[int, ...]:
        e = [0] * nunk
        e[idx] = 1
        return tuple(e)

    monomials = _degree_monomials(n + 1, k)
    monomials.sort(key=lambda e: (sum(e), tuple(reversed(e))), reverse=True)
    equations = {}
    for m in monomials:
        terms: dict[tuple[int, ...], Scalar] = {}
        for j in range(N):
            a = fh.components[j].coeff(m)
            if not a.is_zero():
                terms[unit(j)] = a
        b = fh.components[N].coeff(m)
        if not b.is_zero():
            terms[(0,) * nunk] = b
        alpha = m[:-1]
        mult = Scalar.exact(-_multinomial(k, alpha))
        e = [0] * nunk
        e[N] = 1
        for i, a in enumerate(alpha):
            e[N + 1 + i] = a
        key = tuple(e)
        terms[key] = terms.get(key, ZERO) + mult
        eq = Poly(nunk, terms)
        if not eq.is_zero():
            equations[m] = eq
    return CoefficientSystem(fh, [m for m in monomials if m in equations],
                             equations, names, src)


def _degree_monomials(nvars: int, k: int) -> list[tuple[int, ...]]:
    if nvars == 1:
        return [(k,)]
    out = []
    for first in range(k, -1, -1):
        for rest in _degree_monomials(nvars - 1, k - first):
            out.append((first,) + rest)
    return out


# --------------------------------------------------------------------------
# the forced-deduction engine
# --------------------------------------------------------------------------

@dataclass
class Step:
    kind: str                     # "define" | "force" | "contradiction"
    unknown: str | None
    monomial: str | None
    equation: str
    conclusion: str
    alternatives: tuple[str, ...] = ()
    # machine-readable payloads (not serialized)
    unknown_index: int | None = None
    expr: Poly | None = None
    value: Scalar | None = None
    alt_values: tuple[Scalar, ...] = ()

    def to_json_obj(self) -> dict:
        obj = {"kind": self.kind, "monomial": self.monomial,
               "equation": self.equation, "conclusion": self.conclusion}
        if self.alternatives:
            obj["alternatives"] = list(self.alternatives)
        return obj


@dataclass
class InfeasibilityCert:
    """Replayable chain of coefficient deductions ending in a contradiction."""

    steps: list[Step]

    def to_json_obj(self) -> list[dict]:
        return [s.to_json_obj() for s in self.steps]

    def final(self) -> Step:
        return self.steps[-1]


@dataclass
class SolveResult:
    status: str
    system: CoefficientSystem
    steps: list[Step]
    forced: dict[int, Scalar]
    definitions: dict[int, Poly]
    residual: list[tuple[tuple[int, ...], Poly]]
    free: list[int]
    certificate: InfeasibilityCert | None = None

    def assignment(self, free_default=ZERO) -> dict[str, Scalar] | None:
        """Full unknown assignment, free unknowns defaulted; None if the
        residual system is nonempty."""
        if self.residual:
            return None
        names = self.system.unknown_names
        values: dict[int, Scalar] = dict(self.forced)
        for idx in self.free:
            values.setdefault(idx, free_default)
        nunk = len(names)
        point = [values.get(i, ZERO) for i in range(nunk)]
        out = {names[i]: v for i, v in values.items()}
        for idx, expr in self.definitions.items():
            out[names[idx]] = expr.eval(point)
        return out


def _substitute_unknown(p: Poly, idx: int, replacement: Poly | Scalar) -> Poly:
    if p.degree_in(idx) <= 0:
        return p
    nv = p.nvars
    reps = [Poly.variable(i, nv) for i in range(nv)]
    reps[idx] = (replacement if isinstance(replacement, Poly)
                 else Poly.constant(replacement, nv))
    return p.substitute(reps)


def _linear_constant_coeff(p: Poly, idx: int) -> Scalar | None:
    """Return a when p = a*u + rest with a a nonzero scalar and rest free
    of u; None otherwise."""
    if p.degree_in(idx) != 1:
        return None
    coeff = None
    for e, c in p.terms.items():
        if e[idx] == 1:
            if any(k and i != idx for i, k in enumerate(e)):
                return None
            coeff = c
        elif e[idx] > 1:
            return None
    return coeff


def _univariate_in(p: Poly, idx: int) -> list[tuple[int, Scalar]] | None:
    """Coefficient list [(power, coeff)] if p involves only unknown idx."""
    out = []
    for e, c in p.terms.items():
        for i, k in enumerate(e):
            if k and i != idx:
                return None
        out.append((e[idx], c))
    out.sort()
    return out


def _univariate_roots(coeffs: list[tuple[int, Scalar]]
                      ) -> list[Scalar] | None:
    """Exact roots of a univariate equation of shape u^m * (linear or
    quadratic) = 0; None when the cofactor resists exact solution."""
    if not coeffs:
        return None
    m = min(k for k, _ in coeffs)
    shifted = {k - m: c for k, c in coeffs}
    roots: list[Scalar] = [ZERO] if m > 0 else []
    deg = max(shifted)
    if deg == 0:
        return roots if m > 0 else None
    if deg == 1:
        roots.append(-(shifted.get(0, ZERO) / shifted[1]))
        return roots
    if deg == 2:
        a, b, c = shifted[2], shifted.get(1, ZERO), shifted.get(0, ZERO)
        disc = b * b - Scalar.exact(4) * a * c
        try:
            s = disc.sqrt()
        except SqrtNotRepresentable:
            return None
        half = (Scalar.exact(2) * a).invert()
        roots.extend([(-b + s) * half, (-b - s) * half])
        return roots
    return None


def _scalar_text(x: Scalar) -> str:
    return x.to_expr() if x.is_exact else str(complex(x))


class _Engine:
    def __init__(self, system: CoefficientSystem):
        self.sys = system
        self.steps: list[Step] = []
        self.defs: dict[int, Poly] = {}
        self.forced: dict[int, Scalar] = {}
        self.active: list[tuple[tuple[int, ...], Poly]] = [
            (m, system.equations[m]) for m in system.monomials]
        self.contradiction: Step | None = None

    # -- helpers ---------------------------------------------------------

    def _name(self, idx: int) -> str:
        return self.sys.unknown_names[idx]

    def _apply_everywhere(self, idx: int, repl: Poly | Scalar) -> None:
        self.active = [(m, _substitute_unknown(p, idx, repl))
                       for m, p in self.active]
        self.defs = {u: _substitute_unknown(p, idx, repl)
                     for u, p in self.defs.items()}

    def _record_define(self, m, eq: Poly, idx: int, expr: Poly) -> None:
        self.steps.append(Step(
            kind="define", unknown=self._name(idx),
            monomial=self.sys.monomial_name(m),
            equation=self.sys.equation_text(eq),
            conclusion=f"{self._name(idx)} = "
                       f"{expr.to_expr(self.sys.unknown_names)}",
            unknown_index=idx, expr=expr))

    def _record_force(self, m, eq: Poly, idx: int, value: Scalar) -> None:
        self.steps.append(Step(
            kind="force", unknown=self._name(idx),
            monomial=self.sys.monomial_name(m),
            equation=self.sys.equation_text(eq),
            conclusion=f"{self._name(idx)} = {_scalar_text(value)}",
            unknown_index=idx, value=value))

    # -- phase 1: definitions of the linear unknowns ----------------------

    def eliminate_linear(self) -> None:
        order = [self.sys.c_index] + list(range(self.sys.N))
        for idx in order:
            for pos, (m, p) in enumerate(self.active):
                a = _linear_constant_coeff(p, idx)
                if a is None:
                    continue
                unit = tuple(1 if i == idx else 0 for i in range(p.nvars))
                rest = Poly(p.nvars,
                            {e: c for e, c in p.terms.items() if e != unit})
                expr = rest.scale(-(a.invert()))
                del self.active[pos]
                self._apply_everywhere(idx, expr)
                self.defs[idx] = expr
                self._record_define(m, p, idx, expr)
                break

    # -- phase 2: forcing sweeps ------------------------------------------

    def _force(self, m, eq_before: Poly, idx: int, value: Scalar) -> None:
        self.forced[idx] = value
        self._apply_everywhere(idx, value)
        self._record_force(m, eq_before, idx, value)

    def _contradict(self, m, eq: Poly) -> None:
        alternatives: tuple[str, ...] = ()
        alt_values: tuple[Scalar, ...] = ()
        blame: int | None = None
        # find the most recently forced unknown that makes this equation
        # univariate when its own value is withheld
        for idx in [s.unknown_index for s in reversed(self.steps)
                    if s.kind == "force"]:
            p = self.sys.equations[m]
            for u, expr in [(s.unknown_index, s.expr) for s in self.steps
                            if s.kind == "define"]:
                p = _substitute_unknown(p, u, expr)
            for u, v in self.forced.items():
                if u != idx:
                    p = _substitute_unknown(p, u, v)
            coeffs = _univariate_in(p, idx)
            if coeffs is not None and any(k > 0 for k, _ in coeffs):
                roots = _univariate_roots(coeffs)
                if roots is not None:
                    alternatives = tuple(
                        f"{self._name(idx)} = {_scalar_text(r)}"
                        for r in roots)
                    alt_values = tuple(roots)
                blame = idx
                break
        if blame is not None:
            forced_txt = (f"{self._name(blame)} = "
                          f"{_scalar_text(self.forced[blame])}")
            allowed = " or ".join(alternatives) if alternatives else \
                "no value consistent with the other deductions"
            conclusion = (f"contradiction: {forced_txt} is forced, but this "
                          f"equation admits only {allowed}")
        else:
            conclusion = (f"contradiction: equation reduces to "
                          f"{self.sys.equation_text(eq)}")
        self.contradiction = Step(
            kind="contradiction", unknown=None,
            monomial=self.sys.monomial_name(m),
            equation=self.sys.equation_text(self.sys.equations[m]),
            conclusion=conclusion, alternatives=alternatives,
            unknown_index=blame, alt_values=alt_values)
        self.steps.append(self.contradiction)

    def forcing_sweeps(self) -> None:
        changed = True
        while changed and self.contradiction is None:
            changed = False
            for pos, (m, p) in enumerate(list(self.active)):
                p = self.active[pos][1]
                if p.is_zero():
                    continue
                used = sorted(p.variables_used())
                if not used:
                    self._contradict(m, p)
                    return
                if len(used) != 1:
                    continue
                idx = used[0]
                coeffs = _univariate_in(p, idx)
                degs = [k for k, _ in coeffs]
                if max(degs) == 1:
                    by = dict(coeffs)
                    value = -(by.get(0, ZERO) / by[1])
                    self.active.pop(pos)
                    self._force(m, p, idx, value)
                    changed = True
                    break
                if len(coeffs) == 1 and degs[0] >= 1:
                    self.active.pop(pos)
                    self._force(m, p, idx, ZERO)
                    changed = True
                    break
            self.active = [(m, p) for m, p in self.active if not p.is_zero()]

    def result(self) -> SolveResult:
        if self.contradiction is not None:
            return SolveResult(CONTRADICTION, self.sys, self.steps,
                               dict(self.forced), dict(self.defs), [], [],
                               InfeasibilityCert(list(self.steps)))
        residual = [(m, p) for m, p in self.active if not p.is_zero()]
        constrained = set()
        for _, p in residual:
            constrained |= p.variables_used()
        nunk = len(self.sys.unknown_names)
        free = [i for i in range(nunk)
                if i not in self.forced and i not in self.defs
                and i not in constrained]
        # solved means: no residual equations and every mu pinned; free
        # lam-class unknowns are genuinely arbitrary
        mu_free = [i for i in free if self.sys.is_mu(i)]
        status = STUCK if (residual or mu_free) else SOLVED
        return SolveResult(status, self.sys, self.steps, dict(self.forced),
                           dict(self.defs), residual, free)


def solve_forced(system: CoefficientSystem) -> SolveResult:
    """Exact deduction pass over the coefficient system.

    Rules: (i) a linear equation in one remaining unknown forces it,
    (ii) a single-term equation c*u^m = 0 forces u = 0, (iii) immediate
    substitution of every definition and forced value.  The lam-class
    unknowns (lam_j and c) are eliminated first wherever an equation is
    linear in them with a constant coefficient, which reproduces the
    paper-style "lam in terms of mu" displays.  Deliberately incomplete:
    anything beyond these rules is returned as a residual system.
    """
    eng = _Engine(system)
    eng.eliminate_linear()
    eng.forcing_sweeps()
    return eng.result()


def replay_certificate(cert: InfeasibilityCert,
                       system: CoefficientSystem) -> bool:
    """Re-derive every step of the certificate from the raw system."""
    defs: list[tuple[int, Poly]] = []
    forced: dict[int, Scalar] = {}

    def reduced(m) -> Poly:
        p = system.equations[m]
        for idx, expr in defs:
            p = _substitute_unknown(p, idx, expr)
        for idx, v in forced.items():
            p = _substitute_unknown(p, idx, v)
        return p

    by_name = {n: i for i, n in enumerate(system.unknown_names)}
    for step in cert.steps:
        m = _monomial_from_name(step.monomial, system)
        if m is None or m not in system.equations:
            return False
        p = reduced(m)
        if step.kind == "define":
            idx = by_name[step.unknown]
            a = _linear_constant_coeff(p, idx)
            if a is None:
                return False
            unit = tuple(1 if i == idx else 0 for i in range(p.nvars))
            rest = Poly(p.nvars, {e: c for e, c in p.terms.items()
                                  if e != unit})
            expr = rest.scale(-(a.invert()))
            if step.expr is None or not (expr - step.expr).is_zero():
                return False
            defs.append((idx, expr))
        elif step.kind == "force":
            idx = by_name[step.unknown]
            coeffs = _univariate_in(p, idx)
            if coeffs is None:
                return False
            by = dict(coeffs)
            if max(by) == 1:
                value = -(by.get(0, ZERO) / by[1])
            elif len(by) == 1:
                value = ZERO
            else:
                return False
            if step.value is None or not (value - step.value).is_zero():
                return False
            forced[idx] = value
        elif step.kind == "contradiction":
            if step.unknown_index is not None:
                idx = step.unknown_index
                withheld = {u: v for u, v in forced.items() if u != idx}
                q = system.equations[m]
                for i, expr in defs:
                    q = _substitute_unknown(q, i, expr)
                for u, v in withheld.items():
                    q = _substitute_unknown(q, u, v)
                coeffs = _univariate_in(q, idx)
                if coeffs is None:
                    return False
                # the forced value must fail the equation ...
                val = sum((c * (forced[idx] ** k) for k, c in coeffs), ZERO)
                if val.is_zero():
                    return False
                # ... and every listed alternative must satisfy it
                for r in step.alt_values:
                    vr = sum((c * (r ** k) for k, c in coeffs), ZERO)
                    if not vr.is_zero():
                        return False
            else:
                if p.variables_used() or p.is_zero():
                    return False
        else:
            return False
    return cert.steps[-1].kind == "contradiction"


def _monomial_from_name(name: str | None,
                        system: CoefficientSystem) -> tuple[int, ...] | None:
    if name is None:
        return None
    for m in system.monomials:
        if system.monomial_name(m) == name:
            return m
    return None


# --------------------------------------------------------------------------
# witness search
# --------------------------------------------------------------------------

@dataclass
class SearchResult:
    status: str
    witness: WitnessPair | None
    exact: bool
    reason: str
    solve: SolveResult
    assignment: dict[str, Scalar] | None = None


def _try_witness(system: CoefficientSystem,
                 values: dict[int, Scalar]) -> WitnessPair | None:
    """Build and fully validate a witness from unknown values."""
    nunk = len(system.unknown_names)
    point = [values.get(i, ZERO) for i in range(nunk)]
    lam = point[:system.N]
    mu = point[system.N + 1:]
    try:
        w = WitnessPair.from_mu_lambda(mu, lam, system.fh.model,
                                       scale=point[system.N])
    except ValueError:
        return None
    return w if check_pair(system.fh, w) else None


def _full_values(result: SolveResult,
                 mu_values: dict[int, Scalar]) -> dict[int, Scalar]:
    sysm = result.system
    nunk = len(sysm.unknown_names)
    values: dict[int, Scalar] = dict(result.forced)
    values.update(mu_values)
    for idx in result.free:
        values.setdefault(idx, ZERO)
    point = [values.get(i, ZERO) for i in range(nunk)]
    for idx, expr in result.definitions.items():
        values[idx] = expr.eval(point)
    return values


def _ordered_roots(roots: list[Scalar]) -> list[Scalar]:
    return sorted(roots, key=lambda r: (complex(r).real, complex(r).imag))


def _siegel_slice_candidates(max_num: int = 160) -> list[Fraction]:
    seen = set()
    out = []
    for den in (1, 2, 3, 4, 6, 12):
        for num in range(1, 4 * den * 10 + 1):
            y = Fraction(-num, den)
            if y not in seen and abs(y) <= 40:
                seen.add(y)
                out.append(y)
    out.sort(key=lambda y: (abs(y), y.denominator))
    return out[:max_num * 4]


def search_witness(fh: ProjMap, budget: int = 2000, seed: int = 0,
                   solve: SolveResult | None = None) -> SearchResult:
    """Exact-first, then numeric multistart search for a witness pair.

    Phase 1 finishes the forced solution exactly (closed forms for a
    single leftover unknown; a 1-D pure-imaginary grid scan over a free
    Siegel mu).  Phase 2 minimizes the matching residual over the
    unpinned mu by multistart least squares, solving lam and c linearly
    at each mu, then promotes candidates to exact values and re-validates.
    A NOT_FOUND outcome is not a proof of non-existence.
    """
    system = coefficient_system(fh)
    result = solve if solve is not None else solve_forced(system)
    if result.status == CONTRADICTION:
        return SearchResult(NOT_FOUND, None, True,
                            "coefficient system is infeasible", result)
    if result.status == SOLVED:
        values = _full_values(result, {})
        w = _try_witness(system, values)
        if w is not None:
            return SearchResult(FOUND, w, fh.is_exact(),
                                "forced solution validates", result,
                                result.assignment())
        return SearchResult(
            NOT_FOUND, None, True,
            "the unique solution of the coefficient system violates the "
            "disjointness inequalities", result)

    mu_unpinned = sorted(
        i for i in range(system.N + 1, len(system.unknown_names))
        if i not in result.forced)
    residual = result.residual

    # exact finisher: one constrained unknown with closed-form roots
    constrained = set()
    for _, p in residual:
        constrained |= p.variables_used()
    lam_unresolved = [i for i in constrained if not system.is_mu(i)]
    if not lam_unresolved and len([i for i in mu_unpinned
                                   if i in constrained]) == 1:
        idx = next(i for i in mu_unpinned if i in constrained)
        root_lists = []
        for _, p in residual:
            coeffs = _univariate_in(p, idx)
            if coeffs is None:
                root_lists = None
                break
            roots = _univariate_roots(coeffs)
            if roots is None:
                root_lists = None
                break
            root_lists.append(roots)
        if root_lists:
            candidates = [r for r in root_lists[0]
                          if all(any((r - s).is_zero() for s in lst)
                                 for lst in root_lists[1:])]
            for r in _ordered_roots(candidates):
                values = _full_values(result, {idx: r})
                w = _try_witness(system, values)
                if w is not None:
                    return SearchResult(FOUND, w, fh.is_exact(),
                                        "closed-form root validates", result)

    # exact finisher: free Siegel mu scanned on the pure-imaginary slice
    if not residual and not lam_unresolved and fh.model == SIEGEL \
            and mu_unpinned:
        last = system.mu_index(system.n - 1)
        if last in mu_unpinned:
            for y in _siegel_slice_candidates():
                mu_vals = {i: ZERO for i in mu_unpinned}
                mu_vals[last] = Scalar.exact(0, y)
                values = _full_values(result, mu_vals)
                w = _try_witness(system, values)
                if w is not None:
                    return SearchResult(
                        FOUND, w, fh.is_exact(),
                        "pure-imaginary slice scan validates", result)
    if not residual and not mu_unpinned:
        values = _full_values(result, {})
        w = _try_witness(system, values)
        if w is not None:
            return SearchResult(FOUND, w, fh.is_exact(),
                                "forced solution validates", result)

    # numeric phase
    found = _numeric_search(system, result, mu_unpinned, budget, seed)
    if found is not None:
        w, exact = found
        return SearchResult(FOUND, w, exact, "numeric search validates",
                            result)
    return SearchResult(NOT_FOUND, None, False,
                        f"no witness found within budget {budget}", result)


def _numeric_search(system: CoefficientSystem, result: SolveResult,
                    mu_unpinned: list[int], budget: int,
                    seed: int) -> tuple[WitnessPair, bool] | None:
    """Multistart least squares over the unpinned mu; lam-class unknowns
    left unresolved by the deductions are solved linearly at each mu."""
    if not mu_unpinned:
        return None
    eqs = [p for _, p in result.residual]
    lam_cols = sorted({i for p in eqs for i in p.variables_used()
                       if not system.is_mu(i)})
    nunk = len(system.unknown_names)

    # precompute double-precision term tables per equation
    tables = []
    for p in eqs:
        rows = []
        for e, cval in p.terms.items():
            mu_part = tuple(e[i] for i in mu_unpinned)
            lam_live = [i for i in lam_cols if e[i]]
            forced_factor = complex(1)
            for i, k in enumerate(e):
                if k and i not in mu_unpinned and i not in lam_cols:
                    forced_factor *= complex(result.forced.get(i, ZERO)) ** k
            if len(lam_live) > 1 or (lam_live and e[lam_live[0]] > 1):
                raise ArithmeticError("residual system is not affine in the "
                                      "unresolved lam unknowns")
            col = lam_cols.index(lam_live[0]) if lam_live else None
            rows.append((complex(cval) * forced_factor, mu_part, col))
        tables.append(rows)

    def residual_vec(muvec: np.ndarray):
        a = np.zeros((len(eqs), len(lam_cols)), dtype=complex)
        b = np.zeros(len(eqs), dtype=complex)
        for r, rows in enumerate(tables):
            for cval, mu_part, col in rows:
                term = cval
                for z, k in zip(muvec, mu_part):
                    if k:
                        term *= z ** k
                if col is None:
                    b[r] -= term
                else:
                    a[r, col] += term
        if lam_cols:
            sol, *_ = np.linalg.lstsq(a, b, rcond=None)
            res = a @ sol - b
            return res, sol
        return -b, np.zeros(0, dtype=complex)

    from scipy.optimize import least_squares

    m = len(mu_unpinned)

    def fun(x: np.ndarray) -> np.ndarray:
        mu = x[0::2] + 1j * x[1::2]
        res, _ = residual_vec(mu)
        return np.concatenate([res.real, res.imag])

    starts = sampling.complex_box_points(m, max(8, budget), seed=seed,
                                         radius=1.0)
    for start in starts[:budget]:
        x0 = np.array([c for z in start for c in (z.real, z.imag)])
        try:
            opt = least_squares(fun, x0, method="trf", xtol=1e-15,
                                ftol=1e-15, gtol=1e-15, max_nfev=600)
        except Exception:
            continue
        if not np.isfinite(opt.cost) or opt.cost > 1e-16:
            continue
        mu = opt.x[0::2] + 1j * opt.x[1::2]
        refined = _refine_mu(system, result, mu_unpinned, lam_cols, eqs, mu)
        if refined is None:
            continue
        mu_ref, lam_ref = refined
        try:
            candidate = _promote_candidate(system, result, mu_unpinned,
                                           lam_cols, mu_ref, lam_ref)
        except (ValueError, ArithmeticError):
            continue
        if candidate is not None:
            return candidate
    return None


def _refine_mu(system, result, mu_unpinned, lam_cols, eqs, mu0):
    """Gauss-Newton refinement of (mu, lam) at working precision."""
    nunk = len(system.unknown_names)
    unknown_order = list(mu_unpinned) + list(lam_cols)
    values = {i: complex(z) for i, z in zip(mu_unpinned, mu0)}

    def assemble(vals: dict[int, mpmath.mpc]):
        subs = []
        for i in range(nunk):
            if i in result.forced:
                subs.append(complex(result.forced[i]))
            elif i in vals:
                subs.append(vals[i])
            else:
                subs.append(None)
        return subs

    # initial lam by double-precision least squares
    with mpmath.workprec(FLOAT_CONTEXT.prec):
        vals = {i: mpmath.mpc(values[i]) for i in mu_unpinned}
        for i in lam_cols:
            vals[i] = mpmath.mpc(0)
        for _ in range(60):
            subs = assemble(vals)
            rows, rhs = [], []
            for p in eqs:
                val = mpmath.mpc(0)
                grad = {u: mpmath.mpc(0) for u in unknown_order}
                for e, c in p.terms.items():
                    term = mpmath.mpc(complex(c)) if c.is_exact else \
                        mpmath.mpc(c.to_mpc())
                    factors = []
                    for i, k in enumerate(e):
                        if k:
                            base = subs[i]
                            if base is None:
                                base = mpmath.mpc(0)
                            factors.append((i, k, mpmath.mpc(base)))
                    prod = term
                    for _, k, base in factors:
                        prod *= base ** k
                    val += prod
                    for i, k, base in factors:
                        if i in grad and base != 0:
                            grad[i] += prod * k / base
                        elif i in grad and base == 0 and k == 1:
                            rest = term
                            for j, kk, bb in factors:
                                if j != i:
                                    rest *= bb ** kk
                            grad[i] += rest
                rows.append([grad[u] for u in unknown_order])
                rhs.append(-val)
            a = mpmath.matrix(rows)
            b = mpmath.matrix(rhs)
            try:
                delta = mpmath.qr_solve(a, b)[0]
            except Exception:
                return None
            maxstep = 0.0
            for j, u in enumerate(unknown_order):
                vals[u] += delta[j]
                maxstep = max(maxstep, abs(complex(delta[j])))
            if maxstep < mpmath.mpf(10) ** (-int(FLOAT_CONTEXT.prec * 0.28)):
                break
        # final residual check
        subs = assemble(vals)
        resid = 0.0
        for p in eqs:
            total = mpmath.mpc(0)
            for e, c in p.terms.items():
                term = mpmath.mpc(c.to_mpc())
                for i, k in enumerate(e):
                    if k:
                        term *= (subs[i] if subs[i] is not None
                                 else mpmath.mpc(0)) ** k
                total += term
            resid = max(resid, abs(complex(total)))
        if resid > 1e-20:
            return None
        return ([vals[i] for i in mu_unpinned], [vals[i] for i in lam_cols])


def promote_complex(z, max_den: int = 10 ** 6,
                    tol: float = 1e-20) -> Scalar | None:
    """Round a high-precision complex to an exact rational/quadratic-surd
    scalar; None when nothing within tolerance is found."""
    with mpmath.workprec(FLOAT_CONTEXT.prec):
        z = mpmath.mpc(z)
        parts = []
        for x in (z.real, z.imag):
            fr = Fraction(float(x)).limit_denominator(max_den)
            if abs(x - mpmath.mpf(fr.numerator) / fr.denominator) <= tol * max(
                    1.0, abs(float(x))):
                parts.append(Scalar.exact(fr))
                continue
            sq = Fraction(float(x) ** 2).limit_denominator(max_den)
            approx = mpmath.sqrt(mpmath.mpf(sq.numerator) / sq.denominator)
            if sq >= 0 and abs(abs(x) - approx) <= tol * max(1.0, abs(float(x))):
                root = Scalar.sqrt_rational(sq)
                parts.append(root if x >= 0 else -root)
                continue
            return None
        return parts[0] + Scalar.i() * parts[1]


def _promote_candidate(system, result, mu_unpinned, lam_cols, mu_vals,
                       lam_vals) -> tuple[WitnessPair, bool] | None:
    exact_mu = [promote_complex(z) for z in mu_vals]
    if all(v is not None for v in exact_mu):
        values = _full_values(result, dict(zip(mu_unpinned, exact_mu)))
        for i, z in zip(lam_cols, lam_vals):
            prom = promote_complex(z)
            if prom is None:
                break
            values[i] = prom
        else:
            if _residual_zero_exact(result, values):
                w = _try_witness(system, values)
                if w is not None:
                    return w, True
    # tolerance-validated float witness
    values = {i: Scalar.from_float(complex(z).real, complex(z).imag)
              for i, z in zip(mu_unpinned, mu_vals)}
    values.update({i: Scalar.from_float(complex(z).real, complex(z).imag)
                   for i, z in zip(lam_cols, lam_vals)})
    full = _full_values(result, values)
    w = _float_witness(system, full)
    if w is not None:
        return w, False
    return None


def _residual_zero_exact(result: SolveResult,
                         values: dict[int, Scalar]) -> bool:
    nunk = len(result.system.unknown_names)
    point = [values.get(i, ZERO) for i in range(nunk)]
    return all(p.eval(point).is_zero() for _, p in result.residual)


def _float_witness(system: CoefficientSystem, values: dict[int, Scalar],
                   tol: float = 1e-10) -> WitnessPair | None:
    nunk = len(system.unknown_names)
    point = [values.get(i, ZERO) for i in range(nunk)]
    lam = [complex(v) for v in point[:system.N]]
    mu = [complex(v) for v in point[system.N + 1:]]
    model = system.fh.model
    if model == SIEGEL:
        m_src = 4 * mu[-1].imag + sum(abs(x) ** 2 for x in mu[:-1])
        m_tgt = 4 * lam[-1].imag + sum(abs(x) ** 2 for x in lam[:-1])
    else:
        m_src = sum(abs(x) ** 2 for x in mu) - 1
        m_tgt = sum(abs(x) ** 2 for x in lam) - 1
    if m_src >= -tol or m_tgt >= -tol:
        return None
    fh = system.fh.to_float()
    cov = [Scalar.from_float(z.real, z.imag) for z in lam] + \
          [Scalar.from_float(1)]
    pull = linear_pullback(cov, fh)
    src = Hyperplane.from_covector(
        [Scalar.from_float(z.real, z.imag) for z in mu] + [Scalar.from_float(1)],
        model)
    ell = src.linear_form_poly()
    target = ell ** fh.degree
    c = complex(values.get(system.c_index, ONE))
    diff = pull - target.scale(Scalar.from_float(c.real, c.imag))
    scale = max((abs(complex(v)) for v in pull.terms.values()), default=1.0)
    if any(abs(complex(v)) > tol * max(scale, 1.0)
           for v in diff.terms.values()):
        return None
    tgt = Hyperplane.from_covector(list(cov), model)
    return WitnessPair(src, tgt, Scalar.from_float(c.real, c.imag))


# --------------------------------------------------------------------------
# the decision procedure
# --------------------------------------------------------------------------

@dataclass
class Decision:
    verdict: str
    witness: WitnessPair | None = None
    certificate: InfeasibilityCert | None = None
    polynomial_map: RationalMap | None = None
    sigma: object | None = None
    tau: object | None = None
    report: str = ""
    search: SearchResult | None = None
    exact: bool = True


def decide_polynomial_equivalence(f: RationalMap, budget: int = 2000,
                                  seed: int = 0,
                                  check_input: bool = True) -> Decision:
    """Decide whether f is equivalent to a proper polynomial map.

    Pipeline: properness gate, coefficient system, forced deductions
    (NOT_EQUIVALENT with a replayable certificate on contradiction),
    witness search, then construction of the polynomial representative by
    sending both witness hyperplanes to infinity.
    """
    from .hermitian import check_proper

    ball_map = f if f.model == BALL else cayley_transport(f)
    if check_input:
        report = check_proper(ball_map, seed=seed)
        if not report:
            raise ValueError(f"input map is not proper: {report.status}")
    fh = projectivize(f)
    system = coefficient_system(fh)
    solved = solve_forced(system)
    if solved.status == CONTRADICTION:
        return Decision(NOT_EQUIVALENT, certificate=solved.certificate,
                        report="coefficient matching is infeasible",
                        search=None)
    search = search_witness(fh, budget=budget, seed=seed, solve=solved)
    if search.status != FOUND:
        verdict = UNKNOWN
        return Decision(verdict, report=search.reason, search=search)
    w = search.witness
    try:
        poly_map, sigma, tau, exact = construct_polynomial_map(f, w)
    except (ValueError, ArithmeticError) as exc:
        return Decision(UNKNOWN, witness=w, search=search,
                        report=f"witness found but construction failed: {exc}")
    return Decision(EQUIVALENT, witness=w, polynomial_map=poly_map,
                    sigma=sigma, tau=tau, search=search, exact=search.exact,
                    report=search.reason)


def construct_polynomial_map(f: RationalMap, w: WitnessPair):
    """Conjugate f by elements sending (H, H') to the infinity pair.

    Returns (polynomial map, sigma, tau, exact flag) where the
    projectivized output is tau o F^ o sigma^{-1} in the ball model and
    its last component is a multiple of t^k.
    """
    from .autgroup import hyperplane_to_infinity

    if f.model == SIEGEL:
        f_ball = cayley_transport(f)
        h_src = cayley_hyperplane(w.source, SIEGEL_TO_BALL)
        h_tgt = cayley_hyperplane(w.target, SIEGEL_TO_BALL)
    else:
        f_ball, h_src, h_tgt = f, w.source, w.target
    sigma = hyperplane_to_infinity(h_src)
    tau = hyperplane_to_infinity(h_tgt)
    fh = projectivize(f_ball)
    qh = conjugate_by_autos(tau, fh, sigma.invert())
    if not qh.is_exact():
        qh = qh.chop()
    last = qh.components[-1]
    tpow = (0,) * fh.n + (fh.degree,)
    if set(last.terms) != {tpow}:
        raise ArithmeticError(
            "conjugated denominator is not constant; witness pair does not "
            "polynomialize the map")
    back = conjugate_by_autos(tau.invert(), qh, sigma)
    if not back.is_exact():
        back = back.chop()
    if not proj_equal(back, fh):
        raise ArithmeticError("equivalence identity failed verification")
    poly_map = dehomogenize(qh, validate=False)
    return poly_map, sigma, tau, qh.is_exact()
