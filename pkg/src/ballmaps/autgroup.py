"""The indefinite unitary group of the projectivized ball and the
construction sending a ball-disjoint hyperplane to the hyperplane at
infinity.

A group element for the n-ball is an (n+1) x (n+1) matrix A with
``A E conj(A)^t = c E`` for the form ``E = diag(1, ..., 1, -1)`` and some
real ``c > 0``; projectively the scale is irrelevant, and admitting it
keeps the paper-style matrices (which are only projectively unitary)
verifiable exactly.  Points transform by the matrix, hyperplane covectors
by the inverse (equivalently inverse-transpose on columns), so point
membership commutes with the action.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (Matrix, conj_transpose, identity, mat, mat_mul,
                     mat_scale, mat_to_float)
from .projective import BALL, Hyperplane, ProjPoint, ball_disjoint
from .scalars import Scalar, SqrtNotRepresentable, ZERO, ONE

__all__ = [
    "IndefUnitary", "indef_form", "verify_indef_unitary", "unitary_scale",
    "mobius_to_infinity", "hyperplane_to_infinity",
]


def indef_form(size: int) -> Matrix:
    rows = []
    for i in range(size):
        row = [ZERO] * size
        row[i] = ONE if i < size - 1 else -ONE
        rows.append(tuple(row))
    return tuple(rows)


def unitary_scale(a: Matrix) -> Scalar | None:
    """The real c > 0 with A E conj(A)^t = c E, or None if there is none."""
    size = len(a)
    if any(len(row) != size for row in a):
        return None
    e = indef_form(size)
    m = mat_mul(mat_mul(a, e), conj_transpose(a))
    c = -m[size - 1][size - 1]
    if not c.is_real() or c.real().sign() <= 0:
        return None
    for i in range(size):
        for j in range(size):
            if not (m[i][j] - c * e[i][j]).is_zero():
                return None
    return c.real()


def verify_indef_unitary(a: Matrix) -> bool:
    return unitary_scale(a) is not None


@dataclass(frozen=True)
class IndefUnitary:
    """Element of U(n+1, 1) up to positive real scale, acting on CP^n."""

    matrix: Matrix

    def __post_init__(self):
        if unitary_scale(self.matrix) is None:
            raise ValueError("matrix does not preserve the indefinite form")

    @classmethod
    def from_rows(cls, rows) -> "IndefUnitary":
        return cls(mat(rows))

    @classmethod
    def identity(cls, n: int) -> "IndefUnitary":
        return cls(identity(n + 1))

    @property
    def size(self) -> int:
        return len(self.matrix)

    @property
    def n(self) -> int:
        """Dimension of the ball the element acts on."""
        return self.size - 1

    def act_on_point(self, p: ProjPoint) -> ProjPoint:
        return p.transform(self.matrix)

    def act_on_hyperplane(self, h: Hyperplane) -> Hyperplane:
        return h.transform(self.matrix)

    def compose(self, other: "IndefUnitary") -> "IndefUnitary":
        return IndefUnitary(mat_mul(self.matrix, other.matrix))

    def invert(self) -> "IndefUnitary":
        c = unitary_scale(self.matrix)
        e = indef_form(self.size)
        inv = mat_scale(mat_mul(mat_mul(e, conj_transpose(self.matrix)), e),
                        c.invert())
        return IndefUnitary(inv)

    def to_float(self) -> "IndefUnitary":
        return IndefUnitary(mat_to_float(self.matrix))

    def same_as(self, other: "IndefUnitary") -> bool:
        from .linalg import mat_equal_up_to_scale
        return mat_equal_up_to_scale(self.matrix, other.matrix)


def mobius_to_infinity(lam: Scalar, n: int) -> IndefUnitary:
    """Matrix of [z_1 - conj(lam) t : sqrt(1-|lam|^2) z' : t - lam z_1].

    Sends the hyperplane {lam z_1 - t = 0} to the hyperplane at infinity
    and restricts to an automorphism of the ball; requires |lam| < 1.
    """
    lam = Scalar.coerce(lam)
    one_minus = ONE - lam.abs2()
    if one_minus.sign() <= 0:
        raise ValueError("mobius_to_infinity needs |lambda| < 1")
    try:
        s = one_minus.sqrt()
    except SqrtNotRepresentable:
        lam = lam.to_float()
        s = (ONE - lam.abs2()).sqrt()
    rows = []
    top = [ZERO] * (n + 1)
    top[0], top[n] = ONE, -lam.conj()
    rows.append(top)
    for j in range(1, n):
        row = [ZERO] * (n + 1)
        row[j] = s
        rows.append(row)
    bot = [ZERO] * (n + 1)
    bot[0], bot[n] = -lam, ONE
    rows.append(bot)
    return IndefUnitary(mat(rows))


def _householder_to_e1(x: list[Scalar], lam: Scalar) -> Matrix:
    """Unitary M (column convention) with M x = lam e_1, ||x|| = lam."""
    n = len(x)
    e1 = [ONE if i == 0 else ZERO for i in range(n)]
    target = [lam * c for c in e1]
    if all((a - b).is_zero() for a, b in zip(x, target)):
        return identity(n)
    phase = ONE
    if not x[0].is_zero() and not x[0].is_real():
        mod = x[0].abs2().sqrt()
        phase = x[0] / mod
    w = [a - phase * lam * b for a, b in zip(x, e1)]
    ww = sum((c.abs2() for c in w), ZERO)
    if ww.is_zero():
        refl = identity(n)
    else:
        scale = Scalar.exact(2) / ww
        refl = tuple(
            tuple((ONE if i == j else ZERO) - scale * w[i] * w[j].conj()
                  for j in range(n))
            for i in range(n))
    if phase == ONE:
        return refl
    d = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    d[0][0] = phase.conj()
    return mat_mul(mat(d), refl)


def hyperplane_to_infinity(h: Hyperplane) -> IndefUnitary:
    """A group element sending a ball-disjoint hyperplane to {t = 0}.

    Normalizes H to sum a_j z_j - t = 0, rotates the coefficient vector
    onto the first axis by a Householder-style unitary, then applies the
    Moebius factor.  Falls back to the float backend when a needed square
    root leaves the radical field.
    """
    if h.model != BALL:
        raise ValueError("hyperplane_to_infinity expects a ball-model hyperplane")
    if not ball_disjoint(h):
        raise ValueError("hyperplane meets the closed ball; no such element")
    n = h.n
    cov = h.covector
    t = cov[-1]
    a = [-(c / t) for c in cov[:-1]]
    beta = sum((c.abs2() for c in a), ZERO)
    if beta.is_zero():
        return IndefUnitary.identity(n)
    try:
        lam = beta.sqrt()
        m = _householder_to_e1(list(a), lam)
    except SqrtNotRepresentable:
        a = [c.to_float() for c in a]
        beta = sum((c.abs2() for c in a), ZERO)
        lam = beta.sqrt()
        m = _householder_to_e1(list(a), lam)
    # row convention: a W = lam e_1 with W = transpose(M); block-diagonal
    # rotation diag(W^*, 1) applied first, then the Moebius factor
    w_star = tuple(tuple(m[i][j].conj() for j in range(n)) for i in range(n))
    block = tuple(
        tuple((w_star[i][j] if i < n and j < n else
               (ONE if i == j == n else ZERO)) for j in range(n + 1))
        for i in range(n + 1))
    sigma = mobius_to_infinity(lam, n).compose(IndefUnitary(block))
    if not sigma.act_on_hyperplane(h).same_as(Hyperplane.infinity(n, BALL)):
        raise AssertionError("hyperplane_to_infinity failed verification")
    return sigma
