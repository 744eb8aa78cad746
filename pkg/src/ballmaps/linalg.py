"""Dense matrix helpers over Scalar entries (sizes here are tiny)."""

from __future__ import annotations

from typing import Sequence

from .scalars import Scalar, ZERO, ONE

Matrix = tuple[tuple[Scalar, ...], ...]
Vector = tuple[Scalar, ...]


def mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Scalar.coerce(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n))
                 for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise ValueError("matrix dimension mismatch")
    bt = list(zip(*b))
    out = []
    for row in a:
        out.append(tuple(
            sum((x * y for x, y in zip(row, col)), ZERO) for col in bt))
    return tuple(out)


def mat_vec(a: Matrix, v: Sequence[Scalar]) -> Vector:
    if len(a[0]) != len(v):
        raise ValueError("matrix/vector dimension mismatch")
    return tuple(sum((x * y for x, y in zip(row, v)), ZERO) for row in a)


def vec_mat(v: Sequence[Scalar], a: Matrix) -> Vector:
    if len(v) != len(a):
        raise ValueError("vector/matrix dimension mismatch")
    return tuple(sum((v[i] * a[i][j] for i in range(len(v))), ZERO)
                 for j in range(len(a[0])))


def conj_transpose(a: Matrix) -> Matrix:
    return tuple(tuple(a[i][j].conj() for i in range(len(a)))
                 for j in range(len(a[0])))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_scale(a: Matrix, c) -> Matrix:
    c = Scalar.coerce(c)
    return tuple(tuple(x * c for x in row) for row in a)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb))
                 for ra, rb in zip(a, b))


def mat_inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises on singular input."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("inverse of a non-square matrix")
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n)
                      if not aug[r][col].is_zero()), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].invert()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def mat_equal_up_to_scale(a: Matrix, b: Matrix) -> bool:
    """True iff a = s*b for some nonzero scalar s."""
    if len(a) != len(b) or len(a[0]) != len(b[0]):
        return False
    flat_a = [x for row in a for x in row]
    flat_b = [x for row in b for x in row]
    ref = next((k for k, x in enumerate(flat_b) if not x.is_zero()), None)
    if ref is None:
        return all(x.is_zero() for x in flat_a)
    if flat_a[ref].is_zero():
        return False
    for x, y in zip(flat_a, flat_b):
        if not (x * flat_b[ref] - y * flat_a[ref]).is_zero():
            return False
    return True


def vec_equal_up_to_scale(u: Sequence[Scalar], v: Sequence[Scalar]) -> bool:
    return mat_equal_up_to_scale((tuple(u),), (tuple(v),))


def mat_to_float(a: Matrix) -> Matrix:
    return tuple(tuple(x.to_float() for x in row) for row in a)
