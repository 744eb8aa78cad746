"""Seeded low-discrepancy sampling of balls and spheres (oracle support)."""

from __future__ import annotations

from statistics import NormalDist

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)
_NORM = NormalDist()


def halton(index: int, base: int) -> float:
    f, r = 1.0, 0.0
    while index > 0:
        f /= base
        r += f * (index % base)
        index //= base
    return r


def halton_point(index: int, dim: int) -> list[float]:
    if dim > len(_PRIMES):
        raise ValueError("dimension too large for the fixed prime table")
    return [halton(index, _PRIMES[k]) for k in range(dim)]


def _unit(u: list[float]) -> list[float]:
    g = [_NORM.inv_cdf(min(max(x, 1e-12), 1 - 1e-12)) for x in u]
    norm = sum(x * x for x in g) ** 0.5 or 1.0
    return [x / norm for x in g]


def complex_ball_points(n: int, count: int, seed: int = 0,
                        boundary: bool = False) -> list[tuple[complex, ...]]:
    """Quasi-random points of the closed unit ball of C^n (affine chart).

    With boundary=True all points lie on the unit sphere.  Deterministic
    for a given seed (the seed offsets the Halton index).
    """
    dim = 2 * n
    start = 1 + 7919 * (seed % 100003)
    pts = []
    for k in range(count):
        u = halton_point(start + k, dim + 1)
        direction = _unit(u[:dim])
        r = 1.0 if boundary else u[dim] ** (1.0 / dim)
        coords = tuple(complex(direction[2 * j], direction[2 * j + 1]) * r
                       for j in range(n))
        pts.append(coords)
    return pts


def complex_box_points(dim: int, count: int, seed: int = 0,
                       radius: float = 2.0) -> list[tuple[complex, ...]]:
    """Quasi-random complex points in a centered box of given radius."""
    start = 1 + 104729 * (seed % 99991)
    pts = []
    for k in range(count):
        u = halton_point(start + k, 2 * dim)
        pts.append(tuple(
            complex((2 * u[2 * j] - 1) * radius, (2 * u[2 * j + 1] - 1) * radius)
            for j in range(dim)))
    return pts
