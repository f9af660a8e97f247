"""Polyhedral positive cones, order predicates and dual-direction sampling.

A cone carries both a generator description (rays) and an inequality
description (normals: x is in the cone iff <n, x> >= 0 for every normal n),
plus a designated order unit that must be interior.  The constructor
cross-validates the two descriptions instead of converting; for dimensions
up to 3 a built-in converter can fill in a missing side.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch
from .measure import Point, as_point
from .rational import Rational, rat, rat_ceil

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit generator (splitmix64).

    state += 0x9E3779B97F4A7C15 (mod 2^64), then the output is
    z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31).
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


@dataclass(frozen=True)
class Direction:
    """A dual-cone direction t, with its normalization <t, unit>."""

    t: Point
    normalization: Rational


def _dot(a: Point, b: Point) -> Rational:
    return sum(x * y for x, y in zip(a, b))


def _is_zero(v: Point) -> bool:
    return all(c == 0 for c in v)


def _primitive(v: Point) -> Point:
    """Scale a nonzero rational vector to coprime integers, keeping sign."""
    den_lcm = 1
    for c in v:
        d = int(c.denominator)
        den_lcm = den_lcm * d // gcd(den_lcm, d)
    ints = [int(c * den_lcm) for c in v]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    return tuple(rat(c // g) for c in ints)


def _rank(vectors: Sequence[Point], dim: int) -> int:
    rows = [list(v) for v in vectors]
    rank = 0
    for col in range(dim):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / prow[col]
                rows[r] = [a - f * b for a, b in zip(rows[r], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _normals_from_rays(dim: int, rays: Sequence[Point]) -> list[Point]:
    """Facet normals of the cone generated by rays, for dim <= 3."""
    if _rank(rays, dim) < dim:
        raise ValueError("rays do not span the space; cone has no interior point")
    candidates: list[Point] = []
    if dim == 1:
        candidates = [(rat(1),), (rat(-1),)]
    elif dim == 2:
        for a, b in rays:
            candidates.append((-b, a))
            candidates.append((b, -a))
    elif dim == 3:
        for i in range(len(rays)):
            for j in range(i + 1, len(rays)):
                (a1, a2, a3), (b1, b2, b3) = rays[i], rays[j]
                cross = (a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
                if not _is_zero(cross):
                    candidates.append(cross)
                    candidates.append(tuple(-c for c in cross))
    else:
        raise ValueError("ray-to-normal conversion is built in only for dim <= 3")
    seen: set[Point] = set()
    normals: list[Point] = []
    for n in candidates:
        if _is_zero(n) or any(_dot(n, r) < 0 for r in rays):
            continue
        p = _primitive(n)
        if p not in seen:
            seen.add(p)
            normals.append(p)
    if not normals:
        raise ValueError("cone has a trivial dual; supply normals explicitly")
    return normals


def _rays_from_normals(dim: int, normals: Sequence[Point]) -> list[Point]:
    """Generators of {x : <n, x> >= 0 for all n}, for dim <= 3.

    Supports pointed full-dimensional cones, plus the half-plane case in
    dim 2; anything with a larger lineality space must supply rays.
    """
    candidates: list[Point] = []
    if dim == 1:
        candidates = [(rat(1),), (rat(-1),)]
    elif dim == 2:
        for a, b in normals:
            candidates.append((b, -a))
            candidates.append((-b, a))
        if len(normals) == 1:
            candidates.append(normals[0])  # half-plane: both boundary rays + interior
    elif dim == 3:
        if _rank(normals, dim) < dim:
            raise ValueError(
                "normal-to-ray conversion needs a pointed cone in dim 3; supply rays"
            )
        for i in range(len(normals)):
            for j in range(i + 1, len(normals)):
                (a1, a2, a3), (b1, b2, b3) = normals[i], normals[j]
                cross = (a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
                if not _is_zero(cross):
                    candidates.append(cross)
                    candidates.append(tuple(-c for c in cross))
    else:
        raise ValueError("normal-to-ray conversion is built in only for dim <= 3")
    seen: set[Point] = set()
    rays: list[Point] = []
    for r in candidates:
        if _is_zero(r) or any(_dot(n, r) < 0 for n in normals):
            continue
        p = _primitive(r)
        if p not in seen:
            seen.add(p)
            rays.append(p)
    if not rays or _rank(rays, dim) < dim:
        raise ValueError("could not recover spanning rays; supply rays explicitly")
    return rays


class Cone:
    """Polyhedral positive cone on R^d with a designated interior order unit."""

    __slots__ = ("dim", "rays", "normals", "unit", "kind")

    def __init__(
        self,
        dim: int,
        rays: Iterable[Sequence],
        normals: Iterable[Sequence],
        unit: Sequence,
        kind: str = "generators",
    ):
        if dim < 1:
            raise ValueError("dimension must be a positive integer")
        self.dim = dim
        self.rays = tuple(as_point(r, dim) for r in rays)
        self.normals = tuple(as_point(n, dim) for n in normals)
        self.unit = as_point(unit, dim)
        self.kind = kind
        if not self.rays or not self.normals:
            raise ValueError("a cone needs at least one ray and one normal")
        for v in self.rays + self.normals:
            if _is_zero(v):
                raise ValueError("zero vectors are not allowed as rays or normals")
        for r in self.rays:
            for n in self.normals:
                if _dot(n, r) < 0:
                    raise ValueError(
                        f"ray {r} violates normal {n}: descriptions are inconsistent"
                    )
        for n in self.normals:
            if _dot(n, self.unit) <= 0:
                raise ValueError(f"unit {self.unit} is not interior (normal {n})")

    # -- constructors --------------------------------------------------------

    @classmethod
    def halfline(cls, unit: Sequence = (1,)) -> "Cone":
        """The nonnegative half-line in R^1."""
        return cls(1, [(1,)], [(1,)], unit, kind="halfline")

    @classmethod
    def orthant(cls, dim: int, unit: Sequence | None = None) -> "Cone":
        """The nonnegative orthant in R^d."""
        basis = [tuple(rat(int(i == j)) for j in range(dim)) for i in range(dim)]
        if unit is None:
            unit = (rat(1),) * dim
        return cls(dim, basis, basis, unit, kind="orthant")

    @classmethod
    def from_generators(
        cls,
        dim: int,
        rays: Iterable[Sequence] | None = None,
        normals: Iterable[Sequence] | None = None,
        unit: Sequence | None = None,
    ) -> "Cone":
        """Build from rays and/or normals; fills the missing side for dim <= 3."""
        if rays is None and normals is None:
            raise ValueError("need rays, normals, or both")
        rays_p = None if rays is None else [as_point(r, dim) for r in rays]
        normals_p = None if normals is None else [as_point(n, dim) for n in normals]
        if normals_p is None:
            normals_p = _normals_from_rays(dim, rays_p)
        if rays_p is None:
            rays_p = _rays_from_normals(dim, normals_p)
        if unit is None:
            unit = tuple(sum(col) for col in zip(*rays_p))
        return cls(dim, rays_p, normals_p, unit)

    # -- order predicates ------------------------------------------------------

    def contains(self, x: Sequence) -> bool:
        pt = as_point(x, self.dim)
        return all(_dot(n, pt) >= 0 for n in self.normals)

    def leq_point(self, x: Sequence, y: Sequence) -> bool:
        """x <= y iff y - x lies in the cone."""
        xp = as_point(x, self.dim)
        yp = as_point(y, self.dim)
        return all(_dot(n, tuple(b - a for a, b in zip(xp, yp))) >= 0 for n in self.normals)

    def is_order_unit(self, u: Sequence) -> bool:
        """True iff u is interior and the cone is full-dimensional."""
        up = as_point(u, self.dim)
        if _rank(self.rays, self.dim) < self.dim:
            return False
        return all(_dot(n, up) > 0 for n in self.normals)

    def bounding_k(self, points: Iterable[Sequence]) -> int:
        """Smallest k in N with -k*unit <= x <= k*unit for all given points."""
        worst = rat(0)
        for p in points:
            pt = as_point(p, self.dim)
            for n in self.normals:
                q = abs(_dot(n, pt)) / _dot(n, self.unit)
                if q > worst:
                    worst = q
        return rat_ceil(worst)

    # -- dual directions -------------------------------------------------------

    def _normalize_dual(self, t: Point) -> Point:
        s = _dot(t, self.unit)
        if s <= 0:
            raise ValueError(f"dual vector {t} has nonpositive pairing with the unit")
        return tuple(c / s for c in t)

    def dual_directions(self, n_samples: int, seed: int = 0) -> list[Direction]:
        """Deterministic list of dual-cone directions, normalized to <t, unit> = 1.

        Contains every extreme ray of the dual cone (the normals), all pairwise
        midpoints of those rays, and ``n_samples`` pseudo-random convex
        combinations drawn with splitmix64 from ``seed``.  Exact duplicates are
        removed, preserving first occurrence.
        """
        if n_samples < 0:
            raise ValueError("n_samples must be nonnegative")
        base = [self._normalize_dual(n) for n in self.normals]
        seen: set[Point] = set()
        out: list[Direction] = []

        def push(t: Point) -> None:
            if t not in seen:
                seen.add(t)
                out.append(Direction(t=t, normalization=_dot(t, self.unit)))

        for t in base:
            push(t)
        for i in range(len(base)):
            for j in range(i + 1, len(base)):
                push(tuple((a + b) / 2 for a, b in zip(base[i], base[j])))
        rng = SplitMix64(seed)
        for _ in range(n_samples):
            weights = [(rng.next_u64() >> 48) + 1 for _ in base]
            total = sum(weights)
            push(
                tuple(
                    sum(w * t[k] for w, t in zip(weights, base)) / total
                    for k in range(self.dim)
                )
            )
        return out

    def __repr__(self) -> str:
        return f"Cone(dim={self.dim}, kind={self.kind!r}, rays={len(self.rays)}, normals={len(self.normals)})"


def require_same_dim(cone: Cone, dim: int) -> None:
    if cone.dim != dim:
        raise DimensionMismatch(f"cone dimension {cone.dim} does not match {dim}")
