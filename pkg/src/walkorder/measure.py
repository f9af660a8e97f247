"""Finitely supported measures on R^d with exact rational weights.

A measure is a finite map from points (tuples of exact rationals) to strictly
positive rational weights.  The semialgebra operations are weighted mixture,
convolution (Minkowski sum of supports with weight products), convolution
powers by repeated squaring, translation, and pushforward along a linear
functional.  Atom coalescing uses exact point equality; there is no epsilon
merging anywhere.

All values are immutable after construction and every operation is a pure
function, so measures may be shared freely between concurrent workers.
"""

from __future__ import annotations

from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import AtomBudgetExceeded, DimensionMismatch
from .rational import Rational, ZERO, as_rat, rat

#: Points are tuples of exact rationals; the tuple length is the dimension.
Point = tuple

#: Default cap on intermediate atom counts in convolution powers.
DEFAULT_ATOM_CAP = 10**6


def as_point(coords: Sequence, dim: int | None = None) -> Point:
    """Normalize a coordinate sequence to a point, optionally checking dim."""
    pt = tuple(as_rat(c) for c in coords)
    if not pt:
        raise ValueError("points must have at least one coordinate")
    if dim is not None and len(pt) != dim:
        raise DimensionMismatch(f"point has {len(pt)} coordinates, expected {dim}")
    return pt


class Measure:
    """A finitely supported unsigned measure on R^d.

    Parameters
    ----------
    dim : int
        Ambient dimension, at least 1.
    atoms : mapping or iterable of (point, weight)
        Point coordinates and weights must be exact rationals (or ints or
        fraction strings); floats are rejected.  Zero-weight atoms are
        dropped, negative weights are an error, and duplicate points are
        merged by summing weights.
    """

    __slots__ = ("_dim", "_atoms", "_mass")

    def __init__(self, dim: int, atoms: Mapping | Iterable = ()):
        if dim < 1:
            raise ValueError("dimension must be a positive integer")
        items = atoms.items() if isinstance(atoms, Mapping) else atoms
        cleaned: dict[Point, Rational] = {}
        for point, weight in items:
            pt = as_point(point, dim)
            w = as_rat(weight)
            if w < 0:
                raise ValueError(f"negative weight {w} at {pt}")
            if w == 0:
                continue
            if pt in cleaned:
                cleaned[pt] += w
            else:
                cleaned[pt] = w
        self._dim = dim
        self._atoms = cleaned
        self._mass = sum(cleaned.values(), ZERO)

    @classmethod
    def _raw(cls, dim: int, atoms: dict) -> "Measure":
        # Trusted constructor for internal hot paths: atoms must already be
        # validated points with strictly positive rational weights.
        self = object.__new__(cls)
        self._dim = dim
        self._atoms = atoms
        self._mass = sum(atoms.values(), ZERO)
        return self

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def atoms(self) -> Mapping[Point, Rational]:
        """Read-only view of the atom map."""
        return MappingProxyType(self._atoms)

    def mass(self) -> Rational:
        return self._mass

    def support(self) -> list[Point]:
        """Support points in sorted order (deterministic)."""
        return sorted(self._atoms)

    def weight(self, point: Sequence) -> Rational:
        return self._atoms.get(as_point(point, self._dim), ZERO)

    def is_probability(self) -> bool:
        return self._mass == 1

    def normalized(self) -> "Measure":
        """Scale to total mass 1."""
        if self._mass == 0:
            raise ValueError("cannot normalize the zero measure")
        if self._mass == 1:
            return self
        m = self._mass
        return Measure._raw(self._dim, {p: w / m for p, w in self._atoms.items()})

    def __len__(self) -> int:
        return len(self._atoms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Measure):
            return NotImplemented
        return self._dim == other._dim and self._atoms == other._atoms

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{tuple(str(c) for c in p)}: {w}" for p, w in sorted(self._atoms.items())[:4]
        )
        extra = "" if len(self._atoms) <= 4 else f", ... {len(self._atoms)} atoms"
        return f"Measure(dim={self._dim}, {{{inner}{extra}}})"


def _require_same_dim(a: Measure, b: Measure) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"measure dimensions differ: {a.dim} vs {b.dim}")


def delta(x: Sequence) -> Measure:
    """Unit point mass at x."""
    pt = as_point(x)
    return Measure._raw(len(pt), {pt: rat(1)})


def mix(terms: Iterable[tuple]) -> Measure:
    """Weighted sum of measures: sum of c_i * mu_i with c_i >= 0."""
    terms = list(terms)
    if not terms:
        raise ValueError("mix requires at least one (coefficient, measure) term")
    dim = terms[0][1].dim
    acc: dict[Point, Rational] = {}
    for coeff, m in terms:
        c = as_rat(coeff)
        if c < 0:
            raise ValueError(f"negative mixture coefficient {c}")
        if m.dim != dim:
            raise DimensionMismatch(f"measure dimensions differ: {m.dim} vs {dim}")
        if c == 0:
            continue
        for pt, w in m._atoms.items():
            cw = c * w
            if pt in acc:
                acc[pt] += cw
            else:
                acc[pt] = cw
    return Measure._raw(dim, acc)


def _convolve_into(a: dict, b: dict, cap: int | None) -> dict:
    out: dict[Point, Rational] = {}
    for x, wx in a.items():
        for y, wy in b.items():
            key = tuple(xc + yc for xc, yc in zip(x, y))
            w = wx * wy
            if key in out:
                out[key] += w
            else:
                out[key] = w
                if cap is not None and len(out) > cap:
                    raise AtomBudgetExceeded(
                        f"convolution support exceeded the atom cap of {cap}"
                    )
    return out


def convolve(mu: Measure, nu: Measure) -> Measure:
    """Convolution: atoms are pairwise sums with weight products coalesced."""
    _require_same_dim(mu, nu)
    return Measure._raw(mu.dim, _convolve_into(mu._atoms, nu._atoms, None))


def convolve_power(mu: Measure, n: int, cap: int = DEFAULT_ATOM_CAP) -> Measure:
    """n-fold convolution of mu with itself, by repeated squaring.

    Raises AtomBudgetExceeded if any intermediate support grows past ``cap``,
    which defends against the exponential blowup of non-lattice steps.
    ``n = 0`` gives the unit mass at the origin.
    """
    if n < 0:
        raise ValueError("convolution power requires n >= 0")
    origin = (rat(0),) * mu.dim
    acc: dict[Point, Rational] = {origin: rat(1)}
    base = dict(mu._atoms)
    k = n
    while k:
        if k & 1:
            acc = _convolve_into(acc, base, cap)
        k >>= 1
        if k:
            base = _convolve_into(base, base, cap)
    return Measure._raw(mu.dim, acc)


def shift(mu: Measure, a: Sequence) -> Measure:
    """Translate every atom by a; equals convolve(mu, delta(a))."""
    pt = as_point(a, mu.dim)
    return Measure._raw(
        mu.dim,
        {tuple(xc + ac for xc, ac in zip(x, pt)): w for x, w in mu._atoms.items()},
    )


def project(mu: Measure, t: Sequence) -> Measure:
    """Pushforward along the linear functional x -> <t, x>; a 1-D measure."""
    tv = as_point(t, mu.dim)
    out: dict[Point, Rational] = {}
    for x, w in mu._atoms.items():
        key = (sum(tc * xc for tc, xc in zip(tv, x)),)
        if key in out:
            out[key] += w
        else:
            out[key] = w
    return Measure._raw(1, out)


def coarsen(mu: Measure, u: Sequence, grid_step) -> Measure:
    """Floor atoms to the lattice (grid_step * Z)^d, preserving mass.

    The result nu is sandwiched between mu shifted down and up by 2*s*u
    (s = grid_step); the sandwich is re-verified with the exact
    stochastic-order decider for the orthant cone with order unit u, so a
    unit with some coordinate below 1/2 is rejected rather than silently
    producing an unordered coarsening.
    """
    s = as_rat(grid_step)
    if s <= 0:
        raise ValueError("grid_step must be positive")
    uv = as_point(u, mu.dim)
    if any(uc <= 0 for uc in uv):
        raise ValueError("coarsening unit must have strictly positive coordinates")
    floored: dict[Point, Rational] = {}
    for x, w in mu._atoms.items():
        key = tuple((xc // s) * s for xc in x)
        if key in floored:
            floored[key] += w
        else:
            floored[key] = w
    nu = Measure._raw(mu.dim, floored)

    from .cones import Cone  # deferred: cones/stochorder import this module
    from .stochorder import leq_st

    cone = Cone.orthant(mu.dim, unit=uv)
    two_su = tuple(2 * s * uc for uc in uv)
    lower = shift(mu, tuple(-c for c in two_su))
    upper = shift(mu, two_su)
    if not (leq_st(lower, nu, cone).dominated and leq_st(nu, upper, cone).dominated):
        raise ValueError(
            "coarsen sandwich contract failed: grid_step too coarse for this order unit"
        )
    return nu
