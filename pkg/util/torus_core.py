"""Exact coordinates on the torus T^n = (R/kZ)^n.

Points are stored as integers in units of 1/6 (``RESOLUTION``), reduced modulo
``6k``. Every breakpoint used by the constructions (integers, halves, thirds and
sixths) is representable exactly.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from util.constants import RESOLUTION


@dataclass(frozen=True)
class TorusParams:
    k: int
    n: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2, got {}".format(self.k))
        if self.n not in (2 * self.k - 1, 2 * self.k - 2):
            raise ValueError(
                "dimension n={} does not fit k={} (need 2k-1 or 2k-2)".format(
                    self.n, self.k
                )
            )

    @staticmethod
    def from_k(k):
        return TorusParams(k=k, n=2 * k - 1)

    @staticmethod
    def from_n(n):
        if n == 4:
            return TorusParams(k=3, n=4)
        if n < 3 or n % 2 == 0:
            raise ValueError("unsupported dimension n={}".format(n))
        return TorusParams(k=(n + 1) // 2, n=n)

    @property
    def odd(self):
        return self.n == 2 * self.k - 1

    @property
    def side(self):
        """Circumference of one circle factor in scaled units."""
        return RESOLUTION * self.k

    def require_odd(self, what):
        if not self.odd:
            raise ValueError(
                "{} is only defined for n = 2k-1, got n={} k={}".format(
                    what, self.n, self.k
                )
            )


def scaled(value):
    """Convert an exact number (int or Fraction) into scaled units."""
    v = Fraction(value) * RESOLUTION
    if v.denominator != 1:
        raise ValueError("{} is not on the 1/{} lattice".format(value, RESOLUTION))
    return int(v)


def unscaled(value):
    return Fraction(value, RESOLUTION)


def format_value(value):
    v = unscaled(value)
    return str(v.numerator) if v.denominator == 1 else str(v)


def reduce_point(coords, params):
    """Reduce scaled coordinates into [0, 6k)."""
    if len(coords) != params.n:
        raise ValueError(
            "point has {} coordinates, expected {}".format(len(coords), params.n)
        )
    return tuple(int(c) % params.side for c in coords)


@dataclass(frozen=True)
class Factor:
    """A closed arc [lo, hi] of one circle factor, in scaled units.

    ``lo == hi`` is a singleton. Endpoints may exceed the circumference; they
    are compared modulo the circumference. ``role`` tags factors that the
    handle classification needs to recognize and is ignored by equality.
    """

    lo: int
    hi: int
    role: str = field(default="", compare=False)

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError("empty factor [{}, {}]".format(self.lo, self.hi))

    @staticmethod
    def point(value, role=""):
        return Factor(value, value, role)

    @staticmethod
    def unit(value, role=""):
        """The unit interval [value, value+1] (value in integer units)."""
        return Factor(RESOLUTION * value, RESOLUTION * (value + 1), role)

    @property
    def is_singleton(self):
        return self.lo == self.hi

    @property
    def dim(self):
        return 0 if self.is_singleton else 1

    @property
    def length(self):
        return self.hi - self.lo

    def label(self):
        if self.is_singleton:
            return format_value(self.lo)
        return "[{},{}]".format(format_value(self.lo), format_value(self.hi))

    def contains_value(self, value, side):
        for t in range(-2, 3):
            v = value + t * side
            if self.lo <= v <= self.hi:
                return True
        return False

    def contains(self, other, side):
        """Whether ``other`` is a subset of this arc on the circle."""
        if self.length >= side:
            return True
        for t in range(-2, 3):
            if self.lo <= other.lo + t * side and other.hi + t * side <= self.hi:
                return True
        return False

    def overlap_dim(self, other, side):
        """Dimension of the intersection on the circle, or None if empty."""
        best = None
        for t in range(-2, 3):
            lo = max(self.lo, other.lo + t * side)
            hi = min(self.hi, other.hi + t * side)
            if hi > lo:
                return 1
            if hi == lo:
                best = 0
        return best

    def same_arc(self, other, side):
        return (self.lo - other.lo) % side == 0 and self.length == other.length


def _power_label(factors):
    out = []
    for key, run in itertools.groupby(f.label() for f in factors):
        m = len(list(run))
        out.append(key if m == 1 else "{}^{}".format(key, m))
    return "".join(out)


@dataclass(frozen=True)
class OrbitBox:
    """A grouped product of factors: the product over groups of the orbit of
    each group's factors under permutation of the group's positions."""

    groups: tuple

    @staticmethod
    def single(factors):
        return OrbitBox(groups=(tuple(factors),))

    @property
    def n(self):
        return sum(len(g) for g in self.groups)

    @property
    def factors(self):
        return tuple(f for g in self.groups for f in g)

    @property
    def dims(self):
        return tuple(sum(f.dim for f in g) for g in self.groups)

    @property
    def dim(self):
        return sum(self.dims)

    @property
    def copies(self):
        """Number of distinct coordinate permutation images of the box."""
        out = math.factorial(self.n)
        for g in self.groups:
            out //= math.factorial(len(g))
        return out

    def label(self):
        parts = []
        for g in self.groups:
            inner = _power_label(g)
            parts.append(inner if len(g) == 1 else "<<{}>>".format(inner))
        return "".join(parts)

    def __str__(self):
        return self.label()


def piece_orbit(params, r):
    """X_r as an orbit box: <<[r,r+1]^2 ... [r,r+k-1]^2 [r,r+k]>> (odd n)
    or <<[r,r+1]^2 [r,r+2] [r,r+3]>> for the four-torus."""
    return OrbitBox.single(
        Factor(RESOLUTION * r, RESOLUTION * (r + b)) for b in piece_bounds(params)
    )


def piece_bounds(params):
    """Upper bounds (integer units) of the sorted coordinates of X_0."""
    if params.odd:
        return tuple((j + 1) // 2 for j in range(1, params.n + 1))
    return (1, 1, 2, 3)


def is_diagonal(x):
    return len(set(x)) == 1


def monotonic_sort(x):
    """Stable sort of a reduced point.

    Returns ``(out, perm, diagonal)`` with ``out[i] == x[perm[i]]``; ``diagonal``
    is set when all coordinates agree. Values are already reduced into [0, 6k),
    so the sorted tuple satisfies x_n <= x_1 + 6k.
    """
    perm = np.argsort(np.asarray(x), kind="stable")
    out = tuple(int(x[p]) for p in perm)
    return out, tuple(int(p) for p in perm), is_diagonal(out)


def _require_off_diagonal(x):
    if is_diagonal(x):
        raise ValueError("cutoff indices are undefined on the diagonal")


def periodic_extend(x, index, params):
    """x_index of the periodic extension x_{t+mn} = x_t + mk (1-based)."""
    _require_off_diagonal(x)
    m, t = divmod(index - 1, params.n)
    return x[t] + params.side * m


def cutoff_indices(x, r, params):
    """(a_r, b_r): a_r = min{a : x_{a+1} >= r}, b_r = min{b : x_{b+1} > r}.

    Counted per coordinate over its lifts x_t + mk, which gives the closed
    forms sum(ceil((r - x_t)/k)) and sum(floor((r - x_t)/k) + 1).
    """
    _require_off_diagonal(x)
    target = RESOLUTION * r
    side = params.side
    a = sum(-((v - target) // side) for v in x)
    b = sum((target - v) // side + 1 for v in x)
    return a, b


def in_piece(x, r, params):
    """Membership of a scaled point in X_r."""
    x = reduce_point(x, params)
    if not params.odd:
        return in_piece_direct(x, r, params)
    x, _, diagonal = monotonic_sort(x)
    if diagonal:
        return (x[0] - RESOLUTION * r) % params.side <= RESOLUTION
    a_r, _ = cutoff_indices(x, r, params)
    for s in range(params.k):
        _, b = cutoff_indices(x, r + s, params)
        if b < a_r + 2 * s:
            return False
    return True


def in_piece_direct(x, r, params):
    """Membership in X_r by sorting the offsets from r against the box bounds."""
    x = reduce_point(x, params)
    y = sorted((v - RESOLUTION * r) % params.side for v in x)
    return all(v <= RESOLUTION * b for v, b in zip(y, piece_bounds(params)))


def in_intersection(x, index_set, params):
    return all(in_piece(x, i, params) for i in index_set)


def in_piece_array(points, r, params):
    """Vectorized ``in_piece`` over an (N, n) integer array of reduced points."""
    points = np.asarray(points, dtype=np.int64)
    side = params.side
    diagonal = np.all(points == points[:, :1], axis=1)

    def a_of(q):
        return np.sum(-((points - RESOLUTION * q) // side), axis=1)

    def b_of(q):
        return np.sum((RESOLUTION * q - points) // side + 1, axis=1)

    ok = np.ones(len(points), dtype=bool)
    a_r = a_of(r)
    for s in range(params.k):
        ok &= b_of(r + s) >= a_r + 2 * s
    on_diag = (points[:, 0] - RESOLUTION * r) % side <= RESOLUTION
    return np.where(diagonal, on_diag, ok)


def in_piece_direct_array(points, r, params):
    points = np.asarray(points, dtype=np.int64)
    y = np.sort((points - RESOLUTION * r) % params.side, axis=1)
    bounds = RESOLUTION * np.asarray(piece_bounds(params), dtype=np.int64)
    return np.all(y <= bounds, axis=1)


def lattice_chunks(params, step=1, fixed=2):
    """Yield the scaled lattice of T^n with spacing ``step`` in chunks.

    Each chunk fixes the first ``fixed`` coordinates and spans the rest.
    """
    values = np.arange(0, params.side, step, dtype=np.int64)
    tail = params.n - fixed
    grid = np.stack(np.meshgrid(*([values] * tail), indexing="ij"), axis=-1)
    grid = grid.reshape(-1, tail)
    for head in itertools.product(values, repeat=fixed):
        chunk = np.empty((len(grid), params.n), dtype=np.int64)
        chunk[:, :fixed] = head
        chunk[:, fixed:] = grid
        yield chunk


def orbit_contains(box, x, params):
    """Whether a point lies in the union of all permutation images of ``box``."""
    x = reduce_point(x, params)
    factors = box.factors
    cost = np.array(
        [[0 if f.contains_value(v, params.side) else 1 for f in factors] for v in x]
    )
    rows, cols = linear_sum_assignment(cost)
    return int(cost[rows, cols].sum()) == 0


def orbit_intersection(a, b, params):
    """Maximal dimension of the intersection of a permutation image of ``a``
    with a permutation image of ``b``, or None if every pair is disjoint.

    Each image of a grouped box is a union of permuted copies of the plain
    product of its factors, so the grouping of either box does not change the
    answer. It reduces to an assignment between the two lists of factors.
    """
    if a.n != b.n or a.n != params.n:
        raise ValueError(
            "mismatched dimensions {} and {} (torus has n={})".format(
                a.n, b.n, params.n
            )
        )
    blocked = params.n + 1
    cost = np.zeros((params.n, params.n), dtype=np.int64)
    for i, fa in enumerate(a.factors):
        for j, fb in enumerate(b.factors):
            d = fa.overlap_dim(fb, params.side)
            cost[i, j] = blocked if d is None else -d
    rows, cols = linear_sum_assignment(cost)
    chosen = cost[rows, cols]
    if np.any(chosen == blocked):
        return None
    return int(-chosen.sum())


def orbit_intersection_brute(a, b, params):
    """Reference for ``orbit_intersection`` enumerating permutation pairs.

    Only the relative permutation matters, so one side stays fixed.
    """
    if a.n != b.n or a.n != params.n:
        raise ValueError("mismatched dimensions {} and {}".format(a.n, b.n))
    best = None
    fa = a.factors
    for perm in itertools.permutations(b.factors):
        total = 0
        for x, y in zip(fa, perm):
            d = x.overlap_dim(y, params.side)
            if d is None:
                total = None
                break
            total += d
        if total is not None and (best is None or total > best):
            best = total
    return best


# Faces of the unit-cube grid are coded per coordinate at integer resolution:
# the vertex v is 2v and the edge [v, v+1] is 2v+1, modulo 2k.


def cell_code_vertex(v, k):
    return (2 * v) % (2 * k)


def cell_code_edge(v, k):
    return (2 * v + 1) % (2 * k)


def face_dim(face):
    return sum(c % 2 for c in face)


def canonical_face(face):
    return tuple(sorted(face))


def face_label(face):
    return "".join(
        "[{},{}]".format(c // 2, c // 2 + 1) if c % 2 else str(c // 2) for c in face
    )


def faces(word, d, params):
    """All closed d-faces of the unit cube prod [w_t, w_t + 1], as cell codes."""
    return cube_faces(word, d, params.k)


def cube_faces(word, d, k):
    """``faces`` on a grid of circles of length k, without torus parameters."""
    n = len(word)
    if not 0 <= d <= n:
        raise ValueError("face dimension {} out of range 0..{}".format(d, n))
    out = []
    for fixed in itertools.combinations(range(n), n - d):
        for ends in itertools.product((0, 1), repeat=n - d):
            face = [cell_code_edge(w, k) for w in word]
            for t, e in zip(fixed, ends):
                face[t] = cell_code_vertex(word[t] + e, k)
            out.append(tuple(face))
    return out


def face_box(face, params):
    """The concrete box of a coded face as a one-group orbit box."""
    factors = []
    for c in face:
        if c % 2:
            factors.append(Factor.unit(c // 2))
        else:
            factors.append(Factor.point(RESOLUTION * (c // 2)))
    return OrbitBox.single(factors)
