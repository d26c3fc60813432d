"""The pieces X_0, ..., X_{k-1} of the torus multisection and their
intersections X_I, as sets of unit subcubes and unit faces."""

import itertools
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from sympy.utilities.iterables import multiset_permutations

from util.click_util import thread_count
from util.constants import RESOLUTION
from util.log_handler import logger
from util.torus_core import (
    Factor,
    OrbitBox,
    TorusParams,
    canonical_face,
    cell_code_edge,
    cell_code_vertex,
    cube_faces,
    face_label,
    piece_bounds,
)


@dataclass(frozen=True)
class IndexSet:
    elements: tuple
    k: int

    def __post_init__(self):
        elements = tuple(sorted(set(e % self.k for e in self.elements)))
        if not elements:
            raise ValueError("index set must be nonempty")
        object.__setattr__(self, "elements", elements)

    @staticmethod
    def of(elements, k):
        return IndexSet(elements=tuple(elements), k=k)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, i):
        return i % self.k in self.elements

    @property
    def ell(self):
        return len(self.elements)

    @property
    def proper(self):
        return self.ell < self.k

    @property
    def simple(self):
        return self.elements == min(self.translates())

    def translates(self):
        return [tuple(sorted((e - i) % self.k for e in self.elements)) for i in self]

    @property
    def T(self):
        """Positions s of the elements i_s with i_s - 1 not in I."""
        return tuple(
            s for s, i in enumerate(self.elements) if (i - 1) % self.k not in self
        )

    @property
    def blocks(self):
        """Maximal runs of consecutive elements.

        Runs are linear: a simple proper set starts at 0 and ends below k-1,
        and the full set is a single block.
        """
        if not self.proper:
            return (self.elements,)
        out = []
        for i in self.elements:
            if out and out[-1][-1] == i - 1:
                out[-1].append(i)
            else:
                out.append([i])
        if len(out) > 1 and out[0][0] == 0 and out[-1][-1] == self.k - 1:
            out[0] = out.pop() + out[0]
        return tuple(tuple(b) for b in out)

    @property
    def mins(self):
        return tuple(b[0] for b in self.blocks)

    def block_of(self, i):
        for r, b in enumerate(self.blocks):
            if i in b:
                return r
        raise ValueError("{} is not in {}".format(i, self.elements))

    def __str__(self):
        return "{" + ",".join(str(i) for i in self.elements) + "}"


def canonicalize_simple(elements, k):
    """The lexicographically least cyclic translate of I and its shift.

    Returns ``(I', shift)`` with I = I' + shift, so X_I = X_{I'} + (shift,...).
    """
    index_set = IndexSet.of(elements, k)
    best = None
    for i in index_set:
        candidate = tuple(sorted((e - i) % k for e in index_set))
        if best is None or candidate < best[0]:
            best = (candidate, i)
    return IndexSet.of(best[0], k), best[1]


@dataclass(frozen=True)
class PieceSet:
    r: int
    cubes: frozenset

    def __len__(self):
        return len(self.cubes)

    def __contains__(self, word):
        return tuple(word) in self.cubes

    def cube_types(self):
        """The distinct combinatorial types (sorted words) of the cubes."""
        return sorted({tuple(sorted(w)) for w in self.cubes})


def multinomial(face):
    out = math.factorial(len(face))
    for m in Counter(face).values():
        out //= math.factorial(m)
    return out


@dataclass(frozen=True)
class FaceSet:
    """A permutation-invariant set of closed unit faces of one dimension.

    Only the sorted representative of every orbit is stored.
    """

    dim: int
    canonical: frozenset
    exact_dim: bool = field(default=True, compare=False)

    def __len__(self):
        return len(self.canonical)

    def concrete_count(self):
        return sum(multinomial(f) for f in self.canonical)

    def concrete(self):
        for f in sorted(self.canonical):
            for p in multiset_permutations(list(f)):
                yield tuple(p)

    def labels(self):
        return sorted(face_label(f) for f in self.canonical)


def all_words(params):
    """Every unit subcube of T^n as an (k^n, n) array of lower corners."""
    n, k = params.n, params.k
    return np.indices((k,) * n).reshape(n, -1).T


def _supported(params):
    if not params.odd and (params.n, params.k) != (4, 3):
        raise ValueError(
            "no multisection for n={} k={} (even n only for n=4, k=3)".format(
                params.n, params.k
            )
        )


def build_piece(params, r):
    """X_r as the set of subcubes inside <<[r,r+b_1] ... [r,r+b_n]>>."""
    _supported(params)
    words = all_words(params)
    offsets = np.sort((words - r) % params.k, axis=1)
    limits = np.asarray(piece_bounds(params)) - 1
    keep = np.all(offsets <= limits, axis=1)
    cubes = frozenset(tuple(int(v) for v in w) for w in words[keep])
    logger.debug("X_{} has {} cubes".format(r, len(cubes)))
    return PieceSet(r=r % params.k, cubes=cubes)


def build_pieces(params, threads=None):
    with ThreadPoolExecutor(max_workers=thread_count(threads)) as executor:
        return list(
            executor.map(lambda r: build_piece(params, r), range(params.k))
        )


@dataclass
class CoverReport:
    ok: bool
    sizes: list
    total: int
    uncovered: list = field(default_factory=list)
    doubles: list = field(default_factory=list)


def verify_cover(params, threads=None):
    """Check that the pieces partition the k^n subcubes."""
    pieces = build_pieces(params, threads)
    claims = Counter()
    for p in pieces:
        claims.update(p.cubes)
    total = params.k**params.n
    words = (tuple(int(v) for v in w) for w in all_words(params))
    uncovered = [w for w in words if w not in claims]
    doubles = sorted(w for w, c in claims.items() if c > 1)
    sizes = [len(p) for p in pieces]
    ok = not uncovered and not doubles and sum(sizes) == total
    if params.odd:
        ok = ok and all(s == params.k ** (params.n - 1) for s in sizes)
    for w in uncovered[:10]:
        logger.error("cube {} lies in no piece".format(w))
    for w in doubles[:10]:
        logger.error("cube {} lies in {} pieces".format(w, claims[w]))
    return CoverReport(
        ok=ok, sizes=sizes, total=total, uncovered=uncovered, doubles=doubles
    )


def box_faces(factors, params):
    """Canonical unit faces of the orbit <<factors>>.

    Factors must have integer endpoints; an interval [a, b] is the union of
    the unit edges [a, a+1], ..., [b-1, b].
    """
    k = params.k
    options = []
    for f in factors:
        if f.lo % RESOLUTION or f.hi % RESOLUTION:
            raise ValueError("factor {} is not on the integer grid".format(f.label()))
        lo, hi = f.lo // RESOLUTION, f.hi // RESOLUTION
        if f.is_singleton:
            options.append((cell_code_vertex(lo, k),))
        else:
            options.append(tuple(cell_code_edge(v, k) for v in range(lo, hi)))
    return {canonical_face(face) for face in itertools.product(*options)}


def formula_factors(index_set, s):
    """The factors of C_{I,s}, in integer units.

    For every t: the point i_t (left out for t = s), then [i_t, j]^2 for
    i_t < j < i_{t+1}, then [i_t, i_{t+1}], where i_ell = i_0 + k.
    """
    elements = index_set.elements
    ell = len(elements)
    out = []
    for t in range(ell):
        i = elements[t]
        nxt = elements[t + 1] if t + 1 < ell else elements[0] + index_set.k
        if t != s:
            out.append(Factor.point(RESOLUTION * i))
        for j in range(i + 1, nxt):
            out.extend([Factor(RESOLUTION * i, RESOLUTION * j)] * 2)
        out.append(Factor(RESOLUTION * i, RESOLUTION * nxt))
    return out


def formula_XI(index_set, params):
    params.require_odd("formula_XI")
    if not index_set.simple:
        raise ValueError(
            "index set {} is not simple; canonicalize it first".format(index_set)
        )
    faces = set()
    for s in range(index_set.ell):
        factors = formula_factors(index_set, s)
        logger.debug(
            "C_{{I,{}}} = <<{}>>".format(s, OrbitBox.single(factors).label())
        )
        faces |= box_faces(factors, params)
    return FaceSet(dim=params.n + 1 - index_set.ell, canonical=frozenset(faces))


def piece_faces(piece, d, params):
    """Canonical d-faces of the cubes of a piece."""
    out = set()
    for w in piece.cube_types():
        out.update(canonical_face(f) for f in cube_faces(w, d, params.k))
    return out


def common_faces(pieces, d, params):
    out = None
    for p in pieces:
        faces = piece_faces(p, d, params)
        out = faces if out is None else out & faces
    return out


def oracle_XI(index_set, params):
    """X_I by intersecting the face sets of the pieces directly.

    The result is flagged ``exact_dim`` when no face one dimension higher is
    shared by all pieces.
    """
    _supported(params)
    d = params.n + 1 - index_set.ell
    pieces = [build_piece(params, i) for i in index_set]
    faces = common_faces(pieces, d, params)
    exact = d + 1 > params.n or not common_faces(pieces, d + 1, params)
    if not exact:
        logger.error(
            "pieces {} share faces of dimension {}".format(index_set, d + 1)
        )
    return FaceSet(dim=d, canonical=frozenset(faces), exact_dim=exact)


# the four-torus trisection, X_0 = <<[0,1]^2 [0,2] [0,3]>>
T4_PARAMS = TorusParams(k=3, n=4)


def _integer_box(*spans):
    return [Factor(RESOLUTION * lo, RESOLUTION * hi) for lo, hi in spans]


T4_X01 = [
    _integer_box((0, 1), (1, 1), (1, 2), (1, 2)),
    _integer_box((0, 0), (0, 1), (1, 2), (1, 2)),
    _integer_box((0, 1), (1, 1), (1, 2), (2, 3)),
]
T4_CENTRAL = [
    _integer_box((0, 1), (1, 2), (0, 0), (2, 2)),
    _integer_box((0, 1), (2, 3), (1, 1), (2, 2)),
    _integer_box((1, 2), (2, 3), (0, 0), (1, 1)),
]


def t4_faces(boxes):
    faces = set()
    for b in boxes:
        faces |= box_faces(b, T4_PARAMS)
    return FaceSet(dim=sum(f.dim for f in boxes[0]), canonical=frozenset(faces))


def negative_handle_partition(params):
    """Dimension of X_0 n X_{k-1} for the partition of (R/2Z)^n by the number
    of coordinates in [1, 2]: X_i holds the cubes with 2i or 2i+1 of them.

    Faces of dimension n-1 are needed for a multisection, and only n = 3
    achieves that.
    """
    params.require_odd("negative_handle_partition")
    n, k = params.n, params.k
    words = list(itertools.product((0, 1), repeat=n))

    def piece(i):
        return [w for w in words if sum(w) in (2 * i, 2 * i + 1)]

    first, last = piece(0), piece(k - 1)
    for d in range(n, -1, -1):
        a = {canonical_face(f) for w in first for f in cube_faces(w, d, 2)}
        b = {canonical_face(f) for w in last for f in cube_faces(w, d, 2)}
        if a & b:
            logger.debug(
                "X_0 and X_{} share {} faces of dimension {}".format(
                    k - 1, len(a & b), d
                )
            )
            return d
    return None


def _sum_ranges(a, lifts, width, side):
    """Values of the free coordinate sum S that put a point with ``lifts``
    choices for its zero coordinates into the slab a."""
    return [(width * a - side * j, width * (a + 1) - side * j) for j in range(lifts + 1)]


def sum_slab_intersection_dim(a, b, params):
    """Dimension of X_a n X_b for the slabs X_i = {i n <= sum x <= (i+1) n}
    of the cube [0, k]^n, glued to the torus.

    A point with z zero coordinates and free sum S has the lifted sums
    S + k j for 0 <= j <= z. Per stratum the admissible S form intervals; a
    positive-length overlap gives the stratum's full dimension and an isolated
    value one less.
    """
    n, k = params.n, params.k
    best = None
    for free in range(n, -1, -1):
        zeros = n - free
        ranges_a = _sum_ranges(a, zeros, n, k)
        ranges_b = _sum_ranges(b, zeros, n, k)
        if free == 0:
            if any(lo <= 0 <= hi for lo, hi in ranges_a) and any(
                lo <= 0 <= hi for lo, hi in ranges_b
            ):
                best = max(best, 0) if best is not None else 0
            continue
        top = k * free
        for (la, ha), (lb, hb) in itertools.product(ranges_a, ranges_b):
            lo, hi = max(la, lb, 0), min(ha, hb, top)
            if hi > lo:
                dim = free
            elif hi == lo and 0 < lo < top:
                dim = free - 1
            else:
                continue
            best = dim if best is None else max(best, dim)
    return best


def sum_slabs_cover(params):
    """Whether the slabs cover every admissible free coordinate sum."""
    n, k = params.n, params.k
    for free in range(1, n + 1):
        spans = sorted(
            r for a in range(k) for r in _sum_ranges(a, n - free, n, k)
        )
        reach = 0
        for lo, hi in spans:
            if lo > reach:
                return False
            reach = max(reach, hi)
        if reach < k * free:
            return False
    return True


def negative_sum_decomposition(params):
    if (params.n, params.k) != (5, 3):
        raise ValueError("the coordinate sum construction is stated for T^5 only")
    return sum_slab_intersection_dim(0, params.k - 1, params)
