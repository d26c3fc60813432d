"""Handle decompositions of the intersections X_I.

X_I is cut into pieces indexed by (J, i*, V-, Uo, U-). The pieces are ordered,
each piece Y_z gets a representative Y_z^* (a product of orbit groups), and
the groups are classified to read off the handle index of Y_z.
"""

import itertools
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from util.click_util import thread_count
from util.constants import RESOLUTION
from util.log_handler import logger
from util.multisection import (
    T4_PARAMS,
    IndexSet,
    build_piece,
    formula_XI,
    multinomial,
    oracle_XI,
)
from util.torus_core import Factor, OrbitBox, canonical_face, orbit_intersection
from util.union_find import UnionFind

CLASS_A = "A"
CLASS_B = "B"

ROLE_POINT = "point"
ROLE_HAT = "hat"
ROLE_MIDDLE = "middle"
ROLE_LEAD_HALF = "lead_half"


class FactorShapeError(Exception):
    pass


@dataclass(frozen=True)
class PieceDescriptor:
    J: tuple
    i_star: int
    U: tuple
    V: tuple
    Vminus: tuple = ()
    Ucirc: tuple = ()
    Uminus: tuple = ()

    @property
    def Vplus(self):
        return tuple(i for i in self.V if i not in self.Vminus)

    @property
    def Uplus(self):
        return tuple(
            i for i in self.U if i not in self.Ucirc and i not in self.Uminus
        )

    def label(self):
        def fmt(s):
            return "{" + ",".join(str(i) for i in s) + "}"

        return "J={} i*={} V-={} Uo={} U-={}".format(
            fmt(self.J), self.i_star, fmt(self.Vminus), fmt(self.Ucirc), fmt(self.Uminus)
        )


@dataclass(frozen=True)
class HandleRecord:
    z: int
    descriptor: PieceDescriptor
    rep: OrbitBox
    classes: tuple
    h: int
    glue_to: tuple = ()

    @property
    def dims(self):
        return self.rep.dims

    @property
    def copies(self):
        return self.rep.copies


def _require_proper_simple(index_set):
    if not index_set.simple:
        raise ValueError("index set {} is not simple".format(index_set))
    if not index_set.proper:
        raise ValueError("index set {} is not proper".format(index_set))


def uv_sets(index_set, J, i_star):
    """The subsets U, V of I, block by block."""
    U, V = set(), set()
    for block in index_set.blocks:
        a, b = block[0], block[-1]
        inner = set(block)
        if i_star not in inner:
            if a not in J:
                u, v = set(), inner - {a}
            else:
                # a singleton block in J keeps a in V
                u, v = inner - {a, b}, {b}
        elif i_star <= b - 2:
            u, v = inner - {a, i_star, i_star + 1, b}, {i_star + 1, b}
        else:
            u, v = inner - {a, i_star, b}, set()
        U |= u
        V |= v
    return tuple(sorted(U)), tuple(sorted(V))


def block_v_order(block, i_star, v_block):
    """Total order on the subsets of V_r for the block I_r."""
    if i_star in block:
        if not v_block:
            return [frozenset()]
        lead, top = i_star + 1, block[-1]
        return [
            frozenset({lead}),
            frozenset(),
            frozenset({lead, top}),
            frozenset({top}),
        ]
    # reflected binary order: each new element walks back through the
    # sequence built so far
    seq = [frozenset()]
    for e in sorted(v_block):
        seq += [s | {e} for s in reversed(seq)]
    return seq


def v_minus_order(index_set, i_star, V):
    per_block = [
        block_v_order(b, i_star, set(V) & set(b)) for b in index_set.blocks
    ]
    return [
        tuple(sorted(frozenset().union(*combo)))
        for combo in itertools.product(*per_block)
    ]


def u_state_order(index_set, i_star, U):
    """Lexicographic order on the pairs (Uo, U-).

    Larger Uo come first, ties broken by sorted elements. For a fixed Uo the
    sets U- follow the element states with the largest element of U varying
    slowest: in the block of i* a point in U- precedes one in U+, elsewhere
    U+ comes first.
    """
    star_block = set(index_set.blocks[index_set.block_of(i_star)])
    members = sorted(U, reverse=True)

    def minus_key(uminus):
        return tuple(
            (u in uminus) != (u in star_block) for u in members
        )

    out = []
    for size in range(len(members), -1, -1):
        for ucirc in itertools.combinations(sorted(U), size):
            rest = [u for u in members if u not in ucirc]
            minus_sets = [
                tuple(sorted(c))
                for m in range(len(rest) + 1)
                for c in itertools.combinations(rest, m)
            ]
            for uminus in sorted(minus_sets, key=minus_key):
                out.append((ucirc, uminus))
    return out


def j_candidates(index_set, j_order=None):
    mins = index_set.mins
    subsets = [
        tuple(c) for size in range(len(mins) + 1) for c in itertools.combinations(mins, size)
    ]
    if j_order is None:
        return sorted(subsets, key=lambda s: (len(s), s))
    ordered = [tuple(sorted(j)) for j in j_order]
    if sorted(ordered) != sorted(subsets):
        raise ValueError(
            "J order {} is not an ordering of the subsets of {}".format(j_order, mins)
        )
    return ordered


def istar_candidates(index_set, istar_order=None):
    if istar_order is None:

        def offset(i):
            return i - index_set.blocks[index_set.block_of(i)][0]

        return sorted(index_set, key=lambda i: (offset(i), i))
    if sorted(istar_order) != list(index_set.elements):
        raise ValueError(
            "i* order {} is not an ordering of {}".format(istar_order, index_set)
        )
    return list(istar_order)


def enumerate_pieces(index_set, j_order=None, istar_order=None, limit=None):
    """All descriptors (J, i*, V-, Uo, U-) in lexicographic order."""
    _require_proper_simple(index_set)
    out = []
    for J in j_candidates(index_set, j_order):
        for i_star in istar_candidates(index_set, istar_order):
            U, V = uv_sets(index_set, J, i_star)
            for vminus in v_minus_order(index_set, i_star, V):
                for ucirc, uminus in u_state_order(index_set, i_star, U):
                    out.append(
                        PieceDescriptor(
                            J=J,
                            i_star=i_star,
                            U=U,
                            V=V,
                            Vminus=vminus,
                            Ucirc=ucirc,
                            Uminus=uminus,
                        )
                    )
                    if limit and len(out) >= limit:
                        return out
    return out


def _normalized(f, side):
    shift = (f.lo // side) * side
    return Factor(f.lo - shift, f.hi - shift, f.role)


def rho(i, d, index_set):
    """The interval attached to the index i of I."""
    s = RESOLUTION * i
    if i in d.Uminus:
        return Factor(s - 6, s - 4)
    if i in d.Ucirc:
        return Factor(s - 4, s - 2, ROLE_MIDDLE)
    if i in d.Uplus:
        return Factor(s - 2, s)
    if i in d.Vminus:
        return Factor(s - 6, s - 3, ROLE_LEAD_HALF if i == d.i_star + 1 else "")
    if i in d.Vplus:
        return Factor(s - 3, s)
    blocks = index_set.blocks
    r = index_set.block_of(i)
    if i == blocks[r][0] and i not in d.J:
        prev = blocks[r - 1][-1] - (index_set.k if r == 0 else 0)
        return Factor(RESOLUTION * prev, s - 6)
    return Factor(s - 6, s)


def block_factors(r, d, index_set):
    blocks = index_set.blocks
    k = index_set.k
    block = blocks[r]
    a, b = block[0], block[-1]
    c = blocks[r + 1][0] if r + 1 < len(blocks) else blocks[0][0] + k

    def point(i):
        return Factor.point(RESOLUTION * i, ROLE_POINT)

    out = []
    if a in d.J:
        out.append(rho(a, d, index_set))
        if a != d.i_star:
            out.append(point(a))
    elif a != d.i_star:
        out.append(point(a))
    for i in range(a + 1, b + 1):
        out.append(rho(i, d, index_set))
        if i != d.i_star:
            out.append(point(i))
    for j in range(b + 1, c):
        out += [Factor(RESOLUTION * b, RESOLUTION * j, ROLE_HAT)] * 2
    if c % k not in d.J:
        out.append(Factor(RESOLUTION * b, RESOLUTION * (c - 1), ROLE_HAT))
    return out


def group_factors(factors, side):
    """Coarsest grouping of positions in which r ~ s whenever one factor
    contains the other."""
    uf = UnionFind(range(len(factors)))
    for r, s in itertools.permutations(range(len(factors)), 2):
        if factors[s].contains(factors[r], side):
            uf.union(r, s)
    classes = sorted(sorted(c) for c in uf.classes())
    return OrbitBox(groups=tuple(tuple(factors[p] for p in c) for c in classes))


def validate_group(group, side):
    """The star-shaped form of a group: C1, C2 or C3."""
    points = [f for f in group if f.is_singleton]
    intervals = [f for f in group if not f.is_singleton]

    def same(x, y):
        return (x - y) % side == 0

    if len(points) > 1:
        raise FactorShapeError(
            "group {} holds {} points".format(OrbitBox.single(group), len(points))
        )
    if not points:
        if all(same(f.lo, intervals[0].lo) for f in intervals) or all(
            same(f.hi, intervals[0].hi) for f in intervals
        ):
            return "C1"
    else:
        p = points[0].lo
        if all(same(f.lo, p) for f in intervals) or all(
            same(f.hi, p) for f in intervals
        ):
            return "C2"
        ends = sum(1 for f in intervals if same(f.hi, p))
        starts = sum(1 for f in intervals if same(f.lo, p))
        if ends + starts == len(intervals) and 1 in (ends, starts):
            return "C3"
    raise FactorShapeError(
        "group {} has no star-shaped form".format(OrbitBox.single(group))
    )


def build_rep(index_set, d, params):
    """Y_z^* for the descriptor d."""
    factors = [
        _normalized(f, params.side)
        for r in range(len(index_set.blocks))
        for f in block_factors(r, d, index_set)
    ]
    if len(factors) != params.n:
        raise FactorShapeError(
            "{} built {} factors, expected {}".format(d.label(), len(factors), params.n)
        )
    rep = group_factors(factors, params.side)
    for g in rep.groups:
        validate_group(g, params.side)
    if rep.dim != params.n + 1 - index_set.ell:
        raise FactorShapeError(
            "{} has dimension {}, expected {}".format(
                rep, rep.dim, params.n + 1 - index_set.ell
            )
        )
    return rep


def _toggle_blocked(i, d, index_set):
    """Whether moving the point i into an adjacent piece leads only to later
    pieces, which makes its group a non-attaching one."""
    block = index_set.blocks[index_set.block_of(i)]
    order = block_v_order(block, d.i_star, set(d.V) & set(block))
    current = frozenset(set(d.Vminus) & set(block))
    toggled = []
    if i in d.Vplus and i + 1 in block and i + 1 not in d.Uminus:
        toggled.append(current | {i})
    if i + 1 in d.Vminus and i not in d.Uplus:
        toggled.append(current - {i + 1})
    if not toggled:
        return False
    return all(order.index(t) > order.index(current) for t in toggled)


def classify_group(group, d, index_set):
    if any(f.role in (ROLE_HAT, ROLE_MIDDLE, ROLE_LEAD_HALF) for f in group):
        return CLASS_B
    points = [f for f in group if f.is_singleton]
    if not points:
        return CLASS_A
    i = (points[0].lo // RESOLUTION) % index_set.k
    return CLASS_B if _toggle_blocked(i, d, index_set) else CLASS_A


def parity_classify_group(group, d, index_set):
    """Class of a group by the parity of V- above its point.

    This reads the class off the neighbours of the point and the parity of
    the V- indices above it in the block. Inside the block of i* it can mark
    an attaching group as class (B), where ``classify_group`` does not.
    """
    if any(f.role in (ROLE_HAT, ROLE_MIDDLE, ROLE_LEAD_HALF) for f in group):
        return CLASS_B
    points = [f for f in group if f.is_singleton]
    if not points:
        return CLASS_A
    i = (points[0].lo // RESOLUTION) % index_set.k
    block = index_set.blocks[index_set.block_of(i)]
    nxt = i + 1
    plus_side = set(d.Ucirc) | set(d.Uplus) | set(d.Vplus)
    minus_side = set(d.Uminus) | set(d.Ucirc) | set(d.Vminus)
    neighbours = (i in d.Vplus and nxt in plus_side) or (
        i in minus_side and nxt in d.Vminus
    )
    above = sum(1 for j in d.Vminus if j in block and j > i)
    return CLASS_B if neighbours and above % 2 == 0 else CLASS_A


def classify_factors(rep, d, index_set):
    return tuple(classify_group(g, d, index_set) for g in rep.groups)


def handle_index(rep, classes):
    return sum(dim for dim, c in zip(rep.dims, classes) if c == CLASS_A)


def glue_list(reps, index_set, params, threads=None):
    """For every piece, the earlier pieces it meets in codimension one."""
    target = params.n - index_set.ell
    orbits = [OrbitBox.single(rep.factors) for rep in reps]

    def glue(z):
        return tuple(
            w + 1
            for w in range(z)
            if orbit_intersection(reps[z], orbits[w], params) == target
        )

    with ThreadPoolExecutor(max_workers=thread_count(threads)) as executor:
        return list(executor.map(glue, range(len(reps))))


def decompose(
    index_set, params, j_order=None, istar_order=None, limit=None, threads=None
):
    """The ordered handle records of X_I."""
    if not params.odd:
        return t4_records(index_set, threads)
    descriptors = enumerate_pieces(index_set, j_order, istar_order, limit)
    reps, classes = [], []
    for d in descriptors:
        rep = build_rep(index_set, d, params)
        reps.append(rep)
        classes.append(classify_factors(rep, d, index_set))
    glues = glue_list(reps, index_set, params, threads)
    records = []
    for z, (d, rep, c, g) in enumerate(zip(descriptors, reps, classes, glues), 1):
        h = handle_index(rep, c)
        logger.debug(
            "Y_{}: {} rep {} h={} glue {}".format(z, d.label(), rep, h, list(g))
        )
        records.append(
            HandleRecord(z=z, descriptor=d, rep=rep, classes=c, h=h, glue_to=g)
        )
    return records


# Handle data of the four-torus trisection: per piece the factors of Y_z^*
# and the classes of its groups.
def _t4_box(*spans):
    return [Factor(RESOLUTION * lo, RESOLUTION * hi) for lo, hi in spans]


T4_HANDLES = {
    (0,): [
        (_t4_box((0, 1), (0, 1), (0, 2), (0, 2)), (CLASS_B,)),
        (_t4_box((0, 1), (0, 1), (0, 2), (2, 3)), (CLASS_B, CLASS_A)),
    ],
    (0, 1): [
        (_t4_box((0, 1), (1, 1), (1, 2), (1, 2)), (CLASS_B,)),
        (_t4_box((0, 0), (0, 1), (1, 2), (1, 2)), (CLASS_A, CLASS_B)),
        (_t4_box((0, 1), (1, 1), (1, 2), (2, 3)), (CLASS_B, CLASS_A)),
    ],
}


def t4_records(index_set, threads=None):
    if index_set.elements not in T4_HANDLES:
        raise ValueError(
            "no handle data for I={} in the four-torus".format(index_set)
        )
    reps, classes = [], []
    for factors, c in T4_HANDLES[index_set.elements]:
        rep = group_factors(factors, T4_PARAMS.side)
        if len(rep.groups) != len(c):
            raise FactorShapeError("{} does not match its classes {}".format(rep, c))
        reps.append(rep)
        classes.append(c)
    glues = glue_list(reps, index_set, T4_PARAMS, threads)
    out = []
    for z, (rep, c, g) in enumerate(zip(reps, classes, glues), 1):
        d = PieceDescriptor(J=(), i_star=index_set.elements[0], U=(), V=())
        out.append(
            HandleRecord(
                z=z, descriptor=d, rep=rep, classes=c, h=handle_index(rep, c), glue_to=g
            )
        )
    return out


def chi_handles(records):
    return sum(r.copies * (-1) ** r.h for r in records)


def closure(faces, k):
    """All canonical faces of the given canonical faces, by dimension."""
    out = {}
    seen = set()
    frontier = set(faces)
    while frontier:
        seen |= frontier
        nxt = set()
        for f in frontier:
            for t, c in enumerate(f):
                if c % 2:
                    for v in (c - 1, (c + 1) % (2 * k)):
                        g = canonical_face(f[:t] + (v,) + f[t + 1 :])
                        if g not in seen:
                            nxt.add(g)
        frontier = nxt
    for f in seen:
        out.setdefault(sum(c % 2 for c in f), set()).add(f)
    return out


def cell_counts(faces, k):
    return {
        d: sum(multinomial(f) for f in fs) for d, fs in sorted(closure(faces, k).items())
    }


def chi_cells(face_set, params):
    return sum((-1) ** d * c for d, c in cell_counts(face_set.canonical, params.k).items())


def top_faces_connected(face_set, params):
    """Connectivity of the top faces, adjacent across shared facets."""
    k = params.k
    graph = nx.Graph()
    by_facet = {}
    for face in face_set.concrete():
        graph.add_node(face)
        for t, c in enumerate(face):
            if c % 2:
                for v in (c - 1, (c + 1) % (2 * k)):
                    facet = face[:t] + (v,) + face[t + 1 :]
                    by_facet.setdefault(facet, []).append(face)
    for members in by_facet.values():
        for a, b in zip(members, members[1:]):
            graph.add_edge(a, b)
    return graph.number_of_nodes() > 0 and nx.is_connected(graph)


@dataclass
class EulerReport:
    index_set: IndexSet
    chi_handles: int
    chi_cells: int
    handle_counts: dict = field(default_factory=dict)
    genus: int = None
    connected: bool = None

    @property
    def ok(self):
        return self.chi_handles == self.chi_cells and self.connected is not False


def euler_genus_report(index_set, params, threads=None):
    """Euler characteristic from the handles and from the cells of X_I.

    When every handle has index at most one the genus c_1 - c_0 + 1 is
    reported, together with the connectivity of X_I.
    """
    if params.odd:
        faces = formula_XI(index_set, params)
    else:
        faces = oracle_XI(index_set, params)
    by_cells = chi_cells(faces, params)
    if index_set.proper:
        records = decompose(index_set, params, threads=threads)
        by_handles = chi_handles(records)
        counts = Counter()
        for r in records:
            counts[r.h] += r.copies
    else:
        from util.central import central_decomposition

        central = central_decomposition(params)
        by_handles = central.chi_handles
        counts = Counter()
        for p in central.pieces:
            counts[p.h] += p.handles
    report = EulerReport(
        index_set=index_set,
        chi_handles=by_handles,
        chi_cells=by_cells,
        handle_counts=dict(counts),
    )
    if counts and max(counts) <= 1:
        report.genus = counts[1] - counts[0] + 1
        report.connected = top_faces_connected(faces, params)
    logger.info(
        "X_{}: chi from handles {}, from cells {}, genus {}".format(
            index_set, by_handles, by_cells, report.genus
        )
    )
    return report


@dataclass
class PseudomanifoldReport:
    ok: bool
    faces: int
    bad: list = field(default_factory=list)


def pseudomanifold_check(params, cells=None):
    """Every codimension-one face of the central cells lies in exactly two
    of them."""
    params.require_odd("pseudomanifold_check")
    k = params.k
    if cells is None:
        cells = formula_XI(IndexSet.of(range(k), k), params).canonical
    cells = set(cells)
    facets = set()
    for c in cells:
        for t, v in enumerate(c):
            if v % 2:
                for w in (v - 1, (v + 1) % (2 * k)):
                    facets.add(canonical_face(c[:t] + (w,) + c[t + 1 :]))
    bad = []
    for f in sorted(facets):
        count = 0
        for v, mult in Counter(f).items():
            if v % 2:
                continue
            for e in ((v - 1) % (2 * k), (v + 1) % (2 * k)):
                g = list(f)
                g[g.index(v)] = e
                if canonical_face(g) in cells:
                    count += mult
        if count != 2:
            bad.append((f, count))
    for f, count in bad[:10]:
        logger.error("face {} lies in {} cells".format(f, count))
    return PseudomanifoldReport(ok=not bad, faces=len(facets), bad=bad)


@dataclass
class BoundReport:
    ok: bool
    rows: list = field(default_factory=list)


def bound_check(records_by_index_set):
    """The maximal handle index of X_I is at most |I|."""
    rows = []
    for index_set, records in records_by_index_set.items():
        top = max(r.h for r in records)
        rows.append((str(index_set), index_set.ell, top))
        if top > index_set.ell:
            logger.error(
                "X_{} has a handle of index {} > {}".format(index_set, top, index_set.ell)
            )
    return BoundReport(ok=all(top <= ell for _, ell, top in rows), rows=rows)


@dataclass
class EfficiencyReport:
    genus: int
    rank: int
    efficiency: Fraction

    @property
    def ok(self):
        return self.efficiency == 1


def efficiency_report(params, rank=None):
    """(1 + rank pi_1) / (1 + genus of the pieces); rank pi_1(T^n) = n."""
    report = euler_genus_report(IndexSet.of([0], params.k), params)
    rank = params.n if rank is None else rank
    return EfficiencyReport(
        genus=report.genus,
        rank=rank,
        efficiency=Fraction(1 + rank, 1 + report.genus),
    )


def u_disjoint_violations(records, params):
    """Pairs of pieces that differ only in U- but still meet."""
    out = []
    for a, b in itertools.combinations(records, 2):
        da, db = a.descriptor, b.descriptor
        same = (da.J, da.i_star, da.Vminus, da.Ucirc) == (
            db.J,
            db.i_star,
            db.Vminus,
            db.Ucirc,
        )
        if same and da.Uminus != db.Uminus:
            if orbit_intersection(a.rep, OrbitBox.single(b.rep.factors), params) is not None:
                out.append((a.z, b.z))
    return out


def _gray_block(size):
    block = tuple(range(size + 1))
    return block, block_v_order(block, -1, set(block[1:]))


def v_order_parity_violations(max_size=5):
    """Removing i from V- moves earlier iff |V- n {i+1..b}| is even."""
    out = []
    for size in range(1, max_size + 1):
        block, order = _gray_block(size)
        position = {s: p for p, s in enumerate(order)}
        b = block[-1]
        for vminus in order:
            for i in vminus:
                earlier = position[vminus - {i}] < position[vminus]
                even = len([j for j in vminus if i < j <= b]) % 2 == 0
                if earlier != even:
                    out.append((size, tuple(sorted(vminus)), i))
    return out


def v_order_set_violations(max_size=5):
    """If every single toggle from A moves later, toggling all of A does too."""
    out = []
    for size in range(1, max_size + 1):
        _, order = _gray_block(size)
        position = {s: p for p, s in enumerate(order)}
        elements = sorted(order[-1] | frozenset().union(*order))
        for vminus in order:
            later = [a for a in elements if position[vminus ^ {a}] > position[vminus]]
            for r in range(1, len(later) + 1):
                for subset in itertools.combinations(later, r):
                    if position[vminus ^ frozenset(subset)] <= position[vminus]:
                        out.append((size, tuple(sorted(vminus)), subset))
    return out
