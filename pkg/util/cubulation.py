"""Directed cube complexes and the multisections they inherit.

A complex is a set of n-cubes [0,1]^n whose facets are glued in pairs. The
facet F+_i is {x_i = 1} and F-_i is {x_i = 0}. A gluing of F+_i of cube a to
F-_j of cube b carries a 1-based signed permutation ``perm``: coordinate t of
cube a becomes coordinate |perm[t]| of cube b, reversed when perm[t] < 0, and
|perm[i]| = j.

Cells of a cube are coded by patterns in {0, 1, 2}^n, 2 being a free
coordinate.
"""

import itertools
from collections import Counter
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_form

from util.log_handler import logger
from util.multisection import build_pieces
from util.union_find import UnionFind

SIDE_VALUE = {"+": 1, "-": 0}
FREE = 2


class ComplexFormatError(Exception):
    pass


@dataclass(frozen=True)
class Gluing:
    cube_a: int
    i: int
    sign_a: str
    cube_b: int
    j: int
    sign_b: str
    perm: tuple

    def label(self):
        return "{} face{}{} -> {} face{}{} perm {}".format(
            self.cube_a,
            self.sign_a,
            self.i,
            self.cube_b,
            self.sign_b,
            self.j,
            ",".join(str(p) for p in self.perm),
        )


@dataclass(frozen=True)
class DirectedCubeComplex:
    n: int
    cubes: int
    gluings: tuple
    even: bool = field(default=None, compare=False)


def permutation_sign(perm):
    """Sign of a permutation given as a sequence of distinct sortable keys."""
    order = sorted(range(len(perm)), key=lambda t: perm[t])
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        length = 0
        t = start
        while not seen[t]:
            seen[t] = True
            t = order[t]
            length += 1
        if length and length % 2 == 0:
            sign = -sign
    return sign


def from_permutation(n, sigma):
    """One n-cube with F+_i glued to F-_{sigma(i)}, coordinates moved by sigma."""
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError("{} is not a permutation of 1..{}".format(sigma, n))
    even = permutation_sign(sigma) == 1
    if not even:
        logger.warning("sigma={} is an odd permutation".format(sigma))
    gluings = tuple(
        Gluing(0, i + 1, "+", 0, sigma[i], "-", sigma) for i in range(n)
    )
    return DirectedCubeComplex(n=n, cubes=1, gluings=gluings, even=even)


def _face_token(token, lineno):
    if not token.startswith("face") or len(token) < 6 or token[4] not in "+-":
        raise ComplexFormatError(
            "line {}: expected face+<i> or face-<i>, found '{}'".format(lineno, token)
        )
    try:
        return token[4], int(token[5:])
    except ValueError:
        raise ComplexFormatError("line {}: bad face index '{}'".format(lineno, token))


def parse_complex(text):
    """Read the text format: a header 'n <dim> cubes <count>' and one line
    '<a> face+<i> -> <b> face-<j> perm <p1,...,pn>' per gluing."""
    header = None
    gluings = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 4 or tokens[0] != "n" or tokens[2] != "cubes":
                raise ComplexFormatError(
                    "line {}: expected header 'n <dim> cubes <count>'".format(lineno)
                )
            try:
                header = (int(tokens[1]), int(tokens[3]))
            except ValueError:
                raise ComplexFormatError("line {}: header needs integers".format(lineno))
            continue
        if len(tokens) != 7 or tokens[2] != "->" or tokens[5] != "perm":
            raise ComplexFormatError("line {}: malformed gluing '{}'".format(lineno, line))
        sign_a, i = _face_token(tokens[1], lineno)
        sign_b, j = _face_token(tokens[4], lineno)
        try:
            cube_a, cube_b = int(tokens[0]), int(tokens[3])
            perm = tuple(int(p) for p in tokens[6].split(","))
        except ValueError:
            raise ComplexFormatError("line {}: non-integer entry".format(lineno))
        gluings.append(Gluing(cube_a, i, sign_a, cube_b, j, sign_b, perm))
    if header is None:
        raise ComplexFormatError("missing header")
    n, cubes = header
    return DirectedCubeComplex(n=n, cubes=cubes, gluings=tuple(gluings))


def load_complex(path):
    with open(path) as f:
        return parse_complex(f.read())


def patterns(n):
    return itertools.product((0, 1, FREE), repeat=n)


def pattern_dim(p):
    return sum(1 for v in p if v == FREE)


def map_pattern(g, p):
    """Image in cube b of a pattern lying on the glued facet of cube a."""
    q = [None] * len(p)
    for t, v in enumerate(p):
        target = abs(g.perm[t]) - 1
        if t == g.i - 1:
            q[target] = SIDE_VALUE[g.sign_b]
        elif g.perm[t] < 0 and v != FREE:
            q[target] = 1 - v
        else:
            q[target] = v
    return tuple(q)


def map_orientation(g, p):
    """+1 when the gluing preserves the coordinate orientation of the cell."""
    free = [t for t, v in enumerate(p) if v == FREE]
    sign = permutation_sign([abs(g.perm[t]) for t in free])
    for t in free:
        if g.perm[t] < 0:
            sign = -sign
    return sign


class OrientedUnionFind(UnionFind):
    """Union-find that tracks the relative orientation of every element to
    its root."""

    def __init__(self, items=()):
        super().__init__(items)
        self.parity = {x: 1 for x in self.parent}

    def add(self, x):
        super().add(x)
        self.parity.setdefault(x, 1)

    def find_oriented(self, x):
        y = self.parent[x]
        if y == x:
            return x, 1
        root, sign = self.find_oriented(y)
        self.parent[x] = root
        self.parity[x] *= sign
        return root, self.parity[x]

    def find(self, x):
        return self.find_oriented(x)[0]

    def union_oriented(self, x, y, sign):
        """Record orientation(x) = sign * orientation(y); False on a conflict."""
        rx, sx = self.find_oriented(x)
        ry, sy = self.find_oriented(y)
        if rx == ry:
            return sx == sign * sy
        if self.rank[rx] < self.rank[ry]:
            rx, ry, sx, sy = ry, rx, sy, sx
        elif self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        self.parent[ry] = rx
        self.parity[ry] = sx * sign * sy
        self.size[rx] += self.size[ry]
        del self.rank[ry]
        return True


def structural_violations(c):
    out = []
    facets = Counter()
    for g in c.gluings:
        if (g.sign_a, g.sign_b) != ("+", "-"):
            out.append("{}: pairs face{} with face{}".format(g.label(), g.sign_a, g.sign_b))
        if not (0 <= g.cube_a < c.cubes and 0 <= g.cube_b < c.cubes):
            out.append("{}: cube index out of range".format(g.label()))
        if not (1 <= g.i <= c.n and 1 <= g.j <= c.n):
            out.append("{}: face index out of range".format(g.label()))
            continue
        if len(g.perm) != c.n or sorted(abs(p) for p in g.perm) != list(range(1, c.n + 1)):
            out.append("{}: perm is not a signed permutation".format(g.label()))
            continue
        if abs(g.perm[g.i - 1]) != g.j:
            out.append("{}: perm sends axis {} to {}".format(g.label(), g.i, abs(g.perm[g.i - 1])))
        reversed_axes = [t + 1 for t, p in enumerate(g.perm) if p < 0 and t != g.i - 1]
        if reversed_axes:
            out.append("{}: reverses edge orientation on axes {}".format(g.label(), reversed_axes))
        facets[(g.cube_a, g.sign_a, g.i)] += 1
        facets[(g.cube_b, g.sign_b, g.j)] += 1
    for cube in range(c.cubes):
        for sign in "+-":
            for i in range(1, c.n + 1):
                count = facets[(cube, sign, i)]
                if count != 1:
                    out.append(
                        "facet face{}{} of cube {} is glued {} times".format(sign, i, cube, count)
                    )
    return out


def _mappable(c):
    return all(
        len(g.perm) == c.n
        and sorted(abs(p) for p in g.perm) == list(range(1, c.n + 1))
        and 1 <= g.i <= c.n
        and 0 <= g.cube_a < c.cubes
        and 0 <= g.cube_b < c.cubes
        for g in c.gluings
    )


def _glued_facet(g, n):
    value = SIDE_VALUE[g.sign_a]
    return [p for p in patterns(n) if p[g.i - 1] == value]


def quotient(c):
    """The identification of the cells of all cubes, with orientations.

    Returns the union-find and the list of orientation conflicts.
    """
    uf = OrientedUnionFind(
        (cube, p) for cube in range(c.cubes) for p in patterns(c.n)
    )
    conflicts = []
    for g in c.gluings:
        for p in _glued_facet(g, c.n):
            q = map_pattern(g, p)
            if not uf.union_oriented((g.cube_a, p), (g.cube_b, q), map_orientation(g, p)):
                conflicts.append((g.label(), p))
    return uf, conflicts


@dataclass
class DirectedReport:
    ok: bool
    violations: list = field(default_factory=list)
    cell_counts: dict = field(default_factory=dict)
    even: bool = None


def validate_directed(c):
    """Check the pairing and orientation rules and count the quotient cells."""
    violations = structural_violations(c)
    counts = {}
    if _mappable(c):
        uf, conflicts = quotient(c)
        for label, p in conflicts:
            violations.append("{}: cell {} is glued to itself reversed".format(label, p))
        for root in uf.reps():
            d = pattern_dim(root[1])
            counts[d] = counts.get(d, 0) + 1
    for v in violations:
        logger.error(v)
    return DirectedReport(
        ok=not violations, violations=violations, cell_counts=counts, even=c.even
    )


@dataclass
class ChainComplexData:
    cells: dict
    boundaries: dict

    @property
    def ok(self):
        for d in range(2, max(self.cells) + 1):
            outer, inner = self.boundaries[d - 1], self.boundaries[d]
            if outer.size and inner.size and np.any(outer @ inner):
                return False
        return True


def chain_complex(c):
    """Cellular chain complex of the quotient; ``boundaries[d]`` maps d-cells
    to (d-1)-cells."""
    uf, _ = quotient(c)
    cells = {d: [] for d in range(c.n + 1)}
    for root in sorted(uf.reps()):
        cells[pattern_dim(root[1])].append(root)
    index = {d: {r: s for s, r in enumerate(rs)} for d, rs in cells.items()}
    boundaries = {}
    for d in range(1, c.n + 1):
        matrix = np.zeros((len(cells[d - 1]), len(cells[d])), dtype=np.int64)
        for col, (cube, p) in enumerate(cells[d]):
            free = [t for t, v in enumerate(p) if v == FREE]
            for m, t in enumerate(free):
                for value, sign in ((1, 1), (0, -1)):
                    face = p[:t] + (value,) + p[t + 1 :]
                    root, parity = uf.find_oriented((cube, face))
                    matrix[index[d - 1][root], col] += (-1) ** m * sign * parity
        boundaries[d] = matrix
    return ChainComplexData(
        cells={d: len(rs) for d, rs in cells.items()}, boundaries=boundaries
    )


def invariant_factors(matrix):
    """Nonzero diagonal entries of the Smith normal form over the integers."""
    if matrix.size == 0:
        return []
    snf = smith_normal_form(Matrix(matrix.tolist()), domain=ZZ)
    return [abs(int(snf[s, s])) for s in range(min(snf.shape)) if snf[s, s] != 0]


@dataclass(frozen=True)
class AbelianGroup:
    rank: int
    torsion: tuple = ()

    def label(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append("Z^{}".format(self.rank))
        parts += ["Z_{}".format(t) for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def homology_h1(c):
    chains = chain_complex(c)
    if not chains.ok:
        logger.error("boundary of boundary is not zero")
    edges = chains.cells.get(1, 0)
    rank_d1 = len(invariant_factors(chains.boundaries[1])) if c.n >= 1 else 0
    factors_d2 = invariant_factors(chains.boundaries[2]) if c.n >= 2 else []
    return AbelianGroup(
        rank=edges - rank_d1 - len(factors_d2),
        torsion=tuple(t for t in factors_d2 if t > 1),
    )


def _corners(p):
    options = [(0, 1) if v == FREE else (v,) for v in p]
    return itertools.product(*options)


@dataclass
class LinkReport:
    vertex: tuple
    chi: int
    connected: bool
    closed: bool

    @property
    def ok(self):
        return self.chi == 2 and self.connected and self.closed


def vertex_link_check(c):
    """Links of the quotient vertices of a 3-dimensional complex.

    A link element is a flag (cube, cell, corner of the cell); flags are
    identified along the gluings. The corners of the cubes are the triangles.
    """
    if c.n != 3:
        raise ValueError("vertex links are only checked for n = 3, got n={}".format(c.n))
    uf, _ = quotient(c)
    flags = UnionFind(
        (cube, p, corner)
        for cube in range(c.cubes)
        for p in patterns(3)
        if 1 <= pattern_dim(p) <= 2
        for corner in _corners(p)
    )
    for g in c.gluings:
        for p in _glued_facet(g, 3):
            if not 1 <= pattern_dim(p) <= 2:
                continue
            q = map_pattern(g, p)
            for corner in _corners(p):
                flags.union((g.cube_a, p, corner), (g.cube_b, q, map_pattern(g, corner)))

    elements = {}
    graph = {}
    incidence = {}
    for cube in range(c.cubes):
        for corner in _corners((FREE,) * 3):
            vertex = uf.find((cube, corner))
            counts = elements.setdefault(vertex, {1: set(), 2: set()})
            graph.setdefault(vertex, nx.Graph()).add_node((cube, corner))
            for axes in itertools.combinations(range(3), 2):
                p = tuple(FREE if t in axes else corner[t] for t in range(3))
                edge = flags.find((cube, p, corner))
                counts[2].add(edge)
                incidence.setdefault(edge, []).append((cube, corner))
            for axis in range(3):
                p = tuple(FREE if t == axis else corner[t] for t in range(3))
                counts[1].add(flags.find((cube, p, corner)))
    for triangles in incidence.values():
        for a, b in zip(triangles, triangles[1:]):
            graph[uf.find((a[0], a[1]))].add_edge(a, b)

    out = []
    for vertex, counts in sorted(elements.items()):
        triangles = graph[vertex].number_of_nodes()
        report = LinkReport(
            vertex=vertex,
            chi=len(counts[1]) - len(counts[2]) + triangles,
            connected=nx.is_connected(graph[vertex]),
            closed=all(len(incidence[e]) == 2 for e in counts[2]),
        )
        if not report.ok:
            logger.error(
                "link of vertex {}: chi {}, connected {}, closed {}".format(
                    vertex, report.chi, report.connected, report.closed
                )
            )
        out.append(report)
    return out


@dataclass
class LiftReport:
    sizes: list
    genus: list
    expected_genus: int
    connected: list
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return (
            not self.violations
            and all(self.connected)
            and all(g == self.expected_genus for g in self.genus)
        )


def _closed_cells(word):
    options = [(2 * w, 2 * w + 1, 2 * w + 2) for w in word]
    return itertools.product(*options)


def _map_fine(g, cell, top):
    q = [None] * len(cell)
    for t, v in enumerate(cell):
        target = abs(g.perm[t]) - 1
        if t == g.i - 1:
            q[target] = top if g.sign_b == "+" else 0
        elif g.perm[t] < 0:
            q[target] = top - v
        else:
            q[target] = v
    return tuple(q)


def lift_multisection(c, params):
    """Pull the multisection of T^n back into every cube and glue it.

    Each cube carries the subcubes of the pieces on its k-grid; fine cells are
    coded per coordinate by 0..2k (vertex v at 2v, edge [v, v+1] at 2v+1).
    A handlebody piece has genus 1 - chi, expected N(n-1) + 1 for N cubes.
    """
    params.require_odd("lift_multisection")
    if c.n != params.n:
        raise ValueError("complex has n={}, torus has n={}".format(c.n, params.n))
    k, n = params.k, params.n
    top = 2 * k
    pieces = build_pieces(params)
    torus_cells = []
    for piece in pieces:
        cells = set()
        for word in piece.cubes:
            cells.update(tuple(sorted(v % top for v in cell)) for cell in _closed_cells(word))
        torus_cells.append(frozenset(cells))

    # pieces of T^n containing the image of every cell of one cube
    local = {}
    for cell in itertools.product(range(top + 1), repeat=n):
        key = tuple(sorted(v % top for v in cell))
        local[cell] = tuple(r for r, m in enumerate(torus_cells) if key in m)
    members = [
        frozenset(cell for cell, rs in local.items() if r in rs)
        for r in range(len(pieces))
    ]

    uf = UnionFind([])
    violations = []
    for g in c.gluings:
        value = top if g.sign_a == "+" else 0
        for cell in local:
            if cell[g.i - 1] != value:
                continue
            image = _map_fine(g, cell, top)
            side_a, side_b = local[cell], local[image]
            if side_a != side_b:
                violations.append((g.label(), cell, side_a, side_b))
            uf.add((g.cube_a, cell))
            uf.add((g.cube_b, image))
            uf.union((g.cube_a, cell), (g.cube_b, image))

    def root(x):
        return uf.find(x) if x in uf.parent else x

    genus, connected = [], []
    for r, cells in enumerate(members):
        roots = {root((cube, cell)) for cube in range(c.cubes) for cell in cells}
        chi = sum((-1) ** sum(v % 2 for v in cell) for _, cell in roots)
        graph = nx.Graph()
        graph.add_nodes_from(roots)
        for cube in range(c.cubes):
            for cell in cells:
                for t, v in enumerate(cell):
                    if v % 2:
                        for e in (v - 1, v + 1):
                            face = cell[:t] + (e,) + cell[t + 1 :]
                            graph.add_edge(root((cube, cell)), root((cube, face)))
        genus.append(1 - chi)
        connected.append(nx.is_connected(graph))
    for label, cell, side_a, side_b in violations[:10]:
        logger.error(
            "{}: cell {} lies in pieces {} but its image in {}".format(label, cell, side_a, side_b)
        )
    report = LiftReport(
        sizes=[c.cubes * len(p) for p in pieces],
        genus=genus,
        expected_genus=c.cubes * (n - 1) + 1,
        connected=connected,
        violations=violations,
    )
    logger.info(
        "lifted pieces: sizes {}, genus {} (expected {})".format(
            report.sizes, report.genus, report.expected_genus
        )
    )
    return report
