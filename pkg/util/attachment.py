"""Exhaustive attachment certificates on the breakpoint lattice.

All factor endpoints of a decomposition cut each circle into vertices and
open arcs. Every piece is a union of closed cells of that grid, so the
attaching region of Y_z^* can be compared cell by cell with the union of the
earlier pieces.
"""

import itertools
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from util.click_util import thread_count
from util.constants import EXHAUSTIVE_MAX_N
from util.handle_decomposition import CLASS_A
from util.log_handler import logger
from util.multisection import multinomial


class BreakpointGrid:
    """Cells of one circle cut at the given points.

    The vertex at ``points[j]`` is coded 2j and the open arc from
    ``points[j]`` to the next point is coded 2j+1.
    """

    def __init__(self, factors, side):
        self.side = side
        self.points = sorted({f.lo % side for f in factors} | {f.hi % side for f in factors})
        self.m = len(self.points)
        self._cache = {}

    def _arc_doubled_midpoint(self, j):
        nxt = self.points[j + 1] if j + 1 < self.m else self.points[0] + self.side
        return self.points[j] + nxt

    def factor_cells(self, factor):
        key = (factor.lo, factor.hi)
        if key not in self._cache:
            out = []
            for j, p in enumerate(self.points):
                if factor.contains_value(p, self.side):
                    out.append(2 * j)
                mid = self._arc_doubled_midpoint(j)
                if any(
                    2 * factor.lo <= mid + 2 * t * self.side <= 2 * factor.hi
                    for t in range(-2, 3)
                ):
                    out.append(2 * j + 1)
            self._cache[key] = frozenset(out)
        return self._cache[key]

    def adjacent_arcs(self, code):
        return ((code - 1) % (2 * self.m), code + 1)

    def group_cells(self, group):
        lists = [sorted(self.factor_cells(f)) for f in group]
        return {tuple(sorted(c)) for c in itertools.product(*lists)}


def cell_dim(cell):
    return sum(c % 2 for c in cell)


def _cofaces(cell, grid):
    for v, mult in Counter(cell).items():
        if v % 2:
            continue
        for e in grid.adjacent_arcs(v):
            g = list(cell)
            g[g.index(v)] = e
            yield tuple(sorted(g)), mult


def group_boundary(cells, dim, grid):
    """The cells on the boundary of the dim-dimensional region ``cells``."""
    if dim == 0:
        return frozenset()
    by_dim = {}
    for c in cells:
        by_dim.setdefault(cell_dim(c), []).append(c)
    boundary = set()
    for c in by_dim.get(dim - 1, []):
        count = sum(mult for g, mult in _cofaces(c, grid) if g in cells)
        if count == 1:
            boundary.add(c)
    for d in range(dim - 2, -1, -1):
        for c in by_dim.get(d, []):
            if any(g in boundary for g, _ in _cofaces(c, grid)):
                boundary.add(c)
    return frozenset(boundary)


def _perfect_matching(cell, factor_cells):
    if not cell:
        return True
    fits = np.array([[c in fc for fc in factor_cells] for c in cell], dtype=bool)
    if not fits.any(axis=1).all() or not fits.any(axis=0).all():
        return False
    cost = np.where(fits, 0, 1)
    rows, cols = linear_sum_assignment(cost)
    return int(cost[rows, cols].sum()) == 0


def _cross_group_image(cell, own, group_of):
    """Whether the cell lies in a permutation image of Y_z^* that moves some
    coordinate into a different group."""
    n = len(cell)
    for p, q in itertools.product(range(n), repeat=2):
        if group_of[p] == group_of[q] or cell[p] not in own[q]:
            continue
        rest = [cell[s] for s in range(n) if s != p]
        others = [own[s] for s in range(n) if s != q]
        if _perfect_matching(rest, others):
            return True
    return False


def sphere_euler(h):
    """Euler characteristic of S^{h-1}; the empty set for h = 0."""
    return 0 if h == 0 else 1 + (-1) ** (h - 1)


@dataclass
class AttachmentCertificate:
    z: int
    h: int
    cells: int = 0
    attaching: int = 0
    attaching_chi: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def _certify(record, earlier, grid):
    cert = AttachmentCertificate(z=record.z, h=record.h)
    groups = record.rep.groups
    group_cells, boundaries = [], []
    for g, cls, dim in zip(groups, record.classes, record.dims):
        cells = grid.group_cells(g)
        group_cells.append(sorted(cells))
        boundaries.append(group_boundary(cells, dim, grid) if cls == CLASS_A else frozenset())
    earlier_cells = [[grid.factor_cells(f) for f in w.rep.factors] for w in earlier]
    own = [grid.factor_cells(f) for f in record.rep.factors]
    group_of = [r for r, g in enumerate(groups) for _ in g]
    cache = {}
    for parts in itertools.product(*group_cells):
        cert.cells += 1
        in_attaching = any(part in b for part, b in zip(parts, boundaries))
        cell = tuple(itertools.chain.from_iterable(parts))
        key = tuple(sorted(cell))
        if key not in cache:
            cache[key] = next(
                (w.z for w, fc in zip(earlier, earlier_cells) if _perfect_matching(key, fc)),
                0,
            )
        witness = cache[key]
        if in_attaching:
            cert.attaching += 1
            weight = 1
            for part in parts:
                weight *= multinomial(part)
            cert.attaching_chi += (-1) ** cell_dim(cell) * weight
        if bool(witness) != in_attaching:
            cert.violations.append(
                ("earlier" if witness else "attaching", cell, witness)
            )
        elif not in_attaching and _cross_group_image(cell, own, group_of):
            cert.violations.append(("within", cell, record.z))
    if cert.attaching_chi != sphere_euler(record.h):
        cert.violations.append(("shape", cert.attaching_chi, sphere_euler(record.h)))
    for kind, cell, witness in cert.violations[:5]:
        logger.error(
            "Y_{}: {} violation at cell {} (witness {})".format(record.z, kind, cell, witness)
        )
    logger.debug(
        "Y_{}: {} cells, {} on the attaching region, chi {}".format(
            record.z, cert.cells, cert.attaching, cert.attaching_chi
        )
    )
    return cert


def verify_attachment(records, params, z=None, threads=None):
    """Certificates for every piece of a decomposition, or for piece z only.

    For each cell of Y_z^* it checks that the cell lies in an earlier piece
    exactly when it lies on the attaching region (the boundaries of the
    class-(A) groups times the rest), that cells off the attaching region lie
    in no other image of Y_z^*, and that the attaching region has the Euler
    characteristic of S^{h-1}.
    """
    if params.n > EXHAUSTIVE_MAX_N:
        raise ValueError(
            "exhaustive attachment checks need n <= {}, got n={}".format(
                EXHAUSTIVE_MAX_N, params.n
            )
        )
    grid = BreakpointGrid(
        [f for r in records for f in r.rep.factors], params.side
    )
    targets = records if z is None else [records[z - 1]]
    with ThreadPoolExecutor(max_workers=thread_count(threads)) as executor:
        return list(
            executor.map(lambda r: _certify(r, records[: r.z - 1], grid), targets)
        )
