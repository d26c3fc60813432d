"""Alternative handle decomposition of the central manifold X_{Z_k}.

Pieces are indexed by (i*, Uo, U-, U*). Every index i contributes an interval
rho_i (a third, or a sixth next to i*) together with the point i, except i*
which contributes rho_{i*} alone. Cells live on the 1/6 grid: the vertex p is
coded 2p and the arc [p, p+1] is 2p+1, modulo 12k.
"""

import itertools
from dataclasses import dataclass, field

from util.handle_decomposition import chi_cells
from util.log_handler import logger
from util.multisection import IndexSet, formula_XI, multinomial
from util.torus_core import Factor, OrbitBox
from util.union_find import UnionFind


@dataclass(frozen=True)
class CentralPieceDescriptor:
    i_star: int
    Ucirc: tuple
    Uminus: tuple
    Ustar: tuple

    def h(self, k):
        return k - len(self.Ucirc) - len(self.Ustar)

    def label(self):
        def fmt(s):
            return "{" + ",".join(str(i) for i in s) + "}"

        return "i*={} Uo={} U-={} U*={}".format(
            self.i_star, fmt(self.Ucirc), fmt(self.Uminus), fmt(self.Ustar)
        )


@dataclass(frozen=True)
class CentralPiece:
    z: int
    descriptor: CentralPieceDescriptor
    box: OrbitBox
    contacts: OrbitBox
    h: int
    increment: int

    @property
    def handles(self):
        """Connected components of the union of the box's permutation images."""
        return self.contacts.copies


@dataclass
class CentralReport:
    k: int
    pieces: list
    chi_measured: int
    chi_cells: int
    first_full: bool
    covers: bool
    mismatches: list = field(default_factory=list)

    @property
    def chi_handles(self):
        return sum((-1) ** p.h * p.handles for p in self.pieces)

    @property
    def ok(self):
        return (
            self.covers
            and self.first_full
            and self.chi_measured == self.chi_cells
            and self.chi_handles == self.chi_cells
        )

    @property
    def zero_handles(self):
        return sum(p.handles for p in self.pieces if p.h == 0)


def central_rho(i, d, k):
    """rho_i in units of 1/6."""
    i_star = d.i_star
    lead = (i_star + 1) % k
    s = 6 * i
    if i in d.Ucirc:
        return Factor(s - 4, s - 2)
    if i == lead and i != i_star:
        if i in d.Ustar:
            return Factor(6 * i_star, 6 * i_star + 1)
        if i in d.Uminus:
            return Factor(6 * i_star + 1, 6 * i_star + 2)
    if i in d.Uminus:
        return Factor(s - 6, s - 4)
    if i == i_star:
        if i in d.Ustar:
            return Factor(s - 1, s)
        return Factor(s - 2, s - 1)
    return Factor(s - 2, s)


def central_box(d, k):
    factors = []
    for i in range(k):
        factors.append(central_rho(i, d, k))
        if i != d.i_star:
            factors.append(Factor.point(6 * i))
    return OrbitBox.single(factors)


def contact_groups(box, side):
    """Group the positions of a box whose arcs meet.

    Two permutation images of the box touch exactly when the permutation
    moves every position to one whose arc meets it, so the images fall into
    n! / prod(|group|!) connected components.
    """
    factors = box.factors
    uf = UnionFind(range(len(factors)))
    for r, s in itertools.combinations(range(len(factors)), 2):
        if factors[r].overlap_dim(factors[s], side) is not None:
            uf.union(r, s)
    classes = sorted(sorted(c) for c in uf.classes())
    return OrbitBox(groups=tuple(tuple(factors[p] for p in c) for c in classes))


def _sort_key(d):
    return (
        -len(d.Ucirc),
        d.Ucirc,
        -len(d.Ustar),
        d.i_star,
        d.Uminus,
        d.Ustar,
    )


def central_descriptors(k):
    out = []
    everything = tuple(range(k))
    for i_star in everything:
        lead = (i_star + 1) % k
        for states in itertools.product("o-+", repeat=k):
            ucirc = tuple(i for i, s in zip(everything, states) if s == "o")
            uminus = tuple(i for i, s in zip(everything, states) if s == "-")
            allowed = []
            if lead in uminus and lead != i_star:
                allowed.append(lead)
            if i_star not in ucirc and i_star not in uminus:
                allowed.append(i_star)
            for size in range(len(allowed) + 1):
                for ustar in itertools.combinations(sorted(allowed), size):
                    out.append(
                        CentralPieceDescriptor(
                            i_star=i_star, Ucirc=ucirc, Uminus=uminus, Ustar=ustar
                        )
                    )
    return sorted(out, key=_sort_key)


def factor_cells(factor, side):
    """Cells of an arc on the 1/6 grid."""
    period = 2 * side
    out = [(2 * p) % period for p in range(factor.lo, factor.hi + 1)]
    out += [(2 * p + 1) % period for p in range(factor.lo, factor.hi)]
    return sorted(set(out))


def box_cells(box, side):
    lists = [factor_cells(f, side) for f in box.factors]
    return {tuple(sorted(c)) for c in itertools.product(*lists)}


def refined_cells(face_set, side):
    """The integer faces of ``face_set`` and all their faces, on the 1/6 grid."""
    out = set()
    for face in face_set.canonical:
        factors = []
        for c in face:
            v = 6 * (c // 2)
            factors.append(Factor(v, v + 6) if c % 2 else Factor.point(v))
        out |= box_cells(OrbitBox.single(factors), side)
    return out


def central_decomposition(params):
    """Pieces of X_{Z_k} in order, with the Euler increment each one adds."""
    params.require_odd("central_decomposition")
    k = params.k
    side = params.side
    seen = set()
    pieces = []
    mismatches = []
    for z, d in enumerate(central_descriptors(k), 1):
        box = central_box(d, k)
        cells = box_cells(box, side)
        fresh = cells - seen
        seen |= cells
        increment = sum((-1) ** sum(c % 2 for c in cell) * multinomial(cell) for cell in fresh)
        h = d.h(k)
        contacts = contact_groups(box, side)
        if increment != (-1) ** h * contacts.copies:
            mismatches.append(z)
            logger.debug(
                "central piece {} ({}): {} handles of index {}, cells give {}".format(
                    z, d.label(), contacts.copies, h, increment
                )
            )
        pieces.append(
            CentralPiece(
                z=z, descriptor=d, box=box, contacts=contacts, h=h, increment=increment
            )
        )
    faces = formula_XI(IndexSet.of(range(k), k), params)
    report = CentralReport(
        k=k,
        pieces=pieces,
        chi_measured=sum(p.increment for p in pieces),
        chi_cells=chi_cells(faces, params),
        first_full=all(p.descriptor.Ucirc == tuple(range(k)) for p in pieces[:k]),
        covers=seen == refined_cells(faces, side),
        mismatches=mismatches,
    )
    logger.info(
        "X_Z{}: {} pieces, chi from handles {}, from cells {}, {} pieces off by increment".format(
            k, len(pieces), report.chi_handles, report.chi_cells, len(mismatches)
        )
    )
    if report.chi_handles != report.chi_cells:
        logger.error(
            "X_Z{}: the index k - |Uo| - |U*| gives chi {}, the cells give {}".format(
                k, report.chi_handles, report.chi_cells
            )
        )
    return report
