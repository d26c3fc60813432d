"""Exact counting identities for the subcubes of the pieces.

All counts are Python integers; binomials use the convention that
binom(a, b) = 0 for b < 0 or b > a.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache

import networkx as nx
import sympy
from scipy.special import comb

from util.log_handler import logger
from util.multisection import build_piece
from util.torus_core import TorusParams


def binom(a, b):
    return int(comb(a, b, exact=True))


@dataclass(frozen=True)
class Combo1:
    nested_sum: int
    k_power: int
    spanning_trees: int

    @property
    def ok(self):
        return self.nested_sum == self.k_power == self.spanning_trees


@dataclass(frozen=True)
class Combo2:
    lhs: int
    mid: int
    rhs: int

    @property
    def ok(self):
        return self.lhs == self.mid == self.rhs


def _require_k(k):
    if k < 2:
        raise ValueError("k must be at least 2, got {}".format(k))


def nested_sum(k):
    """Subcubes of X_0 counted by i_s = #{r : w_r = s}, with the constraint
    i_0 + ... + i_s >= 2s + 2 for s = 0..k-2."""
    n = 2 * k - 1

    @lru_cache(maxsize=None)
    def rec(s, used):
        if s == k - 1:
            return 1
        rest = n - used
        return sum(
            binom(rest, i) * rec(s + 1, used + i)
            for i in range(max(0, 2 * s + 2 - used), rest + 1)
        )

    return rec(0, 0)


def constrained_types(k):
    """Cube types of X_0: tuples (i_0, ..., i_{k-1}) under the same constraint."""
    n = 2 * k - 1

    @lru_cache(maxsize=None)
    def rec(s, used):
        if s == k - 1:
            return 1
        return sum(
            rec(s + 1, used + i) for i in range(max(0, 2 * s + 2 - used), n - used + 1)
        )

    return rec(0, 0)


def unconstrained_types(k):
    n = 2 * k - 1

    @lru_cache(maxsize=None)
    def rec(s, used):
        if s == k - 1:
            return 1
        return sum(rec(s + 1, used + i) for i in range(n - used + 1))

    return rec(0, 0)


def spanning_tree_count(k):
    """Spanning trees of K_{k,k} by the matrix-tree theorem, exactly."""
    graph = nx.complete_bipartite_graph(k, k)
    laplacian = nx.laplacian_matrix(graph).toarray()
    minor = sympy.Matrix(laplacian)[1:, 1:]
    return int(minor.det(method="bareiss"))


def combo1(k):
    _require_k(k)
    n = 2 * k - 1
    out = Combo1(
        nested_sum=nested_sum(k),
        k_power=k ** (n - 1),
        spanning_trees=spanning_tree_count(k),
    )
    logger.debug("combo1(k={}): {}".format(k, out))
    return out


def combo2(k):
    _require_k(k)
    out = Combo2(
        lhs=k * constrained_types(k),
        mid=unconstrained_types(k),
        rhs=binom(3 * k - 2, k - 1),
    )
    logger.debug("combo2(k={}): {}".format(k, out))
    return out


def enumerated_types(k):
    """Cube types of T^n by direct enumeration of multisets."""
    return sum(1 for _ in itertools.combinations_with_replacement(range(k), 2 * k - 1))


def piece_types(k):
    """Cube types occurring in the constructed X_0."""
    return len(build_piece(TorusParams.from_k(k), 0).cube_types())
