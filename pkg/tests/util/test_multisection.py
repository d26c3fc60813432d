import os
import unittest

from util.constants import SLOW_TESTS_ENV
from util.multisection import (
    T4_CENTRAL,
    T4_PARAMS,
    T4_X01,
    IndexSet,
    build_piece,
    canonicalize_simple,
    formula_XI,
    multinomial,
    negative_handle_partition,
    negative_sum_decomposition,
    oracle_XI,
    t4_faces,
    verify_cover,
)
from util.torus_core import TorusParams


def simple_sets(k):
    out = []
    for mask in range(1, 2**k):
        index_set = IndexSet.of([i for i in range(k) if mask >> i & 1], k)
        if index_set.simple:
            out.append(index_set)
    return out


class TestIndexSet(unittest.TestCase):
    def test_reduces_and_sorts(self):
        index_set = IndexSet.of((7, 1, 1), 4)
        self.assertEqual(index_set.elements, (1, 3))
        self.assertTrue(index_set.proper)
        self.assertIn(5, index_set)

    def test_empty(self):
        with self.assertRaises(ValueError):
            IndexSet.of((), 3)

    def test_canonicalize(self):
        canonical, shift = canonicalize_simple((1, 3), 4)
        self.assertEqual(canonical.elements, (0, 2))
        self.assertEqual(shift, 1)
        self.assertFalse(IndexSet.of((1, 3), 4).simple)
        self.assertTrue(canonical.simple)

    def test_blocks(self):
        index_set = IndexSet.of((0, 1, 3), 5)
        self.assertEqual(index_set.blocks, ((0, 1), (3,)))
        self.assertEqual(index_set.mins, (0, 3))
        self.assertEqual(index_set.T, (0, 2))
        self.assertEqual(index_set.block_of(1), 0)

    def test_blocks_wrap(self):
        self.assertEqual(IndexSet.of((0, 1, 4), 5).blocks, ((4, 0, 1),))
        self.assertEqual(IndexSet.of(range(3), 3).blocks, ((0, 1, 2),))


class TestCover(unittest.TestCase):
    def test_three_torus(self):
        report = verify_cover(TorusParams.from_k(2))
        self.assertTrue(report.ok)
        self.assertEqual(report.sizes, [4, 4])

    def test_five_torus(self):
        report = verify_cover(TorusParams.from_k(3), threads=2)
        self.assertTrue(
            report.ok, "uncovered {} doubles {}".format(report.uncovered, report.doubles)
        )
        self.assertEqual(report.total, 243)
        self.assertEqual(report.sizes, [81, 81, 81])

    def test_seven_torus(self):
        report = verify_cover(TorusParams.from_k(4), threads=4)
        self.assertTrue(report.ok)
        self.assertEqual(report.sizes, [4096] * 4)

    def test_four_torus(self):
        report = verify_cover(T4_PARAMS)
        self.assertTrue(report.ok)
        self.assertEqual(report.total, 81)

    def test_unsupported(self):
        with self.assertRaises(ValueError):
            build_piece(TorusParams(k=4, n=6), 0)

    def test_cube_types(self):
        self.assertEqual(
            build_piece(TorusParams.from_k(2), 0).cube_types(),
            [(0, 0, 0), (0, 0, 1)],
        )


class TestIntersections(unittest.TestCase):
    def test_formula_matches_oracle(self):
        for k in (2, 3):
            params = TorusParams.from_k(k)
            for index_set in simple_sets(k):
                formula = formula_XI(index_set, params)
                oracle = oracle_XI(index_set, params)
                self.assertEqual(formula.dim, params.n + 1 - index_set.ell)
                self.assertTrue(oracle.exact_dim)
                self.assertEqual(
                    formula.canonical,
                    oracle.canonical,
                    "X_{} at k={}: formula {} oracle {}".format(
                        index_set, k, formula.labels(), oracle.labels()
                    ),
                )

    @unittest.skipUnless(os.environ.get(SLOW_TESTS_ENV), "builds the pieces of T^7")
    def test_formula_matches_oracle_seven_torus(self):
        params = TorusParams.from_k(4)
        for index_set in simple_sets(4):
            self.assertEqual(
                formula_XI(index_set, params).canonical,
                oracle_XI(index_set, params).canonical,
                "X_{} at k=4".format(index_set),
            )

    def test_non_simple(self):
        with self.assertRaises(ValueError):
            formula_XI(IndexSet.of((1, 2), 3), TorusParams.from_k(3))

    def test_concrete(self):
        faces = formula_XI(IndexSet.of((0, 1), 2), TorusParams.from_k(2))
        self.assertEqual(len(list(faces.concrete())), faces.concrete_count())

    def test_multinomial(self):
        self.assertEqual(multinomial((1, 1, 3)), 3)
        self.assertEqual(multinomial((0, 2, 4)), 6)

    def test_four_torus(self):
        x01 = oracle_XI(IndexSet.of((0, 1), 3), T4_PARAMS)
        self.assertEqual(x01.canonical, t4_faces(T4_X01).canonical)
        center = oracle_XI(IndexSet.of((0, 1, 2), 3), T4_PARAMS)
        self.assertEqual(center.canonical, t4_faces(T4_CENTRAL).canonical)


class TestNegativeExamples(unittest.TestCase):
    def test_count_partition(self):
        self.assertEqual(negative_handle_partition(TorusParams.from_k(2)), 2)
        self.assertLess(negative_handle_partition(TorusParams.from_k(3)), 4)

    def test_sum_slabs(self):
        self.assertEqual(negative_sum_decomposition(TorusParams.from_k(3)), 3)
        with self.assertRaises(ValueError):
            negative_sum_decomposition(TorusParams.from_k(2))


if __name__ == "__main__":
    unittest.main()
