import unittest

from util.handle_decomposition import (
    CLASS_A,
    CLASS_B,
    FactorShapeError,
    block_v_order,
    bound_check,
    chi_handles,
    decompose,
    efficiency_report,
    enumerate_pieces,
    euler_genus_report,
    istar_candidates,
    j_candidates,
    parity_classify_group,
    pseudomanifold_check,
    u_disjoint_violations,
    u_state_order,
    uv_sets,
    v_order_parity_violations,
    v_order_set_violations,
    validate_group,
)
from util.multisection import T4_PARAMS, IndexSet
from util.torus_core import Factor, TorusParams


class TestOrders(unittest.TestCase):
    def test_reflected_order(self):
        order = block_v_order((0, 1, 2), 5, {1, 2})
        self.assertEqual(
            order,
            [frozenset(), frozenset({1}), frozenset({1, 2}), frozenset({2})],
        )

    def test_star_block_order(self):
        order = block_v_order((0, 1, 2, 3), 0, {1, 3})
        self.assertEqual(
            order,
            [frozenset({1}), frozenset(), frozenset({1, 3}), frozenset({3})],
        )

    def test_order_laws(self):
        self.assertEqual(v_order_parity_violations(), [])
        self.assertEqual(v_order_set_violations(), [])

    def test_u_states(self):
        index_set = IndexSet.of((0, 1, 2, 3), 5)
        self.assertEqual(
            u_state_order(index_set, 0, (1,)),
            [((1,), ()), ((), (1,)), ((), ())],
        )

    def test_u_states_lexicographic(self):
        index_set = IndexSet.of((0, 1, 2, 3, 5), 7)
        self.assertEqual(
            u_state_order(index_set, 5, (1, 2)),
            [
                ((1, 2), ()),
                ((1,), ()),
                ((1,), (2,)),
                ((2,), ()),
                ((2,), (1,)),
                ((), ()),
                ((), (1,)),
                ((), (2,)),
                ((), (1, 2)),
            ],
        )

    def test_larger_middle_sets_first(self):
        # rows 1 and 12 of the T92 reference table
        pieces = enumerate_pieces(IndexSet.of((0, 1, 2, 3), 5), limit=12)
        first, twelfth = pieces[0], pieces[11]
        self.assertEqual((first.U, first.V), ((2,), (1, 3)))
        self.assertEqual((first.Vminus, first.Ucirc, first.Uminus), ((1,), (2,), ()))
        self.assertEqual((twelfth.Vminus, twelfth.Ucirc, twelfth.Uminus), ((3,), (), ()))

    def test_j_candidates(self):
        index_set = IndexSet.of((0, 1, 3), 5)
        self.assertEqual(j_candidates(index_set), [(), (0,), (3,), (0, 3)])
        with self.assertRaises(ValueError):
            j_candidates(index_set, [[], [0]])

    def test_istar_candidates(self):
        index_set = IndexSet.of((0, 1, 3), 5)
        self.assertEqual(istar_candidates(index_set), [0, 3, 1])
        self.assertEqual(istar_candidates(index_set, [0, 1, 3]), [0, 1, 3])
        with self.assertRaises(ValueError):
            istar_candidates(index_set, [0, 1])


class TestPieces(unittest.TestCase):
    def test_uv_sets(self):
        index_set = IndexSet.of((0, 1, 2, 3), 5)
        self.assertEqual(uv_sets(index_set, (), 0), ((2,), (1, 3)))
        self.assertEqual(uv_sets(index_set, (), 2), ((1,), ()))

    def test_requires_proper_simple(self):
        with self.assertRaises(ValueError):
            enumerate_pieces(IndexSet.of((0, 1), 2))
        with self.assertRaises(ValueError):
            enumerate_pieces(IndexSet.of((1, 2), 4))

    def test_limit(self):
        pieces = enumerate_pieces(IndexSet.of((0, 1), 3), limit=3)
        self.assertEqual(len(pieces), 3)

    def test_group_shapes(self):
        side = 24
        self.assertEqual(validate_group((Factor(0, 6), Factor(0, 12)), side), "C1")
        self.assertEqual(validate_group((Factor.point(0), Factor(0, 6)), side), "C2")
        self.assertEqual(
            validate_group((Factor.point(6), Factor(0, 6), Factor(6, 12)), side), "C3"
        )
        with self.assertRaises(FactorShapeError):
            validate_group((Factor.point(0), Factor.point(6)), side)


class TestThreeTorus(unittest.TestCase):
    def setUp(self):
        self.params = TorusParams.from_k(2)
        self.records = decompose(IndexSet.of((0,), 2), self.params)

    def test_records(self):
        self.assertEqual([r.h for r in self.records], [0, 1])
        self.assertEqual([r.glue_to for r in self.records], [(), (1,)])
        self.assertEqual([r.copies for r in self.records], [1, 3])
        self.assertEqual(self.records[1].classes.count(CLASS_A), 1)
        self.assertEqual(self.records[0].classes, (CLASS_B,))

    def test_euler(self):
        self.assertEqual(chi_handles(self.records), -2)
        report = euler_genus_report(IndexSet.of((0,), 2), self.params)
        self.assertTrue(report.ok)
        self.assertEqual(report.genus, 3)
        self.assertTrue(report.connected)

    def test_efficiency(self):
        report = efficiency_report(self.params)
        self.assertEqual(report.genus, 3)
        self.assertTrue(report.ok)

    def test_pseudomanifold(self):
        self.assertTrue(pseudomanifold_check(self.params).ok)


class TestFiveTorus(unittest.TestCase):
    def setUp(self):
        self.params = TorusParams.from_k(3)

    def test_genus(self):
        report = euler_genus_report(IndexSet.of((0,), 3), self.params, threads=2)
        self.assertTrue(report.ok, "chi {} != {}".format(report.chi_handles, report.chi_cells))
        self.assertEqual(report.genus, 5)

    def test_pairs(self):
        index_set = IndexSet.of((0, 1), 3)
        records = decompose(index_set, self.params)
        self.assertEqual(u_disjoint_violations(records, self.params), [])
        bound = bound_check({index_set: records})
        self.assertTrue(bound.ok)
        self.assertTrue(euler_genus_report(index_set, self.params).ok)

    def test_pseudomanifold(self):
        self.assertTrue(pseudomanifold_check(self.params).ok)


class TestFourTorus(unittest.TestCase):
    def test_pair(self):
        index_set = IndexSet.of((0, 1), 3)
        records = decompose(index_set, T4_PARAMS)
        self.assertEqual([r.h for r in records], [0, 1, 1])
        self.assertEqual([r.copies for r in records], [1, 6, 4])
        report = euler_genus_report(index_set, T4_PARAMS)
        self.assertEqual(report.handle_counts, {0: 1, 1: 10})
        self.assertEqual(report.genus, 10)
        self.assertTrue(report.ok)

    def test_unknown_set(self):
        with self.assertRaises(ValueError):
            decompose(IndexSet.of((0, 2), 3), T4_PARAMS)


if __name__ == "__main__":
    unittest.main()
