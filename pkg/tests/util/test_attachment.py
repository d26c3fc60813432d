import os
import unittest
from dataclasses import replace

from util.attachment import (
    BreakpointGrid,
    group_boundary,
    sphere_euler,
    verify_attachment,
)
from util.constants import SLOW_TESTS_ENV
from util.handle_decomposition import (
    CLASS_A,
    CLASS_B,
    decompose,
    handle_index,
    parity_classify_group,
)
from util.multisection import T4_PARAMS, IndexSet
from util.torus_core import Factor, TorusParams


class TestGrid(unittest.TestCase):
    def setUp(self):
        self.grid = BreakpointGrid([Factor(0, 6), Factor(6, 12)], 12)

    def test_cells(self):
        self.assertEqual(self.grid.points, [0, 6])
        self.assertEqual(self.grid.factor_cells(Factor(0, 6)), frozenset({0, 1, 2}))
        self.assertEqual(self.grid.factor_cells(Factor(6, 12)), frozenset({0, 2, 3}))

    def test_boundary(self):
        cells = {(c,) for c in self.grid.factor_cells(Factor(0, 6))}
        self.assertEqual(group_boundary(cells, 1, self.grid), frozenset({(0,), (2,)}))
        self.assertEqual(group_boundary({(0,)}, 0, self.grid), frozenset())

    def test_sphere_euler(self):
        self.assertEqual([sphere_euler(h) for h in range(4)], [0, 2, 0, 2])


class TestCertificates(unittest.TestCase):
    def certify(self, index_set, params):
        records = decompose(index_set, params)
        certificates = verify_attachment(records, params, threads=2)
        self.assertEqual(len(certificates), len(records))
        for cert in certificates:
            self.assertTrue(
                cert.ok,
                "piece {} of X_{}: {}".format(cert.z, index_set, cert.violations[:3]),
            )
        return certificates

    def test_three_torus(self):
        certificates = self.certify(IndexSet.of((0,), 2), TorusParams.from_k(2))
        self.assertEqual(certificates[0].attaching, 0)
        self.assertGreater(certificates[1].attaching, 0)

    def test_five_torus(self):
        params = TorusParams.from_k(3)
        self.certify(IndexSet.of((0,), 3), params)
        self.certify(IndexSet.of((0, 1), 3), params)

    def test_four_torus(self):
        self.certify(IndexSet.of((0, 1), 3), T4_PARAMS)

    @unittest.skipUnless(os.environ.get(SLOW_TESTS_ENV), "slow lattice sweep")
    def test_seven_torus(self):
        params = TorusParams.from_k(4)
        for elements in ((0,), (0, 1), (0, 2), (0, 1, 2)):
            self.certify(IndexSet.of(elements, 4), params)

    def test_single_piece(self):
        params = TorusParams.from_k(2)
        records = decompose(IndexSet.of((0,), 2), params)
        certificates = verify_attachment(records, params, z=2)
        self.assertEqual([c.z for c in certificates], [2])

    def test_seven_torus_piece(self):
        params = TorusParams.from_k(4)
        records = decompose(IndexSet.of((0, 2), 4), params)
        (cert,) = verify_attachment(records, params, z=2, threads=2)
        self.assertTrue(cert.ok, cert.violations[:3])
        self.assertEqual(cert.attaching_chi, sphere_euler(records[1].h))

    def test_dimension_limit(self):
        with self.assertRaises(ValueError):
            verify_attachment([], TorusParams.from_k(5))


class TestPointClasses(unittest.TestCase):
    def setUp(self):
        self.params = TorusParams.from_k(4)
        self.index_set = IndexSet.of((0, 1, 2), 4)
        self.records = decompose(self.index_set, self.params, limit=2)

    def test_parity_rule_marks_an_attaching_point(self):
        # V- empty in the block of i* = 0; the point 1 sits at the end of [1/2, 1]
        record = self.records[1]
        d = record.descriptor
        self.assertEqual((d.J, d.i_star, d.Vminus), ((), 0, ()))
        self.assertEqual(record.classes, (CLASS_A, CLASS_B))
        self.assertEqual((record.h, record.glue_to), (1, (1,)))
        parity = tuple(
            parity_classify_group(g, d, self.index_set) for g in record.rep.groups
        )
        self.assertEqual(parity, (CLASS_B, CLASS_B))
        self.assertEqual(handle_index(record.rep, parity), 0)

    def test_certificate_rejects_parity_classes(self):
        (cert,) = verify_attachment(self.records, self.params, z=2)
        self.assertTrue(cert.ok, cert.violations[:3])
        record = self.records[1]
        parity = tuple(
            parity_classify_group(g, record.descriptor, self.index_set)
            for g in record.rep.groups
        )
        records = [self.records[0], replace(record, classes=parity, h=0)]
        (cert,) = verify_attachment(records, self.params, z=2)
        self.assertFalse(cert.ok)
        self.assertIn("earlier", [v[0] for v in cert.violations])


if __name__ == "__main__":
    unittest.main()
