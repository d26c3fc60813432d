import json
import os
import tempfile
import unittest

from util.constants import SLOW_TESTS_ENV, table_columns
from util.golden import (
    available,
    compare,
    emit,
    golden_records,
    load_golden,
    records_frame,
)
from util.torus_core import OrbitBox, orbit_intersection_brute

# tables with n <= 7 reproduce in seconds
FAST_TABLES = ["T3X0", "T4X0", "T4X01", "T5X0", "T5X01", "T7X0", "T7X01", "T7X02", "T7X012"]
SLOW_TABLES = ["T91", "T92", "T11", "T13", "T15"]


class TestGoldenTables(unittest.TestCase):
    def reproduce(self, name):
        table = load_golden(name)
        records = golden_records(table, threads=2)
        diff = compare(records, table)
        self.assertTrue(diff.ok, "\n".join(diff.diffs))

    def test_available(self):
        self.assertEqual(sorted(FAST_TABLES + SLOW_TABLES), available())

    def test_fast_tables(self):
        for name in FAST_TABLES:
            with self.subTest(table=name):
                self.reproduce(name)

    @unittest.skipUnless(os.environ.get(SLOW_TESTS_ENV), "large handle tables")
    def test_slow_tables(self):
        for name in SLOW_TABLES:
            with self.subTest(table=name):
                self.reproduce(name)

    def test_prefix(self):
        table = load_golden("T13")
        self.assertTrue(table.prefix)
        self.assertEqual(table.limit, len(table.rows))
        self.assertIsNone(load_golden("T11").limit)

    def test_unknown(self):
        with self.assertRaises(ValueError):
            load_golden("T2X0")

    def test_compare_reports_diffs(self):
        table = load_golden("T3X0")
        records = golden_records(table)
        diff = compare(records[:1], table)
        self.assertFalse(diff.ok)
        self.assertIn("1 rows computed, 2 expected", diff.diffs[0])


class TestErrata(unittest.TestCase):
    def setUp(self):
        self.table = load_golden("T7X012")

    def test_corrected_rows(self):
        rows = {z: glue for z, _, glue in self.table.rows}
        self.assertEqual(rows[10], (2, 6, 8, 9))
        self.assertEqual(rows[11], (3, 6, 7, 9))
        self.assertEqual(rows[12], (4, 6, 8, 10, 11))
        printed = {z: glue for z, _, glue in self.table.printed_rows()}
        self.assertEqual(printed[12], (4, 6, 8))
        self.assertEqual(printed[13], rows[13])

    def test_added_contacts_have_full_dimension(self):
        records = golden_records(self.table, threads=2)
        params = self.table.params
        target = params.n - len(self.table.index_set)
        for e in self.table.errata:
            rep = records[e["z"] - 1].rep
            for w in e["missing"]:
                other = OrbitBox.single(records[w - 1].rep.factors)
                self.assertEqual(
                    orbit_intersection_brute(rep, other, params),
                    target,
                    "z={} w={}".format(e["z"], w),
                )

    def test_other_tables_have_no_errata(self):
        self.assertEqual(load_golden("T7X02").errata, ())


class TestEmit(unittest.TestCase):
    def setUp(self):
        self.frame = records_frame(golden_records(load_golden("T3X0")))

    def test_columns(self):
        self.assertEqual(list(self.frame.columns), table_columns)
        self.assertEqual(list(self.frame["h"]), [0, 1])
        self.assertEqual(list(self.frame["glue_to"]), ["-", "1"])

    def test_csv(self):
        text = emit(self.frame, "csv")
        self.assertTrue(text.startswith(",".join(table_columns)))

    def test_json_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "table.json")
            text = emit(self.frame, "json", path)
            with open(path) as f:
                self.assertEqual(f.read(), text)
            rows = json.loads(text)
            self.assertEqual([row["z"] for row in rows], [1, 2])


if __name__ == "__main__":
    unittest.main()
