import unittest

from click.testing import CliRunner

from engine.verify import simple_proper_sets, verify
from util.constants import EXIT_CONFIG, EXIT_FAIL, EXIT_PASS


class TestVerify(unittest.TestCase):
    def setUp(self):
        self.runner = CliRunner()

    def invoke(self, args):
        return self.runner.invoke(verify, args)

    def test_cover(self):
        result = self.invoke(["--k", "3", "--suite", "cover"])
        self.assertEqual(result.exit_code, EXIT_PASS, result.output)
        self.assertIn("243 cubes partitioned 81/81/81", result.output)

    def test_three_torus(self):
        result = self.invoke(["--k", "2"])
        self.assertEqual(result.exit_code, EXIT_PASS, result.output)
        self.assertNotIn("False", result.output)

    def test_five_torus_symbolic(self):
        result = self.invoke(
            ["--k", "3", "--suite", "xi,identities,negative,efficiency,euler,t4"]
        )
        self.assertEqual(result.exit_code, EXIT_PASS, result.output)

    def test_central_index_formula(self):
        result = self.invoke(["--k", "3", "--suite", "central"])
        self.assertEqual(result.exit_code, EXIT_FAIL, result.output)
        self.assertIn("chi from handles -30 (cells 0)", result.output)

    def test_exhaustive_three_torus(self):
        result = self.invoke(
            ["--k", "2", "--depth", "exhaustive", "--suite", "membership,attachment"]
        )
        self.assertEqual(result.exit_code, EXIT_PASS, result.output)
        self.assertIn("1728 points", result.output)

    def test_csv(self):
        result = self.invoke(["--k", "2", "--suite", "identities", "--output-format", "csv"])
        self.assertEqual(result.exit_code, EXIT_PASS, result.output)
        self.assertTrue(result.output.startswith("suite,I,ok,detail"))

    def test_single_index_set(self):
        result = self.invoke(["--k", "3", "--suite", "xi", "--I", "1,2"])
        self.assertEqual(result.exit_code, EXIT_PASS, result.output)
        self.assertIn("{0,1}", result.output)

    def test_large_k_skips_oracles(self):
        result = self.invoke(["--k", "5", "--suite", "xi,identities"])
        self.assertEqual(result.exit_code, EXIT_PASS, result.output)
        self.assertIn("skipped", result.output)

    def test_config_errors(self):
        self.assertEqual(self.invoke(["--k", "1"]).exit_code, EXIT_CONFIG)
        self.assertEqual(self.invoke(["--suite", "nope"]).exit_code, EXIT_CONFIG)
        self.assertEqual(
            self.invoke(["--k", "5", "--depth", "exhaustive"]).exit_code, EXIT_CONFIG
        )

    def test_simple_proper_sets(self):
        self.assertEqual(
            [s.elements for s in simple_proper_sets(4)],
            [(0,), (0, 1), (0, 2), (0, 1, 2)],
        )


if __name__ == "__main__":
    unittest.main()
