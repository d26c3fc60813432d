import itertools
import unittest
from fractions import Fraction

from util.torus_core import (
    Factor,
    OrbitBox,
    TorusParams,
    cube_faces,
    cutoff_indices,
    face_label,
    in_piece,
    in_piece_direct,
    monotonic_sort,
    orbit_intersection,
    orbit_intersection_brute,
    periodic_extend,
    piece_bounds,
    piece_orbit,
    scaled,
)


class TestTorusParams(unittest.TestCase):
    def test_from_k(self):
        params = TorusParams.from_k(3)
        self.assertEqual(params.n, 5)
        self.assertEqual(params.side, 18)
        self.assertTrue(params.odd)

    def test_four_torus(self):
        params = TorusParams.from_n(4)
        self.assertEqual(params.k, 3)
        self.assertFalse(params.odd)
        self.assertEqual(piece_bounds(params), (1, 1, 2, 3))

    def test_invalid(self):
        with self.assertRaises(ValueError):
            TorusParams.from_k(1)
        with self.assertRaises(ValueError):
            TorusParams.from_n(6)
        with self.assertRaises(ValueError):
            TorusParams(k=3, n=7)
        with self.assertRaises(ValueError):
            TorusParams.from_n(4).require_odd("test")


class TestScaled(unittest.TestCase):
    def test_lattice(self):
        self.assertEqual(scaled(Fraction(1, 3)), 2)
        self.assertEqual(scaled(2), 12)
        with self.assertRaises(ValueError):
            scaled(Fraction(1, 4))


class TestFactor(unittest.TestCase):
    def test_overlap(self):
        side = 12
        self.assertEqual(Factor(0, 6).overlap_dim(Factor(6, 12), side), 0)
        self.assertEqual(Factor(0, 6).overlap_dim(Factor(3, 9), side), 1)
        self.assertIsNone(Factor(0, 6).overlap_dim(Factor(7, 8), 18))

    def test_contains_wraps(self):
        self.assertTrue(Factor(6, 12).contains(Factor.point(0), 12))
        self.assertFalse(Factor(0, 6).contains(Factor(3, 9), 12))

    def test_empty(self):
        with self.assertRaises(ValueError):
            Factor(3, 2)

    def test_label(self):
        self.assertEqual(Factor(3, 6).label(), "[1/2,1]")
        self.assertEqual(Factor.point(12).label(), "2")


class TestOrbitBox(unittest.TestCase):
    def test_piece_orbit(self):
        box = piece_orbit(TorusParams.from_k(2), 0)
        self.assertEqual(box.label(), "<<[0,1]^2[0,2]>>")
        self.assertEqual(box.dim, 3)
        self.assertEqual(box.copies, 1)

    def test_copies(self):
        a, g = Factor(0, 12), Factor(24, 30)
        box = OrbitBox(groups=((a, a, a, a), (g,)))
        self.assertEqual(box.copies, 5)
        self.assertEqual(box.dims, (4, 1))

    def test_points_intersection(self):
        params = TorusParams.from_k(2)
        alpha = OrbitBox.single([Factor(0, 6)] * 3)
        beta = OrbitBox.single([Factor(6, 12)] * 3)
        self.assertEqual(orbit_intersection(alpha, beta, params), 0)
        self.assertEqual(orbit_intersection_brute(alpha, beta, params), 0)

    def test_pieces_meet_in_codimension_one(self):
        params = TorusParams.from_k(2)
        x0, x1 = piece_orbit(params, 0), piece_orbit(params, 1)
        self.assertEqual(orbit_intersection(x0, x1, params), 2)
        self.assertEqual(orbit_intersection_brute(x0, x1, params), 2)

    def test_assignment_matches_brute_force(self):
        params = TorusParams.from_k(3)
        factors = [Factor(0, 6), Factor(6, 6), Factor(3, 12), Factor(12, 18), Factor(9, 9)]
        single = OrbitBox.single(factors)
        for r in range(params.k):
            other = piece_orbit(params, r)
            self.assertEqual(
                orbit_intersection(single, other, params),
                orbit_intersection_brute(single, other, params),
                "assignment and brute force disagree for X_{}".format(r),
            )

    def test_grouped_boxes(self):
        params = TorusParams.from_k(3)
        a = OrbitBox(
            groups=(
                (Factor(0, 6), Factor(6, 6)),
                (Factor(6, 12), Factor(12, 18), Factor(12, 12)),
            )
        )
        b = OrbitBox(
            groups=(
                (Factor(3, 6),),
                (Factor(6, 9), Factor(6, 6)),
                (Factor(12, 18), Factor(15, 15)),
            )
        )
        self.assertEqual(
            orbit_intersection(a, b, params), orbit_intersection_brute(a, b, params)
        )
        self.assertEqual(
            orbit_intersection(a, b, params),
            orbit_intersection(OrbitBox.single(a.factors), b, params),
        )
        self.assertEqual(orbit_intersection(a, a, params), a.dim)

    def test_mismatched_dimensions(self):
        params = TorusParams.from_k(2)
        with self.assertRaises(ValueError):
            orbit_intersection(
                OrbitBox.single([Factor(0, 6)] * 2), piece_orbit(params, 0), params
            )


class TestMembership(unittest.TestCase):
    def setUp(self):
        self.params = TorusParams.from_k(2)

    def test_off_diagonal_point(self):
        self.assertTrue(in_piece((1, 4, 9), 0, self.params))
        self.assertFalse(in_piece((1, 4, 9), 1, self.params))

    def test_diagonal(self):
        self.assertTrue(in_piece((0, 0, 0), 0, self.params))
        self.assertTrue(in_piece((6, 6, 6), 0, self.params))
        self.assertFalse(in_piece((7, 7, 7), 0, self.params))

    def test_cutoff_matches_direct(self):
        side = self.params.side
        for x in itertools.product(range(side), repeat=3):
            for r in range(self.params.k):
                self.assertEqual(
                    in_piece(x, r, self.params),
                    in_piece_direct(x, r, self.params),
                    "membership of {} in X_{} differs".format(x, r),
                )

    def test_cover(self):
        params = TorusParams.from_k(3)
        for x in itertools.product(range(0, params.side, 3), repeat=params.n):
            self.assertTrue(
                any(in_piece(x, r, params) for r in range(params.k)),
                "{} lies in no piece".format(x),
            )

    def test_cutoff_indices(self):
        self.assertEqual(cutoff_indices((1, 4, 9), 0, self.params), (0, 0))
        self.assertEqual(cutoff_indices((1, 4, 9), 1, self.params), (2, 2))
        with self.assertRaises(ValueError):
            cutoff_indices((3, 3, 3), 0, self.params)

    def test_periodic_extend(self):
        self.assertEqual(periodic_extend((1, 4, 9), 1, self.params), 1)
        self.assertEqual(periodic_extend((1, 4, 9), 4, self.params), 13)
        self.assertEqual(periodic_extend((1, 4, 9), 9, self.params), 33)

    def test_monotonic_sort(self):
        out, perm, diagonal = monotonic_sort((9, 1, 4))
        self.assertEqual(out, (1, 4, 9))
        self.assertEqual(perm, (1, 2, 0))
        self.assertFalse(diagonal)
        self.assertEqual(monotonic_sort((1, 4, 9))[1], (0, 1, 2))

    def test_monotonic_sort_diagonal(self):
        out, perm, diagonal = monotonic_sort((7, 7, 7))
        self.assertEqual((out, perm), ((7, 7, 7), (0, 1, 2)))
        self.assertTrue(diagonal)
        self.assertFalse(monotonic_sort((7, 7, 8))[2])


class TestFaces(unittest.TestCase):
    def test_counts(self):
        self.assertEqual(len(cube_faces((0, 0, 0), 3, 2)), 1)
        self.assertEqual(len(cube_faces((0, 0, 0), 2, 2)), 6)
        self.assertEqual(len(cube_faces((0, 0, 0), 0, 2)), 8)
        with self.assertRaises(ValueError):
            cube_faces((0, 0, 0), 4, 2)

    def test_wraps(self):
        # the far vertex of the last unit edge wraps to 0
        self.assertIn((0,), cube_faces((1,), 0, 2))

    def test_label(self):
        self.assertEqual(face_label((1, 0)), "[0,1]0")


if __name__ == "__main__":
    unittest.main()
