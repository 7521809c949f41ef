import unittest
from random import Random
from fixtures import cube, cube_hda, glued_cubes, hollow_square, square
from hdakit.bisim import enumerate_executions
from hdakit.errors import ClassTooLarge, EndpointMismatch, FormatError, IndexOutOfRange
from hdakit.paths import Path, Step, START, adjacent_paths, adjacent_replace, all_liftings, canonical_lift, concat, congruence_class, \
    prefixes, underlying_path, validate_path
from hdakit.precubical import SCell, symmetrize


CUBE_PATH = "x:*** -3 x:**1 +3 z:***"


class TestPath(unittest.TestCase):

    def test_parse_and_format(self):
        p = Path.parse("b0 +1 x -2 a1")
        self.assertEqual(("b0", "x", "a1"), p.cells)
        self.assertEqual((Step(START, 1), Step.parse("-2")), p.steps)
        self.assertEqual("b0 +1 x -2 a1", str(p))
        self.assertEqual(2, p.length)
        self.assertEqual("x", p.higher(1))
        self.assertEqual("x", p.higher(2))
        with self.assertRaises(FormatError):
            Path.parse("v00 +1")
        with self.assertRaises(FormatError):
            Step.parse("*1")

    def test_validate(self):
        X = square()
        self.assertEqual([], validate_path(X, Path.parse("b0 +1 x -2 a1")))
        self.assertEqual([], validate_path(glued_cubes(), Path.parse(CUBE_PATH)))
        self.assertEqual(2, len(validate_path(X, Path.parse("b0 +2 x -1 a1"))))
        self.assertEqual(2, len(validate_path(X, Path.parse("a1 +2 x -1 b0"))))
        self.assertEqual(["step 1 (+3) exceeds the dimension of x"], validate_path(X, Path.parse("b0 +3 x")))
        self.assertEqual(["unknown cell q"], validate_path(X, Path.parse("q")))
        self.assertEqual(["path starts at a0 instead of the initial cell v00"], validate_path(X, Path.single("a0"), "v00"))

    def test_concat_and_prefixes(self):
        p, q = Path.parse("v00 +1 a0"), Path.parse("a0 +2 x")
        self.assertEqual(Path.parse("v00 +1 a0 +2 x"), concat(p, q))
        with self.assertRaises(EndpointMismatch):
            concat(q, p)
        self.assertEqual([Path.single("v00"), p, concat(p, q)], prefixes(concat(p, q)))
        self.assertEqual([Path.single("v00")], prefixes(Path.single("v00")))


class TestAdjacency(unittest.TestCase):

    def test_swapped_starts(self):
        X = square()
        p = Path.parse("v00 +1 a0 +2 x")
        q, rule = adjacent_replace(X, p, 1)
        self.assertEqual((Path.parse("v00 +1 b0 +1 x"), 1), (q, rule))
        self.assertEqual((p, 1), adjacent_replace(X, q, 1))

    def test_swapped_terminations(self):
        X = square()
        p = Path.parse("x -1 b1 -1 v11")
        q, rule = adjacent_replace(X, p, 1)
        self.assertEqual(2, rule)
        self.assertEqual(Path.parse("x -2 a1 -1 v11"), q)
        self.assertEqual((p, 2), adjacent_replace(X, q, 1))

    def test_start_before_termination(self):
        X = square()
        self.assertEqual((Path.parse("b0 -1 v01 +1 a1"), 3), adjacent_replace(X, Path.parse("b0 +1 x -2 a1"), 1))
        self.assertEqual((Path.parse("a0 -1 v10 +1 b1"), 4), adjacent_replace(X, Path.parse("a0 +2 x -1 b1"), 1))

    def test_stuck_patterns(self):
        X = square()
        self.assertIsNone(adjacent_replace(X, Path.parse("v00 +1 a0 -1 v10"), 1))
        self.assertIsNone(adjacent_replace(X, Path.parse("b0 -1 v01 +1 a1"), 1))
        with self.assertRaises(IndexOutOfRange):
            adjacent_replace(X, Path.parse("v00 +1 a0"), 1)

    def test_reverse_exchanges(self):
        X = square()
        self.assertEqual([Path.parse("b0 +1 x -2 a1")], adjacent_paths(X, Path.parse("b0 -1 v01 +1 a1"), 1))
        self.assertEqual([Path.parse("a0 +2 x -1 b1")], adjacent_paths(X, Path.parse("a0 -1 v10 +1 b1"), 1))
        self.assertEqual([], adjacent_paths(hollow_square(), Path.parse("b0 -1 v01 +1 a1"), 1))

    def test_adjacency_is_symmetric(self):
        X = square()
        for text in ("v00 +1 a0 +2 x", "x -1 b1 -1 v11", "b0 +1 x -2 a1", "a0 -1 v10 +1 b1"):
            p = Path.parse(text)
            for q in adjacent_paths(X, p, 1):
                self.assertIn(p, adjacent_paths(X, q, 1))
                self.assertEqual([], validate_path(X, q))


class TestCongruence(unittest.TestCase):

    def test_class_of_diagonal(self):
        cls = congruence_class(square(), Path.parse("v00 +1 a0 +2 x"))
        self.assertEqual([Path.parse("v00 +1 a0 +2 x"), Path.parse("v00 +1 b0 +1 x")], cls)

    def test_interleaving_path(self):
        p = Path.parse("v00 +1 a0 -1 v10 +1 b1 -1 v11")
        self.assertEqual([p], congruence_class(hollow_square(), p))
        self.assertEqual([Path.single("v00")], congruence_class(square(), Path.single("v00")))

    def test_full_run(self):
        cls = congruence_class(square(), Path.parse("v00 +1 a0 +2 x -1 b1 -1 v11"))
        self.assertEqual(4, len(cls))

    def test_cap(self):
        with self.assertRaises(ClassTooLarge):
            congruence_class(square(), Path.parse("v00 +1 a0 +2 x"), cap=1)


def exchange(X, p: Path, position: int):
    """The rule 1 or rule 2 neighbour of p at position, if any."""
    found = adjacent_replace(X, p, position)
    return None if found is None or found[1] not in (1, 2) else found[0]


class TestExchangeProperties(unittest.TestCase):

    def test_replacements_keep_endpoints(self):
        X = cube()
        rnd = Random(2024)
        for p in rnd.sample(enumerate_executions(cube_hda(), 6), 100):
            for position in range(1, p.length):
                found = adjacent_replace(X, p, position)
                if found is None:
                    continue
                q, rule = found
                self.assertEqual((p.first, p.last, p.length), (q.first, q.last, q.length))
                self.assertEqual([], validate_path(X, q))
                if rule in (1, 2):
                    self.assertEqual((p, rule), adjacent_replace(X, q, position))

    def test_classes_partition_paths(self):
        X = cube()
        for p in enumerate_executions(cube_hda(), 5):
            cls = set(congruence_class(X, p))
            for q in cls:
                self.assertEqual(cls, set(congruence_class(X, q)), str(q))

    def test_congruent_paths_share_exchanges(self):
        X = cube()
        for p in enumerate_executions(cube_hda(), 5):
            for q in congruence_class(X, p):
                for position in range(1, p.length):
                    self.assertEqual(exchange(X, p, position) is None, exchange(X, q, position) is None, str(q))

    def test_directed_rules_depend_on_representative(self):
        X = cube()
        p, q = Path.parse("000 +1 *00 +2 **0 -1 1*0"), Path.parse("000 +1 0*0 +1 **0 -1 1*0")
        self.assertEqual((q, 1), adjacent_replace(X, p, 1))
        self.assertEqual((Path.parse("000 +1 *00 -1 100 +1 1*0"), 4), adjacent_replace(X, p, 2))
        self.assertIsNone(adjacent_replace(X, q, 2))


class TestLiftings(unittest.TestCase):

    def test_square_path(self):
        X = square()
        p = Path.parse("b0 +1 x -2 a1")
        liftings = all_liftings(X, p)
        self.assertEqual(2, len(liftings))
        SX = symmetrize(X)
        for q in liftings:
            self.assertEqual([], validate_path(SX, q))
            self.assertEqual(p, underlying_path(SX, q))
        self.assertEqual({SCell.parse("[1,2].x"), SCell.parse("[2,1].x")}, {q.cells[1] for q in liftings})

    def test_low_dimensional_path(self):
        self.assertEqual(1, len(all_liftings(square(), Path.parse("v00 +1 a0 -1 v10 +1 b1"))))

    def test_cube_path(self):
        X = glued_cubes()
        liftings = all_liftings(X, Path.parse(CUBE_PATH))
        self.assertEqual(18, len(liftings))
        self.assertEqual(18, len(set(liftings)))
        uniform = [q for q in liftings if q.steps[0].index == q.steps[1].index]
        self.assertEqual(6, len(uniform))
        SX = symmetrize(X)
        for q in liftings:
            self.assertEqual(Path.parse(CUBE_PATH), underlying_path(SX, q))

    def test_canonical_lift(self):
        X = square()
        q = canonical_lift(X, Path.parse("v00 +1 a0 +2 x"))
        self.assertEqual(Path.parse("[].v00 +1 [1].a0 +2 [1,2].x", symmetrize(X)), q)
        self.assertEqual([], validate_path(symmetrize(X), q))


if __name__ == '__main__':
    unittest.main()
