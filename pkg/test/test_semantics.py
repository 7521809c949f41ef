import unittest
from random import Random
from fixtures import ba_square, ba_square_hda, cube_hda, glued_cubes, square, square_hda
from hdakit.bisim import enumerate_executions
from hdakit.errors import LabelMismatch, NotAnExecution, NotIsomorphic
from hdakit.ipomset import Ipomset, decompose_discrete, is_interval, iso, same_ipomset
from hdakit.paths import Path, all_liftings, canonical_lift, congruence_class
from hdakit.precubical import HDA, symmetrize
from hdakit.semantics import STEvent, align_congruent, cell_events, ev, event_sequence, format_split_trace, format_st_trace, \
    matching_events, realize_iso_as_lifting, split_trace, st_trace, start_by_rewriting, transfer_trace


RUN = "v00 +1 a0 +2 x -1 b1 -1 v11"
CUBE_PATH = "x:*** -3 x:**1 +3 z:***"


class TestLabels(unittest.TestCase):

    def test_square_path(self):
        P = ev(square(), Path.parse("b0 +1 x -2 a1"))
        self.assertEqual(Ipomset((("e1", "b"), ("e2", "a")), frozenset(), ("e1",), ("e2",)), P)

    def test_single_cell(self):
        P = ev(square(), Path.single("x"))
        self.assertEqual(("e1", "e2"), P.src)
        self.assertEqual(P.src, P.tgt)

    def test_cube_path(self):
        P = ev(glued_cubes(), Path.parse(CUBE_PATH))
        self.assertEqual({"e1": "a", "e2": "b", "e3": "c", "e4": "d"}, P.labels)
        self.assertEqual(frozenset({("e3", "e4")}), P.lt)
        self.assertEqual(("e1", "e2", "e3"), P.src)
        self.assertEqual(("e1", "e2", "e4"), P.tgt)
        self.assertEqual(2, len(decompose_discrete(P)))

    def test_liftings_have_isomorphic_labels(self):
        X = glued_cubes()
        SX = symmetrize(X)
        P = ev(X, Path.parse(CUBE_PATH))
        for q in all_liftings(X, Path.parse(CUBE_PATH)):
            self.assertIsNotNone(iso(P, ev(SX, q)))

    def test_run(self):
        P = ev(square(), Path.parse(RUN))
        self.assertEqual(frozenset(), P.lt)
        self.assertEqual((), P.src)
        self.assertEqual((), P.tgt)

    def test_cell_events(self):
        p = Path.parse("v00 +1 a0 +2 x -1 b1")
        self.assertEqual([[], ["e1"], ["e1", "e2"], ["e2"]], cell_events(square(), p))
        self.assertEqual([("e1", 0), ("e2", 0), ("e1", 1)], event_sequence(square(), p))


class TestTraces(unittest.TestCase):

    def test_st_trace(self):
        X = square()
        self.assertEqual("a+ b+ a-@1 b-@2", format_st_trace(st_trace(X, Path.parse(RUN))))
        self.assertEqual([STEvent("a")], st_trace(X, Path.parse("v00 +1 a0")))
        self.assertEqual([], st_trace(X, Path.single("v00")))

    def test_split_trace(self):
        self.assertEqual("a+ b+ a- b-", format_split_trace(split_trace(square(), Path.parse(RUN))))

    def test_not_an_execution(self):
        with self.assertRaises(NotAnExecution):
            st_trace(square(), Path.parse("b0 +1 x"))

    def test_start_by_rewriting(self):
        X = square()
        for text in (RUN, "v00 +1 b0 +1 x -2 a1 -1 v11", "v00 +1 a0 -1 v10 +1 b1"):
            p = Path.parse(text)
            trace = st_trace(X, p)
            for j, event in enumerate(trace, 1):
                if not event.is_start:
                    self.assertEqual(event.start, start_by_rewriting(X, p, j))

    def test_traces_invariant_under_lifting(self):
        H = square_hda()
        SX = symmetrize(H.pcs)
        for p in enumerate_executions(H, 4):
            for q in all_liftings(H.pcs, p):
                self.assertEqual(st_trace(H.pcs, p), st_trace(SX, q))
                self.assertIsNotNone(iso(ev(H.pcs, p), ev(SX, q)))

    def test_random_executions_of_cubes(self):
        rnd = Random(4711)
        spaces = [(H, symmetrize(H.pcs)) for H in (cube_hda(), HDA(glued_cubes(), "x:000"), cube_hda("aab"))]
        executions = [(n, p) for n, (H, _) in enumerate(spaces) for p in enumerate_executions(H, 6)]
        checked = set()
        for _ in range(0, 1000):
            n, p = rnd.choice(executions)
            if (n, p) in checked:
                continue
            checked.add((n, p))
            X, SX = spaces[n][0].pcs, spaces[n][1]
            P, trace = ev(X, p), st_trace(X, p)
            self.assertTrue(is_interval(P), str(p))
            for q in all_liftings(X, p):
                self.assertEqual(trace, st_trace(SX, q), str(q))
                self.assertIsNotNone(iso(P, ev(SX, q)), str(q))
        self.assertTrue(len(checked) > 100)

    def test_congruent_paths_share_labels(self):
        X = square()
        for q in congruence_class(X, Path.parse(RUN)):
            self.assertIsNotNone(iso(ev(X, Path.parse(RUN)), ev(X, q)))


class TestCorrespondence(unittest.TestCase):

    def test_equal_traces_have_isomorphic_labels(self):
        X, Y = square_hda(), ba_square_hda()
        right = {}
        for q in enumerate_executions(Y, 4):
            right.setdefault(format_st_trace(st_trace(Y.pcs, q)), []).append(q)
        checked = 0
        for p in enumerate_executions(X, 4):
            for q in right.get(format_st_trace(st_trace(X.pcs, p)), []):
                self.assertIsNotNone(iso(ev(X.pcs, p), ev(Y.pcs, q)), str(p) + " | " + str(q))
                checked += 1
        self.assertTrue(checked > 0)

    def test_equal_traces_across_slot_orders(self):
        X, Y = cube_hda("abc"), cube_hda("cab")
        right = {}
        for q in enumerate_executions(Y, 6):
            right.setdefault(format_st_trace(st_trace(Y.pcs, q)), []).append(q)
        pairs = 0
        for p in enumerate_executions(X, 6):
            for q in right.get(format_st_trace(st_trace(X.pcs, p)), []):
                self.assertIsNotNone(iso(ev(X.pcs, p), ev(Y.pcs, q)), str(p) + " | " + str(q))
                pairs += 1
        # every run of the cube has exactly one counterpart
        self.assertEqual(271, pairs)

    def test_isomorphic_labels_with_different_traces(self):
        X = square()
        p, q = Path.parse(RUN), Path.parse("v00 +1 b0 +1 x -1 b1 -1 v11")
        self.assertEqual("a+ b+ a-@1 b-@2", format_st_trace(st_trace(X, p)))
        self.assertEqual("b+ a+ a-@2 b-@1", format_st_trace(st_trace(X, q)))
        self.assertIsNotNone(iso(ev(X, p), ev(X, q)))

    def test_matching_events(self):
        X = square()
        p = Path.parse("v00 +1 a0 +2 x")
        self.assertTrue(matching_events(X, p, X, p))
        self.assertTrue(matching_events(X, p, symmetrize(X), canonical_lift(X, p)))
        self.assertFalse(matching_events(X, p, X, Path.parse("v00 +1 a0")))
        self.assertFalse(matching_events(X, p, X, Path.parse("v00 +1 b0 +1 x")))

    def test_matching_events_give_equal_traces(self):
        H = square_hda()
        executions = enumerate_executions(H, 3)
        for p in executions:
            for q in executions:
                if matching_events(H.pcs, p, H.pcs, q):
                    self.assertEqual(st_trace(H.pcs, p), st_trace(H.pcs, q))

    def test_realize_row_permuted_label(self):
        X = glued_cubes()
        SX = symmetrize(X)
        p = Path.parse(CUBE_PATH)
        P = ev(X, p)
        permuted = Ipomset(P.events, P.lt, ("e2", "e1", "e3"), ("e2", "e1", "e4"))
        lifting = realize_iso_as_lifting(X, p, permuted)
        self.assertTrue(same_ipomset(permuted, ev(SX, lifting)))
        self.assertEqual(("b", "a", "c"), SX.labels(lifting.first))
        self.assertTrue(same_ipomset(P, ev(SX, realize_iso_as_lifting(X, p, P))))

    def test_realize_incoherent_interfaces(self):
        X = glued_cubes()
        p = Path.parse(CUBE_PATH)
        P = ev(X, p)
        with self.assertRaises(NotIsomorphic):
            realize_iso_as_lifting(X, p, Ipomset(P.events, P.lt, ("e2", "e1", "e3"), ("e1", "e2", "e4")))

    def test_align_identical(self):
        X = square()
        p = Path.parse(RUN)
        self.assertEqual(p, align_congruent(X, p, X, p))

    def test_align_swapped_starts(self):
        X = square()
        p, q = Path.parse("v00 +1 a0 +2 x"), Path.parse("v00 +1 b0 +1 x")
        self.assertEqual(q, align_congruent(X, p, X, q))

    def test_align_label_mismatch(self):
        X = square()
        with self.assertRaises(LabelMismatch):
            align_congruent(X, Path.parse("v00 +1 a0"), X, Path.parse("v00 +1 b0"))

    def test_transfer_identical(self):
        X = square()
        p = Path.parse(RUN)
        gamma = transfer_trace(X, p, X, p)
        self.assertEqual(st_trace(X, p), st_trace(X, gamma))

    def test_transfer_across_slot_orders(self):
        X, Y = square(), ba_square()
        p, q = Path.parse("v00 +1 a0 +2 x"), Path.parse("v00 +1 b0 +2 y")
        gamma = transfer_trace(X, p, Y, q)
        self.assertEqual(Path.parse("v00 +1 b0 +1 x"), gamma)
        self.assertEqual(st_trace(Y, q), st_trace(X, gamma))
        self.assertIn(gamma, congruence_class(X, p))

    def test_transfer_full_runs(self):
        X, Y = square(), ba_square()
        p = Path.parse(RUN)
        for q in (Path.parse("v00 +1 b0 +2 y -1 a1 -1 v11"), Path.parse("v00 +1 b0 +2 y -2 b1 -1 v11")):
            gamma = transfer_trace(X, p, Y, q)
            self.assertEqual(st_trace(Y, q), st_trace(X, gamma))

    def test_transfer_requires_isomorphic_labels(self):
        with self.assertRaises(NotIsomorphic):
            transfer_trace(square(), Path.parse("v00 +1 a0"), ba_square(), Path.parse("v00 +1 b0"))

    def test_transfer_against_congruence_classes(self):
        X, Y = cube_hda("abc"), cube_hda("cab")
        right = {}
        for q in enumerate_executions(Y, 5):
            right.setdefault(ev(Y.pcs, q).fingerprint(), []).append(q)
        pairs = 0
        for p in enumerate_executions(X, 5):
            label = ev(X.pcs, p)
            candidates = [q for q in right.get(label.fingerprint(), []) if iso(label, ev(Y.pcs, q)) is not None]
            if len(candidates) == 0:
                continue
            traces = [(gamma, st_trace(X.pcs, gamma)) for gamma in congruence_class(X.pcs, p)]
            for q in candidates:
                expected = st_trace(Y.pcs, q)
                found = {gamma for gamma, trace in traces if trace == expected}
                gamma = transfer_trace(X.pcs, p, Y.pcs, q)
                if gamma is None:
                    self.assertEqual(set(), found, str(p) + " | " + str(q))
                else:
                    self.assertIn(gamma, found, str(p) + " | " + str(q))
                pairs += 1
        self.assertTrue(pairs >= 100)


if __name__ == '__main__':
    unittest.main()
