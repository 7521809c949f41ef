import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Set, Tuple
import networkx as nx
from hdakit.errors import InvalidComplex, TheoremViolation
from hdakit.ipomset import iso
from hdakit.paths import START, TERMINATE, Path, Step, adjacent_paths, prefixes
from hdakit.precubical import HDA
from hdakit.semantics import ev, format_st_trace, st_trace


class BisimKind(Enum):
    ST = "st"
    HP = "hp"
    HHP = "hhp"


class SemanticsMode(Enum):
    TRACE = "trace"
    IPOMSET = "ipomset"


class Outcome(Enum):
    BISIMILAR = "Bisimilar"
    NOT_BISIMILAR = "NotBisimilar"
    BOUNDED_INCONCLUSIVE = "BoundedInconclusive"


@dataclass
class Verdict:
    outcome: Outcome
    kind: BisimKind
    mode: SemanticsMode
    bound: int
    witness: Optional[FrozenSet[Tuple[Path, Path]]] = None
    counterexample: Optional[Tuple[Path, Path, str]] = None

    @property
    def conclusive(self) -> bool:
        return self.outcome != Outcome.BOUNDED_INCONCLUSIVE

    def to_json(self) -> Dict:
        data = {"verdict": self.outcome.value, "kind": self.kind.value, "mode": self.mode.value, "bound": self.bound}
        if self.witness is not None:
            data["witness_size"] = len(self.witness)
        if self.counterexample is not None:
            left, right, reason = self.counterexample
            data["counterexample_pair"] = {"left": str(left), "right": str(right), "reason": reason}
        return data

    def __str__(self):
        text = self.outcome.value + " (" + self.kind.value + ", " + self.mode.value + ", bound " + str(self.bound) + ")"
        if self.witness is not None:
            text += ", witness of " + str(len(self.witness)) + " pairs"
        if self.counterexample is not None:
            text += ", " + self.counterexample[2] + " at (" + str(self.counterexample[0]) + " | " + str(self.counterexample[1]) + ")"
        return text


def _successors(H: HDA, cell: str) -> List[Tuple[Step, str]]:
    X = H.pcs
    steps = [(Step(TERMINATE, i), X.face(cell, i, 1)) for i in range(1, X.dim(cell) + 1)]
    steps += [(Step(START, i), higher) for i, higher in sorted(X.upper(cell))]
    return steps


def step_graph(H: HDA) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(H.pcs.cell_ids)
    for cell in H.pcs.cell_ids:
        for _, successor in _successors(H, cell):
            graph.add_edge(cell, successor)
    return graph


def is_exhausted(H: HDA, bound: int) -> bool:
    """True when no execution of H is longer than bound."""
    graph = step_graph(H)
    reachable = graph.subgraph(nx.descendants(graph, H.initial) | {H.initial})
    return nx.is_directed_acyclic_graph(reachable) and nx.dag_longest_path_length(reachable) <= bound


def enumerate_executions(H: HDA, max_len: Optional[int] = None) -> List[Path]:
    """Executions by increasing length, extensions in successor order."""
    if max_len is None:
        graph = step_graph(H)
        reachable = graph.subgraph(nx.descendants(graph, H.initial) | {H.initial})
        if not nx.is_directed_acyclic_graph(reachable):
            raise InvalidComplex(["executions of " + str(H) + " are unbounded, a length bound is required"])
        max_len = nx.dag_longest_path_length(reachable)
    executions = [Path.single(H.initial)]
    layer = list(executions)
    for _ in range(0, max_len):
        layer = [p.extend(step, cell) for p in layer for step, cell in _successors(H, p.last)]
        executions += layer
    logging.debug(str(len(executions)) + " executions of length <= " + str(max_len) + " in " + str(H))
    return executions


class _Side:
    """Executions of one HDA with their extension, adjacency and prefix links by index."""

    def __init__(self, H: HDA, bound: int, kind: BisimKind, mode: SemanticsMode):
        self.H = H
        self.paths = enumerate_executions(H, bound)
        self.index = {p: n for n, p in enumerate(self.paths)}
        self.parent = [self.index[Path(p.cells[:-1], p.steps[:-1])] if p.length > 0 else -1 for p in self.paths]
        self.extensions: List[List[int]] = [[] for _ in self.paths]
        for n, parent in enumerate(self.parent):
            if parent >= 0:
                self.extensions[parent].append(n)
        self.adjacent: List[Dict[int, List[int]]] = []
        if kind != BisimKind.ST:
            for p in self.paths:
                self.adjacent.append({position: [self.index[q] for q in adjacent_paths(H.pcs, p, position)]
                                      for position in range(1, p.length)})
        if mode == SemanticsMode.TRACE:
            self.labels = None
            self.keys = [(p.length, format_st_trace(st_trace(H.pcs, p))) for p in self.paths]
        else:
            self.labels = [ev(H.pcs, p) for p in self.paths]
            self.keys = [(p.length, label.fingerprint()) for p, label in zip(self.paths, self.labels)]


class _Engine:

    def __init__(self, HX: HDA, HY: HDA, kind: BisimKind, mode: SemanticsMode, bound: int):
        self.kind = kind
        self.mode = mode
        self.bound = bound
        self.left = _Side(HX, bound, kind, mode)
        self.right = _Side(HY, bound, kind, mode)
        self.reasons: Dict[Tuple[int, int], str] = {}

    def initial_relation(self) -> Set[Tuple[int, int]]:
        buckets: Dict[Tuple, List[int]] = {}
        for j, key in enumerate(self.right.keys):
            buckets.setdefault(key, []).append(j)
        relation = set()
        for i, key in enumerate(self.left.keys):
            for j in buckets.get(key, []):
                if self.mode == SemanticsMode.TRACE or iso(self.left.labels[i], self.right.labels[j]) is not None:
                    relation.add((i, j))
        return relation

    def _unmatched(self, relation, lefts: List[int], rights: List[int]) -> Optional[Tuple[int, int]]:
        for i in lefts:
            if not any((i, j) in relation for j in rights):
                return i, -1
        for j in rights:
            if not any((i, j) in relation for i in lefts):
                return -1, j
        return None

    def _describe(self, clause: str, missing: Tuple[int, int]) -> str:
        i, j = missing
        if i >= 0:
            return clause + ": left " + str(self.left.paths[i]) + " has no partner"
        return clause + ": right " + str(self.right.paths[j]) + " has no partner"

    def violation(self, relation, pair: Tuple[int, int]) -> Optional[str]:
        i, j = pair
        length = self.left.paths[i].length
        if length < self.bound:
            missing = self._unmatched(relation, self.left.extensions[i], self.right.extensions[j])
            if missing is not None:
                return self._describe("extension", missing)
        if self.kind != BisimKind.ST:
            for position in range(1, length):
                missing = self._unmatched(relation, self.left.adjacent[i][position], self.right.adjacent[j][position])
                if missing is not None:
                    return self._describe("adjacency at " + str(position), missing)
        if self.kind == BisimKind.HHP and length > 0:
            if (self.left.parent[i], self.right.parent[j]) not in relation:
                return "restriction: prefixes " + str(self.left.paths[self.left.parent[i]]) + " and " + \
                       str(self.right.paths[self.right.parent[j]]) + " are not related"
        return None

    def fixpoint(self) -> Set[Tuple[int, int]]:
        relation = self.initial_relation()
        logging.debug("initial relation has " + str(len(relation)) + " pairs")
        rounds = 0
        changed = True
        while changed:
            changed = False
            rounds += 1
            for pair in sorted(relation):
                reason = self.violation(relation, pair)
                if reason is not None:
                    relation.discard(pair)
                    self.reasons[pair] = reason
                    changed = True
            logging.debug("round " + str(rounds) + ": " + str(len(relation)) + " pairs left")
        return relation


def check_bisim(HX: HDA, HY: HDA, kind: BisimKind = BisimKind.HHP, mode: SemanticsMode = SemanticsMode.IPOMSET, max_len: int = 6) -> Verdict:
    """
    Greatest fixpoint over pairs of executions up to max_len. Pairs at the bound are not checked
    for extensions, so a deleted initial pair is a definite NotBisimilar; a surviving one proves
    bisimilarity only when neither HDA has longer executions.
    """
    engine = _Engine(HX, HY, kind, mode, max_len)
    relation = engine.fixpoint()
    initial = (0, 0)
    if initial not in relation:
        left, right = engine.left.paths[0], engine.right.paths[0]
        verdict = Verdict(Outcome.NOT_BISIMILAR, kind, mode, max_len,
                          counterexample=(left, right, engine.reasons.get(initial, "initial executions are not related")))
    else:
        witness = frozenset((engine.left.paths[i], engine.right.paths[j]) for i, j in relation)
        exhausted = is_exhausted(HX, max_len) and is_exhausted(HY, max_len)
        verdict = Verdict(Outcome.BISIMILAR if exhausted else Outcome.BOUNDED_INCONCLUSIVE, kind, mode, max_len, witness=witness)
    logging.info(str(verdict))
    return verdict


def check_witness(HX: HDA, HY: HDA, witness, kind: BisimKind, mode: SemanticsMode, bound: int) -> List[str]:
    """Checks every clause for a relation of execution pairs, without the fixpoint engine's tables."""
    violations = []
    witness = set(witness)
    left_initial, right_initial = Path.single(HX.initial), Path.single(HY.initial)
    if (left_initial, right_initial) not in witness:
        violations.append("initial executions are not related")

    def extensions(H: HDA, p: Path) -> List[Path]:
        found = [p.extend(Step(TERMINATE, i), H.pcs.face(p.last, i, 1)) for i in range(1, H.pcs.dim(p.last) + 1)]
        for cell in H.pcs.cell_ids:
            for i in range(1, H.pcs.dim(cell) + 1):
                if H.pcs.face(cell, i, 0) == p.last:
                    found.append(p.extend(Step(START, i), cell))
        return found

    def matched(lefts: List[Path], rights: List[Path]) -> bool:
        return all(any((a, b) in witness for b in rights) for a in lefts) and all(any((a, b) in witness for a in lefts) for b in rights)

    for rho, sigma in sorted(witness, key=lambda pair: (pair[0].length, str(pair[0]), str(pair[1]))):
        name = "(" + str(rho) + " | " + str(sigma) + ")"
        if rho.length != sigma.length:
            violations.append(name + ": lengths differ")
            continue
        if mode == SemanticsMode.TRACE and st_trace(HX.pcs, rho) != st_trace(HY.pcs, sigma):
            violations.append(name + ": ST-traces differ")
        if mode == SemanticsMode.IPOMSET and iso(ev(HX.pcs, rho), ev(HY.pcs, sigma)) is None:
            violations.append(name + ": labels are not isomorphic")
        if rho.length < bound and not matched(extensions(HX, rho), extensions(HY, sigma)):
            violations.append(name + ": extensions are not matched")
        if kind != BisimKind.ST:
            for position in range(1, rho.length):
                if not matched(adjacent_paths(HX.pcs, rho, position), adjacent_paths(HY.pcs, sigma, position)):
                    violations.append(name + ": adjacent paths at " + str(position) + " are not matched")
        if kind == BisimKind.HHP:
            for shorter, other in zip(prefixes(rho), prefixes(sigma)):
                if (shorter, other) not in witness:
                    violations.append(name + ": prefixes " + str(shorter) + " and " + str(other) + " are not related")
                    break
    return violations


@dataclass
class CrossValidation:
    trace: Verdict
    ipomset: Verdict

    @property
    def agree(self) -> bool:
        return not (self.trace.conclusive and self.ipomset.conclusive) or self.trace.outcome == self.ipomset.outcome

    def to_json(self) -> Dict:
        return {"agree": self.agree, "trace": self.trace.to_json(), "ipomset": self.ipomset.to_json()}


def cross_validate(HX: HDA, HY: HDA, kind: BisimKind = BisimKind.HHP, max_len: int = 6) -> CrossValidation:
    report = CrossValidation(check_bisim(HX, HY, kind, SemanticsMode.TRACE, max_len),
                             check_bisim(HX, HY, kind, SemanticsMode.IPOMSET, max_len))
    if not report.agree:
        negative = report.trace if report.trace.outcome == Outcome.NOT_BISIMILAR else report.ipomset
        raise TheoremViolation("trace and ipomset semantics disagree for kind " + kind.value + ": " + str(report.trace) +
                               " vs " + str(report.ipomset), negative.counterexample)
    return report
