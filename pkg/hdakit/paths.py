import logging
import re
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterator, List, Optional, Tuple
from hdakit.base_cats import Permutation, induced_face_permutation
from hdakit.errors import ClassTooLarge, EndpointMismatch, FormatError, IndexOutOfRange, InvalidPath
from hdakit.precubical import PrecubicalSet, SCell, SPrecubicalSet


START = 0
TERMINATE = 1


@dataclass(frozen=True)
class Step:
    polarity: int
    index: int

    @staticmethod
    def parse(token: str):
        match = re.fullmatch(r"([+-])(\d+)", token)
        if match is None:
            raise FormatError("invalid step " + repr(token))
        return Step(START if match.group(1) == "+" else TERMINATE, int(match.group(2)))

    @property
    def is_up(self) -> bool:
        return self.polarity == START

    def __str__(self):
        return ("+" if self.polarity == START else "-") + str(self.index)


@dataclass(frozen=True)
class Path:
    """Cells x_0 .. x_m and steps φ_1 .. φ_m; φ_j leads from x_{j-1} to x_j."""
    cells: Tuple[Hashable, ...]
    steps: Tuple[Step, ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        object.__setattr__(self, "steps", tuple(self.steps))
        if len(self.cells) == 0 or len(self.cells) != len(self.steps) + 1:
            raise InvalidPath("a path needs one more cell than steps")

    @staticmethod
    def single(cell):
        return Path((cell,), ())

    @staticmethod
    def parse(text: str, space=None):
        tokens = text.split()
        if len(tokens) % 2 == 0:
            raise FormatError("path must alternate cells and steps: " + repr(text))
        cells = [token if space is None else space.parse_cell(token) for token in tokens[0::2]]
        return Path(tuple(cells), tuple(Step.parse(token) for token in tokens[1::2]))

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def first(self):
        return self.cells[0]

    @property
    def last(self):
        return self.cells[-1]

    def higher(self, j: int):
        """The higher cell of step j (1-based)."""
        return self.cells[j] if self.steps[j - 1].is_up else self.cells[j - 1]

    def extend(self, step: Step, cell):
        return Path(self.cells + (cell,), self.steps + (step,))

    def __str__(self):
        parts = [str(self.cells[0])]
        for step, cell in zip(self.steps, self.cells[1:]):
            parts.append(str(step))
            parts.append(str(cell))
        return " ".join(parts)


def validate_path(space, p: Path, initial=None) -> List[str]:
    violations = ["unknown cell " + str(cell) for cell in dict.fromkeys(p.cells) if not space.has_cell(cell)]
    if len(violations) > 0:
        return violations
    for j, step in enumerate(p.steps, 1):
        lower, higher = (p.cells[j - 1], p.cells[j]) if step.is_up else (p.cells[j], p.cells[j - 1])
        if step.polarity not in (START, TERMINATE):
            violations.append("step " + str(j) + " has polarity " + str(step.polarity))
        elif not 1 <= step.index <= space.dim(higher):
            violations.append("step " + str(j) + " (" + str(step) + ") exceeds the dimension of " + str(higher))
        elif space.face(higher, step.index, step.polarity) != lower:
            violations.append("step " + str(j) + " (" + str(step) + "): " + str(lower) + " is not face " + str(step.index) +
                              " of " + str(higher))
    if initial is not None and p.first != initial:
        violations.append("path starts at " + str(p.first) + " instead of the initial cell " + str(initial))
    return violations


def concat(p: Path, q: Path) -> Path:
    if p.last != q.first:
        raise EndpointMismatch("path ends at " + str(p.last) + " but the next one starts at " + str(q.first))
    return Path(p.cells + q.cells[1:], p.steps + q.steps)


def prefixes(p: Path) -> List[Path]:
    return [Path(p.cells[:j + 1], p.steps[:j]) for j in range(0, p.length + 1)]


def _replace(p: Path, position: int, first: Step, cell, second: Step) -> Path:
    cells = p.cells[:position] + (cell,) + p.cells[position + 1:]
    steps = p.steps[:position - 1] + (first, second) + p.steps[position + 1:]
    return Path(cells, steps)


def adjacent_replace(space, p: Path, position: int) -> Optional[Tuple[Path, int]]:
    """
    Rewrites the segment (φ_ℓ, x_ℓ, φ_ℓ+1) with one of the four exchange rules. Rules 1 and 2 are
    applied in whichever direction matches, rules 3 and 4 only from (start, terminate) to
    (terminate, start). Returns None on the stuck pattern (+i, x, -i) and on (terminate, start).
    """
    if not 1 <= position < p.length:
        raise IndexOutOfRange("no segment at position " + str(position) + " of a path of length " + str(p.length))
    first, second = p.steps[position - 1], p.steps[position]
    before, after = p.cells[position - 1], p.cells[position + 1]
    a, b = first.index, second.index

    if first.is_up and second.is_up:
        if a < b:
            return _replace(p, position, Step(START, b - 1), space.face(after, a, 0), Step(START, a)), 1
        return _replace(p, position, Step(START, b), space.face(after, a + 1, 0), Step(START, a + 1)), 1

    if not first.is_up and not second.is_up:
        if a > b:
            return _replace(p, position, Step(TERMINATE, b), space.face(before, b, 1), Step(TERMINATE, a - 1)), 2
        return _replace(p, position, Step(TERMINATE, b + 1), space.face(before, b + 1, 1), Step(TERMINATE, a)), 2

    if first.is_up and a != b:
        if a < b:
            middle, rule, replacement = space.face(before, b - 1, 1), 3, (Step(TERMINATE, b - 1), Step(START, a))
        else:
            middle, rule, replacement = space.face(before, b, 1), 4, (Step(TERMINATE, b), Step(START, a - 1))
        if space.face(after, replacement[1].index, 0) != middle:
            return None
        return _replace(p, position, replacement[0], middle, replacement[1]), rule
    return None


def adjacent_paths(space, p: Path, position: int) -> List[Path]:
    """All paths ℓ-adjacent to p: the forward replacement and, on a (terminate, start) segment, the reverse
    applications of rules 3 and 4 through any higher cell that fits."""
    found = adjacent_replace(space, p, position)
    if found is not None:
        return [found[0]]
    first, second = p.steps[position - 1], p.steps[position]
    if first.is_up or not second.is_up:
        return []
    before, after = p.cells[position - 1], p.cells[position + 1]
    c, d = first.index, second.index
    paths = []
    for i, higher in space.upper(before):
        if i == d and d <= c and space.face(higher, c + 1, 1) == after:
            paths.append(_replace(p, position, Step(START, d), higher, Step(TERMINATE, c + 1)))
        if i == d + 1 and c <= d and space.face(higher, c, 1) == after:
            paths.append(_replace(p, position, Step(START, d + 1), higher, Step(TERMINATE, c)))
    return list(dict.fromkeys(paths))


def congruence_class(space, p: Path, cap: int = 100000) -> List[Path]:
    """The paths reachable from p by rules 1 and 2 at any position, in discovery order."""
    seen = {p: None}
    queue = deque([p])
    while len(queue) > 0:
        path = queue.popleft()
        for position in range(1, path.length):
            found = adjacent_replace(space, path, position)
            if found is not None and found[1] in (1, 2) and found[0] not in seen:
                seen[found[0]] = None
                if len(seen) > cap:
                    raise ClassTooLarge(cap)
                queue.append(found[0])
    logging.debug("congruence class of " + str(p) + " has " + str(len(seen)) + " paths")
    return list(seen.keys())


def lift(p: Path, taus: List[Permutation]) -> Path:
    """The path through τ_j·x_j; step indices become p_j = τ(i_j) for the higher cell of each step."""
    steps = []
    for j, step in enumerate(p.steps, 1):
        higher = taus[j] if step.is_up else taus[j - 1]
        steps.append(Step(step.polarity, higher(step.index)))
    return Path(tuple(SCell(tau, cell) for tau, cell in zip(taus, p.cells)), tuple(steps))


def canonical_lift(X: PrecubicalSet, p: Path) -> Path:
    return lift(p, [Permutation.identity(X.dim(cell)) for cell in p.cells])


def _coherent_permutations(X: PrecubicalSet, p: Path) -> Iterator[List[Permutation]]:
    # a down-step fixes the lower permutation, an up-step leaves one choice per slot of the new event
    def extend(taus: List[Permutation]) -> Iterator[List[Permutation]]:
        j = len(taus)
        if j == len(p.cells):
            yield taus
            return
        step = p.steps[j - 1]
        if step.is_up:
            for tau in Permutation.all(X.dim(p.cells[j])):
                if induced_face_permutation(tau, tau(step.index)) == taus[-1]:
                    yield from extend(taus + [tau])
        else:
            yield from extend(taus + [induced_face_permutation(taus[-1], taus[-1](step.index))])

    for tau in Permutation.all(X.dim(p.first)):
        yield from extend([tau])


def all_liftings(X: PrecubicalSet, p: Path) -> List[Path]:
    violations = validate_path(X, p)
    if len(violations) > 0:
        raise InvalidPath("; ".join(violations))
    return [lift(p, taus) for taus in _coherent_permutations(X, p)]


def underlying_path(SX: SPrecubicalSet, q: Path) -> Path:
    violations = validate_path(SX, q)
    if len(violations) > 0:
        raise InvalidPath("; ".join(violations))
    steps = []
    for j, step in enumerate(q.steps, 1):
        steps.append(Step(step.polarity, q.higher(j).theta.inverse()(step.index)))
    return Path(tuple(scell.base for scell in q.cells), tuple(steps))
