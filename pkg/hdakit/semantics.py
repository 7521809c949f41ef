import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple
import networkx as nx
from hdakit.base_cats import CanonicalObject, Permutation
from hdakit.errors import InvalidPath, LabelMismatch, NotAnExecution, NotIsomorphic
from hdakit.ipomset import Ipomset, exact_isomorphisms, glue, isomorphisms, make_identity, make_starter, make_terminator, same_ipomset
from hdakit.paths import Path, adjacent_replace, lift, underlying_path, validate_path
from hdakit.precubical import PrecubicalSet, SPrecubicalSet


@dataclass(frozen=True)
class STEvent:
    """Start(label) when start is None, otherwise Term(label, start)."""
    label: str
    start: Optional[int] = None

    @property
    def is_start(self) -> bool:
        return self.start is None

    def __str__(self):
        return self.label + "+" if self.start is None else self.label + "-@" + str(self.start)


def format_st_trace(trace: List[STEvent]) -> str:
    return " ".join(str(event) for event in trace)


def format_split_trace(trace: List[Tuple[str, str]]) -> str:
    return " ".join(label + sign for label, sign in trace)


def _checked(space, p: Path):
    violations = validate_path(space, p)
    if len(violations) > 0:
        raise InvalidPath("; ".join(violations))


def _execution(space, p: Path):
    _checked(space, p)
    if space.dim(p.first) != 0:
        raise NotAnExecution("path starts in " + str(p.first) + " of dimension " + str(space.dim(p.first)))


def cell_events(space, p: Path) -> List[List[str]]:
    """The events of every cell of p in slot order, named e1, e2, .. by first appearance."""
    running = ["e" + str(j) for j in range(1, space.dim(p.first) + 1)]
    counter = len(running)
    events = [list(running)]
    for step in p.steps:
        if step.is_up:
            counter += 1
            running.insert(step.index - 1, "e" + str(counter))
        else:
            running.pop(step.index - 1)
        events.append(list(running))
    return events


def event_sequence(space, p: Path) -> List[Tuple[str, int]]:
    """(event, polarity) for every step of p, with the naming of cell_events."""
    events = cell_events(space, p)
    sequence = []
    for j, step in enumerate(p.steps, 1):
        slots = events[j] if step.is_up else events[j - 1]
        sequence.append((slots[step.index - 1], step.polarity))
    return sequence


def _step_factor(space, p: Path, j: int) -> Ipomset:
    step = p.steps[j - 1]
    U = CanonicalObject(space.labels(p.higher(j)))
    return make_starter(U, step.index) if step.is_up else make_terminator(U, step.index)


def ev(space, p: Path) -> Ipomset:
    """The ipomset label of p, glued from one identity and one discrete factor per step."""
    _checked(space, p)
    result = make_identity(CanonicalObject(space.labels(p.first)))
    counter = len(result.events)
    for j, step in enumerate(p.steps, 1):
        factor = _step_factor(space, p, j)
        mapping = {e: "_" + e for e in factor.ids}
        if step.is_up:
            counter += 1
            mapping["e" + str(step.index)] = "e" + str(counter)
        result = glue(result, factor.renamed(mapping))
    return result


def split_trace(space, p: Path) -> List[Tuple[str, str]]:
    _execution(space, p)
    return [(space.labels(p.higher(j))[step.index - 1], "+" if step.is_up else "-") for j, step in enumerate(p.steps, 1)]


def st_trace(space, p: Path) -> List[STEvent]:
    """Tracks, slot by slot, the step at which each running event started."""
    _execution(space, p)
    slots: List[int] = []
    trace = []
    for j, step in enumerate(p.steps, 1):
        label = space.labels(p.higher(j))[step.index - 1]
        if step.is_up:
            slots.insert(step.index - 1, j)
            trace.append(STEvent(label))
        else:
            trace.append(STEvent(label, slots.pop(step.index - 1)))
    return trace


def start_by_rewriting(space, p: Path, j: int) -> int:
    """
    The start of the event terminated at step j, found by moving the down-step to the left with
    adjacency replacements until it meets the up-step of the same index.
    """
    _execution(space, p)
    if p.steps[j - 1].is_up:
        raise InvalidPath("step " + str(j) + " is not a down-step")
    path, position = p, j
    while position > 1:
        previous, current = path.steps[position - 2], path.steps[position - 1]
        if previous.is_up and previous.index == current.index:
            return position - 1
        found = adjacent_replace(space, path, position - 1)
        if found is None:
            raise InvalidPath("no exchange applies at position " + str(position - 1) + " of " + str(path))
        path, position = found[0], position - 1
    raise NotAnExecution("the event terminated at step " + str(j) + " was never started")


def matching_events(X, p: Path, Y, q: Path) -> bool:
    if p.length != q.length or any(a.polarity != b.polarity for a, b in zip(p.steps, q.steps)):
        return False
    return all(_step_factor(X, p, j) == _step_factor(Y, q, j) for j in range(1, p.length + 1))


def realize_iso_as_lifting(X: PrecubicalSet, p: Path, P: Ipomset) -> Path:
    """
    A lifting of p whose label is P up to event renaming. Every isomorphism ev(p) -> P fixes an
    order on the first and last cell; a common linear extension of both orders, restricted to each
    cell, gives the permutations of the lifting.
    """
    label = ev(X, p)
    events = cell_events(X, p)
    rank = {e: r for r, e in enumerate(label.ids)}
    SX = SPrecubicalSet(X)
    for f in isomorphisms(label, P):
        back = f.inverse()
        order = nx.DiGraph()
        order.add_nodes_from(label.ids)
        for interface in (P.src, P.tgt):
            chain = [back(e) for e in interface]
            order.add_edges_from(zip(chain, chain[1:]))
        if not nx.is_directed_acyclic_graph(order):
            continue
        position = {e: r for r, e in enumerate(nx.lexicographical_topological_sort(order, key=rank.get))}
        taus = []
        for slots in events:
            ordered = sorted(slots, key=position.get)
            taus.append(Permutation(tuple(ordered.index(e) + 1 for e in slots)))
        lifting = lift(p, taus)
        if same_ipomset(ev(SX, lifting), P):
            return lifting
    raise NotIsomorphic("no lifting of " + str(p) + " is labelled by the given ipomset")


def _reorder(space, p: Path, target: List[Tuple[str, int]]) -> Optional[Path]:
    # bubble the steps of p into the target event order using exchanges of equal polarity
    sequence = event_sequence(space, p)
    path = p
    for j in range(0, len(target)):
        if target[j] not in sequence[j:]:
            return None
        k = sequence.index(target[j], j)
        while k > j:
            if sequence[k - 1][1] != sequence[k][1]:
                return None
            found = adjacent_replace(space, path, k)
            if found is None or found[1] not in (1, 2):
                return None
            path = found[0]
            sequence[k - 1], sequence[k] = sequence[k], sequence[k - 1]
            k -= 1
    return path


def align_congruent(X, p: Path, Y, q: Path) -> Optional[Path]:
    """
    γ ≃ p that performs q's starts and terminations in q's order. Inside one complex γ and q
    then have matching events.
    """
    if not same_ipomset(ev(X, p), ev(Y, q)):
        raise LabelMismatch("paths " + str(p) + " and " + str(q) + " have different labels")
    label = ev(X, p)
    target = event_sequence(Y, q)
    for f in exact_isomorphisms(label, ev(Y, q)):
        back = f.inverse()
        gamma = _reorder(X, p, [(back(e), k) for e, k in target])
        if gamma is not None:
            return gamma
    return None


def transfer_trace(X: PrecubicalSet, p: Path, Y, q: Path) -> Optional[Path]:
    """γ ≃ p with the ST-trace of q, for executions with isomorphic labels."""
    _execution(X, p)
    _execution(Y, q)
    target = ev(Y, q)
    if next(iter(isomorphisms(ev(X, p), target)), None) is None:
        raise NotIsomorphic("labels of " + str(p) + " and " + str(q) + " are not isomorphic")
    SX = SPrecubicalSet(X)
    lifting = realize_iso_as_lifting(X, p, target)
    aligned = align_congruent(SX, lifting, Y, q)
    if aligned is None:
        logging.warning("no congruent reordering of " + str(lifting) + " follows " + str(q))
        return None
    gamma = underlying_path(SX, aligned)
    if st_trace(X, gamma) != st_trace(Y, q):
        logging.warning("transferred path " + str(gamma) + " does not reproduce the trace of " + str(q))
        return None
    return gamma
