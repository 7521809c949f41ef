import json
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple
import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher
from hdakit.base_cats import CanonicalObject, Permutation, insertion_map
from hdakit.errors import FormatError, IndexOutOfRange, InterfaceMismatch, NotInterval


@dataclass(frozen=True)
class Ipomset:
    """
    A labelled strict partial order with interfaces. src lists, slot by slot, the events already
    running at the start, tgt the events still running at the end. lt is kept transitively closed.
    """
    events: Tuple[Tuple[str, str], ...]
    lt: FrozenSet[Tuple[str, str]]
    src: Tuple[str, ...]
    tgt: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "events", tuple((str(e), str(label)) for e, label in self.events))
        object.__setattr__(self, "lt", frozenset((str(x), str(y)) for x, y in self.lt))
        object.__setattr__(self, "src", tuple(self.src))
        object.__setattr__(self, "tgt", tuple(self.tgt))

    @property
    def ids(self) -> List[str]:
        return [e for e, _ in self.events]

    @property
    def labels(self) -> Dict[str, str]:
        return dict(self.events)

    @property
    def source(self) -> CanonicalObject:
        labels = self.labels
        return CanonicalObject(tuple(labels[e] for e in self.src))

    @property
    def target(self) -> CanonicalObject:
        labels = self.labels
        return CanonicalObject(tuple(labels[e] for e in self.tgt))

    @property
    def minimal(self) -> List[str]:
        later = {y for _, y in self.lt}
        return [e for e in self.ids if e not in later]

    @property
    def maximal(self) -> List[str]:
        earlier = {x for x, _ in self.lt}
        return [e for e in self.ids if e not in earlier]

    def violations(self) -> List[str]:
        violations = []
        ids = self.ids
        known = set(ids)
        if len(known) != len(ids):
            violations.append("event ids are not unique")
        for x, y in sorted(self.lt):
            if x not in known or y not in known:
                violations.append("precedence " + x + " < " + y + " refers to an unknown event")
            elif x == y:
                violations.append("precedence is not irreflexive at " + x)
        for x, y in sorted(self.lt):
            for z in sorted(z for w, z in self.lt if w == y):
                if (x, z) not in self.lt:
                    violations.append("precedence is not transitive: " + x + " < " + y + " < " + z)
        minimal, maximal = set(self.minimal), set(self.maximal)
        for name, interface, extremal in (("source", self.src, minimal), ("target", self.tgt, maximal)):
            if len(set(interface)) != len(interface):
                violations.append(name + " interface is not injective")
            for e in interface:
                if e not in known:
                    violations.append(name + " interface refers to unknown event " + e)
                elif e not in extremal:
                    violations.append(name + " interface event " + e + " is not " + ("minimal" if name == "source" else "maximal"))
        return violations

    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        for e, label in self.events:
            graph.add_node(e, label=label, in_src=e in self.src, in_tgt=e in self.tgt,
                           src_slot=self.src.index(e) + 1 if e in self.src else 0,
                           tgt_slot=self.tgt.index(e) + 1 if e in self.tgt else 0)
        graph.add_edges_from(self.lt)
        return graph

    def fingerprint(self) -> str:
        """An isomorphism invariant: equal for isomorphic ipomsets."""
        graph = self.graph()
        for e in graph.nodes:
            node = graph.nodes[e]
            node["signature"] = node["label"] + ("<" if node["in_src"] else "") + (">" if node["in_tgt"] else "")
        return str(len(self.events)) + ":" + str(len(self.lt)) + ":" + nx.weisfeiler_lehman_graph_hash(graph, node_attr="signature")

    def renamed(self, mapping: Dict[str, str]):
        return Ipomset(tuple((mapping[e], label) for e, label in self.events),
                       frozenset((mapping[x], mapping[y]) for x, y in self.lt),
                       tuple(mapping[e] for e in self.src),
                       tuple(mapping[e] for e in self.tgt))

    def render(self) -> str:
        """Bullet notation, •a• for an event in both interfaces, followed by one line per covering pair."""
        labels = self.labels
        counts: Dict[str, int] = {}
        for label in labels.values():
            counts[label] = counts.get(label, 0) + 1

        def name(e: str) -> str:
            return labels[e] if counts[labels[e]] == 1 else labels[e] + "[" + e + "]"

        def bulleted(e: str) -> str:
            return ("•" if e in self.src else "") + name(e) + ("•" if e in self.tgt else "")

        lines = ["  ".join(bulleted(e) for e in self.ids)]
        order = {e: i for i, e in enumerate(self.ids)}
        covering = nx.transitive_reduction(self.graph()) if len(self.lt) > 0 else nx.DiGraph()
        for x, y in sorted(covering.edges, key=lambda edge: (order[edge[0]], order[edge[1]])):
            lines.append(name(x) + " --> " + name(y))
        return "\n".join(lines)

    def __str__(self):
        return self.render().replace("\n", "; ")

    def to_json(self) -> Dict:
        order = {e: i for i, e in enumerate(self.ids)}
        return {"events": [{"id": e, "label": label} for e, label in self.events],
                "lt": [[x, y] for x, y in sorted(self.lt, key=lambda pair: (order.get(pair[0], -1), order.get(pair[1], -1)))],
                "src": list(self.src),
                "tgt": list(self.tgt)}

    @staticmethod
    def from_json(data: Dict):
        try:
            return Ipomset(tuple((record["id"], record["label"]) for record in data["events"]),
                           frozenset((pair[0], pair[1]) for pair in data.get("lt", [])),
                           tuple(str(e) for e in data.get("src", [])),
                           tuple(str(e) for e in data.get("tgt", [])))
        except (KeyError, TypeError, IndexError):
            raise FormatError("invalid ipomset record")

    def save(self, filename: str):
        with open(filename, "w") as file:
            json.dump(self.to_json(), file, indent=1)

    @staticmethod
    def load(filename: str):
        with open(filename, "r") as file:
            try:
                data = json.load(file)
            except json.JSONDecodeError as e:
                raise FormatError(filename + ": " + e.msg, e.lineno, e.colno)
        if not isinstance(data, dict):
            raise FormatError(filename + ": expected a JSON object", 1, 1)
        return Ipomset.from_json(data)


def validate_ipomset(P: Ipomset) -> List[str]:
    return P.violations()


def _events_of(U: CanonicalObject) -> Tuple[Tuple[str, str], ...]:
    return tuple(("e" + str(j), label) for j, label in enumerate(U.labels, 1))


def make_identity(U: CanonicalObject) -> Ipomset:
    events = _events_of(U)
    ids = tuple(e for e, _ in events)
    return Ipomset(events, frozenset(), ids, ids)


def make_starter(U: CanonicalObject, i: int) -> Ipomset:
    """(ι_i, U, id): the event in slot i has no source slot."""
    if not 1 <= i <= len(U):
        raise IndexOutOfRange("starter index " + str(i) + " outside 1.." + str(len(U)))
    events = _events_of(U)
    ids = tuple(e for e, _ in events)
    return Ipomset(events, frozenset(), tuple(ids[j - 1] for j in insertion_map(i, len(U))), ids)


def make_terminator(U: CanonicalObject, i: int) -> Ipomset:
    """(id, U, ι_i): the event in slot i has no target slot."""
    if not 1 <= i <= len(U):
        raise IndexOutOfRange("terminator index " + str(i) + " outside 1.." + str(len(U)))
    events = _events_of(U)
    ids = tuple(e for e, _ in events)
    return Ipomset(events, frozenset(), ids, tuple(ids[j - 1] for j in insertion_map(i, len(U))))


def _closed(events: Iterable[str], pairs: Iterable[Tuple[str, str]]) -> FrozenSet[Tuple[str, str]]:
    graph = nx.DiGraph()
    graph.add_nodes_from(events)
    graph.add_edges_from(pairs)
    if not nx.is_directed_acyclic_graph(graph):
        raise InterfaceMismatch("gluing produced a cyclic precedence relation")
    return frozenset(nx.transitive_closure_dag(graph).edges)


def glue(P: Ipomset, Q: Ipomset) -> Ipomset:
    """
    Pastes Q after P, identifying P's target slot s with Q's source slot s. Events of P that end
    inside P precede events of Q that start inside Q. Q's events keep their ids unless they clash.
    """
    if P.target != Q.source:
        raise InterfaceMismatch("cannot glue: target " + str(P.target) + " differs from source " + str(Q.source))
    mapping = dict(zip(Q.src, P.tgt))
    taken = set(P.ids)
    for e in Q.ids:
        if e in mapping:
            continue
        fresh = e
        while fresh in taken:
            fresh = fresh + "'"
        mapping[e] = fresh
        taken.add(fresh)

    new_events = [(mapping[e], label) for e, label in Q.events if e not in Q.src]
    ended = [e for e in P.ids if e not in P.tgt]
    started = [mapping[e] for e, _ in Q.events if e not in Q.src]
    pairs = set(P.lt) | {(mapping[x], mapping[y]) for x, y in Q.lt} | {(x, y) for x in ended for y in started}
    events = P.events + tuple(new_events)
    return Ipomset(events, _closed([e for e, _ in events], pairs), P.src, tuple(mapping[e] for e in Q.tgt))


def glue_all(factors: Iterable[Ipomset]) -> Ipomset:
    result = None
    for factor in factors:
        result = factor if result is None else glue(result, factor)
    if result is None:
        raise InterfaceMismatch("nothing to glue")
    return result


def is_interval(P: Ipomset) -> bool:
    """No induced 2+2: x < z and y < w force x < w or y < z."""
    for x, z in P.lt:
        for y, w in P.lt:
            if (x, w) not in P.lt and (y, z) not in P.lt:
                return False
    return True


def decompose_discrete(P: Ipomset) -> List[Ipomset]:
    """
    Splits an interval ipomset into starters and terminators. Strict down-sets of an interval
    order form a chain D_0 ⊂ .. ⊂ D_K; an event starts at the index of its own down-set and
    ends at the first index whose down-set contains it.
    """
    predecessors = {e: frozenset(x for x, y in P.lt if y == e) for e in P.ids}
    chain = sorted(set(predecessors.values()), key=len)
    for smaller, larger in zip(chain, chain[1:]):
        if not smaller < larger:
            raise NotInterval("down-sets " + str(sorted(smaller)) + " and " + str(sorted(larger)) + " are incomparable")
    begin = {e: chain.index(predecessors[e]) for e in P.ids}
    end = {e: next((t for t, down in enumerate(chain) if e in down), len(chain)) for e in P.ids}

    labels = P.labels
    running = list(P.src)
    factors = []
    for t in range(0, len(chain) + 1):
        for e in [e for e in P.ids if end[e] == t and e not in P.tgt]:
            i = running.index(e) + 1
            factors.append(make_terminator(CanonicalObject(tuple(labels[r] for r in running)), i))
            running.remove(e)
        for e in [e for e in P.ids if begin[e] == t and e not in P.src]:
            running.append(e)
            factors.append(make_starter(CanonicalObject(tuple(labels[r] for r in running)), len(running)))
    if len(factors) == 0:
        factors.append(make_identity(P.source))
    logging.debug("decomposed ipomset with " + str(len(P.events)) + " events into " + str(len(factors)) + " discrete factors")
    return factors


class IpomsetIso:
    """An isomorphism P -> Q: the event bijection plus the induced interface permutations."""

    def __init__(self, events: Dict[str, str], source: Permutation, target: Permutation):
        self.events = events
        self.source = source
        self.target = target

    def __call__(self, e: str) -> str:
        return self.events[e]

    def inverse(self):
        return IpomsetIso({y: x for x, y in self.events.items()}, self.source.inverse(), self.target.inverse())

    def then(self, other):
        """other ∘ self"""
        return IpomsetIso({x: other(y) for x, y in self.events.items()}, other.source * self.source, other.target * self.target)

    def __str__(self):
        return ", ".join(x + "->" + y for x, y in self.events.items())


def _witness(P: Ipomset, Q: Ipomset, events: Dict[str, str]) -> IpomsetIso:
    source = Permutation(tuple(Q.src.index(events[e]) + 1 for e in P.src))
    target = Permutation(tuple(Q.tgt.index(events[e]) + 1 for e in P.tgt))
    return IpomsetIso(dict(events), source, target)


def _matcher(P: Ipomset, Q: Ipomset, exact: bool) -> Optional[DiGraphMatcher]:
    if len(P.events) != len(Q.events) or len(P.lt) != len(Q.lt) or len(P.src) != len(Q.src) or len(P.tgt) != len(Q.tgt):
        return None
    keys = ("label", "src_slot", "tgt_slot") if exact else ("label", "in_src", "in_tgt")
    return DiGraphMatcher(P.graph(), Q.graph(), node_match=lambda a, b: all(a[key] == b[key] for key in keys))


def isomorphisms(P: Ipomset, Q: Ipomset) -> Iterable[IpomsetIso]:
    matcher = _matcher(P, Q, False)
    if matcher is None:
        return
    for events in matcher.isomorphisms_iter():
        yield _witness(P, Q, events)


def iso(P: Ipomset, Q: Ipomset) -> Optional[IpomsetIso]:
    """An isomorphism that is free on interface slots, or None."""
    return next(iter(isomorphisms(P, Q)), None)


def count_isos(P: Ipomset, Q: Ipomset) -> int:
    return sum(1 for _ in isomorphisms(P, Q))


def exact_isomorphisms(P: Ipomset, Q: Ipomset) -> Iterable[IpomsetIso]:
    """Isomorphisms that keep every interface slot."""
    matcher = _matcher(P, Q, True)
    if matcher is None:
        return
    for events in matcher.isomorphisms_iter():
        yield _witness(P, Q, events)


def exact_iso(P: Ipomset, Q: Ipomset) -> Optional[IpomsetIso]:
    return next(iter(exact_isomorphisms(P, Q)), None)


def same_ipomset(P: Ipomset, Q: Ipomset) -> bool:
    return exact_iso(P, Q) is not None
