"""Rank reversal tests 2 and 3: pairwise transitivity and recomposition.

The problem is split into every pair of alternatives, each pair is ranked on
its own, and the winners form a tournament (the dominance graph). Directed
3-cycles in that graph are transitivity breaks. For test 3 the graph is made
acyclic, if needed, and sorted level by level back into a ranking that must
match the one computed on the full problem.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Optional, Sequence

import networkx as nx
import numpy as np

from .core import DecisionMatrix, sub_matrix
from .errors import AllFiltered, AlreadyAcyclic, CycleDetected, NotATournament, NTooSmall
from .methods import Decider, TieBreakPolicy, break_tie, callable_name
from .rank_invariant import pad_rank
from .ranking import RankResult, RanksComparator

Edge = tuple[str, str]
Strategy = Literal["random", "weighted"]

MAX_CYCLES = 10_000
ORIGINAL_LABEL = "Original"


@dataclass(frozen=True)
class DominanceGraph:
    """Directed preference graph; an edge ``(w, l)`` means ``w`` beats ``l``.

    ``nodes`` keep the decision matrix order; ``edges`` are stored sorted.
    """

    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        nodes = tuple(self.nodes)
        edges = tuple(sorted({(str(a), str(b)) for a, b in self.edges}))
        known = set(nodes)
        if len(known) != len(nodes):
            raise ValueError("duplicate nodes")
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if a not in known or b not in known:
                raise ValueError(f"edge {(a, b)} references an unknown node")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)

    def successors(self, node: str) -> list[str]:
        return [b for a, b in self.edges if a == node]

    def adjacency(self) -> dict[str, set[str]]:
        adj = {n: set() for n in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
        return adj

    def is_tournament(self) -> bool:
        pairs = {frozenset(e) for e in self.edges}
        n = len(self.nodes)
        return len(self.edges) == len(pairs) == n * (n - 1) // 2

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.to_networkx())

    def without(self, removed: Iterable[Edge]) -> "DominanceGraph":
        removed = set(removed)
        return DominanceGraph(self.nodes, [e for e in self.edges if e not in removed])

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(self.edges)
        return g

    def to_dict(self) -> dict:
        return {"nodes": list(self.nodes), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data) -> "DominanceGraph":
        return cls(tuple(data["nodes"]), [tuple(e) for e in data["edges"]])


# -- RRT2 --------------------------------------------------------------------


def _evaluate_pair(decider, dm, pair, policy):
    x, y = pair
    sub = sub_matrix(dm, pair)
    try:
        rank = decider(sub)
    except AllFiltered:
        rank = RankResult(callable_name(decider), (), ())
    padded, missing = pad_rank(rank, sub.alternatives)
    if len(missing) == 2:
        # nothing left to compare: fall straight through to the sequence order
        winner = (x if sub.index_of(x) < sub.index_of(y) else y) if policy.force_untie else None
    else:
        winner = break_tie(pair, padded, policy, sub)
    return winner, missing


def pairwise_graph(
    decider: Decider,
    dm: DecisionMatrix,
    tie_policy: TieBreakPolicy = TieBreakPolicy(),
    n_jobs: int = 1,
) -> tuple[DominanceGraph, list[str]]:
    """Rank every pair of alternatives separately and collect the winners.

    Returns the graph and the alternatives a pipeline filtered out in at
    least one pairwise subproblem (in matrix order).
    """
    if len(dm.alternatives) < 2:
        raise ValueError("pairwise decomposition needs at least two alternatives")
    pairs = list(itertools.combinations(dm.alternatives, 2))

    def work(pair):
        return _evaluate_pair(decider, dm, pair, tie_policy)

    if n_jobs == 1:
        results = [work(p) for p in pairs]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs if n_jobs > 0 else None) as pool:
            results = list(pool.map(work, pairs))

    edges = []
    missing = set()
    for (x, y), (winner, dropped) in zip(pairs, results):
        missing.update(dropped)
        if winner is not None:
            edges.append((winner, y if winner == x else x))
    graph = DominanceGraph(dm.alternatives, edges)
    return graph, [a for a in dm.alternatives if a in missing]


def max_three_cycles(n: int) -> int:
    """Largest number of directed 3-cycles an ``n``-tournament can have."""
    if n < 3:
        raise NTooSmall(f"need at least 3 nodes, got {n}")
    if n % 2 == 0:
        return n * (n * n - 4) // 24
    return n * (n * n - 1) // 24


def find_three_cycles(g: DominanceGraph) -> list[tuple[str, str, str]]:
    """All directed 3-cycles of a tournament.

    Each cycle is rotated so its smallest name comes first; the list is sorted.
    """
    if not g.is_tournament():
        raise NotATournament(
            f"{len(g.edges)} edges on {len(g.nodes)} nodes is not a tournament"
        )
    adj = g.adjacency()
    found = []
    for a in g.nodes:
        for b in adj[a]:
            if b < a:
                continue
            for c in adj[b]:
                if c > a and a in adj[c]:
                    found.append((a, b, c))
    return sorted(found)


@dataclass(frozen=True)
class TransitivityReport:
    test_criterion_2: bool
    trans_break: tuple[tuple[str, str, str], ...]
    trans_break_rate: Fraction
    graph: DominanceGraph
    missing: tuple[str, ...] = ()
    original: Optional[RankResult] = None

    def summary(self) -> dict:
        return {
            "test_criterion_2": self.test_criterion_2,
            "trans_break": [list(c) for c in self.trans_break],
            "trans_break_rate": float(self.trans_break_rate),
            "trans_break_count": len(self.trans_break),
            "graph": self.graph.to_dict(),
            "missing": list(self.missing),
        }


def transitivity_from_graph(g: DominanceGraph) -> tuple[list, Fraction]:
    cycles = find_three_cycles(g)
    n = len(g.nodes)
    rate = Fraction(len(cycles), max_three_cycles(n)) if n >= 3 else Fraction(0)
    return cycles, rate


def run_rrt2(
    decider: Decider,
    dm: DecisionMatrix,
    tie_policy: TieBreakPolicy = TieBreakPolicy(),
    n_jobs: int = 1,
) -> TransitivityReport:
    """Pairwise transitivity test.

    The rate is the number of 3-cycles over the maximum an ``n``-tournament
    admits; with two alternatives it is 0 by definition. The report is also
    attached to the full-problem ranking under ``extra["rank_trans_check"]``.
    """
    original, _ = pad_rank(decider(dm), dm.alternatives)
    graph, missing = pairwise_graph(decider, dm, tie_policy, n_jobs)
    cycles, rate = transitivity_from_graph(graph)
    report = TransitivityReport(rate == 0, tuple(cycles), rate, graph, tuple(missing))
    original = original.with_extra({"rank_trans_check": report.summary()})
    return TransitivityReport(rate == 0, tuple(cycles), rate, graph, tuple(missing), original)


# -- RRT3 --------------------------------------------------------------------


@dataclass(frozen=True)
class CycleResolution:
    acyclic_graph: DominanceGraph
    removed_edges: tuple[Edge, ...]
    strategy: str
    seed: int
    missing: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "acyclic_graph": self.acyclic_graph.to_dict(),
            "removed_edges": [list(e) for e in self.removed_edges],
            "strategy": self.strategy,
            "seed": self.seed,
            "missing": list(self.missing),
        }


def _canonical_cycle(nodes: Sequence[str]) -> tuple[str, ...]:
    i = min(range(len(nodes)), key=lambda k: nodes[k])
    return tuple(nodes[i:]) + tuple(nodes[:i])


def simple_cycles(g: DominanceGraph, limit: int = MAX_CYCLES) -> list[tuple[str, ...]]:
    """Up to ``limit`` simple cycles, canonical and sorted by (length, names)."""
    gen = nx.simple_cycles(g.to_networkx())
    cycles = [_canonical_cycle(c) for c in itertools.islice(gen, limit)]
    return sorted(cycles, key=lambda c: (len(c), c))


def _cycle_edges(cycle: Sequence[str]) -> list[Edge]:
    return [(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]


def break_cycles(
    g: DominanceGraph,
    strategy: Strategy = "random",
    seed: int = 0,
    missing: Sequence[str] = (),
    max_cycles: int = MAX_CYCLES,
) -> CycleResolution:
    """Remove edges until ``g`` is acyclic.

    ``random`` drops one uniformly chosen edge from every cycle that is still
    intact; ``weighted`` repeatedly drops the edge lying on the most intact
    cycles (ties drawn at random). Cycles are enumerated up to ``max_cycles``
    at a time and re-enumerated until none remain.
    """
    if strategy not in ("random", "weighted"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = np.random.default_rng(int(seed))
    cycles = simple_cycles(g, max_cycles)
    if not cycles:
        raise AlreadyAcyclic("graph has no cycles to break")

    removed: list[Edge] = []
    current = g
    while cycles:
        cycle_edges = [_cycle_edges(c) for c in cycles]
        gone: set[Edge] = set()
        if strategy == "random":
            for edges in cycle_edges:
                if gone.isdisjoint(edges):
                    edge = edges[rng.integers(len(edges))]
                    gone.add(edge)
                    removed.append(edge)
        else:
            intact = list(range(len(cycle_edges)))
            while intact:
                counts: dict[Edge, int] = {}
                for k in intact:
                    for e in cycle_edges[k]:
                        counts[e] = counts.get(e, 0) + 1
                top = max(counts.values())
                candidates = sorted(e for e, c in counts.items() if c == top)
                edge = candidates[rng.integers(len(candidates))]
                gone.add(edge)
                removed.append(edge)
                intact = [k for k in intact if edge not in cycle_edges[k]]
        current = current.without(gone)
        cycles = simple_cycles(current, max_cycles)

    return CycleResolution(current, tuple(removed), strategy, int(seed), tuple(missing))


def recompose_ranking(dag: DominanceGraph, method: str = "recomposed") -> RankResult:
    """Rank = level in the repeated removal of sources (zero in-degree nodes)."""
    indegree = {n: 0 for n in dag.nodes}
    for _, b in dag.edges:
        indegree[b] += 1
    adj = dag.adjacency()
    level = {}
    frontier = [n for n in dag.nodes if indegree[n] == 0]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for n in frontier:
            level[n] = depth
            for m in adj[n]:
                indegree[m] -= 1
                if indegree[m] == 0:
                    nxt.append(m)
        frontier = nxt
    if len(level) != len(dag.nodes):
        raise CycleDetected("graph has a cycle; cannot recompose a ranking")
    return RankResult(method, dag.nodes, [level[n] for n in dag.nodes])


@dataclass(frozen=True)
class Rrt3Report:
    test_criterion_2: bool
    test_criterion_3: bool
    transitivity: TransitivityReport
    comparator: RanksComparator
    resolutions: tuple[CycleResolution, ...]
    rank_distribution: dict = field(default_factory=dict)

    @property
    def original(self) -> RankResult:
        return self.comparator[ORIGINAL_LABEL]

    @property
    def recomposed(self) -> list[RankResult]:
        return self.comparator.ranks[1:]


def _same_ranking(a: RankResult, b: RankResult) -> bool:
    return a.as_dict() == b.as_dict()


def run_rrt3(
    decider: Decider,
    dm: DecisionMatrix,
    tie_policy: TieBreakPolicy = TieBreakPolicy(),
    candidates: int = 1,
    strategy: Strategy = "random",
    seed: int = 0,
    n_jobs: int = 1,
) -> Rrt3Report:
    """Recomposition consistency test.

    An acyclic dominance graph is sorted once and compared with the original
    ranking. A cyclic one fails outright; ``candidates`` acyclic variants are
    still built (seeds ``seed``, ``seed + 1``, ...) and recomposed so the
    spread of each alternative's rank can be inspected.
    """
    if candidates < 1:
        raise ValueError(f"candidates must be >= 1, got {candidates}")
    rrt2 = run_rrt2(decider, dm, tie_policy, n_jobs)
    graph = rrt2.graph
    original = rrt2.original

    if graph.is_acyclic():
        resolutions = [CycleResolution(graph, (), strategy, int(seed), rrt2.missing)]
    else:
        resolutions = [
            break_cycles(graph, strategy, seed + k, rrt2.missing) for k in range(candidates)
        ]

    entries = [(ORIGINAL_LABEL, original)]
    for k, res in enumerate(resolutions):
        rank = recompose_ranking(res.acyclic_graph)
        rank = rank.with_extra({"transitivity_check": res.to_dict()})
        entries.append((f"Recomposed.{k}", rank))

    if len(resolutions) == 1 and not resolutions[0].removed_edges:
        test3 = rrt2.test_criterion_2 and _same_ranking(original, entries[1][1])
    else:
        test3 = False

    distribution = {
        a: [rank.rank_of(a) for _, rank in entries[1:]] for a in dm.alternatives
    }
    comparator = RanksComparator(entries, {"test_criterion_3": test3})
    return Rrt3Report(
        rrt2.test_criterion_2, test3, rrt2, comparator, tuple(resolutions), distribution
    )
