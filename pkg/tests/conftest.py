import itertools

import numpy as np
import pytest

from rankrev import RankResult, build_matrix


@pytest.fixture
def m1():
    """Running fixture: A dominates B dominates C."""
    return build_matrix(
        ["A", "B", "C"],
        ["c1", "c2"],
        [[10, 10], [8, 9], [5, 4]],
        ["max", "max"],
        [0.6, 0.4],
    )


@pytest.fixture
def topsis_cycle():
    """Three alternatives whose pairwise TOPSIS preferences form A>B>C>A."""
    return build_matrix(
        ["A", "B", "C"],
        ["x", "y", "z"],
        [[7, 2, 7], [4, 3, 8], [5, 4, 5]],
        ["max", "max", "max"],
        [1, 1, 1],
    )


class TournamentDecider:
    """Stub decider driven by a fixed tournament.

    On two-alternative matrices the winner follows ``edges``; on anything
    larger it returns ``full`` (a mapping name -> rank) restricted to the rows.
    """

    def __init__(self, edges, full=None, name="tournament_stub"):
        self.beats = set(edges)
        self.full = full
        self.name = name

    def __call__(self, dm):
        alts = dm.alternatives
        if len(alts) == 2:
            x, y = alts
            values = [1, 2] if (x, y) in self.beats else [2, 1]
        elif self.full is not None:
            values = [self.full[a] for a in alts]
            distinct = sorted(set(values))
            values = [distinct.index(v) + 1 for v in values]
        else:
            values = list(range(1, len(alts) + 1))
        return RankResult(self.name, alts, values)


def random_tournament(nodes, rng):
    edges = []
    for a, b in itertools.combinations(nodes, 2):
        edges.append((a, b) if rng.random() < 0.5 else (b, a))
    return edges


def all_tournaments(nodes):
    pairs = list(itertools.combinations(nodes, 2))
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        yield [(a, b) if bit else (b, a) for (a, b), bit in zip(pairs, bits)]


def brute_force_three_cycles(nodes, edges):
    """Independent oracle: test both cyclic orientations of every triple."""
    edge_set = set(edges)
    found = []
    for a, b, c in itertools.combinations(sorted(nodes), 3):
        if {(a, b), (b, c), (c, a)} <= edge_set:
            found.append((a, b, c))
        if {(a, c), (c, b), (b, a)} <= edge_set:
            found.append((a, c, b))
    return sorted(found)


def has_cycle(nodes, edges):
    """Independent oracle: three-colour DFS."""
    adj = {n: [] for n in nodes}
    for a, b in edges:
        adj[a].append(b)
    colour = {n: 0 for n in nodes}

    def visit(n):
        colour[n] = 1
        for m in adj[n]:
            if colour[m] == 1 or (colour[m] == 0 and visit(m)):
                return True
        colour[n] = 2
        return False

    return any(colour[n] == 0 and visit(n) for n in nodes)


def random_matrix(rng, n, m, objectives=None, low=1.0, high=100.0):
    names = [f"a{i}" for i in range(n)]
    crit = [f"c{j}" for j in range(m)]
    values = rng.uniform(low, high, size=(n, m))
    objectives = objectives or ["max"] * m
    weights = rng.uniform(0.1, 1.0, size=m)
    return build_matrix(names, crit, values, objectives, weights)


def unique_optimum_matrix(rng, n, m=3):
    """Random all-max matrix whose first row strictly dominates the rest."""
    names = [f"a{i}" for i in range(n)]
    values = rng.uniform(1.0, 50.0, size=(n, m))
    values[0] = values.max(axis=0) + 1.0
    return build_matrix(names, [f"c{j}" for j in range(m)], values, ["max"] * m, [1.0] * m)
