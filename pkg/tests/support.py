"""Shared systems and random generators for the test modules."""

from __future__ import annotations

import itertools
import random
from typing import List, Optional, Tuple

import networkx as nx

from coxstar.diagram import GeneralSystem, StarSystem
from coxstar.twist import (
    TwistError,
    admissible_pairs,
    apply_twist,
    blow_up,
    d_triangles,
    find_pseudo_transpositions,
    triangle_eliminate,
)

# n in {2, 3}, every multiset of labels from 2..7
GRID: List[StarSystem] = [
    StarSystem(c) for n in (2, 3) for c in itertools.combinations_with_replacement(range(2, 8), n)
]

SMALL = [StarSystem.of(*ls) for ls in ((3, 4), (2, 3), (2, 2), (4, 4), (3, 3, 4), (2, 4, 6), (4, 4, 3))]


def words_up_to(rank: int, length: int) -> List[Tuple[int, ...]]:
    return [w for k in range(length + 1) for w in itertools.product(range(rank), repeat=k)]


def random_in_class(rng: random.Random, max_vertices: int = 6) -> GeneralSystem:
    """A tree with odd interior labels and arbitrary pendant labels, sometimes with a
    (2,2,odd) triangle hung on an odd edge."""
    nv = rng.randint(2, max_vertices)
    with_tri = nv >= 3 and rng.random() < 0.4
    nt = nv - 1 if with_tri else nv
    tree = nx.path_graph(2) if nt == 2 else nx.from_prufer_sequence([rng.randrange(nt) for _ in range(nt - 2)])
    names = [f"v{i}" for i in range(nt)]
    edges = []
    for u, v in sorted(tree.edges()):
        pendant = tree.degree(u) == 1 or tree.degree(v) == 1
        label = rng.choice([2, 3, 4, 5, 6, 7, 10] if pendant else [3, 5, 7])
        edges.append((names[u], names[v], label))
    if with_tri:
        odd = [e for e in edges if e[2] % 2]
        if odd:
            u, v, _ = rng.choice(odd)
            names.append("a")
            edges += [(u, "a", 2), (v, "a", 2)]
    return GeneralSystem.build(names, edges)


def move_options(g: GeneralSystem):
    opts = []
    try:
        opts += [("twist", m) for m in admissible_pairs(g)]
    except TwistError:
        pass
    opts += [("blow_up", tau) for tau, t in find_pseudo_transpositions(g) if g.label(tau, t) > 2]
    for x, y, apex in d_triangles(g):
        tri = (x, y, apex)
        if any(all(u in tri for u in g.neighbours(v)) for v in (x, y)):
            opts.append(("eliminate", tri))
    return opts


def random_move(rng: random.Random, g: GeneralSystem) -> Optional[Tuple[str, object, GeneralSystem]]:
    opts = move_options(g)
    if not opts:
        return None
    kind, arg = rng.choice(opts)
    if kind == "twist":
        return kind, arg, apply_twist(g, arg)
    if kind == "blow_up":
        return kind, arg, blow_up(g, arg)
    return kind, arg, triangle_eliminate(g, arg)
