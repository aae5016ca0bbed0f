"""Seeded random inputs shared by the self-test command and the test suite."""

from __future__ import annotations

import random
from typing import List, Sequence, Tuple

from .autos.basic import BasicAut, diag, inner, phi, psi, sigma, tau
from .autos.structure import units
from .diagram import StarSystem, diagram_automorphisms
from .words import _braid_neighbours


def random_word(rng: random.Random, sys: StarSystem, max_len: int) -> Tuple[int, ...]:
    return tuple(rng.randrange(sys.rank) for _ in range(rng.randint(0, max_len)))


def tits_variant(rng: random.Random, sys: StarSystem, word: Sequence[int], steps: int,
                 max_len: int) -> Tuple[int, ...]:
    """A word equal to ``word`` in W, reached by random braid moves and ss insertions/deletions."""
    w = tuple(word)
    for _ in range(steps):
        options: List[Tuple[int, ...]] = list(_braid_neighbours(sys, w))
        options += [w[:p] + w[p + 2:] for p in range(len(w) - 1) if w[p] == w[p + 1]]
        if len(w) + 2 <= max_len:
            p = rng.randint(0, len(w))
            s = rng.randrange(sys.rank)
            options.append(w[:p] + (s, s) + w[p:])
        if options:
            w = rng.choice(options)
    return w


def basic_pool(sys: StarSystem) -> List[BasicAut]:
    """Every non-inner basic generator of the system (diagram ones included)."""
    out: List[BasicAut] = []
    for i in sys.leaves:
        m = sys.m(i)
        if m == 2:
            out.append(tau(i))
        else:
            out += [phi(i, t) for t in units(m) if t != 1]
        for j in sys.leaves:
            if j != i and m % 2 == 0:
                out.append(psi(i, j))
            if j != i and m == 2:
                out.append(sigma(i, j))
    ident = tuple(sys.leaves)
    out += [diag(p) for p in diagram_automorphisms(sys).elements() if p != ident]
    return out


def random_basics(rng: random.Random, sys: StarSystem, max_count: int) -> List[BasicAut]:
    pool = basic_pool(sys)
    out = []
    for _ in range(rng.randint(0, max_count)):
        if rng.random() < 0.25:
            out.append(inner(random_word(rng, sys, 5)))
        else:
            out.append(rng.choice(pool))
    return out
