"""Star-shaped Coxeter systems, general labelled diagrams and their invariants."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np


class DiagramError(ValueError):
    """Malformed or invalid system description."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class StarSystem:
    """Center ``s0`` joined to leaves ``s1..sn``; leaf ``i`` has edge label ``labels[i-1]``."""

    labels: Tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(m) for m in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 2:
            raise DiagramError(f"a star system needs n >= 2 leaves, got n={len(labels)}")
        for pos, m in enumerate(labels, start=1):
            if m < 2:
                raise DiagramError(f"label of leaf s{pos} is {m}, labels must be >= 2")

    @classmethod
    def of(cls, *labels: int) -> "StarSystem":
        return cls(tuple(labels))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def rank(self) -> int:
        return self.n + 1

    def m(self, i: int) -> int:
        """Label of the edge s0--si (1-based leaf index)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"leaf index {i} out of range 1..{self.n}")
        return self.labels[i - 1]

    @property
    def leaves(self) -> range:
        return range(1, self.n + 1)

    @property
    def I_odd(self) -> FrozenSet[int]:
        return frozenset(i for i in self.leaves if self.m(i) % 2 == 1)

    @property
    def I_even(self) -> FrozenSet[int]:
        return frozenset(i for i in self.leaves if self.m(i) % 2 == 0)

    @property
    def I_2(self) -> FrozenSet[int]:
        return frozenset(i for i in self.leaves if self.m(i) == 2)

    @property
    def n_o(self) -> int:
        return len(self.I_odd)

    @property
    def n_e(self) -> int:
        return len(self.I_even)

    @property
    def n_2(self) -> int:
        return len(self.I_2)

    def label_multiplicities(self) -> Tuple[Dict[int, int], Dict[int, int]]:
        """(odd label -> alpha, even label -> beta)."""
        counts = Counter(self.labels)
        odd = {m: c for m, c in sorted(counts.items()) if m % 2 == 1}
        even = {m: c for m, c in sorted(counts.items()) if m % 2 == 0}
        return odd, even

    def label(self, a: int, b: int) -> float:
        """Coxeter matrix entry m(s_a, s_b) for indices in 0..n (inf between leaves)."""
        if a == b:
            return 1
        if a == 0:
            return self.m(b)
        if b == 0:
            return self.m(a)
        return math.inf

    def __str__(self) -> str:
        return "labels " + " ".join(str(m) for m in self.labels)


def parse_star(text) -> StarSystem:
    """Parse ``labels m_1 ... m_n`` (``#`` comments allowed)."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    found = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head != "labels":
            raise DiagramError(f"expected 'labels', got {head!r}", lineno)
        if found is not None:
            raise DiagramError("duplicate 'labels' line", lineno)
        values = []
        for tok in rest:
            try:
                values.append(int(tok))
            except ValueError:
                raise DiagramError(f"label {tok!r} is not an integer", lineno) from None
        try:
            found = StarSystem(tuple(values))
        except DiagramError as exc:
            raise DiagramError(str(exc), lineno) from None
    if found is None:
        raise DiagramError("no 'labels' line found")
    return found


def index_partitions(sys: StarSystem) -> Tuple[FrozenSet[int], FrozenSet[int], FrozenSet[int]]:
    return sys.I_odd, sys.I_even, sys.I_2


@dataclass(frozen=True)
class DiagramAutomorphisms:
    generators: Tuple[Tuple[int, ...], ...]  # permutations of 1..n as tuples p with p[i-1] = image of i
    order: int
    odd_blocks: Tuple[Tuple[int, ...], ...]
    even_blocks: Tuple[Tuple[int, ...], ...]
    n: int

    def elements(self) -> List[Tuple[int, ...]]:
        n = self.n
        blocks = self.odd_blocks + self.even_blocks
        perms = []
        for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
            p = list(range(1, n + 1))
            for block, image in zip(blocks, choice):
                for src, dst in zip(block, image):
                    p[src - 1] = dst
            perms.append(tuple(p))
        return sorted(perms)


def diagram_automorphisms(sys: StarSystem) -> DiagramAutomorphisms:
    """Label-preserving leaf permutations: a product of symmetric groups on equal-label blocks."""
    blocks: Dict[int, List[int]] = {}
    for i in sys.leaves:
        blocks.setdefault(sys.m(i), []).append(i)
    identity = list(range(1, sys.n + 1))
    gens = []
    odd_blocks, even_blocks = [], []
    order = 1
    for m in sorted(blocks):
        block = tuple(blocks[m])
        if len(block) > 1:
            (odd_blocks if m % 2 else even_blocks).append(block)
        order *= math.factorial(len(block))
        for a, b in zip(block, block[1:]):
            p = list(identity)
            p[a - 1], p[b - 1] = b, a
            gens.append(tuple(p))
    return DiagramAutomorphisms(tuple(gens), order, tuple(odd_blocks), tuple(even_blocks), sys.n)


@dataclass(frozen=True)
class GeneratorClass:
    """Conjugacy class of a generator: ``central-odd`` or ``even-leaf`` with its index."""

    tag: str
    leaf: Optional[int] = None

    def __str__(self) -> str:
        return self.tag if self.leaf is None else f"{self.tag}({self.leaf})"


CENTRAL_ODD = GeneratorClass("central-odd")


def generator_class(sys: StarSystem, i: int) -> GeneratorClass:
    if not 0 <= i <= sys.n:
        raise IndexError(f"generator index {i} out of range 0..{sys.n}")
    if i == 0 or sys.m(i) % 2 == 1:
        return CENTRAL_ODD
    return GeneratorClass("even-leaf", i)


# --- hyperbolicity (Moussong) -------------------------------------------------


def _gram(labels: Sequence[Sequence[float]]) -> np.ndarray:
    k = len(labels)
    g = np.empty((k, k))
    for a in range(k):
        for b in range(k):
            m = labels[a][b]
            g[a, b] = 1.0 if a == b else -math.cos(math.pi / m)
    return g


def _is_spherical(sub: Sequence[Sequence[float]]) -> bool:
    if any(math.isinf(x) for row in sub for x in row):
        return False
    return bool(np.linalg.eigvalsh(_gram(sub)).min() > 1e-9)


def _is_affine_irreducible(sub: Sequence[Sequence[float]]) -> bool:
    if any(math.isinf(x) for row in sub for x in row):
        return len(sub) == 2
    k = len(sub)
    coxeter_graph = nx.Graph()
    coxeter_graph.add_nodes_from(range(k))
    coxeter_graph.add_edges_from((a, b) for a in range(k) for b in range(a + 1, k) if sub[a][b] > 2)
    if not nx.is_connected(coxeter_graph):
        return False
    eig = np.linalg.eigvalsh(_gram(sub))
    return bool(abs(eig.min()) < 1e-9 and np.sum(np.abs(eig) < 1e-9) == 1)


@dataclass
class HyperbolicityReport:
    hyperbolic: bool
    affine_simplices: List[Tuple[int, ...]] = field(default_factory=list)
    commuting_infinite_pairs: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = field(default_factory=list)
    simplices_checked: int = 0


def hyperbolicity_report(matrix: Sequence[Sequence[float]]) -> HyperbolicityReport:
    """Moussong's criterion on a Coxeter matrix: no affine special subgroup of rank >= 3 and
    no pair of commuting infinite special subgroups."""
    k = len(matrix)
    finite = nx.Graph()
    finite.add_nodes_from(range(k))
    finite.add_edges_from((a, b) for a in range(k) for b in range(a + 1, k) if not math.isinf(matrix[a][b]))

    def sub(vs):
        return [[matrix[a][b] for b in vs] for a in vs]

    report = HyperbolicityReport(True)
    minimal_infinite: List[Tuple[int, ...]] = [
        (a, b) for a in range(k) for b in range(a + 1, k) if math.isinf(matrix[a][b])
    ]
    for clique in nx.enumerate_all_cliques(finite):
        clique = tuple(sorted(clique))
        report.simplices_checked += 1
        if len(clique) < 3:
            continue
        s = sub(clique)
        if _is_affine_irreducible(s):
            report.affine_simplices.append(clique)
        if not _is_spherical(s) and all(
            _is_spherical(sub(face)) for face in itertools.combinations(clique, len(clique) - 1)
        ):
            minimal_infinite.append(clique)
    for t1, t2 in itertools.combinations(minimal_infinite, 2):
        if set(t1) & set(t2):
            continue
        if all(matrix[a][b] == 2 for a in t1 for b in t2):
            report.commuting_infinite_pairs.append((t1, t2))
    report.hyperbolic = not report.affine_simplices and not report.commuting_infinite_pairs
    return report


def coxeter_matrix(sys: StarSystem) -> List[List[float]]:
    return [[sys.label(a, b) for b in range(sys.rank)] for a in range(sys.rank)]


def is_hyperbolic(sys: StarSystem) -> bool:
    return hyperbolicity_report(coxeter_matrix(sys)).hyperbolic


# --- general diagrams -----------------------------------------------------------


@dataclass(frozen=True)
class GeneralSystem:
    """A finite labelled diagram: an edge per finite label, absent pairs are labelled infinity.

    ``expressions`` maps each vertex to a word (tuple of reference generator names); when
    ``reference`` is set those names are ``s0..sn`` of that star system.
    """

    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[FrozenSet[str], int], ...]
    expressions: Tuple[Tuple[str, Tuple[str, ...]], ...] = ()
    reference: Optional[StarSystem] = None

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise DiagramError("duplicate vertex names")
        vs = set(self.vertices)
        seen = set()
        for pair, m in self.edges:
            if len(pair) != 2:
                raise DiagramError(f"self-loop on {sorted(pair)}")
            if not pair <= vs:
                raise DiagramError(f"edge {sorted(pair)} uses an unknown vertex")
            if pair in seen:
                raise DiagramError(f"duplicate edge {sorted(pair)}")
            if m < 2:
                raise DiagramError(f"edge {sorted(pair)} has label {m} < 2")
            seen.add(pair)
        # canonical edge order keeps equality/hash structural
        order = {v: k for k, v in enumerate(self.vertices)}
        edges = tuple(sorted(self.edges, key=lambda e: sorted(order[v] for v in e[0])))
        object.__setattr__(self, "edges", edges)
        if not self.expressions:
            object.__setattr__(self, "expressions", tuple((v, (v,)) for v in self.vertices))
        elif {v for v, _ in self.expressions} != vs:
            raise DiagramError("expressions must cover exactly the vertex set")
        else:
            exprs = dict(self.expressions)
            object.__setattr__(self, "expressions", tuple((v, tuple(exprs[v])) for v in self.vertices))

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Tuple[str, str, int]],
              expressions: Optional[Dict[str, Sequence[str]]] = None,
              reference: Optional[StarSystem] = None) -> "GeneralSystem":
        exprs = () if expressions is None else tuple((v, tuple(w)) for v, w in expressions.items())
        return cls(tuple(vertices), tuple((frozenset((u, v)), int(m)) for u, v, m in edges), exprs, reference)

    @classmethod
    def from_star(cls, sys: StarSystem, names: Optional[Sequence[str]] = None) -> "GeneralSystem":
        """The star diagram of ``sys``; ``names[i]`` renames ``s_i`` (expressions stay over s0..sn)."""
        std = [f"s{i}" for i in range(sys.rank)]
        names = list(names) if names is not None else std
        if len(names) != sys.rank:
            raise DiagramError(f"need {sys.rank} names, got {len(names)}")
        edges = [(names[0], names[i], sys.m(i)) for i in sys.leaves]
        exprs = {names[i]: (std[i],) for i in range(sys.rank)}
        return cls.build(names, edges, exprs, sys)

    @property
    def rank(self) -> int:
        return len(self.vertices)

    def label(self, u: str, v: str) -> float:
        if u == v:
            return 1
        key = frozenset((u, v))
        for pair, m in self.edges:
            if pair == key:
                return m
        return math.inf

    def label_map(self) -> Dict[FrozenSet[str], int]:
        return dict(self.edges)

    def neighbours(self, v: str) -> List[str]:
        order = {x: k for k, x in enumerate(self.vertices)}
        out = [next(iter(pair - {v})) for pair, _ in self.edges if v in pair]
        return sorted(out, key=order.__getitem__)

    def degree(self, v: str) -> int:
        return sum(1 for pair, _ in self.edges if v in pair)

    def expression(self, v: str) -> Tuple[str, ...]:
        return dict(self.expressions)[v]

    def label_multiset(self) -> Tuple[int, ...]:
        return tuple(sorted(m for _, m in self.edges))

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for pair, m in self.edges:
            u, v = sorted(pair, key=self.vertices.index)
            g.add_edge(u, v, label=m)
        return g

    def is_star(self) -> bool:
        """Some vertex is an endpoint of every edge and there are no other edges."""
        if self.rank < 2 or len(self.edges) != self.rank - 1:
            return False
        return any(all(v in pair for pair, _ in self.edges) for v in self.vertices)

    def star_center(self) -> Optional[str]:
        if not self.is_star():
            return None
        centers = [v for v in self.vertices if all(v in pair for pair, _ in self.edges)]
        # rank-2 diagrams have two candidate centers; take the first in vertex order
        return centers[0]

    def to_star(self) -> StarSystem:
        center = self.star_center()
        if center is None:
            raise DiagramError("diagram is not a star")
        return StarSystem(tuple(self.label(center, v) for v in self.vertices if v != center))

    def coxeter_matrix(self) -> List[List[float]]:
        return [[self.label(a, b) for b in self.vertices] for a in self.vertices]

    def renamed(self, mapping: Dict[str, str]) -> "GeneralSystem":
        return GeneralSystem(
            tuple(mapping[v] for v in self.vertices),
            tuple((frozenset(mapping[v] for v in pair), m) for pair, m in self.edges),
            tuple((mapping[v], w) for v, w in self.expressions),
            self.reference,
        )

    def to_text(self) -> str:
        lines = [f"vertex {v}" for v in self.vertices]
        for pair, m in self.edges:
            u, v = sorted(pair, key=self.vertices.index)
            lines.append(f"edge {u} {v} {m}")
        return "\n".join(lines) + "\n"


def parse_general(text) -> GeneralSystem:
    """``vertex <name>`` lines then ``edge <u> <v> <label>`` lines."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    vertices: List[str] = []
    edges: List[Tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertex":
            if len(parts) != 2:
                raise DiagramError("expected 'vertex <name>'", lineno)
            if edges:
                raise DiagramError("vertex lines must precede edge lines", lineno)
            if parts[1] in vertices:
                raise DiagramError(f"duplicate vertex {parts[1]!r}", lineno)
            vertices.append(parts[1])
        elif parts[0] == "edge":
            if len(parts) != 4:
                raise DiagramError("expected 'edge <u> <v> <label>'", lineno)
            u, v, m = parts[1:]
            for x in (u, v):
                if x not in vertices:
                    raise DiagramError(f"unknown vertex {x!r}", lineno)
            try:
                label = int(m)
            except ValueError:
                raise DiagramError(f"label {m!r} is not an integer", lineno) from None
            if label < 2:
                raise DiagramError(f"label {label} < 2", lineno)
            if u == v:
                raise DiagramError(f"self-loop on {u!r}", lineno)
            edges.append((u, v, label))
        else:
            raise DiagramError(f"unknown directive {parts[0]!r}", lineno)
    if not vertices:
        raise DiagramError("no vertices")
    try:
        return GeneralSystem.build(vertices, edges)
    except DiagramError as exc:
        raise DiagramError(str(exc)) from None


def parse_any(text) -> GeneralSystem:
    """Star files become their star diagram (with reference); vertex/edge files parse as-is."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            if line.split()[0] == "labels":
                return GeneralSystem.from_star(parse_star(text))
            break
    return parse_general(text)
