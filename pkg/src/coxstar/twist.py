"""Diagram moves: twists in dihedral parabolics, blow-ups and triangle eliminations.

Vertex names are slots: a twist keeps the names of the conjugated vertices and only
changes their expressions.  Blow-up of ``v`` creates ``v.c`` (the conjugate) and ``v.d``
(the longest element); eliminating that triangle restores ``v``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .diagram import GeneralSystem
from .words import from_letters


class TwistError(ValueError):
    pass


# --- expressions ---------------------------------------------------------------------


def _reduce(g: GeneralSystem, word: Sequence[str]) -> Tuple[str, ...]:
    if g.reference is not None:
        letters = [int(x[1:]) for x in word]
        return tuple(f"s{x}" for x in from_letters(g.reference, letters).letters())
    out: List[str] = []
    for x in word:
        if out and out[-1] == x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _expand(g: GeneralSystem, vertex_word: Sequence[str]) -> List[str]:
    exprs = dict(g.expressions)
    out: List[str] = []
    for v in vertex_word:
        out.extend(exprs[v])
    return out


def _longest(x: str, y: str, m: int) -> List[str]:
    """Longest element of <x, y> with label m, as a vertex word."""
    if m % 2:
        return [y] + [x, y] * ((m - 1) // 2)
    return [x, y] * (m // 2)


def _fresh(g: GeneralSystem, name: str) -> str:
    while name in g.vertices:
        name += "'"
    return name


# --- class membership ----------------------------------------------------------------


def d_triangles(g: GeneralSystem) -> List[Tuple[str, str, str]]:
    """Triples (x, y, apex): apex has degree 2 with label-2 edges to x and y, and x-y is odd."""
    out = []
    for apex in g.vertices:
        nb = g.neighbours(apex)
        if len(nb) != 2:
            continue
        x, y = nb
        if g.label(apex, x) == 2 and g.label(apex, y) == 2:
            m = g.label(x, y)
            if m != float("inf") and m % 2 == 1:
                out.append((x, y, apex))
    return out


def class_violation(g: GeneralSystem) -> Optional[str]:
    """None when g is a star, a tree with pendant even edges, or such a tree with
    (2,2,odd)-triangles hanging off odd edges; otherwise the reason."""
    graph = g.graph()
    if not nx.is_connected(graph):
        return "diagram is disconnected"
    apexes = {t[2] for t in d_triangles(g)}
    core = graph.subgraph([v for v in g.vertices if v not in apexes])
    if not nx.is_tree(core):
        return "diagram is not a tree after removing triangle apexes"
    for u, v, data in core.edges(data=True):
        if data["label"] % 2 == 0 and core.degree(u) > 1 and core.degree(v) > 1:
            return f"even edge {u}-{v} (label {data['label']}) is not pendant"
    return None


def in_class(g: GeneralSystem) -> bool:
    return class_violation(g) is None


def _require_class(g: GeneralSystem) -> None:
    why = class_violation(g)
    if why:
        raise TwistError(f"unsupported diagram: {why}")


# --- twists ----------------------------------------------------------------------------


@dataclass(frozen=True)
class TwistMove:
    I: Tuple[str, str]
    J: Tuple[str, ...]
    K: Tuple[str, ...]
    label: int
    delta: Tuple[str, ...]  # Delta_I as a word in the two vertices of I

    @property
    def trivial(self) -> bool:
        return not self.J or not self.K

    @property
    def expression_only(self) -> bool:
        return self.label % 2 == 0

    def __str__(self) -> str:
        return f"twist I={','.join(self.I)} J={','.join(self.J) or '-'} K={','.join(self.K) or '-'}"


def perp(g: GeneralSystem, I: Sequence[str]) -> Tuple[str, ...]:
    return tuple(s for s in g.vertices if s not in I and all(g.label(s, x) == 2 for x in I))


def make_twist(g: GeneralSystem, I: Sequence[str], J: Sequence[str]) -> TwistMove:
    """Validate (I, J) and compute K."""
    if len(I) != 2 or len(set(I)) != 2:
        raise TwistError("I must be two distinct vertices")
    for v in list(I) + list(J):
        if v not in g.vertices:
            raise TwistError(f"unknown vertex {v!r}")
    x, y = sorted(I, key=g.vertices.index)
    m = g.label(x, y)
    if m == float("inf"):
        raise TwistError(f"<{x}, {y}> is infinite")
    ip = perp(g, (x, y))
    Jset = set(J)
    if Jset & ({x, y} | set(ip)):
        raise TwistError("J meets I or its perpendicular set")
    K = tuple(v for v in g.vertices if v not in {x, y} and v not in ip and v not in Jset)
    for j in Jset:
        for k in K:
            if g.label(j, k) != float("inf"):
                raise TwistError(f"{j} (in J) and {k} (in K) have finite label {g.label(j, k)}")
    Jt = tuple(v for v in g.vertices if v in Jset)
    return TwistMove((x, y), Jt, K, int(m), tuple(_longest(x, y, int(m))))


def admissible_pairs(g: GeneralSystem) -> List[TwistMove]:
    """Every nontrivial admissible (I, J) with |I| = 2."""
    _require_class(g)
    graph = g.graph()
    out = []
    for pair, m in g.edges:
        x, y = sorted(pair, key=g.vertices.index)
        ip = set(perp(g, (x, y)))
        rest = [v for v in g.vertices if v not in (x, y) and v not in ip]
        comps = [sorted(c, key=g.vertices.index) for c in nx.connected_components(graph.subgraph(rest))]
        comps.sort(key=lambda c: g.vertices.index(c[0]))
        for r in range(1, len(comps)):
            for pick in itertools.combinations(range(len(comps)), r):
                J = [v for k in pick for v in comps[k]]
                out.append(make_twist(g, (x, y), J))
    return out


def apply_twist(g: GeneralSystem, t: TwistMove) -> GeneralSystem:
    check = make_twist(g, t.I, t.J)
    if check.K != t.K:
        raise TwistError("move does not match the diagram")
    x, y = t.I
    K = set(t.K)
    swap = {x: y, y: x} if t.label % 2 else {}
    edges = []
    for pair, m in g.edges:
        u, v = sorted(pair, key=g.vertices.index)
        if u in K and v in swap:
            v = swap[v]
        elif v in K and u in swap:
            u = swap[u]
        edges.append((u, v, m))
    delta = _expand(g, t.delta)
    inv = delta[::-1]
    exprs = {}
    for v, w in g.expressions:
        exprs[v] = _reduce(g, delta + list(w) + inv) if v in K else w
    return GeneralSystem.build(g.vertices, edges, exprs, g.reference)


# --- pseudo-transpositions --------------------------------------------------------------


def find_pseudo_transpositions(g: GeneralSystem) -> List[Tuple[str, str]]:
    out = []
    for tau in g.vertices:
        ts = [s for s in g.vertices if s != tau and g.label(s, tau) != float("inf") and g.label(s, tau) % 4 == 2]
        if len(ts) != 1:
            continue
        t = ts[0]
        ok = True
        for s in g.vertices:
            if s in (tau, t):
                continue
            m = g.label(s, tau)
            if m not in (2, float("inf")) or (m == 2 and g.label(t, s) != 2):
                ok = False
                break
        if ok:
            out.append((tau, t))
    return out


def blow_up(g: GeneralSystem, tau: str) -> GeneralSystem:
    partner = dict(find_pseudo_transpositions(g)).get(tau)
    if partner is None:
        raise TwistError(f"{tau} is not a pseudo-transposition")
    t = partner
    m = int(g.label(tau, t))
    if m == 2:
        raise TwistError(f"{tau}-{t} has label 2; blow-up needs 4k+2 with k >= 1")
    k = (m - 2) // 4
    a = _fresh(g, f"{tau}.c")
    d = _fresh(g, f"{tau}.d")
    verts = [v for v in g.vertices if v != tau] + [a, d]
    edges = []
    for pair, lab in g.edges:
        if tau in pair:
            continue
        u, v = sorted(pair, key=g.vertices.index)
        edges.append((u, v, lab))
    edges += [(t, a, 2 * k + 1), (t, d, 2), (a, d, 2)]
    for s in g.vertices:
        if s not in (tau, t) and g.label(s, tau) == 2:
            edges += [(s, a, 2), (s, d, 2)]
    exprs = {v: w for v, w in g.expressions if v != tau}
    exprs[a] = _reduce(g, _expand(g, [tau, t, tau]))
    exprs[d] = _reduce(g, _expand(g, [tau, t] * (2 * k + 1)))
    return GeneralSystem.build(verts, edges, exprs, g.reference)


def triangle_eliminate(g: GeneralSystem, triangle: Sequence[str]) -> GeneralSystem:
    """Replace the (2,2,2k+1) triangle by a pendant edge labelled 4k+2.

    ``triangle`` lists the three vertices in any order.  The vertex of the odd edge
    that has no other neighbours is dropped; if both have other neighbours the move
    is refused (``canonical_form`` twists those branches across first).
    """
    tri = set(triangle)
    if len(tri) != 3 or not tri <= set(g.vertices):
        raise TwistError("triangle needs three distinct vertices of the diagram")
    match = [t for t in d_triangles(g) if set(t) == tri]
    if not match:
        labs = sorted(g.label(u, v) for u, v in itertools.combinations(sorted(tri), 2))
        raise TwistError(f"labels {labs} with the given degrees are not a (2,2,odd) triangle with a degree-2 apex")
    x, y, apex = match[0]
    outside = {v: [u for u in g.neighbours(v) if u not in tri] for v in (x, y)}
    free = [v for v in (x, y) if not outside[v]]
    if not free:
        raise TwistError(f"both {x} and {y} have neighbours outside the triangle")
    # drop a vertex with nothing outside the triangle; prefer a '.c' copy, then the later one
    dotted = [v for v in free if v.endswith(".c")]
    a = dotted[0] if dotted else free[-1]
    t = y if a == x else x
    m = int(g.label(x, y))
    k = (m - 1) // 2
    name = apex[:-2] if apex.endswith(".d") and apex[:-2] not in g.vertices else apex
    verts = [v for v in g.vertices if v not in (a, apex)] + [name]
    edges = []
    for pair, lab in g.edges:
        if a in pair or apex in pair:
            continue
        u, v = sorted(pair, key=g.vertices.index)
        edges.append((u, v, lab))
    edges.append((t, name, 2 * m))
    exprs = {v: w for v, w in g.expressions if v not in (a, apex)}
    exprs[name] = _reduce(g, _expand(g, [apex, t] + [a, t] * k))
    return GeneralSystem.build(verts, edges, exprs, g.reference)


# --- normalisation ------------------------------------------------------------------------


@dataclass(frozen=True)
class Move:
    kind: str  # "twist" or "eliminate"
    detail: str
    twist: Optional[TwistMove] = None


def _prepare_triangle(g: GeneralSystem, tri: Tuple[str, str, str]) -> Tuple[GeneralSystem, List[Move]]:
    """Twist branches off one odd-edge vertex so that the triangle can be eliminated."""
    x, y, apex = tri
    moves: List[Move] = []
    if all(any(u not in tri for u in g.neighbours(v)) for v in (x, y)):
        graph = g.graph()
        ip = set(perp(g, (x, y)))
        rest = graph.subgraph([v for v in g.vertices if v not in (x, y) and v not in ip])
        J = sorted({v for u in g.neighbours(x) if u not in tri and u not in ip
                    for v in nx.node_connected_component(rest, u)}, key=g.vertices.index)
        mv = make_twist(g, (x, y), J)
        g = apply_twist(g, mv)
        moves.append(Move("twist", str(mv), mv))
    return g, moves


def tree_to_star(g: GeneralSystem) -> Tuple[GeneralSystem, List[TwistMove]]:
    graph = g.graph()
    if not nx.is_connected(graph) or not nx.is_tree(graph):
        raise TwistError("diagram is not a tree")
    for u, v, data in graph.edges(data=True):
        if data["label"] % 2 == 0 and graph.degree(u) > 1 and graph.degree(v) > 1:
            raise TwistError(f"even edge {u}-{v} (label {data['label']}) is not pendant")
    if g.is_star():
        return g, []
    odd = [v for v in g.vertices if any(g.label(v, u) % 2 for u in g.neighbours(v))]
    root = odd[0]
    moves: List[TwistMove] = []
    while True:
        parent: Dict[str, Optional[str]] = {root: None}
        depth = {root: 0}
        queue = [root]
        for v in queue:
            for u in g.neighbours(v):
                if u not in depth:
                    depth[u] = depth[v] + 1
                    parent[u] = v
                    queue.append(u)
        leaf = max(g.vertices, key=lambda v: (depth[v], -g.vertices.index(v)))
        if depth[leaf] <= 1:
            return g, moves
        s = parent[leaf]
        p = parent[s]
        J = [v for v in g.vertices if v not in (leaf, s, p)]
        mv = make_twist(g, (p, s), J)
        g = apply_twist(g, mv)
        moves.append(mv)


@dataclass(frozen=True)
class CanonicalForm:
    rank: int
    label_multiset: Tuple[int, ...]

    def __str__(self) -> str:
        return f"rank {self.rank} labels {' '.join(map(str, self.label_multiset))}"


@dataclass
class Normalization:
    form: CanonicalForm
    star: GeneralSystem
    moves: List[Move] = field(default_factory=list)


def normalize(g: GeneralSystem) -> Normalization:
    _require_class(g)
    moves: List[Move] = []
    while True:
        tris = d_triangles(g)
        if not tris:
            break
        tri = tris[0]
        g, pre = _prepare_triangle(g, tri)
        moves.extend(pre)
        g = triangle_eliminate(g, tri)
        moves.append(Move("eliminate", f"eliminate triangle {','.join(tri)}"))
    g, tmoves = tree_to_star(g)
    moves.extend(Move("twist", str(m), m) for m in tmoves)
    return Normalization(CanonicalForm(g.rank, g.label_multiset()), g, moves)


def canonical_form(g: GeneralSystem) -> CanonicalForm:
    return normalize(g).form


ISOMORPHIC = "isomorphic"
NOT_ISOMORPHIC = "not-isomorphic"
OUT_OF_CLASS = "out-of-class"


def decide_isomorphism(a: GeneralSystem, b: GeneralSystem) -> str:
    try:
        fa, fb = canonical_form(a), canonical_form(b)
    except TwistError:
        return OUT_OF_CLASS
    return ISOMORPHIC if fa == fb else NOT_ISOMORPHIC
