"""Split an automorphism as inner(w) . p . t . diag(rho).

Outline: conjugate a(s0) back to s0, read off which dihedral factor each W_i lands in
(that is rho), undo the local twist inside each factor (transvections and phi's), and
finally peel the remaining conjugators, which live in <Delta_j : j even>, with psi moves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..diagram import StarSystem
from ..words import GroupElement, _free_reduce, cyclically_reduce, delta_letters, make_delta
from .basic import (
    Automorphism,
    BasicAut,
    check_relations,
    diag,
    from_basics,
    inner,
    phi,
    psi,
    tau,
)


class FactorizationError(ValueError):
    pass


@dataclass(frozen=True)
class Factorization:
    system: StarSystem
    w: GroupElement
    p: Tuple[BasicAut, ...]
    t: Tuple[int, ...]
    rho: Tuple[int, ...]

    def basics(self) -> Tuple[BasicAut, ...]:
        out: List[BasicAut] = []
        if not self.w.is_identity():
            out.append(inner(self.w))
        out.extend(self.p)
        out.extend(tau(i) for i in self.t)
        if list(self.rho) != list(range(1, self.system.n + 1)):
            out.append(diag(self.rho))
        return tuple(out)

    def recompose(self) -> Automorphism:
        return from_basics(self.system, self.basics())

    def __str__(self) -> str:
        return " ".join(map(str, self.basics())) or "identity"


def _locate(sys: StarSystem, image: GroupElement, m: int, i: int) -> Tuple[int, GroupElement]:
    """Factor j and x with <s0, image> inside x W_j x^-1 (image = a(s_i), a(s0) = s0)."""
    s0 = GroupElement.gen(sys, 0)
    cands = [s0 * image] if m > 2 else [s0 * image, image]
    for g in cands:
        core, x = cyclically_reduce(g)
        if len(core.syllables) == 1 and not core.tail:
            return core.syllables[0][0], x
    raise FactorizationError(f"image of s{i} does not generate a finite dihedral group with s0")


def _into_centralizer(sys: StarSystem, x: GroupElement, j: int, i: int) -> GroupElement:
    """Adjust x by u in W_j so that (x u) commutes with s0."""
    s0 = GroupElement.gen(sys, 0)
    z = ~x * s0 * x
    if z == s0:
        return x
    m = sys.m(j)
    if len(z.syllables) != 1 or z.syllables[0][0] != j or not z.tail:
        raise FactorizationError(f"s{i}: s0 is not in the conjugate of W_{j} found")
    r = z.syllables[0][1]
    if m % 2:
        b = r * pow(2, -1, m) % m
    elif r % 2 == 0:
        b = r // 2
    else:
        raise FactorizationError(f"s{i}: conjugate of s0 is not conjugate to s0 inside W_{j}")
    return x * GroupElement(sys, ((j, b),))


def _strip(d: List[int], i: int, even: bool) -> List[int]:
    d = _free_reduce(d)
    if even and d and d[-1] == i:
        d.pop()
    return d


def _peel(sys: StarSystem, d: Dict[int, List[int]]) -> List[Tuple[int, int]]:
    """psi moves (j, i) with a . psi_{j,i1} . psi_{j,i2} ... trivial; d_i are Delta-words."""
    evens = sorted(sys.I_even)
    moves: List[Tuple[int, int]] = []

    def after(state, j, i):
        c = state[j] + [j] + state[j][::-1]
        return _strip(c + state[i], i, i in sys.I_even)

    def total(state):
        return sum(len(v) for v in state.values())

    cand = [(j, i) for j in evens for i in sys.leaves if i != j]
    guard = 0
    while total(d):
        guard += 1
        if guard > 10_000:
            raise FactorizationError("conjugator reduction did not terminate")
        cur = total(d)
        best = None
        for j, i in cand:
            new = len(after(d, j, i)) - len(d[i])
            if new < 0 and (best is None or new < best[0]):
                best = (new, j, i)
        if best is not None:
            _, j, i = best
            d[i] = after(d, j, i)
            moves.append((j, i))
            continue
        # no single move shortens the tuple; look two moves ahead
        found = None
        for j1, i1 in cand:
            s1 = dict(d)
            s1[i1] = after(d, j1, i1)
            for j2, i2 in cand:
                if (j2, i2) == (j1, i1):
                    continue
                s2 = dict(s1)
                s2[i2] = after(s1, j2, i2)
                if total(s2) < cur:
                    found = (s2, [(j1, i1), (j2, i2)])
                    break
            if found:
                break
        if not found:
            bad = min(i for i in d if d[i])
            raise FactorizationError(f"s{bad}: conjugator in Delta cannot be removed by psi moves")
        d.clear()
        d.update(found[0])
        moves.extend(found[1])
    return moves


def factorize_automorphism(a: Automorphism, check: bool = True) -> Factorization:
    sys = a.system
    bad = check_relations(sys, a.images)
    if bad:
        raise FactorizationError(f"relations fail: {bad}")
    s0 = GroupElement.gen(sys, 0)

    # (1) a(s0) is conjugate to s0; the conjugator is only fixed up to C(s0), so try a
    # few representatives and keep the shortest product
    core, w1 = cyclically_reduce(a.images[0])
    if core != s0:
        raise FactorizationError(f"s0: image {a.images[0]} is not conjugate to s0")
    shifts = [GroupElement.identity(sys), s0]
    for j in sorted(sys.I_even):
        d = make_delta(sys, j)
        shifts += [d, s0 * d]
    best = None
    for c in shifts:
        f = _factorize_from(a, w1 * c)
        if best is None or len(f.basics()) < len(best.basics()):
            best = f
    if check and best.recompose() != a:
        raise FactorizationError("recomposition does not reproduce the automorphism")
    return best


def _factorize_from(a: Automorphism, w1: GroupElement) -> Factorization:
    sys = a.system
    s0 = GroupElement.gen(sys, 0)
    w1inv = ~w1
    a1 = [w1inv * img * w1 for img in a.images]

    # (2) which factor each W_i lands in
    perm: List[int] = [0] * sys.n
    located: Dict[int, Tuple[GroupElement, GroupElement]] = {}
    for i in sys.leaves:
        j, x = _locate(sys, a1[i], sys.m(i), i)
        if sys.m(j) != sys.m(i):
            raise FactorizationError(f"s{i}: lands in W_{j} whose label {sys.m(j)} differs from {sys.m(i)}")
        if j in located:
            raise FactorizationError(f"s{i}: W_{j} is already the target of another generator")
        perm[i - 1] = j
        located[j] = (a1[i], x)

    # (3) local part in each factor; a2 = a1 . diag(perm)^-1 sends s_j to located[j][0]
    t_part: List[int] = []
    p1: Dict[int, int] = {}
    xs: Dict[int, GroupElement] = {}
    for j in sys.leaves:
        b, x = located[j]
        xj = _into_centralizer(sys, x, j, j)
        y = ~xj * b * xj
        m = sys.m(j)
        if len(y.syllables) > 1 or (y.syllables and y.syllables[0][0] != j):
            raise FactorizationError(f"s{j}: conjugated image {y} is not in W_{j}")
        if m == 2:
            if y == GroupElement.gen(sys, j):
                pass
            elif y == s0 * GroupElement.gen(sys, j):
                t_part.append(j)
            else:
                raise FactorizationError(f"s{j}: local image {y} does not generate W_{j} with s0")
        else:
            if not y.tail or not y.syllables:
                raise FactorizationError(f"s{j}: local image {y} is not a reflection other than s0")
            t = (-y.syllables[0][1]) % m
            if math.gcd(t, m) != 1:
                raise FactorizationError(f"s{j}: local image {y} generates a proper subgroup of W_{j}")
            if t != 1:
                p1[j] = t
        xs[j] = xj

    # (4) a3(s_j) = x_j s_j x_j^-1 with x_j = s0^e d_j; fold s0 into phi_{j,m-1}
    d: Dict[int, List[int]] = {}
    for j in sys.leaves:
        dl = delta_letters(xs[j])
        if dl is None:
            raise FactorizationError(f"s{j}: conjugator {xs[j]} does not centralize s0")
        e, idx = dl
        m = sys.m(j)
        if e and m != 2:
            # phi_{j,m-1} o phi_{j,t} = phi_{j,-t}
            p1[j] = (-p1.get(j, 1)) % m
            if p1[j] == 1:
                del p1[j]
        d[j] = _strip(list(idx), j, m % 2 == 0)

    # (5) Delta-conjugators
    moves = _peel(sys, d)

    p = tuple(psi(j, i) for j, i in reversed(moves)) + tuple(phi(j, t) for j, t in sorted(p1.items()))
    return Factorization(sys, w1, p, tuple(sorted(t_part)), tuple(perm))


def spe_class_of_image(img: GroupElement) -> Optional[Tuple[str, int]]:
    """Conjugacy class tag of an involution, as (tag, leaf) with leaf 0 for central-odd."""
    core, _ = cyclically_reduce(img)
    sys = img.system
    if core == GroupElement.gen(sys, 0):
        return ("central-odd", 0)
    if len(core.syllables) == 1 and core.tail:
        j = core.syllables[0][0]
        return ("even-leaf", j)
    return None


def spe_membership(a: Automorphism) -> bool:
    """True iff every generator lands in its own conjugacy class."""
    from ..diagram import generator_class

    sys = a.system
    for k, img in enumerate(a.images):
        want = generator_class(sys, k)
        got = spe_class_of_image(img)
        if got is None or (want.tag, want.leaf or 0) != got:
            return False
    return True
