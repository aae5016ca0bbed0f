"""Word problem for star-shaped Coxeter groups.

W is the amalgam W_1 *_{<s0>} ... *_{<s0>} W_n of the dihedral factors W_i = <s0, si>.
Inside W_i we write rho_i = s0 si, so an element of W_i is rho_i^r s0^f.  The right cosets
rho_i^r <s0> are represented by the rotations rho_i^r (r != 0), which gives the normal form

    rho_{i_1}^{r_1} rho_{i_2}^{r_2} ... rho_{i_k}^{r_k} s0^tail

with consecutive factor indices distinct and every r_j nonzero mod m_{i_j}.  The s0 tail is
always pushed to the right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .diagram import StarSystem

INFINITY = math.inf


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class DihedralElement:
    """rho^rotation * s0^reflected inside the factor W_factor (rho = s0 s_factor)."""

    m: int
    factor: int
    rotation: int
    reflected: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rotation", self.rotation % self.m)

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        if other.factor != self.factor or other.m != self.m:
            raise WordError("dihedral elements from different factors")
        r = self.rotation - other.rotation if self.reflected else self.rotation + other.rotation
        return DihedralElement(self.m, self.factor, r, self.reflected != other.reflected)

    def inverse(self) -> "DihedralElement":
        if self.reflected:
            return self
        return DihedralElement(self.m, self.factor, -self.rotation, False)

    def order(self) -> int:
        if self.reflected:
            return 2
        if self.rotation == 0:
            return 1
        return self.m // math.gcd(self.m, self.rotation)

    def is_identity(self) -> bool:
        return self.rotation == 0 and not self.reflected


def _rot_letters(j: int, r: int, m: int) -> List[int]:
    # shortest of (s0 sj)^r and (sj s0)^(m-r)
    if r <= m - r:
        return [0, j] * r
    return [j, 0] * (m - r)


def _dihedral_letters(j: int, r: int, f: bool, m: int) -> List[int]:
    """Shortest word for rho^r s0^f in <s0, sj>, lexicographic tie-break."""
    r %= m
    if not f:
        return _rot_letters(j, r, m)
    a = [0, j] * r + [0]                    # (s0 sj)^r s0
    b = ([j, 0] * (m - r))[:-1]             # (sj s0)^(m-r) s0, last pair cancelled
    if len(a) != len(b):
        return a if len(a) < len(b) else b
    return min(a, b)


def _shortest_letters(sys: StarSystem, syls, tail: bool) -> List[int]:
    # segment i is s0^b(i-1) rho^r s0^b(i); choose interior bits b to minimise length
    if not syls:
        return [0] if tail else []
    best = {False: (0, [])}
    for idx, (j, r) in enumerate(syls):
        m = sys.m(j)
        ends = (tail,) if idx == len(syls) - 1 else (False, True)
        nxt = {}
        for b_in, (ln, w) in best.items():
            rr = -r if b_in else r
            for b_out in ends:
                seg = _dihedral_letters(j, rr, b_out != b_in, m)
                cand = (ln + len(seg), w + seg)
                if b_out not in nxt or cand < nxt[b_out]:
                    nxt[b_out] = cand
        best = nxt
    return next(iter(best.values()))[1]


@dataclass(frozen=True)
class GroupElement:
    system: StarSystem
    syllables: Tuple[Tuple[int, int], ...] = ()  # (factor, rotation) pairs
    tail: bool = False

    # --- construction ---------------------------------------------------------
    @classmethod
    def identity(cls, sys: StarSystem) -> "GroupElement":
        return cls(sys)

    @classmethod
    def gen(cls, sys: StarSystem, i: int) -> "GroupElement":
        return from_letters(sys, [i])

    # --- arithmetic -----------------------------------------------------------
    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __invert__(self) -> "GroupElement":
        return invert(self)

    def __pow__(self, k: int) -> "GroupElement":
        if k < 0:
            return invert(self) ** (-k)
        result = GroupElement(self.system)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self, w: "GroupElement") -> "GroupElement":
        """w self w^-1."""
        return w * self * invert(w)

    # --- inspection -----------------------------------------------------------
    def is_identity(self) -> bool:
        return not self.syllables and not self.tail

    def dihedral_syllables(self) -> Tuple[DihedralElement, ...]:
        sys = self.system
        return tuple(DihedralElement(sys.m(j), j, r) for j, r in self.syllables)

    def letters(self) -> Tuple[int, ...]:
        return tuple(_shortest_letters(self.system, self.syllables, self.tail))

    def __len__(self) -> int:
        return len(self.letters())

    def __str__(self) -> str:
        return format_word(self.letters())

    def __repr__(self) -> str:
        return f"GroupElement({self})"


def format_word(letters: Sequence[int]) -> str:
    return " ".join(f"s{x}" for x in letters) if letters else "1"


def parse_word(sys: StarSystem, text: str) -> GroupElement:
    """Whitespace separated tokens ``s0 .. sn``; ``1`` or ``e`` (or nothing) is the identity."""
    letters = []
    for tok in text.replace(",", " ").split():
        if tok in ("1", "e"):
            continue
        if not (tok.startswith("s") and tok[1:].isdigit()):
            raise WordError(f"bad token {tok!r}; expected s0..s{sys.n}")
        letters.append(int(tok[1:]))
    return from_letters(sys, letters)


def _mul_factor(sys: StarSystem, syls: List[Tuple[int, int]], tail: bool,
                j: int, r: int, f: bool) -> bool:
    """In place: (syls, tail) * (rho_j^r s0^f); returns the new tail."""
    m = sys.m(j)
    if tail:
        r = -r
    r %= m
    if syls and syls[-1][0] == j:
        r = (syls.pop()[1] + r) % m
    if r:
        syls.append((j, r))
    return tail != f


def from_letters(sys: StarSystem, letters: Iterable[int]) -> GroupElement:
    syls: List[Tuple[int, int]] = []
    tail = False
    for x in letters:
        if x == 0:
            tail = not tail
        elif 1 <= x <= sys.n:
            # s_x = rho_x^{-1} s0
            tail = _mul_factor(sys, syls, tail, x, -1, True)
        else:
            raise WordError(f"letter {x} out of range 0..{sys.n}")
    return GroupElement(sys, tuple(syls), tail)


def from_dihedral(sys: StarSystem, d: DihedralElement) -> GroupElement:
    syls: List[Tuple[int, int]] = []
    tail = _mul_factor(sys, syls, False, d.factor, d.rotation, d.reflected)
    return GroupElement(sys, tuple(syls), tail)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    if a.system != b.system:
        raise WordError("elements belong to different systems")
    sys = a.system
    syls = list(a.syllables)
    tail = a.tail
    for j, r in b.syllables:
        tail = _mul_factor(sys, syls, tail, j, r, False)
    return GroupElement(sys, tuple(syls), tail != b.tail)


def invert(a: GroupElement) -> GroupElement:
    sys = a.system
    syls: List[Tuple[int, int]] = []
    tail = a.tail
    for j, r in reversed(a.syllables):
        tail = _mul_factor(sys, syls, tail, j, -r, False)
    return GroupElement(sys, tuple(syls), tail)


def make_delta(sys: StarSystem, i: int) -> GroupElement:
    """Longest element of W_i."""
    m = sys.m(i)
    if m % 2:
        return from_letters(sys, [i] + [0, i] * ((m - 1) // 2))
    return from_letters(sys, [0, i] * (m // 2))


def cyclically_reduce(a: GroupElement) -> Tuple[GroupElement, GroupElement]:
    """Return (core, conjugator) with a = conjugator * core * conjugator^-1.

    The core has at most one syllable, or at least two syllables whose first and last
    factors differ.  A one-syllable reflection core is moved inside its factor to s0 when
    that is possible there, and to the leaf generator otherwise.
    """
    sys = a.system
    g = a
    conj = GroupElement(sys)
    while len(g.syllables) >= 2 and g.syllables[0][0] == g.syllables[-1][0]:
        x = GroupElement(sys, (g.syllables[0],))
        g = invert(x) * g * x
        conj = conj * x
    if len(g.syllables) == 1 and g.tail:
        j, r = g.syllables[0]
        m = sys.m(j)
        if m % 2 or r % 2 == 0:
            b = (r * pow(2, -1, m)) % m if m % 2 else r // 2
            core = GroupElement(sys, (), True)
        else:
            b = (r + 1) // 2
            core = from_letters(sys, [j])
        u = GroupElement(sys, ((j, b),)) if b % m else GroupElement(sys)
        return core, _shorten(conj * u, j if core.syllables else 0)
    return g, conj


def _shorten(conj: "GroupElement", k: int) -> "GroupElement":
    """Trim a conjugator of s_k on the right by elements of C(s_k)."""
    gens = centralizer_generators(conj.system, k)
    gens += [~c for c in gens]
    while True:
        best = min((conj * c for c in gens), key=len)
        if len(best) >= len(conj):
            return conj
        conj = best


def order(a: GroupElement):
    """Order of ``a`` (an int, or ``INFINITY``)."""
    core, _ = cyclically_reduce(a)
    if len(core.syllables) >= 2:
        return INFINITY
    if len(core.syllables) == 1:
        j, r = core.syllables[0]
        return DihedralElement(a.system.m(j), j, r, core.tail).order()
    return 2 if core.tail else 1


@dataclass(frozen=True)
class ParityVector:
    """Letter-count parities: coordinate 0 for the class of s0, then one per even leaf."""

    bits: Tuple[int, ...]
    even_leaves: Tuple[int, ...]

    def __add__(self, other: "ParityVector") -> "ParityVector":
        if self.even_leaves != other.even_leaves:
            raise WordError("parity vectors of different systems")
        return ParityVector(tuple((x + y) % 2 for x, y in zip(self.bits, other.bits)), self.even_leaves)

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.bits)) + ")"


def parity(a: GroupElement) -> ParityVector:
    sys = a.system
    evens = tuple(sorted(sys.I_even))
    pos = {j: k + 1 for k, j in enumerate(evens)}
    bits = [0] * (1 + len(evens))
    for j, r in a.syllables:
        if j in pos:
            bits[0] += r
            bits[pos[j]] += r
    bits[0] += a.tail
    return ParityVector(tuple(b % 2 for b in bits), evens)


def parity_of_letters(sys: StarSystem, letters: Iterable[int]) -> ParityVector:
    evens = tuple(sorted(sys.I_even))
    pos = {j: k + 1 for k, j in enumerate(evens)}
    bits = [0] * (1 + len(evens))
    for x in letters:
        bits[pos.get(x, 0)] += 1
    return ParityVector(tuple(b % 2 for b in bits), evens)


def commutes_with(a: GroupElement, b: GroupElement) -> bool:
    return a * b == b * a


def centralizer_generators(sys: StarSystem, i: int) -> List[GroupElement]:
    if i == 0:
        return [GroupElement.gen(sys, 0)] + [make_delta(sys, j) for j in sorted(sys.I_even)]
    if not 1 <= i <= sys.n:
        raise IndexError(f"generator index {i} out of range 0..{sys.n}")
    if sys.m(i) % 2:
        return [GroupElement.gen(sys, i)]
    return [GroupElement.gen(sys, i), make_delta(sys, i)]


def delta_letters(a: GroupElement) -> Optional[Tuple[bool, Tuple[int, ...]]]:
    """If ``a`` lies in C_W(s0) = <s0> x <Delta_j : j even>, return (s0 exponent, the
    Delta-indices of its reduced word); otherwise None."""
    sys = a.system
    out = []
    for j, r in a.syllables:
        m = sys.m(j)
        if m % 2 or r != m // 2:
            return None
        out.append(j)
    return a.tail, tuple(out)


def delta_word(sys: StarSystem, indices: Iterable[int]) -> GroupElement:
    """Product of Delta_j over the given (even) indices."""
    return GroupElement(sys, tuple((j, sys.m(j) // 2) for j in _free_reduce(indices)))


def _free_reduce(indices: Iterable[int]) -> List[int]:
    out: List[int] = []
    for j in indices:
        if out and out[-1] == j:
            out.pop()
        else:
            out.append(j)
    return out


# --- Tits-move oracle (testing only) ------------------------------------------


def _braid_neighbours(sys: StarSystem, w: Tuple[int, ...]):
    n = len(w)
    for p in range(n - 1):
        a, b = w[p], w[p + 1]
        if a == b or (a != 0 and b != 0):
            continue
        j = a or b
        m = sys.m(j)
        if p + m > n:
            continue
        if all(w[p + q] == (a if q % 2 == 0 else b) for q in range(m)):
            swapped = tuple(b if q % 2 == 0 else a for q in range(m))
            yield w[:p] + swapped + w[p + m:]


def tits_reduce(sys: StarSystem, letters: Sequence[int], budget: int = 10**6) -> Optional[Tuple[int, ...]]:
    """Tits' algorithm: delete ``ss`` whenever a braid-equivalent word shows one.

    Returns the lexicographically least reduced word representing the input, or None when
    more than ``budget`` words were visited.
    """
    current = tuple(letters)
    for x in current:
        if not 0 <= x <= sys.n:
            raise WordError(f"letter {x} out of range 0..{sys.n}")
    visited = 0
    while True:
        seen = {current}
        stack = [current]
        shorter = None
        while stack:
            w = stack.pop()
            for p in range(len(w) - 1):
                if w[p] == w[p + 1]:
                    shorter = w[:p] + w[p + 2:]
                    break
            if shorter is not None:
                break
            for w2 in _braid_neighbours(sys, w):
                if w2 not in seen:
                    visited += 1
                    if visited > budget:
                        return None
                    seen.add(w2)
                    stack.append(w2)
        if shorter is None:
            return min(seen)
        current = shorter


def tits_oracle_equal(sys: StarSystem, u: Sequence[int], v: Sequence[int],
                      budget: int = 10**6) -> Optional[bool]:
    """Decide u = v by reducing u v^-1 with nil- and braid-moves; None if the budget runs out."""
    reduced = tits_reduce(sys, tuple(u) + tuple(reversed(v)), budget)
    if reduced is None:
        return None
    return reduced == ()
