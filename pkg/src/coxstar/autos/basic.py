"""Automorphisms as image tables, and the named generators they are built from."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from ..diagram import StarSystem
from ..words import GroupElement, WordError, from_letters, make_delta, order, parse_word

KINDS = ("inner", "tau", "phi", "psi", "sigma", "diag")


class AutError(ValueError):
    pass


@dataclass(frozen=True)
class BasicAut:
    """One named generator. ``args`` depends on ``kind``:

    inner: (letters,)   tau: (i,)   phi: (i, t)   psi/sigma: (i, j)   diag: (permutation,)
    Permutations are 1-based image tuples: ``perm[k-1]`` is the image of leaf k.
    """

    kind: str
    args: tuple

    def __str__(self) -> str:
        if self.kind == "inner":
            (letters,) = self.args
            return "inner(" + (" ".join(f"s{x}" for x in letters) or "1") + ")"
        if self.kind == "diag":
            return "diag(" + format_cycles(self.args[0]) + ")"
        return f"{self.kind}(" + ",".join(map(str, self.args)) + ")"

    def inverse(self, sys: StarSystem) -> "BasicAut":
        if self.kind == "inner":
            return BasicAut("inner", (tuple(reversed(self.args[0])),))
        if self.kind == "phi":
            i, t = self.args
            return BasicAut("phi", (i, pow(t, -1, sys.m(i))))
        if self.kind == "diag":
            perm = self.args[0]
            inv = [0] * len(perm)
            for k, p in enumerate(perm, start=1):
                inv[p - 1] = k
            return BasicAut("diag", (tuple(inv),))
        return self  # tau, psi, sigma are involutions


def tau(i: int) -> BasicAut:
    return BasicAut("tau", (i,))


def phi(i: int, t: int) -> BasicAut:
    return BasicAut("phi", (i, t))


def psi(i: int, j: int) -> BasicAut:
    return BasicAut("psi", (i, j))


def sigma(i: int, j: int) -> BasicAut:
    return BasicAut("sigma", (i, j))


def diag(perm: Sequence[int]) -> BasicAut:
    return BasicAut("diag", (tuple(perm),))


def inner(w) -> BasicAut:
    letters = w.letters() if isinstance(w, GroupElement) else tuple(w)
    return BasicAut("inner", (tuple(letters),))


@dataclass(frozen=True)
class Automorphism:
    """Images of s0..sn. Equality compares image tables only."""

    system: StarSystem
    images: Tuple[GroupElement, ...]
    provenance: Optional[Tuple[BasicAut, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.images) != self.system.rank:
            raise AutError(f"need {self.system.rank} images, got {len(self.images)}")

    def __call__(self, g: GroupElement) -> GroupElement:
        return apply(self, g)

    def __matmul__(self, other: "Automorphism") -> "Automorphism":
        return compose(self, other)

    def is_identity(self) -> bool:
        return all(img == GroupElement.gen(self.system, k) for k, img in enumerate(self.images))

    def table(self) -> List[str]:
        return [f"s{k} -> {img}" for k, img in enumerate(self.images)]

    def __str__(self) -> str:
        return "\n".join(self.table())


def identity_aut(sys: StarSystem) -> Automorphism:
    return Automorphism(sys, tuple(GroupElement.gen(sys, k) for k in range(sys.rank)), ())


def _check_leaf(sys: StarSystem, i, what: str) -> int:
    if not isinstance(i, int) or not 1 <= i <= sys.n:
        raise AutError(f"{what}: leaf index {i!r} out of range 1..{sys.n}")
    return i


def make_basic(sys: StarSystem, b: BasicAut) -> Automorphism:
    gens = [GroupElement.gen(sys, k) for k in range(sys.rank)]
    s0 = gens[0]
    k = b.kind
    if k == "inner":
        w = from_letters(sys, b.args[0])
        images = [g.conj(w) for g in gens]
    elif k == "tau":
        (i,) = b.args
        _check_leaf(sys, i, "tau")
        if sys.m(i) != 2:
            raise AutError(f"tau({i}) needs m_{i} = 2, got {sys.m(i)}")
        images = list(gens)
        images[i] = s0 * gens[i]
    elif k == "phi":
        i, t = b.args
        _check_leaf(sys, i, "phi")
        m = sys.m(i)
        if m == 2:
            raise AutError(f"phi({i},{t}): leaf {i} has label 2")
        if not (isinstance(t, int) and 1 <= t < m and math.gcd(t, m) == 1):
            raise AutError(f"phi({i},{t}): need 1 <= t < {m} with gcd(t, {m}) = 1")
        images = list(gens)
        images[i] = gens[i] * (s0 * gens[i]) ** (t - 1)
    elif k in ("psi", "sigma"):
        i, j = b.args
        _check_leaf(sys, i, k)
        _check_leaf(sys, j, k)
        if i == j:
            raise AutError(f"{b}: indices must differ")
        if k == "psi":
            if sys.m(i) % 2:
                raise AutError(f"{b}: m_{i} = {sys.m(i)} is odd")
            c = make_delta(sys, i)
        else:
            if sys.m(i) != 2:
                raise AutError(f"{b}: needs m_{i} = 2")
            c = gens[i]
        images = list(gens)
        images[j] = c * gens[j] * c
    elif k == "diag":
        (perm,) = b.args
        if sorted(perm) != list(range(1, sys.n + 1)):
            raise AutError(f"{b}: not a permutation of 1..{sys.n}")
        for a, p in enumerate(perm, start=1):
            if sys.m(a) != sys.m(p):
                raise AutError(f"{b}: moves leaf {a} (label {sys.m(a)}) to leaf {p} (label {sys.m(p)})")
        images = [s0] + [gens[p] for p in perm]
    else:
        raise AutError(f"unknown kind {k!r}")
    return Automorphism(sys, tuple(images), (b,))


def apply(a: Automorphism, g: GroupElement) -> GroupElement:
    if a.system != g.system:
        raise AutError("automorphism and element belong to different systems")
    # rho_j = s0 s_j, so each syllable rho_j^r maps to (a(s0) a(s_j))^r
    out = GroupElement.identity(a.system)
    s0 = a.images[0]
    for j, r in g.syllables:
        out = out * (s0 * a.images[j]) ** r
    return out * s0 if g.tail else out


def compose(a: Automorphism, b: Automorphism) -> Automorphism:
    """a after b."""
    if a.system != b.system:
        raise AutError("automorphisms of different systems")
    prov = None
    if a.provenance is not None and b.provenance is not None:
        prov = a.provenance + b.provenance
    return Automorphism(a.system, tuple(apply(a, img) for img in b.images), prov)


def compose_all(sys: StarSystem, auts: Iterable[Automorphism]) -> Automorphism:
    out = identity_aut(sys)
    for a in auts:
        out = compose(out, a)
    return out


def from_basics(sys: StarSystem, basics: Iterable[BasicAut]) -> Automorphism:
    return compose_all(sys, (make_basic(sys, b) for b in basics))


def invert_aut(a: Automorphism) -> Automorphism:
    if a.provenance is None:
        from .factorize import factorize_automorphism

        a = Automorphism(a.system, a.images, factorize_automorphism(a).basics())
    sys = a.system
    return from_basics(sys, [b.inverse(sys) for b in reversed(a.provenance)])


@dataclass(frozen=True)
class Verdict:
    ok: bool
    failure: Optional[str] = None
    factorization: Optional[object] = None

    def __bool__(self) -> bool:
        return self.ok


def check_relations(sys: StarSystem, images: Sequence[GroupElement]) -> Optional[str]:
    """First defining relation violated by the images, or None."""
    if len(images) != sys.rank:
        return f"image table has {len(images)} entries, expected {sys.rank}"
    for k, img in enumerate(images):
        if img.system != sys:
            return f"image of s{k} lives in another system"
        if order(img) != 2:
            return f"s{k}^2: image {img} has order {order(img)}"
    for j in sys.leaves:
        m = sys.m(j)
        if not ((images[0] * images[j]) ** m).is_identity():
            o = order(images[0] * images[j])
            return f"(s0 s{j})^{m}: image pair has order {o}"
    return None


def verify_is_automorphism(sys: StarSystem, images: Sequence[GroupElement]) -> Verdict:
    bad = check_relations(sys, images)
    if bad:
        return Verdict(False, bad)
    from .factorize import FactorizationError, factorize_automorphism

    a = Automorphism(sys, tuple(images))
    try:
        f = factorize_automorphism(a)
    except FactorizationError as exc:
        return Verdict(False, f"not invertible: {exc}")
    return Verdict(True, None, f)


# --- text format ----------------------------------------------------------------

_MAP = re.compile(r"^s(\d+)\s*->\s*(.*)$")


def format_cycles(perm: Sequence[int]) -> str:
    seen = set()
    parts = []
    for start in range(1, len(perm) + 1):
        if start in seen or perm[start - 1] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start - 1]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x - 1]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts)


def parse_cycles(text: str, n: int) -> Tuple[int, ...]:
    perm = list(range(1, n + 1))
    for body in re.findall(r"\(([^()]*)\)", text):
        pts = [int(x) for x in body.replace(",", " ").split()]
        if len(set(pts)) != len(pts) or any(not 1 <= p <= n for p in pts):
            raise AutError(f"bad cycle ({body}) for {n} leaves")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a - 1] = b
    if re.sub(r"\([^()]*\)", "", text).strip():
        raise AutError(f"bad cycle notation {text!r}")
    return tuple(perm)


def _split_literals(line: str) -> List[Tuple[str, str]]:
    out = []
    pos = 0
    while pos < len(line):
        if line[pos] in " \t*":
            pos += 1
            continue
        m = re.match(r"[a-z]+", line[pos:])
        if not m or pos + m.end() >= len(line) or line[pos + m.end()] != "(":
            raise AutError(f"expected a literal like phi(1,2) at {line[pos:]!r}")
        name = m.group(0)
        depth = 0
        start = pos + m.end()
        for q in range(start, len(line)):
            depth += {"(": 1, ")": -1}.get(line[q], 0)
            if depth == 0:
                out.append((name, line[start + 1:q]))
                pos = q + 1
                break
        else:
            raise AutError(f"unbalanced parentheses in {line!r}")
    return out


def parse_literal(sys: StarSystem, name: str, body: str) -> BasicAut:
    def ints(k):
        try:
            vals = tuple(int(x) for x in body.split(","))
        except ValueError:
            raise AutError(f"{name}({body}): expected integers") from None
        if len(vals) != k:
            raise AutError(f"{name}({body}): expected {k} argument(s)")
        return vals

    if name == "inner":
        try:
            return inner(parse_word(sys, body).letters())
        except WordError as exc:
            raise AutError(str(exc)) from None
    if name == "diag":
        return diag(parse_cycles(body, sys.n))
    if name == "tau":
        return tau(*ints(1))
    if name in ("phi", "psi", "sigma"):
        return BasicAut(name, ints(2))
    raise AutError(f"unknown literal {name!r}")


def parse_automorphism(sys: StarSystem, text) -> Automorphism:
    """Either ``s<i> -> <word>`` lines (missing generators are fixed) or lines of
    literals, read as one composition from left to right and top to bottom."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    images = {}
    basics: List[BasicAut] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            m = _MAP.match(line)
            if m:
                k = int(m.group(1))
                if not 0 <= k <= sys.n:
                    raise AutError(f"generator s{k} out of range")
                if k in images:
                    raise AutError(f"s{k} given twice")
                images[k] = parse_word(sys, m.group(2))
            else:
                basics.extend(parse_literal(sys, n, b) for n, b in _split_literals(line))
        except (AutError, WordError) as exc:
            raise AutError(f"line {lineno}: {exc}") from None
    if images and basics:
        raise AutError("mix of image lines and literals")
    if images:
        return Automorphism(sys, tuple(images.get(k, GroupElement.gen(sys, k)) for k in range(sys.rank)))
    return from_basics(sys, basics)
