"""``coxstar`` command line.

Exit codes: 0 success, 1 a check failed (or, for ``iso``, not isomorphic), 2 ``iso`` on
an out-of-class diagram, 64 usage error, 66 unreadable or malformed input file.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .autos import (
    AutError,
    Automorphism,
    FactorizationError,
    apply,
    build_complement_Q,
    check_center_P2,
    compose_all,
    factorize_automorphism,
    from_basics,
    parse_automorphism,
    relation_suite,
    spe_membership,
    structure_report,
    verify_is_automorphism,
)
from .diagram import (
    DiagramError,
    GeneralSystem,
    StarSystem,
    diagram_automorphisms,
    generator_class,
    hyperbolicity_report,
    index_partitions,
    is_hyperbolic,
    parse_any,
    parse_star,
)
from .sampling import random_basics, random_word, tits_variant
from .twist import (
    ISOMORPHIC,
    NOT_ISOMORPHIC,
    TwistError,
    apply_twist,
    class_violation,
    decide_isomorphism,
    make_twist,
    normalize,
)
from .words import WordError, from_letters, order, parse_word, tits_oracle_equal

EX_USAGE = 64
EX_NOINPUT = 66


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


@dataclass
class Report:
    command: str
    inputs: List[Dict[str, str]] = field(default_factory=list)
    results: Dict[str, Any] = field(default_factory=dict)
    failures: List[Dict[str, str]] = field(default_factory=list)

    def fail(self, check: str, witness: str) -> None:
        self.failures.append({"check": check, "witness": witness})

    def to_json(self) -> str:
        doc = {"command": self.command, "inputs": self.inputs, "results": self.results, "failures": self.failures}
        return json.dumps(doc, indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"# {self.command}"]
        for inp in self.inputs:
            lines.append(f"# input {inp['path']} sha256:{inp['sha256'][:16]}")
        _render(self.results, 0, lines)
        for f in self.failures:
            lines.append(f"FAIL {f['check']}: {f['witness']}")
        return "\n".join(lines)


def _render(value: Any, indent: int, lines: List[str]) -> None:
    pad = "  " * indent
    for key, val in value.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            _render(val, indent + 1, lines)
        elif isinstance(val, list) and val and all(isinstance(v, str) for v in val) and any(" " in v for v in val):
            lines.append(f"{pad}{key}:")
            lines.extend(f"{pad}  {v}" for v in val)
        elif isinstance(val, list):
            lines.append(f"{pad}{key}: " + (" ".join(map(_scalar, val)) if val else "-"))
        else:
            lines.append(f"{pad}{key}: {_scalar(val)}")


def _scalar(v: Any) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, list):
        return "[" + " ".join(map(_scalar, v)) + "]"
    return str(v)


# --- input helpers --------------------------------------------------------------------


def _read(path: str, rep: Report) -> bytes:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    rep.inputs.append({"path": path, "sha256": hashlib.sha256(data).hexdigest()})
    return data


def _star(path: str, rep: Report) -> StarSystem:
    data = _read(path, rep)
    try:
        return parse_star(data)
    except DiagramError as exc:
        raise InputError(f"{path}: {exc}") from None


def _diagram(path: str, rep: Report) -> GeneralSystem:
    data = _read(path, rep)
    try:
        return parse_any(data)
    except DiagramError as exc:
        raise InputError(f"{path}: {exc}") from None


def _aut(sys_: StarSystem, path: str, rep: Report) -> Automorphism:
    data = _read(path, rep)
    try:
        return parse_automorphism(sys_, data)
    except (AutError, WordError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _word(sys_: StarSystem, text: str):
    try:
        return parse_word(sys_, text)
    except WordError as exc:
        raise UsageError(str(exc)) from None


def _fmt_set(s) -> List[int]:
    return sorted(s)


# --- commands ----------------------------------------------------------------------------


def cmd_info(args, rep: Report) -> None:
    data = _read(args.file, rep)
    try:
        g = parse_any(data)
    except DiagramError as exc:
        raise InputError(f"{args.file}: {exc}") from None
    if g.reference is None:
        hyp = hyperbolicity_report(g.coxeter_matrix())
        why = class_violation(g)
        rep.results.update({
            "vertices": list(g.vertices),
            "edges": [f"{a}-{b}:{m}" for a, b, m in _edge_list(g)],
            "star": g.is_star(),
            "in_class": why is None,
            "class_note": why,
            "hyperbolic": hyp.hyperbolic,
        })
        return
    s = g.reference
    I_odd, I_even, I_2 = index_partitions(s)
    dg = diagram_automorphisms(s)
    rep.results.update({
        "labels": list(s.labels),
        "n": s.n,
        "I_odd": _fmt_set(I_odd),
        "I_even": _fmt_set(I_even),
        "I_2": _fmt_set(I_2),
        "Diag": {
            "order": dg.order,
            "generators": [" ".join(map(str, p)) for p in dg.generators],
            "odd_blocks": [list(b) for b in dg.odd_blocks],
            "even_blocks": [list(b) for b in dg.even_blocks],
        },
        "classes": {f"s{i}": str(generator_class(s, i)) for i in range(s.rank)},
        "hyperbolic": is_hyperbolic(s),
        "structure": structure_report(s),
    })


def _edge_list(g: GeneralSystem):
    for pair, m in g.edges:
        a, b = sorted(pair, key=g.vertices.index)
        yield a, b, m


def cmd_reduce(args, rep: Report) -> None:
    s = _star(args.file, rep)
    w = _word(s, args.word)
    rep.results.update({"input": args.word, "normal_form": str(w), "length": len(w.letters())})


def cmd_order(args, rep: Report) -> None:
    s = _star(args.file, rep)
    w = _word(s, args.word)
    o = order(w)
    rep.results.update({"word": str(w), "order": "inf" if o == float("inf") else o})


def _factor_dict(f) -> Dict[str, Any]:
    return {
        "w": str(f.w),
        "p": [str(b) for b in f.p],
        "t": list(f.t),
        "rho": " ".join(map(str, f.rho)),
        "product": str(f),
    }


def cmd_aut(args, rep: Report) -> None:
    s = _star(args.file, rep)
    action = args.action
    rest = args.rest
    if action == "verify":
        _need(rest, 1, "aut verify <file> <aut>")
        a = _aut(s, rest[0], rep)
        v = verify_is_automorphism(s, a.images)
        rep.results["images"] = a.table()
        rep.results["automorphism"] = v.ok
        if v.ok:
            rep.results["factorization"] = _factor_dict(v.factorization)
            rep.results["special"] = spe_membership(a)
        else:
            rep.fail("automorphism", v.failure)
    elif action == "apply":
        _need(rest, 2, "aut apply <file> <aut> <word>")
        a = _aut(s, rest[0], rep)
        w = _word(s, rest[1])
        rep.results.update({"word": str(w), "image": str(apply(a, w))})
    elif action == "compose":
        if len(rest) < 2:
            raise UsageError("usage: aut compose <file> <aut> <aut> [...]")
        auts = [_aut(s, p, rep) for p in rest]
        c = compose_all(s, auts)
        rep.results["images"] = c.table()
    elif action == "factorize":
        _need(rest, 1, "aut factorize <file> <aut>")
        a = _aut(s, rest[0], rep)
        try:
            f = factorize_automorphism(a)
        except FactorizationError as exc:
            rep.fail("factorize", str(exc))
            return
        rep.results["factorization"] = _factor_dict(f)
        rep.results["recomposes"] = f.recompose() == a
    elif action == "report":
        _need(rest, 0, "aut report <file>")
        rep.results["structure"] = structure_report(s)
        q = build_complement_Q(s)
        if q is not None:
            rep.results["Q_certificates"] = {k: v for k, v in sorted(q.certificates.items())}
            for k, v in q.certificates.items():
                if not v:
                    rep.fail("Q-certificate", k)
    elif action == "selftest":
        _need(rest, 0, "aut selftest <file>")
        _aut_suites(s, args.seed, rep)
    else:
        raise UsageError(f"unknown aut action {action!r}")


def _need(rest: Sequence[str], k: int, usage: str) -> None:
    if len(rest) != k:
        raise UsageError(f"usage: coxstar {usage}")


def _aut_suites(s: StarSystem, seed: int, rep: Report, rounds: int = 50) -> None:
    suite = relation_suite(s)
    rep.results["relation_suite"] = {k: f"{p}/{t}" for k, (p, t) in sorted(suite.counts().items())}
    for c in suite.failures:
        rep.fail(c.identity, c.instance)
    center = check_center_P2(s)
    rep.results["center_P2"] = {
        "P3_central": center.inclusion_ok,
        "ball_size": center.ball_size,
        "noncentral_outside_P3": center.noncentral,
        "witness": center.witness,
    }
    if not center.ok:
        rep.fail("center-P2", center.witness or f"central elements outside P3: {center.central_outside_P3[:3]}")
    rng = random.Random(seed)
    bad = 0
    for _ in range(rounds):
        basics = random_basics(rng, s, 6)
        a = from_basics(s, basics)
        try:
            ok = factorize_automorphism(a).recompose() == a
        except FactorizationError as exc:
            ok = False
            rep.fail("factorize", f"{' '.join(map(str, basics))}: {exc}")
        bad += not ok
    rep.results["factorization_roundtrips"] = f"{rounds - bad}/{rounds}"


def cmd_selftest(args, rep: Report) -> None:
    s = _star(args.file, rep)
    _aut_suites(s, args.seed, rep)
    rng = random.Random(args.seed)
    agree = inconclusive = 0
    samples = 200
    for k in range(samples):
        u = random_word(rng, s, 8)
        v = tits_variant(rng, s, u, 6, 8) if k % 2 == 0 else random_word(rng, s, 8)
        nf = from_letters(s, u) == from_letters(s, v)
        oracle = tits_oracle_equal(s, u, v, args.budget)
        if oracle is None:
            inconclusive += 1
        elif oracle == nf:
            agree += 1
        else:
            rep.fail("word-oracle", f"{_letters(u)} vs {_letters(v)}: normal form says {nf}, oracle {oracle}")
    rep.results["word_oracle"] = {"samples": samples, "agree": agree, "inconclusive": inconclusive}


def _letters(w: Sequence[int]) -> str:
    return " ".join(f"s{x}" for x in w) or "1"


def _expr_lines(g: GeneralSystem) -> List[str]:
    return [f"{v} = {' '.join(w) or '1'}" for v, w in g.expressions]


def cmd_twist(args, rep: Report) -> None:
    g = _diagram(args.file, rep)
    if not args.I:
        raise UsageError("twist needs --I a,b")
    I = [x for x in args.I.split(",") if x]
    J = [x for x in (args.J or "").split(",") if x]
    try:
        mv = make_twist(g, I, J)
        h = apply_twist(g, mv)
    except TwistError as exc:
        rep.fail("admissible", str(exc))
        return
    rep.results.update({
        "move": str(mv),
        "trivial": mv.trivial,
        "expression_only": mv.expression_only,
        "diagram": h.to_text().splitlines(),
        "expressions": _expr_lines(h),
    })


def cmd_canon(args, rep: Report) -> None:
    g = _diagram(args.file, rep)
    try:
        norm = normalize(g)
    except TwistError as exc:
        rep.fail("class", str(exc))
        return
    rep.results["canonical_form"] = str(norm.form)
    rep.results["rank"] = norm.form.rank
    rep.results["labels"] = list(norm.form.label_multiset)
    if args.emit_moves:
        rep.results["moves"] = [m.detail for m in norm.moves]
        rep.results["star"] = norm.star.to_text().splitlines()
        rep.results["expressions"] = _expr_lines(norm.star)


def cmd_iso(args, rep: Report) -> int:
    a = _diagram(args.a, rep)
    b = _diagram(args.b, rep)
    verdict = decide_isomorphism(a, b)
    rep.results["verdict"] = verdict
    for name, g in (("a", a), ("b", b)):
        try:
            norm = normalize(g)
        except TwistError as exc:
            rep.results[f"{name}_canonical"] = None
            rep.results[f"{name}_note"] = str(exc)
            continue
        rep.results[f"{name}_canonical"] = str(norm.form)
        if args.emit_moves:
            rep.results[f"{name}_moves"] = [m.detail for m in norm.moves]
            rep.results[f"{name}_expressions"] = _expr_lines(norm.star)
    if verdict == ISOMORPHIC:
        return 0
    rep.fail("isomorphism", verdict)
    return 1 if verdict == NOT_ISOMORPHIC else 2


# --- parser --------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites (default 0)")
    common.add_argument("--budget", type=int, default=10**6, help="word budget of the Tits oracle")
    common.add_argument("--emit-moves", action="store_true", help="print normalizing moves and expressions")

    p = _Parser(prog="coxstar", description="Star-shaped Coxeter groups: words, automorphisms, diagram moves.")
    p.add_argument("--version", action="version", version=f"coxstar {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("info", parents=[common], help="partitions, Diag(W), classes, structure")
    sp.add_argument("file")
    for name, hlp in (("reduce", "normal form of a word"), ("order", "order of a word")):
        sp = sub.add_parser(name, parents=[common], help=hlp)
        sp.add_argument("file")
        sp.add_argument("word")
    sp = sub.add_parser("aut", parents=[common], help="automorphism tools")
    sp.add_argument("action", choices=["verify", "apply", "compose", "factorize", "report", "selftest"])
    sp.add_argument("file")
    sp.add_argument("rest", nargs="*")
    sp = sub.add_parser("selftest", parents=[common], help="relation suite, centre check, oracle spot checks")
    sp.add_argument("file")
    sp = sub.add_parser("twist", parents=[common], help="apply a twist T_{I,J}")
    sp.add_argument("file")
    sp.add_argument("--I", dest="I", help="two vertices, comma separated")
    sp.add_argument("--J", dest="J", default="", help="vertices of J, comma separated")
    sp = sub.add_parser("canon", parents=[common], help="canonical form of a diagram")
    sp.add_argument("file")
    sp = sub.add_parser("iso", parents=[common], help="decide isomorphism (exit 0/1/2)")
    sp.add_argument("a")
    sp.add_argument("b")
    return p


COMMANDS = {
    "info": cmd_info,
    "reduce": cmd_reduce,
    "order": cmd_order,
    "aut": cmd_aut,
    "selftest": cmd_selftest,
    "twist": cmd_twist,
    "canon": cmd_canon,
    "iso": cmd_iso,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("missing subcommand")
        name = args.command + (f" {args.action}" if args.command == "aut" else "")
        rep = Report(name)
        code = COMMANDS[args.command](args, rep)
    except UsageError as exc:
        print(f"coxstar: usage error: {exc}", file=err)
        return EX_USAGE
    except InputError as exc:
        print(f"coxstar: input error: {exc}", file=err)
        return EX_NOINPUT
    if code is None:
        code = 1 if rep.failures else 0
    print(rep.to_json() if args.json else rep.to_text(), file=out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
