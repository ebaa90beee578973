"""Command-line entry point.

Exit codes: 0 success, 1 usage or parse error, 2 mathematical failure,
3 capacity exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from .abgroup import FinAbGroup, generate_subgroup
from .errors import CapacityError, CfpError, InvariantViolation, MathematicalFailure, ValidationError
from .fusion import (GradedFusionRing, cfp_ring, fiber_product_ring, find_ring_isomorphisms,
                     ring_of_premetric)
from .metric import (PreMetricGroup, central_charge, condensation, format_phase, gauss_sum,
                     is_nondegenerate, parse_phase, premetric_isomorphic)
from .pointed import (PointedCategory, center_of_Bz, condensed_fiber_product, enumerate_pointed_mme,
                      make_Bz, pointed_isomorphic)
from .serialization import emit_model, load_model, to_document
from .verification import P4_Q, verify_paper_suite
from .zest import (ZestingDatum, extract_lambda_from_pointed, extract_lambda_from_ring, solve_cocycles,
                   solve_nu, verify_cfp_equals_zesting, zest_fusion_ring, zested_twists_via_cfp)

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(CfpError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _ints(s: str) -> tuple[int, ...]:
    s = s.strip()
    if not s:
        return ()
    try:
        return tuple(int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def _elements(s: str) -> list[tuple[int, ...]]:
    return [_ints(p) for p in s.split(";") if p.strip()]


def _load(path, *kinds):
    m = load_model(path)
    if kinds and m.kind not in kinds:
        raise UsageError(f"{path}: expected {' or '.join(kinds)}, got {m.kind}")
    return m.value


def _as_ring(x) -> GradedFusionRing:
    if isinstance(x, GradedFusionRing):
        return x
    if isinstance(x, PointedCategory):
        return ring_of_premetric(x)
    raise UsageError("a graded fusion ring or pointed category is required")


def _write(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(rows, header) -> str:
    rows = [tuple(str(c) for c in r) for r in rows]
    w = [max(len(str(h)), *(len(r[i]) for r in rows)) if rows else len(str(h)) for i, h in enumerate(header)]
    line = lambda r: "  ".join(c.ljust(n) for c, n in zip(r, w)).rstrip()
    return "\n".join([line(header), line(["-" * n for n in w])] + [line(r) for r in rows]) + "\n"


def _elem(x) -> str:
    return "(" + ",".join(map(str, x)) + ")"


def _diag(P: PreMetricGroup) -> str:
    s = gauss_sum(P)
    out = f"gauss sum (float diagnostic): {s.real:.12f} {s.imag:+.12f}i\n"
    if is_nondegenerate(P):
        out += f"central charge index sigma: {central_charge(P)}\n"
    else:
        out += "degenerate: no central charge\n"
    return out


# ---------------------------------------------------------------------------
# subcommands

def cmd_bz(args):
    _write(args, emit_model(make_Bz(FinAbGroup(args.B), args.z)))


def cmd_center(args):
    _write(args, emit_model(center_of_Bz(FinAbGroup(args.B), args.z)))


def cmd_grade(args):
    C = _load(args.inp, "pointed_category")
    rows = [(_elem(x), _elem(C.deg(x)), format_phase(C.q(x))) for x in C.group.elements]
    _write(args, _table(rows, ("element", "grade", "q")))


def cmd_fiber(args):
    L = _as_ring(_load(args.left))
    R = _as_ring(_load(args.right))
    _write(args, emit_model(fiber_product_ring(L, R)))


def cmd_cfp(args):
    L, R = _load(args.left), _load(args.right)
    if isinstance(L, PointedCategory) and isinstance(R, PointedCategory):
        K = condensed_fiber_product(L, R)
        _write(args, emit_model(K))
        if args.diagnostics:
            sys.stderr.write(_diag(K.pmg))
    else:
        _write(args, emit_model(cfp_ring(_as_ring(L), _as_ring(R))))


def cmd_condense(args):
    X = _load(args.inp, "premetric_group", "pointed_category")
    P = X.pmg if isinstance(X, PointedCategory) else X
    H = generate_subgroup(P.group, [P.group.reduce(h) for h in args.H])
    _write(args, emit_model(condensation(P, H).result))


def cmd_mext(args):
    B = FinAbGroup(args.B)
    classes = enumerate_pointed_mme(B, args.z, max_B=args.max_B,
                                    respect_embedding=not args.ignore_embedding)
    if args.json:
        doc = {"count": len(classes), "classes": [to_document(C) for C in classes]}
        _write(args, json.dumps(doc, ensure_ascii=False) + "\n")
        return
    rows = [(i, _elem(C.group.factors), central_charge(C.pmg),
             " ".join(format_phase(v) for v in C.pmg.q)) for i, C in enumerate(classes)]
    _write(args, _table(rows, ("#", "group", "sigma", "q")) + f"{len(classes)} classes\n")


def cmd_cocycles(args):
    G, M = FinAbGroup(args.G), FinAbGroup(args.M)
    S = solve_cocycles(G, M, args.degree)
    out = (f"|Z^{args.degree}| = {S.cocycle_order}\n|B^{args.degree}| = {S.coboundary_order}\n"
           f"|H^{args.degree}| = {S.H_order}\nH^{args.degree} factors: {list(S.H_factors)}\n")
    if args.representatives:
        for i, f in enumerate(S.representatives()):
            nz = ", ".join(f"{_elem_args(a)}->{_elem(v)}" for a, v in f.items() if any(v))
            out += f"class {i}: {nz or 'zero'}\n"
    _write(args, out)


def _elem_args(a) -> str:
    return "[" + " ".join(_elem(g) for g in a) + "]"


def cmd_zest(args):
    P = _load(args.by, "pointed_category", "graded_fusion_ring")
    if isinstance(P, PointedCategory):
        lam, _ = extract_lambda_from_pointed(P)
        B, z = P.B, P.z
    else:
        lam, _ = extract_lambda_from_ring(P)
        if args.z is None:
            raise UsageError("--z is required when the datum comes from a ring")
        B = FinAbGroup(P.bz_group.factors)
        z = B.reduce(args.z)
    if args.inp is None:
        sols = solve_nu(lam.G, B, z, lam)
        _write(args, emit_model(ZestingDatum(lam.G, B, z, lam, sols.particular)))
        return
    R = _as_ring(_load(args.inp))
    _write(args, emit_model(zest_fusion_ring(R, lam)))


def cmd_twists(args):
    C = _load(args.left, "pointed_category", "graded_fusion_ring")
    P = _load(args.right, "pointed_category")
    rep = zested_twists_via_cfp(C, P)
    rows = list(zip(rep.labels, (format_phase(t) for t in rep.twists)))
    out = _table(rows, ("label", "twist"))
    out += f"path: {'exact condensation + grade-level cross-check' if rep.exact_path else 'grade-level'}\n"
    out += (f"sections checked: {rep.sections_checked}; labelled table invariant: "
            f"{rep.table_invariant}; multiset invariant: {rep.multiset_invariant}\n")
    _write(args, out)


def cmd_iso(args):
    L, R = _load(args.left), _load(args.right)
    if args.zesting:
        rep = verify_cfp_equals_zesting(L, R)
        if not rep.isomorphic:
            raise MathematicalFailure(f"zesting and condensed fiber product differ: {rep.reason}")
        _write(args, _table(sorted(rep.witness.items()), ("zested", "cfp")))
        return
    if isinstance(L, PointedCategory) and isinstance(R, PointedCategory):
        f = pointed_isomorphic(L, R, respect_embedding=not args.ignore_embedding)
        if f is None:
            raise MathematicalFailure("no braided equivalence found")
        _write(args, _table([(_elem(x), _elem(f(x))) for x in L.group.generators], ("generator", "image")))
        return
    if isinstance(L, PreMetricGroup) and isinstance(R, PreMetricGroup):
        f = premetric_isomorphic(L, R)
        if f is None:
            raise MathematicalFailure("no isometry found")
        _write(args, _table([(_elem(x), _elem(f(x))) for x in L.group.generators], ("generator", "image")))
        return
    found = find_ring_isomorphisms(_as_ring(L), _as_ring(R))
    if not found:
        raise MathematicalFailure("no graded ring isomorphism found")
    _write(args, _table(sorted(found[0].items()), ("left", "right")))


def cmd_verify(args):
    q = P4_Q
    if args.p4:
        q = tuple(parse_phase(s) for s in args.p4.split(","))
    results = verify_paper_suite(q)
    failed = [r for r in results if not r.passed]
    if args.json:
        doc = {"passed": not failed, "checks": [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]}
        text = json.dumps(doc, ensure_ascii=False, indent=2) + "\n"
    else:
        rows = [("PASS" if r.passed else "FAIL", r.name, r.detail) for r in results]
        text = _table(rows, ("status", "check", "detail"))
        text += f"{len(results) - len(failed)}/{len(results)} checks passed\n"
    _write(args, text)
    return EXIT_MATH if failed else EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cfpzest", description="Condensed fiber products and zesting.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.set_defaults(func=fn)
        s.add_argument("--out", help="write output here instead of stdout")
        return s

    def bz_args(s):
        s.add_argument("--B", type=_ints, required=True, help="cyclic factors of B, e.g. 2 or 2,2")
        s.add_argument("--z", type=_ints, required=True, help="element z with 2z = 0")

    bz_args(add("bz", cmd_bz, "the symmetric pointed category B_z"))
    bz_args(add("center", cmd_center, "the center Z(B_z)"))
    s = add("grade", cmd_grade, "canonical grading of a pointed category")
    s.add_argument("--in", dest="inp", required=True)
    for name, fn, help_ in (("fiber", cmd_fiber, "fiber product of graded rings"),
                            ("cfp", cmd_cfp, "condensed fiber product")):
        s = add(name, fn, help_)
        s.add_argument("--left", required=True)
        s.add_argument("--right", required=True)
        if name == "cfp":
            s.add_argument("--diagnostics", action="store_true", help="Gauss-sum diagnostics on stderr")
    s = add("condense", cmd_condense, "condense an isotropic subgroup")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--H", type=_elements, required=True, help="generators, e.g. '2' or '1,1;0,2'")
    s = add("mext", cmd_mext, "pointed minimal modular extensions of B_z")
    bz_args(s)
    s.add_argument("--max-B", type=int, default=4)
    s.add_argument("--ignore-embedding", action="store_true")
    s.add_argument("--json", action="store_true")
    s = add("cocycles", cmd_cocycles, "normalized cocycles and cohomology, trivial action")
    s.add_argument("--G", type=_ints, required=True)
    s.add_argument("--M", type=_ints, required=True)
    s.add_argument("--degree", type=int, choices=(1, 2, 3), default=2)
    s.add_argument("--representatives", action="store_true")
    s = add("zest", cmd_zest, "zest a ring by the datum of a pointed extension, or emit that datum")
    s.add_argument("--in", dest="inp", help="ring or pointed category to zest")
    s.add_argument("--by", required=True, help="pointed extension providing lambda")
    s.add_argument("--z", type=_ints, help="z, needed only when --by is a ring")
    s = add("twists", cmd_twists, "twists of the zesting of --left by --right")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s = add("iso", cmd_iso, "search for an equivalence between two models")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--ignore-embedding", action="store_true")
    s.add_argument("--zesting", action="store_true",
                   help="compare the zesting of --left by --right with their condensed fiber product")
    s = add("verify-paper", cmd_verify, "run the named reproduction checks")
    s.add_argument("--p4", help="override the q table of P4, e.g. '0,7/8,1/2,7/8'")
    s.add_argument("--json", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except (UsageError, ValidationError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as e:
        print(f"capacity exceeded: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (MathematicalFailure, InvariantViolation) as e:
        print(f"mathematical failure: {e}", file=sys.stderr)
        return EXIT_MATH
    return code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
