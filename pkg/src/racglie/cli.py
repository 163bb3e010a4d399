"""Command-line front end: ``racglie <command> --complex FILE|NAME ...``."""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .complexes import (
    FlagComplex,
    GptwEntry,
    catalog,
    catalog_names,
    gptw_index,
    h1_dim_gf2,
    is_chordal,
    subcomplex_type_counts,
)
from .coxeter import conjecture_status, default_degree, low_degree_prediction
from .errors import IdentityViolated, InputError, InternalInconsistency, RacgLieError, ResourceCapExceeded
from .expr import ALIASES, alias_names, alias_table, format_expr, parse_expr
from .lcs import CONJECTURAL, LElem, NKtElem, bracket_L, bracket_nkt, remove_repeats
from .nk import LiePoly, Nested, eval_lie, nk_for, tree_multidegree
from .pcalg import algebra_a
from .series import extract_exponents, free_lie_series, rhs_poly

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3, 4


@dataclass
class Report:
    command: list[str]
    complex: dict | None
    result: dict
    text: str = ""
    exit_code: int = EXIT_OK

    def to_json(self) -> dict:
        return {"command": self.command, "complex": self.complex, "result": self.result, "exit_code": self.exit_code}


def resolve_complex(spec: str, flag_complete: bool = False) -> tuple[FlagComplex, str | None]:
    """A JSON file path or a catalog name; returns the complex and its catalog name (if any)."""
    p = Path(spec)
    if p.suffix == ".json" or p.exists():
        if not p.exists():
            raise InputError(f"complex file {spec} not found")
        K = FlagComplex.load(p, flag_complete=flag_complete)
        stem = p.stem.lower()
        return K, (stem if stem in ALIASES and catalog(stem) == K else None)
    return catalog(spec), spec.strip().lower()


def _alpha_json(d: dict) -> list[dict]:
    return [{"alpha": list(a), "n": v} for a, v in sorted(d.items(), key=lambda t: (sum(t[0]), t[0]))]


def _by_degree(d: dict, D: int) -> dict[int, int]:
    out = dict.fromkeys(range(2, D + 1), 0)
    for a, v in d.items():
        out[sum(a)] = out.get(sum(a), 0) + v
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_gptw(K, name, args) -> Report:
    rows = []
    inv = alias_names(name)
    for e in gptw_index(K):
        rows.append({
            "J": list(e.J),
            "j": e.j,
            "name": e.name,
            "nested": e.nested_form(),
            "degree": e.degree,
            "alias": inv.get(Nested(e.outer, e.j)),
        })
    lines = [f"{len(rows)} GPTW generators"]
    for r in rows:
        extra = f"  ({r['alias']})" if r["alias"] else ""
        lines.append(f"  {r['name']:<18} = {r['nested']}{extra}")
    return Report([], K.summary(), {"count": len(rows), "generators": rows}, "\n".join(lines))


def cmd_series(K, name, args) -> Report:
    D = args.max_degree or 8
    P = rhs_poly(K)
    dims = extract_exponents(P, D)
    single = P.substitute_single()
    n = dims.by_degree()
    lines = [f"sum_J (1 - chi(K_J)) x^|J| = {single.format_single()}"]
    lines += [f"  n_{k} = {n[k]}" for k in range(2, D + 1)]
    result = {
        "rhs_single": single.single_variable(),
        "rhs_single_text": single.format_single(),
        "rhs": P.to_json(),
        "n_by_degree": {str(k): n[k] for k in range(2, D + 1)},
        "n": _alpha_json(dims.n),
    }
    return Report([], K.summary(), result, "\n".join(lines))


def cmd_dims(K, name, args) -> Report:
    D = args.max_degree or default_degree(K)
    dims = nk_for(K).dims(D, threads=args.threads)
    pred = extract_exponents(rhs_poly(K), D).n
    pred = {a: v for a, v in pred.items() if sum(a) <= D}
    match = dims == pred
    got, want = _by_degree(dims, D), _by_degree(pred, D)
    lines = [f"{'k':>3} {'dim N_K':>8} {'series':>8}"]
    lines += [f"{k:>3} {got[k]:>8} {want[k]:>8}" for k in range(2, D + 1)]
    lines.append("per-multidegree agreement: " + ("yes" if match else "NO"))
    result = {
        "max_degree": D,
        "dims": _alpha_json(dims),
        "by_degree": {str(k): got[k] for k in range(2, D + 1)},
        "prediction_by_degree": {str(k): want[k] for k in range(2, D + 1)},
        "matches_series": match,
        "mismatches": [
            {"alpha": list(a), "closure": dims.get(a, 0), "series": pred.get(a, 0)}
            for a in sorted(set(dims) | set(pred))
            if dims.get(a, 0) != pred.get(a, 0)
        ],
    }
    return Report([], K.summary(), result, "\n".join(lines), EXIT_OK if match else EXIT_INTERNAL)


def cmd_analyze(K, name, args) -> Report:
    D = args.max_degree or default_degree(K)
    counts = subcomplex_type_counts(K)
    P = rhs_poly(K)
    gptw = gptw_index(K)
    h1 = sum(h1_dim_gf2(K, J) for r in range(1, K.m + 1) for J in itertools.combinations(K.vertices, r))
    n = extract_exponents(P, D).by_degree()
    chordal = is_chordal(K)
    free = free_lie_series([tree_multidegree_of(e, K.m) for e in gptw], D).by_degree() if gptw else {}
    result = {
        "m": K.m,
        "edges": K.summary()["edges"],
        "chordal": chordal,
        "gptw_count": len(gptw),
        "gptw_by_degree": {str(d): sum(1 for e in gptw if e.degree == d) for d in range(2, K.m + 1)},
        "sum_h1": h1,
        "subcomplex_counts": counts,
        "rhs_single_text": P.substitute_single().format_single(),
        "n_by_degree": {str(k): n[k] for k in range(2, D + 1)},
        "free_prediction_by_degree": {str(k): free.get(k, 0) for k in range(2, D + 1)},
        "low_degree_dims": {str(k): v for k, v in low_degree_prediction(K).items()},
        "backend": _kernels.BACKEND,
    }
    lines = [
        f"m = {K.m}, {len(K.edges)} edges, chordal: {chordal}",
        f"GPTW generators: {len(gptw)}, sum_J dim H1(K_J) = {h1}",
        f"series: {result['rhs_single_text']}",
        "n_k: " + ", ".join(f"n_{k}={n[k]}" for k in range(2, D + 1)),
        f"dim L_2 = {low_degree_prediction(K)[2]}, dim L_3 = {low_degree_prediction(K)[3]}",
    ]
    return Report([], K.summary(), result, "\n".join(lines))


def tree_multidegree_of(e, m):
    return tree_multidegree(Nested(e.outer, e.j), m)


def cmd_conjecture(K, name, args) -> Report:
    D = args.max_degree or default_degree(K)
    rep = conjecture_status(K, D, method=args.method, threads=args.threads)
    return Report([], K.summary(), rep.to_json(), rep.table())


def cmd_bracket(K, name, args) -> Report:
    if args.lhs is None or args.rhs is None:
        raise InputError("bracket needs --lhs and --rhs")
    names = alias_table(name, K)
    x = parse_expr(args.lhs, K, names)
    y = parse_expr(args.rhs, K, names)
    r = bracket_L(x, y, K)
    disp = alias_names(name)
    out = format_expr(r, disp)
    result = {
        "lhs": format_expr(x, disp),
        "rhs": format_expr(y, disp),
        "bracket": out,
        "bracket_plain": format_expr(r),
        "semantics": CONJECTURAL,
    }
    text = f"[{result['lhs']}, {result['rhs']}] = {out}   ({CONJECTURAL})"
    return Report([], K.summary(), result, text)


# ---------------------------------------------------------------------------
# worked examples
# ---------------------------------------------------------------------------

K3_TABLE = {
    ("g1", "a"): "at", ("g2", "a"): "at", ("g3", "a"): "c",
    ("g1", "b"): "c", ("g2", "b"): "bt", ("g3", "b"): "bt",
    ("g1", "c"): "ct", ("g2", "c"): "ct + [a,b]", ("g3", "c"): "ct",
}

PENTAGON_GPTW = [
    "alpha1", "alpha2", "alpha3", "alpha4", "alpha5",
    "beta1", "beta2", "beta3", "beta4", "beta5",
]


@dataclass
class Check:
    example: str
    what: str
    expected: str
    got: str

    @property
    def ok(self) -> bool:
        return self.expected == self.got


def _eq_check(example, what, K, names, got: LElem, expected_text: str, disp) -> Check:
    want = parse_expr(expected_text, K, names)
    return Check(example, what, format_expr(want, disp), format_expr(got, disp))


def example_k2() -> list[Check]:
    K = catalog("k2")
    names, disp = alias_table("k2", K), alias_names("k2")
    out = [Check("k2", "GPTW", "c(1,2|1)", " ".join(e.name for e in gptw_index(K)))]
    dims = nk_for(K).dims(6)
    out.append(Check("k2", "dim N_K up to degree 6", "{(1, 1): 1}", str(dict(sorted(dims.items())))))
    g = {i: LElem.gen(K, i) for i in (1, 2)}
    g12 = bracket_L(g[1], g[2], K)
    out.append(_eq_check("k2", "[g1,[g1,g2]]", K, names, bracket_L(g[1], g12, K), "xt", disp))
    out.append(_eq_check("k2", "[g2,[g1,g2]]", K, names, bracket_L(g[2], g12, K), "xt", disp))
    for k in range(0, 5):
        got = LElem.of(remove_repeats((1,) * (k + 1), 2, K))
        out.append(_eq_check("k2", f"left-normed length {k + 2}", K, names, got, f"xt^{k}" if k > 1 else ("xt" if k else "x"), disp))
    rep = conjecture_status(K, 8)
    out.append(Check("k2", "conjecture degrees 2..8", "verified, all bounds 1",
                     "verified, all bounds 1" if rep.all_verified and set(rep.lower.values()) == {1} and set(rep.upper.values()) == {1}
                     else json.dumps(rep.to_json()["degrees"])))
    return out


def example_k3() -> list[Check]:
    K = catalog("k3")
    names, disp = alias_table("k3", K), alias_names("k3")
    out = [Check("k3", "GPTW", "c(1,2|1) c(2,3|2) c(1,2,3|2)", " ".join(e.name for e in gptw_index(K)))]
    for (lhs, rhs), want in K3_TABLE.items():
        got = bracket_L(parse_expr(lhs, K, names), names[rhs], K)
        out.append(_eq_check("k3", f"[{lhs},{rhs}]", K, names, got, want, disp))
    for lhs, rhs, want in (("g1", "g2", "a"), ("g1", "g3", "0"), ("g2", "g3", "b")):
        got = bracket_L(parse_expr(lhs, K, names), parse_expr(rhs, K, names), K)
        out.append(_eq_check("k3", f"[{lhs},{rhs}]", K, names, got, want, disp))
    return out


def pentagon_relation_terms(K=None) -> list:
    K = K or catalog("pentagon")
    A = algebra_a(K)
    terms = []
    for i in range(1, 6):
        a = ALIASES["pentagon"][f"alpha{i}"]
        b = ALIASES["pentagon"][f"beta{i}"]
        ea, eb = GptwEntry(*a), GptwEntry(*b)
        p = LiePoly([Nested(ea.outer, ea.j)]).bracket(LiePoly([Nested(eb.outer, eb.j)]))
        terms.append(eval_lie(p, A))
    return terms


def pentagon_relation_status() -> tuple[bool, list[tuple[int, ...]]]:
    """(full sum vanishes, list of proper nonempty sub-sums that vanish)."""
    terms = pentagon_relation_terms()
    zero = terms[0] + terms[0]
    total = zero
    for t in terms:
        total = total + t
    vanishing = []
    for r in range(1, 5):
        for S in itertools.combinations(range(5), r):
            acc = zero
            for s in S:
                acc = acc + terms[s]
            if acc.is_zero():
                vanishing.append(tuple(s + 1 for s in S))
    return total.is_zero(), vanishing


def example_pentagon() -> list[Check]:
    K = catalog("pentagon")
    disp = alias_names("pentagon")
    got = sorted(disp.get(Nested(e.outer, e.j), e.name) for e in gptw_index(K))
    out = [Check("pentagon", "GPTW (as a set)", " ".join(sorted(PENTAGON_GPTW)), " ".join(got))]
    full, partial = pentagon_relation_status()
    out.append(Check("pentagon", "sum [alpha_i, beta_i] in A", "0", "0" if full else "nonzero"))
    out.append(Check("pentagon", "vanishing proper sub-sums", "none", "none" if not partial else str(partial)))
    dims = _by_degree(nk_for(K).dims(4), 4)
    out.append(Check("pentagon", "n_2, n_3, n_4", "5, 5, 10", ", ".join(str(dims[k]) for k in (2, 3, 4))))
    single = rhs_poly(K).substitute_single().format_single()
    out.append(Check("pentagon", "series", "1 - 5x^2 - 5x^3 + x^5", single))
    rep = conjecture_status(K, 3)
    out.append(Check("pentagon", "dim L_2, dim L_3", "5, 10 (verified)",
                     f"{rep.lower[2]}, {rep.lower[3]} ({'verified' if rep.all_verified else 'inconclusive'})"))
    return out


def example_spot_checks(seed: int, n: int = 20) -> list[Check]:
    """Alternation and Jacobi for the calculator on random K3 triples."""
    K = catalog("k3")
    names = alias_table("k3", K)
    pool = ["g1", "g2", "g3", "a", "b", "c", "at", "[a,b]", "ct^2", "g1 + b"]
    rng = np.random.default_rng(seed)
    elems = [parse_expr(t, K, names) for t in pool]
    bad = []
    for _ in range(n):
        x, y, z = (elems[i] for i in rng.integers(len(elems), size=3))
        jac = bracket_L(x, bracket_L(y, z, K), K) + bracket_L(y, bracket_L(z, x, K), K) + bracket_L(z, bracket_L(x, y, K), K)
        if jac or bracket_L(x, x, K):
            bad.append((format_expr(x), format_expr(y), format_expr(z)))
    return [Check("k3", f"Jacobi/alternation on {n} random triples (seed {seed})", "0 failures", f"{len(bad)} failures")]


def run_examples(seed: int = 0) -> list[Check]:
    return example_k2() + example_k3() + example_pentagon() + example_spot_checks(seed)


def cmd_examples(K, name, args) -> Report:
    checks = run_examples(args.seed)
    ok = all(c.ok for c in checks)
    lines = []
    for c in checks:
        mark = "ok  " if c.ok else "FAIL"
        lines.append(f"[{mark}] {c.example:<9} {c.what}: {c.got}" + ("" if c.ok else f"   (expected {c.expected})"))
    lines.append(f"{sum(c.ok for c in checks)}/{len(checks)} checks match")
    result = {"all_match": ok, "checks": [dict(c.__dict__, ok=c.ok) for c in checks]}
    return Report([], None, result, "\n".join(lines), EXIT_OK if ok else EXIT_MISMATCH)


COMMANDS = {
    "analyze": cmd_analyze,
    "gptw": cmd_gptw,
    "dims": cmd_dims,
    "series": cmd_series,
    "conjecture": cmd_conjecture,
    "bracket": cmd_bracket,
    "examples": cmd_examples,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="racglie", description="Lie algebras of right-angled Coxeter groups over GF(2).")
    sub = ap.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd)
        sp.add_argument("--complex", help=f"JSON file {{\"m\", \"edges\"}} or a built-in name ({', '.join(catalog_names())})")
        sp.add_argument("--max-degree", type=int, default=None, help="total degree bound D")
        sp.add_argument("--json", action="store_true", help="print the report as JSON")
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized spot checks")
        sp.add_argument("--threads", type=int, default=1, help="worker threads for nk_dims and lower bounds")
        sp.add_argument("--flag-complete", action="store_true", help="accept \"faces\" that are not flag and take the flag completion")
        if cmd == "bracket":
            sp.add_argument("--lhs", required=True)
            sp.add_argument("--rhs", required=True)
        if cmd == "conjecture":
            sp.add_argument("--method", choices=("closure", "words", "square_zero"), default="closure")
    return ap


def run(argv: list[str] | None = None) -> Report:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        raise InputError("--threads must be at least 1")
    if args.max_degree is not None and args.max_degree < 2:
        raise InputError("--max-degree must be at least 2")
    if args.command == "examples":
        K, name = None, None
    else:
        if not args.complex:
            raise InputError(f"{args.command} needs --complex")
        K, name = resolve_complex(args.complex, args.flag_complete)
    t0 = time.perf_counter()
    rep = COMMANDS[args.command](K, name, args)
    rep.command = argv
    rep.result.setdefault("seconds", round(time.perf_counter() - t0, 3))
    return rep


def main(argv: list[str] | None = None) -> int:
    as_json = "--json" in (argv if argv is not None else sys.argv[1:])
    try:
        rep = run(argv)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except ResourceCapExceeded as exc:
        return _fail(as_json, "truncation exceeded: " + str(exc), EXIT_CAP)
    except (InternalInconsistency, IdentityViolated) as exc:
        return _fail(as_json, "internal inconsistency: " + str(exc), EXIT_INTERNAL)
    except (InputError, OSError) as exc:
        return _fail(as_json, "input error: " + str(exc), EXIT_INPUT)
    except RacgLieError as exc:
        return _fail(as_json, str(exc), EXIT_INTERNAL)
    if as_json:
        print(json.dumps(rep.to_json(), indent=2))
    else:
        print(rep.text)
    return rep.exit_code


def _fail(as_json: bool, msg: str, code: int) -> int:
    if as_json:
        print(json.dumps({"error": msg, "exit_code": code}))
    else:
        print(f"error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
