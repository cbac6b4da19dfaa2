"""Command-line front end.

Exit codes: 0 success, 1 domain or input error, 2 usage error, 3 missing
literature fixture for a golden comparison.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .bush_search import DEFAULT_BUDGET, search_bush_type
from .classify import GOLDEN, classify, run_golden
from .design import (
    IncidenceStructure,
    derived_design,
    dual,
    format_incidence,
    intersection_profile,
    parse_incidences,
    validate_2design,
)
from .errors import DesignError, FixtureMissing
from .gflinear import p_rank
from .hadamard import (
    SignMatrix,
    diagonal_switching_sets,
    format_sign_matrix,
    hadamard_to_menon,
    is_block_negacyclic,
    is_bush_type,
    is_hadamard,
    is_regular,
    menon_to_hadamard,
    normalize_row_sum,
    parse_sign_matrix,
)
from .isomorphism import design_certificate, hadamard_certificate, is_self_dual
from .orbit import (
    BUILTIN,
    format_orbit_matrix,
    load_builtin,
    orbit_matrices_equivalent,
    orbit_switching,
    orbit_switching_candidates,
    parse_orbit_matrix,
    validate_orbit_matrix,
)
from .switching import (
    Grouped,
    analyze_block_set,
    apply_switching,
    enumerate_switching_sets,
    switching_closure,
)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    p = Path(path)
    if not p.is_file():
        stem = p.name.split(".")[0]
        data = resources.files("designswitch.data")
        for name in (p.name, f"{stem}.inc", f"{stem}.om"):
            if not p.parent.parts and data.joinpath(name).is_file():
                return data.joinpath(name).read_text()
    return p.read_text()


def _records(path: str):
    return parse_incidences(_read(path))


def _designs(path: str) -> list[IncidenceStructure]:
    return [inc for inc, _ in _records(path)]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


def _orbit(path: str):
    stem = Path(path).name.split(".")[0]
    if path != "-" and not Path(path).is_file() and stem in BUILTIN:
        return load_builtin(stem)
    return parse_orbit_matrix(_read(path))


def _out(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


# -- design commands ---------------------------------------------------------


def cmd_validate(args) -> int:
    for inc in _designs(args.file):
        print(validate_2design(inc))
        if args.profile:
            prof = intersection_profile(inc)
            sizes = ", ".join(f"{k}:{v}" for k, v in sorted(prof.counts.items()))
            tag = " (quasi-symmetric)" if prof.is_quasi_symmetric else ""
            print(f"block intersections {sizes}{tag}")
    return 0


def cmd_dual(args) -> int:
    _out(args, "".join(format_incidence(dual(d)) for d in _designs(args.file)))
    return 0


def cmd_derived(args) -> int:
    _out(args, "".join(format_incidence(derived_design(d, args.block)) for d in _designs(args.file)))
    return 0


def cmd_switch(args) -> int:
    text = []
    for inc, sets in _records(args.file):
        chosen = [_ints(args.blocks)] if args.blocks else sets
        if not chosen:
            raise DesignError("no block set given (use --blocks or S: lines)")
        for blocks in chosen:
            sw = analyze_block_set(inc, blocks)
            inc = apply_switching(inc, sw)
        text.append(format_incidence(inc))
    _out(args, "".join(text))
    return 0


def cmd_enumerate(args) -> int:
    for inc in _designs(args.file):
        strategy = "exhaustive"
        if args.bush:
            groups = [s.blocks for s in diagonal_switching_sets(inc, args.bush)]
            strategy = Grouped(groups)
        count = 0
        for sw in enumerate_switching_sets(inc, args.max_size, strategy, args.budget):
            count += 1
            print(
                "S: " + " ".join(map(str, sw.blocks))
                + f"  # p1={len(sw.p1)} p2={len(sw.p2)} balanced={len(sw.balanced)}"
            )
        print(f"# {count} switching sets")
    return 0


def cmd_closure(args) -> int:
    text = []
    for inc, sets in _records(args.file):
        if args.bush:
            sws = diagonal_switching_sets(inc, args.bush)
        else:
            sws = [analyze_block_set(inc, s) for s in sets]
        text += [format_incidence(d) for d in switching_closure(inc, sws)]
    _out(args, "".join(text))
    return 0


def cmd_rank(args) -> int:
    primes = _ints(args.primes)
    for inc in _designs(args.file):
        print(" ".join(f"{p}-rank={p_rank(inc, p)}" for p in primes))
    return 0


def cmd_certify(args) -> int:
    for inc in _designs(args.file):
        cert = design_certificate(inc)
        print(f"{cert.digest} |Aut|={cert.group_order}")
        if args.relabel:
            _relabel_check(inc, cert, args.relabel, args.seed)
    return 0


def _relabel_check(inc: IncidenceStructure, cert, count: int, seed: int) -> None:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        m = inc.matrix[rng.permutation(inc.b)][:, rng.permutation(inc.v)]
        if design_certificate(IncidenceStructure(m)) != cert:
            raise DesignError("certificate changed under relabeling")
    print(f"stable under {count} random relabelings (seed {seed})")


def cmd_aut(args) -> int:
    for inc in _designs(args.file):
        print(design_certificate(inc).group_order)
    return 0


def cmd_selfdual(args) -> int:
    for inc in _designs(args.file):
        print("self-dual" if is_self_dual(inc) else "not self-dual")
    return 0


# -- Hadamard commands -------------------------------------------------------


def _sign(path: str) -> SignMatrix:
    return parse_sign_matrix(_read(path))


def cmd_h_check(args) -> int:
    h = _sign(args.file)
    facts = [f"order {h.m}", "Hadamard" if is_hadamard(h) else "not Hadamard"]
    if is_regular(h):
        facts.append(f"regular, row sum {int(h.entries[0].sum())}")
    if args.n:
        facts.append(("" if is_bush_type(h, args.n) else "not ") + f"Bush-type (n={args.n})")
        if is_block_negacyclic(h, args.n):
            facts.append("block negacyclic")
    print(", ".join(facts))
    return 0


def cmd_h_to_design(args) -> int:
    h = _sign(args.file)
    if args.normalize:
        h = normalize_row_sum(h)
    _out(args, format_incidence(hadamard_to_menon(h)))
    return 0


def cmd_h_from_design(args) -> int:
    _out(args, "".join(format_sign_matrix(menon_to_hadamard(d, args.n)) for d in _designs(args.file)))
    return 0


def cmd_h_search(args) -> int:
    symmetry = "block_negacyclic" if args.symmetry.startswith(("neg", "block")) else "free"
    found = search_bush_type(args.n, symmetry, args.limit, args.budget, args.reduced)
    _out(args, "".join(format_sign_matrix(h) for h in found))
    return 0


def cmd_h_certify(args) -> int:
    cert = hadamard_certificate(_sign(args.file))
    print(f"{cert.digest} |Aut|={cert.group_order}")
    return 0


# -- orbit matrix commands ---------------------------------------------------


def cmd_o_validate(args) -> int:
    rep = validate_orbit_matrix(_orbit(args.file))
    if rep.ok:
        print(f"ok: {rep.params}")
        return 0
    for f in rep.failures:
        print(f)
    return 1


def cmd_o_switch(args) -> int:
    om = _orbit(args.file)
    if args.candidates is not None:
        for rows in orbit_switching_candidates(om, args.candidates):
            print(" ".join(map(str, rows)))
        return 0
    if args.rows is None:
        raise DesignError("give --rows or --candidates")
    _out(args, format_orbit_matrix(orbit_switching(om, _ints(args.rows))))
    return 0


def cmd_o_equiv(args) -> int:
    if args.first == "-" and args.second == "-":
        raise DesignError("only one operand can be read from stdin")
    found = orbit_matrices_equivalent(_orbit(args.first), _orbit(args.second))
    if found is None:
        print("not equivalent")
        return 1
    rows, cols = found
    print("equivalent")
    print("rows " + " ".join(map(str, rows)))
    print("cols " + " ".join(map(str, cols)))
    return 0


# -- classification ----------------------------------------------------------


def cmd_classify(args) -> int:
    if args.golden:
        report, bad = run_golden(args.golden, args.fixtures, args.jobs)
    else:
        if not args.files:
            raise DesignError("give design files or --golden")
        designs = [d for f in args.files for d in _designs(f)]
        report = classify(designs, _ints(args.primes) if args.primes else (), args.jobs)
        bad = []
    if args.out:
        Path(args.out).write_text(report.to_json())
    sys.stdout.write(report.to_text())
    if args.golden:
        for line in bad:
            print(f"MISMATCH {line}")
        print(f"{args.golden}: {'matches' if not bad else 'differs from'} the published counts")
        return 1 if bad else 0
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="designswitch", description="Switching sets of 2-designs and Bush-type Hadamard matrices."
    )
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, file=True, output=False, parent=sub, **kw):
        p = parent.add_parser(name, help=help_, **kw)
        if file:
            p.add_argument("file", help="input file, '-' for stdin")
        if output:
            p.add_argument("-o", "--output", help="write here instead of stdout")
        p.set_defaults(fn=fn)
        return p

    p = add("validate", cmd_validate, "check 2-design axioms and print parameters")
    p.add_argument("--profile", action="store_true", help="also print block intersection sizes")
    add("dual", cmd_dual, "transpose the incidence matrix", output=True)
    p = add("derived", cmd_derived, "derived design at a block", output=True)
    p.add_argument("--block", type=int, required=True)
    p = add("switch", cmd_switch, "switch a block set (default: the S: lines)", output=True)
    p.add_argument("--blocks", help="comma-separated 0-based block indices")
    p = add("enumerate", cmd_enumerate, "list switching sets")
    p.add_argument("--max-size", type=int, default=6)
    p.add_argument("--budget", type=int, default=5_000_000)
    p.add_argument("--bush", type=int, metavar="N", help="only unions of the 2N diagonal block-rows")
    p = add("closure", cmd_closure, "all designs from switching disjoint sets", output=True)
    p.add_argument("--bush", type=int, metavar="N", help="use the diagonal sets of a Bush-type Menon design")
    p = add("rank", cmd_rank, "p-rank of the incidence matrix")
    p.add_argument("-p", "--primes", default="2")
    p = add("certify", cmd_certify, "isomorphism certificate")
    p.add_argument("--relabel", type=int, default=0, metavar="K", help="also check K random relabelings")
    add("aut", cmd_aut, "order of the full automorphism group")
    add("selfdual", cmd_selfdual, "is the design isomorphic to its dual")

    hp = sub.add_parser("hadamard", aliases=["bush"], help="Hadamard and Bush-type matrices")
    hsub = hp.add_subparsers(dest="action", required=True)
    p = add("check", cmd_h_check, "Hadamard / regular / Bush-type checks", parent=hsub)
    p.add_argument("-n", type=int)
    p = add("to-design", cmd_h_to_design, "Menon design (-1 -> 1, +1 -> 0)", output=True, parent=hsub)
    p.add_argument("--normalize", action="store_true", help="negate if the row sum is negative")
    p = add("from-design", cmd_h_from_design, "Hadamard matrix of a Menon design", output=True, parent=hsub)
    p.add_argument("-n", type=int, required=True)
    p = add("search", cmd_h_search, "search Bush-type matrices of order 4n^2", file=False, output=True, parent=hsub)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--symmetry", default="free", choices=["free", "negacyclic", "block_negacyclic"])
    p.add_argument("--limit", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--reduced", action="store_true", help="free mode: one normal form per row/column class")
    add("certify", cmd_h_certify, "Hadamard equivalence certificate", parent=hsub)

    op = sub.add_parser("orbit", help="block-by-point orbit matrices")
    osub = op.add_subparsers(dest="action", required=True)
    add("validate", cmd_o_validate, "check the counting identities", parent=osub)
    p = add("switch", cmd_o_switch, "switch a union of block orbits", output=True, parent=osub)
    p.add_argument("--rows", help="comma-separated 0-based block-orbit indices")
    p.add_argument("--candidates", type=int, metavar="MAX", help="list switchable row sets up to MAX blocks")
    p = osub.add_parser("equiv", help="equivalence up to orbit-length-preserving permutations")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(fn=cmd_o_equiv)

    p = sub.add_parser("classify", help="classify designs and report statistics")
    p.add_argument("files", nargs="*")
    p.add_argument("-p", "--primes", default="", help="comma-separated primes for p-rank")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all CPUs)")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--golden", choices=sorted(GOLDEN))
    p.add_argument("--fixtures", help="directory holding literature matrices")
    p.set_defaults(fn=cmd_classify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FixtureMissing as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DesignError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
