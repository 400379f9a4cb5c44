"""Command-line front end: labelling files in, exact tables and plots out.

Exit codes: 0 success, 2 invalid input, 3 internal assertion failure.
All numeric output is exact ('p/2^e' strings), never a decimal approximation;
SVG coordinates use exact terminating decimal expansions.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import List, Optional

from .dyadic import Dyadic
from .labelling import (
    LabellingFileError,
    RecursiveLabelling,
    StabilizationError,
    axiom_report,
    format_labelling_file,
    parse_labelling_file,
    periodic_approximation,
)
from . import atoms as atoms_mod
from . import linegroup as lg
from . import markedspace as ms
from .plmap import Interval, NonDyadicBoundary, PLMap, PLMapError


class InputError(Exception):
    pass


def _load_labelling(path: str):
    try:
        with open(path) as fh:
            return parse_labelling_file(fh.read())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None
    except LabellingFileError as e:
        raise InputError(f"{path}: {e}") from None


def _element(lab, word: str):
    try:
        return lg.from_word(lab, word)
    except ValueError as e:
        raise InputError(str(e)) from None


def _dyadic(text: str) -> Dyadic:
    try:
        return Dyadic.parse(text)
    except ValueError as e:
        raise InputError(str(e)) from None


def _window(args) -> Interval:
    lo, hi = args.window
    return Interval(int(lo), int(hi))


def _write(path: Optional[str], text: str, out):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def plmap_svg(f: PLMap) -> str:
    """Standalone SVG of the graph with the diagonal for reference."""
    lo, hi = f.xs[0], f.xs[-1]
    ylo = f.ys[0] if f.ys[0] < lo else lo
    yhi = f.ys[-1] if f.ys[-1] > hi else hi
    w = hi - lo
    h = yhi - ylo
    stroke = (w if w > h else h).mul_pow2(-8)
    pts = " ".join(f"{x.decimal_str()},{(-y).decimal_str()}" for x, y in zip(f.xs, f.ys))
    diag = f"{lo.decimal_str()},{(-lo).decimal_str()} {hi.decimal_str()},{(-hi).decimal_str()}"
    grid = []
    n = lo.ceil()
    while n <= hi.floor():
        grid.append(
            f'<line x1="{n}" y1="{(-yhi).decimal_str()}" x2="{n}" '
            f'y2="{(-ylo).decimal_str()}" stroke="#ddd" stroke-width="{stroke.decimal_str()}"/>'
        )
        n += 1
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{lo.decimal_str()} '
        f'{(-yhi).decimal_str()} {w.decimal_str()} {h.decimal_str()}">\n'
        + "\n".join(grid)
        + f'\n<polyline points="{diag}" fill="none" stroke="#999" '
        f'stroke-width="{stroke.decimal_str()}" stroke-dasharray="{stroke.decimal_str()}"/>'
        f'\n<polyline points="{pts}" fill="none" stroke="#000" '
        f'stroke-width="{stroke.mul_pow2(1).decimal_str()}"/>\n</svg>\n'
    )


# -- subcommands ----------------------------------------------------------------


def cmd_eval(args, out):
    lab = _load_labelling(args.labelling)
    h = _element(lab, args.word)
    x = _dyadic(args.at)
    out.write(f"{h.image(x)}\n")


def cmd_restrict(args, out):
    lab = _load_labelling(args.labelling)
    h = _element(lab, args.word)
    g = h.restrict_any(_window(args))
    if args.svg:
        _write(args.svg, plmap_svg(g), out)
        return
    if args.json:
        _write(args.json, json.dumps(g.to_pairs()) + "\n", out)
        return
    for x, y in zip(g.xs, g.ys):
        out.write(f"{x}\t{y}\n")


def cmd_trivial(args, out):
    lab = _load_labelling(args.labelling)
    rep = lg.is_trivial(_element(lab, args.word))
    if rep.trivial:
        out.write("trivial\n")
    else:
        out.write(f"nontrivial at {rep.witness}\n")


def cmd_distance(args, out):
    a = ms.MarkedGroup(_load_labelling(args.a), args.a)
    b = ms.MarkedGroup(_load_labelling(args.b), args.b)
    if args.kmax > 4:
        words = sum(ms.reduced_word_count(L) for L in range(1, args.kmax + 1))
        print(
            f"enumerating about {words // 2} reduced words up to length {args.kmax};"
            " this grows by 11x per extra length",
            file=sys.stderr,
        )
    res = ms.nu_bound(a, b, args.kmax)
    if args.json:
        _write(
            args.json,
            json.dumps(
                {
                    "nu": res.nu,
                    "exact": res.exact,
                    "witness": None if res.witness is None else str(res.witness),
                    "words_checked": res.words_checked,
                }
            )
            + "\n",
            out,
        )
        return
    if res.exact:
        out.write(f"nu = {res.nu} (witness: {res.witness})\n")
    else:
        out.write(f"nu >= {res.nu}\n")


def cmd_converge(args, out):
    lab = _load_labelling(args.labelling)
    if not isinstance(lab, RecursiveLabelling):
        raise InputError("convergence table needs a recursive labelling")
    rows = ms.convergence_table(lab, args.nmax)
    if args.csv:
        _write(args.csv, ms.rows_to_csv(rows), out)
        return
    if args.json:
        _write(args.json, ms.rows_to_json(rows) + "\n", out)
        return
    out.write(ms.rows_to_csv(rows))


def cmd_approx(args, out):
    lab = _load_labelling(args.labelling)
    if not isinstance(lab, RecursiveLabelling):
        raise InputError("periodic approximation needs a recursive labelling")
    approx = periodic_approximation(lab, args.k)
    out.write(format_labelling_file(approx))


def cmd_atoms(args, out):
    lab = _load_labelling(args.labelling)
    h = _element(lab, args.word)
    found = atoms_mod.atoms_on(h, _window(args))
    depth = args.depth if args.depth else max(1, h.context_radius)
    text = atoms_mod.atoms_csv(lab, found, depth)
    if any(a.partial for a in found):
        text += "# warning: window cuts at least one atom\n"
    _write(args.csv, text, out)


def cmd_cells(args, out):
    lab = _load_labelling(args.labelling)
    h = _element(lab, args.word)
    win = _window(args)
    depth = args.depth if args.depth else max(1, h.context_radius)
    pieces = atoms_mod.cellular_decomposition(h, depth, win)
    total = None
    for _, piece in pieces:
        total = piece if total is None else total.then(piece)
    ok = total is not None and total.restrict_any(win) == h.restrict_any(win)
    out.write(f"classes: {len(pieces)}\n")
    for i, (cls, _) in enumerate(pieces):
        carriers = " ".join(str(d.carrier) for d in cls)
        out.write(f"class {i}: {carriers}\n")
    out.write(f"product recomposes element on window: {'yes' if ok else 'NO'}\n")


def cmd_rotation(args, out):
    lab = _load_labelling(args.labelling)
    h = _element(lab, args.word)
    if args.translate:
        h = lg.Translation(lab, _dyadic(args.translate)).then(h)
    res = ms.translation_number(lab, h, args.qmax, args.nfallback)
    if res.exact is not None:
        out.write(f"translation number = {res.exact} (power {res.order})\n")
    else:
        lo, hi = res.interval
        out.write(f"unresolved below power {args.qmax}; bound [{lo}, {hi}]\n")


def cmd_axioms(args, out):
    lab = _load_labelling(args.labelling)
    entries = axiom_report(lab, args.k)
    out.write("word\trecurrence_bound\tinverse_occurs\n")
    for e in entries:
        out.write(f"{e.word}\t{e.recurrence_bound}\t{'yes' if e.inverse_occurs else 'no'}\n")


def cmd_free_check(args, out):
    lab = _load_labelling(args.labelling)
    lf, pf = lg.free_pair(lab)
    letters = [lf, lf.inverse(), pf, pf.inverse()]
    names = ["F", "F'", "P", "P'"]
    seqs = [[i] for i in range(4)]
    total = 0
    for length in range(1, args.max_len + 1):
        for s in seqs:
            h = letters[s[0]]
            for j in s[1:]:
                h = h.then(letters[j])
            rep = lg.is_trivial(h)
            total += 1
            if rep.trivial:
                word = " ".join(names[j] for j in s)
                out.write(f"TRIVIAL WORD FOUND: {word}\n")
                return
        out.write(f"length {length}: all {len(seqs)} reduced words nontrivial\n")
        if length < args.max_len:
            seqs = [s + [j] for s in seqs for j in range(4) if j != s[-1] ^ 1]
    out.write(f"free up to length {args.max_len}: {total} words checked\n")


def _seeded_pair(lab, seed: int):
    from .thompson import left_bump

    rng = random.Random(seed)
    es = []
    for fam in ("z", "x"):
        exp = rng.choice((3, 4))
        start = Dyadic(rng.randrange(1, 2**exp - 2), exp)
        bump = left_bump().rescaled(
            Interval(start, start + Dyadic(1, exp))
        ).extend_identity(Interval(0, 1))
        emb = lg.embed_z(lab, bump) if fam == "z" else lg.embed_x(lab, bump)
        es.append(emb)
    return es[0], es[1]


def cmd_chain(args, out):
    lab = _load_labelling(args.labelling)
    out.write(f"seed: {args.seed}\n")
    f, g = _seeded_pair(lab, args.seed)
    h1, h2, cert = lg.commuting_chain(lab, f, g)
    out.write(f"bridge supports: within {cert.eps_mid_z} of the integers, ")
    out.write(f"within {cert.eps_mid_x} of the half-integers\n")
    out.write(
        "commutators trivial: "
        + " ".join("yes" if c else "NO" for c in cert.commutators_trivial)
        + "\n"
    )


def cmd_to_zero(args, out):
    lab = _load_labelling(args.labelling)
    r = _dyadic(args.point)
    try:
        g, word = lg.move_to_zero(lab, r, args.budget)
    except lg.SearchBudgetExceeded as e:
        raise InputError(str(e)) from None
    out.write(f"word: {word}\n")
    out.write(f"verified: {r} -> {g.image(r)}\n")


def cmd_window_check(args, out):
    lab = _load_labelling(args.labelling)
    h = _element(lab, args.word)
    rep = lg.window_check(h, args.k, _window(args))
    if rep.ok:
        out.write(f"PASS ({rep.cells} cells, k={rep.k})\n")
    else:
        v = rep.violations[0]
        out.write(
            f"FAIL: {v.clause} cells {v.cell_a},{v.cell_b} at {v.point}\n"
        )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lineorder",
        description="exact computation in labelled groups of PL homeomorphisms of the line",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        return p

    def lab_arg(p):
        p.add_argument("--labelling", required=True, help="labelling file")

    def word_arg(p):
        p.add_argument("--word", required=True, help="generator word, e.g. \"z1 x2'\"")

    def window_arg(p):
        p.add_argument(
            "--window", nargs=2, metavar=("LO", "HI"), type=int, default=(-4, 4),
            help="integer window (default -4 4)",
        )

    p = add("eval", cmd_eval, help="evaluate a word at a dyadic point")
    lab_arg(p), word_arg(p)
    p.add_argument("--at", required=True,
                   help="dyadic point, e.g. 3/2^4 or 0.1875 (negative: --at=-3/2^4)")

    p = add("restrict", cmd_restrict, help="exact window restriction (table, JSON or SVG)")
    lab_arg(p), word_arg(p), window_arg(p)
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--svg", metavar="PATH")

    p = add("trivial", cmd_trivial, help="decide word triviality exactly")
    lab_arg(p), word_arg(p)

    p = add("distance", cmd_distance, help="marked-group agreement depth of two labellings")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--json", metavar="PATH")

    p = add("converge", cmd_converge, help="periodic approximations converging to the group")
    lab_arg(p)
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--json", metavar="PATH")

    p = add("approx", cmd_approx, help="periodic approximation as a labelling file")
    lab_arg(p)
    p.add_argument("-k", type=int, required=True, help="factor-agreement length")

    p = add("atoms", cmd_atoms, help="atom table on a window")
    lab_arg(p), word_arg(p), window_arg(p)
    p.add_argument("--depth", type=int, default=0, help="decoration depth")
    p.add_argument("--csv", metavar="PATH")

    p = add("cells", cmd_cells, help="cellular decomposition on a window")
    lab_arg(p), word_arg(p), window_arg(p)
    p.add_argument("--depth", type=int, default=0)

    p = add("rotation", cmd_rotation, help="exact translation number over a periodic labelling")
    lab_arg(p), word_arg(p)
    p.add_argument("--translate", help="precompose with a dyadic translation")
    p.add_argument("--qmax", type=int, default=64)
    p.add_argument("--nfallback", type=int, default=4096)

    p = add("axioms", cmd_axioms, help="recurrence bounds and inverse closure of factors")
    lab_arg(p)
    p.add_argument("-k", type=int, default=4)

    p = add("free-check", cmd_free_check, help="nontriviality of words over the free pair")
    lab_arg(p)
    p.add_argument("--max-len", type=int, default=6)

    p = add("chain", cmd_chain, help="commuting bridge between seeded elements")
    lab_arg(p)
    p.add_argument("--seed", type=int, default=0)

    p = add("to-zero", cmd_to_zero, help="find an element sending a dyadic point to 0")
    lab_arg(p)
    p.add_argument("--point", required=True,
                   help="dyadic point (negative: --point=-3/2^1)")
    p.add_argument("--budget", type=int, default=12)

    p = add("window-check", cmd_window_check, help="context-consistency check on a window")
    lab_arg(p), word_arg(p), window_arg(p)
    p.add_argument("-k", type=int, default=None)

    return ap


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        args.fn(args, out)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (NonDyadicBoundary,) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except PLMapError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (StabilizationError, AssertionError) as e:
        print(f"internal assertion failed: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
