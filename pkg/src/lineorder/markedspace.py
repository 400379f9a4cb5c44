"""The space of marked groups at desk scale.

A marked group here is a labelling with its standard six-generator marking;
the only oracle needed is exact word triviality.  The distance between two
marked groups is 2**(-nu), where nu is the largest length up to which the
two triviality oracles agree on every word; nu is computed by exhaustive
enumeration of freely reduced words and reported as exact-with-witness or
as a lower bound, never interpolated.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from .dyadic import Dyadic
from .labelling import Labelling, PeriodicLabelling, RecursiveLabelling, periodic_approximation
from .linegroup import (
    GeneratorProduct,
    GenWord,
    LineMap,
    SYMBOLS,
    _atom_for,
    is_trivial,
)
from .plmap import Interval, PLMapError
from .thompson import CircleMap, RotationResult, exact_translation_number

__all__ = [
    "MarkedGroup",
    "reduced_words",
    "reduced_word_count",
    "NuResult",
    "nu_bound",
    "ConvergenceRow",
    "convergence_table",
    "quotient_circle",
    "translation_number",
    "translation_multiple",
    "rows_to_csv",
    "rows_to_json",
]


_INV = [i ^ 1 for i in range(12)]  # symbol index of the inverse symbol


def reduced_words(length: int) -> Iterator[Tuple[int, ...]]:
    """All freely reduced words of exactly this length, lexicographically.

    Words are tuples of symbol indices into SYMBOLS; adjacent inverse pairs
    are excluded, nothing else.
    """
    if length < 1:
        return
    word = [0] * length

    def rec(i: int):
        for s in range(12):
            if i and s == _INV[word[i - 1]]:
                continue
            word[i] = s
            if i + 1 == length:
                yield tuple(word)
            else:
                yield from rec(i + 1)

    yield from rec(0)


def reduced_word_count(length: int) -> int:
    return 12 * 11 ** (length - 1) if length >= 1 else 1


def _canonical(seq: Tuple[int, ...]) -> bool:
    """Keep one of each word/inverse pair; triviality is inversion-invariant."""
    inv = tuple(_INV[s] for s in reversed(seq))
    return seq <= inv


class MarkedGroup:
    """A labelling with the standard marking and its triviality oracle."""

    def __init__(self, labelling: Labelling, name: str = ""):
        self.labelling = labelling
        self.name = name or repr(labelling)
        self._atoms = [_atom_for(g) for g in SYMBOLS]

    def element(self, seq) -> GeneratorProduct:
        if isinstance(seq, GenWord):
            return GeneratorProduct(
                self.labelling, tuple(self._atoms[SYMBOLS.index(g)] for g in seq.gens), seq
            )
        return GeneratorProduct(
            self.labelling,
            tuple(self._atoms[s] for s in seq),
            GenWord(SYMBOLS[s] for s in seq),
        )

    def word_trivial(self, seq) -> bool:
        return is_trivial(self.element(seq)).trivial

    def __repr__(self):
        return f"MarkedGroup({self.name})"


@dataclass(frozen=True)
class NuResult:
    nu: int
    exact: bool  # True: nu is exact, with a witness; False: nu is a lower bound
    witness: Optional[GenWord]
    words_checked: int

    @property
    def distance_repr(self) -> str:
        rel = "=" if self.exact else "<="
        return f"d {rel} 2^-{self.nu}"


def nu_bound(a: MarkedGroup, b: MarkedGroup, k_max: int) -> NuResult:
    """Agreement depth of the two triviality oracles, by brute enumeration.

    Scans all freely reduced words of length 1..k_max in a fixed order (one
    representative per word/inverse pair); the first disagreement gives the
    exact nu and a witness, otherwise nu >= k_max is reported.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    checked = 0
    for length in range(1, k_max + 1):
        for seq in reduced_words(length):
            if not _canonical(seq):
                continue
            checked += 1
            if a.word_trivial(seq) != b.word_trivial(seq):
                return NuResult(length - 1, True, GenWord(SYMBOLS[s] for s in seq), checked)
    return NuResult(k_max, False, None, checked)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    k: int  # factor-agreement length used to build the approximation
    period_letters: int
    nu_lower_bound: int
    passed: bool
    witness: str  # empty when the bound holds
    wall_time_ms: int


def convergence_table(
    lab: RecursiveLabelling, n_max: int, factor_rule=lambda n: 4 * n
) -> List[ConvergenceRow]:
    """Periodic approximations converging to the quasi-periodic group.

    Row n approximates with factor-agreement length 4n and certifies
    agreement of the marked groups on all words of length <= n.
    """
    target = MarkedGroup(lab, "quasi-periodic")
    rows: List[ConvergenceRow] = []
    for n in range(1, n_max + 1):
        t0 = time.monotonic()
        k = factor_rule(n)
        approx = periodic_approximation(lab, k)
        near = MarkedGroup(approx, f"periodic[{n}]")
        res = nu_bound(target, near, n)
        ms = int((time.monotonic() - t0) * 1000)
        rows.append(
            ConvergenceRow(
                n,
                k,
                approx.period_letters,
                res.nu,
                not res.exact,
                "" if res.witness is None else str(res.witness),
                ms,
            )
        )
    return rows


def quotient_circle(lab: PeriodicLabelling, h: LineMap, check: bool = True) -> CircleMap:
    """Image of an element in the circle group of circumference one period.

    The restriction to one period is a lift; the displacement must repeat
    with the period, which is verified exactly on a two-period window
    (failure indicates a bug, not bad input).
    """
    if lab.period_letters is None:
        raise PLMapError("circle quotient needs a periodic labelling")
    p = lab.period_letters // 2
    lift = h.restrict_any(Interval(0, p))
    if check:
        two = h.restrict_any(Interval(0, 2 * p))
        if two.restrict(Interval(p, 2 * p)) != lift.translate(p):
            raise AssertionError("element does not commute with the period translation")
    return CircleMap(lift, p)


def translation_number(
    lab: PeriodicLabelling, h: LineMap, q_max: int = 64, n_fallback: int = 4096
) -> RotationResult:
    """Limit displacement rate of the orbit of 0; exact rational when resolved."""
    p = lab.period_letters // 2
    lift = h.restrict_any(Interval(0, p))
    return exact_translation_number(lift, p, q_max, n_fallback)


def translation_multiple(lab: PeriodicLabelling, h: LineMap, window: Interval):
    """k when h agrees with translation by k periods on the window, else None."""
    p = lab.period_letters // 2
    g = h.restrict_any(window)
    if len(g.xs) != 2 or g.slopes[0] != Dyadic(1):
        return None
    offset = g.ys[0] - g.xs[0]
    if not offset.is_integer() or offset.num % p:
        return None
    return offset.num // p


def rows_to_csv(rows: List[ConvergenceRow]) -> str:
    out = ["n,k,period_letters,nu_lower_bound,witness_word,wall_time_ms"]
    for r in rows:
        out.append(
            f"{r.n},{r.k},{r.period_letters},{r.nu_lower_bound},{r.witness},{r.wall_time_ms}"
        )
    return "\n".join(out) + "\n"


def rows_to_json(rows: List[ConvergenceRow]) -> str:
    return json.dumps(
        [
            {
                "n": r.n,
                "k": r.k,
                "period_letters": r.period_letters,
                "nu_lower_bound": r.nu_lower_bound,
                "passed": r.passed,
                "witness_word": r.witness,
                "wall_time_ms": r.wall_time_ms,
            }
            for r in rows
        ],
        indent=2,
    )
