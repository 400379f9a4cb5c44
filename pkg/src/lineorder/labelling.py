"""Labellings of the half-integer lattice by the four letters a, a', b, b'.

A labelling assigns a-letters (possibly inverted) to the integers and
b-letters to the half-integers.  Positions are handled internally in
half-units: the lattice point t/2 is addressed by the integer t, so even
addresses carry a-letters and odd addresses carry b-letters.  Letters are
stored as byte codes 0 = a, 1 = a', 2 = b, 3 = b'; words are bytes objects,
which makes factor scans plain substring searches.

Two implementations are provided: bi-infinite repetitions of a finite word,
and a quasi-periodic labelling generated by a folding rule
W_{n+1} = W_n . pad_a . reverse-invert(W_n) . pad_b . W_n, anchored so the
nested words exhaust the whole line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .dyadic import Dyadic
from .plmap import Interval

__all__ = [
    "Letter",
    "LetterWord",
    "Labelling",
    "PeriodicLabelling",
    "RecursiveLabelling",
    "MirrorLabelling",
    "mirror",
    "StabilizationError",
    "LabellingFileError",
    "AxiomEntry",
    "axiom_report",
    "periodic_approximation",
    "parse_labelling_file",
    "format_labelling_file",
]

A, A_INV, B, B_INV = 0, 1, 2, 3
_TOKENS = {"a": A, "a'": A_INV, "b": B, "b'": B_INV}
_NAMES = {v: k for k, v in _TOKENS.items()}


class StabilizationError(AssertionError):
    """Factor sets failed to stabilize; indicates a construction bug."""


class LabellingFileError(ValueError):
    pass


def _inv(code: int) -> int:
    return code ^ 1


def _inv_word(w: bytes) -> bytes:
    return bytes(c ^ 1 for c in reversed(w))


def _kind(code: int) -> int:
    """0 for a-letters, 1 for b-letters."""
    return code >> 1


@dataclass(frozen=True)
class Letter:
    kind: str  # "a" or "b"
    inverted: bool = False

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        return cls("ab"[code >> 1], bool(code & 1))

    @classmethod
    def from_token(cls, tok: str) -> "Letter":
        if tok not in _TOKENS:
            raise ValueError(f"unknown letter token {tok!r}")
        return cls.from_code(_TOKENS[tok])

    @property
    def code(self) -> int:
        return ("ab".index(self.kind) << 1) | int(self.inverted)

    @property
    def token(self) -> str:
        return _NAMES[self.code]

    def inverse(self) -> "Letter":
        return Letter(self.kind, not self.inverted)

    def __str__(self) -> str:
        return self.token


class LetterWord:
    """Finite word of alternating-kind letters.

    The kind of the first letter fixes the lattice parity of any occurrence:
    words starting with an a-letter sit at integer positions.
    """

    __slots__ = ("codes",)

    def __init__(self, codes):
        if isinstance(codes, LetterWord):
            codes = codes.codes
        b = bytes(codes)
        if not b:
            raise ValueError("empty letter word")
        for i in range(len(b) - 1):
            if _kind(b[i]) == _kind(b[i + 1]):
                raise ValueError(
                    f"kinds must alternate; violation at letter {i + 1}"
                )
        self.codes = b

    @classmethod
    def parse(cls, text: str) -> "LetterWord":
        toks = text.split()
        codes = []
        for i, t in enumerate(toks):
            if t not in _TOKENS:
                raise ValueError(f"unknown letter token {t!r} at position {i}")
            codes.append(_TOKENS[t])
        return cls(codes)

    def inverse(self) -> "LetterWord":
        return LetterWord(_inv_word(self.codes))

    @property
    def letters(self) -> Tuple[Letter, ...]:
        return tuple(Letter.from_code(c) for c in self.codes)

    @property
    def starts_on_integer(self) -> bool:
        return _kind(self.codes[0]) == 0

    def __len__(self):
        return len(self.codes)

    def __eq__(self, other):
        return isinstance(other, LetterWord) and self.codes == other.codes

    def __hash__(self):
        return hash(self.codes)

    def __str__(self):
        return " ".join(_NAMES[c] for c in self.codes)

    def __repr__(self):
        return f"LetterWord({str(self)!r})"

    def contains(self, other: "LetterWord") -> bool:
        return other.codes in self.codes


def _check_alternation_at(code: int, t: int):
    if _kind(code) != (t & 1):
        raise AssertionError(f"alternation broken at half-position {t}")


class Labelling:
    """Oracle for letters at half-integer positions; deterministic."""

    #: letters per period for periodic labellings, else None
    period_letters: Optional[int] = None

    def code_at(self, t: int) -> int:
        raise NotImplementedError

    # -- public letter access ---------------------------------------------

    def letter_at(self, pos) -> Letter:
        t = _half_units(pos)
        return Letter.from_code(self.code_at(t))

    def codes_between(self, t0: int, t1: int) -> bytes:
        """Letters at half-positions t0..t1 inclusive."""
        return bytes(self.code_at(t) for t in range(t0, t1 + 1))

    def word_at(self, x, n: int) -> LetterWord:
        """The 2n+1 letters centred on the cell of x.

        The centre is the half-integer y with x in [y - 1/2, y + 1/2).
        """
        if n < 0:
            raise ValueError("n must be >= 0")
        x = x if isinstance(x, Dyadic) else Dyadic(x)
        centre = 2 * x.floor() + 1
        return LetterWord(self.codes_between(centre - n, centre + n))

    def word_on(self, iv: Interval, n: int) -> LetterWord:
        """Letters from inf - n/2 through sup + n/2."""
        if n < 1:
            raise ValueError("n must be >= 1")
        t0 = _half_units(iv.lo) - n
        t1 = _half_units(iv.hi) + n
        return LetterWord(self.codes_between(t0, t1))

    # -- factors ------------------------------------------------------------

    def factors(self, k: int) -> Dict[bytes, int]:
        """All length-k factors, each with one occurrence half-position."""
        raise NotImplementedError


def _half_units(pos) -> int:
    """Coordinate on the half-integer lattice -> integer address."""
    if isinstance(pos, int):
        return 2 * pos
    if isinstance(pos, Dyadic):
        two = pos.mul_pow2(1)
        if not two.is_integer():
            raise ValueError(f"{pos} is not a half-integer")
        return two.num
    raise TypeError(f"expected int or Dyadic, got {pos!r}")


class PeriodicLabelling(Labelling):
    """Bi-infinite repetition of a finite word anchored at position 0.

    The word must have even length and start with an a-letter so that the
    repetition respects alternation.
    """

    def __init__(self, word: LetterWord):
        word = word if isinstance(word, LetterWord) else LetterWord(word)
        if len(word) % 2:
            raise ValueError("periodic word must have even length")
        if not word.starts_on_integer:
            raise ValueError("periodic word must start with an a-letter")
        self.word = word
        self.period_letters = len(word)
        self._factor_cache: Dict[int, Dict[bytes, int]] = {}

    @property
    def period(self) -> int:
        """Real-line period (letters / 2, always an integer)."""
        return self.period_letters // 2

    def code_at(self, t: int) -> int:
        return self.word.codes[t % self.period_letters]

    def factors(self, k: int) -> Dict[bytes, int]:
        if k < 1:
            raise ValueError("k must be >= 1")
        if k not in self._factor_cache:
            p = self.period_letters
            reps = k // p + 2
            big = self.word.codes * reps
            out: Dict[bytes, int] = {}
            for i in range(p):
                w = big[i : i + k]
                if w not in out:
                    out[w] = i
            self._factor_cache[k] = out
        return self._factor_cache[k]

    def __repr__(self):
        return f"PeriodicLabelling({str(self.word)!r})"


class RecursiveLabelling(Labelling):
    """Quasi-periodic labelling from the folding rule.

    Level words: W_0 = a b, W_{n+1} = W_n pad_a inv(W_n) pad_b W_n, where
    inv is reverse-and-invert.  Level n is anchored inside level n+1 at the
    prefix copy when n is even and at the suffix copy when n is odd, so the
    anchored words extend alternately rightward and leftward and exhaust the
    line.  Letter queries materialize just enough levels; materialized words
    are memoized (thread-safe in CPython: plain list appends).
    """

    def __init__(self, pads: Tuple[Letter, Letter] = (Letter("a"), Letter("b"))):
        pa, pb = pads
        if pa.kind != "a" or pb.kind != "b":
            raise ValueError("pads must be (a-letter, b-letter)")
        self.pads = (pa, pb)
        self._levels: List[bytes] = [bytes([A, B])]
        self._bases: List[int] = [0]
        self._factor_cache: Dict[int, Dict[bytes, int]] = {}

    def _extend(self):
        n = len(self._levels) - 1
        w = self._levels[-1]
        base = self._bases[-1]
        nxt = w + bytes([self.pads[0].code]) + _inv_word(w) + bytes([self.pads[1].code]) + w
        self._levels.append(nxt)
        self._bases.append(base if n % 2 == 0 else base - (2 * len(w) + 2))

    def _ensure_cover(self, t0: int, t1: int):
        while not (
            self._bases[-1] <= t0 and t1 < self._bases[-1] + len(self._levels[-1])
        ):
            self._extend()

    def level_word(self, m: int) -> bytes:
        while len(self._levels) <= m:
            self._extend()
        return self._levels[m]

    def level_base(self, m: int) -> int:
        self.level_word(m)
        return self._bases[m]

    def code_at(self, t: int) -> int:
        self._ensure_cover(t, t)
        return self._levels[-1][t - self._bases[-1]]

    def codes_between(self, t0: int, t1: int) -> bytes:
        self._ensure_cover(t0, t1)
        b = self._bases[-1]
        return self._levels[-1][t0 - b : t1 - b + 1]

    def min_level(self, k: int) -> int:
        """Least m with |W_m| >= k."""
        m = 0
        while len(self.level_word(m)) < k:
            m += 1
        return m

    def factors(self, k: int) -> Dict[bytes, int]:
        """Length-k factors with witnesses, from the stabilized level scan.

        New factors can only appear at pad junctions, whose k-contexts stop
        changing once the level word is longer than k; the equality of the
        two consecutive level scans below turns that argument into a runtime
        guarantee.
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        if k not in self._factor_cache:
            m = self.min_level(k) + 2
            w2, w3 = self.level_word(m), self.level_word(m + 1)
            f2 = _scan_factors(w2, k)
            f3 = _scan_factors(w3, k)
            if f2.keys() != f3.keys():
                raise StabilizationError(
                    f"factor sets of levels {m} and {m + 1} differ at k={k}"
                )
            base = self.level_base(m)
            self._factor_cache[k] = {w: base + i for w, i in f2.items()}
        return self._factor_cache[k]

    def __repr__(self):
        return f"RecursiveLabelling(pads=({self.pads[0]}, {self.pads[1]}))"


def _scan_factors(word: bytes, k: int) -> Dict[bytes, int]:
    out: Dict[bytes, int] = {}
    for i in range(len(word) - k + 1):
        w = word[i : i + k]
        if w not in out:
            out[w] = i
    return out


class MirrorLabelling(Labelling):
    """The reflection-inverse of a base labelling: letter(t) = base(-t)^-1.

    Supports letter queries only; used for the reflection covariance of the
    generators.
    """

    def __init__(self, base: Labelling):
        self.base = base

    def code_at(self, t: int) -> int:
        return _inv(self.base.code_at(-t))

    def factors(self, k):
        raise NotImplementedError("mirror wrapper has no factor enumeration")


def mirror(base: Labelling) -> Labelling:
    """Reflection-inverse labelling; periodic input gives periodic output."""
    if isinstance(base, PeriodicLabelling):
        p = base.period_letters
        codes = [_inv(base.code_at(-t)) for t in range(p)]
        return PeriodicLabelling(LetterWord(codes))
    return MirrorLabelling(base)


# -- quasi-periodicity reports -------------------------------------------------


@dataclass(frozen=True)
class AxiomEntry:
    word: LetterWord
    recurrence_bound: int  # least n: every length-n factor contains the word
    inverse_occurs: bool
    inverse_position: Optional[Dyadic]


def _recurs_in_all(lab: Labelling, w: bytes, n: int) -> bool:
    return all(w in f for f in lab.factors(n))


def axiom_report(lab: Labelling, k: int, bound_cap: int = 1 << 16) -> List[AxiomEntry]:
    """Recurrence bounds and inverse-closure for all factors of length <= k.

    The recurrence bound is exact relative to the stabilized factor sets;
    the containment predicate is monotone in the window length, so it is
    located by doubling then bisection.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    entries: List[AxiomEntry] = []
    for length in range(1, k + 1):
        for w in lab.factors(length):
            hi = length
            while not _recurs_in_all(lab, w, hi):
                hi *= 2
                if hi > bound_cap:
                    raise StabilizationError(
                        f"recurrence bound for {LetterWord(w)} exceeds cap {bound_cap}"
                    )
            lo = max(length, hi // 2)
            while lo < hi:
                mid = (lo + hi) // 2
                if _recurs_in_all(lab, w, mid):
                    hi = mid
                else:
                    lo = mid + 1
            inv = _inv_word(w)
            occ = lab.factors(length).get(inv)
            entries.append(
                AxiomEntry(
                    LetterWord(w),
                    hi,
                    occ is not None,
                    None if occ is None else Dyadic(occ, 1),
                )
            )
    return entries


def periodic_approximation(lab: RecursiveLabelling, k: int) -> PeriodicLabelling:
    """Periodic labelling sharing all factors of length <= k with lab.

    Takes the anchored level word that already contains every length-k
    factor, finds the next occurrence of its first k letters strictly past
    it, and repeats the letters in between.  The repetition is anchored so
    it agrees with lab on that stretch; the factor-set equality at length k
    is checked before returning.
    """
    if not isinstance(lab, RecursiveLabelling):
        raise TypeError("periodic approximation needs the recursive labelling")
    if k < 1:
        raise ValueError("k must be >= 1")
    lab.factors(k)  # force stabilization check
    m = lab.min_level(k) + 2
    big = lab.level_word(m)
    start = lab.level_base(m)
    span = len(big)
    prefix = big[:k]
    search_from = start + span
    window = 4 * span + 8
    stretch = lab.codes_between(search_from, search_from + window + k)
    idx = stretch.find(prefix)
    if idx < 0:
        raise StabilizationError("no later occurrence of the leading block found")
    cut = search_from + idx
    period_codes = lab.codes_between(start, cut - 1)
    assert len(period_codes) % 2 == 0
    # rotate so that the repetition is anchored compatibly with position 0
    off = (-start) % len(period_codes)
    rotated = period_codes[off:] + period_codes[:off]
    out = PeriodicLabelling(LetterWord(rotated))
    if out.factors(k).keys() != lab.factors(k).keys():
        raise StabilizationError("periodic approximation factor sets differ")
    return out


# -- labelling files ------------------------------------------------------------


def parse_labelling_file(text: str) -> Labelling:
    """Parse the simple key: value labelling format.

    Line 1 is 'type: periodic' or 'type: recursive'; periodic labellings
    give 'word: a b a' b'', recursive ones 'pads: a b' and an optional
    'depth-hint: N'.  Errors carry line/token positions.
    """
    entries = {}
    lines = text.splitlines()
    for no, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise LabellingFileError(f"line {no}: expected 'key: value'")
        key, val = line.split(":", 1)
        key = key.strip()
        if key in entries:
            raise LabellingFileError(f"line {no}: duplicate key {key!r}")
        entries[key] = (no, val.strip())
    if "type" not in entries:
        raise LabellingFileError("missing 'type:' line")
    tno, typ = entries.pop("type")
    if typ == "periodic":
        if "word" not in entries:
            raise LabellingFileError("periodic labelling needs a 'word:' line")
        wno, word = entries.pop("word")
        if entries:
            k = next(iter(entries))
            raise LabellingFileError(f"line {entries[k][0]}: unknown key {k!r}")
        try:
            lw = LetterWord.parse(word)
            return PeriodicLabelling(lw)
        except ValueError as e:
            raise LabellingFileError(f"line {wno}: {e}") from None
    if typ == "recursive":
        pads = (Letter("a"), Letter("b"))
        if "pads" in entries:
            pno, padstr = entries.pop("pads")
            toks = padstr.split()
            if len(toks) != 2:
                raise LabellingFileError(f"line {pno}: pads need two tokens")
            try:
                pads = (Letter.from_token(toks[0]), Letter.from_token(toks[1]))
            except ValueError as e:
                raise LabellingFileError(f"line {pno}: {e}") from None
        depth = 0
        if "depth-hint" in entries:
            dno, d = entries.pop("depth-hint")
            if not d.isdigit():
                raise LabellingFileError(f"line {dno}: depth-hint must be a number")
            depth = int(d)
        if entries:
            k = next(iter(entries))
            raise LabellingFileError(f"line {entries[k][0]}: unknown key {k!r}")
        try:
            lab = RecursiveLabelling(pads)
        except ValueError as e:
            raise LabellingFileError(f"line {tno}: {e}") from None
        lab.level_word(depth)
        return lab
    raise LabellingFileError(f"line {tno}: unknown type {typ!r}")


def format_labelling_file(lab: Labelling) -> str:
    if isinstance(lab, PeriodicLabelling):
        return f"type: periodic\nword: {lab.word}\n"
    if isinstance(lab, RecursiveLabelling):
        return f"type: recursive\npads: {lab.pads[0]} {lab.pads[1]}\n"
    raise TypeError(f"cannot serialize {lab!r}")
