"""Groups of PL homeomorphisms of the line built from a labelling.

Elements act on the right and are held lazily: a group element is a word in
cell-acting maps, never a global breakpoint list (its support has
infinitely many components).  Every global question is answered exactly by
reduction either to one period of a periodic labelling or to the finitely
many letter-context classes of a quasi-periodic one.

The six standard generators come in two families. A z-family map acts on
every integer cell [n, n+1] by a fixed seed map on [0,1], carried over by
the isometry and conjugated by the flip of the cell exactly when the
governing letter at n + 1/2 is inverted.  The x-family acts the same way on
the shifted cells [n - 1/2, n + 1/2], governed by the letters at the
integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .dyadic import Dyadic, ZERO
from .labelling import Labelling, RecursiveLabelling
from .plmap import Interval, PLMap, PLMapError, transporter
from . import thompson

__all__ = [
    "Gen",
    "GenWord",
    "LineMap",
    "GeneratorProduct",
    "SpecialElement",
    "Translation",
    "Composite",
    "AmbiguousMatch",
    "SearchBudgetExceeded",
    "generators",
    "generator_cell_map",
    "from_word",
    "embed_z",
    "embed_x",
    "identity_map",
    "TrivialityReport",
    "is_trivial",
    "WindowReport",
    "window_check",
    "special_element",
    "free_pair",
    "ChainCertificate",
    "commuting_chain",
    "move_to_zero",
    "transition_points_on",
]

UNIT = Interval(0, 1)


class AmbiguousMatch(PLMapError):
    """Overlapping pattern matches; raise the context depth to separate them."""


class SearchBudgetExceeded(RuntimeError):
    pass


# -- generator symbols -------------------------------------------------------


@dataclass(frozen=True)
class Gen:
    family: str  # "z" (integer cells) or "x" (shifted cells)
    index: int  # 1..3
    inverted: bool = False

    def __post_init__(self):
        if self.family not in ("z", "x") or self.index not in (1, 2, 3):
            raise ValueError(f"no such generator: {self.family}{self.index}")

    @property
    def token(self) -> str:
        return f"{self.family}{self.index}" + ("'" if self.inverted else "")

    def inverse(self) -> "Gen":
        return Gen(self.family, self.index, not self.inverted)

    def __str__(self):
        return self.token


#: fixed enumeration order of the twelve symbols
SYMBOLS: Tuple[Gen, ...] = tuple(
    Gen(f, i, inv) for f in ("z", "x") for i in (1, 2, 3) for inv in (False, True)
)


class GenWord:
    """Freely reduced word over the twelve generator symbols."""

    __slots__ = ("gens",)

    def __init__(self, gens: Iterable[Gen] = ()):
        out: List[Gen] = []
        for g in gens:
            if out and out[-1] == g.inverse():
                out.pop()
            else:
                out.append(g)
        self.gens = tuple(out)

    @classmethod
    def parse(cls, text: str) -> "GenWord":
        gens = []
        for i, tok in enumerate(text.split()):
            inv = tok.endswith("'")
            core = tok[:-1] if inv else tok
            if len(core) != 2 or core[0] not in "zx" or core[1] not in "123":
                raise ValueError(f"bad generator token {tok!r} at position {i}")
            gens.append(Gen(core[0], int(core[1]), inv))
        return cls(gens)

    def inverse(self) -> "GenWord":
        return GenWord(g.inverse() for g in reversed(self.gens))

    def __mul__(self, other: "GenWord") -> "GenWord":
        return GenWord(self.gens + other.gens)

    def __len__(self):
        return len(self.gens)

    def __eq__(self, other):
        return isinstance(other, GenWord) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __str__(self):
        return " ".join(g.token for g in self.gens) if self.gens else "e"

    def __repr__(self):
        return f"GenWord({str(self)!r})"


# -- cell atoms ---------------------------------------------------------------


class CellAtom:
    """One cell-acting factor: a seed map applied on every cell of a family.

    On a cell the action is the seed (or its flip, when the governing letter
    is inverted), transported by the isometry; `inverted` takes the inverse
    of that.
    """

    __slots__ = ("family", "base", "inverted", "label", "_plain", "_flipped")

    def __init__(self, family: str, base: PLMap, inverted: bool, label: str):
        if family not in ("z", "x"):
            raise ValueError("family must be 'z' or 'x'")
        if base.domain != UNIT or base.range != UNIT:
            raise PLMapError("cell seed must be a self-map of [0, 1]")
        if base.ys[0] != ZERO or base.ys[-1] != Dyadic(1):
            raise PLMapError("cell seed must fix the endpoints")
        if not base.power2_certified:
            raise PLMapError("cell seed must have power-of-2 slopes")
        self.family = family
        self.base = base
        self.inverted = inverted
        self.label = label
        self._plain: Optional[PLMap] = None
        self._flipped: Optional[PLMap] = None

    def variant(self, letter_inverted: bool) -> PLMap:
        if letter_inverted:
            if self._flipped is None:
                m = self.base.flipped(UNIT)
                self._flipped = m.inverse() if self.inverted else m
            return self._flipped
        if self._plain is None:
            self._plain = self.base.inverse() if self.inverted else self.base
        return self._plain

    def cancels(self, other: "CellAtom") -> bool:
        return (
            self.family == other.family
            and self.base == other.base
            and self.inverted != other.inverted
        )

    def inverse(self) -> "CellAtom":
        label = self.label[:-1] if self.label.endswith("'") else self.label + "'"
        return CellAtom(self.family, self.base, not self.inverted, label)

    def cell_of(self, x: Dyadic) -> Tuple[Dyadic, int]:
        """(cell left endpoint, half-unit address of the governing letter)."""
        if self.family == "z":
            n = x.floor()
            return Dyadic(n), 2 * n + 1
        n = (x + Dyadic(1, 1)).floor()
        return Dyadic(n) - Dyadic(1, 1), 2 * n


_SEEDS: Optional[Tuple[PLMap, PLMap, PLMap]] = None


def _seeds() -> Tuple[PLMap, PLMap, PLMap]:
    global _SEEDS
    if _SEEDS is None:
        _SEEDS = thompson.seed_triple()
    return _SEEDS


# -- lazy homeomorphisms -----------------------------------------------------


class LineMap:
    """Lazily evaluated homeomorphism of the line adapted to a labelling.

    locality bounds both how far points move and how far away letters can
    influence the displacement; context_radius is a letter-window bound for
    the window consistency conditions.
    """

    labelling: Labelling
    locality: int
    context_radius: int
    #: True for stand-ins that are only exact on and around a fixed window
    window_scoped: bool = False

    def image(self, x: Dyadic) -> Dyadic:
        raise NotImplementedError

    def restrict_any(self, iv: Interval) -> PLMap:
        raise NotImplementedError

    def window(self, iv: Interval) -> PLMap:
        """Exact restriction to a compact window."""
        return self.restrict_any(iv)

    def inverse(self) -> "LineMap":
        raise NotImplementedError

    def then(self, other: "LineMap") -> "LineMap":
        if self.labelling is not other.labelling:
            raise ValueError("cannot compose maps over different labellings")
        if isinstance(self, GeneratorProduct) and isinstance(other, GeneratorProduct):
            word = None
            if self.word is not None and other.word is not None:
                word = self.word * other.word
            return GeneratorProduct(self.labelling, self.atoms + other.atoms, word)
        parts: List[LineMap] = []
        for h in (self, other):
            parts.extend(h.factors if isinstance(h, Composite) else [h])
        return Composite(self.labelling, tuple(parts))

    def power(self, k: int) -> "LineMap":
        if k == 0:
            return identity_map(self.labelling)
        h = self if k > 0 else self.inverse()
        out = h
        for _ in range(abs(k) - 1):
            out = out.then(h)
        return out

    def commutator(self, other: "LineMap") -> "LineMap":
        return self.inverse().then(other.inverse()).then(self).then(other)


class GeneratorProduct(LineMap):
    """Product of cell atoms; covers generator words and the embedded copies
    of the interval group on either cell family."""

    def __init__(
        self,
        labelling: Labelling,
        atoms: Sequence[CellAtom] = (),
        word: Optional[GenWord] = None,
    ):
        reduced: List[CellAtom] = []
        for a in atoms:
            if reduced and reduced[-1].cancels(a):
                reduced.pop()
            else:
                reduced.append(a)
        self.labelling = labelling
        self.atoms = tuple(reduced)
        self.word = word
        self.locality = len(self.atoms)
        self.context_radius = 2 * len(self.atoms)

    def image(self, x: Dyadic) -> Dyadic:
        lab = self.labelling
        for a in self.atoms:
            lo, addr = a.cell_of(x)
            m = a.variant(bool(lab.code_at(addr) & 1))
            x = m(x - lo) + lo
        return x

    def _cover_map(self, a: CellAtom, iv: Interval) -> PLMap:
        """Restriction of the atom to iv, assembled cell by cell."""
        lab = self.labelling
        if a.family == "z":
            lo = Dyadic(iv.lo.floor())
        else:
            lo = Dyadic((iv.lo + Dyadic(1, 1)).floor()) - Dyadic(1, 1)
        pieces = []
        c = lo
        while c < iv.hi:
            _, addr = a.cell_of(c + Dyadic(1, 1))
            m = a.variant(bool(lab.code_at(addr) & 1))
            pieces.append(m.translate(c))
            c = c + 1
        return PLMap.concat(pieces).restrict(iv)

    def restrict_any(self, iv: Interval) -> PLMap:
        out = PLMap.identity(iv)
        for a in self.atoms:
            step = self._cover_map(a, out.range)
            out = out.then(step)
        return out

    def inverse(self) -> "GeneratorProduct":
        return GeneratorProduct(
            self.labelling,
            tuple(a.inverse() for a in reversed(self.atoms)),
            None if self.word is None else self.word.inverse(),
        )

    def __repr__(self):
        if self.word is not None:
            return f"GeneratorProduct({self.word})"
        return f"GeneratorProduct([{', '.join(a.label for a in self.atoms)}])"


class Translation(LineMap):
    """Translation by a dyadic amount; a group element over periodic labellings
    only (over quasi-periodic ones the inverse-context condition rules every
    nonzero translation out)."""

    def __init__(self, labelling: Labelling, amount: Dyadic):
        if labelling.period_letters is None:
            raise ValueError("translations require a periodic labelling")
        self.labelling = labelling
        self.amount = amount if isinstance(amount, Dyadic) else Dyadic(amount)
        self.locality = max(1, abs(self.amount).ceil())
        self.context_radius = labelling.period_letters

    def image(self, x: Dyadic) -> Dyadic:
        return x + self.amount

    def restrict_any(self, iv: Interval) -> PLMap:
        return PLMap([iv.lo, iv.hi], [iv.lo + self.amount, iv.hi + self.amount])

    def inverse(self) -> "Translation":
        return Translation(self.labelling, -self.amount)

    def __repr__(self):
        return f"Translation({self.amount})"


class SpecialElement(LineMap):
    """Element acting by a carried interval map on every context match.

    On each integer-endpoint interval J of the carrier's length whose
    letter context at the chosen depth equals the carrier's context, the
    element acts by the transported map; on every J whose context is the
    formal inverse, by the orientation-reversed transport; elsewhere it is
    the identity.  Overlapping matches are an error (raise the depth).
    """

    def __init__(self, labelling: Labelling, carrier: Interval, depth: int, f: PLMap):
        if not (carrier.lo.is_integer() and carrier.hi.is_integer()):
            raise PLMapError("carrier needs integer endpoints")
        if depth < 1:
            raise ValueError("context depth must be >= 1")
        if f.domain != UNIT or f.range != UNIT:
            raise PLMapError("pattern map must be a self-map of [0, 1]")
        comps = f.support_components()
        if comps and not (ZERO < comps[0].lo and comps[-1].hi < Dyadic(1)):
            raise PLMapError("pattern map must be compactly supported in (0, 1)")
        if not f.power2_certified:
            raise PLMapError("pattern map must have power-of-2 slopes")
        self.labelling = labelling
        self.carrier = carrier
        self.depth = depth
        self.pattern = f
        self.width = (carrier.hi - carrier.lo).floor()
        self.carried = f.rescaled(carrier)
        self.context = labelling.word_on(carrier, depth)
        if self.context == self.context.inverse():
            raise AmbiguousMatch(
                "carrier context is its own inverse; raise the depth"
            )
        letters = 2 * self.width + 2 * depth + 1
        self.locality = self.width + (depth + 1) // 2 + 1
        self.context_radius = 2 * letters
        self._matches: Dict[int, int] = {}

    def match_type(self, j: int) -> int:
        """+1 direct match at [j, j+width], -1 inverse match, 0 otherwise."""
        got = self._matches.get(j)
        if got is None:
            w = self.labelling.word_on(Interval(j, j + self.width), self.depth)
            got = 1 if w == self.context else (-1 if w == self.context.inverse() else 0)
            self._matches[j] = got
        return got

    def _matched_in(self, lo: int, hi: int) -> List[Tuple[int, int]]:
        """Sorted matches [j, j+width] with j in [lo, hi]; overlap-checked."""
        out = [(j, t) for j in range(lo, hi + 1) if (t := self.match_type(j))]
        for (j1, _), (j2, _) in zip(out, out[1:]):
            if j2 - j1 < self.width:
                raise AmbiguousMatch(
                    f"matches at {j1} and {j2} overlap; raise the depth"
                )
        return out

    def _action(self, j: int, typ: int) -> PLMap:
        target = Interval(j, j + self.width)
        return self.carried.transported(target, reverse=(typ < 0))

    def image(self, x: Dyadic) -> Dyadic:
        lo = x.ceil() - self.width
        hi = x.floor()
        for j, typ in self._matched_in(lo, hi):
            if Dyadic(j) < x < Dyadic(j + self.width):
                return self._action(j, typ)(x)
        return x

    def restrict_any(self, iv: Interval) -> PLMap:
        lo = iv.lo.floor() - self.width
        hi = iv.hi.ceil()
        pieces: List[PLMap] = []
        cursor = iv.lo
        for j, typ in self._matched_in(lo, hi):
            a, b = Dyadic(j), Dyadic(j + self.width)
            a = a if a > iv.lo else iv.lo
            b = b if b < iv.hi else iv.hi
            if not a < b:
                continue
            if cursor < a:
                pieces.append(PLMap.identity(Interval(cursor, a)))
            pieces.append(self._action(j, typ).restrict(Interval(a, b)))
            cursor = b
        if cursor < iv.hi:
            pieces.append(PLMap.identity(Interval(cursor, iv.hi)))
        return PLMap.concat(pieces)

    def inverse(self) -> "SpecialElement":
        return SpecialElement(
            self.labelling, self.carrier, self.depth, self.pattern.inverse()
        )

    def __repr__(self):
        return f"SpecialElement({self.carrier}, depth={self.depth})"


class Composite(LineMap):
    """Left-to-right product of heterogeneous lazy maps."""

    def __init__(self, labelling: Labelling, factors: Tuple[LineMap, ...]):
        self.labelling = labelling
        self.factors = factors
        self.locality = sum(f.locality for f in factors)
        self.context_radius = sum(f.context_radius for f in factors)
        self.window_scoped = any(f.window_scoped for f in factors)

    def image(self, x: Dyadic) -> Dyadic:
        for f in self.factors:
            x = f.image(x)
        return x

    def restrict_any(self, iv: Interval) -> PLMap:
        out = PLMap.identity(iv)
        for f in self.factors:
            out = out.then(f.restrict_any(out.range))
        return out

    def inverse(self) -> "Composite":
        return Composite(
            self.labelling, tuple(f.inverse() for f in reversed(self.factors))
        )

    def __repr__(self):
        return f"Composite({len(self.factors)} factors)"


# -- constructors -------------------------------------------------------------


def identity_map(labelling: Labelling) -> GeneratorProduct:
    return GeneratorProduct(labelling, (), GenWord())


def _atom_for(gen: Gen) -> CellAtom:
    return CellAtom(gen.family, _seeds()[gen.index - 1], gen.inverted, gen.token)


def generators(labelling: Labelling) -> Dict[str, GeneratorProduct]:
    """The six standard generators, keyed by token."""
    out = {}
    for fam in ("z", "x"):
        for i in (1, 2, 3):
            g = Gen(fam, i)
            out[g.token] = GeneratorProduct(labelling, (_atom_for(g),), GenWord([g]))
    return out


def from_word(labelling: Labelling, word) -> GeneratorProduct:
    if isinstance(word, str):
        word = GenWord.parse(word)
    return GeneratorProduct(labelling, tuple(_atom_for(g) for g in word.gens), word)


def generator_cell_map(labelling: Labelling, gen: Gen, cell: Interval) -> PLMap:
    """The generator's action on one of its own cells, as a finite map."""
    if gen.family == "z":
        if not (cell.lo.is_integer() and cell.length == 1):
            raise PLMapError(f"{gen.token} acts on integer cells, not {cell}")
        addr = 2 * cell.lo.floor() + 1
    else:
        if not ((cell.lo + Dyadic(1, 1)).is_integer() and cell.length == 1):
            raise PLMapError(f"{gen.token} acts on shifted cells, not {cell}")
        addr = 2 * (cell.lo + Dyadic(1, 1)).floor()
    atom = _atom_for(gen)
    m = atom.variant(bool(labelling.code_at(addr) & 1))
    return m.translate(cell.lo)


def _boundary_fixing(f: PLMap) -> PLMap:
    if f.domain != UNIT or f.range != UNIT:
        raise PLMapError("embedded maps must be self-maps of [0, 1]")
    if not f.power2_certified:
        raise PLMapError("embedded maps must have power-of-2 slopes")
    return f


def embed_z(labelling: Labelling, f: PLMap, label: str = "emb_z") -> GeneratorProduct:
    """Copy f onto every integer cell, following the letters at n + 1/2."""
    return GeneratorProduct(
        labelling, (CellAtom("z", _boundary_fixing(f), False, label),)
    )


def embed_x(labelling: Labelling, f: PLMap, label: str = "emb_x") -> GeneratorProduct:
    """Copy f onto every shifted cell, following the letters at the integers."""
    return GeneratorProduct(
        labelling, (CellAtom("x", _boundary_fixing(f), False, label),)
    )


def special_element(
    labelling: Labelling, carrier: Interval, depth: int, f: PLMap
) -> SpecialElement:
    return SpecialElement(labelling, carrier, depth, f)


# -- triviality ----------------------------------------------------------------

_SAMPLE_OFFSETS = (Dyadic(1, 5), Dyadic(15, 5), Dyadic(17, 5), Dyadic(31, 5))
_SAMPLE_CELLS = tuple(range(-6, 7))


@dataclass(frozen=True)
class TrivialityReport:
    trivial: bool
    witness: Optional[Dyadic] = None  # a moved point when nontrivial

    def __bool__(self):
        return self.trivial


def is_trivial(h: LineMap, quick: bool = True) -> TrivialityReport:
    """Exact triviality decision.

    Periodic labelling: restrict to one period window (every element commutes
    with the period translation).  Quasi-periodic: test one witness cell per
    letter-context class at the element's locality radius.  The quick pass
    only ever certifies nontriviality, so it cannot change the answer.
    """
    if h.window_scoped and h.labelling.period_letters is None:
        raise TypeError("window-scoped elements have no global triviality")
    if quick:
        for c in _SAMPLE_CELLS:
            for off in _SAMPLE_OFFSETS:
                x = Dyadic(c) + off
                if h.image(x) != x:
                    return TrivialityReport(False, x)
    lab = h.labelling
    if lab.period_letters is not None:
        p = lab.period_letters // 2
        g = h.restrict_any(Interval(0, p))
        w = g.moves_point()
        return TrivialityReport(w is None, w)
    if not isinstance(lab, RecursiveLabelling):
        raise TypeError("triviality needs factor enumeration on the labelling")
    radius = max(1, h.locality)
    k = 4 * radius + 3
    for word, pos in lab.factors(k).items():
        if word[0] >> 1:  # keep contexts anchored at integer cells
            continue
        cell = pos // 2 + radius
        g = h.restrict_any(Interval(cell, cell + 1))
        w = g.moves_point()
        if w is not None:
            return TrivialityReport(False, w)
    return TrivialityReport(True, None)


# -- window consistency (the two displacement-matching clauses) ----------------


@dataclass(frozen=True)
class WindowViolation:
    clause: str  # "equal-context" or "inverse-context"
    cell_a: int
    cell_b: int
    point: Dyadic


@dataclass(frozen=True)
class WindowReport:
    ok: bool
    k: int
    window: Interval
    cells: int
    violations: Tuple[WindowViolation, ...]


def _first_difference(f: PLMap, g: PLMap) -> Optional[Dyadic]:
    for x in sorted(set(f.xs) | set(g.xs)):
        if f(x) != g(x):
            return x
    return None


def window_check(h: LineMap, k: Optional[int], window: Interval) -> WindowReport:
    """Exact check of the two context conditions on a window.

    Cells with equal letter contexts of radius k must have translate-equal
    restrictions; cells with mutually inverse contexts must have
    reflection-conjugate ones.  Comparing whole cell restrictions subsumes
    any pointwise sampling.
    """
    if k is None:
        k = h.context_radius
    if not (window.lo.is_integer() and window.hi.is_integer()):
        raise PLMapError("window check needs integer window endpoints")
    lab = h.labelling
    lo, hi = window.lo.floor(), window.hi.floor()
    cells = list(range(lo, hi))
    ctx: Dict[int, bytes] = {
        n: lab.codes_between(2 * n + 1 - k, 2 * n + 1 + k) for n in cells
    }
    maps: Dict[int, PLMap] = {
        n: h.restrict_any(Interval(n, n + 1)) for n in cells
    }
    groups: Dict[bytes, List[int]] = {}
    for n in cells:
        groups.setdefault(ctx[n], []).append(n)
    violations: List[WindowViolation] = []
    for word, members in groups.items():
        base = maps[members[0]]
        for n in members[1:]:
            expected = base.translate(n - members[0])
            if maps[n] != expected:
                violations.append(
                    WindowViolation(
                        "equal-context",
                        members[0],
                        n,
                        _first_difference(maps[n], expected),
                    )
                )
    for word, members in groups.items():
        partner = bytes(c ^ 1 for c in reversed(word))
        if partner not in groups or partner < word:
            continue
        m = groups[partner][0]
        n = members[0]
        reflected = maps[m].point_reflect(Dyadic(2 * m + 1, 1)).translate(n - m)
        if maps[n] != reflected:
            violations.append(
                WindowViolation(
                    "inverse-context", n, m, _first_difference(maps[n], reflected)
                )
            )
    return WindowReport(not violations, k, window, len(cells), tuple(violations))


# -- constructions ------------------------------------------------------------


def free_pair(labelling: Labelling) -> Tuple[GeneratorProduct, GeneratorProduct]:
    """A pair of embedded copies of one interval map, one per cell family.

    The map is supported exactly on (1/16, 15/16), moves every interior
    point up, and sends 1/8 above 7/8; both constraints are asserted.
    """
    lo, hi = Dyadic(1, 4), Dyadic(15, 4)
    mid, peak = Dyadic(1, 3), Dyadic(29, 5)
    from .plmap import interval_map

    up = interval_map(Interval(lo, mid), Interval(lo, peak))
    down = interval_map(Interval(mid, hi), Interval(peak, hi))
    f = PLMap.concat([up, down]).extend_identity(UNIT)
    assert f.support_components() == [Interval(lo, hi)]
    assert f(Dyadic(1, 3)) == peak and peak > Dyadic(7, 3)
    assert all(y > x for x, y in zip(f.xs, f.ys) if lo < x < hi)
    return embed_z(labelling, f, "pair_z"), embed_x(labelling, f, "pair_x")


def _pow2_at_most(d: Dyadic) -> Dyadic:
    """Largest power of two <= d (d > 0)."""
    if d.num <= 0:
        raise ValueError("need a positive value")
    k = d.num.bit_length() - 1 - d.exp
    return Dyadic(1).mul_pow2(k)


def _support_margin(h: GeneratorProduct) -> Dyadic:
    """Distance from the union of seed supports to the cell endpoints."""
    if not h.atoms:
        raise ValueError("identity has no support margin")
    margin = Dyadic(1)
    for a in h.atoms:
        comps = a.base.support_components()
        if not comps:
            continue
        margin = min(margin, comps[0].lo, Dyadic(1) - comps[-1].hi)
    if margin <= ZERO:
        raise ValueError("seed support touches the cell boundary")
    return margin


def _small_bump(eps: Dyadic) -> PLMap:
    """An interval-group element supported inside (0, eps)."""
    lo = eps.mul_pow2(-2)
    return thompson.left_bump().rescaled(Interval(lo, eps.half())).extend_identity(UNIT)


@dataclass(frozen=True)
class ChainCertificate:
    eps_f: Dyadic  # margin of the first element's supports
    eps_mid_z: Dyadic  # support radius of the first bridge, around integers
    eps_mid_x: Dyadic  # support radius of the second bridge, around half-integers
    commutators_trivial: Tuple[bool, bool, bool]

    @property
    def supports_disjoint(self) -> bool:
        return self.eps_mid_z < Dyadic(1, 2) and self.eps_mid_x < Dyadic(1, 2)


def commuting_chain(
    labelling: Labelling, f: GeneratorProduct, g: GeneratorProduct
) -> Tuple[GeneratorProduct, GeneratorProduct, ChainCertificate]:
    """Two bridge elements linking f (z-family) to g (x-family).

    The first bridge lives near the integers, inside the margin that f's
    supports leave free; the second near the half-integers, inside g's
    margin.  Consecutive supports are disjoint by construction and the three
    commutators are checked exactly.
    """
    if not f.atoms or any(a.family != "z" for a in f.atoms):
        raise ValueError("first element must be a nontrivial z-family product")
    if not g.atoms or any(a.family != "x" for a in g.atoms):
        raise ValueError("second element must be a nontrivial x-family product")
    eps_f = _pow2_at_most(min(_support_margin(f), Dyadic(1, 3)))
    eps_g = _pow2_at_most(min(_support_margin(g), Dyadic(1, 3)))
    h1 = embed_z(labelling, _small_bump(eps_f), "bridge_z")
    h2 = embed_x(labelling, _small_bump(eps_g), "bridge_x")
    checks = (
        is_trivial(f.commutator(h1)).trivial,
        is_trivial(h1.commutator(h2)).trivial,
        is_trivial(h2.commutator(g)).trivial,
    )
    cert = ChainCertificate(eps_f, eps_f, eps_g, checks)
    if not all(checks):
        raise AssertionError(f"chain commutators failed: {checks}")
    return h1, h2, cert


def move_to_zero(
    labelling: Labelling, r: Dyadic, max_steps: int = 12
) -> Tuple[LineMap, GenWord]:
    """An element sending r to 0: generator search, then one shifted-cell move.

    Breadth-first search over generator words (deterministic symbol order)
    until the point lands in (0, 1/2); a transporter embedded on the shifted
    cells finishes the job.  The budget is reported on failure, never papered
    over.
    """
    from collections import deque

    steps = {g.token: from_word(labelling, GenWord([g])) for g in SYMBOLS}
    if r == ZERO:
        return identity_map(labelling), GenWord()

    def finish(word: GenWord, point: Dyadic) -> Tuple[LineMap, GenWord]:
        head = from_word(labelling, word)
        if point == ZERO:
            return head, word
        u = point + Dyadic(1, 1)  # shifted-cell coordinates on [0, 1]
        t = transporter(u, Dyadic(1, 1), UNIT)
        if labelling.code_at(0) & 1:
            t = t.flipped(UNIT)
        out = head.then(embed_x(labelling, t, "to_zero"))
        assert out.image(r) == ZERO
        return out, word

    seen = {r}
    queue = deque([(GenWord(), r)])
    while queue:
        word, point = queue.popleft()
        if ZERO < point < Dyadic(1, 1):
            return finish(word, point)
        if len(word) >= max_steps:
            continue
        for tok in sorted(steps):
            nxt = steps[tok].image(point)
            if nxt == ZERO:
                return finish(word * steps[tok].word, nxt)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((word * steps[tok].word, nxt))
    raise SearchBudgetExceeded(
        f"no word of length <= {max_steps} moves {r} into (0, 1/2)"
    )


def transition_points_on(h: LineMap, window: Interval) -> List[Dyadic]:
    """Transition points (fixed boundary points of the support) inside window.

    Computed from the exact restriction to the window enlarged by one cell,
    so window-edge artifacts cannot appear.
    """
    wide = Interval(window.lo - 1, window.hi + 1)
    g = h.restrict_any(wide)
    pts = set()
    for a, b in g.support_runs():
        for p in (a, b):
            if window.lo < p < window.hi:
                pts.add(p)
    return sorted(pts)
