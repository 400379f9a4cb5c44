"""Stability analysis: atoms, decorated atoms, and cellular decompositions.

An atom of an element is the closure of a maximal open interval in which
every integer is "active" (the element moves points in each of its
neighbourhoods), bracketed by integers whose neighbourhoods are fixed
pointwise.  Decorating an atom with the letter context of its carrier makes
the equivalence classes that drive the cellular decomposition: two
decorated atoms agree when their restrictions are translates with equal
contexts, or reflected translates with mutually inverse contexts.

Atoms cut off by the inspection window are flagged partial and poison
exact downstream claims; they are rejected rather than truncated.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .dyadic import Dyadic
from .labelling import Labelling, LetterWord, PeriodicLabelling
from .linegroup import LineMap
from .plmap import Interval, PLMap, PLMapError

__all__ = [
    "Atom",
    "DecoratedAtom",
    "PartialAtomError",
    "atoms_on",
    "classify_atoms",
    "PeriodicPiece",
    "WindowPiece",
    "cellular_decomposition",
    "StabilityReport",
    "periodic_stability",
    "stability_constant",
    "atoms_csv",
]


class PartialAtomError(PLMapError):
    """An atom ran into the window edge; enlarge the window."""


@dataclass(frozen=True)
class Atom:
    carrier: Interval  # integer endpoints
    restriction: PLMap
    partial: bool = False

    @property
    def length(self) -> int:
        return (self.carrier.hi - self.carrier.lo).floor()


@dataclass(frozen=True)
class DecoratedAtom:
    atom: Atom
    depth: int
    context: LetterWord

    @property
    def carrier(self) -> Interval:
        return self.atom.carrier


def _fixes_neighbourhood(g: PLMap, m: Dyadic) -> bool:
    """Does g fix a two-sided neighbourhood of m pointwise?  m interior."""
    if g(m) != m:
        return False
    xs, ys, slopes = g.xs, g.ys, g.slopes
    i = bisect.bisect_right(xs, m) - 1
    if i >= len(slopes):
        raise PLMapError(f"{m} is not interior to {g.domain}")
    if not (slopes[i] == 1 and ys[i] == xs[i]):
        return False
    if m == xs[i]:
        if i == 0:
            raise PLMapError(f"{m} is not interior to {g.domain}")
        return slopes[i - 1] == 1 and ys[i - 1] == xs[i - 1]
    return True


def atoms_on(h: LineMap, window: Interval) -> List[Atom]:
    """Nontrivial atoms met by the window, in carrier order.

    The element is restricted exactly to the window enlarged by one cell;
    runs of active integers give multi-cell atoms, and single cells between
    inactive integers give unit atoms when the restriction moves something.
    Runs touching the window edge are flagged partial.
    """
    lo, hi = window.lo.floor(), window.hi.floor()
    if Dyadic(lo) != window.lo or Dyadic(hi) != window.hi:
        raise PLMapError("atom window needs integer endpoints")
    g = h.restrict_any(Interval(lo - 1, hi + 1))
    active = {m: not _fixes_neighbourhood(g, Dyadic(m)) for m in range(lo, hi + 1)}
    atoms: List[Atom] = []
    m = lo
    while m <= hi:
        if active[m]:
            start = m
            while m <= hi and active[m]:
                m += 1
            carrier = Interval(start - 1, m)
            partial = start == lo or m > hi
            atoms.append(Atom(carrier, g.restrict(carrier), partial))
        else:
            if m + 1 <= hi and not active[m + 1]:
                seg = g.restrict(Interval(m, m + 1))
                if not seg.is_identity:
                    atoms.append(Atom(Interval(m, m + 1), seg, False))
            m += 1
    return atoms


def decorate(lab: Labelling, atoms: Sequence[Atom], depth: int) -> List[DecoratedAtom]:
    return [DecoratedAtom(a, depth, lab.word_on(a.carrier, depth)) for a in atoms]


def _equivalent(a: DecoratedAtom, b: DecoratedAtom) -> bool:
    if a.depth != b.depth or a.atom.length != b.atom.length:
        return False
    shift = b.carrier.lo - a.carrier.lo
    if a.context == b.context:
        if a.atom.restriction.translate(shift) == b.atom.restriction:
            return True
    if a.context == b.context.inverse():
        centre = (a.carrier.lo + a.carrier.hi).half()
        reflected = a.atom.restriction.point_reflect(centre).translate(shift)
        if reflected == b.atom.restriction:
            return True
    return False


def classify_atoms(decorated: Sequence[DecoratedAtom]) -> List[List[DecoratedAtom]]:
    """Partition into translate/reflected-translate classes."""
    classes: List[List[DecoratedAtom]] = []
    for da in decorated:
        for cls in classes:
            if _equivalent(cls[0], da):
                cls.append(da)
                break
        else:
            classes.append([da])
    return classes


def _extend_periodic(seg: PLMap, p: int, iv: Interval) -> PLMap:
    pd = Dyadic(p)
    k = (iv.lo - seg.xs[0]).floor_div(p)
    pieces = [seg.translate(pd * k)]
    while pieces[-1].xs[-1] < iv.hi:
        k += 1
        pieces.append(seg.translate(pd * k))
    xs = list(pieces[0].xs)
    ys = list(pieces[0].ys)
    for f in pieces[1:]:
        xs.extend(f.xs[1:])
        ys.extend(f.ys[1:])
    return PLMap(xs, ys).restrict(iv)


class PeriodicPiece(LineMap):
    """Global element determined by one fundamental-domain restriction.

    Valid over periodic labellings, where every element commutes with the
    period translation; the stored segment has pointwise-fixed endpoints.
    """

    def __init__(self, labelling: Labelling, segment: PLMap, context_radius: int):
        if labelling.period_letters is None:
            raise PLMapError("periodic piece needs a periodic labelling")
        p = labelling.period_letters // 2
        if segment.domain.length != p:
            raise PLMapError("segment must span one period")
        if segment.ys[0] != segment.xs[0] or segment.ys[-1] != segment.xs[-1]:
            raise PLMapError("segment endpoints must be fixed")
        self.labelling = labelling
        self.segment = segment
        self.period = p
        self.locality = p
        self.context_radius = context_radius

    def image(self, x: Dyadic) -> Dyadic:
        k = (x - self.segment.xs[0]).floor_div(self.period)
        shift = Dyadic(self.period) * k
        return self.segment(x - shift) + shift

    def restrict_any(self, iv: Interval) -> PLMap:
        return _extend_periodic(self.segment, self.period, iv)

    def inverse(self) -> "PeriodicPiece":
        return PeriodicPiece(
            self.labelling, self.segment.inverse(), self.context_radius
        )

    def __repr__(self):
        return f"PeriodicPiece(p={self.period})"


class WindowPiece(LineMap):
    """Element equal to a stored map on a window and the identity outside.

    Window-scoped stand-in for a cellular piece over quasi-periodic
    labellings; exact on and around its window only.
    """

    window_scoped = True

    def __init__(self, labelling: Labelling, segment: PLMap, context_radius: int):
        if segment.ys[0] != segment.xs[0] or segment.ys[-1] != segment.xs[-1]:
            raise PLMapError("segment endpoints must be fixed")
        self.labelling = labelling
        self.segment = segment
        self.locality = max(
            1, (segment.domain.hi - segment.domain.lo).ceil()
        )
        self.context_radius = context_radius

    def image(self, x: Dyadic) -> Dyadic:
        if self.segment.domain.contains(x):
            return self.segment(x)
        return x

    def restrict_any(self, iv: Interval) -> PLMap:
        dom = self.segment.domain
        pieces = []
        cursor = iv.lo
        inner_lo = dom.lo if dom.lo > iv.lo else iv.lo
        inner_hi = dom.hi if dom.hi < iv.hi else iv.hi
        if inner_lo < inner_hi:
            if cursor < inner_lo:
                pieces.append(PLMap.identity(Interval(cursor, inner_lo)))
            pieces.append(self.segment.restrict(Interval(inner_lo, inner_hi)))
            cursor = inner_hi
        if cursor < iv.hi:
            pieces.append(PLMap.identity(Interval(cursor, iv.hi)))
        return PLMap.concat(pieces)

    def inverse(self) -> "WindowPiece":
        return WindowPiece(self.labelling, self.segment.inverse(), self.context_radius)


def cellular_decomposition(
    h: LineMap, depth: int, window: Interval
) -> List[Tuple[List[DecoratedAtom], LineMap]]:
    """One piece per decorated-atom class: the element on the class, identity off.

    Pieces are global periodic elements over a periodic labelling (the
    window must span one period anchored at fixed integers) and
    window-scoped elements otherwise.  Partial atoms are rejected.
    """
    atoms = atoms_on(h, window)
    if any(a.partial for a in atoms):
        raise PartialAtomError("window cuts an atom; enlarge it")
    lab = h.labelling
    classes = classify_atoms(decorate(lab, atoms, depth))
    out: List[Tuple[List[DecoratedAtom], LineMap]] = []
    radius = 2 * depth + max((a.length for a in atoms), default=0)
    for cls in classes:
        xs: List[Dyadic] = [window.lo]
        ys: List[Dyadic] = [window.lo]
        for da in sorted(cls, key=lambda d: d.carrier.lo.to_fraction()):
            seg = da.atom.restriction
            if xs[-1] < seg.xs[0]:
                xs.append(seg.xs[0])
                ys.append(seg.xs[0])
            xs.extend(seg.xs[1:])
            ys.extend(seg.ys[1:])
        if xs[-1] < window.hi:
            xs.append(window.hi)
            ys.append(window.hi)
        seg = PLMap(xs, ys)
        if lab.period_letters is not None and window.length == lab.period_letters // 2:
            piece: LineMap = PeriodicPiece(lab, seg, radius)
        else:
            piece = WindowPiece(lab, seg, radius)
        out.append((cls, piece))
    return out


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    period: int
    atoms: Tuple[Atom, ...]
    classes: Tuple[Tuple[DecoratedAtom, ...], ...]
    witness_run: Optional[Tuple[int, int]]  # active integers spanning a period

    @property
    def class_count(self) -> int:
        return len(self.classes)


def periodic_stability(
    lab: PeriodicLabelling, h: LineMap, depth: Optional[int] = None
) -> StabilityReport:
    """Exact stability over one period.

    The activity pattern of the integers repeats with the period; if every
    integer of a period is active the element is unstable (no fixed
    integers at all), otherwise the finitely many atoms anchored in one
    period repeat along the line and are classified exactly.
    """
    if lab.period_letters is None:
        raise PLMapError("periodic stability needs a periodic labelling")
    p = lab.period_letters // 2
    g = h.restrict_any(Interval(-1, p + 1))
    active = [not _fixes_neighbourhood(g, Dyadic(m)) for m in range(0, p)]
    if all(active):
        return StabilityReport(False, p, (), (), (0, p - 1))
    c0 = active.index(False)
    atoms = atoms_on(h, Interval(c0, c0 + p))
    assert not any(a.partial for a in atoms)
    # drop the duplicate copy when an atom is anchored at both window ends
    unique = [a for a in atoms if a.carrier.lo < Dyadic(c0 + p)]
    if depth is None:
        depth = max(1, h.context_radius)
    classes = classify_atoms(decorate(lab, unique, depth))
    return StabilityReport(
        True,
        p,
        tuple(unique),
        tuple(tuple(c) for c in classes),
        None,
    )


def stability_constant(h: LineMap, k: int, window: Interval) -> int:
    """k plus the longest atom length on the window; partial atoms refuse."""
    atoms = atoms_on(h, window)
    if any(a.partial for a in atoms):
        raise PartialAtomError("window cuts an atom; enlarge it")
    return k + max((a.length for a in atoms), default=0)


def atoms_csv(lab: Labelling, atoms: Sequence[Atom], depth: int) -> str:
    """CSV table: carrier, class id, context word."""
    decorated = decorate(lab, atoms, depth)
    classes = classify_atoms(decorated)
    cls_of = {}
    for i, cls in enumerate(classes):
        for da in cls:
            cls_of[id(da)] = i
    lines = ["carrier_lo,carrier_hi,class,context"]
    for da in decorated:
        lines.append(
            f"{da.carrier.lo},{da.carrier.hi},{cls_of[id(da)]},{da.context}"
        )
    return "\n".join(lines) + "\n"
