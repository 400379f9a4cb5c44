"""Finite piecewise-linear increasing bijections between compact dyadic intervals.

A PLMap is stored as parallel breakpoint/value lists with exact Dyadic
entries.  The canonical form (no breakpoint where the adjacent slopes agree)
is unique, so two maps are equal as functions iff their lists are equal;
that is the equality test used everywhere.

Composition reads left to right throughout the package: x . (f g) means
apply f first, i.e. compose(f, g) is the map x -> g(f(x)).
"""

from __future__ import annotations

import bisect
from fractions import Fraction
from typing import Iterable, Optional

from .dyadic import Dyadic

__all__ = [
    "Interval",
    "PLMap",
    "PLMapError",
    "NonDyadicBoundary",
    "compose",
    "interval_map",
    "transporter",
]


class PLMapError(ValueError):
    pass


class NonDyadicBoundary(PLMapError):
    """A support boundary fell outside the dyadics.

    Fixed points of pieces with slope 2**k, |k| >= 2, can be rationals with
    odd denominator.  Rather than return an approximation we refuse; the
    exact rational is carried on the exception.
    """

    def __init__(self, message: str, point: Fraction):
        super().__init__(message)
        self.point = point


def _dy(x) -> Dyadic:
    if isinstance(x, Dyadic):
        return x
    if isinstance(x, int):
        return Dyadic(x)
    raise TypeError(f"expected Dyadic or int, got {x!r}")


class Interval:
    """Compact interval [lo, hi] with dyadic endpoints, lo < hi."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo, hi = _dy(lo), _dy(hi)
        if not lo < hi:
            raise PLMapError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @property
    def length(self) -> Dyadic:
        return self.hi - self.lo

    def contains(self, x, strict: bool = False) -> bool:
        x = _dy(x)
        if strict:
            return self.lo < x < self.hi
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps_interior(self, other: "Interval") -> bool:
        return self.lo < other.hi and other.lo < self.hi

    def __eq__(self, other):
        return (
            isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi
        )

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


class PLMap:
    """Strictly increasing piecewise-linear bijection, exact dyadic data."""

    __slots__ = ("xs", "ys", "slopes")

    def __init__(self, breakpoints: Iterable, values: Iterable):
        xs = [_dy(x) for x in breakpoints]
        ys = [_dy(y) for y in values]
        if len(xs) != len(ys) or len(xs) < 2:
            raise PLMapError("need matching breakpoint/value lists, length >= 2")
        for i in range(len(xs) - 1):
            if not xs[i] < xs[i + 1]:
                raise PLMapError(f"breakpoints not strictly increasing at {i}")
            if not ys[i] < ys[i + 1]:
                raise PLMapError(f"values not strictly increasing at {i}")
        slopes = []
        for i in range(len(xs) - 1):
            try:
                slopes.append((ys[i + 1] - ys[i]).div_exact(xs[i + 1] - xs[i]))
            except ValueError:
                raise PLMapError(
                    f"slope on piece {i} is not a dyadic rational"
                ) from None
        # canonical form: drop breakpoints where adjacent slopes coincide
        cx, cy, cs = [xs[0]], [ys[0]], []
        for i in range(len(slopes)):
            if cs and cs[-1] == slopes[i]:
                cx[-1], cy[-1] = xs[i + 1], ys[i + 1]
            else:
                cx.append(xs[i + 1])
                cy.append(ys[i + 1])
                cs.append(slopes[i])
        self.xs = tuple(cx)
        self.ys = tuple(cy)
        self.slopes = tuple(cs)

    # -- basics ------------------------------------------------------------

    @classmethod
    def identity(cls, iv: Interval) -> "PLMap":
        return cls([iv.lo, iv.hi], [iv.lo, iv.hi])

    @property
    def domain(self) -> Interval:
        return Interval(self.xs[0], self.xs[-1])

    @property
    def range(self) -> Interval:
        return Interval(self.ys[0], self.ys[-1])

    @property
    def is_identity(self) -> bool:
        return len(self.xs) == 2 and self.slopes[0] == 1 and self.xs[0] == self.ys[0]

    @property
    def power2_certified(self) -> bool:
        """True when every slope is an integer power of 2."""
        return all(s.num > 0 and s.log2() is not None for s in self.slopes)

    def __eq__(self, other):
        return (
            isinstance(other, PLMap) and self.xs == other.xs and self.ys == other.ys
        )

    def __hash__(self):
        return hash((self.xs, self.ys))

    def __repr__(self):
        pairs = ", ".join(f"{x}->{y}" for x, y in zip(self.xs, self.ys))
        return f"PLMap({pairs})"

    # -- evaluation ----------------------------------------------------------

    def _piece(self, x: Dyadic) -> int:
        """Index of the piece whose closed domain contains x."""
        i = bisect.bisect_right(self.xs, x) - 1
        if i < 0 or x > self.xs[-1]:
            raise PLMapError(f"{x} outside domain {self.domain}")
        return min(i, len(self.slopes) - 1)

    def __call__(self, x) -> Dyadic:
        x = _dy(x)
        i = self._piece(x)
        return self.ys[i] + (x - self.xs[i]) * self.slopes[i]

    def eval_fraction(self, x: Fraction) -> Fraction:
        """Exact evaluation at any rational in the domain."""
        xs = [b.to_fraction() for b in self.xs]
        if not xs[0] <= x <= xs[-1]:
            raise PLMapError(f"{x} outside domain {self.domain}")
        i = bisect.bisect_right(xs, x) - 1
        i = min(i, len(self.slopes) - 1)
        return self.ys[i].to_fraction() + (x - xs[i]) * self.slopes[i].to_fraction()

    def preimage(self, y) -> Dyadic:
        y = _dy(y)
        i = bisect.bisect_right(self.ys, y) - 1
        if i < 0 or y > self.ys[-1]:
            raise PLMapError(f"{y} outside range {self.range}")
        i = min(i, len(self.slopes) - 1)
        return self.xs[i] + (y - self.ys[i]).div_exact(self.slopes[i])

    def one_sided_slope(self, x, side: str) -> Dyadic:
        x = _dy(x)
        if side not in ("left", "right"):
            raise PLMapError("side must be 'left' or 'right'")
        if side == "left":
            if x <= self.xs[0] or x > self.xs[-1]:
                raise PLMapError(f"no piece left of {x}")
            i = bisect.bisect_left(self.xs, x) - 1
        else:
            if x < self.xs[0] or x >= self.xs[-1]:
                raise PLMapError(f"no piece right of {x}")
            i = bisect.bisect_right(self.xs, x) - 1
        return self.slopes[i]

    # -- algebra ---------------------------------------------------------

    def then(self, other: "PLMap") -> "PLMap":
        """Left-to-right composite: x -> other(self(x))."""
        if self.range != other.domain:
            raise PLMapError(
                f"composition mismatch: range {self.range} vs domain {other.domain}"
            )
        cuts = set(self.xs)
        for b in other.xs[1:-1]:
            cuts.add(self.preimage(b))
        xs = sorted(cuts)
        ys = [other(self(x)) for x in xs]
        return PLMap(xs, ys)

    def inverse(self) -> "PLMap":
        return PLMap(self.ys, self.xs)

    def restrict(self, sub: Interval) -> "PLMap":
        if not self.domain.contains_interval(sub):
            raise PLMapError(f"{sub} not inside domain {self.domain}")
        xs = [sub.lo]
        for x in self.xs:
            if sub.lo < x < sub.hi:
                xs.append(x)
        xs.append(sub.hi)
        return PLMap(xs, [self(x) for x in xs])

    def translate(self, d) -> "PLMap":
        d = _dy(d)
        return PLMap([x + d for x in self.xs], [y + d for y in self.ys])

    def point_reflect(self, c) -> "PLMap":
        """Conjugate by the reflection through c: x -> 2c - f(2c - x)."""
        c2 = _dy(c) * 2
        return PLMap(
            [c2 - x for x in reversed(self.xs)], [c2 - y for y in reversed(self.ys)]
        )

    def flipped(self, iv: Optional[Interval] = None) -> "PLMap":
        """Conjugate by the orientation-reversing isometry of iv.

        Requires domain == range == iv (default: the map's own domain).
        """
        if iv is None:
            iv = self.domain
        if self.domain != iv or self.range != iv:
            raise PLMapError("flip conjugation needs domain == range == interval")
        return self.point_reflect((iv.lo + iv.hi).half())

    def transported(self, target: Interval, reverse: bool = False) -> "PLMap":
        """Copy of the map carried to target by the unique isometry."""
        if target.length != self.domain.length:
            raise PLMapError(
                f"length mismatch: {target} vs domain {self.domain}"
            )
        moved = self.translate(target.lo - self.xs[0])
        if reverse:
            if self.domain != self.range:
                raise PLMapError("reversing transport needs domain == range")
            moved = moved.flipped(target)
        return moved

    def rescaled(self, target: Interval) -> "PLMap":
        """Affine orientation-preserving conjugate onto target.

        The scale factor must be dyadic; slopes are unchanged, so power-of-2
        certification survives arbitrary dyadic rescaling.
        """
        s = target.length.div_exact(self.domain.length)
        lo = self.xs[0]
        return PLMap(
            [target.lo + (x - lo) * s for x in self.xs],
            [target.lo + (y - lo) * s for y in self.ys],
        )

    @classmethod
    def concat(cls, maps: Iterable["PLMap"]) -> "PLMap":
        """Glue maps on consecutive intervals into one.

        Domains must abut and values must agree at the shared endpoints.
        """
        maps = list(maps)
        if not maps:
            raise PLMapError("nothing to concatenate")
        xs = list(maps[0].xs)
        ys = list(maps[0].ys)
        for f in maps[1:]:
            if f.xs[0] != xs[-1] or f.ys[0] != ys[-1]:
                raise PLMapError("pieces do not glue continuously")
            xs.extend(f.xs[1:])
            ys.extend(f.ys[1:])
        return cls(xs, ys)

    def extend_identity(self, iv: Interval) -> "PLMap":
        """Extend by the identity to the larger interval iv."""
        if not iv.contains_interval(self.domain):
            raise PLMapError(f"{iv} does not contain {self.domain}")
        parts = []
        if iv.lo < self.xs[0]:
            if self.ys[0] != self.xs[0]:
                raise PLMapError("left endpoint not fixed; cannot pad with identity")
            parts.append(PLMap.identity(Interval(iv.lo, self.xs[0])))
        parts.append(self)
        if self.xs[-1] < iv.hi:
            if self.ys[-1] != self.xs[-1]:
                raise PLMapError("right endpoint not fixed; cannot pad with identity")
            parts.append(PLMap.identity(Interval(self.xs[-1], iv.hi)))
        return PLMap.concat(parts)

    # -- support ------------------------------------------------------------

    def support_runs(self):
        """Maximal open intervals where f(x) != x, as exact Dyadic pairs.

        Does not require domain == range; the scan works on the displacement
        f(x) - x.  Raises NonDyadicBoundary when a transversal crossing of
        the diagonal happens at a non-dyadic point.
        """
        xs, ys, slopes = self.xs, self.ys, self.slopes
        runs = []
        start = None  # left end of the open run currently being scanned
        d0 = ys[0] - xs[0]
        if d0:
            start = xs[0]
        for i in range(len(slopes)):
            d1 = (ys[i + 1] - xs[i + 1])
            if not d0 and not d1:
                pass  # identity piece
            elif not d0:
                start = xs[i]
            elif not d1:
                runs.append((start, xs[i + 1]))
                start = None
            elif (d0.num > 0) != (d1.num > 0):
                # transversal crossing inside the piece
                z = Fraction(xs[i].to_fraction()) - d0.to_fraction() / (
                    slopes[i].to_fraction() - 1
                )
                try:
                    zd = Dyadic.from_fraction(z)
                except ValueError:
                    raise NonDyadicBoundary(
                        f"support boundary at non-dyadic point {z}", z
                    ) from None
                runs.append((start, zd))
                start = zd
            d0 = d1
        if start is not None:
            runs.append((start, xs[-1]))
        return runs

    def support_components(self):
        """Open components of {x : f(x) != x}; needs domain == range."""
        if self.domain != self.range:
            raise PLMapError("support needs domain == range")
        return [Interval(a, b) for a, b in self.support_runs()]

    def transition_points(self):
        """Support boundary points interior to the domain (all fixed points)."""
        pts = []
        for a, b in self.support_runs():
            for p in (a, b):
                if self.xs[0] < p < self.xs[-1] and (not pts or pts[-1] != p):
                    if p not in pts:
                        pts.append(p)
        return sorted(set(pts), key=lambda d: (d.to_fraction()))

    def moves_point(self):
        """Some x with f(x) != x, or None for the identity; exact."""
        for x, y in zip(self.xs, self.ys):
            if x != y:
                return x
        # canonical form: if all breakpoints are fixed, every piece has slope 1
        return None

    # -- serialization -----------------------------------------------------

    def to_pairs(self):
        return [[str(x), str(y)] for x, y in zip(self.xs, self.ys)]

    @classmethod
    def from_pairs(cls, pairs) -> "PLMap":
        return cls(
            [Dyadic.parse(p[0]) for p in pairs], [Dyadic.parse(p[1]) for p in pairs]
        )


def compose(f: PLMap, g: PLMap) -> PLMap:
    """x . (f g): apply f, then g."""
    return f.then(g)


def _pow2_pieces(length: Dyadic):
    """Binary expansion of a positive dyadic length into powers of two, descending."""
    out = []
    num, exp = length.num, length.exp
    while num:
        b = num.bit_length() - 1
        out.append(Dyadic(1, 0).mul_pow2(b - exp))
        num -= 1 << b
    return out


def interval_map(src: Interval, dst: Interval) -> PLMap:
    """Deterministic power-of-2-slope map src -> dst by binary subdivision.

    Both lengths are expanded into sums of distinct powers of two; the
    shorter piece list is refined by halving its last piece until the counts
    match, then pieces are paired in order.  Equal lengths give a single
    translation piece.
    """
    a = _pow2_pieces(src.length)
    b = _pow2_pieces(dst.length)
    while len(a) < len(b):
        a.append(a.pop().half())
        a.append(a[-1])
    while len(b) < len(a):
        b.append(b.pop().half())
        b.append(b[-1])
    xs, ys = [src.lo], [dst.lo]
    for da, db in zip(a, b):
        xs.append(xs[-1] + da)
        ys.append(ys[-1] + db)
    return PLMap(xs, ys)


def transporter(u, v, region: Interval) -> PLMap:
    """Power-of-2 map fixing region outside a compact interior part, u -> v."""
    u, v = _dy(u), _dy(v)
    if not (region.contains(u, strict=True) and region.contains(v, strict=True)):
        raise PLMapError("transporter endpoints must be interior to the region")
    if u == v:
        return PLMap.identity(region)
    lo = (region.lo + (u if u < v else v)).half()
    hi = ((u if u > v else v) + region.hi).half()
    left = interval_map(Interval(lo, u), Interval(lo, v))
    right = interval_map(Interval(u, hi), Interval(v, hi))
    core = PLMap.concat([left, right])
    return core.extend_identity(region)
