"""Thompson-style homeomorphism groups of the interval and of circles.

Provides the seed maps on [0,1] whose cell-by-cell copies generate the line
groups of this package, a check of the two defining relators of the
interval group, and exact rotation-number computation for the circle groups
of dyadic period p (piecewise-linear, power-of-2 slopes, dyadic 0-orbit).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dyadic import Dyadic, ZERO
from .plmap import Interval, PLMap, PLMapError, compose

__all__ = [
    "UNIT",
    "left_bump",
    "right_bump",
    "symmetric_bump",
    "interior_pair",
    "seed_triple",
    "thompson_f_pair",
    "check_f_presentation",
    "CircleMap",
    "circle_compose",
    "split_rotation",
    "RotationResult",
    "exact_translation_number",
]

UNIT = Interval(0, 1)


def _commutator(a: PLMap, b: PLMap) -> PLMap:
    return compose(compose(a.inverse(), b.inverse()), compose(a, b))


def _conj(a: PLMap, by: PLMap) -> PLMap:
    return compose(compose(by.inverse(), a), by)


def left_bump() -> PLMap:
    """Bump supported on (0, 1/4) that doubles on (0, 1/16) and moves points up.

    One fixed choice satisfying those constraints; the whole construction is
    anchored on it.
    """
    f = PLMap(
        [Dyadic(0), Dyadic(1, 4), Dyadic(1, 3), Dyadic(1, 2), Dyadic(1)],
        [Dyadic(0), Dyadic(1, 3), Dyadic(3, 4), Dyadic(1, 2), Dyadic(1)],
    )
    assert f.support_components() == [Interval(ZERO, Dyadic(1, 2))]
    assert f.one_sided_slope(ZERO, "right") == Dyadic(2)
    assert all(y > x for x, y in zip(f.xs[1:-2], f.ys[1:-2]))
    return f


def right_bump() -> PLMap:
    """Mirror image of left_bump, supported on (3/4, 1), moving points down."""
    return left_bump().flipped(UNIT)


def symmetric_bump() -> PLMap:
    """Product of the two bumps; commutes with the flip of [0, 1] exactly."""
    f = compose(left_bump(), right_bump())
    assert f.flipped(UNIT) == f
    return f


def thompson_f_pair():
    """The standard generating pair of the interval group on [0, 1]."""
    x0 = PLMap(
        [Dyadic(0), Dyadic(1, 2), Dyadic(1, 1), Dyadic(1)],
        [Dyadic(0), Dyadic(1, 1), Dyadic(3, 2), Dyadic(1)],
    )
    x1 = PLMap.concat(
        [PLMap.identity(Interval(0, Dyadic(1, 1))), x0.rescaled(Interval(Dyadic(1, 1), 1))]
    )
    return x0, x1


def interior_pair():
    """Two maps supported in (1/16, 15/16) generating the copy of the interval
    group carried by [1/16, 15/16].

    Built by conjugating the standard pair with a fixed dyadic power-of-2
    map [0,1] -> [1/16, 15/16].
    """
    psi = PLMap(
        [Dyadic(0), Dyadic(3, 2), Dyadic(1)],
        [Dyadic(1, 4), Dyadic(13, 4), Dyadic(15, 4)],
    )
    x0, x1 = thompson_f_pair()
    lo, hi = Dyadic(1, 4), Dyadic(15, 4)
    g2 = _conj(x0, psi).extend_identity(UNIT)
    g3 = _conj(x1, psi).extend_identity(UNIT)
    for g in (g2, g3):
        assert all(lo <= c.lo and c.hi <= hi for c in g.support_components())
    return g2, g3


def seed_triple():
    """(symmetric bump, interior generator, interior generator).

    Cell-by-cell copies of these three maps generate the line groups.
    """
    g2, g3 = interior_pair()
    return symmetric_bump(), g2, g3


def check_f_presentation(f: Optional[PLMap] = None, g: Optional[PLMap] = None) -> bool:
    """True iff both defining relators vanish on the given pair.

    Defaults to the standard pair, for which this certifies the finite
    presentation with relators [f g^-1, g^f] and [f g^-1, g^(f^2)].
    """
    if f is None or g is None:
        f, g = thompson_f_pair()
    u = compose(f, g.inverse())
    r1 = _commutator(u, _conj(g, f))
    r2 = _commutator(u, _conj(g, compose(f, f)))
    return r1.is_identity and r2.is_identity


# -- circle groups -----------------------------------------------------------


def _extend_lift(lift: PLMap, p: int, target: Interval) -> PLMap:
    """Equivariant extension of a lift (f(x+p) = f(x)+p) over target."""
    pd = Dyadic(p)
    k0 = (target.lo - lift.xs[0]).floor_div(p)
    pieces = []
    k = k0
    while True:
        shifted = lift.translate(pd * k)
        pieces.append(shifted)
        if shifted.xs[-1] >= target.hi:
            break
        k += 1
    xs = list(pieces[0].xs)
    ys = list(pieces[0].ys)
    for f in pieces[1:]:
        assert f.xs[0] == xs[-1] and f.ys[0] == ys[-1]
        xs.extend(f.xs[1:])
        ys.extend(f.ys[1:])
    return PLMap(xs, ys).restrict(target)


def _raw_compose_lifts(a: PLMap, b: PLMap, p: int) -> PLMap:
    """Lift of the composite (a then b) on the domain of a."""
    bx = _extend_lift(b, p, a.range)
    return compose(a, bx)


class CircleMap:
    """PL homeomorphism of the circle of circumference p, held as a lift.

    The lift has domain [0, p], power-of-2 slopes, dyadic image of 0, and is
    normalized so lift(0) lies in [0, p); equality is equality of normalized
    lifts.
    """

    __slots__ = ("lift", "period")

    def __init__(self, lift: PLMap, period: int, normalize: bool = True):
        if period < 1:
            raise PLMapError("period must be a positive integer")
        pd = Dyadic(period)
        if lift.xs[0] != ZERO or lift.xs[-1] != pd:
            raise PLMapError(f"lift domain must be [0, {period}]")
        if lift.ys[-1] - lift.ys[0] != pd:
            raise PLMapError("lift must displace the endpoints equally")
        if normalize:
            shift = lift.ys[0].floor_div(period)
            if shift:
                lift = PLMap(lift.xs, [y - pd * shift for y in lift.ys])
        self.lift = lift
        self.period = period

    @classmethod
    def rotation(cls, period: int, amount) -> "CircleMap":
        pd = Dyadic(period)
        a = amount if isinstance(amount, Dyadic) else Dyadic(amount)
        return cls(PLMap([ZERO, pd], [a, a + pd]), period)

    @classmethod
    def from_interval_map(cls, f: PLMap, period: int) -> "CircleMap":
        """Wrap a map [0,p] -> [0,p] fixing both endpoints."""
        return cls(f, period)

    @property
    def is_identity(self) -> bool:
        return self.lift.is_identity

    def __call__(self, x) -> Dyadic:
        """Evaluate on a representative; result reduced into [0, p)."""
        x = x if isinstance(x, Dyadic) else Dyadic(x)
        k = x.floor_div(self.period)
        y = self.lift(x - Dyadic(self.period) * k)
        return y - Dyadic(self.period) * y.floor_div(self.period)

    def __eq__(self, other):
        return (
            isinstance(other, CircleMap)
            and self.period == other.period
            and self.lift == other.lift
        )

    def __hash__(self):
        return hash((self.lift, self.period))

    def __repr__(self):
        return f"CircleMap(p={self.period}, lift={self.lift!r})"

    def then(self, other: "CircleMap") -> "CircleMap":
        if self.period != other.period:
            raise PLMapError("period mismatch")
        return CircleMap(
            _raw_compose_lifts(self.lift, other.lift, self.period), self.period
        )

    def inverse(self) -> "CircleMap":
        inv = self.lift.inverse()
        ext = _extend_lift(inv, self.period, Interval(0, self.period))
        return CircleMap(ext, self.period)

    def rotation_number(self, q_max: int = 64, n_fallback: int = 4096):
        """Exact rotation number in [0, p) or a certified interval."""
        res = exact_translation_number(self.lift, self.period, q_max, n_fallback)
        if res.exact is not None:
            v = res.exact % self.period
            return RotationResult(exact=v, interval=None, order=res.order)
        return res


def circle_compose(f: CircleMap, g: CircleMap) -> CircleMap:
    """Left-to-right composite of circle maps (apply f, then g)."""
    return f.then(g)


def split_rotation(t: CircleMap):
    """Factor t as the 0-fixing part followed by the rotation by t(0).

    Returns (s, f) with s the rotation by t(0), f fixing 0, and
    t(x) = f(x) + t(0); equivalently t = circle_compose(f, s).
    """
    a = t.lift(ZERO)
    s = CircleMap.rotation(t.period, a)
    f = CircleMap(PLMap(t.lift.xs, [y - a for y in t.lift.ys]), t.period)
    assert circle_compose(f, s) == t
    return s, f


@dataclass(frozen=True)
class RotationResult:
    """Exact rational rotation/translation number, or a certified interval."""

    exact: Optional[Fraction]
    interval: Optional[tuple]
    order: Optional[int]  # the q for which the q-th power has a fixed point

    @property
    def resolved(self) -> bool:
        return self.exact is not None


def _solve_lift_displacement(g: PLMap, target: Fraction) -> bool:
    """Does g(x) = x + target have a solution?  Exact, piece by piece."""
    t = target
    for i in range(len(g.slopes)):
        x0, x1 = g.xs[i].to_fraction(), g.xs[i + 1].to_fraction()
        y0 = g.ys[i].to_fraction()
        s = g.slopes[i].to_fraction()
        if s == 1:
            if y0 - x0 == t:
                return True
        else:
            x = (t + x0 * s - y0) / (s - 1)
            if x0 <= x <= x1:
                return True
    return False


def exact_translation_number(
    lift: PLMap, period: int, q_max: int = 64, n_fallback: int = 4096
) -> RotationResult:
    """Translation number of a lift, exact when some power admits x -> x + r*p.

    Searches q = 1..q_max; on success the value is r*p/q.  Otherwise returns
    the interval [(L^N(0))/N - p/N, (L^N(0))/N + p/N], which always contains
    the limit.
    """
    p = Fraction(period)
    power = lift
    for q in range(1, q_max + 1):
        disp = [y.to_fraction() - x.to_fraction() for x, y in zip(power.xs, power.ys)]
        lo, hi = min(disp), max(disp)
        r = -((-lo) // p)  # ceil(lo / p)
        while r * p <= hi:
            if _solve_lift_displacement(power, r * p):
                return RotationResult(Fraction(r * p, q), None, q)
            r += 1
        if q < q_max:
            power = _raw_compose_lifts(power, lift, period)
    x = ZERO
    for _ in range(n_fallback):
        k = x.floor_div(period)
        x = lift(x - Dyadic(period) * k) + Dyadic(period) * k
    centre = x.to_fraction() / n_fallback
    return RotationResult(None, (centre - p / n_fallback, centre + p / n_fallback), None)
