"""Property tests over randomly generated group elements and maps."""

from hypothesis import given, settings, strategies as st

from lineorder.dyadic import Dyadic
from lineorder.labelling import RecursiveLabelling
from lineorder.plmap import Interval, PLMap, compose, interval_map
from lineorder.thompson import left_bump, symmetric_bump, thompson_f_pair

X0, X1 = thompson_f_pair()
BASIS = [
    X0,
    X1,
    left_bump(),
    symmetric_bump(),
    X0.inverse(),
    X1.inverse(),
    left_bump().inverse(),
]

unit_maps = st.lists(
    st.integers(0, len(BASIS) - 1), min_size=1, max_size=4
).map(lambda idx: _product(idx))


def _product(idx):
    f = BASIS[idx[0]]
    for i in idx[1:]:
        f = f.then(BASIS[i])
    return f


@given(unit_maps, unit_maps, unit_maps)
def test_composition_associative(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@given(unit_maps)
def test_inverse_round_trip(f):
    assert compose(f, f.inverse()).is_identity
    assert compose(f.inverse(), f).is_identity
    assert f.inverse().inverse() == f


@given(unit_maps)
def test_identity_neutral(f):
    e = PLMap.identity(f.domain)
    assert compose(e, f) == f
    assert compose(f, e) == f


@given(unit_maps)
def test_power2_closed_under_composition(f):
    assert f.power2_certified


@given(unit_maps)
def test_transition_points_are_fixed(f):
    from lineorder.plmap import NonDyadicBoundary

    try:
        pts = f.transition_points()
    except NonDyadicBoundary as e:
        # the boundary point is still an exact fixed point of the map
        assert f.eval_fraction(e.point) == e.point
        return
    for p in pts:
        assert f(p) == p


@given(unit_maps)
def test_flip_conjugation_involutive(f):
    assert f.flipped().flipped() == f


dyadic_lengths = st.integers(1, 200).map(lambda n: Dyadic(n, 6))


@given(dyadic_lengths, dyadic_lengths)
@settings(max_examples=40)
def test_interval_map_endpoints_and_slopes(a, b):
    src = Interval(Dyadic(0), a)
    dst = Interval(Dyadic(1), 1 + b)
    f = interval_map(src, dst)
    assert f.domain == src and f.range == dst
    assert f.power2_certified


@given(st.integers(1, 40), st.integers(-300, 300))
@settings(max_examples=30)
def test_factor_witnesses_reproduce(k, shift):
    lab = RecursiveLabelling()
    facs = lab.factors(min(k, 12))
    for w, pos in list(facs.items())[:10]:
        assert lab.codes_between(pos, pos + len(w) - 1) == w
