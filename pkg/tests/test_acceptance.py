"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest -s tests/test_acceptance.py` to see the lines; every
tolerance is zero (exact equality) unless stated otherwise.
"""

import random
import time

from lineorder.atoms import (
    cellular_decomposition,
    periodic_stability,
    stability_constant,
)
from lineorder.dyadic import Dyadic, HALF
from lineorder.labelling import (
    LetterWord,
    PeriodicLabelling,
    RecursiveLabelling,
    axiom_report,
    periodic_approximation,
)
from lineorder.linegroup import (
    Gen,
    Translation,
    commuting_chain,
    embed_x,
    embed_z,
    free_pair,
    from_word,
    generator_cell_map,
    generators,
    is_trivial,
    special_element,
    transition_points_on,
    window_check,
)
from lineorder.markedspace import (
    convergence_table,
    quotient_circle,
    translation_multiple,
    translation_number,
)
from lineorder.plmap import Interval
from lineorder.thompson import (
    UNIT,
    check_f_presentation,
    circle_compose,
    left_bump,
    seed_triple,
    symmetric_bump,
)

QP = RecursiveLabelling()
AB = PeriodicLabelling(LetterWord.parse("a b"))
P2 = PeriodicLabelling(LetterWord.parse("a b a b'"))
P4 = PeriodicLabelling(LetterWord.parse("a b a b' a' b a' b'"))

TOKENS = [g.token for fam in ("z", "x") for g in (
    Gen(fam, 1), Gen(fam, 1, True), Gen(fam, 2), Gen(fam, 2, True),
    Gen(fam, 3), Gen(fam, 3, True),
)]


def report(n, text):
    print(f"[acceptance] criterion {n:2d}: PASS  {text}")


def random_word(rng, max_len, tokens=TOKENS):
    length = rng.randint(1, max_len)
    toks = []
    while len(toks) < length:
        t = rng.choice(tokens)
        if toks and (toks[-1] == t + "'" or t == toks[-1] + "'"):
            continue
        toks.append(t)
    return " ".join(toks)


def test_01_f_presentation_exact():
    t0 = time.monotonic()
    assert check_f_presentation()
    assert time.monotonic() - t0 < 1.0
    report(1, "both defining relators are exactly the identity map")


def test_02_symmetric_seed():
    nu1 = symmetric_bump()
    assert nu1.flipped(UNIT) == nu1
    report(2, "first seed commutes with the flip of [0,1], exact map equality")


def test_03_generator_cell_preservation():
    win = Interval(-8, 8)
    gens = generators(QP)
    for i in (1, 2, 3):
        g = gens[f"z{i}"].restrict_any(win)
        for n in range(-8, 8):
            cell = Interval(n, n + 1)
            seg = g.restrict(cell)
            assert seg.domain == cell and seg.range == cell
            assert seg == generator_cell_map(QP, Gen("z", i), cell)
    for i in (1, 2, 3):
        g = gens[f"x{i}"].restrict_any(win)
        for n in range(-7, 8):
            cell = Interval(Dyadic(2 * n - 1, 1), Dyadic(2 * n + 1, 1))
            seg = g.restrict(cell)
            assert seg.domain == cell and seg.range == cell
            assert seg == generator_cell_map(QP, Gen("x", i), cell)
        # the window cuts the two boundary half-cells; they still agree
        # with the straddling cell maps, restricted
        left = g.restrict(Interval(-8, Dyadic(-15, 1)))
        full = generator_cell_map(
            QP, Gen("x", i), Interval(Dyadic(-17, 1), Dyadic(-15, 1))
        )
        assert left == full.restrict(Interval(-8, Dyadic(-15, 1)))
    report(3, "all six generators are block-diagonal over their cells on [-8, 8]")


def test_04_periodic_approximation_factor_sets():
    t0 = time.monotonic()
    for k in (2, 4, 8, 16):
        approx = periodic_approximation(QP, k)
        for j in range(1, k + 1):
            assert approx.factors(j).keys() == QP.factors(j).keys(), (k, j)
    elapsed = time.monotonic() - t0
    assert elapsed < 10.0
    report(4, f"approximations match all factor sets up to k=16 in {elapsed:.2f}s")


def test_05_convergence_table():
    t0 = time.monotonic()
    rows = convergence_table(QP, 4)
    elapsed = time.monotonic() - t0
    for r in rows:
        assert r.passed and r.nu_lower_bound >= r.n, (r.n, r.witness)
    assert elapsed < 600.0
    report(
        5,
        "marked groups of the approximations agree to depth n for n=1..4 "
        f"({elapsed:.0f}s, periods {[r.period_letters for r in rows]} letters)",
    )


def test_06_freeness_certificate():
    t0 = time.monotonic()
    fz, fx = free_pair(QP)
    letters = [fz, fz.inverse(), fx, fx.inverse()]
    seqs = [[i] for i in range(4)]
    count = 0
    for length in range(1, 9):
        for s in seqs:
            h = letters[s[0]]
            for j in s[1:]:
                h = h.then(letters[j])
            assert not is_trivial(h).trivial, s
            count += 1
        if length < 8:
            seqs = [s + [j] for s in seqs for j in range(4) if j != s[-1] ^ 1]
    elapsed = time.monotonic() - t0
    assert count == sum(4 * 3 ** (L - 1) for L in range(1, 9)) == 13120
    assert elapsed < 300.0
    report(6, f"all 13120 reduced words of length <= 8 act nontrivially ({elapsed:.0f}s)")


def test_07_circle_quotient():
    rng = random.Random(1007)
    p = 1
    words = [from_word(AB, random_word(rng, 6)) for _ in range(200)]
    # homomorphism on 50 pairs
    for _ in range(50):
        a, b = rng.choice(words), rng.choice(words)
        assert quotient_circle(AB, a.then(b)) == circle_compose(
            quotient_circle(AB, a), quotient_circle(AB, b)
        )
    # equivariance on [0, 3p], exact
    for w in words:
        g = w.restrict_any(Interval(0, 3 * p))
        base = g.restrict(Interval(0, p))
        assert g.restrict(Interval(p, 2 * p)) == base.translate(p)
        assert g.restrict(Interval(2 * p, 3 * p)) == base.translate(2 * p)
    # identity image forces an exact period translation
    kernel_hits = 0
    for w in words + [Translation(AB, Dyadic(2)), Translation(AB, Dyadic(-1))]:
        if quotient_circle(AB, w).is_identity:
            kernel_hits += 1
            assert translation_multiple(AB, w, Interval(0, 3)) is not None
    assert kernel_hits >= 2
    report(7, f"quotient is a homomorphism; {kernel_hits} kernel elements were period translations")


def _resolve(lab, h):
    res = translation_number(lab, h)
    if res.exact is None:
        res = translation_number(lab, h, q_max=512)
    return res


def test_08_rotation_numbers():
    rng = random.Random(1008)
    samples = []
    for lab, p in ((AB, 1), (P2, 2)):
        for _ in range(25):
            d = Dyadic(rng.randrange(-2 ** 5 + 1, 2 ** 5), 4)
            h = Translation(lab, d).then(from_word(lab, random_word(rng, 4)))
            samples.append((lab, p, h))
    values = []
    orders = []
    for lab, p, h in samples:
        res = _resolve(lab, h)
        assert res.exact is not None, "sample did not resolve"
        values.append((lab, p, h, res.exact))
        orders.append(res.order)
        sq = _resolve(lab, h.then(h))
        assert sq.exact == 2 * res.exact
    pairs = 0
    by_lab = {1: [v for v in values if v[1] == 1], 2: [v for v in values if v[1] == 2]}
    while pairs < 100:
        p = rng.choice((1, 2))
        la, pa, ha, va = rng.choice(by_lab[p])
        lb, pb, hb, vb = rng.choice(by_lab[p])
        res = _resolve(la, ha.then(hb))
        if res.exact is not None:
            assert abs(res.exact - va - vb) <= p
        else:
            lo, hi = res.interval  # certified enclosure of the limit
            assert hi - va - vb <= p and va + vb - lo <= p
        pairs += 1
    report(
        8,
        f"50 seeded samples: exact rationals (max power {max(orders)}), "
        "homogeneity, defect <= p on 100 pairs",
    )


def _seeded_stable_elements(rng, lab, count):
    safe = ["z2", "z3", "z2'", "z3'"]
    pattern = seed_triple()[1]
    bump = left_bump().rescaled(Interval(Dyadic(1, 2), HALF)).extend_identity(UNIT)
    out = []
    while len(out) < count:
        kind = rng.randrange(4)
        if kind == 0:
            h = from_word(lab, random_word(rng, 4, safe))
        elif kind == 1:
            h = embed_z(lab, rng.choice((pattern, bump)))
        elif kind == 2:
            width = rng.choice((1, 2))
            h = special_element(lab, Interval(0, width), rng.choice((2, 3)), pattern)
        else:
            w = from_word(lab, random_word(rng, 2, safe))
            h = w.then(special_element(lab, Interval(0, 1), 2, pattern))
        rep = periodic_stability(lab, h)
        if rep.stable and not is_trivial(h).trivial:
            out.append(h)
    return out


def test_09_cellular_decomposition():
    rng = random.Random(1009)
    lab = P4
    p = 4
    elements = _seeded_stable_elements(rng, lab, 50)
    for h in elements:
        g = h.restrict_any(Interval(-1, p + 1))
        c0 = next(
            m for m in range(0, p)
            if not _active(g, m)
        )
        win = Interval(c0, c0 + p)
        fz = stability_constant(h, h.context_radius, win)
        pieces = cellular_decomposition(h, fz, win)
        total = None
        for _, piece in pieces:
            total = piece if total is None else total.then(piece)
        assert total.restrict_any(win) == h.restrict_any(win)
        for i, (_, p1) in enumerate(pieces):
            for _, p2 in pieces[i + 1 :]:
                assert p1.then(p2).restrict_any(win) == p2.then(p1).restrict_any(win)
        for _, piece in pieces:
            assert window_check(piece, fz, Interval(c0 - p, c0 + 2 * p)).ok
    report(9, "50 seeded stable elements: pieces recompose, commute, and pass the window check")


def _active(g, m):
    from lineorder.atoms import _fixes_neighbourhood

    return not _fixes_neighbourhood(g, Dyadic(m))


def test_10_special_element():
    pattern = seed_triple()[1]
    el = special_element(QP, Interval(0, 1), 2, pattern)
    ctx = QP.word_on(Interval(0, 1), 2)
    for j in range(-32, 32):
        word = QP.word_on(Interval(j, j + 1), 2)
        for off in (Dyadic(1, 2), Dyadic(3, 3), Dyadic(13, 4)):
            x = Dyadic(j) + off
            if word == ctx:
                expected = pattern.rescaled(Interval(j, j + 1))(x)
            elif word == ctx.inverse():
                expected = pattern.rescaled(Interval(j, j + 1)).flipped()(x)
            else:
                expected = x
            assert el.image(x) == expected
    k_g = 2 * len(ctx)
    assert k_g == 14
    assert window_check(el, k_g, Interval(-32, 32)).ok
    report(10, "pattern element matches the three clauses on [-32, 32], window check at k=14")


def _seeded_embedded_pair(rng, lab):
    grid = rng.choice((3, 4))
    start = Dyadic(rng.randrange(1, 2 ** grid - 2), grid)
    bump_z = left_bump().rescaled(
        Interval(start, start + Dyadic(1, grid))
    ).extend_identity(UNIT)
    grid2 = rng.choice((3, 4))
    start2 = Dyadic(rng.randrange(1, 2 ** grid2 - 2), grid2)
    bump_x = left_bump().rescaled(
        Interval(start2, start2 + Dyadic(1, grid2))
    ).extend_identity(UNIT)
    return embed_z(lab, bump_z), embed_x(lab, bump_x)


def test_11_commuting_chains():
    rng = random.Random(1011)
    for _ in range(20):
        f, g = _seeded_embedded_pair(rng, QP)
        h1, h2, cert = commuting_chain(QP, f, g)
        assert all(cert.commutators_trivial)
        assert cert.supports_disjoint
        assert is_trivial(f.commutator(h1)).trivial
        assert is_trivial(h1.commutator(h2)).trivial
        assert is_trivial(h2.commutator(g)).trivial
    report(11, "20 seeded chains: three exactly-trivial commutators each, supports disjoint")


def test_12_transition_points_fixed_by_commuting():
    rng = random.Random(1012)
    win = Interval(-16, 16)
    pairs = []
    for _ in range(7):
        f, g = _seeded_embedded_pair(rng, QP)
        h1, h2, _ = commuting_chain(QP, f, g)
        pairs.extend([(f, h1), (h1, h2), (h2, g)])
    pairs = pairs[:20]
    assert len(pairs) == 20
    for h, g in pairs:
        pts = transition_points_on(h, win)
        assert pts, "expected transition points in the window"
        for p in pts:
            assert g.image(p) == p
    report(12, "20 commuting pairs: every transition point in [-16, 16] is fixed, exactly")


def test_13_quasi_periodicity_axioms():
    t0 = time.monotonic()
    entries = axiom_report(QP, 8)
    elapsed = time.monotonic() - t0
    assert entries
    for e in entries:
        assert e.recurrence_bound >= len(e.word)
        assert e.inverse_occurs, f"no inverse occurrence for {e.word}"
    assert elapsed < 30.0
    bound = max(e.recurrence_bound for e in entries)
    report(13, f"{len(entries)} factors of length <= 8: finite recurrence (max bound {bound}), inverses occur ({elapsed:.1f}s)")


def test_14_periodic_block_inequalities():
    rng = random.Random(1014)
    for lab in (AB, P2):
        P = lab.period_letters
        p = P // 2
        for _ in range(100):
            size = 2 * P + rng.randrange(0, 2 * P)
            t0 = rng.randrange(-4 * P, 4 * P)
            k = rng.randrange(1, 8)  # integer shift, in real units
            x = lab.codes_between(t0, t0 + size)
            y = lab.codes_between(t0 + 2 * k, t0 + size + 2 * k)
            if k % p:
                assert x != y
            assert bytes(c ^ 1 for c in reversed(y)) != x
    report(14, "shifted-block inequalities hold for 100 seeded pairs over two periodic labellings")
