"""Cyclotomic-integer substrate: contexts, ring ops, norms, valuations."""

import math
import random

import pytest

from cycsynth import cyclotomic_poly, divides, exact_quotient, make_context
from oracles import divides_oracle, naive_cyclotomic, poly_eval, random_cycint

SUPPORTED = (2, 4, 6, 8, 12)


# -- contexts -------------------------------------------------------------------


def test_context_small_powers_of_two():
    ctx2 = make_context(2)
    assert ctx2.degree == 2 and list(ctx2.phi_poly) == [1, 0, 1]
    ctx4 = make_context(4)
    assert ctx4.degree == 4 and list(ctx4.phi_poly) == [1, 0, 0, 0, 1]


def test_context_n12_constants():
    ctx = make_context(12)
    assert ctx.degree == 8
    assert list(ctx.phi_poly) == [1, 0, 0, 0, -1, 0, 0, 0, 1]
    assert (ctx.k, ctx.s, ctx.f) == (2, 3, 2)
    assert naive_cyclotomic(24) == list(ctx.phi_poly)


@pytest.mark.parametrize("bad", [0, -2, 3, 7, 1])
def test_context_rejects_bad_n(bad):
    with pytest.raises(ValueError):
        make_context(bad)


def test_unique_prime_degree_identity():
    for n in SUPPORTED:
        ctx = make_context(n)
        assert ctx.ram_index * ctx.f == ctx.degree


# -- ring operations --------------------------------------------------------------


def test_mul_reduces_by_cyclotomic_relation():
    ctx = make_context(2)
    z = ctx.zeta()
    assert (z * z) == ctx.from_int(-1)
    ctx12 = make_context(12)
    z4 = ctx12.zeta(4)
    assert z4 * z4 == ctx12.zeta(4) - ctx12.one()  # zeta^8 = zeta^4 - 1


def test_additive_inverse_and_int_scaling():
    ctx = make_context(8)
    rng = random.Random(1)
    for _ in range(50):
        x = random_cycint(ctx, rng)
        assert (x + (-x)).is_zero()
        assert x * 3 == x + x + x


def test_mixed_context_rejected():
    a = make_context(4).one()
    b = make_context(8).one()
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        a * b


def test_times_zeta_matches_mul():
    rng = random.Random(2)
    for n in (6, 12, 16):
        ctx = make_context(n)
        for _ in range(30):
            x = random_cycint(ctx, rng)
            k = rng.randrange(ctx.order)
            assert x.times_zeta(k) == x * ctx.zeta(k)


# -- Galois action ------------------------------------------------------------------


def test_galois_examples():
    ctx = make_context(4)
    z = ctx.zeta()
    assert z.galois(ctx.order - 1) == ctx.zeta(-1)
    assert ctx.from_int(5).galois(3) == ctx.from_int(5)
    assert (ctx.one() + z).galois(3) == ctx.one() + ctx.zeta(3)
    with pytest.raises(ValueError):
        z.galois(2)


def test_conjugation_is_ring_involution():
    rng = random.Random(3)
    for n in (4, 12):
        ctx = make_context(n)
        for _ in range(40):
            x, y = random_cycint(ctx, rng), random_cycint(ctx, rng)
            assert x.conj().conj() == x
            assert (x * y).conj() == x.conj() * y.conj()
            assert (x + y).conj() == x.conj() + y.conj()


# -- norms ----------------------------------------------------------------------------


def test_norm_examples():
    ctx2 = make_context(2)
    assert ctx2.one().norm() == 1
    assert (ctx2.one() + ctx2.zeta()).norm() == 2  # 1 + i
    ctx4 = make_context(4)
    assert ctx4.from_int(2).norm() == 16
    for a in range(ctx4.order):
        assert ctx4.zeta(a).norm() == 1


def test_norm_multiplicative():
    rng = random.Random(4)
    for n in SUPPORTED:
        ctx = make_context(n)
        for _ in range(60):
            x, y = random_cycint(ctx, rng, 6), random_cycint(ctx, rng, 6)
            assert (x * y).norm() == x.norm() * y.norm()


# -- divisibility ------------------------------------------------------------------------


def test_divides_gaussian_examples():
    ctx = make_context(2)
    one_plus_i = ctx.one() + ctx.zeta()
    two = ctx.from_int(2)
    assert divides(one_plus_i, two)
    assert not divides(two, one_plus_i)
    assert divides(one_plus_i, ctx.zero())
    assert exact_quotient(two, one_plus_i) == ctx.one() - ctx.zeta()  # 2/(1+i) = 1-i
    with pytest.raises(ValueError):
        divides(ctx.zero(), two)
    with pytest.raises(ValueError):
        exact_quotient(one_plus_i, two)


def test_divides_agrees_with_linear_solve_oracle():
    rng = random.Random(5)
    for n in SUPPORTED:
        ctx = make_context(n)
        checked = 0
        while checked < 150:
            y = random_cycint(ctx, rng, 4)
            if y.is_zero():
                continue
            # mix plain pairs with guaranteed multiples so both answers occur
            if checked % 3 == 0:
                x = y * random_cycint(ctx, rng, 4)
            else:
                x = random_cycint(ctx, rng, 9)
            assert divides(y, x) == divides_oracle(y, x)
            checked += 1


def test_is_coprime_to_two():
    ctx = make_context(2)
    assert ctx.zeta(3).is_coprime_to_two()
    assert not (ctx.one() + ctx.zeta()).is_coprime_to_two()
    assert ctx.from_int(3).is_coprime_to_two()
    with pytest.raises(ValueError):
        ctx.zero().is_coprime_to_two()


# -- mod 2 ------------------------------------------------------------------------------


def test_mod2_examples_and_laws():
    ctx = make_context(4)
    x = ctx.from_int(3) + ctx.zeta() * 2
    assert x.mod2() == ctx.one()
    rng = random.Random(6)
    for _ in range(60):
        a, b = random_cycint(ctx, rng), random_cycint(ctx, rng)
        assert (a + b * 2).mod2() == a.mod2()
        assert (a * b).mod2() == (a.mod2() * b.mod2()).mod2()
        assert a.conj().mod2() == a.mod2().conj().mod2()


# -- valuations ---------------------------------------------------------------------------


def test_valuation_examples():
    ctx2 = make_context(2)
    one_plus_i = ctx2.one() + ctx2.zeta()
    assert ctx2.one().valuation() == 0
    assert one_plus_i.valuation() == 1
    assert ctx2.from_int(2).valuation() == 2
    assert ctx2.zero().valuation() == math.inf
    ctx12 = make_context(12)
    assert ctx12.from_int(2).valuation() == 4
    assert (ctx12.one() + ctx12.zeta(6)).valuation() == 2


def test_valuation_cross_checked_by_iterated_division():
    # v(2) = number of times 1+i divides 2, in the Gaussian integers
    ctx = make_context(2)
    one_plus_i = ctx.one() + ctx.zeta()
    x = ctx.from_int(2)
    count = 0
    while divides(one_plus_i, x) and not x.is_zero():
        x = exact_quotient(x, one_plus_i)
        count += 1
    assert count == ctx.from_int(2).valuation() == ctx.ram_index


def test_valuation_additive_on_products():
    rng = random.Random(7)
    for n in SUPPORTED:
        ctx = make_context(n)
        for _ in range(40):
            x, y = random_cycint(ctx, rng, 5), random_cycint(ctx, rng, 5)
            if x.is_zero() or y.is_zero():
                continue
            assert (x * y).valuation() == x.valuation() + y.valuation()


def test_valuation_mod2_min_law():
    rng = random.Random(8)
    for n in SUPPORTED:
        ctx = make_context(n)
        v2 = ctx.from_int(2).valuation()
        for _ in range(60):
            x = random_cycint(ctx, rng)
            if x.is_zero():
                continue
            assert min(x.valuation(), v2) == min(x.mod2().valuation(), v2)


def test_valuation_rejects_unsupported_n():
    with pytest.raises(ValueError):
        make_context(10).one().valuation()
    with pytest.raises(ValueError):
        make_context(16).one().valuation()


# -- cyclotomic polynomials -------------------------------------------------------------------


def test_cyclotomic_small():
    assert cyclotomic_poly(1) == [-1, 1]
    assert cyclotomic_poly(2) == [1, 1]
    assert cyclotomic_poly(6) == [1, -1, 1]
    assert poly_eval(cyclotomic_poly(4), -1) == 2
    assert poly_eval(cyclotomic_poly(6), -1) == 3


def test_cyclotomic_matches_naive_oracle():
    for m in list(range(1, 130)) + [105, 210, 255, 384]:
        assert cyclotomic_poly(m) == naive_cyclotomic(m)


def test_cyclotomic_degree_and_height_sentinels():
    # phi(105) = 48 and the first coefficient of magnitude 2 appears at m=105
    p105 = cyclotomic_poly(105)
    assert len(p105) - 1 == 48
    assert min(p105) == -2


def test_cyclotomic_rejects_nonpositive():
    with pytest.raises(ValueError):
        cyclotomic_poly(0)


# -- representation ------------------------------------------------------------------------------


def test_from_coeffs_validation():
    ctx = make_context(4)
    with pytest.raises(ValueError):
        ctx.from_coeffs([1, 2, 3])
    with pytest.raises(ValueError):
        ctx.from_coeffs([1, 2, 3, 4.5])
    assert ctx.from_coeffs([1, 2, 3, 4]).coeffs == (1, 2, 3, 4)
