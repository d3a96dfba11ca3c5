import math
import random

import pytest
from fractions import Fraction

from padic_asai.padics import (
    PadicElt,
    PrecisionError,
    PrimeCtx,
    QuadElt,
    ValidationError,
    hensel_roots,
    log_u,
    padic_log_1unit,
    teichmuller,
    u_exponent,
    unit_one_part,
)


@pytest.fixture(params=[3, 5, 7])
def ctx(request):
    return PrimeCtx(request.param, precision=20)


def test_int_roundtrip(ctx):
    x = PadicElt.from_int(ctx, 2 + 3 * ctx.p**2)
    assert x.valuation() == 0
    assert x.lift() % ctx.p == 2


def test_add_simple():
    ctx = PrimeCtx(5, precision=12)
    x = PadicElt.from_int(ctx, 2) + PadicElt.from_int(ctx, 3)
    assert x.valuation() == 1
    assert x.eq_prec(PadicElt.from_int(ctx, 5))


def test_inv_of_two_mod_5():
    ctx = PrimeCtx(5, precision=8)
    inv2 = PadicElt.from_int(ctx, 2).inv()
    # extended-Euclid oracle: 2 * inv(2) = 1 mod 5^8
    assert (2 * inv2.lift()) % 5**8 == 1
    assert inv2.digits()[:3] == [3, 2, 2]


def test_mul_inv_random_units(ctx):
    rng = random.Random(7)
    one = PadicElt.from_int(ctx, 1)
    for _ in range(25):
        n = rng.randrange(1, ctx.p**6)
        if n % ctx.p == 0:
            continue
        x = PadicElt.from_int(ctx, n)
        assert (x * x.inv()).eq_prec(one)


def test_valuation_additive(ctx):
    rng = random.Random(1)
    for _ in range(40):
        a = rng.randrange(1, ctx.p**5)
        b = rng.randrange(1, ctx.p**5)
        x, y = PadicElt.from_int(ctx, a), PadicElt.from_int(ctx, b)
        assert (x * y).valuation() == x.valuation() + y.valuation()


def test_ultrametric(ctx):
    rng = random.Random(2)
    for _ in range(40):
        a = rng.randrange(1, ctx.p**5)
        b = rng.randrange(1, ctx.p**5)
        x, y = PadicElt.from_int(ctx, a), PadicElt.from_int(ctx, b)
        s = x + y
        if s.is_zero:
            continue
        assert s.valuation() >= min(x.valuation(), y.valuation())


def test_tracked_zero_from_cancellation():
    ctx = PrimeCtx(3, precision=6)
    x = PadicElt.from_int(ctx, 7)
    z = x - x
    assert z.is_zero
    assert z.abs_prec == 6


def test_precision_propagates_through_scales():
    ctx = PrimeCtx(5, precision=10)
    x = PadicElt.from_int(ctx, 5).inv()      # 1/5, scale -1
    y = x + PadicElt.from_int(ctx, 1)
    # absolute precision limited by x: known mod 5^9
    assert y.abs_prec == 9


def test_inv_tracked_zero_raises():
    ctx = PrimeCtx(3, precision=5)
    with pytest.raises(PrecisionError):
        PadicElt.zero(ctx).inv()


def test_rational_constructor():
    ctx = PrimeCtx(7, precision=9)
    x = PadicElt.from_rational(ctx, Fraction(3, 14))
    assert x.valuation() == -1
    assert (x * PadicElt.from_int(ctx, 14)).eq_prec(PadicElt.from_int(ctx, 3))


def test_serialization_roundtrip(ctx):
    rng = random.Random(3)
    for _ in range(10):
        n = rng.randrange(1, ctx.p**6)
        x = PadicElt.from_int(ctx, n) * PadicElt(ctx, -2, 1, ctx.N)
        y = PadicElt.from_string(ctx, x.to_string())
        assert y.eq_prec(x)
    z = PadicElt.zero(ctx, 4)
    assert PadicElt.from_string(ctx, z.to_string()).is_zero


# -- Teichmueller / log_u ----------------------------------------------------

def test_teichmuller_examples():
    c5 = PrimeCtx(5, precision=8)
    assert teichmuller(c5, 11, 2) % 25 == 1      # 11^5 = 1 mod 25
    assert teichmuller(c5, 1, 3) == 1
    c3 = PrimeCtx(3, precision=8)
    assert teichmuller(c3, 2, 2) % 9 == 8        # 2^3 = 8, 8^3 = 8 mod 9


def test_teichmuller_is_root_of_unity(ctx):
    for r in (1, 2, 3):
        pr = ctx.p**r
        for t in range(1, min(ctx.p**2, 30)):
            if t % ctx.p == 0:
                continue
            e = teichmuller(ctx, t, r)
            assert pow(e, ctx.p - 1, pr) == 1
            assert e % ctx.p == t % ctx.p


def test_log_u_examples():
    c5 = PrimeCtx(5, precision=8, u=6)
    assert log_u(c5, 11, 2) == 2                 # 6^2 = 36 = 11 mod 25
    assert log_u(c5, 1, 3) == 0
    c3 = PrimeCtx(3, precision=8, u=4)
    assert log_u(c3, 7, 2) == 2                  # 4^2 = 16 = 7 mod 9


@pytest.mark.parametrize("p,r", [(3, 3), (5, 2), (7, 2)])
def test_unit_decomposition_exhaustive(p, r):
    # t = teich(t) * u^log_u(t) mod p^r for every unit
    ctx = PrimeCtx(p, precision=10)
    pr = p**r
    for t in range(1, pr):
        if t % p == 0:
            continue
        m = log_u(ctx, t, r)
        assert 0 <= m < p ** (r - 1)
        assert (teichmuller(ctx, t, r) * pow(ctx.u, m, pr)) % pr == t


def test_padic_log_and_u_exponent():
    ctx = PrimeCtx(5, precision=14)
    lam = u_exponent(ctx, 11)
    # <11> = u^lam must hold mod every p^r in range: lam mod 5 equals log_u at level 2
    assert lam.lift() % 5 == log_u(ctx, 11, 2)
    assert lam.lift() % 25 == log_u(ctx, 11, 3)
    # log(u^2) = 2 log(u)
    lu = padic_log_1unit(PadicElt.from_int(ctx, ctx.u))
    lu2 = padic_log_1unit(PadicElt.from_int(ctx, pow(ctx.u, 2, 5**14)))
    assert lu2.eq_prec(2 * lu)


def test_unit_one_part(ctx):
    z = 2 * ctx.p + 1 + ctx.p  # some unit
    if z % ctx.p == 0:
        z += 1
    op = unit_one_part(ctx, z)
    assert (op - 1).valuation_floor() >= 1


# -- hensel_roots ------------------------------------------------------------

def test_hensel_rational_split():
    ctx = PrimeCtx(5, precision=12)
    a = PadicElt.from_int(ctx, 6)
    c = PadicElt.from_int(ctx, 5)
    alpha, beta, ext = hensel_roots(a, c)
    assert ext is None
    assert alpha.eq_prec(PadicElt.from_int(ctx, 1))
    assert beta.eq_prec(PadicElt.from_int(ctx, 5))


def test_hensel_distinct_slopes():
    ctx = PrimeCtx(5, precision=12)
    a = PadicElt.from_int(ctx, 10)
    c = PadicElt.from_int(ctx, 125)
    alpha, beta, ext = hensel_roots(a, c)
    assert ext is None
    assert {alpha.valuation(), beta.valuation()} == {1, 2}
    assert (alpha + beta).eq_prec(a)
    assert (alpha * beta).eq_prec(c)


def test_hensel_equal_slopes_irreducible():
    ctx = PrimeCtx(3, precision=12)
    a = PadicElt.from_int(ctx, 3)
    c = PadicElt.from_int(ctx, 9)
    alpha, beta, ext = hensel_roots(a, c)
    assert ext is not None
    assert alpha.valuation() == Fraction(1, 1)
    assert beta.valuation() == Fraction(1, 1)
    assert (alpha + beta).eq_prec(ext.embed(a))
    assert (alpha * beta).eq_prec(ext.embed(c))


def test_hensel_equal_slope_square_disc_splits():
    # X^2 - 2X - 3 = (X-3)(X+1): equal-valuation units, disc = 16 is square
    ctx = PrimeCtx(5, precision=12)
    a = PadicElt.from_int(ctx, 2)
    c = PadicElt.from_int(ctx, -3)
    alpha, beta, ext = hensel_roots(a, c)
    assert ext is None
    lifts = {alpha.lift() % 5, beta.lift() % 5}
    assert lifts == {3, 4}


def test_hensel_repeated_root_rejected():
    ctx = PrimeCtx(5, precision=12)
    a = PadicElt.from_int(ctx, 2)
    c = PadicElt.from_int(ctx, 1)
    with pytest.raises(ValidationError):
        hensel_roots(a, c)


def test_quad_arithmetic():
    ctx = PrimeCtx(3, precision=12)
    a = PadicElt.from_int(ctx, 3)
    c = PadicElt.from_int(ctx, 9)
    _, _, ext = hensel_roots(a, c)
    x = ext.gen()
    one = ext.embed(PadicElt.from_int(ctx, 1))
    y = x * x - ext.embed(a) * x + ext.embed(c)
    assert y.is_zero
    inv = x.inv()
    assert (x * inv).eq_prec(one)
    assert x.valuation() == Fraction(1, 1)
    assert (x * x).valuation() == Fraction(2, 1)
