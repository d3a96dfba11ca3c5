import random

import pytest

from padic_asai.cyclo import DirichletChar
from padic_asai.measures import (
    Distribution,
    FiniteMeasure,
    admissibility_report,
    amice_transform,
    binomial_series,
    eval_at,
)
from padic_asai.padics import PadicElt, PrimeCtx, u_exponent, unit_one_part
from padic_asai.series import TruncSeries


@pytest.fixture
def c5():
    return PrimeCtx(5, precision=24)


def test_binomial_series_integer_exponent(c5):
    lam = PadicElt.from_int(c5, 3)
    s = binomial_series(lam, 8)
    assert [c.lift() for c in s.coeffs[:5]] == [1, 3, 3, 1, 0]


def test_amice_dirac_near_one(c5):
    # z = 1: lambda = 0, trivial-delta component is the constant 1
    mu = FiniteMeasure.from_ints(c5, [(1, 1)])
    d = amice_transform(mu, 0, 6)
    comp = d.component(0)
    assert comp.coeff(0).eq_prec(PadicElt.from_int(c5, 1))
    for c in comp.coeffs[1:]:
        assert c.is_zero or c.valuation() >= 10


def test_amice_dirac_11_lowest_coeffs(c5):
    # lambda_11 = 2 mod 5 at u=6: component congruent to (1+T)^2 mod 5
    ctx = PrimeCtx(5, precision=24, u=6)
    mu = FiniteMeasure.from_ints(ctx, [(11, 1)])
    d = amice_transform(mu, 0, 4)
    comp = d.component(0)
    expect = [1, 2, 1, 0, 0]
    for i, e in enumerate(expect):
        diff = comp.coeff(i) - PadicElt.from_int(ctx, e)
        assert diff.is_zero or diff.valuation() >= 1


def test_oracle_consistency_eval_vs_moment(c5):
    # eval_at(amice(mu, j), 0, theta) equals the exact moment, for wild and tame theta
    rng = random.Random(4)
    mu = FiniteMeasure.random(c5, rng, size=3, level=2)
    # integral binomial coefficients: tail beyond Dmax/phi(p) > N is invisible
    dmax = c5.N * 4 + 8
    for j in (0, 1, 2):
        d = amice_transform(mu, j, dmax)
        for theta in (DirichletChar(c5, 2, 0, 1), DirichletChar(c5, 2, 3, 2),
                      DirichletChar(c5, 1, 1, 0)):
            got = eval_at(d, 0, theta)
            want = mu.moment(j, theta)
            assert got.eq_prec(want)


def test_j_shift_symmetry(c5):
    rng = random.Random(9)
    mu = FiniteMeasure.random(c5, rng, size=2, level=2)
    theta = DirichletChar(c5, 2, 1, 1)
    dmax = c5.N * 4 + 8
    lhs = eval_at(amice_transform(mu, 1, dmax), 0, theta)
    rhs = eval_at(amice_transform(mu, 0, dmax), 1, theta)
    assert lhs.eq_prec(rhs)


def test_component_reprojection_identity(c5):
    rng = random.Random(13)
    mu = FiniteMeasure.random(c5, rng, size=3, level=2)
    d = amice_transform(mu, 0, 10)
    d2 = Distribution(c5, d.components, d.growth_w, d.provenance)
    for dpow in range(4):
        assert (d.component(dpow) - d2.component(dpow + 4)).is_zero


def test_admissibility_bounded(c5):
    coeffs = [PadicElt.from_int(c5, n + 1) for n in range(30)]
    d = Distribution(c5, {0: TruncSeries(c5, coeffs, 40)})
    rep = admissibility_report(d, 0.0)
    assert rep["h_inf"] >= 0
    assert not rep["violated"]


def test_admissibility_log_growth(c5):
    # c_n = p^(-floor(log_p n)) is 1-admissible
    import math
    coeffs = [PadicElt.from_int(c5, 1)]
    for n in range(1, 60):
        e = -int(math.floor(math.log(n, 5)))
        coeffs.append(PadicElt(c5, e, 1, c5.N))
    d = Distribution(c5, {0: TruncSeries(c5, coeffs, 80)})
    rep = admissibility_report(d, 1.0)
    assert rep["h_inf"] >= -1
    assert not rep["violated"]


def test_admissibility_violation(c5):
    coeffs = [PadicElt(c5, -n, 1, c5.N) for n in range(40)]
    d = Distribution(c5, {0: TruncSeries(c5, coeffs, 60)})
    rep = admissibility_report(d, 1.0)
    assert rep["violated"]


def test_unit_one_part_consistency(c5):
    # <z> = u^(u_exponent(z)) checked against low-level discrete logs
    from padic_asai.padics import log_u
    for z in (2, 3, 7, 11, 23):
        lam = u_exponent(c5, z)
        m1 = lam.lift() % 5
        assert m1 == log_u(c5, z, 2)
