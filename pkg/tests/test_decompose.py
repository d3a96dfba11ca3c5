import random

import pytest
from fractions import Fraction

from padic_asai.cyclo import DirichletChar
from padic_asai.decompose import (
    SplitEigenData,
    build_Qtilde,
    decompose,
    interpolation_consistency,
    stabilization_diagnostic,
    synthesize,
)
from padic_asai.measures import Distribution
from padic_asai.padics import PadicElt, PrimeCtx, ValidationError
from padic_asai.series import TruncSeries


def split_data(p=5, k=2, a=30, abar=1, precision=24):
    ctx = PrimeCtx(p, precision=precision)
    return SplitEigenData(ctx, k, PadicElt.from_int(ctx, a), PadicElt.from_int(ctx, abar))


def random_pair(ctx, rng, Dmax, deg=6):
    comps = {}
    flats = {}
    for dpow in range(ctx.p - 1):
        comps[dpow] = TruncSeries.from_ints(ctx, [rng.randrange(-9, 10) for _ in range(deg)], Dmax)
        comps[dpow].is_exact_poly = False
        flats[dpow] = TruncSeries.from_ints(ctx, [rng.randrange(-9, 10) for _ in range(deg)], Dmax)
        flats[dpow].is_exact_poly = False
    return Distribution(ctx, comps), Distribution(ctx, flats)


def test_split_eigendata_rational_slopes():
    data = split_data()       # X^2 - 30X + 125: roots 5, 25
    assert data.ext is None
    assert data.v_alpha() == 1 and data.v_beta() == 2
    assert (data.alpha_tilde + data.beta_tilde).eq_prec(data.trace)
    assert (data.alpha_tilde * data.beta_tilde).eq_prec(data.B)


def test_split_eigendata_quadratic_case():
    # k=0: a=3 at p=3 has equal half-integer slopes: quadratic marker
    ctx = PrimeCtx(3, precision=24)
    data = SplitEigenData(ctx, 0, PadicElt.from_int(ctx, 3), PadicElt.from_int(ctx, 1))
    assert data.ext is not None
    assert data.v_alpha() == Fraction(1, 2)
    assert data.v_beta() == Fraction(1, 2)


def test_split_validation():
    ctx = PrimeCtx(5, precision=20)
    with pytest.raises(ValidationError):
        SplitEigenData(ctx, 2, PadicElt.from_int(ctx, 2), PadicElt.from_int(ctx, 1))
    with pytest.raises(ValidationError):
        SplitEigenData(ctx, 2, PadicElt.from_int(ctx, 10), PadicElt.from_int(ctx, 5))


def test_qtilde_shape_and_inverse():
    data = split_data()
    q, qinv, det = build_Qtilde(data)
    # det = B (alpha~ - beta~)
    want = data.B * (data.alpha_tilde - data.beta_tilde)
    assert det.eq_prec(want)
    # q * qinv = identity
    for i in range(2):
        for j in range(2):
            acc = q[i][0] * qinv[0][j] + q[i][1] * qinv[1][j]
            expect = 1 if i == j else 0
            assert acc.eq_prec(PadicElt.from_int(data.ctx, expect))


def test_qtilde_intro_variant():
    data = split_data()
    q, qinv, det = build_Qtilde(data, variant="intro")
    assert q[1][0].eq_prec(q[1][1])
    with pytest.raises(ValidationError):
        build_Qtilde(split_data(p=5, k=0, a=10), variant="intro")


def test_synthesize_basis_vector():
    data = split_data()
    ctx = data.ctx
    Dmax = 40
    one = Distribution(ctx, {d: TruncSeries.from_ints(ctx, [1], Dmax) for d in range(4)})
    zero = Distribution(ctx, {d: TruncSeries.zero(ctx, Dmax) for d in range(4)})
    la, lb = synthesize(one, zero, data, 2, Dmax)
    # L_alpha = qinv row 0 . (first column of M); check against direct computation
    run = data.log_run(Dmax)
    M = run.M(2)
    _, qinv, _ = build_Qtilde(data)
    want = M.m[0][0].scale(qinv[0][0]) + M.m[1][0].scale(qinv[0][1])
    assert (la.component(0) - want).is_zero

    la0, lb0 = synthesize(zero, zero, data, 2, Dmax)
    for d in range(4):
        assert la0.component(d).is_zero and lb0.component(d).is_zero


@pytest.mark.parametrize("p,k,a,n", [(5, 2, 30, 2), (5, 2, 30, 3), (3, 1, 9, 2), (7, 2, 14, 2)])
def test_round_trip_random_pairs(p, k, a, n):
    data = split_data(p=p, k=k, a=a)
    ctx = data.ctx
    rng = random.Random(p * 100 + k * 10 + n)
    Dmax = 48
    for _ in range(5):
        sharp, flat = random_pair(ctx, rng, Dmax)
        la, lb = synthesize(sharp, flat, data, n, Dmax)
        s2, f2, rep = decompose(la, lb, data, n, Dmax)
        for dpow in range(ctx.p - 1):
            assert (s2.component(dpow) - sharp.component(dpow)).is_zero
            assert (f2.component(dpow) - flat.component(dpow)).is_zero


def test_round_trip_quadratic_eigenvalues():
    # k=0 cell: alpha~, beta~ quadratic; round trip must still be exact
    ctx = PrimeCtx(3, precision=24)
    data = SplitEigenData(ctx, 0, PadicElt.from_int(ctx, 3), PadicElt.from_int(ctx, 1))
    rng = random.Random(17)
    Dmax = 30
    sharp, flat = random_pair(ctx, rng, Dmax, deg=5)
    la, lb = synthesize(sharp, flat, data, 2, Dmax)
    s2, f2, _ = decompose(la, lb, data, 2, Dmax)
    for dpow in range(2):
        diff_s = s2.component(dpow) - sharp.component(dpow)
        diff_f = f2.component(dpow) - flat.component(dpow)
        assert diff_s.is_zero and diff_f.is_zero


def test_det_unit_constant_term_every_cell():
    for (p, k, a) in [(3, 0, 3), (3, 1, 9), (5, 2, 30), (5, 4, 50), (7, 2, 14)]:
        data = split_data(p=p, k=k, a=a)
        run = data.log_run(40)
        for n in (1, 2, 3):
            det = run.M(n).det()
            assert det.coeff(0).valuation() == 0, (p, k, n)


def test_inverse_of_synthesize_on_column():
    data = split_data()
    ctx = data.ctx
    Dmax = 40
    rng = random.Random(5)
    sharp, flat = random_pair(ctx, rng, Dmax)
    la, lb = synthesize(sharp, flat, data, 2, Dmax)
    # feeding Qtilde^{-1} M (1,0) through decompose returns (1,0)
    one = Distribution(ctx, {0: TruncSeries.from_ints(ctx, [1], Dmax)})
    zero = Distribution(ctx, {0: TruncSeries.zero(ctx, Dmax)})
    la1, lb1 = synthesize(one, zero, data, 2, Dmax)
    s, f, _ = decompose(la1, lb1, data, 2, Dmax)
    assert s.component(0).coeff(0).eq_prec(PadicElt.from_int(ctx, 1))
    for c in s.component(0).coeffs[1:]:
        assert c.is_zero
    assert f.component(0).is_zero


def test_stabilization_flags_mismatched_pair():
    data = split_data(p=5, k=2, a=30, precision=26)
    ctx = data.ctx
    rng = random.Random(31)
    Dmax = 60
    sharp, flat = random_pair(ctx, rng, Dmax)
    la, lb = synthesize(sharp, flat, data, 3, Dmax)
    good = stabilization_diagnostic(la, lb, data, 3, Dmax)
    assert good["valid"], good

    # mismatch: L_beta swapped for an unrelated random series
    _, lb_bad = random_pair(ctx, rng, Dmax)
    bad = stabilization_diagnostic(la, lb_bad, data, 3, Dmax)
    assert not bad["valid"], bad


def test_interpolation_consistency_synthesized_pairs():
    # exact-mode matrix: tails vanish and the two scalings agree on the nose
    data = split_data(p=5, k=2, a=30, precision=24)
    ctx = data.ctx
    n = 3
    Dmax = 3 * (5**n - 1) + 6
    run = data.log_run(Dmax, truncated=False)
    rng = random.Random(3)
    sharp, flat = random_pair(ctx, rng, Dmax, deg=4)
    la, lb = synthesize(sharp, flat, data, n, Dmax, truncated=False, run=run)
    thetas = [DirichletChar(ctx, 2, d, 1) for d in range(2)] + \
             [DirichletChar(ctx, 3, 0, 1), DirichletChar(ctx, 3, 1, 2)]
    rep = interpolation_consistency(la, lb, data, thetas)
    assert rep["pass"], rep


def test_interpolation_consistency_detects_perturbation():
    data = split_data(p=5, k=2, a=30, precision=24)
    ctx = data.ctx
    n = 2
    Dmax = 3 * (5**n - 1) + 6
    run = data.log_run(Dmax, truncated=False)
    rng = random.Random(23)
    sharp, flat = random_pair(ctx, rng, Dmax, deg=4)
    la, lb = synthesize(sharp, flat, data, n, Dmax, truncated=False, run=run)
    # a perturbation big enough to breach the beta^r scaling must be flagged
    comp = lb.component(1)
    comp.coeffs[0] = comp.coeffs[0] + PadicElt(ctx, -6, 1, ctx.N)
    thetas = [DirichletChar(ctx, 2, 1, 1)]
    rep = interpolation_consistency(la, lb, data, thetas)
    assert not rep["pass"]


def test_zero_pair_consistency():
    data = split_data()
    ctx = data.ctx
    zero = Distribution(ctx, {d: TruncSeries.zero(ctx, 30) for d in range(4)})
    rep = interpolation_consistency(zero, zero, data, [DirichletChar(ctx, 2, 0, 1)])
    assert rep["pass"]
