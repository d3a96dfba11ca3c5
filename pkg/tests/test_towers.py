import random

import pytest

from padic_asai.measures import FiniteMeasure
from padic_asai.padics import PadicElt, PrimeCtx, ValidationError, unit_one_part
from padic_asai.towers import (
    EigenData,
    Tower,
    check_congruences,
    check_norm,
    gen_from_measure,
    inject_noise,
    perturb_value,
)


def make_eigen(p=5, k=2, slope=1, precision=24):
    ctx = PrimeCtx(p, precision=precision)
    a_p = PadicElt.from_int(ctx, p**slope * 2) if slope else PadicElt.from_int(ctx, 2)
    return EigenData(ctx, k, a_p, c=7 if p != 7 else 11)


def test_eigen_validation():
    ctx = PrimeCtx(5, precision=20)
    with pytest.raises(ValidationError):
        EigenData(ctx, 1, PadicElt.from_int(ctx, 25))     # slope 2 >= k+1
    with pytest.raises(ValidationError):
        EigenData(ctx, 2, PadicElt.zero(ctx))
    with pytest.raises(ValidationError):
        EigenData(ctx, 2, PadicElt.from_int(ctx, 5), c=10)  # c not coprime to 6p
    with pytest.raises(ValidationError):
        EigenData(ctx, 2, PadicElt.from_int(ctx, 2), strict_nonordinary=True)


def test_gen_single_dirac_level1():
    eigen = make_eigen(p=5, k=1, slope=1)
    ctx = eigen.ctx
    mu = FiniteMeasure.from_ints(ctx, [(7, 1)])
    tower = gen_from_measure(mu, eigen, 2)
    # 7 = 2 mod 5: only t=2 is hit at level 1, with value a_p * 1
    for t in (1, 3, 4):
        assert tower.value(0, 1, t).is_zero
    assert tower.value(0, 1, 2).eq_prec(eigen.a_p)


def test_gen_two_masses_level2_twist():
    # mu = delta_7 + delta_11 at p=5, r=2: only z=7 is in the class of 7 mod 25
    eigen = make_eigen(p=5, k=1, slope=1)
    ctx = eigen.ctx
    mu = FiniteMeasure.from_ints(ctx, [(7, 1), (11, 1)])
    tower = gen_from_measure(mu, eigen, 2)
    want = eigen.a_p**2 * eigen.m_factor(1) * unit_one_part(ctx, 7)
    assert tower.value(1, 2, 7).eq_prec(want)


def test_partial_integral_bridge():
    # a_p^(-r) x[j][r][t] / m_j equals the bucketed partial integral exactly
    eigen = make_eigen(p=3, k=2, slope=1, precision=26)
    ctx = eigen.ctx
    rng = random.Random(3)
    mu = FiniteMeasure.random(ctx, rng, size=4, level=3)
    tower = gen_from_measure(mu, eigen, 3)
    for j in (0, 1, 2):
        for r in (1, 2, 3):
            buckets = mu.bucket_sums(j, r)
            for t, s in buckets.items():
                got = tower.value(j, r, t) * (eigen.a_p ** (-r)) * eigen.m_factor(j).inv()
                assert got.eq_prec(s)


@pytest.mark.parametrize("p,k,slope,R", [(3, 0, 0, 3), (3, 1, 1, 3), (5, 2, 1, 2), (7, 1, 1, 2)])
def test_norm_relation_measure_towers(p, k, slope, R):
    eigen = make_eigen(p=p, k=k, slope=slope, precision=24)
    rng = random.Random(p * 10 + k)
    mu = FiniteMeasure.random(eigen.ctx, rng, size=3, level=R)
    tower = gen_from_measure(mu, eigen, R)
    rep = check_norm(tower)
    assert rep["pass"], rep
    assert tower.x0 is not None


def test_norm_fault_detected_with_exact_valuation():
    eigen = make_eigen(p=5, k=1, slope=1)
    rng = random.Random(8)
    mu = FiniteMeasure.random(eigen.ctx, rng, size=3, level=3)
    tower = gen_from_measure(mu, eigen, 3)
    for M in (2, 5, 9):
        bad = perturb_value(tower, 1, 2, 7, M)
        rep = check_norm(bad)
        assert not rep["pass"]
        assert rep["worst_deviation_valuation"] == M


def test_zero_tower_passes():
    eigen = make_eigen(p=3, k=1, slope=1)
    tower = Tower(eigen, 2, {}, x0={0: PadicElt.zero(eigen.ctx), 1: PadicElt.zero(eigen.ctx)})
    assert check_norm(tower)["pass"]


def test_congruence_margins_nonnegative():
    for (p, k, slope, R) in [(3, 1, 1, 3), (5, 2, 1, 2), (5, 4, 2, 2)]:
        eigen = make_eigen(p=p, k=k, slope=slope, precision=28)
        rng = random.Random(p + k)
        mu = FiniteMeasure.random(eigen.ctx, rng, size=3, level=R)
        tower = gen_from_measure(mu, eigen, R)
        rep = check_congruences(tower)
        assert rep["pass"]
        assert rep["inf_margin"] is None or rep["inf_margin"] >= 0


def test_congruence_j0_vacuous():
    eigen = make_eigen(p=3, k=0, slope=0)
    rng = random.Random(2)
    mu = FiniteMeasure.random(eigen.ctx, rng, size=2, level=2)
    tower = gen_from_measure(mu, eigen, 2)
    rep = check_congruences(tower)
    assert rep["per_jr"] == {}
    assert rep["inf_margin"] is None


def test_inject_noise_preserves_norm_and_degrades_margin():
    eigen = make_eigen(p=5, k=2, slope=1, precision=28)
    rng = random.Random(21)
    mu = FiniteMeasure.random(eigen.ctx, rng, size=3, level=3)
    nu = FiniteMeasure.from_ints(eigen.ctx, [(2, 1)])
    tower = gen_from_measure(mu, eigen, 3)

    noop = inject_noise(tower, nu, 1, None)
    assert check_norm(noop)["pass"]
    assert all(noop.value(*k2).eq_prec(v) for k2, v in tower.values.items())

    huge = inject_noise(tower, nu, 1, eigen.ctx.N + 10)
    assert check_norm(huge)["pass"]
    assert check_congruences(huge)["inf_margin"] >= 0

    # noise at scale s on the j0=1 slice costs about s - j*r on each margin
    s = 2
    noisy = inject_noise(tower, nu, 1, s)
    assert check_norm(noisy)["pass"]
    rep = check_congruences(noisy)
    for key, margin in rep["per_jr"].items():
        j, r = (int(x) for x in key.split(","))
        if margin is not None:
            assert margin >= min(0, s - j * r)


def test_measure_linearity_of_towers():
    eigen = make_eigen(p=3, k=1, slope=1)
    ctx = eigen.ctx
    mu1 = FiniteMeasure.from_ints(ctx, [(2, 3)])
    mu2 = FiniteMeasure.from_ints(ctx, [(7, -1)])
    t1 = gen_from_measure(mu1, eigen, 2)
    t2 = gen_from_measure(mu2, eigen, 2)
    t12 = gen_from_measure(mu1 + mu2, eigen, 2)
    for key in set(t12.values) | set(t1.values) | set(t2.values):
        j, r, t = key
        assert t12.value(j, r, t).eq_prec(t1.value(j, r, t) + t2.value(j, r, t))
