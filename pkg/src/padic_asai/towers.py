"""Norm-compatible towers of pairing scalars and their validity predicates.

A Tower holds scalars x[j][r][t] indexed by twist j <= k, level 1 <= r <= R
and unit t mod p^r.  Measure-generated towers are the synthetic stand-in for
geometric input data; the predicates below are what make an arbitrary tower
acceptable to the patching algorithm.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .measures import FiniteMeasure
from .padics import PadicElt, PrimeCtx, ValidationError, unit_one_part


class EigenData:
    """Scalar eigendata: prime context, weight k, U_p-eigenvalue, auxiliary constants.

    slope n = v_p(a_p) must satisfy n < k+1 (the patching lemma needs the
    slope strictly below the number of congruence moduli).  n = 0 (ordinary)
    is accepted: it is the degenerate single-modulus case and is useful in
    tests, in particular it is the only option at k = 0.
    """

    def __init__(self, ctx: PrimeCtx, k: int, a_p: PadicElt,
                 sqrt_disc: PadicElt | None = None,
                 nebentypus_on_c: PadicElt | None = None, c: int = 2,
                 strict_nonordinary: bool = False):
        if k < 0:
            raise ValidationError("weight parameter k must be >= 0")
        if a_p.is_zero:
            raise ValidationError("a_p indistinguishable from zero at working precision")
        n = a_p.valuation()
        if n >= k + 1:
            raise ValidationError(
                f"slope v(a_p)={n} is not below k+1={k + 1}: patching moduli insufficient")
        if strict_nonordinary and n <= 0:
            raise ValidationError("non-ordinary data required: v(a_p) must be positive")
        if c <= 1 or math.gcd(c, 6 * ctx.p) != 1:
            raise ValidationError("auxiliary c must be > 1 and coprime to 6p")
        self.ctx = ctx
        self.k = k
        self.a_p = a_p
        self.slope = n
        self.sqrt_disc = sqrt_disc if sqrt_disc is not None else PadicElt.from_int(ctx, 1)
        if self.sqrt_disc.is_zero:
            raise ValidationError("sqrt_disc must be nonzero")
        self.nebentypus_on_c = nebentypus_on_c if nebentypus_on_c is not None \
            else PadicElt.from_int(ctx, 1)
        self.c = c

    def m_factor(self, j: int) -> PadicElt:
        """(a^sigma - a)^j * j! * C(k,j)^2, the twist normalizer."""
        ctx = self.ctx
        base = (-self.sqrt_disc) ** j if j else PadicElt.from_int(ctx, 1)
        return base * PadicElt.from_int(ctx, math.factorial(j) * math.comb(self.k, j) ** 2)


class Tower:
    """x[(j, r, t)] -> PadicElt, with optional level-0 scalars x0[j]."""

    def __init__(self, eigen: EigenData, R: int, values: dict[tuple[int, int, int], PadicElt],
                 x0: dict[int, PadicElt] | None = None):
        if R < 1:
            raise ValidationError("tower needs R >= 1")
        self.eigen = eigen
        self.R = R
        self.values = values
        self.x0 = x0

    @property
    def ctx(self) -> PrimeCtx:
        return self.eigen.ctx

    def value(self, j: int, r: int, t: int) -> PadicElt:
        return self.values.get((j, r, t % self.ctx.p ** r), PadicElt.zero(self.ctx))

    def level_values(self, j: int, r: int) -> dict[int, PadicElt]:
        pr = self.ctx.p ** r
        return {t: self.value(j, r, t) for t in range(1, pr) if t % self.ctx.p != 0}

    def copy(self) -> "Tower":
        return Tower(self.eigen, self.R, dict(self.values),
                     dict(self.x0) if self.x0 is not None else None)


def gen_from_measure(mu: FiniteMeasure, eigen: EigenData, R: int,
                     with_level0: bool = True) -> Tower:
    """x[j][r][t] := a_p^r * m_j * sum over z_i = t (p^r) of w_i <z_i>^j.

    Level-0 scalars are attached when a_p - p^j is invertible for every j,
    normalized so the degenerate norm relation holds.
    """
    ctx = eigen.ctx
    values: dict[tuple[int, int, int], PadicElt] = {}
    for j in range(eigen.k + 1):
        m_j = eigen.m_factor(j)
        apr = PadicElt.from_int(ctx, 1)
        for r in range(1, R + 1):
            apr = apr * eigen.a_p
            for t, s in mu.bucket_sums(j, r).items():
                values[(j, r, t)] = apr * m_j * s
    x0 = {}
    for j in range(eigen.k + 1):
        denom = eigen.a_p - PadicElt.from_int(ctx, ctx.p) ** j
        if denom.is_zero:
            x0 = None
            break
        total = PadicElt.zero(ctx)
        for t, s in mu.bucket_sums(j, 1).items():
            total = total + s
        x0[j] = eigen.a_p * eigen.m_factor(j) * total / denom
    return Tower(eigen, R, values, x0 if with_level0 else None)


def check_norm(tower: Tower) -> dict:
    """Verify the trace-compatibility across levels, exactly to precision.

    sum over s = t (p^r) of x[j][r+1][s] must equal a_p * x[j][r][t]; with
    level-0 data, summing level 1 over all units must give (a_p - p^j) x0[j].
    Returns pass/fail plus the worst deviation valuation observed.
    """
    ctx = tower.ctx
    eigen = tower.eigen
    ok = True
    worst = None
    failures = []
    for j in range(eigen.k + 1):
        for r in range(1, tower.R):
            pr, prn = ctx.p ** r, ctx.p ** (r + 1)
            for t in range(1, pr):
                if t % ctx.p == 0:
                    continue
                acc = PadicElt.zero(ctx)
                for s in range(t, prn, pr):
                    acc = acc + tower.value(j, r + 1, s)
                dev = acc - eigen.a_p * tower.value(j, r, t)
                if not dev.is_zero:
                    ok = False
                    v = dev.valuation()
                    worst = v if worst is None else min(worst, v)
                    failures.append({"j": j, "r": r, "t": t, "deviation_valuation": v})
        if tower.x0 is not None:
            acc = PadicElt.zero(ctx)
            for t in range(1, ctx.p):
                acc = acc + tower.value(j, 1, t)
            target = (eigen.a_p - PadicElt.from_int(ctx, ctx.p) ** j) * tower.x0[j]
            dev = acc - target
            if not dev.is_zero:
                ok = False
                v = dev.valuation()
                worst = v if worst is None else min(worst, v)
                failures.append({"j": j, "r": 0, "t": 0, "deviation_valuation": v})
    return {"pass": ok, "worst_deviation_valuation": worst, "failures": failures[:16]}


def check_congruences(tower: Tower, floor: Fraction | int = -10) -> dict:
    """Margins of the alternating-sum congruence, per (j, r, t).

    For y_i := x[i][r][t] / (a_p^r m_i), the combination
        sum_i (-1)^i C(j,i) u^(-i log_u t) y_i
    must vanish to order j*r.  The reported margin is its valuation minus jr;
    measure towers give margin >= 0.  The weight on the i-th term is the
    inverse of the 1-unit part of t (literal t^(-i) differs by a torsion unit
    and does not satisfy the bound).
    """
    ctx = tower.ctx
    eigen = tower.eigen
    margins = {}
    inf_margin = None
    apr_inv = {}
    acc = PadicElt.from_int(ctx, 1)
    for r in range(1, tower.R + 1):
        acc = acc * eigen.a_p
        apr_inv[r] = acc.inv()
    m_inv = {i: eigen.m_factor(i).inv() for i in range(eigen.k + 1)}
    for j in range(1, eigen.k + 1):
        for r in range(1, tower.R + 1):
            pr = ctx.p ** r
            level_margin = None
            for t in range(1, pr):
                if t % ctx.p == 0:
                    continue
                tinv = unit_one_part(ctx, t).inv()
                comb = PadicElt.zero(ctx)
                tpow = PadicElt.from_int(ctx, 1)
                for i in range(j + 1):
                    y = tower.value(i, r, t) * apr_inv[r] * m_inv[i]
                    term = PadicElt.from_int(ctx, (-1) ** i * math.comb(j, i)) * tpow * y
                    comb = comb + term
                    tpow = tpow * tinv
                v = comb.valuation()
                margin = None if v is None else v - j * r
                if margin is not None:
                    level_margin = margin if level_margin is None else min(level_margin, margin)
            margins[(j, r)] = level_margin
            if level_margin is not None:
                inf_margin = level_margin if inf_margin is None else min(inf_margin, level_margin)
    bounded = inf_margin is None or inf_margin >= floor
    return {"pass": bounded, "inf_margin": inf_margin,
            "per_jr": {f"{j},{r}": m for (j, r), m in margins.items()},
            "floor": floor}


def inject_noise(tower: Tower, nu: FiniteMeasure, j0: int, scale_val: int | None) -> Tower:
    """Add a p^scale_val-scaled measure tower to the j0-slice only.

    The norm relation survives exactly (it is linear level-by-level in each
    j-slice); congruence margins degrade by roughly scale_val - j*r.
    scale_val=None is a no-op.
    """
    if scale_val is None:
        return tower.copy()
    ctx = tower.ctx
    if j0 > tower.eigen.k:
        raise ValidationError("noise twist j0 exceeds k")
    out = tower.copy()
    scale = PadicElt(ctx, scale_val, 1, ctx.N)
    apr = PadicElt.from_int(ctx, 1)
    for r in range(1, tower.R + 1):
        apr = apr * tower.eigen.a_p
        for t, s in nu.bucket_sums(j0, r).items():
            key = (j0, r, t)
            out.values[key] = out.value(j0, r, t) + apr * tower.eigen.m_factor(j0) * s * scale
    if out.x0 is not None:
        denom = tower.eigen.a_p - PadicElt.from_int(ctx, ctx.p) ** j0
        if denom.is_zero:
            out.x0 = None
        else:
            total = PadicElt.zero(ctx)
            for t, s in nu.bucket_sums(j0, 1).items():
                total = total + s
            out.x0[j0] = out.x0[j0] + tower.eigen.a_p * tower.eigen.m_factor(j0) * total * scale / denom
    return out


def perturb_value(tower: Tower, j: int, r: int, t: int, val_exponent: int) -> Tower:
    """Fault injection: add p^val_exponent to a single tower value."""
    out = tower.copy()
    ctx = tower.ctx
    key = (j, r, t % ctx.p ** r)
    out.values[key] = out.value(j, r, t) + PadicElt(ctx, val_exponent, 1, ctx.N)
    return out
