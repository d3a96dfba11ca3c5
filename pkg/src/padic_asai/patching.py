"""The patching pipeline: twist polynomials, CRT gluing, assembly, evaluation.

Every level r contributes one polynomial per twist j; the k+1 twisted
congruences pin a unique polynomial of degree < (k+1)p^(r-1), and the top
level is the truncation of the distribution.  All checks here are exact at
the tracked precision.
"""

from __future__ import annotations

import math

from .cyclo import CycloElt, DirichletChar, char_sum, eval_series_at
from .measures import Distribution, FiniteMeasure, admissibility_report, binomial_series
from .padics import PadicElt, PadicError, PrecisionError, ValidationError, u_exponent
from .series import (
    TruncSeries,
    crt_patch,
    group_ring_to_poly,
    omega,
    omega_twisted,
    one_plus_t_pow,
)
from .towers import EigenData, Tower


class PropertyFailure(PadicError):
    """A spec-level invariant failed on given inputs (exit code 1)."""


class MeromorphicComponent(PadicError):
    """Auxiliary-factor removal hit a non-unit constant term on some component."""

    def __init__(self, delta_power: int, valuation):
        self.delta_power = delta_power
        super().__init__(
            f"component delta=eps^{delta_power}: removal factor has constant-term "
            f"valuation {valuation}; the quotient is meromorphic, not a distribution")


PRECISION_SAFETY = 6


def required_precision(eigen: EigenData, R: int) -> int:
    return int(R * eigen.slope) + PRECISION_SAFETY


class PatchRun:
    """One pass of the patching algorithm over all torsion components."""

    def __init__(self, tower: Tower, Dmax: int | None = None):
        eigen = tower.eigen
        ctx = eigen.ctx
        need = required_precision(eigen, tower.R)
        if ctx.N < need:
            raise PrecisionError(
                f"context precision {ctx.N} below required {need} "
                f"(= R*slope + {PRECISION_SAFETY}) for R={tower.R}, slope={eigen.slope}")
        deg_top = (eigen.k + 1) * ctx.p ** (tower.R - 1)
        self.Dmax = Dmax if Dmax is not None else max(2 * deg_top, deg_top + 8)
        if self.Dmax < deg_top:
            raise ValidationError(f"Dmax={Dmax} cannot hold degree {deg_top}")
        self.tower = tower
        self.eigen = eigen
        self.ctx = ctx
        self.P: dict[tuple[int, int, int], TruncSeries] = {}
        self.Q: dict[tuple[int, int], TruncSeries] = {}
        self.diagnostics: dict = {}

    # -- twist polynomials ----------------------------------------------------

    def build_P(self, delta_power: int, r: int, j: int) -> TruncSeries:
        """a_p^(-r) m_j^(-1) sum_t x[j][r][t] delta(t) (1+T)^log_u(t)."""
        key = (delta_power, r, j)
        if key in self.P:
            return self.P[key]
        eigen = self.eigen
        if not (1 <= r <= self.tower.R and 0 <= j <= eigen.k):
            raise ValidationError(f"(r={r}, j={j}) outside tower range")
        norm = (eigen.a_p ** (-r)) * eigen.m_factor(j).inv()
        coeffs = {t: norm * x for t, x in self.tower.level_values(j, r).items()}
        poly = group_ring_to_poly(self.ctx, coeffs, r, delta_power, self.Dmax)
        self.P[key] = poly
        return poly

    # -- the three coherence conditions on the P's -----------------------------

    def check_polylem(self, delta_power: int) -> dict:
        """Growth, level-coherence, and twisted alternating-sum margins.

        (1) inf over (r, j) of min-coefficient-valuation(P) + slope*r;
        (2) P_{r+1,j} = P_{r,j} mod omega_{r-1}(T), exact;
        (3) inf of min-val(sum_i (-1)^i C(j,i) P_{r,i}(u^(-i)(1+T)-1)) + (slope-j)r.
        Measure-backed towers give nonnegative margins in (1) and (3).
        """
        eigen, ctx = self.eigen, self.ctx
        n = eigen.slope
        growth_margin = None
        coherence_ok = True
        alt_margin = None
        per_jr = {}
        for j in range(eigen.k + 1):
            for r in range(1, self.tower.R + 1):
                pol = self.build_P(delta_power, r, j)
                mv = pol.min_valuation()
                if mv is not None:
                    g = mv + n * r
                    growth_margin = g if growth_margin is None else min(growth_margin, g)
                if r < self.tower.R:
                    nxt = self.build_P(delta_power, r + 1, j)
                    rem = (nxt - pol).mod(omega(ctx, r - 1, self.Dmax))
                    if not rem.is_zero:
                        coherence_ok = False
        for j in range(1, eigen.k + 1):
            for r in range(1, self.tower.R + 1):
                acc = TruncSeries.zero(ctx, self.Dmax)
                for i in range(j + 1):
                    term = self.build_P(delta_power, r, i).twist_sub(i)
                    acc = acc + term.scale(PadicElt.from_int(ctx, (-1) ** i * math.comb(j, i)))
                mv = acc.min_valuation()
                margin = None if mv is None else mv + (n - j) * r
                per_jr[f"{j},{r}"] = margin
                if margin is not None:
                    alt_margin = margin if alt_margin is None else min(alt_margin, margin)
        return {"growth_margin": growth_margin, "coherence": coherence_ok,
                "alt_sum_margin": alt_margin, "alt_per_jr": per_jr,
                "pass": coherence_ok}

    # -- CRT gluing --------------------------------------------------------------

    def moduli(self, r: int) -> list[TruncSeries]:
        return [omega_twisted(self.ctx, r - 1, j, self.Dmax) for j in range(self.eigen.k + 1)]

    def patch_level(self, delta_power: int, r: int) -> TruncSeries:
        """Glue the k+1 twisted polynomials at level r; assert the degree bound."""
        key = (delta_power, r)
        if key in self.Q:
            return self.Q[key]
        residues = [self.build_P(delta_power, r, j).twist_sub(j)
                    for j in range(self.eigen.k + 1)]
        q = crt_patch(residues, self.moduli(r))
        bound = (self.eigen.k + 1) * self.ctx.p ** (r - 1)
        if q.degree() >= bound:
            raise PropertyFailure(
                f"patched polynomial degree {q.degree()} >= bound {bound} at level {r}")
        self.Q[key] = q
        return q

    def coherence_check(self, delta_power: int) -> bool:
        """Q_{r+1} = Q_r modulo the product of level-(r-1) twisted omegas."""
        ctx = self.ctx
        for r in range(1, self.tower.R):
            q_lo = self.patch_level(delta_power, r)
            q_hi = self.patch_level(delta_power, r + 1)
            modulus = TruncSeries.constant(ctx, 1, self.Dmax)
            for i in range(self.eigen.k + 1):
                modulus = modulus * omega_twisted(ctx, r - 1, i, self.Dmax)
            if not (q_hi - q_lo).mod(modulus).is_zero:
                return False
        return True

    def assemble(self) -> Distribution:
        """Top-level patched polynomials as the Delta-indexed distribution."""
        comps = {}
        for dpow in range(self.ctx.p - 1):
            comps[dpow] = self.patch_level(dpow, self.tower.R)
        dist = Distribution(self.ctx, comps, growth_w=float(self.eigen.slope),
                            provenance="patched")
        self.diagnostics["admissibility"] = admissibility_report(dist, float(self.eigen.slope))
        return dist


# ---------------------------------------------------------------------------
# oracle comparison and interpolation checks
# ---------------------------------------------------------------------------

def measure_bucket_poly(mu: FiniteMeasure, delta_power: int, r: int, j: int,
                        Dmax: int) -> TruncSeries:
    """Independent oracle polynomial: sum_t (bucket sums) delta(t) (1+T)^log_u(t).

    Built directly from the measure with plain power sums; shares nothing with
    the tower normalization or the Horner-based group-ring map.
    """
    ctx = mu.ctx
    from .padics import log_u, teichmuller
    acc = TruncSeries.zero(ctx, Dmax)
    pk = ctx.ppow(ctx.N)
    for t, s in mu.bucket_sums(j, r).items():
        m = log_u(ctx, t, r)
        dval = PadicElt.from_int(ctx, pow(teichmuller(ctx, t, ctx.N), delta_power, pk))
        acc = acc + one_plus_t_pow(ctx, m, Dmax).scale(s * dval)
    return acc


def oracle_congruence_check(run: PatchRun, mu: FiniteMeasure) -> dict:
    """Coefficientwise check: patched = measure transform mod each twisted omega.

    Equivalent to congruence modulo the full product by CRT, since the moduli
    are pairwise coprime.
    """
    ctx = run.ctx
    R = run.tower.R
    ok = True
    detail = {}
    for dpow in range(ctx.p - 1):
        q = run.patch_level(dpow, R)
        for j in range(run.eigen.k + 1):
            oracle = measure_bucket_poly(mu, dpow, R, j, run.Dmax).twist_sub(j)
            rem = (q - oracle).mod(omega_twisted(ctx, R - 1, j, run.Dmax))
            good = rem.is_zero
            ok = ok and good
            if not good:
                detail[f"delta={dpow},j={j}"] = rem.min_valuation()
    return {"pass": ok, "failures": detail}


def interpolation_check(dist: Distribution, tower: Tower, theta: DirichletChar,
                        j: int) -> dict:
    """eval(dist, u^j theta) against the normalized character sum of the tower.

    For theta of conductor p^r (r >= 1) the reference is
    a_p^(-r) m_j^(-1) sum_t x[j][r][t] theta(t); the trivial character uses the
    level-0 scalars and the (1 - p^j/a_p) factor.
    """
    eigen = tower.eigen
    ctx = eigen.ctx
    if j > eigen.k:
        raise ValidationError(f"twist j={j} exceeds k={eigen.k}")
    lhs = eval_series_at(dist.component(theta.delta_power), j, theta)
    if theta.is_trivial:
        if tower.x0 is None:
            raise ValidationError("trivial-character branch needs level-0 tower data")
        pj = PadicElt.from_int(ctx, ctx.p) ** j
        factor = PadicElt.from_int(ctx, 1) - pj * eigen.a_p.inv()
        rhs_scalar = factor * tower.x0[j] * eigen.m_factor(j).inv()
        rhs = theta.ring().from_scalar(rhs_scalar)
    else:
        r = theta.r
        if r > tower.R:
            raise ValidationError(f"character level {r} exceeds tower depth {tower.R}")
        norm = (eigen.a_p ** (-r)) * eigen.m_factor(j).inv()
        values = {t: norm * x for t, x in tower.level_values(j, r).items()}
        rhs = char_sum(values, theta)
    diff = lhs - rhs
    return {"pass": diff.is_zero, "difference_valuation": diff.min_valuation(),
            "theta": theta.to_json(), "j": j}


def full_pipeline_margins(tower: Tower, mu: FiniteMeasure, Dmax: int | None = None) -> dict:
    """gen - norm - congruence - patch - assemble - oracle, one report."""
    from .towers import check_congruences, check_norm
    run = PatchRun(tower, Dmax)
    report = {
        "norm": check_norm(tower),
        "congruences": check_congruences(tower),
    }
    dist = run.assemble()
    report["coherence"] = all(run.coherence_check(d) for d in range(tower.ctx.p - 1))
    report["oracle"] = oracle_congruence_check(run, mu)
    report["admissibility"] = run.diagnostics["admissibility"]
    report["pass"] = (report["norm"]["pass"] and report["congruences"]["pass"]
                      and report["coherence"] and report["oracle"]["pass"])
    report["distribution"] = dist
    return report


# ---------------------------------------------------------------------------
# removing the auxiliary integer c
# ---------------------------------------------------------------------------

def removal_factor(eigen: EigenData, delta_power: int, Dmax: int) -> TruncSeries:
    """c^2 - c^(-2k) eps(c^(-1)) delta(c)^2 (1+T)^(2 lambda_c) as a series."""
    ctx = eigen.ctx
    c = eigen.c
    from .padics import teichmuller
    pk = ctx.ppow(ctx.N)
    lam_c = u_exponent(ctx, c)
    dval = PadicElt.from_int(ctx, pow(teichmuller(ctx, c, ctx.N), 2 * delta_power, pk))
    c_pow = PadicElt.from_int(ctx, c) ** (-2 * eigen.k)
    coef = c_pow * eigen.nebentypus_on_c * dval
    tail = binomial_series(2 * lam_c, Dmax).scale(coef)
    return TruncSeries.constant(ctx, c * c, Dmax) - tail


def remove_c(dist: Distribution, eigen: EigenData) -> Distribution:
    """Divide each component by its removal factor (unit constant term required)."""
    out = {}
    for dpow, series in dist.components.items():
        factor = removal_factor(eigen, dpow, series.Dmax)
        c0 = factor.coeff(0)
        if c0.valuation() is None or c0.valuation() > 0:
            raise MeromorphicComponent(dpow, c0.valuation())
        quotient = series * factor.series_inverse()
        out[dpow] = quotient
    return Distribution(dist.ctx, out, dist.growth_w, provenance="c-removed")
