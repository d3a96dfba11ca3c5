"""Delta-indexed distributions and the finite-measure oracle.

A Distribution is one truncated series per character of the torsion part of
the unit group.  FiniteMeasure (a Dirac comb on units) is the independent
ground truth: its transform is computable two ways (binomial series, and
exact point evaluation), neither of which touches the patching pipeline.
"""

from __future__ import annotations

import math

from .cyclo import CycloElt, DirichletChar, eval_series_at
from .padics import (
    PadicElt,
    PrimeCtx,
    ValidationError,
    teichmuller,
    u_exponent,
    unit_one_part,
)
from .series import TruncSeries


class FiniteMeasure:
    """Dirac comb sum_i w_i * delta_{z_i} supported on p-adic units."""

    def __init__(self, ctx: PrimeCtx, masses: list[tuple[int, PadicElt]]):
        for z, _ in masses:
            if math.gcd(z, ctx.p) != 1:
                raise ValidationError(f"support point {z} is not a unit")
        self.ctx = ctx
        self.masses = list(masses)

    @staticmethod
    def from_ints(ctx: PrimeCtx, masses: list[tuple[int, int]]) -> "FiniteMeasure":
        return FiniteMeasure(ctx, [(z, PadicElt.from_int(ctx, w)) for z, w in masses])

    @staticmethod
    def random(ctx: PrimeCtx, rng, size: int = 3, level: int = 3, wmax: int = 9) -> "FiniteMeasure":
        pr = ctx.p ** level
        masses = []
        for _ in range(size):
            z = rng.randrange(1, pr)
            while z % ctx.p == 0:
                z = rng.randrange(1, pr)
            w = 0
            while w == 0:
                w = rng.randrange(-wmax, wmax + 1)
            masses.append((z, w))
        return FiniteMeasure.from_ints(ctx, masses)

    def moment(self, j: int, theta: DirichletChar) -> CycloElt:
        """Exact integral of <z>^j * theta(z): the brute-force oracle value."""
        ring = theta.ring()
        acc = ring.zero()
        for z, w in self.masses:
            zj = unit_one_part(self.ctx, z) ** j if j else PadicElt.from_int(self.ctx, 1)
            acc = acc + theta.value(z).scale(w * zj)
        return acc

    def bucket_sums(self, j: int, r: int) -> dict[int, PadicElt]:
        """t -> sum of w_i <z_i>^j over masses with z_i = t mod p^r."""
        ctx = self.ctx
        pr = ctx.p ** r
        out: dict[int, PadicElt] = {}
        for z, w in self.masses:
            t = z % pr
            zj = unit_one_part(ctx, z) ** j if j else PadicElt.from_int(ctx, 1)
            val = w * zj
            out[t] = out.get(t, PadicElt.zero(ctx)) + val
        return out

    def __add__(self, other: "FiniteMeasure") -> "FiniteMeasure":
        return FiniteMeasure(self.ctx, self.masses + other.masses)

    def scaled(self, c: PadicElt) -> "FiniteMeasure":
        return FiniteMeasure(self.ctx, [(z, c * w) for z, w in self.masses])


class Distribution:
    """Components indexed by delta-power 0..p-2, plus growth metadata."""

    def __init__(self, ctx: PrimeCtx, components: dict[int, TruncSeries],
                 growth_w: float = 0.0, provenance: str = "oracle"):
        self.ctx = ctx
        self.components = dict(components)
        self.growth_w = growth_w
        self.provenance = provenance

    def component(self, delta_power: int) -> TruncSeries:
        key = delta_power % (self.ctx.p - 1)
        if key not in self.components:
            raise ValidationError(f"no component for delta power {key}")
        return self.components[key]

    def map_components(self, fn) -> "Distribution":
        return Distribution(self.ctx, {d: fn(d, s) for d, s in self.components.items()},
                            self.growth_w, self.provenance)

    def __add__(self, other: "Distribution") -> "Distribution":
        keys = set(self.components) | set(other.components)
        comps = {}
        for d in keys:
            a = self.components.get(d)
            b = other.components.get(d)
            comps[d] = a + b if (a and b) else (a or b)
        return Distribution(self.ctx, comps, max(self.growth_w, other.growth_w), "mixed")


def eval_at(d: Distribution, j: int, theta: DirichletChar) -> CycloElt:
    """Evaluate the matching delta-component at T = u^j zeta - 1."""
    return eval_series_at(d.component(theta.delta_power), j, theta)


def amice_transform(mu: FiniteMeasure, j: int, Dmax: int) -> Distribution:
    """Binomial-series transform: component_delta = sum_i w_i <z_i>^j delta(z_i) (1+T)^lambda_i.

    (1+T)^lambda is expanded as a truncated binomial series, so the result
    carries the usual factorial-denominator precision loss; point evaluations
    of the same measure (FiniteMeasure.moment) are exact and serve as the
    reference.
    """
    ctx = mu.ctx
    comps: dict[int, TruncSeries] = {}
    pk = ctx.ppow(ctx.N)
    for dpow in range(ctx.p - 1):
        acc = TruncSeries.zero(ctx, Dmax)
        acc.is_exact_poly = False
        for z, w in mu.masses:
            lam = u_exponent(ctx, z)
            zj = unit_one_part(ctx, z) ** j if j else PadicElt.from_int(ctx, 1)
            dval = PadicElt.from_int(ctx, pow(teichmuller(ctx, z, ctx.N), dpow, pk))
            acc = acc + binomial_series(lam, Dmax).scale(w * zj * dval)
        comps[dpow] = acc
    return Distribution(ctx, comps, growth_w=0.0, provenance="oracle")


def binomial_series(lam: PadicElt, Dmax: int) -> TruncSeries:
    """(1+T)^lambda = sum_i C(lambda, i) T^i, truncated."""
    ctx = lam.ctx
    coeffs = [PadicElt.from_int(ctx, 1)]
    term = PadicElt.from_int(ctx, 1)
    for i in range(1, Dmax + 1):
        term = term * (lam - (i - 1)) / PadicElt.from_int(ctx, i)
        coeffs.append(term)
    s = TruncSeries(ctx, coeffs, Dmax)
    s.is_exact_poly = False
    return s


def admissibility_report(d: Distribution, w: float) -> dict:
    """Growth diagnostic: inf over n>=1 of v(c_n) + w log_p(n), per component.

    "violated" flags a running infimum that keeps strictly decreasing through
    the last half of the truncation window, the fingerprint of super-log
    growth.  Purely diagnostic: boundedness is not decidable from finitely
    many coefficients.
    """
    out = {"w": w, "components": {}, "violated": False}
    p = d.ctx.p
    overall = None
    for dpow, series in d.components.items():
        scores = []
        for n in range(1, len(series.coeffs)):
            c = series.coeffs[n]
            v = c.valuation()
            if v is None:
                continue
            scores.append((n, v + w * math.log(n, p)))
        if not scores:
            out["components"][dpow] = {"h_inf": None, "violated": False}
            continue
        running = []
        cur = None
        for _, s in scores:
            cur = s if cur is None else min(cur, s)
            running.append(cur)
        h_inf = running[-1]
        half = running[len(running) // 2:]
        drops = sum(1 for a, b in zip(half, half[1:]) if b < a)
        violated = len(half) > 2 and drops >= max(2, len(half) // 2)
        out["components"][dpow] = {"h_inf": h_inf, "violated": violated}
        out["violated"] = out["violated"] or violated
        overall = h_inf if overall is None else min(overall, h_inf)
    out["h_inf"] = overall
    return out
