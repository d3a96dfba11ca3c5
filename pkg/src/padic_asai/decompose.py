"""Signed decomposition: two eigenvalue-scaled distributions against two
bounded measures through the logarithmic matrix.

The split eigendata fixes the quadratic X^2 - a X + v p^(k+1) built from the
product eigenvalues (trace alpha_bar * a_p, unit v = alpha_bar^2 * eps); the
2x2 matrix Q with rows proportional to the left eigenvectors of the companion
matrix converts between the eigenvalue-stabilized pair and the sharp/flat
pair.  Synthesis and decomposition are exact mutual inverses on the shared
truncation window because det M has a unit constant term.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclo import DirichletChar, eval_series_at
from .measures import Distribution, admissibility_report
from .logmatrix import LogMatrixRun, MatrixOfSeries
from .padics import (
    PadicElt,
    PrimeCtx,
    QuadExt,
    ValidationError,
    hensel_roots,
)
from .series import TruncSeries


class SplitEigenData:
    """Eigendata for the split-prime decomposition.

    a_p is the eigenvalue at the non-ordinary prime (slope condition
    v(a_p) > floor(k/(p-1))); alpha_bar is the unit root at the other prime.
    The roots of X^2 - a_p X + eps_p p^(k+1) may live in a quadratic
    extension; everything downstream is generic over that.
    """

    def __init__(self, ctx: PrimeCtx, k: int, a_p: PadicElt, alpha_bar: PadicElt,
                 eps_p: PadicElt | None = None):
        if alpha_bar.is_zero or alpha_bar.valuation() != 0:
            raise ValidationError("alpha_bar must be a p-adic unit")
        if a_p.is_zero:
            raise ValidationError("a_p indistinguishable from zero")
        if a_p.valuation() <= k // (ctx.p - 1):
            raise ValidationError(
                f"v(a_p)={a_p.valuation()} must exceed floor(k/(p-1))={k // (ctx.p - 1)}")
        self.ctx = ctx
        self.k = k
        self.a_p = a_p
        self.alpha_bar = alpha_bar
        self.eps_p = eps_p if eps_p is not None else PadicElt.from_int(ctx, 1)
        if self.eps_p.is_zero or self.eps_p.valuation() != 0:
            raise ValidationError("nebentypus value at p must be a unit")
        pk1 = PadicElt.from_int(ctx, ctx.p) ** (k + 1)
        alpha_p, beta_p, ext = hensel_roots(a_p, self.eps_p * pk1)
        self.ext = ext
        self.alpha_tilde = alpha_bar * alpha_p
        self.beta_tilde = alpha_bar * beta_p
        self.trace = alpha_bar * a_p                  # alpha~ + beta~
        self.v_unit = alpha_bar * alpha_bar * self.eps_p  # det A = v_unit p^(k+1)
        self.B = self.v_unit * pk1                    # alpha~ * beta~

    def v_alpha(self):
        return self.alpha_tilde.valuation()

    def v_beta(self):
        return self.beta_tilde.valuation()

    def log_run(self, Dmax: int, truncated: bool = True) -> LogMatrixRun:
        return LogMatrixRun(self.ctx, self.trace, self.v_unit, self.k, Dmax,
                            truncated=truncated)


def build_Qtilde(data: SplitEigenData, variant: str = "body"):
    """The 2x2 eigen matrix and its inverse.

    "body" is [[alpha~, -beta~], [-B, B]] with B = alpha_bar^2 eps p^(k+1);
    "intro" is the variant with p^(k-1) and both second-row entries negative,
    exposed for comparison only.
    """
    at, bt, B = data.alpha_tilde, data.beta_tilde, data.B
    if variant == "body":
        q = [[at, -bt], [-B, B]]
    elif variant == "intro":
        if data.k < 1:
            raise ValidationError("intro variant needs k >= 1 (p^(k-1) exponent)")
        Bi = data.alpha_bar * data.alpha_bar * PadicElt.from_int(data.ctx, data.ctx.p) ** (data.k - 1)
        q = [[at, -bt], [-Bi, -Bi]]
    else:
        raise ValidationError(f"unknown Qtilde variant {variant!r}")
    det = q[0][0] * q[1][1] - q[0][1] * q[1][0]
    if getattr(det, "is_zero", False):
        raise ValidationError("Qtilde is singular: the two stabilizations coincide")
    det_inv = det.inv()
    qinv = [[q[1][1] * det_inv, -(q[0][1] * det_inv)],
            [-(q[1][0] * det_inv), q[0][0] * det_inv]]
    return q, qinv, det


def _pair_components(pair) -> set:
    a, b = pair
    return set(a.components) | set(b.components)


def synthesize(sharp: Distribution, flat: Distribution, data: SplitEigenData,
               n: int, Dmax: int | None = None, truncated: bool = True,
               run: LogMatrixRun | None = None):
    """(L_alpha, L_beta)^T := Qtilde^(-1) M^(n) (sharp, flat)^T per component."""
    Dmax = Dmax if Dmax is not None else _default_dmax(sharp, flat)
    run = run or data.log_run(Dmax, truncated)
    M = run.M(n)
    _, qinv, _ = build_Qtilde(data)
    comps_a, comps_b = {}, {}
    for dpow in _pair_components((sharp, flat)):
        vec = (_fit(sharp.component(dpow), Dmax), _fit(flat.component(dpow), Dmax))
        mv = M.apply(vec)
        comps_a[dpow] = mv[0].scale(qinv[0][0]) + mv[1].scale(qinv[0][1])
        comps_b[dpow] = mv[0].scale(qinv[1][0]) + mv[1].scale(qinv[1][1])
    la = Distribution(data.ctx, comps_a, growth_w=float(data.v_alpha()), provenance="synthesized")
    lb = Distribution(data.ctx, comps_b, growth_w=float(data.v_beta()), provenance="synthesized")
    return la, lb


def decompose(l_alpha: Distribution, l_beta: Distribution, data: SplitEigenData,
              n: int, Dmax: int | None = None, truncated: bool = True,
              run: LogMatrixRun | None = None):
    """(sharp, flat)^T := M^(n)^(-1) Qtilde (L_alpha, L_beta)^T per component.

    The matrix inverse exists as a truncated series because det M^(n) has a
    unit constant term.  Returns the pair plus a boundedness report; the
    caller decides what to make of non-measure-like output.
    """
    Dmax = Dmax if Dmax is not None else _default_dmax(l_alpha, l_beta)
    run = run or data.log_run(Dmax, truncated)
    M = run.M(n)
    det = M.det()
    det_inv = det.series_inverse(Dmax)
    q, _, _ = build_Qtilde(data)
    comps_s, comps_f = {}, {}
    for dpow in _pair_components((l_alpha, l_beta)):
        va = _fit(l_alpha.component(dpow), Dmax)
        vb = _fit(l_beta.component(dpow), Dmax)
        qa = va.scale(q[0][0]) + vb.scale(q[0][1])
        qb = va.scale(q[1][0]) + vb.scale(q[1][1])
        # adjugate of M over det
        s = (M.m[1][1] * qa - M.m[0][1] * qb) * det_inv
        f = (M.m[0][0] * qb - M.m[1][0] * qa) * det_inv
        comps_s[dpow] = s
        comps_f[dpow] = f
    sharp = Distribution(data.ctx, comps_s, growth_w=0.0, provenance="decomposed")
    flat = Distribution(data.ctx, comps_f, growth_w=0.0, provenance="decomposed")
    report = {
        "sharp": admissibility_report(sharp, 0.0),
        "flat": admissibility_report(flat, 0.0),
    }
    return sharp, flat, report


def stabilization_diagnostic(l_alpha: Distribution, l_beta: Distribution,
                             data: SplitEigenData, n: int, Dmax: int,
                             h_floor: float = -2.0) -> dict:
    """Flag input pairs that do not decompose to bounded measures.

    Decomposes at n and n-1 and reports (a) the boundedness scan of the level-n
    output and (b) coefficient agreement between the two levels on the low
    window.  A violated scan or h_inf below the floor marks the pair invalid.
    """
    s_n, f_n, rep_n = decompose(l_alpha, l_beta, data, n, Dmax)
    s_p, f_p, _ = decompose(l_alpha, l_beta, data, n - 1, Dmax) if n >= 1 else (s_n, f_n, None)
    window = max(4, Dmax // 4)
    agree = None
    for a, b in ((s_n, s_p), (f_n, f_p)):
        for dpow in a.components:
            diff = a.component(dpow) - b.component(dpow)
            for i in range(min(window, len(diff.coeffs))):
                c = diff.coeffs[i]
                if not c.is_zero:
                    v = c.valuation()
                    agree = v if agree is None else min(agree, v)
    h = []
    for rep in (rep_n["sharp"], rep_n["flat"]):
        if rep["h_inf"] is not None:
            h.append(rep["h_inf"])
    h_inf = min(h) if h else None
    violated = rep_n["sharp"]["violated"] or rep_n["flat"]["violated"]
    bad = violated or (h_inf is not None and h_inf < h_floor)
    return {"valid": not bad, "h_inf": h_inf, "violated": violated,
            "level_agreement_valuation": agree, "h_floor": h_floor}


def interpolation_consistency(l_alpha: Distribution, l_beta: Distribution,
                              data: SplitEigenData, thetas: list[DirichletChar],
                              j_list: list[int] | None = None) -> dict:
    """alpha~^r eval(L_alpha, u^j theta) = beta~^r eval(L_beta, u^j theta).

    The machine-checkable shadow of "the interpolation constant does not
    depend on the chosen stabilization".  Reports, per (theta, j), whether the
    two scalings agree and the margin (valuation of the difference minus
    valuation of the sides).
    """
    j_list = j_list if j_list is not None else list(range(data.k + 1))
    results = []
    ok = True
    for theta in thetas:
        if theta.r < 2:
            raise ValidationError("consistency check needs wild characters (r >= 2)")
        r = theta.r
        a_pow = data.alpha_tilde ** r
        b_pow = data.beta_tilde ** r
        for j in j_list:
            ea = eval_series_at(l_alpha.component(theta.delta_power), j, theta)
            eb = eval_series_at(l_beta.component(theta.delta_power), j, theta)
            lhs = ea.scale(a_pow)
            rhs = eb.scale(b_pow)
            diff = lhs - rhs
            side = lhs.min_valuation()
            dv = diff.min_valuation()
            passed = diff.is_zero
            margin = None
            if not passed and dv is not None and side is not None:
                margin = dv - side
                passed = margin >= 1
            ok = ok and passed
            results.append({"theta": theta.to_json(), "j": j, "pass": passed,
                            "margin": None if diff.is_zero else margin})
    return {"pass": ok, "checks": results}


def _default_dmax(a: Distribution, b: Distribution) -> int:
    best = 0
    for d in (a, b):
        for s in d.components.values():
            best = max(best, s.Dmax)
    return best


def _fit(series: TruncSeries, Dmax: int) -> TruncSeries:
    if series.Dmax == Dmax:
        return series
    if len(series.coeffs) - 1 > Dmax:
        out = TruncSeries(series.ctx, series.coeffs[: Dmax + 1], Dmax, exact=False)
        return out
    return series.with_dmax(Dmax)
