"""Finite-level construction of the 2x2 logarithmic matrix and its checks.

Fix A = [[a, 1], [-v p^(k+1), 0]], the companion matrix of X^2 - a X + v p^(k+1),
and for each level m the matrix

    C_m = [[a L_m, L_m], [-v p^(k+1), 0]],
    L_m = prod_{i=0..k} Phi_m(u^(-i)(1+T)-1) / p^(k+1).

The finite-level logarithmic matrix is M^(n) = A^(-n) C_n C_(n-1) ... C_1.
This realization carries the checkable structure exactly:

  * det M^(n) equals the (k+1)-fold log product, as an identity of finite
    products (det C_m = v * prod_i Phi_m(u^(-i)(1+T)-1));
  * at a point T0 = u^i zeta - 1 with zeta of order p^m <= p^n, the column
    space of M^(n)(T0) collapses onto A^(-m) e2, which is what makes the
    second row of A^n M^(n') divisible by the level-(n-1) modulus and the
    eigenvalue-consistency of decompositions hold;
  * rows of Q^(-1) M^(n) split the growth between the two eigenvalues.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .padics import PadicElt, PrimeCtx, ValidationError, hensel_roots
from .series import TruncSeries, log_product, phi_twisted


def slope_condition(ctx: PrimeCtx, a: PadicElt, k: int) -> None:
    if a.is_zero:
        raise ValidationError("a indistinguishable from zero")
    if a.valuation() <= k // (ctx.p - 1):
        raise ValidationError(
            f"v(a)={a.valuation()} must exceed floor(k/(p-1))={k // (ctx.p - 1)}")


class MatrixOfSeries:
    """Plain 2x2 matrix with TruncSeries entries."""

    def __init__(self, entries):
        self.m = entries

    @staticmethod
    def constant(ctx: PrimeCtx, rows, Dmax: int) -> "MatrixOfSeries":
        return MatrixOfSeries(
            [[TruncSeries.constant(ctx, x, Dmax) for x in row] for row in rows])

    @staticmethod
    def identity(ctx: PrimeCtx, Dmax: int) -> "MatrixOfSeries":
        one = PadicElt.from_int(ctx, 1)
        zero = PadicElt.zero(ctx)
        return MatrixOfSeries.constant(ctx, [[one, zero], [zero, one]], Dmax)

    def __mul__(self, other: "MatrixOfSeries") -> "MatrixOfSeries":
        a, b = self.m, other.m
        return MatrixOfSeries([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])

    def det(self) -> TruncSeries:
        a = self.m
        if all(e.is_exact_poly for row in self.m for e in row):
            # entry products need twice the entry degree before cancellation
            big = 2 * max(len(e.coeffs) for row in self.m for e in row)
            a = [[e.with_dmax(max(big, e.Dmax)) for e in row] for row in self.m]
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]

    def apply(self, vec):
        a = self.m
        return (a[0][0] * vec[0] + a[0][1] * vec[1],
                a[1][0] * vec[0] + a[1][1] * vec[1])

    def row_combination(self, coeffs):
        """coeffs[0]*row0 + coeffs[1]*row1, entrywise (scalar coefficients)."""
        a = self.m
        return (a[0][0].scale(coeffs[0]) + a[1][0].scale(coeffs[1]),
                a[0][1].scale(coeffs[0]) + a[1][1].scale(coeffs[1]))


class LogMatrixRun:
    """Eigendata (a, v, k) plus cached level matrices and partial products.

    In exact mode every entry is a true polynomial and overflowing Dmax is an
    error; truncated mode trades exactness for a bounded working degree (used
    by the decomposition, where only an initial coefficient window matters).
    """

    def __init__(self, ctx: PrimeCtx, a: PadicElt, v: PadicElt, k: int, Dmax: int,
                 truncated: bool = False):
        slope_condition(ctx, a, k)
        if v.is_zero or v.valuation() != 0:
            raise ValidationError("v must be a unit")
        self.ctx = ctx
        self.a = a
        self.v = v
        self.k = k
        self.Dmax = Dmax
        self.truncated = truncated
        self.det_A = v * PadicElt.from_int(ctx, ctx.p) ** (k + 1)
        self._C: dict[int, MatrixOfSeries] = {}
        self._M: dict[int, MatrixOfSeries] = {}
        self._lam: dict[int, TruncSeries] = {}

    # -- building blocks --------------------------------------------------------

    def A(self) -> MatrixOfSeries:
        ctx = self.ctx
        return MatrixOfSeries.constant(
            ctx, [[self.a, PadicElt.from_int(ctx, 1)], [-self.det_A, PadicElt.zero(ctx)]],
            self.Dmax)

    def A_inv(self) -> MatrixOfSeries:
        ctx = self.ctx
        di = self.det_A.inv()
        return MatrixOfSeries.constant(
            ctx, [[PadicElt.zero(ctx), -di], [PadicElt.from_int(ctx, 1), self.a * di]],
            self.Dmax)

    def A_pow(self, n: int) -> MatrixOfSeries:
        out = MatrixOfSeries.identity(self.ctx, self.Dmax)
        base = self.A() if n >= 0 else self.A_inv()
        for _ in range(abs(n)):
            out = out * base
        return out

    def lam(self, m: int) -> TruncSeries:
        """prod_i Phi_m(u^(-i)(1+T)-1) / p^(k+1)."""
        if m not in self._lam:
            acc = TruncSeries.constant(self.ctx, 1, self.Dmax)
            acc.is_exact_poly = not self.truncated
            for i in range(self.k + 1):
                factor = phi_twisted(self.ctx, m, i, self.Dmax, truncate=self.truncated)
                if self.truncated:
                    factor.is_exact_poly = False
                acc = acc * factor
            self._lam[m] = acc.scale(PadicElt.from_int(self.ctx, self.ctx.p) ** (-(self.k + 1)))
        return self._lam[m]

    def C(self, m: int) -> MatrixOfSeries:
        if m not in self._C:
            lam = self.lam(m)
            one = TruncSeries.constant(self.ctx, 1, self.Dmax)
            self._C[m] = MatrixOfSeries([
                [lam.scale(self.a), lam],
                [one.scale(-self.det_A), TruncSeries.zero(self.ctx, self.Dmax)],
            ])
        return self._C[m]

    def M(self, n: int) -> MatrixOfSeries:
        """A^(-n) C_n C_(n-1) ... C_1, truncated at Dmax."""
        if not self.truncated:
            budget = (self.k + 1) * (self.ctx.p ** n - 1)
            if budget > self.Dmax:
                raise ValidationError(
                    f"exact entries at level n={n} need Dmax >= {budget}, have {self.Dmax}")
        if n not in self._M:
            if n == 0:
                self._M[0] = MatrixOfSeries.identity(self.ctx, self.Dmax)
            else:
                prev = self.M(n - 1)
                # M^(n) = (A^(-n) C_n A^(n-1)) M^(n-1), computed left-to-right
                self._M[n] = self.A_pow(-n) * self.C(n) * self.A_pow(n - 1) * prev
        return self._M[n]

    def eigenvalues(self):
        """Roots of X^2 - aX + det(A); either base-ring pair or quadratic."""
        return hensel_roots(self.a, self.det_A)


# ---------------------------------------------------------------------------
# property checks
# ---------------------------------------------------------------------------

def check_det_identity(run: LogMatrixRun, n: int) -> dict:
    """det M^(n) must equal the log product, exactly, coefficient by coefficient."""
    got = run.M(n).det()
    want = log_product(run.ctx, run.k, n, run.Dmax)
    diff = got - want
    ok = diff.is_zero
    return {"pass": ok, "max_bad_valuation": None if ok else diff.min_valuation(),
            "det_constant_term_valuation": got.coeff(0).valuation()}


def divisibility_modulus(run: LogMatrixRun, n: int) -> TruncSeries:
    acc = TruncSeries.constant(run.ctx, 1, run.Dmax)
    for i in range(run.k + 1):
        acc = acc * phi_twisted(run.ctx, n - 1, i, run.Dmax)
    return acc


def check_divisibility(run: LogMatrixRun, n: int, n_prime: int) -> dict:
    """Second row of A^n M^(n') modulo prod_i Phi_(n-1)(u^(-i)(1+T)-1).

    Exact for k=0; for k >= 1 the twisted tail factors contribute remainders
    whose valuations sit well above zero and grow as the level deepens.
    """
    if n < 2 or n_prime < n:
        raise ValidationError("need 2 <= n <= n'")
    left = run.A_pow(n) * run.M(n_prime)
    modulus = divisibility_modulus(run, n)
    vals = []
    for col in range(2):
        rem = left.m[1][col].mod(modulus)
        vals.append(rem.min_valuation())
    finite = [v for v in vals if v is not None]
    return {"remainder_valuations": vals,
            "min_valuation": min(finite) if finite else None,
            "exact": all(v is None for v in vals)}


def check_growth_split(run: LogMatrixRun, n: int, levels: list[int] | None = None) -> dict:
    """Eigen-row evaluation slopes at cyclotomic points.

    For the row (ev, 1) with ev an eigenvalue of A, the valuation of the row
    of M^(n) evaluated at zeta of order p^m decays like m * v(ev) plus a
    common drift shared by both rows; the difference of the two rows' slopes
    isolates v(beta) - v(alpha).
    """
    from .cyclo import DirichletChar
    from .cyclo import eval_series_at
    alpha, beta, ext = run.eigenvalues()
    levels = levels or list(range(1, n + 1))
    M = run.M(n)

    def row_vals(ev):
        vals = []
        for m in levels:
            theta = DirichletChar(run.ctx, m + 1, 0, 1)
            best = None
            for col in range(2):
                comb = M.m[0][col].scale(ev) + M.m[1][col]
                e = eval_series_at(comb, 0, theta)
                v = e.min_valuation()
                if v is not None:
                    best = v if best is None else min(best, v)
            vals.append(best)
        return vals

    va = row_vals(alpha)
    vb = row_vals(beta)

    def slopes(vs):
        return [Fraction(a - b) for a, b in zip(vs, vs[1:]) if a is not None and b is not None]

    target_alpha = alpha.valuation()
    target_beta = beta.valuation()
    sa, sb = slopes(va), slopes(vb)
    split = [y - x for x, y in zip(sa, sb)]
    return {
        "alpha_row_values": va, "beta_row_values": vb,
        "alpha_slopes": sa, "beta_slopes": sb,
        "slope_split": split,
        "target_split": target_beta - target_alpha,
        "v_alpha": target_alpha, "v_beta": target_beta,
    }


def check_convergence(run: LogMatrixRun, n: int) -> dict:
    """Per-coefficient distance between consecutive partial products."""
    a = run.M(n)
    b = run.M(n - 1) if n >= 1 else None
    if b is None:
        return {"floors": []}
    floors = []
    for row in range(2):
        for col in range(2):
            diff = a.m[row][col] - b.m[row][col]
            floors.append(diff.min_valuation())
    return {"floors": floors}


def check_properties(run: LogMatrixRun, n: int, n_prime: int) -> dict:
    """All quotable checks in one report."""
    report = {
        "det": check_det_identity(run, n_prime),
        "divisibility": check_divisibility(run, n, n_prime) if n >= 2 else {"skipped": True},
        "growth": check_growth_split(run, n_prime),
        "convergence": check_convergence(run, n_prime),
    }
    ok = report["det"]["pass"]
    report["pass"] = ok
    return report
