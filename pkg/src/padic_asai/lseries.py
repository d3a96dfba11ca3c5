"""Formal Euler-factor algebra and truncated Dirichlet series, over exact rationals.

The local factor at a rational prime is a polynomial in X = (prime)^(-s) whose
shape depends on the splitting type; series are coefficient tables n -> c(n)
truncated at X_max.  Everything here is exact Fraction arithmetic: these are
identity checks, not analytic evaluations.
"""

from __future__ import annotations

from fractions import Fraction

from .padics import ValidationError


class LocalFactor:
    """1/P(X) is the local series; P has constant term 1 and degree <= 4."""

    def __init__(self, prime: int, coeffs: list[Fraction], tag: str):
        if not coeffs or coeffs[0] != 1:
            raise ValidationError("local factor must have constant term 1")
        if len(coeffs) > 5:
            raise ValidationError("local factor degree exceeds 4")
        self.prime = prime
        self.coeffs = [Fraction(c) for c in coeffs]
        self.tag = tag

    def degree(self) -> int:
        d = 0
        for i, c in enumerate(self.coeffs):
            if c != 0:
                d = i
        return d

    def inverse_power_coeffs(self, mmax: int) -> list[Fraction]:
        """c(prime^m) for 0 <= m <= mmax from the linear recurrence of 1/P."""
        out = [Fraction(1)]
        for m in range(1, mmax + 1):
            acc = Fraction(0)
            for i in range(1, min(m, len(self.coeffs) - 1) + 1):
                acc -= self.coeffs[i] * out[m - i]
            out.append(acc)
        return out


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def asai_local_factor(tag: str, prime: int, roots: dict) -> LocalFactor:
    """The reciprocal local factor for the three splitting types.

    split:    (1-aa'X)(1-ab'X)(1-ba'X)(1-bb'X) for root pairs (a,b), (a',b');
    inert:    (1-aX)(1-p^2 X^2)(1-bX);
    ramified: (1-a^2X)(1-pX)(1-b^2X).
    The inert middle factor is quadratic in X by the (-2s+2) exponent.
    """
    p = prime
    if tag == "split":
        a1, b1 = Fraction(roots["alpha_p"]), Fraction(roots["beta_p"])
        a2, b2 = Fraction(roots["alpha_pbar"]), Fraction(roots["beta_pbar"])
        weight = roots.get("norm")
        if weight is not None:
            if a1 * b1 != Fraction(weight) or a2 * b2 != Fraction(weight):
                raise ValidationError("root pairs do not multiply to the stated norm")
        poly = [Fraction(1)]
        for rho in (a1 * a2, a1 * b2, b1 * a2, b1 * b2):
            poly = _poly_mul(poly, [Fraction(1), -rho])
    elif tag == "inert":
        a, b = Fraction(roots["alpha_p"]), Fraction(roots["beta_p"])
        poly = _poly_mul([Fraction(1), -a], [Fraction(1), -b])
        poly = _poly_mul(poly, [Fraction(1), Fraction(0), -Fraction(p * p)])
    elif tag == "ramified":
        a, b = Fraction(roots["alpha_p"]), Fraction(roots["beta_p"])
        poly = _poly_mul([Fraction(1), -a * a], [Fraction(1), -b * b])
        poly = _poly_mul(poly, [Fraction(1), -Fraction(p)])
    else:
        raise ValidationError(f"unknown splitting tag {tag!r}")
    return LocalFactor(p, poly, tag)


class FormalDirichletSeries:
    """Truncated coefficient table n -> c(n), n <= xmax."""

    def __init__(self, xmax: int, coeffs: dict[int, Fraction] | None = None):
        if xmax < 1:
            raise ValidationError("xmax must be >= 1")
        self.xmax = xmax
        self.coeffs = {1: Fraction(1)} if coeffs is None else dict(coeffs)

    def c(self, n: int) -> Fraction:
        return self.coeffs.get(n, Fraction(0))

    @staticmethod
    def from_local_factors(factors: list[LocalFactor], xmax: int) -> "FormalDirichletSeries":
        """Multiplicative table from prime-power coefficients of each 1/P."""
        series = FormalDirichletSeries(xmax)
        for f in factors:
            series = series.multiply_euler(f)
        return series

    def multiply_euler(self, factor: LocalFactor) -> "FormalDirichletSeries":
        p = factor.prime
        mmax = 0
        q = p
        while q <= self.xmax:
            mmax += 1
            q *= p
        pw = factor.inverse_power_coeffs(mmax)
        out: dict[int, Fraction] = {}
        for n, cn in self.coeffs.items():
            q = 1
            for m in range(mmax + 1):
                if n * q > self.xmax:
                    break
                out[n * q] = out.get(n * q, Fraction(0)) + cn * pw[m]
                q *= p
        return FormalDirichletSeries(self.xmax, out)

    def multiply_geometric(self, prime: int, rho: Fraction) -> "FormalDirichletSeries":
        """Multiply by 1/(1 - rho X_p) = sum rho^m at p-power indices."""
        factor = LocalFactor(prime, [Fraction(1), -Fraction(rho)], "geom")
        return self.multiply_euler(factor)

    def drop_p_part(self, prime: int) -> "FormalDirichletSeries":
        return FormalDirichletSeries(
            self.xmax, {n: c for n, c in self.coeffs.items() if n % prime != 0})

    def twist(self, table: dict[int, Fraction], modulus: int) -> "FormalDirichletSeries":
        """Coefficientwise twist by a periodic table (zero off its support)."""
        out = {}
        for n, c in self.coeffs.items():
            val = table.get(n % modulus, Fraction(0))
            if val:
                out[n] = c * val
        return FormalDirichletSeries(self.xmax, out)

    def agrees_with(self, other: "FormalDirichletSeries", upto: int | None = None) -> bool:
        upto = upto if upto is not None else min(self.xmax, other.xmax)
        return all(self.c(n) == other.c(n) for n in range(1, upto + 1))


def euler_vs_table_check(factors: list[LocalFactor], xmax: int) -> dict:
    """Expand the product two ways and compare: recurrence vs direct convolution."""
    via_recurrence = FormalDirichletSeries.from_local_factors(factors, xmax)
    # direct: multiply the power-series expansions of each 1/P as plain polys in X,
    # then scatter prime powers multiplicatively
    direct = FormalDirichletSeries(xmax)
    for f in factors:
        mmax = 0
        q = f.prime
        while q <= xmax:
            mmax += 1
            q *= f.prime
        # brute-force: invert P by long division of 1 by P(X) to X^mmax
        inv = [Fraction(1)]
        for m in range(1, mmax + 1):
            acc = Fraction(0)
            for i in range(1, min(m, len(f.coeffs) - 1) + 1):
                acc -= f.coeffs[i] * inv[m - i]
            inv.append(acc)
        table = {}
        q = 1
        for m in range(mmax + 1):
            table[q] = inv[m]
            q *= f.prime
        scattered = {}
        for n, c in direct.coeffs.items():
            for q, v in table.items():
                if n * q <= xmax:
                    scattered[n * q] = scattered.get(n * q, Fraction(0)) + c * v
        direct = FormalDirichletSeries(xmax, scattered)
    ok = via_recurrence.agrees_with(direct)
    return {"pass": ok, "xmax": xmax}


def stabilization_identity_check(alpha: Fraction, factors_prime_to_p: list[LocalFactor],
                                 p: int, xmax: int,
                                 theta_table: dict[int, Fraction] | None = None,
                                 theta_modulus: int | None = None) -> dict:
    """The two stabilization identities as truncated-series equalities.

    (a) the stabilized series equals the p-deprived series times the geometric
        series of alpha at p-powers;
    (b) twisting by a character supported away from p kills the p-part on both
        sides, so the twisted series agree.
    """
    alpha = Fraction(alpha)
    base = FormalDirichletSeries.from_local_factors(factors_prime_to_p, xmax)
    stabilized = base.multiply_geometric(p, alpha)
    deprived = stabilized.drop_p_part(p)
    rebuilt = deprived.multiply_geometric(p, alpha)
    identity_a = stabilized.agrees_with(rebuilt)

    identity_b = True
    if theta_table is not None and theta_modulus is not None:
        if theta_modulus % p != 0:
            raise ValidationError("twist table must have modulus divisible by p")
        lhs = stabilized.twist(theta_table, theta_modulus)
        rhs = deprived.twist(theta_table, theta_modulus)
        identity_b = lhs.agrees_with(rhs)
    return {"pass": identity_a and identity_b,
            "geometric_identity": identity_a, "twist_identity": identity_b,
            "xmax": xmax}
