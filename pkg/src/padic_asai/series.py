"""Truncated polynomial/power-series arithmetic over the p-adic coefficient ring.

Everything the patching pipeline needs lives here: the omega and cyclotomic
polynomials in 1+T, twisted substitutions, the group-ring-to-polynomial map,
extended-gcd CRT over the fraction field, and the finite log product.
"""

from __future__ import annotations

from .padics import (
    ContextMismatch,
    PadicElt,
    PrimeCtx,
    PrecisionError,
    ValidationError,
    log_u,
    teichmuller,
)


class TruncationOverflow(ValidationError):
    pass


def _zero(ctx):
    return PadicElt.zero(ctx)


def _as_scalar(ctx, x):
    if isinstance(x, int):
        return PadicElt.from_int(ctx, x)
    return x


class TruncSeries:
    """Coefficient vector in T up to degree Dmax.

    is_exact_poly marks a true polynomial (all higher coefficients are exactly
    zero); otherwise coefficients beyond Dmax are unknown and multiplication
    silently truncates there.
    """

    __slots__ = ("ctx", "coeffs", "Dmax", "is_exact_poly")

    def __init__(self, ctx: PrimeCtx, coeffs: list, Dmax: int, exact: bool = True):
        if len(coeffs) > Dmax + 1:
            raise TruncationOverflow(f"{len(coeffs) - 1} exceeds Dmax={Dmax}")
        self.ctx = ctx
        self.coeffs = coeffs
        self.Dmax = Dmax
        self.is_exact_poly = exact

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(ctx: PrimeCtx, Dmax: int) -> "TruncSeries":
        return TruncSeries(ctx, [], Dmax)

    @staticmethod
    def constant(ctx: PrimeCtx, c, Dmax: int) -> "TruncSeries":
        return TruncSeries(ctx, [_as_scalar(ctx, c)], Dmax)

    @staticmethod
    def from_ints(ctx: PrimeCtx, ints: list[int], Dmax: int) -> "TruncSeries":
        return TruncSeries(ctx, [PadicElt.from_int(ctx, n) for n in ints], Dmax)

    def copy(self) -> "TruncSeries":
        return TruncSeries(self.ctx, list(self.coeffs), self.Dmax, self.is_exact_poly)

    def with_dmax(self, Dmax: int) -> "TruncSeries":
        """Reinterpret with a different cap; only safe to enlarge for exact polys."""
        if Dmax < len(self.coeffs) - 1:
            raise TruncationOverflow("cannot shrink below current degree")
        return TruncSeries(self.ctx, list(self.coeffs), Dmax, self.is_exact_poly)

    # -- degree bookkeeping ----------------------------------------------------

    def coeff(self, i: int):
        if i < len(self.coeffs):
            return self.coeffs[i]
        return _zero(self.ctx)

    def degree(self) -> int:
        """Largest index with a certainly nonzero coefficient; -1 if none."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not getattr(c, "is_zero", False):
                return i
        return -1

    def trimmed(self) -> "TruncSeries":
        d = self.degree()
        return TruncSeries(self.ctx, self.coeffs[: d + 1], self.Dmax, self.is_exact_poly)

    @property
    def is_zero(self) -> bool:
        return self.degree() < 0

    def min_valuation(self):
        vals = [c.valuation() for c in self.coeffs if not c.is_zero]
        vals = [v for v in vals if v is not None]
        return min(vals) if vals else None

    # -- ring operations -------------------------------------------------------

    def _check(self, other: "TruncSeries"):
        if self.ctx is not other.ctx:
            raise ContextMismatch("series over different contexts")

    def __add__(self, other):
        if isinstance(other, (int, PadicElt)):
            other = TruncSeries.constant(self.ctx, other, self.Dmax)
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        out = [self.coeff(i) + other.coeff(i) for i in range(n)]
        dmax = min(self.Dmax, other.Dmax)
        while len(out) > dmax + 1:
            if not getattr(out[-1], "is_zero", False):
                raise TruncationOverflow(
                    f"sum has certain degree {len(out) - 1} beyond Dmax={dmax}")
            out.pop()
        return TruncSeries(self.ctx, out, dmax,
                           self.is_exact_poly and other.is_exact_poly)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.ctx, [-c for c in self.coeffs], self.Dmax, self.is_exact_poly)

    def __sub__(self, other):
        if isinstance(other, (int, PadicElt)):
            other = TruncSeries.constant(self.ctx, other, self.Dmax)
        return self + (-other)

    def scale(self, c) -> "TruncSeries":
        c = _as_scalar(self.ctx, c)
        return TruncSeries(self.ctx, [c * x for x in self.coeffs], self.Dmax, self.is_exact_poly)

    def __mul__(self, other):
        if isinstance(other, (int, PadicElt)):
            return self.scale(other)
        self._check(other)
        Dmax = min(self.Dmax, other.Dmax)
        exact = self.is_exact_poly and other.is_exact_poly
        da, db = self.degree(), other.degree()
        if da < 0 or db < 0:
            return TruncSeries(self.ctx, [], Dmax, exact)
        if exact and da + db > Dmax:
            raise TruncationOverflow(
                f"exact product degree {da + db} exceeds Dmax={Dmax}")
        n = min(da + db, Dmax)
        out = [_zero(self.ctx)] * (n + 1)
        for i in range(da + 1):
            a = self.coeffs[i]
            top = min(db, n - i)
            for j in range(top + 1):
                out[i + j] = out[i + j] + a * other.coeffs[j]
        return TruncSeries(self.ctx, out, Dmax, exact)

    __rmul__ = __mul__

    def eval_scalar(self, x):
        """Horner evaluation at a scalar of the coefficient ring."""
        acc = _zero(self.ctx)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- substitution -----------------------------------------------------------

    def twist_sub(self, j: int) -> "TruncSeries":
        """f(u^(-j)(1+T)-1); degree is preserved for exact polynomials."""
        ctx = self.ctx
        if j == 0:
            return self.copy()
        uj = PadicElt.from_int(ctx, ctx.u) ** (-j)
        lin = TruncSeries(ctx, [uj - 1, uj], self.Dmax)
        acc = TruncSeries.zero(ctx, self.Dmax)
        for c in reversed(self.coeffs):
            acc = acc * lin + c
        acc.is_exact_poly = self.is_exact_poly
        return acc

    # -- division ----------------------------------------------------------------

    def divmod(self, other: "TruncSeries"):
        """Polynomial division; the divisor needs an invertible leading coefficient."""
        self._check(other)
        db = other.degree()
        if db < 0:
            raise ValidationError("division by (certain) zero polynomial")
        lead = other.coeffs[db]
        if lead.valuation() is None:
            raise PrecisionError("divisor leading coefficient uncertain")
        lead_inv = lead.inv()
        rem = list(self.coeffs)
        da = len(rem) - 1
        q = [_zero(self.ctx)] * max(da - db + 1, 0)
        for i in range(da, db - 1, -1):
            # a tracked-zero coefficient still divides through, propagating
            # its O(p^d) uncertainty into the remainder
            factor = rem[i] * lead_inv
            q[i - db] = factor
            for k in range(db + 1):
                rem[i - db + k] = rem[i - db + k] - factor * other.coeffs[k]
        quot = TruncSeries(self.ctx, q, self.Dmax, True)
        remainder = TruncSeries(self.ctx, rem[:db] if db > 0 else [], self.Dmax, True)
        return quot.trimmed(), remainder.trimmed()

    def mod(self, other: "TruncSeries") -> "TruncSeries":
        return self.divmod(other)[1]

    def series_inverse(self, Dmax: int | None = None) -> "TruncSeries":
        """1/f as a truncated series; needs a unit constant term."""
        Dmax = self.Dmax if Dmax is None else Dmax
        c0 = self.coeff(0)
        if c0.valuation() is None:
            raise PrecisionError("constant term uncertain; cannot invert")
        c0i = c0.inv()
        out = [c0i]
        for n in range(1, Dmax + 1):
            s = _zero(self.ctx)
            for i in range(1, min(n, len(self.coeffs) - 1) + 1):
                s = s + self.coeff(i) * out[n - i]
            out.append(-c0i * s)
        return TruncSeries(self.ctx, out, Dmax, exact=False)


# ---------------------------------------------------------------------------
# the standard polynomials
# ---------------------------------------------------------------------------

def one_plus_t_pow(ctx: PrimeCtx, e: int, Dmax: int, truncate: bool = False) -> TruncSeries:
    """(1+T)^e for a nonnegative integer exponent; exact unless truncated."""
    if e > Dmax and not truncate:
        raise TruncationOverflow(f"(1+T)^{e} needs Dmax >= {e}")
    coeffs = []
    c = 1
    for i in range(min(e, Dmax) + 1):
        coeffs.append(PadicElt.from_int(ctx, c))
        c = c * (e - i) // (i + 1)
    return TruncSeries(ctx, coeffs, Dmax, exact=e <= Dmax)


def omega(ctx: PrimeCtx, r: int, Dmax: int) -> TruncSeries:
    """(1+T)^(p^r) - 1."""
    return one_plus_t_pow(ctx, ctx.p ** r, Dmax) - 1


def omega_twisted(ctx: PrimeCtx, r: int, j: int, Dmax: int) -> TruncSeries:
    """omega_r(u^(-j)(1+T)-1) = u^(-j p^r)(1+T)^(p^r) - 1, exact and direct."""
    e = ctx.p ** r
    scaled = one_plus_t_pow(ctx, e, Dmax).scale(PadicElt.from_int(ctx, ctx.u) ** (-j * e))
    return scaled - 1


def phi_n(ctx: PrimeCtx, n: int, Dmax: int) -> TruncSeries:
    """The p^n-th cyclotomic polynomial in 1+T: sum of (1+T)^(l p^(n-1))."""
    if n < 1:
        raise ValidationError("phi_n needs n >= 1")
    acc = TruncSeries.zero(ctx, Dmax)
    step = ctx.p ** (n - 1)
    for l in range(ctx.p):
        acc = acc + one_plus_t_pow(ctx, l * step, Dmax)
    return acc


def phi_twisted(ctx: PrimeCtx, n: int, i: int, Dmax: int, truncate: bool = False) -> TruncSeries:
    """Phi_n(u^(-i)(1+T)-1), assembled directly from (1+T)-powers."""
    acc = TruncSeries.zero(ctx, Dmax)
    step = ctx.p ** (n - 1)
    ui = PadicElt.from_int(ctx, ctx.u)
    for l in range(ctx.p):
        acc = acc + one_plus_t_pow(ctx, l * step, Dmax, truncate).scale(ui ** (-i * l * step))
    return acc


def log_product(ctx: PrimeCtx, k: int, levels: int, Dmax: int, exact: bool = True) -> TruncSeries:
    """prod over 1<=m<=levels, 0<=i<=k of Phi_m(u^(-i)(1+T)-1) / p.

    The finite-level stand-in for the (k+1)-fold log; vanishes at u^i*zeta-1
    for zeta of order p^m in range, and has unit value at T=0.
    """
    acc = TruncSeries.constant(ctx, 1, Dmax)
    acc.is_exact_poly = exact
    pinv = PadicElt.from_int(ctx, ctx.p).inv()
    for m in range(1, levels + 1):
        for i in range(k + 1):
            factor = phi_twisted(ctx, m, i, Dmax, truncate=not exact).scale(pinv)
            if not exact:
                factor.is_exact_poly = False
            acc = acc * factor
    return acc


# ---------------------------------------------------------------------------
# group-ring map and CRT patching
# ---------------------------------------------------------------------------

def group_ring_to_poly(ctx: PrimeCtx, coeffs: dict[int, PadicElt], r: int,
                       delta_power: int, Dmax: int) -> TruncSeries:
    """[t] -> delta(t) (1+T)^log_u(t), summed against the given coefficients.

    Exact polynomial of degree < p^(r-1).  Coefficients are first bucketed by
    log_u(t), then assembled with a single Horner pass in (1+T).
    """
    if r < 1:
        raise ValidationError("group ring map needs level r >= 1")
    deg = ctx.p ** (r - 1)
    if deg - 1 > Dmax:
        raise TruncationOverflow(f"degree p^{r - 1}-1 exceeds Dmax={Dmax}")
    pk = ctx.ppow(ctx.N)
    buckets = [_zero(ctx)] * deg
    for t, c in coeffs.items():
        m = log_u(ctx, t, r)
        dval = pow(teichmuller(ctx, t, ctx.N), delta_power, pk)
        buckets[m] = buckets[m] + c * PadicElt.from_int(ctx, dval)
    # sum_m buckets[m] (1+T)^m via Horner in (1+T)
    acc = TruncSeries.zero(ctx, Dmax)
    one_t = TruncSeries.from_ints(ctx, [1, 1], Dmax)
    for m in range(deg - 1, -1, -1):
        acc = acc * one_t + buckets[m]
    return acc


def poly_ext_half_gcd(f: TruncSeries, g: TruncSeries):
    """Run extended Euclid on (f, g); return (gcd, s) with s*f = gcd mod g.

    Works over the fraction field: remainders with uncertain leading
    coefficients have those trimmed, which is where patching precision loss
    is accounted.
    """
    ctx = f.ctx
    r0, r1 = f.trimmed(), g.trimmed()
    s0 = TruncSeries.constant(ctx, 1, f.Dmax)
    s1 = TruncSeries.zero(ctx, f.Dmax)
    while r1.degree() >= 0:
        q, rem = r0.divmod(r1)
        r0, r1 = r1, rem.trimmed()
        s0, s1 = s1, (s0 - q * s1).trimmed()
    return r0, s0


def invert_mod(f: TruncSeries, modulus: TruncSeries) -> TruncSeries:
    """Inverse of f modulo a coprime modulus polynomial."""
    g, s = poly_ext_half_gcd(f, modulus)
    if g.degree() != 0:
        raise ValidationError("polynomials are not coprime at working precision")
    return (s.scale(g.coeffs[0].inv())).mod(modulus)


def crt_patch(residues: list[TruncSeries], moduli: list[TruncSeries]) -> TruncSeries:
    """The unique polynomial of degree < sum(deg moduli) matching every residue.

    Incremental CRT with extended-gcd inverses over the fraction field;
    raises when two moduli fail to be coprime (impossible for twisted omegas
    with distinct twists, so it signals corrupted input).
    """
    if len(residues) != len(moduli):
        raise ValidationError("residues and moduli differ in length")
    if not residues:
        raise ValidationError("empty CRT system")
    q = residues[0].mod(moduli[0])
    big = moduli[0]
    for res, m in zip(residues[1:], moduli[1:]):
        diff = (res - q).mod(m)
        corr = (diff * invert_mod(big.mod(m), m)).mod(m)
        q = q + big * corr
        big = big * m
    return q.trimmed()
