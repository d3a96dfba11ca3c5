"""Bounded-precision p-adic arithmetic with exact valuation tracking.

Elements are stored as p^d * unit with the unit part kept modulo p^prec,
so every value carries the number of base-p digits that are actually
guaranteed.  Zero produced by cancellation is kept as a "tracked zero"
O(p^d): we know the value vanishes modulo p^d and nothing more.
"""

from __future__ import annotations

from fractions import Fraction
import math


class PadicError(Exception):
    """Base class for arithmetic failures in this package."""


class ValidationError(PadicError):
    """Bad input data (CLI/service exit code 2)."""


class PrecisionError(PadicError):
    """All retained digits are uncertain (CLI/service exit code 3)."""


class ContextMismatch(ValidationError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class PrimeCtx:
    """Odd prime p, topological generator u of 1+pZp, working precision N digits."""

    def __init__(self, p: int, precision: int = 24, u: int | None = None):
        if not _is_prime(p) or p < 3:
            raise ValidationError(f"p must be an odd prime, got {p}")
        if precision < 1:
            raise ValidationError("precision must be >= 1")
        self.p = p
        self.N = precision
        self.u = (1 + p) if u is None else u
        if self.u % p != 1 or self.u % (p * p) == 1:
            raise ValidationError(f"u={self.u} is not a topological generator of 1+{p}Zp")
        self._ppow = [p ** i for i in range(precision + 1)]
        self._teich: dict[int, dict[int, int]] = {}
        self._logu: dict[int, dict[int, int]] = {}
        self._uinv = pow(self.u, -1, self._ppow[precision])

    def ppow(self, i: int) -> int:
        if i <= self.N:
            return self._ppow[i]
        return self.p ** i

    def __repr__(self):
        return f"PrimeCtx(p={self.p}, N={self.N}, u={self.u})"

    # -- Teichmueller and discrete-log tables ------------------------------

    def teich_table(self, r: int) -> dict[int, int]:
        """t -> the (p-1)-th root of unity congruent to t, modulo p^r."""
        if r not in self._teich:
            pr = self.ppow(r)
            tab = {}
            for t in range(1, min(self.p, pr + 1)):
                x = t
                for _ in range(r + 1):
                    x = pow(x, self.p, pr)
                tab[t] = x
            self._teich[r] = tab
        return self._teich[r]

    def logu_table(self, r: int) -> dict[int, int]:
        """u^m mod p^r -> m, for 0 <= m < p^(r-1)."""
        if r not in self._logu:
            pr = self.ppow(r)
            tab = {}
            x = 1
            for m in range(self.p ** (r - 1)):
                tab[x] = m
                x = (x * self.u) % pr
            self._logu[r] = tab
        return self._logu[r]


class PadicElt:
    """p^d * unit + O(p^(d+prec)); unit == 0 encodes the tracked zero O(p^d)."""

    __slots__ = ("ctx", "d", "unit", "prec")

    def __init__(self, ctx: PrimeCtx, d: int, unit: int, prec: int):
        self.ctx = ctx
        self.d = d
        self.unit = unit
        self.prec = prec

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(ctx: PrimeCtx, abs_prec: int | None = None) -> "PadicElt":
        return PadicElt(ctx, ctx.N if abs_prec is None else abs_prec, 0, 0)

    @staticmethod
    def from_int(ctx: PrimeCtx, n: int, prec: int | None = None) -> "PadicElt":
        prec = ctx.N if prec is None else prec
        if n == 0:
            return PadicElt(ctx, prec, 0, 0)
        p = ctx.p
        d = 0
        while n % p == 0:
            n //= p
            d += 1
        return PadicElt(ctx, d, n % ctx.ppow(prec), prec)

    @staticmethod
    def from_rational(ctx: PrimeCtx, q: Fraction | int, prec: int | None = None) -> "PadicElt":
        if isinstance(q, int):
            return PadicElt.from_int(ctx, q, prec)
        prec = ctx.N if prec is None else prec
        num, den = q.numerator, q.denominator
        if num == 0:
            return PadicElt(ctx, prec, 0, 0)
        p = ctx.p
        d = 0
        while num % p == 0:
            num //= p
            d += 1
        while den % p == 0:
            den //= p
            d -= 1
        pk = ctx.ppow(prec)
        return PadicElt(ctx, d, num * pow(den, -1, pk) % pk, prec)

    # -- basic queries -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def abs_prec(self) -> int:
        """Exponent A such that the value is known modulo p^A."""
        return self.d if self.unit == 0 else self.d + self.prec

    def valuation(self):
        """v_p; None for a tracked zero (only the bound v >= d is known)."""
        return None if self.unit == 0 else self.d

    def valuation_floor(self) -> int:
        """A lower bound for v_p that is valid for zero and nonzero alike."""
        return self.d

    def is_unit(self) -> bool:
        return self.unit != 0 and self.d == 0

    def digits(self) -> list[int]:
        out, u, p = [], self.unit, self.ctx.p
        for _ in range(self.prec):
            u, rdig = divmod(u, p)
            out.append(rdig)
        return out

    def lift(self) -> Fraction:
        """The canonical rational lift p^d * unit."""
        if self.unit == 0:
            return Fraction(0)
        if self.d >= 0:
            return Fraction(self.unit * self.ctx.ppow(self.d))
        return Fraction(self.unit, self.ctx.ppow(-self.d))

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "PadicElt"):
        if self.ctx is not other.ctx:
            raise ContextMismatch("operands built on different PrimeCtx")

    def __add__(self, other):
        if isinstance(other, int):
            other = PadicElt.from_int(self.ctx, other)
        if not isinstance(other, PadicElt):
            return NotImplemented
        self._check(other)
        ctx = self.ctx
        if self.unit == 0 and other.unit == 0:
            return PadicElt(ctx, min(self.d, other.d), 0, 0)
        if self.unit == 0 or other.unit == 0:
            z, x = (self, other) if self.unit == 0 else (other, self)
            bound = min(z.d, x.d + x.prec)
            if x.d >= bound:
                return PadicElt(ctx, bound, 0, 0)
            pk = ctx.ppow(bound - x.d)
            return PadicElt(ctx, x.d, x.unit % pk, bound - x.d)
        bound = min(self.d + self.prec, other.d + other.prec)
        d0 = min(self.d, other.d)
        if bound <= d0:
            return PadicElt(ctx, bound, 0, 0)
        pk = ctx.ppow(bound - d0)
        s = (self.unit * ctx.ppow(self.d - d0) + other.unit * ctx.ppow(other.d - d0)) % pk
        if s == 0:
            return PadicElt(ctx, bound, 0, 0)
        p = ctx.p
        v = 0
        while s % p == 0:
            s //= p
            v += 1
        return PadicElt(ctx, d0 + v, s % ctx.ppow(bound - d0 - v), bound - d0 - v)

    __radd__ = __add__

    def __neg__(self):
        if self.unit == 0:
            return self
        pk = self.ctx.ppow(self.prec)
        return PadicElt(self.ctx, self.d, (-self.unit) % pk, self.prec)

    def __sub__(self, other):
        if isinstance(other, int):
            other = PadicElt.from_int(self.ctx, other)
        if not isinstance(other, PadicElt):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = PadicElt.from_int(self.ctx, other)
        if isinstance(other, QuadElt):
            return other * self
        if not isinstance(other, PadicElt):
            return NotImplemented
        self._check(other)
        ctx = self.ctx
        if self.unit == 0 or other.unit == 0:
            return PadicElt(ctx, self.d + other.d, 0, 0)
        prec = min(self.prec, other.prec)
        return PadicElt(ctx, self.d + other.d, (self.unit * other.unit) % ctx.ppow(prec), prec)

    __rmul__ = __mul__

    def inv(self) -> "PadicElt":
        if self.unit == 0:
            raise PrecisionError("cannot invert a tracked zero O(p^%d)" % self.d)
        pk = self.ctx.ppow(self.prec)
        return PadicElt(self.ctx, -self.d, pow(self.unit, -1, pk), self.prec)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = PadicElt.from_int(self.ctx, other)
        return self * other.inv()

    def __pow__(self, e: int):
        if e == 0:
            return PadicElt.from_int(self.ctx, 1, self.prec if self.unit else self.ctx.N)
        if e < 0:
            return self.inv() ** (-e)
        if self.unit == 0:
            return PadicElt(self.ctx, self.d * e, 0, 0)
        pk = self.ctx.ppow(self.prec)
        return PadicElt(self.ctx, self.d * e, pow(self.unit, e, pk), self.prec)

    # -- comparisons ---------------------------------------------------------

    def eq_prec(self, other: "PadicElt") -> bool:
        """True when self - other has no certain nonzero digit."""
        if isinstance(other, int):
            other = PadicElt.from_int(self.ctx, other)
        return (self - other).unit == 0

    def __repr__(self):
        if self.unit == 0:
            return f"O({self.ctx.p}^{self.d})"
        return f"{self.ctx.p}^{self.d}*{self.unit}(+O^{self.prec})"

    # -- serialization -------------------------------------------------------

    def to_string(self) -> str:
        digs = ",".join(str(x) for x in self.digits())
        return f"{self.ctx.p}^{self.d} * [{digs}]"

    @staticmethod
    def from_string(ctx: PrimeCtx, s: str) -> "PadicElt":
        s = s.replace(" ", "")
        try:
            head, digs = s.split("*")
            base, d = head.split("^")
            if int(base) != ctx.p:
                raise ValidationError(f"element written in base {base}, context has p={ctx.p}")
            digits = [int(x) for x in digs.strip("[]").split(",")] if digs != "[]" else []
        except ValidationError:
            raise
        except Exception as exc:
            raise ValidationError(f"bad p-adic literal {s!r}") from exc
        if not digits or all(x == 0 for x in digits):
            return PadicElt(ctx, int(d), 0, 0)
        unit = 0
        for dig in reversed(digits):
            unit = unit * ctx.p + dig
        prec = min(len(digits), ctx.N)
        return PadicElt(ctx, int(d), unit % ctx.ppow(prec), prec)


# ---------------------------------------------------------------------------
# quadratic extensions E[X]/(X^2 - aX + c)
# ---------------------------------------------------------------------------

class QuadExt:
    """The quadratic ring E[X]/(X^2 - aX + c); X plays the role of a chosen root."""

    def __init__(self, a: PadicElt, c: PadicElt):
        if a.ctx is not c.ctx:
            raise ContextMismatch("defining coefficients over different contexts")
        self.ctx = a.ctx
        self.a = a
        self.c = c

    def gen(self) -> "QuadElt":
        one = PadicElt.from_int(self.ctx, 1)
        return QuadElt(self, PadicElt.zero(self.ctx), one)

    def embed(self, x: PadicElt) -> "QuadElt":
        return QuadElt(self, x, PadicElt.zero(self.ctx))


class QuadElt:
    """c0 + c1*X in a QuadExt; valuation is half the valuation of the norm."""

    __slots__ = ("ext", "c0", "c1")

    def __init__(self, ext: QuadExt, c0: PadicElt, c1: PadicElt):
        self.ext = ext
        self.c0 = c0
        self.c1 = c1

    @property
    def ctx(self):
        return self.ext.ctx

    @property
    def is_zero(self):
        return self.c0.is_zero and self.c1.is_zero

    def _coerce(self, other):
        if isinstance(other, QuadElt):
            if other.ext is not self.ext:
                if not (other.ext.a.eq_prec(self.ext.a) and other.ext.c.eq_prec(self.ext.c)):
                    raise ContextMismatch("elements of different quadratic extensions")
            return other
        if isinstance(other, int):
            other = PadicElt.from_int(self.ctx, other)
        if isinstance(other, PadicElt):
            return self.ext.embed(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElt(self.ext, self.c0 + o.c0, self.c1 + o.c1)

    __radd__ = __add__

    def __neg__(self):
        return QuadElt(self.ext, -self.c0, -self.c1)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, c = self.ext.a, self.ext.c
        x0, x1, y0, y1 = self.c0, self.c1, o.c0, o.c1
        cross = x1 * y1
        return QuadElt(self.ext, x0 * y0 - c * cross, x0 * y1 + x1 * y0 + a * cross)

    __rmul__ = __mul__

    def conj(self) -> "QuadElt":
        return QuadElt(self.ext, self.c0 + self.ext.a * self.c1, -self.c1)

    def norm(self) -> PadicElt:
        a, c = self.ext.a, self.ext.c
        return self.c0 * self.c0 + a * self.c0 * self.c1 + c * self.c1 * self.c1

    def inv(self) -> "QuadElt":
        n = self.norm()
        if n.is_zero:
            raise PrecisionError("norm indistinguishable from zero")
        ninv = n.inv()
        co = self.conj()
        return QuadElt(self.ext, co.c0 * ninv, co.c1 * ninv)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = self.ext.embed(PadicElt.from_int(self.ctx, 1))
        b = self
        while e:
            if e & 1:
                out = out * b
            b = b * b
            e >>= 1
        return out

    def valuation(self):
        """Half-integer valuation via the norm form, as a Fraction."""
        n = self.norm()
        if n.is_zero:
            return None
        return Fraction(n.valuation(), 2)

    def eq_prec(self, other) -> bool:
        o = self._coerce(other)
        diff = self - o
        return diff.c0.is_zero and diff.c1.is_zero

    def __repr__(self):
        return f"({self.c0!r}) + ({self.c1!r})*X"


# ---------------------------------------------------------------------------
# Teichmueller lifts, discrete logs, p-adic logarithm
# ---------------------------------------------------------------------------

def teichmuller(ctx: PrimeCtx, t: int, r: int) -> int:
    """The (p-1)-th root of unity congruent to t mod p, taken modulo p^r."""
    if math.gcd(t, ctx.p) != 1:
        raise ValidationError(f"t={t} is not a unit mod {ctx.p}")
    if r > ctx.N:
        raise ValidationError(f"level r={r} exceeds context precision {ctx.N}")
    return ctx.teich_table(r)[t % ctx.p]


def log_u(ctx: PrimeCtx, t: int, r: int) -> int:
    """The unique 0 <= m < p^(r-1) with u^m = t/teich(t) mod p^r."""
    p, pr = ctx.p, ctx.ppow(r)
    if math.gcd(t, p) != 1:
        raise ValidationError(f"t={t} is not a unit mod {p}")
    one_part = t * pow(teichmuller(ctx, t, r), -1, pr) % pr
    return ctx.logu_table(r)[one_part]


def padic_log_1unit(x: PadicElt) -> PadicElt:
    """log of x in 1+pZp via the usual series."""
    ctx = x.ctx
    t = x - 1
    if not t.is_zero and t.d < 1:
        raise ValidationError("p-adic log needs an argument in 1+pZp")
    acc = PadicElt.zero(ctx, ctx.N)
    if t.is_zero:
        return acc
    # v(t^n / n) >= n - log_p(n): run until past working precision
    nmax = ctx.N + 2
    while nmax - math.floor(math.log(nmax, ctx.p)) < ctx.N + 1:
        nmax += 1
    power = t
    sign = 1
    for n in range(1, nmax + 1):
        term = power / PadicElt.from_int(ctx, n)
        acc = acc + (term if sign > 0 else -term)
        power = power * t
        sign = -sign
    return acc


def u_exponent(ctx: PrimeCtx, z: int) -> PadicElt:
    """lambda in Zp with <z> := z/teich(z) = u^lambda, via log ratios."""
    if math.gcd(z, ctx.p) != 1:
        raise ValidationError(f"z={z} is not a p-adic unit")
    pr = ctx.ppow(ctx.N)
    one_part = z * pow(teichmuller(ctx, z, ctx.N), -1, pr) % pr
    num = padic_log_1unit(PadicElt.from_int(ctx, one_part))
    den = padic_log_1unit(PadicElt.from_int(ctx, ctx.u))
    if num.is_zero:
        return num
    return num / den


def unit_one_part(ctx: PrimeCtx, z: int) -> PadicElt:
    """<z> = z / teich(z) as an element of 1+pZp at full working precision."""
    pr = ctx.ppow(ctx.N)
    return PadicElt.from_int(ctx, z * pow(teichmuller(ctx, z, ctx.N), -1, pr) % pr)


# ---------------------------------------------------------------------------
# quadratic root finding: Newton polygon screening + Hensel lifting
# ---------------------------------------------------------------------------

def hensel_roots(a: PadicElt, c: PadicElt):
    """Roots of X^2 - aX + c.

    Distinct Newton-polygon slopes (2*v(a) < v(c)) give both roots in the base
    ring by Newton iteration.  Equal slopes either split after rescaling (even
    valuation, square discriminant) or return the pair (X, a-X) in the
    quadratic quotient ring.  An exactly repeated root is rejected.
    """
    ctx = a.ctx
    if c.is_zero:
        raise ValidationError("constant term is indistinguishable from zero")
    vc = c.valuation()
    va = a.valuation() if not a.is_zero else None

    if va is not None and 2 * va < vc:
        alpha = _newton_root(a, c, start=a)
        beta = a - alpha
        return alpha, beta, None

    # equal-slope region: rescale when v(c) is even and test the discriminant
    if vc % 2 == 0:
        half = vc // 2
        scale = PadicElt.from_int(ctx, 1) * PadicElt(ctx, half, 1, ctx.N)
        a1 = a / scale
        c1 = c / (scale * scale)
        disc = a1 * a1 - 4 * c1
        if disc.is_zero:
            raise ValidationError("repeated root: the two eigenvalues coincide")
        if disc.valuation() % 2 == 0:
            red = pow(disc.unit, (ctx.p - 1) // 2, ctx.p)
            if red == 1:
                y = _unit_sqrt(disc)
                two_inv = PadicElt.from_int(ctx, 2).inv()
                alpha = (a1 + y) * two_inv * scale
                beta = a - alpha
                return alpha, beta, None
    disc_full = a * a - 4 * c
    if disc_full.is_zero:
        raise ValidationError("repeated root: the two eigenvalues coincide")
    ext = QuadExt(a, c)
    alpha = ext.gen()
    beta = ext.embed(a) - alpha
    return alpha, beta, ext


def _newton_root(a: PadicElt, c: PadicElt, start: PadicElt) -> PadicElt:
    # v(f(a)) = v(c) > 2v(a) = 2v(f'(a)), so x=a is always a valid seed here
    ctx = a.ctx
    x = start
    fx = x * x - a * x + c
    guard = 0
    while not fx.is_zero:
        deriv = 2 * x - a
        if deriv.is_zero:
            raise PrecisionError("Newton derivative vanished at working precision")
        x = x - fx / deriv
        fx = x * x - a * x + c
        guard += 1
        if guard > 4 * ctx.N + 8:
            raise PrecisionError("Newton iteration failed to converge")
    return x


def _unit_sqrt(x: PadicElt) -> PadicElt:
    """Square root of p^(2m) * unit with unit a QR mod p."""
    ctx = x.ctx
    v = x.valuation()
    assert v % 2 == 0
    u0 = x.unit % ctx.p
    r0 = None
    for y in range(1, ctx.p):
        if (y * y) % ctx.p == u0:
            r0 = y
            break
    if r0 is None:
        raise ValidationError("not a square: unit part is a non-residue")
    y = PadicElt.from_int(ctx, r0)
    target = PadicElt(ctx, 0, x.unit, x.prec)
    fy = y * y - target
    guard = 0
    while not fy.is_zero:
        y = y - fy / (2 * y)
        fy = y * y - target
        guard += 1
        if guard > 4 * ctx.N + 8:
            raise PrecisionError("square-root lifting failed to converge")
    return y * PadicElt(ctx, v // 2, 1, ctx.N)
