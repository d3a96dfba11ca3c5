"""Cyclotomic quotient rings and finite-order characters of p-power conductor.

A character of conductor p^r factors through Delta x Z/p^(r-1): the Delta part
is a power of the Teichmueller character with values in the base ring, and the
wild part takes values among p^(r-1)-th roots of unity.  Evaluations therefore
happen in the ring generated by a root of unity of order p^(r-1).
"""

from __future__ import annotations

import math

from .padics import (
    PadicElt,
    PrimeCtx,
    ValidationError,
    log_u,
    teichmuller,
)


class CycloRing:
    """O[zeta] with zeta of exact order p^level; level 0 is the base ring."""

    def __init__(self, ctx: PrimeCtx, level: int):
        if level < 0:
            raise ValidationError("level must be >= 0")
        self.ctx = ctx
        self.level = level
        self.dim = 1 if level == 0 else (ctx.p - 1) * ctx.p ** (level - 1)

    def zero(self) -> "CycloElt":
        z = PadicElt.zero(self.ctx)
        return CycloElt(self, [z] * self.dim)

    def from_scalar(self, x) -> "CycloElt":
        vec = [x] + [PadicElt.zero(self.ctx) for _ in range(self.dim - 1)]
        return CycloElt(self, vec)

    def zeta_pow(self, e: int) -> "CycloElt":
        """zeta^e as a ring element (reduced mod the cyclotomic polynomial)."""
        one = PadicElt.from_int(self.ctx, 1)
        zero = PadicElt.zero(self.ctx)
        if self.level == 0:
            return CycloElt(self, [one])
        vec = [zero] * self.dim
        p, lvl = self.ctx.p, self.level
        e %= p ** lvl
        if e < self.dim:
            vec[e] = one
        else:
            # X^((p-1)p^(l-1)+s) = -sum_{l'<p-1} X^(l'p^(l-1)+s)
            s = e - self.dim
            for i in range(p - 1):
                vec[s + i * p ** (lvl - 1)] = -one
        return CycloElt(self, vec)

    def __eq__(self, other):
        return isinstance(other, CycloRing) and self.ctx is other.ctx and self.level == other.level

    def __hash__(self):
        return hash((id(self.ctx), self.level))

    def __repr__(self):
        return f"CycloRing(p={self.ctx.p}, level={self.level})"


class CycloElt:
    """Coefficient vector of length dim over the base ring (or an extension)."""

    __slots__ = ("ring", "vec")

    def __init__(self, ring: CycloRing, vec: list):
        if len(vec) != ring.dim:
            raise ValidationError("coefficient vector has wrong length")
        self.ring = ring
        self.vec = vec

    def _promote(self, other):
        if isinstance(other, CycloElt):
            return other if other.ring == self.ring else None
        if isinstance(other, int):
            other = PadicElt.from_int(self.ring.ctx, other)
        # any scalar of the coefficient ring (PadicElt or a quadratic element)
        return self.ring.from_scalar(other)

    def __add__(self, other):
        other = self._promote(other)
        if other is None:
            return NotImplemented
        return CycloElt(self.ring, [a + b for a, b in zip(self.vec, other.vec)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElt(self.ring, [-a for a in self.vec])

    def __sub__(self, other):
        other = self._promote(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "CycloElt":
        return CycloElt(self.ring, [c * a for a in self.vec])

    def mul_zeta_pow(self, e: int) -> "CycloElt":
        """Multiply by zeta^e; exponent arithmetic plus one sparse reduction."""
        ring = self.ring
        if ring.level == 0:
            return self
        p, lvl, dim = ring.ctx.p, ring.level, ring.dim
        pm = p ** lvl
        e %= pm
        if e == 0:
            return self
        raw: list = [None] * (dim + e)
        zero = PadicElt.zero(ring.ctx)
        for i in range(e):
            raw[i] = zero
        for i, c in enumerate(self.vec):
            raw[i + e] = c
        return CycloElt(ring, _reduce(ring, raw))

    def __mul__(self, other):
        if isinstance(other, (int, PadicElt)):
            return self.scale(other if isinstance(other, PadicElt)
                              else PadicElt.from_int(self.ring.ctx, other))
        if not isinstance(other, CycloElt) or other.ring != self.ring:
            return NotImplemented
        ring = self.ring
        raw = [PadicElt.zero(ring.ctx)] * (2 * ring.dim - 1)
        for i, a in enumerate(self.vec):
            if isinstance(a, PadicElt) and a.is_zero:
                continue
            for j, b in enumerate(other.vec):
                raw[i + j] = raw[i + j] + a * b
        return CycloElt(ring, _reduce(ring, raw))

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return all(getattr(a, "is_zero", False) for a in self.vec)

    def eq_prec(self, other) -> bool:
        diff = self - other
        return diff.is_zero

    def min_valuation(self):
        """min coordinate valuation; None when every coordinate is a tracked zero."""
        vals = [a.valuation() for a in self.vec if not a.is_zero]
        vals = [v for v in vals if v is not None]
        return min(vals) if vals else None

    def __repr__(self):
        return f"CycloElt(level={self.ring.level}, {self.vec!r})"


def _reduce(ring: CycloRing, raw: list) -> list:
    """Reduce a raw coefficient list mod X^(p^l)=1 then mod the cyclotomic poly."""
    p, lvl, dim = ring.ctx.p, ring.level, ring.dim
    pm = p ** lvl
    folded = [PadicElt.zero(ring.ctx)] * pm
    for e, c in enumerate(raw):
        if c is None:
            continue
        folded[e % pm] = folded[e % pm] + c
    out = folded[:dim]
    step = p ** (lvl - 1)
    for e in range(dim, pm):
        c = folded[e]
        if isinstance(c, PadicElt) and c.is_zero:
            continue
        s = e - dim
        for i in range(p - 1):
            out[s + i * step] = out[s + i * step] - c
    return out


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

class DirichletChar:
    """Character of (Z/p^r)^x split as (Teichmueller power, wild zeta exponent).

    theta(t) = teich(t)^delta_power * zeta^(wild_exp * log_u(t)) with zeta of
    order p^(r-1).  r=0 encodes the trivial character.
    """

    def __init__(self, ctx: PrimeCtx, r: int, delta_power: int = 0, wild_exp: int = 0):
        if r < 0:
            raise ValidationError("conductor exponent must be >= 0")
        self.ctx = ctx
        self.r = r
        self.delta_power = delta_power % (ctx.p - 1)
        if r <= 1:
            self.wild_exp = 0
        else:
            if wild_exp % ctx.p == 0:
                raise ValidationError(
                    f"wild_exp={wild_exp} has no exact conductor p^{r}: must be prime to p")
            self.wild_exp = wild_exp % ctx.p ** (r - 1)
        if r == 1 and self.delta_power == 0:
            raise ValidationError("conductor p with trivial Delta part is the trivial character (use r=0)")
        if r == 0:
            self.delta_power = 0

    @property
    def wild_level(self) -> int:
        return max(self.r - 1, 0)

    @property
    def is_trivial(self) -> bool:
        return self.r == 0

    def ring(self) -> CycloRing:
        return CycloRing(self.ctx, self.wild_level)

    def delta_value(self, t: int) -> PadicElt:
        val = teichmuller(self.ctx, t, self.ctx.N)
        return PadicElt.from_int(self.ctx, pow(val, self.delta_power, self.ctx.ppow(self.ctx.N)))

    def value(self, t: int) -> CycloElt:
        if math.gcd(t, self.ctx.p) != 1:
            raise ValidationError(f"t={t} is not a unit")
        ring = self.ring()
        level = max(self.r, 1)
        wild = ring.zeta_pow(self.wild_exp * log_u(self.ctx, t, level)) if self.r >= 2 else \
            ring.from_scalar(PadicElt.from_int(self.ctx, 1))
        return wild.scale(self.delta_value(t))

    def value_table(self) -> dict[int, CycloElt]:
        pr = self.ctx.p ** max(self.r, 1)
        return {t: self.value(t) for t in range(1, pr) if t % self.ctx.p != 0}

    def to_json(self) -> dict:
        return {"p": self.ctx.p, "r": self.r,
                "delta_power": self.delta_power, "wild_exp": self.wild_exp}

    @staticmethod
    def from_json(ctx: PrimeCtx, data: dict) -> "DirichletChar":
        if data.get("p", ctx.p) != ctx.p:
            raise ValidationError("character prime does not match context")
        return DirichletChar(ctx, int(data["r"]),
                             int(data.get("delta_power", 0)), int(data.get("wild_exp", 0)))


def char_sum(values: dict[int, PadicElt], theta: DirichletChar) -> CycloElt:
    """sum over units t of values[t] * theta(t), in theta's cyclotomic ring."""
    ring = theta.ring()
    acc = ring.zero()
    for t, x in values.items():
        acc = acc + theta.value(t).scale(x)
    return acc


def eval_series_at(series, j: int, theta: DirichletChar) -> CycloElt:
    """Evaluate a truncated series at T = u^j * zeta - 1.

    zeta is theta's wild root of unity (zeta=1 for wild-trivial characters).
    Exact polynomials evaluate exactly.  For a declared truncation the caller
    owns the tail bound: with integral coefficients the dropped tail has
    valuation > Dmax / phi(p^wild_level), so choosing
    Dmax >= N * phi(p^wild_level) pushes it past working precision.
    """
    if not series.is_exact_poly and series.Dmax < series.ctx.N:
        raise ValidationError(
            "truncation too short to evaluate: tail would sit inside working precision")
    ctx = series.ctx
    ring = theta.ring()
    uj = PadicElt.from_int(ctx, ctx.u) ** j
    acc = ring.zero()
    for c in reversed(series.coeffs):
        # acc <- acc * (u^j zeta - 1) + c
        acc = acc.mul_zeta_pow(theta.wild_exp if theta.r >= 2 else 0).scale(uj) - acc + c
    return acc
