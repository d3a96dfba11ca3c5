"""JSON codecs for every wire object: p-adic scalars, series, eigendata,
towers, measures, distributions.

All flat JSON, digits spelled out in base p: auditability of exact values
beats compactness at desk scale.
"""

from __future__ import annotations

from .measures import Distribution, FiniteMeasure
from .padics import PadicElt, PrimeCtx, ValidationError
from .series import TruncSeries
from .towers import EigenData, Tower


def ctx_to_json(ctx: PrimeCtx) -> dict:
    return {"p": ctx.p, "precision": ctx.N, "u": ctx.u}


def ctx_from_json(data: dict) -> PrimeCtx:
    try:
        return PrimeCtx(int(data["p"]), int(data.get("precision", 24)),
                        int(data["u"]) if "u" in data and data["u"] is not None else None)
    except KeyError as exc:
        raise ValidationError(f"context JSON missing field {exc}") from exc


def elt_to_json(x: PadicElt) -> str:
    return x.to_string()


def elt_from_json(ctx: PrimeCtx, s: str) -> PadicElt:
    return PadicElt.from_string(ctx, s)


def series_to_json(s: TruncSeries) -> dict:
    return {"Dmax": s.Dmax, "coeffs": [c.to_string() for c in s.coeffs],
            "exact": s.is_exact_poly}


def series_from_json(ctx: PrimeCtx, data: dict) -> TruncSeries:
    coeffs = [PadicElt.from_string(ctx, c) for c in data["coeffs"]]
    return TruncSeries(ctx, coeffs, int(data["Dmax"]), bool(data.get("exact", True)))


def eigen_to_json(e: EigenData) -> dict:
    return {
        **ctx_to_json(e.ctx),
        "k": e.k,
        "a_p": e.a_p.to_string(),
        "sqrt_disc": e.sqrt_disc.to_string(),
        "nebentypus_on_c": e.nebentypus_on_c.to_string(),
        "c": e.c,
    }


def eigen_from_json(data: dict) -> EigenData:
    ctx = ctx_from_json(data)
    return EigenData(
        ctx,
        int(data["k"]),
        PadicElt.from_string(ctx, data["a_p"]),
        sqrt_disc=PadicElt.from_string(ctx, data["sqrt_disc"]) if data.get("sqrt_disc") else None,
        nebentypus_on_c=PadicElt.from_string(ctx, data["nebentypus_on_c"])
        if data.get("nebentypus_on_c") else None,
        c=int(data.get("c", 7)),
    )


def measure_to_json(mu: FiniteMeasure) -> dict:
    return {"masses": [[z, w.to_string()] for z, w in mu.masses]}


def measure_from_json(ctx: PrimeCtx, data: dict) -> FiniteMeasure:
    return FiniteMeasure(ctx, [(int(z), PadicElt.from_string(ctx, w))
                               for z, w in data["masses"]])


def tower_to_json(t: Tower, seed: int | None = None) -> dict:
    out = {
        "eigen": eigen_to_json(t.eigen),
        "R": t.R,
        "values": [{"j": j, "r": r, "t": u, "v": x.to_string()}
                   for (j, r, u), x in sorted(t.values.items())],
        "x0": {str(j): x.to_string() for j, x in t.x0.items()} if t.x0 is not None else None,
    }
    if seed is not None:
        out["seed"] = seed
    return out


def tower_from_json(data: dict) -> Tower:
    eigen = eigen_from_json(data["eigen"])
    ctx = eigen.ctx
    values = {(int(v["j"]), int(v["r"]), int(v["t"])): PadicElt.from_string(ctx, v["v"])
              for v in data["values"]}
    x0 = None
    if data.get("x0") is not None:
        x0 = {int(j): PadicElt.from_string(ctx, s) for j, s in data["x0"].items()}
    return Tower(eigen, int(data["R"]), values, x0)


def distribution_to_json(d: Distribution) -> dict:
    return {
        **ctx_to_json(d.ctx),
        "w": d.growth_w,
        "provenance": d.provenance,
        "components": {str(k): series_to_json(s) for k, s in sorted(d.components.items())},
    }


def distribution_from_json(data: dict) -> Distribution:
    ctx = ctx_from_json(data)
    comps = {int(k): series_from_json(ctx, s) for k, s in data["components"].items()}
    return Distribution(ctx, comps, float(data.get("w", 0.0)),
                        data.get("provenance", "oracle"))
