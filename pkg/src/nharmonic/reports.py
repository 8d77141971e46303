"""Report builders shared by the CLI and the HTTP service.

Reports are plain dicts with a fixed key order and a top-level
``schema: 1`` marker.  ``dumps_canonical`` renders them as byte-stable
JSON: floats are printed with 17 significant digits and non-finite values
serialize as the strings "inf", "-inf" and "nan".  The same conventions
apply to the CSV emitters (one header line, comma separator, LF endings).
"""

from __future__ import annotations

import json
import math
from typing import Any, Iterable

import numpy as np

from . import energy as en
from . import lagrangian as lg
from . import nitsche as ni
from .bvp import RadialMap, fit_annuli
from .errors import DomainError
from .functionals import Functional
from .geometry import Annulus, Modulus, modulus
from .principal import PrincipalKind, characteristic, principal_strain

DEFAULT_TABLE_MODULI = (0.5, 1.0, 2.0, 4.0, 8.0)


# ---------------------------------------------------------------------------
# canonical serialization


def _float_repr(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps_canonical(obj: Any) -> str:
    """Deterministic JSON: fixed field order, 17-significant-digit floats."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float_repr(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        parts = (f"{json.dumps(k)}: {dumps_canonical(v)}" for k, v in obj.items())
        return "{" + ", ".join(parts) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps_canonical(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _csv_cell(x: Any) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(x)


def dumps_csv(header: Iterable[str], rows: Iterable[Iterable[Any]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_csv_cell(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def jsonable(obj: Any) -> Any:
    """Recursively replace non-finite floats by their string forms."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# fragment serializers


def annulus_dict(a: Annulus) -> dict:
    return {"inner": a.inner, "outer": a.outer}


def modulus_dict(m: Modulus) -> dict:
    return {"value": m.value, "log_ratio": m.log_ratio}


def map_dict(map_obj) -> dict:
    if isinstance(map_obj, RadialMap):
        out = {
            "type": "radial",
            "kind": map_obj.kind.value,
            "lambda": map_obj.lam,
            "k": map_obj.k,
            "domain": annulus_dict(map_obj.domain),
        }
        if map_obj.hammer_zone is not None:
            out["hammer_to"] = map_obj.hammer_to
            out["hammer_zone"] = annulus_dict(map_obj.hammer_zone)
        return out
    if isinstance(map_obj, en.ConformalSpec):
        return {
            "type": "conformal",
            "scale": map_obj.scale,
            "inverted": map_obj.inverted,
        }
    raise TypeError(f"unknown map object {type(map_obj)!r}")


def energy_dict(report: en.EnergyReport) -> dict:
    return {
        "value": report.value,
        "functional": report.functional.value,
        "formula_id": report.formula_id,
        "quad_error": report.quad_error,
        "moduli": {
            "source": modulus_dict(report.moduli[0]),
            "image": modulus_dict(report.moduli[1]),
        },
    }


def witness_dict(w: lg.NonRadialWitness | None) -> dict | None:
    if w is None:
        return None
    return {
        "functional": w.functional.value,
        "lambda": w.lam,
        "witness_energy": w.witness_energy,
        "radial_infimum": w.radial_infimum,
        "gap": w.gap,
        "conclusive": w.conclusive,
    }


def _header(verb: str, n: int) -> dict:
    return {"schema": 1, "verb": verb, "dimension": n}


# ---------------------------------------------------------------------------
# verb reports


def classify_report(n: int, source: Annulus, target: Annulus) -> dict:
    cls = ni.classify(source, target, n)
    lower = ni.lower_nitsche(cls.mod_source, n)
    upper = ni.upper_nitsche(cls.mod_source, n)
    out = _header("classify", n)
    out.update(
        {
            "source": annulus_dict(source),
            "target": annulus_dict(target),
            "regime": cls.regime.value,
            "alpha_ratio": cls.alpha_ratio,
            "mod_source": modulus_dict(cls.mod_source),
            "mod_target": modulus_dict(cls.mod_target),
            "lower_bound": lower.value,
            "upper_bound": upper.value,
        }
    )
    return out


def minimize_report(
    n: int,
    source: Annulus,
    target: Annulus,
    rtol: float = en.DEFAULT_RTOL,
    atol: float = en.DEFAULT_ATOL,
) -> dict:
    plan = en.minimal_energy(source, target, n, rtol=rtol, atol=atol)
    out = _header("minimize", n)
    out.update(
        {
            "source": annulus_dict(source),
            "target": annulus_dict(target),
            "regime": plan.regime.value,
            "status": plan.status.value,
            "map": map_dict(plan.map),
            "planar": (
                {"omega": plan.planar.omega, "rescale": plan.planar.rescale}
                if plan.planar is not None
                else None
            ),
            "energy": energy_dict(plan.energy),
            "witness": witness_dict(plan.witness),
        }
    )
    return out


def _named_map(
    name: str, n: int, source: Annulus, target: Annulus, rtol: float, atol: float
):
    if name == "minimizer":
        plan = en.minimal_energy(source, target, n, rtol=rtol, atol=atol)
        return plan.map if isinstance(plan.map, RadialMap) else None, plan
    if name == "fit":
        rm, _ = fit_annuli(source, target, n)
        return rm, None
    if name == "power":
        return en.power_stretch_for(source, target, n), None
    raise DomainError(f"unknown map name {name!r}")


def energy_verb_report(
    n: int,
    source: Annulus,
    target: Annulus,
    map_name: str,
    functional: Functional,
    rtol: float = en.DEFAULT_RTOL,
    atol: float = en.DEFAULT_ATOL,
) -> dict:
    map_obj, plan = _named_map(map_name, n, source, target, rtol, atol)
    if plan is not None and (
        map_obj is None or functional is Functional.CONFORMAL
    ):
        # report the plan's own energy so that minimize -> energy round-trips
        report = plan.energy
        map_json = map_dict(plan.map)
    else:
        report = en.radial_energy(map_obj, n, functional, rtol=rtol, atol=atol)
        map_json = (
            map_dict(map_obj)
            if isinstance(map_obj, RadialMap)
            else {"type": "power-stretch", "domain": annulus_dict(map_obj.domain)}
        )
    out = _header("energy", n)
    out.update(
        {
            "source": annulus_dict(source),
            "target": annulus_dict(target),
            "map_name": map_name,
            "map": map_json,
            "energy": energy_dict(report),
        }
    )
    return out


PROFILE_HEADER = ("t", "H", "Hdot", "eta", "characteristic_residual")


def profile_rows(
    n: int,
    kind: str,
    start: float,
    stop: float,
    steps: int,
    source: Annulus | None = None,
    target: Annulus | None = None,
) -> list[tuple[float, float, float, float, float]]:
    """Sample rows (t, H, Hdot, eta, characteristic residual), ascending in t."""
    if steps < 1:
        raise DomainError("steps must be >= 1")
    if not 0 < start <= stop:
        raise DomainError("need 0 < from <= to")
    ts = [start] if steps == 1 else list(np.geomspace(start, stop, steps))

    if kind == "minimizer":
        if source is None or target is None:
            raise DomainError("minimizer profile needs --source and --target")
        plan = en.minimal_energy(source, target, n)
        if isinstance(plan.map, en.ConformalSpec):
            scale = plan.map.scale
            rows = []
            for t in ts:
                sample = principal_strain(PrincipalKind.IDENTITY, float(t), n)
                rows.append(
                    (
                        float(t),
                        scale * sample.H,
                        scale * sample.Hdot,
                        sample.eta,
                        characteristic(sample, n),
                    )
                )
            return rows
        rm = plan.map
        expected = rm.char_constant(n)
        rows = []
        for t in ts:
            zone = rm.hammer_zone
            if zone is not None and t < rm.domain.inner:
                H, Hdot, eta = rm.hammer_to, 0.0, 0.0
                lch = H**n  # constant strain: L[H] = H^n
                rows.append((float(t), H, Hdot, eta, lch - expected))
            else:
                s = rm.strain(float(t), n)
                rows.append(
                    (float(t), s.H, s.Hdot, s.eta, characteristic(s, n) - expected)
                )
        return rows

    try:
        pk = PrincipalKind(kind)
    except ValueError as exc:
        raise DomainError(f"unknown profile kind {kind!r}") from exc
    expected = {
        PrincipalKind.IDENTITY: 0.0,
        PrincipalKind.INVERSION: 0.0,
        PrincipalKind.PLUS: 1.0,
        PrincipalKind.MINUS: -1.0,
    }[pk]
    rows = []
    for t in ts:
        s = principal_strain(pk, float(t), n)
        rows.append((float(t), s.H, s.Hdot, s.eta, characteristic(s, n) - expected))
    return rows


def profile_report(
    n: int,
    kind: str,
    start: float,
    stop: float,
    steps: int,
    source: Annulus | None = None,
    target: Annulus | None = None,
) -> dict:
    rows = profile_rows(n, kind, start, stop, steps, source, target)
    out = _header("profile", n)
    out.update(
        {
            "kind": kind,
            "rows": [dict(zip(PROFILE_HEADER, row)) for row in rows],
        }
    )
    return out


NITSCHE_HEADER = ("mod", "lower", "upper")


def nitsche_rows(n: int, moduli: Iterable[float]) -> list[tuple[float, float, float]]:
    rows = []
    for m in moduli:
        if m < 0:
            raise DomainError("moduli must be nonnegative")
        mod = Modulus.from_value(float(m), n)
        rows.append(
            (
                float(m),
                ni.lower_nitsche(mod, n).value,
                ni.upper_nitsche(mod, n).value,
            )
        )
    return rows


def nitsche_table_report(n: int, moduli: Iterable[float] | None = None) -> dict:
    consts = ni.nitsche_constants(n)
    rows = nitsche_rows(n, DEFAULT_TABLE_MODULI if moduli is None else moduli)
    out = _header("nitsche-table", n)
    out.update(
        {
            "alpha_n": consts.alpha_n,
            "gamma_n": consts.gamma_n,
            "delta_n": consts.delta_n,
            "rows": [dict(zip(NITSCHE_HEADER, row)) for row in rows],
        }
    )
    return out


def verify_report(n: int, source: Annulus, target: Annulus) -> dict:
    rm, _ = fit_annuli(source, target, n)
    ids = lg.verify_free_lagrangians(rm, source, target, n)
    margins = lg.free_lagrangian_estimates(rm, source, target, n)
    res_e, res_f = en.distortion_integral_check(rm, n)
    out = _header("verify", n)
    out.update(
        {
            "source": annulus_dict(source),
            "target": annulus_dict(target),
            "map": map_dict(rm),
            "identities": {
                "jacobian_volume": ids[0],
                "target_modulus": ids[1],
                "source_modulus": ids[2],
            },
            "estimate_margins": {
                "normal_tangential": margins[0],
                "normal": margins[1],
                "tangential": margins[2],
            },
            "distortion_residuals": {
                "conformal_identity": res_e,
                "weighted_identity": res_f,
            },
        }
    )
    return out


def counterexample_report(
    n: int, source: Annulus, target: Annulus, functional: Functional
) -> dict:
    witness = lg.nonradial_witness(source, target, n, functional)
    out = _header("counterexample", n)
    out.update(
        {
            "source": annulus_dict(source),
            "target": annulus_dict(target),
            "witness": witness_dict(witness),
        }
    )
    return out


def qc_report(
    n: int, source: Annulus, target: Annulus, k_outer: float, k_inner: float
) -> dict:
    check = en.qc_bounds(source, target, n, k_outer, k_inner)
    alpha = modulus(target, n).value / modulus(source, n).value
    ko, ki = en.power_stretch_dilatations(alpha, n)
    out = _header("qc", n)
    out.update(
        {
            "source": annulus_dict(source),
            "target": annulus_dict(target),
            "k_outer": k_outer,
            "k_inner": k_inner,
            "ratio_power": check.ratio_power,
            "lower_ok": check.lower_ok,
            "upper_ok": check.upper_ok,
            "lower_margin": check.lower_margin,
            "upper_margin": check.upper_margin,
            "power_stretching_dilatations": {"k_outer": ko, "k_inner": ki},
        }
    )
    return out
