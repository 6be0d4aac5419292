"""Parameter-sweep engine with deterministic CSV/JSON export.

A sweep is described by a SweepSpec: a registered target operation, fixed
parameter values, one swept variable and a selection of output columns.
Specs can be written as small INI files (sections [sweep], [fixed],
[variable], [outputs]); the bundled presets reproduce the standard figures
and headline numbers in one command each.

Rows are evaluated independently; a row whose evaluation raises is kept,
flagged in the ``flag`` column and filled with NaN, preserving grid
alignment.  Numeric text output carries 12 significant digits so repeated
runs diff byte-identically.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

import numpy as np

from . import effective_mass, gate_stark, single_donor, two_donor
from .constants import PAPER, PhysicalConstants, donor_params

__version__ = "0.1.0"


class SpecError(ValueError):
    """Sweep specification does not validate."""


@dataclass(frozen=True)
class VariableSpec:
    name: str
    start: float
    stop: float
    points: int
    spacing: str = "linear"


@dataclass(frozen=True)
class SweepSpec:
    target: str
    variable: VariableSpec
    fixed: dict = field(default_factory=dict)
    outputs: tuple[str, ...] = ()


@dataclass(frozen=True)
class SweepTarget:
    """A sweepable operation: parameter defaults plus a row evaluator that
    maps a full parameter dict to named float outputs."""

    name: str
    params: dict
    outputs: tuple[str, ...]
    fn: Callable[[dict, PhysicalConstants], dict]


def _row_breit_rabi(p, constants):
    donor = donor_params(p["donor"])
    if p.get("X") is not None:
        b = single_donor.field_from_x(p["X"], donor, constants)
    else:
        b = p["B"]
    lv = single_donor.breit_rabi_levels(b, donor, constants)
    return {
        "B": b, "X": lv.x,
        "E_1_p1": lv.energy(1, 1), "E_1_0": lv.energy(1, 0),
        "E_1_m1": lv.energy(1, -1), "E_0_0": lv.energy(0, 0),
    }


def _row_nu_a(p, constants):
    donor = donor_params(p["donor"])
    return {
        "nu_A": single_donor.nuclear_resonance_frequency(p["B"], donor, constants),
        "nu_A_asymptotic": single_donor.nuclear_resonance_frequency(
            p["B"], donor, constants, variant="asymptotic"),
    }


def _row_sublattice(p, constants):
    plus, minus = single_donor.sublattice_frequencies(
        p["B"], donor_params(p["donor"]), constants)
    return {"nu_A_plus": plus, "nu_A_minus": minus}


def _row_stark(p, constants):
    geom = gate_stark.GateGeometry(a_nm=p["a_nm"], c_nm=p["c_nm"],
                                   v_gate=p["V"], v_flat_band=p["V_FB"])
    nu_a = single_donor.nuclear_resonance_frequency(
        p["B"], donor_params(p["donor"]), constants)
    e_c = gate_stark.field_at_donor(geom, voltage=geom.effective_voltage).e_c_v_per_cm
    return {
        "E_c": e_c,
        "dA_over_A": gate_stark.stark_fraction(e_c, warn=False),
        "dnu_A": gate_stark.resonance_detuning(geom, nu_a, warn=False),
    }


def _row_exchange(p, constants):
    model = effective_mass.ExchangeModel(a_t_nm=p["a_t_nm"], eps_s=p["eps_s"],
                                         constants=constants)
    return {
        "J_mhz": effective_mass.exchange_coupling(p["l_nm"], model, warn=False),
        "asymptote_ok": float(effective_mass.exchange_asymptote_valid(p["l_nm"], model)),
    }


def _row_crossing(p, constants):
    model = effective_mass.ExchangeModel(a_t_nm=p["a_t_nm"], eps_s=p["eps_s"],
                                         constants=constants)
    l_star = effective_mass.crossing_distance(p["B"], model)
    j_star = effective_mass.exchange_coupling(l_star, model, warn=False)
    target = constants.electron_zeeman_mhz(p["B"])
    return {"l_star_nm": l_star, "residual": abs(j_star - target) / target}


def _row_unperturbed(p, constants):
    lv = two_donor.unperturbed_levels(p["B"], p["J"], constants)
    return {"E0_0_0": lv[(0, 0)], "E0_1_m1": lv[(1, -1)],
            "E0_1_0": lv[(1, 0)], "E0_1_p1": lv[(1, 1)]}


def _row_two_donor_eigs(p, constants):
    cfg = two_donor.TwoDonorConfig(B=p["B"], J=p["J"], A_a=p["A"], A_b=p["A"],
                                   g_n=p["g_n"])
    eig = two_donor.closed_form_eigs(cfg, constants)
    return {
        "E_s_plus": eig.e_s_plus, "E_s_minus": eig.e_s_minus,
        "E_a_plus": eig.e_a_plus, "E_a_minus": eig.e_a_minus,
        "antisym_gap": eig.e_a_plus - eig.e_a_minus,
    }


def _row_nu_j(p, constants):
    cfg = two_donor.TwoDonorConfig(B=p["B"], J=p["J"], A_a=p["A"], A_b=p["A"],
                                   g_n=p["g_n"])
    out = {"nu_J": two_donor.nu_J(cfg, constants)}
    ze = constants.electron_zeeman_mhz(p["B"])
    out["nu_J_weak"] = (two_donor.nu_J(cfg, constants, variant="weak")
                        if p["J"] < ze else math.nan)
    out["nu_J_strong"] = two_donor.nu_J(cfg, constants, variant="strong")
    return out


def _row_gate_potential(p, constants):
    geom = gate_stark.GateGeometry(a_nm=p["a_nm"], c_nm=p["c_nm"], v_gate=p["V"])
    return {"phi": gate_stark.gate_potential(p["rho_nm"], p["z_nm"], geom)}


def _row_field_at_donor(p, constants):
    geom = gate_stark.GateGeometry(a_nm=p["a_nm"], c_nm=p["c_nm"], v_gate=p["V"])
    f = gate_stark.field_at_donor(geom)
    return {"phi": f.phi_v, "E_c": f.e_c_v_per_cm, "E_c_prime": f.e_c_prime_v_per_cm2}


TARGETS = {
    t.name: t for t in (
        SweepTarget("breit_rabi_levels",
                    {"B": 2.0, "X": None, "donor": "P31-in-Si"},
                    ("B", "X", "E_1_p1", "E_1_0", "E_1_m1", "E_0_0"),
                    _row_breit_rabi),
        SweepTarget("nu_A", {"B": 2.0, "donor": "P31-in-Si"},
                    ("nu_A", "nu_A_asymptotic"), _row_nu_a),
        SweepTarget("sublattice", {"B": 2.0, "donor": "P31-in-Si"},
                    ("nu_A_plus", "nu_A_minus"), _row_sublattice),
        SweepTarget("stark",
                    {"V": 0.0, "V_FB": 0.0, "a_nm": 5.0, "c_nm": 10.0,
                     "B": 2.0, "donor": "P31-in-Si"},
                    ("E_c", "dA_over_A", "dnu_A"), _row_stark),
        SweepTarget("exchange", {"l_nm": 15.0, "a_t_nm": 3.0, "eps_s": 11.9},
                    ("J_mhz", "asymptote_ok"), _row_exchange),
        SweepTarget("crossing", {"B": 2.0, "a_t_nm": 3.0, "eps_s": 11.9},
                    ("l_star_nm", "residual"), _row_crossing),
        SweepTarget("unperturbed_levels", {"B": 2.0, "J": 30000.0},
                    ("E0_0_0", "E0_1_m1", "E0_1_0", "E0_1_p1"),
                    _row_unperturbed),
        SweepTarget("two_donor_eigs",
                    {"B": 2.0, "J": 30000.0, "A": 116.0, "g_n": 2.26},
                    ("E_s_plus", "E_s_minus", "E_a_plus", "E_a_minus",
                     "antisym_gap"), _row_two_donor_eigs),
        SweepTarget("nu_J", {"B": 2.0, "J": 30000.0, "A": 116.0, "g_n": 2.26},
                    ("nu_J", "nu_J_weak", "nu_J_strong"), _row_nu_j),
        SweepTarget("gate_potential",
                    {"rho_nm": 0.0, "z_nm": 10.0, "a_nm": 5.0, "c_nm": 10.0,
                     "V": 1.0},
                    ("phi",), _row_gate_potential),
        SweepTarget("field_at_donor",
                    {"a_nm": 5.0, "c_nm": 10.0, "V": 1.0},
                    ("phi", "E_c", "E_c_prime"), _row_field_at_donor),
    )
}


@dataclass
class SweepTable:
    """Labeled columns (variable first, observables after, ``flag`` last)
    plus provenance metadata."""

    columns: dict
    meta: dict

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values())))

    @property
    def ok(self) -> bool:
        flag = self.columns.get("flag")
        return flag is None or not np.any(np.asarray(flag) != 0)

    def column(self, name: str) -> np.ndarray:
        return np.asarray(self.columns[name])


def _format_value(x) -> str:
    if isinstance(x, str):
        return x
    xf = float(x)
    if xf == 0.0:
        xf = 0.0  # normalize -0.0
    if math.isnan(xf):
        return "nan"
    if float(xf).is_integer() and abs(xf) < 1e15 and isinstance(x, (int, np.integer)):
        return str(int(xf))
    return f"{xf:.11e}"


def _round12(x):
    if isinstance(x, str):
        return x
    xf = float(x)
    if math.isnan(xf):
        return None
    if xf == 0.0:
        return 0.0
    return float(f"{xf:.11e}")


def to_csv_text(table: SweepTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = list(table.columns)
    writer.writerow(names)
    cols = [table.columns[n] for n in names]
    for i in range(table.n_rows):
        writer.writerow([_format_value(col[i]) for col in cols])
    return buf.getvalue()


def to_json_text(table: SweepTable) -> str:
    payload = {
        "meta": table.meta,
        "columns": {name: [_round12(v) for v in values]
                    for name, values in table.columns.items()},
    }
    return json.dumps(payload, indent=2) + "\n"


def export(table: SweepTable, fmt: str, path) -> None:
    """Write a table as 'csv' or 'json'; unwritable paths raise OSError."""
    if fmt == "csv":
        text = to_csv_text(table)
    elif fmt == "json":
        text = to_json_text(table)
    else:
        raise SpecError(f"unknown export format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def load_json(path) -> SweepTable:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    columns = {}
    for name, values in payload["columns"].items():
        if values and isinstance(values[0], str):
            columns[name] = np.array(values, dtype=object)
        else:
            columns[name] = np.array(
                [math.nan if v is None else float(v) for v in values])
    return SweepTable(columns=columns, meta=payload["meta"])


def _validate(spec: SweepSpec) -> SweepTarget:
    try:
        target = TARGETS[spec.target]
    except KeyError:
        raise SpecError(f"unknown sweep target {spec.target!r}; registered: "
                        + ", ".join(sorted(TARGETS))) from None
    if spec.variable.points < 2:
        raise SpecError("variable needs at least 2 points")
    if not spec.variable.start < spec.variable.stop:
        raise SpecError("variable range requires from < to")
    if spec.variable.spacing not in ("linear", "log"):
        raise SpecError(f"unknown spacing {spec.variable.spacing!r}")
    if spec.variable.spacing == "log" and spec.variable.start <= 0:
        raise SpecError("log spacing requires from > 0")
    if spec.variable.name not in target.params:
        raise SpecError(f"target {target.name!r} has no parameter "
                        f"{spec.variable.name!r}")
    if isinstance(target.params[spec.variable.name], str):
        raise SpecError(f"parameter {spec.variable.name!r} is not numeric")
    for name in spec.fixed:
        if name not in target.params:
            raise SpecError(f"target {target.name!r} has no parameter {name!r}")
    for name in spec.outputs:
        if name not in target.outputs:
            raise SpecError(f"target {target.name!r} has no output {name!r}; "
                            f"available: {', '.join(target.outputs)}")
    return target


def variable_grid(v: VariableSpec) -> np.ndarray:
    if v.spacing == "log":
        return np.geomspace(v.start, v.stop, v.points)
    return np.linspace(v.start, v.stop, v.points)


def run_sweep(spec: SweepSpec,
              constants: PhysicalConstants = PAPER) -> SweepTable:
    """Evaluate a sweep row by row.

    Deterministic: the same spec and constant set produce bit-identical
    tables.  Failing rows are flagged rather than dropped.
    """
    target = _validate(spec)
    grid = variable_grid(spec.variable)
    outputs = spec.outputs or tuple(n for n in target.outputs
                                    if n != spec.variable.name)

    params = dict(target.params)
    params.update(spec.fixed)

    columns = {spec.variable.name: grid.astype(float)}
    data = {name: np.full(grid.size, math.nan) for name in outputs}
    flags = np.zeros(grid.size, dtype=int)

    for i, x in enumerate(grid):
        row_params = dict(params)
        row_params[spec.variable.name] = float(x)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                row = target.fn(row_params, constants)
        except Exception:
            flags[i] = 1
            continue
        for name in outputs:
            data[name][i] = row[name]
        if not all(math.isfinite(data[name][i]) for name in outputs):
            flags[i] = 1

    columns.update(data)
    columns["flag"] = flags
    meta = {
        "target": spec.target,
        "fixed": {k: params[k] for k in sorted(params) if k != spec.variable.name},
        "variable": {"name": spec.variable.name, "from": spec.variable.start,
                     "to": spec.variable.stop, "points": spec.variable.points,
                     "spacing": spec.variable.spacing},
        "outputs": list(outputs),
        "constants": constants.name,
        "version": __version__,
    }
    return SweepTable(columns=columns, meta=meta)


def evaluate_point(target_name: str, overrides: dict | None = None,
                   constants: PhysicalConstants = PAPER) -> SweepTable:
    """Single-row table from one evaluation of a registered target."""
    try:
        target = TARGETS[target_name]
    except KeyError:
        raise SpecError(f"unknown sweep target {target_name!r}") from None
    params = dict(target.params)
    for name, value in (overrides or {}).items():
        if name not in target.params:
            raise SpecError(f"target {target_name!r} has no parameter {name!r}")
        params[name] = value
    row = target.fn(params, constants)
    columns = {name: np.array([row[name]]) for name in target.outputs}
    columns["flag"] = np.array([0])
    meta = {"target": target_name,
            "fixed": {k: v for k, v in sorted(params.items())},
            "outputs": list(target.outputs),
            "constants": constants.name, "version": __version__}
    return SweepTable(columns=columns, meta=meta)


def _coerce(text: str):
    try:
        return float(text)
    except ValueError:
        return text


def parse_spec_text(text: str, origin: str = "<string>") -> SweepSpec:
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text, source=origin)
    except configparser.Error as exc:
        raise SpecError(f"cannot parse sweep spec {origin}: {exc}") from None
    if "sweep" not in parser or "target" not in parser["sweep"]:
        raise SpecError(f"{origin}: missing [sweep] target")
    if "variable" not in parser:
        raise SpecError(f"{origin}: missing [variable] section")
    var = parser["variable"]
    for key in ("name", "from", "to", "points"):
        if key not in var:
            raise SpecError(f"{origin}: [variable] needs '{key}'")
    try:
        variable = VariableSpec(
            name=var["name"],
            start=float(var["from"]),
            stop=float(var["to"]),
            points=int(var["points"]),
            spacing=var.get("spacing", "linear"),
        )
    except ValueError as exc:
        raise SpecError(f"{origin}: bad [variable] value: {exc}") from None
    fixed = {k: _coerce(v) for k, v in parser["fixed"].items()} \
        if "fixed" in parser else {}
    outputs: tuple[str, ...] = ()
    if "outputs" in parser and "columns" in parser["outputs"]:
        outputs = tuple(s.strip() for s in parser["outputs"]["columns"].split(",")
                        if s.strip())
    return SweepSpec(target=parser["sweep"]["target"], variable=variable,
                     fixed=fixed, outputs=outputs)


def parse_spec_file(path) -> SweepSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_spec_text(fh.read(), origin=str(path))


PRESETS = ("fig2", "fig3-vs-B", "fig3-vs-J", "stark", "exchange", "anticross")


def load_preset(name: str) -> SweepSpec:
    if name not in PRESETS:
        raise SpecError(f"unknown preset {name!r}; available: "
                        + ", ".join(PRESETS))
    text = (resources.files("donorspin") / "presets" / f"{name}.sweep").read_text()
    return parse_spec_text(text, origin=f"preset:{name}")
