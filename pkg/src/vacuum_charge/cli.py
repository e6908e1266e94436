"""Command-line front end.

    vacuum-charge charge --m 1 --a 1 --eta 0.5 --method all
    vacuum-charge density-profile --a 1 --eta 1 --z-points 101 --out rho.csv
    vacuum-charge casimir --a 1 --eta-final 1 --method all
    vacuum-charge reproduce-tables --out tables.csv
    vacuum-charge audit --a 1 --eta 1

Settings are resolved as: built-in defaults, then a ``key=value`` file given
with ``--config``, then command-line flags. ``--print-config`` prints the
resolved settings and exits.

Exit status: 0 success, 1 a reproduced table row out of tolerance,
2 usage error, 3 regime error, 4 numerical non-convergence, 5 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .capri import QuadratureConfig, capri_density, delta_rho
from .casimir import RampSpec, casimir_energy_adiabatic, charge_for, sign_consistency_audit
from .core import (
    ChargeProfile,
    ConvergenceError,
    Method,
    OutOfRegionError,
    ParameterError,
    RegimeError,
    VacuumChargeError,
    WellParameters,
    validate_well,
)
from .modesum import RegulatorConfig, vacuum_density
from .tables import reproduce_tables

COMMANDS = ("charge", "density-profile", "casimir", "reproduce-tables", "audit")
METHODS = ("mode-sum", "contour", "point-split", "all")

EXIT_OK, EXIT_TABLE_FAIL, EXIT_USAGE, EXIT_REGIME, EXIT_CONVERGENCE, EXIT_IO = 0, 1, 2, 3, 4, 5

# config key -> (type, default); defaults mirror the library defaults at m = 1
# and are rescaled by m where the library scales them
SETTINGS = {
    "m": (float, 1.0),
    "a": (float, 1.0),
    "eta": (float, 0.5),
    "eta_final": (float, None),
    "method": (str, "all"),
    "p_max": (float, None),
    "n_p": (int, 4096),
    "y_max": (float, None),
    "n_nodes": (int, 8192),
    "pv_delta": (float, None),
    "n_steps": (int, 64),
    "z_points": (int, 101),
    "out": (str, None),
    "format": (str, "csv"),
}


class UsageError(VacuumChargeError):
    pass


@dataclass
class RunConfig:
    command: str
    well: WellParameters
    method: str = "all"
    eta_final: float | None = None
    regulator: RegulatorConfig = field(default_factory=RegulatorConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    n_steps: int = 64
    z_points: int = 101
    output: Path | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.method not in METHODS:
            raise UsageError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.format!r}")
        if self.z_points < 1:
            raise UsageError("z_points must be >= 1")

    def methods(self) -> list[Method]:
        if self.method == "all":
            return [Method.MODE_SUM, Method.POINT_SPLIT_CONTOUR, Method.POINT_SPLIT_COMPOSITE]
        return [Method(self.method)]

    def resolved(self) -> dict:
        m = self.well.m
        reg = self.regulator.resolved(m)
        quad = self.quadrature.resolved(m)
        return {
            "command": self.command,
            "m": m,
            "a": self.well.a,
            "eta": self.well.eta,
            "eta_final": self.eta_final if self.eta_final is not None else self.well.eta,
            "method": self.method,
            "p_max": reg.p_max,
            "n_p": reg.n_p,
            "damping": reg.damping,
            "z_nodes": reg.z_nodes,
            "y_max": quad.y_max,
            "n_nodes": quad.n_nodes,
            "pv_delta": quad.pv_delta,
            "pv_richardson": quad.pv_richardson,
            "tol": quad.tol,
            "n_steps": self.n_steps,
            "z_points": self.z_points,
            "out": str(self.output) if self.output else "-",
            "format": self.format,
        }


# --- number and table formatting -----------------------------------------


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.16e}"
    return str(x)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_text(records) -> str:
    def clean(v):
        if isinstance(v, (np.floating, float)):
            return float(v)
        if isinstance(v, (np.bool_, bool)):
            return bool(v)
        if isinstance(v, np.integer):
            return int(v)
        return v

    return json.dumps([{k: clean(v) for k, v in r.items()} for r in records], indent=2) + "\n"


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    output.write_text(text)


PROFILE_COLUMNS = ("z", "density", "method", "m", "a", "eta")


def profile_rows(profile: ChargeProfile):
    w = profile.well
    for z, rho in zip(profile.positions, profile.densities):
        yield (float(z), float(rho), profile.method.value, w.m, w.a, w.eta)


def export_profile(profile: ChargeProfile, format: str = "csv", path: Path | str | None = None) -> str:
    """Serialize a density profile; writes to ``path`` when given and returns the text."""
    if len(profile.positions) == 0:
        raise ParameterError("refusing to export an empty profile")
    text = render_profiles([profile], format)
    if path is not None:
        Path(path).write_text(text)
    return text


def render_profiles(profiles, format: str) -> str:
    rows = [row for p in profiles for row in profile_rows(p)]
    if not rows:
        raise ParameterError("refusing to export an empty profile")
    if format == "csv":
        return _csv_text(PROFILE_COLUMNS, rows)
    records = []
    for p in profiles:
        for row in profile_rows(p):
            rec = dict(zip(PROFILE_COLUMNS, row))
            rec["settings_digest"] = p.settings_digest
            records.append(rec)
    return _json_text(records)


# --- commands -----------------------------------------------------------------


def _charge(cfg: RunConfig) -> int:
    records = []
    for method in cfg.methods():
        report = charge_for(cfg.well, method, cfg.regulator, cfg.quadrature)
        records.append(report.as_dict())
    if cfg.format == "csv":
        header = ("method", "m", "a", "eta", "value")
        text = _csv_text(header, [[r[k] for k in header] for r in records])
    else:
        text = _json_text(records)
    _emit(text, cfg.output)
    return EXIT_OK


def profile_grid(well: WellParameters, n: int) -> np.ndarray:
    """Cell midpoints of an n-cell partition of the well, symmetric about 0."""
    return well.a * (2.0 * np.arange(n) + 1.0 - n) / (2.0 * n)


def density_profile(well: WellParameters, method: Method, n: int, reg=None, quad=None) -> ChargeProfile:
    reg = reg or RegulatorConfig()
    quad = quad or QuadratureConfig()
    z = profile_grid(well, n)
    if method is Method.MODE_SUM:
        rho = np.asarray(vacuum_density(well, z, reg).value)
        digest = ";".join(f"{k}={v}" for k, v in sorted(reg.settings(well.m).items()))
    else:
        well.require_regime()
        rho = np.asarray(capri_density(well, z, quad))
        if method is Method.POINT_SPLIT_COMPOSITE:
            rho = rho + delta_rho(well, z)
        digest = ";".join(f"{k}={v}" for k, v in sorted(quad.settings(well.m).items()))
    return ChargeProfile(z, rho, method, well, digest)


def _density_profile(cfg: RunConfig) -> int:
    profiles = [density_profile(cfg.well, m, cfg.z_points, cfg.regulator, cfg.quadrature) for m in cfg.methods()]
    _emit(render_profiles(profiles, cfg.format), cfg.output)
    return EXIT_OK


def _casimir(cfg: RunConfig) -> int:
    if cfg.method == "contour":
        raise UsageError("casimir ramps use --method mode-sum, point-split or all")
    methods = [Method.MODE_SUM, Method.POINT_SPLIT_COMPOSITE] if cfg.method == "all" else [Method(cfg.method)]
    eta_final = cfg.eta_final if cfg.eta_final is not None else cfg.well.eta
    if eta_final > cfg.well.m:
        raise RegimeError(f"eta_final={eta_final} exceeds m={cfg.well.m}")
    traces = [
        casimir_energy_adiabatic(cfg.well, RampSpec(eta_final, cfg.n_steps, m), cfg.regulator, cfg.quadrature)
        for m in methods
    ]
    header = ("eta", "charge", "energy_delta", "method", "m", "a")
    rows = [
        (eta, q, e, t.method.value, t.well.m, t.well.a)
        for t in traces
        for eta, q, e in t.rows()
    ]
    if cfg.format == "csv":
        text = _csv_text(header, rows)
    else:
        text = json.dumps(
            [
                {
                    "method": t.method.value,
                    "m": t.well.m,
                    "a": t.well.a,
                    "eta_final": t.well.eta,
                    "energy_delta": t.final_energy,
                    "casimir_sign": t.casimir_sign.value,
                    "trace": [dict(zip(header[:3], r)) for r in t.rows()],
                }
                for t in traces
            ],
            indent=2,
        ) + "\n"
    _emit(text, cfg.output)
    return EXIT_OK


def _reproduce_tables(cfg: RunConfig) -> int:
    rows = reproduce_tables(cfg.quadrature)
    header = ("table", "a", "eta", "published", "computed", "difference", "tolerance", "pass")
    data = [
        (r.table, r.a, r.eta, r.published, r.computed, r.difference, r.tolerance, r.passed)
        for r in rows
    ]
    if cfg.format == "csv":
        text = _csv_text(header, data)
    else:
        text = _json_text(
            [dict(zip(header, d), error_estimate=r.error_estimate) for d, r in zip(data, rows)]
        )
    _emit(text, cfg.output)
    if cfg.output is not None:
        for r in rows:
            status = "pass" if r.passed else "FAIL"
            print(
                f"table {r.table}  a={r.a:>4g} eta={r.eta:<4g} published={r.published:+.3f} "
                f"computed={r.computed:+.5f} tol={r.tolerance:.3f} {status}",
                file=sys.stderr,
            )
    return EXIT_OK if all(r.passed for r in rows) else EXIT_TABLE_FAIL


def _audit(cfg: RunConfig) -> int:
    reports = [
        charge_for(cfg.well, m, cfg.regulator, cfg.quadrature)
        for m in (Method.MODE_SUM, Method.POINT_SPLIT_COMPOSITE)
    ]
    audit = sign_consistency_audit(cfg.well, reports)
    if cfg.format == "json":
        text = json.dumps(
            {
                "m": cfg.well.m,
                "a": cfg.well.a,
                "eta": cfg.well.eta,
                "vacuous": audit.vacuous,
                "free_charge_zero": audit.free_charge_zero,
                "verdicts": [
                    {
                        "method": v.method.value,
                        "charge": v.charge,
                        "satisfies_minimum_energy": v.satisfies_minimum_energy,
                        "casimir_sign": v.casimir_sign.value,
                        "contradiction": v.contradiction,
                        "verdict": v.verdict,
                    }
                    for v in audit.verdicts
                ],
            },
            indent=2,
        ) + "\n"
    else:
        header = ("method", "m", "a", "eta", "charge", "satisfies_minimum_energy", "casimir_sign", "contradiction")
        rows = [
            (v.method.value, cfg.well.m, cfg.well.a, cfg.well.eta, v.charge, v.satisfies_minimum_energy,
             v.casimir_sign.value, v.contradiction)
            for v in audit.verdicts
        ]
        text = _csv_text(header, rows)
    _emit(text, cfg.output)
    for line in audit.lines():
        print(line, file=sys.stderr)
    return EXIT_OK


HANDLERS = {
    "charge": _charge,
    "density-profile": _density_profile,
    "casimir": _casimir,
    "reproduce-tables": _reproduce_tables,
    "audit": _audit,
}


def run(config: RunConfig) -> int:
    """Execute one command; map failures to categorized exit codes."""
    try:
        return HANDLERS[config.command](config)
    except (UsageError, ParameterError) as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RegimeError, OutOfRegionError) as exc:
        print(f"error[regime]: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except ConvergenceError as exc:
        print(f"error[convergence]: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_IO


# --- argument parsing -----------------------------------------------------------


def read_config_file(path: str) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment, dashes equal underscores."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in SETTINGS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for key in SETTINGS:
        common.add_argument("--" + key.replace("_", "-"), dest=key, default=None)
    common.add_argument("--config", default=None, help="key=value settings file")
    common.add_argument("--print-config", action="store_true", help="print resolved settings and exit")
    parser = argparse.ArgumentParser(prog="vacuum-charge", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    merged = {k: default for k, (_, default) in SETTINGS.items()}
    if ns.config:
        merged.update(read_config_file(ns.config))
    for key in SETTINGS:
        value = getattr(ns, key)
        if value is not None:
            merged[key] = value
    typed = {}
    for key, (kind, _) in SETTINGS.items():
        value = merged[key]
        if value is None:
            typed[key] = None
            continue
        try:
            typed[key] = kind(value)
        except ValueError:
            raise UsageError(f"{key} expects {kind.__name__}, got {value!r}") from None
    if ns.command == "reproduce-tables":
        typed["m"] = 1.0
    well = validate_well(typed["m"], typed["a"], typed["eta"])
    if typed["eta_final"] is not None and not typed["eta_final"] > 0:
        raise UsageError("eta_final must be positive")
    if ns.command == "casimir" and typed["eta_final"] is None and well.eta == 0:
        raise UsageError("casimir needs --eta-final > 0 (or --eta > 0)")
    if not math.isfinite(typed["eta_final"] or 0.0):
        raise UsageError("eta_final must be finite")
    reg = RegulatorConfig(p_max=typed["p_max"], n_p=typed["n_p"])
    quad = QuadratureConfig(y_max=typed["y_max"], n_nodes=typed["n_nodes"], pv_delta=typed["pv_delta"])
    return RunConfig(
        command=ns.command,
        well=well,
        method=typed["method"],
        eta_final=typed["eta_final"],
        regulator=reg,
        quadrature=quad,
        n_steps=typed["n_steps"],
        z_points=typed["z_points"],
        output=Path(typed["out"]) if typed["out"] else None,
        format=typed["format"],
    )


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except (UsageError, ParameterError) as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_IO
    if ns.print_config:
        for key, value in cfg.resolved().items():
            print(f"{key}={value}")
        return EXIT_OK
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
