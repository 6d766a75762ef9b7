"""Command-line interface.

One executable, one subcommand per subsystem.  Every run resolves its
configuration (defaults <- ``--config`` file <- flags), writes the
requested outputs into ``--out`` and drops a ``manifest.json`` echoing the
fully resolved config.  Outputs other than the manifest are byte-stable
for identical config and seed; wall-clock data lives only in the manifest.

Exit codes: 0 success, 1 failed verification check, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from . import electrostatics as es
from . import grouptheory as gt
from . import injection as inj
from . import lattice as lat
from . import tightbinding as tb
from . import valleys as vl
from . import verification as ver
from .config import SCHEMA, ConfigError, load_config


def _schema_help(section: str, key: str) -> str:
    return SCHEMA[section][key].help


# ------------------------------------------------------------------ bands

def cmd_bands(cfg: dict, out: Path) -> list[Path]:
    params = tb.TBParams.from_config(cfg)
    path = lat.standard_path(cfg["bands"]["path"], cfg["bands"]["samples"])
    band_set = tb.solve_bands(params, path)
    outputs = []
    p = out / "kpath.csv"
    with p.open("w") as fh:
        path.to_csv(fh)
    outputs.append(p)
    p = out / "bands.csv"
    with p.open("w") as fh:
        tb.bands_to_csv(band_set, fh)
    outputs.append(p)
    p = out / "fractions.csv"
    with p.open("w") as fh:
        tb.fractions_to_csv(band_set, fh)
    outputs.append(p)
    kmin, emin = band_set.conduction_minimum()
    print(f"valence max {band_set.valence_maximum():+.4f} eV; conduction min "
          f"{emin:+.4f} eV at k = ({kmin[0]:.3f}, {kmin[1]:.3f}, {kmin[2]:.3f})")
    return outputs


# -------------------------------------------------------------- spinorbit

def cmd_spinorbit(cfg: dict, out: Path, which: str = "all") -> tuple[list[Path], bool]:
    names = list(ver.SPINORBIT_CHECKS) if which == "all" else [which]
    rows = []
    all_ok = True
    for name in names:
        fn = ver.SPINORBIT_CHECKS.get(name)
        if fn is None:
            raise ConfigError(f"unknown spin-orbit check {name!r}; "
                              f"known: {sorted(ver.SPINORBIT_CHECKS)} or all")
        ok, measured, threshold = fn(cfg)
        all_ok &= ok
        rows.append({"check": name, "passed": bool(ok), "measured": measured,
                     "threshold": threshold})
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {measured}")
    outputs = []
    p = out / "spinorbit_report.json"
    p.write_text(json.dumps(rows, indent=2, default=str) + "\n")
    outputs.append(p)
    p = out / "spinorbit_report.csv"
    with p.open("w") as fh:
        fh.write("check,passed,threshold\n")
        for row in rows:
            fh.write(f"{row['check']},{int(row['passed'])},\"{row['threshold']}\"\n")
    outputs.append(p)
    return outputs, all_ok


# ------------------------------------------------------------------ group

def cmd_group(cfg: dict, out: Path, product: tuple[str, str] | None) -> list[Path]:
    table = gt.builtin_table()
    text = gt.format_table(table)
    print(text)
    payload: dict = {
        "classes": [{"label": lbl, "size": size} for lbl, size in table.classes],
        "irreps": {name: [_c2s(c) for c in rep.characters]
                   for name, rep in table.irreps.items()},
    }
    if product:
        a, b = product
        prod = gt.product(table.irrep(a), table.irrep(b))
        parts = gt.decompose(prod, table)
        pretty = " ⊕ ".join(f"{m}·{n}" if m > 1 else n for n, m in parts)
        print(f"{a} ⊗ {b} = {pretty}")
        payload["product"] = {"factors": [a, b],
                              "characters": [_c2s(c) for c in prod.characters],
                              "decomposition": {n: m for n, m in parts}}
    p = out / "group.json"
    p.write_text(json.dumps(payload, indent=2) + "\n")
    return [p]


def _c2s(c: complex) -> str:
    if c.imag == 0:
        return str(int(c.real)) if c.real == int(c.real) else str(c.real)
    return str(c)


# ---------------------------------------------------------------- valleys

def cmd_valleys(cfg: dict, out: Path, family: str, growth: str) -> list[Path]:
    v = cfg["valleys"]
    axis = tuple(float(ch) for ch in growth)
    if len(axis) != 3:
        raise ConfigError(f"growth axis must be three digits like 001, got {growth!r}")
    if family == "X0":
        vset = vl.ValleySet.x0_family(v["x0_ml"], v["x0_mt"], growth_axis=axis)
    elif family == "L":
        vset = vl.ValleySet.l_family(v["l_ml"], v["l_mt"], growth_axis=axis)
    else:
        raise ConfigError(f"family must be X0 or L, got {family!r}")
    report = vl.split_valleys(vset, v["well_nm"])
    print(f"{family} family, growth ({growth}), W = {v['well_nm']:g} nm")
    print(f"{'m_z/m0':>10s} {'degeneracy':>10s} {'E-E0 (meV)':>12s}")
    for g in report.groups:
        print(f"{g.m_z:10.4f} {g.degeneracy:10d} {1e3 * g.energy_ev:12.4f}")
    payload = {
        "family": family, "growth": growth, "well_nm": v["well_nm"],
        "ground_degeneracy": report.ground_degeneracy,
        "groups": [{"m_z": g.m_z, "degeneracy": g.degeneracy,
                    "energy_ev": g.energy_ev} for g in report.groups],
    }
    p = out / "valleys.json"
    p.write_text(json.dumps(payload, indent=2) + "\n")
    return [p]


# ------------------------------------------------------------------- dots

def cmd_dots(cfg: dict, out: Path, sides: list[float] | None) -> list[Path]:
    spec = lat.LatticeSpec(a=cfg["lattice"]["a_nm"])
    rounding = cfg["dots"]["rounding"]
    sides = sides if sides else [cfg["dots"]["side_nm"]]
    p = out / "dots.csv"
    with p.open("w") as fh:
        fh.write("side_nm,unit_cells,levels,electrons\n")
        for side in sides:
            res = lat.count_dot_levels(lat.DotGeometry(side), spec, rounding)
            print(f"side {side:g} nm: {res.unit_cells} unit cells, "
                  f"{res.levels} levels, {res.electrons} electrons")
            fh.write(f"{side:g},{res.unit_cells},{res.levels},{res.electrons}\n")
    return [p]


# ----------------------------------------------------------------- inject

def cmd_inject(cfg: dict, out: Path) -> list[Path]:
    c = cfg["inject"]
    spec = inj.DotSpec.default(levels=c["levels"], l_index=c["l_index"],
                               spacing=c["level_spacing_ev"],
                               delta_e_l_gamma=c["delta_e_l_gamma_ev"],
                               charging_energy=c["u_ev"])
    params = inj.StochasticParams(p_l=c["p_l"], rng_seed=c["seed"])
    report = inj.run_protocol(spec, params, c["max_retries"],
                              delta_e_l_gamma=c["delta_e_l_gamma_ev"])
    outputs = []
    p = out / "events.csv"
    with p.open("w") as fh:
        inj.events_to_csv(report.events, fh)
    outputs.append(p)
    summary = {"success": report.success, "retries": report.retries,
               "transfers_per_pass": list(report.transfers_per_pass),
               "p_l": c["p_l"], "seed": c["seed"]}
    print(f"success={report.success} retries={report.retries} "
          f"transfers/pass={list(report.transfers_per_pass)}")
    if c["trials"] > 0:
        stats = inj.monte_carlo(spec, params, c["max_retries"], c["trials"],
                                delta_e_l_gamma=c["delta_e_l_gamma_ev"])
        summary["monte_carlo"] = {"trials": stats.trials,
                                  "success_rate": stats.success_rate,
                                  "mean_retries": stats.mean_retries}
        print(f"monte carlo: {stats.trials} trials, success rate "
              f"{stats.success_rate:.4f}, mean retries {stats.mean_retries:.4f}")
        p = out / "mc_stats.csv"
        with p.open("w") as fh:
            fh.write("trial,retries\n")
            for i, r in enumerate(stats.retries):
                fh.write(f"{i},{r}\n")
        outputs.append(p)
    p = out / "summary.json"
    p.write_text(json.dumps(summary, indent=2) + "\n")
    outputs.append(p)
    return outputs


# ---------------------------------------------------------------- poisson

def cmd_poisson(cfg: dict, out: Path) -> list[Path]:
    p = cfg["poisson"]
    geom = es.build_geometry(
        p["variant"], p["w_nm"], p["h_nm"], p["lz_nm"], p["ly_nm"],
        fin_height_nm=p["fin_height_nm"], gate_ox_nm=p["gate_ox_nm"],
        gate_nm=p["gate_nm"], substrate_nm=p["substrate_nm"],
        gate_wrap_nm=p["gate_wrap_nm"])
    interface_potential = (p["interface_potential"]
                           if p["interface_mode"] == "fixed_potential" else None)
    bc = es.BoundarySpec(gate_voltage=p["vgate"], substrate_voltage=p["vsub"],
                         interface_mode=p["interface_mode"],
                         interface_potential=interface_potential,
                         eps_si=p["eps_si"], eps_ox=p["eps_ox"])
    sol = es.solve_poisson(geom, bc, tol=p["tol"], max_iter=p["max_iter"],
                           method=p["method"])
    metric = es.fin_gradient_metric(sol, geom)
    labels = es.contour_quantize(sol, p["n_levels"])
    outputs = []
    path = out / "potential.csv"
    with path.open("w") as fh:
        es.potential_to_csv(sol, geom, fh)
    outputs.append(path)
    path = out / "contours.pgm"
    with path.open("w") as fh:
        es.contours_to_pgm(labels, fh, p["n_levels"])
    outputs.append(path)
    path = out / "contours.csv"
    with path.open("w") as fh:
        es.contours_to_csv(labels, geom, fh)
    outputs.append(path)
    metrics = {"variant": p["variant"], "w_nm": p["w_nm"],
               "max_abs_dphidz_v_per_nm": metric.max_abs,
               "mean_abs_dphidz_v_per_nm": metric.mean_abs,
               "residual": sol.residual, "iterations": sol.iterations}
    path = out / "metrics.json"
    path.write_text(json.dumps(metrics, indent=2) + "\n")
    outputs.append(path)
    print(f"{p['variant']} fin, W = {p['w_nm']:g} nm: max |dphi/dz| = "
          f"{metric.max_abs:.4f} V/nm, mean = {metric.mean_abs:.4f} V/nm")
    return outputs


# ------------------------------------------------------------- verify-all

def cmd_verify_all(cfg: dict, out: Path, only: list[str] | None
                   ) -> tuple[list[Path], bool, dict]:
    results = ver.run_all(cfg, only=only)
    for r in results:
        print(r.line())
    outputs = []
    p = out / "verify_report.json"
    p.write_text(ver.report_json(results) + "\n")
    outputs.append(p)
    p = out / "verify_report.csv"
    p.write_text(ver.report_csv(results))
    outputs.append(p)
    runtimes = {r.cid: round(r.runtime_s, 3) for r in results}
    return outputs, all(r.passed for r in results), runtimes


def run_all_subcommands(cfg: dict, root: Path, overrides: dict | None = None) -> None:
    """Run every file-writing subcommand into subdirectories of ``root``.

    Used by the determinism check; ``overrides`` lets it shrink workloads.
    """
    cfg = json.loads(json.dumps(cfg))  # deep copy
    for section, entries in (overrides or {}).items():
        cfg[section].update(entries)
    for name, runner in (
            ("bands", cmd_bands),
            ("spinorbit", lambda c, o: cmd_spinorbit(c, o, "traceless")[0]),
            ("group", lambda c, o: cmd_group(c, o, ("Λ3", "D1/2"))),
            ("valleys", lambda c, o: cmd_valleys(c, o, "L", "111")),
            ("dots", lambda c, o: cmd_dots(c, o, [1.0, 2.0, 5.0, 10.0])),
            ("inject", cmd_inject),
            ("poisson", cmd_poisson)):
        sub = root / name
        sub.mkdir(parents=True, exist_ok=True)
        runner(cfg, sub)


# ------------------------------------------------------------------ main

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lvalley",
        description="L-valley silicon spin-qubit modelling toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", metavar="PATH", help="TOML config file")
    parser.add_argument("--out", metavar="DIR", default="lvalley_out",
                        help="output directory (default: lvalley_out)")
    parser.add_argument("--seed", type=int, help="override inject.seed")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bands", help="tight-binding band structure along a k-path")
    p.add_argument("--path", choices=("delta", "lambda", "kl"),
                   help=_schema_help("bands", "path"))
    p.add_argument("--samples", type=int, help=_schema_help("bands", "samples"))

    p = sub.add_parser("spinorbit", help="spin-orbit verification report")
    p.add_argument("--check", default="all",
                   choices=tuple(ver.SPINORBIT_CHECKS) + ("all",),
                   help="which check to run")

    p = sub.add_parser("group", help="C3v double-group character table tools")
    p.add_argument("--product", nargs=2, metavar=("REP_A", "REP_B"),
                   help="decompose the direct product of two irreps (e.g. Λ3 D1/2)")

    p = sub.add_parser("valleys", help="valley-splitting report")
    p.add_argument("--family", default="L", choices=("X0", "L"))
    p.add_argument("--growth", default=None,
                   help="growth axis digits, e.g. 001 or 111 "
                        "(default: 001 for X0, 111 for L)")
    p.add_argument("--well-nm", type=float, help=_schema_help("valleys", "well_nm"))

    p = sub.add_parser("dots", help="cubic-dot unit cell / level / electron counts")
    p.add_argument("--side-nm", type=float, action="append",
                   help=_schema_help("dots", "side_nm") + " (repeatable)")
    p.add_argument("--rounding", choices=("nearest", "floor"),
                   help=_schema_help("dots", "rounding"))

    p = sub.add_parser("inject", help="L-level injection protocol simulation")
    p.add_argument("--p-l", type=float, help=_schema_help("inject", "p_l"))
    p.add_argument("--max-retries", type=int,
                   help=_schema_help("inject", "max_retries"))
    p.add_argument("--trials", type=int, help=_schema_help("inject", "trials"))
    p.add_argument("--u-ev", type=float, help=_schema_help("inject", "u_ev"))

    p = sub.add_parser("poisson", help="fin-MOS electrostatics")
    p.add_argument("--variant", choices=es.VARIANTS,
                   help=_schema_help("poisson", "variant"))
    p.add_argument("--w-nm", type=float, help=_schema_help("poisson", "w_nm"))
    p.add_argument("--h-nm", type=float, help=_schema_help("poisson", "h_nm"))
    p.add_argument("--vgate", type=float, help=_schema_help("poisson", "vgate"))
    p.add_argument("--interface-mode",
                   choices=("dielectric_continuity", "fixed_potential"),
                   help=_schema_help("poisson", "interface_mode"))
    p.add_argument("--method", choices=("direct", "sor"),
                   help=_schema_help("poisson", "method"))

    p = sub.add_parser("verify-all", aliases=["verify_all"],
                       help="run the whole verification suite")
    p.add_argument("--only", help="comma-separated check ids, e.g. 1,4,6")
    return parser


_FLAG_MAP = {
    "bands": {"path": ("bands", "path"), "samples": ("bands", "samples")},
    "valleys": {"well_nm": ("valleys", "well_nm")},
    "dots": {"rounding": ("dots", "rounding")},
    "inject": {"p_l": ("inject", "p_l"), "max_retries": ("inject", "max_retries"),
               "trials": ("inject", "trials"), "u_ev": ("inject", "u_ev")},
    "poisson": {"variant": ("poisson", "variant"), "w_nm": ("poisson", "w_nm"),
                "h_nm": ("poisson", "h_nm"), "vgate": ("poisson", "vgate"),
                "interface_mode": ("poisson", "interface_mode"),
                "method": ("poisson", "method")},
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    command = "verify-all" if args.command == "verify_all" else args.command

    overrides: dict[str, dict] = {}
    for attr, (section, key) in _FLAG_MAP.get(command, {}).items():
        value = getattr(args, attr, None)
        if value is not None:
            overrides.setdefault(section, {})[key] = value
    if args.seed is not None:
        overrides.setdefault("inject", {})["seed"] = args.seed

    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    started = time.strftime("%Y-%m-%dT%H:%M:%S")
    status = 0
    runtimes: dict = {}
    try:
        if command == "bands":
            outputs = cmd_bands(cfg, out)
        elif command == "spinorbit":
            outputs, ok = cmd_spinorbit(cfg, out, args.check)
            status = 0 if ok else 1
        elif command == "group":
            outputs = cmd_group(cfg, out, tuple(args.product) if args.product else None)
        elif command == "valleys":
            growth = args.growth or ("111" if args.family == "L" else "001")
            outputs = cmd_valleys(cfg, out, args.family, growth)
        elif command == "dots":
            outputs = cmd_dots(cfg, out, args.side_nm)
        elif command == "inject":
            outputs = cmd_inject(cfg, out)
        elif command == "poisson":
            outputs = cmd_poisson(cfg, out)
        elif command == "verify-all":
            only = args.only.split(",") if args.only else None
            outputs, ok, runtimes = cmd_verify_all(cfg, out, only)
            status = 0 if ok else 1
        else:  # pragma: no cover
            raise AssertionError(command)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        _write_manifest(out, command, argv, cfg, [], started, error=str(exc))
        return 2
    except es.ConvergenceError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        _write_manifest(out, command, argv, cfg, [], started, error=str(exc))
        return 1

    _write_manifest(out, command, argv, cfg, outputs, started, runtimes=runtimes)
    return status


def _write_manifest(out: Path, command: str, argv, cfg: dict, outputs: list[Path],
                    started: str, error: str | None = None,
                    runtimes: dict | None = None) -> None:
    manifest = {
        "command": command,
        "argv": list(argv) if argv is not None else sys.argv[1:],
        "started": started,
        "config": cfg,
        "outputs": [str(p.name) for p in outputs],
    }
    if runtimes:
        manifest["check_runtimes_s"] = runtimes
    if error:
        manifest["error"] = error
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def entry() -> None:  # console-script hook
    sys.exit(main())


if __name__ == "__main__":
    entry()
