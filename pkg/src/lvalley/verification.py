"""Built-in verification suite.

Each numbered check mirrors one shipped guarantee of the toolkit, from the
exact Dresselhaus cancellation on the body diagonal to byte-identical CLI
outputs.  Checks are deterministic (fixed internal seeds), return their
measured quantities, and are shared between the CLI ``verify-all``
subcommand and the test suite, so there is exactly one implementation of
every pass/fail rule.
"""

from __future__ import annotations

import contextlib
import hashlib
import io
import json
import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import electrostatics as es
from . import grouptheory as gt
from . import injection as inj
from . import lattice as lat
from . import spinorbit as so
from . import tightbinding as tb
from . import valleys as vl

_SEED = 20260809


@dataclass(frozen=True)
class CheckResult:
    cid: str
    name: str
    passed: bool
    measured: dict
    threshold: str
    runtime_s: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        details = ", ".join(f"{k}={v}" for k, v in self.measured.items())
        return f"[{status}] {self.cid:>3s} {self.name}: {details}"


def _fmt(x: float) -> float:
    return float(f"{x:.6g}")


# --- 1 -----------------------------------------------------------------

def check_dresselhaus_diagonal_cancellation(cfg: dict) -> tuple[bool, dict, str]:
    rng = np.random.default_rng(_SEED)
    worst = 0.0
    for _ in range(1000):
        t = rng.uniform(-2.0, 2.0)
        field = so.MultipoleField(q_xyz=rng.uniform(-2.0, 2.0))
        h = so.h_dresselhaus(field, (t, t, t)).matrix
        worst = max(worst, float(np.max(np.abs(h))))
    return worst == 0.0, {"max_entry": worst, "samples": 1000}, "exactly 0"


# --- 2 -----------------------------------------------------------------

def _random_field(rng) -> so.MultipoleField:
    return so.MultipoleField(
        q0=rng.uniform(-2, 2),
        q_dip=tuple(rng.uniform(-2, 2, 3)),
        t_dip=tuple(rng.uniform(-2, 2, 3)),
        q_xyz=rng.uniform(-2, 2),
    )


def check_lambda_axis_overlap_equality(cfg: dict) -> tuple[bool, dict, str]:
    rng = np.random.default_rng(_SEED + 1)
    worst = 0.0
    for _ in range(1000):
        field = _random_field(rng)
        t = rng.uniform(-2.0, 2.0)
        k = (t, t, t)
        up = sum(so.orbital_soc_expectation(p, +1, field, k) for p in so.P_ORBITALS)
        dn = sum(so.orbital_soc_expectation(p, -1, field, k) for p in so.P_ORBITALS)
        worst = max(worst, abs(up - dn))
    return worst <= 1e-12, {"max_abs_diff": _fmt(worst), "samples": 1000}, "<= 1e-12"


# --- 3 -----------------------------------------------------------------

def check_bsvsp_polarization_cancellation(cfg: dict) -> tuple[bool, dict, str]:
    params = tb.TBParams.from_config(cfg)
    mag = cfg["spinorbit"]["check_field"]
    dip = cfg["spinorbit"]["sp_dipole"]
    field = so.MultipoleField(q_dip=tuple(mag * so.BODY_DIAGONAL))
    jn = so.eight_spinor_jn()
    worst_sum = 0.0
    worst_pair = 0.0
    pair_found = True
    for t in (0.1, 0.25, 0.4):
        bands = so.bsvsp_check(params, field, (t, t, t), sp_dipole=dip)
        for _, total in so.group_spin_sums(bands):
            worst_sum = max(worst_sum, float(np.linalg.norm(total)))
        partner = [b for b in bands
                   if abs(abs(float(np.real(b.state.conj() @ jn @ b.state))) - 1.5) < 1e-6]
        if len(partner) != 2 or len(partner[0].partners) != 1:
            pair_found = False
            continue
        p1 = np.array(partner[0].spin_expectation)
        p2 = np.array(partner[1].spin_expectation)
        worst_pair = max(worst_pair,
                         abs(np.linalg.norm(p1) - np.linalg.norm(p2)),
                         float(np.linalg.norm(p1 + p2)))
        # time-reversal conjugation maps one partner onto the other
        overlap = abs(np.vdot(partner[1].state, so.time_reversal(partner[0].state)))
        worst_pair = max(worst_pair, abs(overlap - 1.0))
    ok = pair_found and worst_sum < 1e-10 and worst_pair < 1e-10
    return ok, {"max_group_sum": _fmt(worst_sum),
                "max_pair_asymmetry": _fmt(worst_pair),
                "partner_pair_found": pair_found}, "< 1e-10"


# --- 4 -----------------------------------------------------------------

def check_double_group_character_table(cfg: dict) -> tuple[bool, dict, str]:
    table = gt.builtin_table()
    names = list(table.irreps)
    worst_row = 0.0
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            val = table.inner(table.irreps[a], table.irreps[b])
            worst_row = max(worst_row, abs(val - (1.0 if i == j else 0.0)))
    chars = np.array([table.irreps[n].as_array() for n in names])
    sizes = table.class_sizes
    worst_col = 0.0
    for c1 in range(len(sizes)):
        for c2 in range(len(sizes)):
            val = np.sum(chars[:, c1] * chars[:, c2].conj())
            want = table.order / sizes[c1] if c1 == c2 else 0.0
            worst_col = max(worst_col, abs(val - want))
    dim_sq = sum(table.irreps[n].dimension ** 2 for n in names)
    prod16 = gt.product(table.irrep("Λ1"), gt.SPINOR_D12)
    to_l6 = gt.decompose(prod16, table) == [("Λ6", 1)]
    prod36 = gt.product(table.irrep("Λ3"), gt.SPINOR_D12)
    split = sorted(gt.decompose(prod36, table)) == [("Λ4", 1), ("Λ5", 1), ("Λ6", 1)]
    ok = worst_row <= 1e-12 and worst_col <= 1e-12 and dim_sq == 12 and to_l6 and split
    return ok, {"row_orthogonality": _fmt(worst_row),
                "col_orthogonality": _fmt(worst_col),
                "sum_dim_sq": dim_sq, "trivial_x_spinor_is_L6": to_l6,
                "doublet_x_spinor_split": split}, "orthogonality <= 1e-12; exact algebra"


# --- 5 -----------------------------------------------------------------

def check_band_topology_markers(cfg: dict) -> tuple[bool, dict, str]:
    params = tb.TBParams.from_config(cfg)
    bands = tb.solve_bands(params, lat.standard_path("delta", 200))
    kmin, e_min = bands.conduction_minimum()
    ev_max = bands.valence_maximum()
    gap = e_min - ev_max
    e_l = float(np.linalg.eigvalsh(
        tb.build_hamiltonian(params, (0.5, 0.5, 0.5)))[tb.N_VALENCE])
    l_above_x0 = e_l - e_min
    s_lambda = tb.orbital_fractions_at(params, (0.25, 0.25, 0.25), tb.N_VALENCE).s_frac
    s_delta = tb.orbital_fractions_at(params, (0.0, 0.0, 0.85), tb.N_VALENCE).s_frac
    ok = (abs(kmin[2] - 0.85) <= 0.05
          and abs(gap - 1.1) <= 0.2
          and abs(l_above_x0 - 1.0) <= 0.3
          and s_lambda > s_delta)
    return ok, {"k_min": _fmt(float(kmin[2])), "indirect_gap_ev": _fmt(gap),
                "l_above_x0_ev": _fmt(l_above_x0),
                "s_frac_lambda_mid": _fmt(s_lambda),
                "s_frac_delta_085": _fmt(s_delta)}, \
        "k_min 0.85±0.05; gap 1.1±0.2 eV; L-X0 1.0±0.3 eV; s-fraction ordering"


# --- 6 -----------------------------------------------------------------

def check_dot_level_counts(cfg: dict) -> tuple[bool, dict, str]:
    spec = lat.LatticeSpec(a=cfg["lattice"]["a_nm"])
    got = {}
    ok = True
    for side, cells, electrons in ((5.0, 781, 1562), (2.0, 50, 100), (1.0, 6, 12)):
        res = lat.count_dot_levels(lat.DotGeometry(side), spec)
        got[f"{side:g}nm"] = (res.unit_cells, res.electrons)
        ok = ok and res.unit_cells == cells and res.electrons == electrons
    # 10 nm: (10/0.543)^3 = 6245.98, so the computed count is 6246, not the
    # published 6250 (that row is consistent with truncating a^3 to
    # 0.16 nm^3).  The toolkit reports the computed value; see README.
    res10 = lat.count_dot_levels(lat.DotGeometry(10.0), spec)
    got["10nm_computed"] = res10.unit_cells
    ok = ok and res10.unit_cells == 6246 and res10.unit_cells != 6250
    return ok, got, "781/50/6 cells, 1562/100/12 electrons exact; 10 nm -> 6246 (not 6250)"


# --- 7 -----------------------------------------------------------------

def check_valley_splitting_patterns(cfg: dict) -> tuple[bool, dict, str]:
    rng = np.random.default_rng(_SEED + 7)
    widths = np.linspace(2.0, 40.0, 20)
    ok = True
    worst_ratio = 0.0
    for _ in range(100):
        mt = rng.uniform(0.05, 0.5)
        ml = mt * rng.uniform(1.5, 12.0)
        x0 = vl.ValleySet.x0_family(ml, mt, growth_axis=(0, 0, 1))
        lset = vl.ValleySet.l_family(ml, mt, growth_axis=(1, 1, 1))
        for w in widths:
            rx = vl.split_valleys(x0, float(w))
            rl = vl.split_valleys(lset, float(w))
            ok = ok and rx.degeneracy_pattern() == (2, 4)
            ok = ok and rl.degeneracy_pattern() == (1, 3)
        full = vl.split_valleys(lset, 10.0).splitting_ev()
        half = vl.split_valleys(lset, 5.0).splitting_ev()
        ratio = half / full
        worst_ratio = max(worst_ratio, abs(ratio - 4.0))
        ok = ok and abs(ratio - 4.0) <= 4.0 * 1e-9
    return ok, {"pattern_x0": "2+4", "pattern_l": "1+3",
                "max_inv_square_error": _fmt(worst_ratio)}, \
        "patterns over 100 mass draws x 20 widths; splitting ∝ 1/W² to 1e-9"


# --- 8 -----------------------------------------------------------------

def check_injection_protocol(cfg: dict) -> tuple[bool, dict, str]:
    c = cfg["inject"]
    spec = inj.DotSpec.default(levels=c["levels"], l_index=c["l_index"],
                               spacing=c["level_spacing_ev"],
                               delta_e_l_gamma=c["delta_e_l_gamma_ev"],
                               charging_energy=c["u_ev"])
    delta = c["delta_e_l_gamma_ev"]
    lo, hi = spec.stop_window(delta)
    measured: dict = {}

    # (a) exactly seven electrons, the seventh on the L level, across the window
    ok_a = True
    for mu in (lo, 0.5 * (lo + hi), hi - 1e-9):
        state = inj.DeviceState.initial(spec, mu_s=mu, delta_e_l_gamma=delta)
        state.b1_open = True
        state, _ = inj.fill_from_source(state, spec)
        ok_a = ok_a and state.electron_count(inj.QUBIT1) == 7
        ok_a = ok_a and state.l_occupancy(inj.QUBIT1, spec) == 1
    measured["seven_electron_fill"] = ok_a

    # (b) a second transfer onto the occupied L level is blocked
    state = inj.DeviceState.initial(spec, delta_e_l_gamma=delta)
    state.b1_open = state.b2_open = True
    state, _ = inj.fill_from_source(state, spec)
    p1 = inj.StochasticParams(p_l=1.0, rng_seed=1)
    state, _ = inj.shuttle(state, spec, p1)       # lands on L of Qubit(2)
    state, _ = inj.fill_from_source(state, spec)  # replenish Qubit(1)
    before = state.occupancy.copy()
    state, ev = inj.shuttle(state, spec, p1)
    ok_b = (ev[-1].kind == "blockade"
            and np.array_equal(before, state.occupancy))
    measured["second_L_transfer_blocked"] = ok_b

    # (c) the p_L = 0 path: 6-electron signature, detect_X0, flush clears
    rep = inj.run_protocol(spec, inj.StochasticParams(p_l=0.0, rng_seed=2),
                           max_retries=1, delta_e_l_gamma=delta)
    kinds = [e.kind for e in rep.events]
    flush_events = [e for e in rep.events if e.kind == "drain_flush"]
    ok_c = (not rep.success
            and rep.transfers_per_pass == (6, 6)
            and "detect_X0" in kinds and "detect_L" not in kinds
            and len(flush_events) == 1 and flush_events[0].n_moved == 6
            and rep.final_state.l_occupancy(inj.QUBIT2, spec) == 0)
    measured["x0_signature_and_flush"] = ok_c

    # (d) geometric retry statistics at p_L = 0.5, 10 000 seeded trials
    params = inj.StochasticParams(p_l=0.5, rng_seed=c["seed"])
    stats_rate = inj.monte_carlo(spec, params, max_retries=2, trials=10_000,
                                 delta_e_l_gamma=delta)
    want = 1.0 - 0.5 ** 3
    sigma = math.sqrt(want * (1.0 - want) / stats_rate.trials)
    ok_rate = abs(stats_rate.success_rate - want) <= 3.0 * sigma
    stats_mean = inj.monte_carlo(spec, params, max_retries=20, trials=10_000,
                                 delta_e_l_gamma=delta)
    ok_mean = abs(stats_mean.mean_retries - 1.0) <= 0.1
    measured["success_rate"] = _fmt(stats_rate.success_rate)
    measured["success_rate_target"] = _fmt(want)
    measured["mean_retries"] = _fmt(stats_mean.mean_retries)
    ok_d = ok_rate and ok_mean

    # (e) same seed, byte-identical event logs
    kw = dict(max_retries=c["max_retries"], delta_e_l_gamma=delta)
    r1 = inj.run_protocol(spec, params, **kw)
    r2 = inj.run_protocol(spec, params, **kw)
    buf1, buf2 = io.StringIO(), io.StringIO()
    inj.events_to_csv(r1.events, buf1)
    inj.events_to_csv(r2.events, buf2)
    ok_e = r1.events == r2.events and buf1.getvalue() == buf2.getvalue()
    measured["reproducible_log"] = ok_e

    ok = ok_a and ok_b and ok_c and ok_d and ok_e
    return ok, measured, "seven-fill; blockade; X0 flush; geometric law 3σ/±0.1; reproducible"


# --- 9 -----------------------------------------------------------------

def _edge_mask(n: int) -> np.ndarray:
    m = np.zeros((n, n), bool)
    m[0, :] = m[-1, :] = m[:, 0] = m[:, -1] = True
    return m


def _sine_benchmark_error(n: int) -> float:
    h = 1.0 / (n - 1)
    y = np.arange(n) * h
    z = np.arange(n) * h
    dirichlet = _edge_mask(n)
    values = np.zeros((n, n))
    values[-1, :] = np.sin(np.pi * y)
    sol = es.solve_grid(np.ones((n, n)), dirichlet, values, h=h, method="direct")
    exact = np.outer(np.sinh(np.pi * z) / np.sinh(np.pi), np.sin(np.pi * y))
    return float(np.max(np.abs(sol.potential - exact)))


def check_poisson_benchmarks(cfg: dict) -> tuple[bool, dict, str]:
    p = cfg["poisson"]
    measured: dict = {}

    n = 33
    dirichlet = _edge_mask(n)
    values = np.full((n, n), 0.7) * dirichlet
    sol = es.solve_grid(np.ones((n, n)), dirichlet, values, method="direct")
    err_const = float(np.max(np.abs(sol.potential - 0.7)))
    measured["const_dirichlet_err"] = _fmt(err_const)

    dirichlet = np.zeros((n, n), bool)
    dirichlet[0, :] = dirichlet[-1, :] = True
    values = np.zeros((n, n))
    values[-1, :] = 1.0
    sol = es.solve_grid(np.ones((n, n)), dirichlet, values, h=1.0 / (n - 1),
                        method="direct")
    exact = np.repeat((np.arange(n) / (n - 1))[:, None], n, axis=1)
    err_plate = float(np.max(np.abs(sol.potential - exact)))
    measured["parallel_plate_err"] = _fmt(err_plate)

    errs = [_sine_benchmark_error(n) for n in (65, 129, 257)]
    r1, r2 = errs[0] / errs[1], errs[1] / errs[2]
    measured["convergence_ratios"] = (_fmt(r1), _fmt(r2))

    ok_fin = True
    mirror_worst = 0.0
    for variant in es.VARIANTS:
        geom = es.build_geometry(
            variant, p["w_nm"], p["h_nm"], p["lz_nm"], p["ly_nm"],
            fin_height_nm=p["fin_height_nm"], gate_ox_nm=p["gate_ox_nm"],
            gate_nm=p["gate_nm"], substrate_nm=p["substrate_nm"])
        bc = es.BoundarySpec(gate_voltage=p["vgate"],
                             substrate_voltage=p["vsub"],
                             eps_si=p["eps_si"], eps_ox=p["eps_ox"])
        sol = es.solve_poisson(geom, bc, tol=p["tol"], method="direct")
        lo = min(p["vgate"], p["vsub"]) - 1e-12
        hi = max(p["vgate"], p["vsub"]) + 1e-12
        ok_fin = ok_fin and bool(lo <= sol.potential.min()
                                 and sol.potential.max() <= hi)
        mirror = float(np.max(np.abs(sol.potential - sol.potential[:, ::-1])))
        mirror_worst = max(mirror_worst, mirror)
    measured["max_principle"] = ok_fin
    measured["mirror_asymmetry"] = _fmt(mirror_worst)

    ok = (err_const < 1e-10 and err_plate < 1e-10
          and abs(r1 - 4.0) <= 0.3 and abs(r2 - 4.0) <= 0.3
          and ok_fin and mirror_worst <= 10.0 * p["tol"])
    return ok, measured, "exact <1e-10; h-halving ratio 4.0±0.3; bounds+mirror on fins"


# --- 10 ----------------------------------------------------------------

def check_fin_gradient_contrast(cfg: dict) -> tuple[bool, dict, str]:
    p = cfg["poisson"]
    h = p["h_nm"]
    ok = True
    table = {}
    for w_cells in (3, 5, 8):
        # all lengths in whole cells so any h works unchanged
        w_nm = w_cells * h
        ly = (w_cells + 18) * h
        lz = 30 * h
        metrics = {}
        for variant in es.VARIANTS:
            geom = es.build_geometry(
                variant, w_nm, h, lz, ly,
                fin_height_nm=16 * h, gate_ox_nm=1 * h,
                gate_nm=2 * h, substrate_nm=4 * h, gate_wrap_nm=6 * h)
            for vg in (1.0, 2.0):
                bc = es.BoundarySpec(gate_voltage=vg, substrate_voltage=0.0,
                                     eps_si=p["eps_si"], eps_ox=p["eps_ox"])
                sol = es.solve_poisson(geom, bc, tol=p["tol"], method="direct")
                metrics[variant, vg] = es.fin_gradient_metric(sol, geom)
        for vg in (1.0, 2.0):
            flat, sharp = metrics["protruding", vg], metrics["planarized", vg]
            ok = ok and flat.max_abs < sharp.max_abs and flat.mean_abs < sharp.mean_abs
            table[f"W{w_cells}c_V{vg:g}"] = (
                _fmt(flat.mean_abs), _fmt(sharp.mean_abs))
    return ok, {"mean_grad_protruding_vs_planarized": table}, \
        "protruding < planarized for max and mean |dphi/dz|, all W and voltages"


# --- 11 ----------------------------------------------------------------

def _tree_digest(root: Path) -> dict[str, str]:
    out = {}
    for path in sorted(root.rglob("*")):
        if path.is_file() and path.name != "manifest.json":
            digest = hashlib.sha256(path.read_bytes()).hexdigest()
            out[str(path.relative_to(root))] = digest
    return out


def check_output_determinism(cfg: dict) -> tuple[bool, dict, str]:
    from . import cli  # deferred: cli imports this module

    overrides = {"bands": {"samples": 31},
                 "inject": {"trials": 100, "max_retries": 5},
                 "poisson": {"lz_nm": 8.0, "ly_nm": 8.0, "fin_height_nm": 3.0,
                             "gate_nm": 1.0, "substrate_nm": 1.0, "w_nm": 2.0}}
    digests = []
    for _ in range(2):
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp)
            with contextlib.redirect_stdout(io.StringIO()):
                cli.run_all_subcommands(cfg, out, overrides)
            digests.append(_tree_digest(out))
    same = digests[0] == digests[1]
    return same, {"files_compared": len(digests[0]), "identical": same}, \
        "byte-identical non-manifest outputs across two runs"


# --- standalone spin-orbit report ---------------------------------------

def _so_hermiticity(cfg: dict) -> tuple[bool, dict, str]:
    params = tb.TBParams.from_config(cfg)
    rng = np.random.default_rng(_SEED + 11)
    worst2 = worst8 = 0.0
    for _ in range(1000):
        field = _random_field(rng)
        k = rng.uniform(-2, 2, 3)
        m = so.h_total(field, k).matrix
        worst2 = max(worst2, float(np.max(np.abs(m - m.conj().T))))
        h8 = so.eight_spinor_hamiltonian(params, field, (0.3, 0.3, 0.3))
        worst8 = max(worst8, float(np.max(np.abs(h8 - h8.conj().T))))
    return worst2 <= 1e-14 and worst8 <= 1e-14, \
        {"max_2x2": worst2, "max_8x8": worst8}, "<= 1e-14"


def _so_trace_decomposition(cfg: dict) -> tuple[bool, dict, str]:
    rng = np.random.default_rng(_SEED + 12)
    worst_trace = worst_ident = 0.0
    for _ in range(1000):
        k = rng.uniform(-2, 2, 3)
        rash = so.h_rashba(so.MultipoleField(q_dip=tuple(rng.uniform(-2, 2, 3))), k)
        worst_trace = max(worst_trace, abs(complex(np.trace(rash.matrix))))
        tfield = so.MultipoleField(t_dip=tuple(rng.uniform(-2, 2, 3)))
        m = so.h_total(tfield, k).matrix
        ident_dev = max(abs(m[0, 1]), abs(m[1, 0]), abs(m[0, 0] - m[1, 1]))
        worst_ident = max(worst_ident, float(ident_dev))
    ok = worst_trace == 0.0 and worst_ident == 0.0
    return ok, {"max_rashba_trace": worst_trace,
                "max_t_term_nonscalar": worst_ident}, "exactly 0"


def _so_time_reversal(cfg: dict) -> tuple[bool, dict, str]:
    rng = np.random.default_rng(_SEED + 13)
    worst = 0.0
    for _ in range(1000):
        field = so.MultipoleField(q0=rng.uniform(-2, 2),
                                  q_dip=tuple(rng.uniform(-2, 2, 3)),
                                  g0=rng.uniform(-2, 2),
                                  q_xyz=rng.uniform(-2, 2))
        k = rng.uniform(-2, 2, 3)
        w_plus = so.h_total(field, k).eigenvalues()
        w_minus = so.h_total(field, -k).eigenvalues()
        worst = max(worst, float(np.max(np.abs(w_plus - w_minus))))
    return worst <= 1e-12, {"max_spectrum_shift": _fmt(worst)}, "<= 1e-12"


SPINORBIT_CHECKS: dict[str, Callable] = {
    "dso-lambda": check_dresselhaus_diagonal_cancellation,
    "lambda-overlap": check_lambda_axis_overlap_equality,
    "bsvsp": check_bsvsp_polarization_cancellation,
    "hermiticity": _so_hermiticity,
    "traceless": _so_trace_decomposition,
    "time-reversal": _so_time_reversal,
}


CHECKS: dict[str, tuple[str, Callable]] = {
    "1": ("dresselhaus_diagonal_cancellation", check_dresselhaus_diagonal_cancellation),
    "2": ("lambda_axis_overlap_equality", check_lambda_axis_overlap_equality),
    "3": ("bsvsp_polarization_cancellation", check_bsvsp_polarization_cancellation),
    "4": ("double_group_character_table", check_double_group_character_table),
    "5": ("band_topology_markers", check_band_topology_markers),
    "6": ("dot_level_counts", check_dot_level_counts),
    "7": ("valley_splitting_patterns", check_valley_splitting_patterns),
    "8": ("injection_protocol", check_injection_protocol),
    "9": ("poisson_benchmarks", check_poisson_benchmarks),
    "10": ("fin_gradient_contrast", check_fin_gradient_contrast),
    "11": ("output_determinism", check_output_determinism),
}


def run_all(cfg: dict, only: list[str] | None = None) -> list[CheckResult]:
    results = []
    for cid, (name, fn) in CHECKS.items():
        if only and cid not in only:
            continue
        t0 = time.perf_counter()
        passed, measured, threshold = fn(cfg)
        results.append(CheckResult(cid=cid, name=name, passed=bool(passed),
                                   measured=measured, threshold=threshold,
                                   runtime_s=time.perf_counter() - t0))
    return results


def report_json(results: list[CheckResult]) -> str:
    # runtimes deliberately live in the manifest, not here, so the report
    # is byte-stable for identical configs
    payload = [{"id": r.cid, "name": r.name, "passed": r.passed,
                "measured": r.measured, "threshold": r.threshold}
               for r in results]
    return json.dumps(payload, indent=2, default=str)


def report_csv(results: list[CheckResult]) -> str:
    lines = ["id,name,passed,threshold"]
    for r in results:
        lines.append(f"{r.cid},{r.name},{int(r.passed)},\"{r.threshold}\"")
    return "\n".join(lines) + "\n"
