#!/usr/bin/env python3
"""Band structure of Si along the two axes that matter for L-valley qubits.

Solves the sp3s* model along Γ-Δ-X and Γ-Λ-L, locates the off-center
conduction minimum, and compares the orbital character of the lowest
conduction band on both axes.  Writes band CSVs next to this script and,
if matplotlib is importable, a PNG of both panels.
"""

import pathlib

import numpy as np

from lvalley.config import load_config
from lvalley.lattice import standard_path
from lvalley.tightbinding import (
    N_VALENCE, TBParams, bands_to_csv, build_hamiltonian,
    orbital_fractions_at, solve_bands,
)

HERE = pathlib.Path(__file__).resolve().parent


def main():
    params = TBParams.from_config(load_config())
    delta = solve_bands(params, standard_path("delta", 201))
    lam = solve_bands(params, standard_path("lambda", 201))

    ev_max = delta.valence_maximum()
    kmin, e_min = delta.conduction_minimum()
    e_l = np.linalg.eigvalsh(build_hamiltonian(params, (0.5, 0.5, 0.5)))[N_VALENCE]

    print("sp3s* silicon, shipped parameter set")
    print(f"  valence-band maximum    : {ev_max:+.3f} eV (at Γ)")
    print(f"  conduction minimum      : k = {kmin[2]:.3f} (2π/a) along Δ, "
          f"{e_min - ev_max:.3f} eV above the valence top")
    print(f"  L-point conduction level: {e_l - ev_max:.3f} eV above the "
          f"valence top ({e_l - e_min:.3f} eV above the Δ minimum)")

    f_lam = orbital_fractions_at(params, (0.25, 0.25, 0.25), N_VALENCE)
    f_del = orbital_fractions_at(params, (0.0, 0.0, 0.85), N_VALENCE)
    print("\nlowest conduction band composition (spin-summed)")
    print(f"  Λ midpoint : s {f_lam.s_frac:.2f}  p {f_lam.p_frac:.2f} "
          f"(pz {f_lam.pz_frac:.2f})  s* {f_lam.sstar_frac:.2f}   <- s-like")
    print(f"  Δ at 0.85  : s {f_del.s_frac:.2f}  p {f_del.p_frac:.2f} "
          f"(pz {f_del.pz_frac:.2f})  s* {f_del.sstar_frac:.2f}   <- pz-like")

    for name, bs in (("bands_delta.csv", delta), ("bands_lambda.csv", lam)):
        with open(HERE / name, "w") as fh:
            bands_to_csv(bs, fh)
        print(f"\nwrote {HERE / name}")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; skipping the plot")
        return
    fig, axes = plt.subplots(1, 2, figsize=(9, 4), sharey=True)
    for ax, bs, title in ((axes[0], delta, "Γ-Δ-X"), (axes[1], lam, "Γ-Λ-L")):
        for b in range(bs.n_bands):
            ax.plot(bs.arclength, bs.energies[:, b] - ev_max, lw=0.8, color="tab:blue")
        ax.set_title(title)
        ax.set_ylim(-6, 6)
        ax.set_xlabel("|k| (2π/a)")
    axes[0].set_ylabel("E - E_v (eV)")
    fig.tight_layout()
    fig.savefig(HERE / "bands.png", dpi=150)
    print(f"wrote {HERE / 'bands.png'}")


if __name__ == "__main__":
    main()
