"""Empirical nearest-neighbour sp3s* tight binding for diamond-lattice Si.

Five orbitals per atom (s, px, py, pz, s*), two atoms per cell, spin
doubled: a 20x20 Bloch Hamiltonian.  The s* orbital is what lets a
nearest-neighbour model pull the conduction band down near the zone
boundary and produce the off-center minimum on the Δ line; a plain sp3
nearest-neighbour model cannot.

Parameters are supplied externally (see ``data/defaults.toml``); they are
empirical fitting quantities, not observables.  The intra-atomic p-shell
spin-orbit coupling enters as soc_lambda * L.S per atom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .lattice import KPath, KVector
from .spinorbit import P_SHELL_LS, SIGMA_0

#: bond vectors to the four nearest neighbours, units of a/4
BOND_DIRECTIONS = np.array(
    [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], float)

ORBITALS = ("s", "px", "py", "pz", "s*")
N_ORBITALS = len(ORBITALS)
MATRIX_DIM = 2 * N_ORBITALS * 2  # two atoms, two spins

#: number of occupied spin states per cell (8 valence electrons)
N_VALENCE = 8

#: orbital index of every basis state (atom-major, orbital, spin ordering)
_ORB_OF_STATE = np.array([(i % (2 * N_ORBITALS)) // 2 for i in range(MATRIX_DIM)])


class BandSolveError(RuntimeError):
    """Eigensolver failure, carrying the offending k-point index."""


@dataclass(frozen=True)
class TBParams:
    """On-site energies and bond integrals of the sp3s* model, eV."""

    es: float
    ep: float
    esstar: float
    vss: float
    vsp: float
    vxx: float
    vxy: float
    vsstarp: float
    soc_lambda: float = 0.0

    def __post_init__(self):
        for name in ("es", "ep", "esstar", "vss", "vsp", "vxx", "vxy",
                     "vsstarp", "soc_lambda"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"TB parameter {name} must be finite")
        if self.soc_lambda < 0:
            raise ValueError("soc_lambda must be >= 0")

    @classmethod
    def from_config(cls, cfg: dict) -> "TBParams":
        tb = cfg["tb"]
        return cls(es=tb["es"], ep=tb["ep"], esstar=tb["esstar"], vss=tb["vss"],
                   vsp=tb["vsp"], vxx=tb["vxx"], vxy=tb["vxy"],
                   vsstarp=tb["vsstarp"], soc_lambda=tb["soc_lambda"])

    # Two-center integrals.  The bond elements vss, vsp, vxx, vxy, vsstarp
    # follow the conventional sp3s* normalization (4 bonds, |cosines|=1/sqrt3).
    @property
    def sk_ss_sigma(self) -> float:
        return self.vss / 4.0

    @property
    def sk_sp_sigma(self) -> float:
        return math.sqrt(3.0) / 4.0 * self.vsp

    @property
    def sk_pp_sigma(self) -> float:
        return (self.vxx + 2.0 * self.vxy) / 4.0

    @property
    def sk_pp_pi(self) -> float:
        return (self.vxx - self.vxy) / 4.0

    @property
    def sk_sstarp_sigma(self) -> float:
        return math.sqrt(3.0) / 4.0 * self.vsstarp


def basis_labels() -> list[str]:
    out = []
    for atom in ("a", "b"):
        for orb in ORBITALS:
            for spin in ("↑", "↓"):
                out.append(f"|{orb}{spin}⟩_{atom}")
    return out


def _sk_block(params: TBParams, direction: np.ndarray) -> np.ndarray:
    """5x5 Slater-Koster block for one bond; ``direction`` is the unit vector
    from atom a to atom b.  Orbital order s, px, py, pz, s*."""
    n = direction
    blk = np.zeros((N_ORBITALS, N_ORBITALS))
    blk[0, 0] = params.sk_ss_sigma
    dp = params.sk_pp_sigma - params.sk_pp_pi
    for i in range(3):
        blk[0, 1 + i] = n[i] * params.sk_sp_sigma
        blk[1 + i, 0] = -n[i] * params.sk_sp_sigma
        blk[4, 1 + i] = n[i] * params.sk_sstarp_sigma
        blk[1 + i, 4] = -n[i] * params.sk_sstarp_sigma
        for j in range(3):
            blk[1 + i, 1 + j] = n[i] * n[j] * dp + (params.sk_pp_pi if i == j else 0.0)
    return blk


def build_hamiltonian(params: TBParams, k) -> np.ndarray:
    """Bloch Hamiltonian at ``k`` (units of 2*pi/a), 20x20 Hermitian.

    Basis ordering: atom a then atom b; within an atom s, px, py, pz, s*;
    spin fastest.  Phases carry the actual bond vectors, so the spectrum
    is gauge-equivalent to any other Bloch convention.
    """
    karr = k.as_array() if isinstance(k, KVector) else np.asarray(k, float)
    onsite = np.diag([params.es, params.ep, params.ep, params.ep, params.esstar])
    hop = np.zeros((N_ORBITALS, N_ORBITALS), complex)
    for d in BOND_DIRECTIONS:
        # k.d with d in units of a/4 and k in 2*pi/a -> (pi/2) k.d
        phase = np.exp(0.5j * np.pi * float(np.dot(karr, d)))
        hop += phase * _sk_block(params, d / math.sqrt(3.0))
    h_orb = np.zeros((2 * N_ORBITALS, 2 * N_ORBITALS), complex)
    h_orb[:N_ORBITALS, :N_ORBITALS] = onsite
    h_orb[N_ORBITALS:, N_ORBITALS:] = onsite
    h_orb[:N_ORBITALS, N_ORBITALS:] = hop
    h_orb[N_ORBITALS:, :N_ORBITALS] = hop.conj().T

    h = np.kron(h_orb, SIGMA_0)
    if params.soc_lambda:
        for atom in range(2):
            base = atom * 2 * N_ORBITALS + 2  # first p spin-orbital of the atom
            sl = slice(base, base + 6)
            h[sl, sl] += params.soc_lambda * P_SHELL_LS
    return h


@dataclass(frozen=True)
class BandSet:
    """Eigensolution along a k-path.

    ``energies[i]`` are ascending at every k-point; ``states[i][:, b]`` is
    the matching eigenvector.  ``order[i, b]`` maps continuous band line b
    to the sorted column at k-point i (resolved by eigenvector overlap).
    """

    path: KPath
    kpoints: np.ndarray
    arclength: np.ndarray
    energies: np.ndarray
    states: np.ndarray
    order: np.ndarray

    @property
    def n_k(self) -> int:
        return self.energies.shape[0]

    @property
    def n_bands(self) -> int:
        return self.energies.shape[1]

    def line_energies(self, band: int) -> np.ndarray:
        """Energies along continuous band line ``band``."""
        return self.energies[np.arange(self.n_k), self.order[:, band]]

    def valence_maximum(self) -> float:
        return float(self.energies[:, N_VALENCE - 1].max())

    def conduction_minimum(self) -> tuple[np.ndarray, float]:
        """(k vector, energy) of the lowest conduction band minimum.

        The sampled minimum is refined by a parabola through the three
        neighbouring samples when it is interior to the path.
        """
        band = self.energies[:, N_VALENCE]
        i = int(np.argmin(band))
        kmin, emin = self.kpoints[i], float(band[i])
        if 0 < i < len(band) - 1:
            y0, y1, y2 = band[i - 1], band[i], band[i + 1]
            denom = y0 - 2.0 * y1 + y2
            if denom > 0:
                shift = 0.5 * (y0 - y2) / denom
                kmin = self.kpoints[i] + shift * (self.kpoints[i + 1] - self.kpoints[i])
                emin = float(y1 - 0.125 * (y0 - y2) ** 2 / denom)
        return kmin, emin


def _greedy_assign(overlap: np.ndarray) -> np.ndarray:
    """Permutation assigning rows (previous bands) to columns (new states),
    largest overlaps first."""
    n = overlap.shape[0]
    perm = np.full(n, -1)
    work = overlap.copy()
    for _ in range(n):
        r, c = np.unravel_index(np.argmax(work), work.shape)
        perm[r] = c
        work[r, :] = -1.0
        work[:, c] = -1.0
    return perm


def solve_bands(params: TBParams, path: KPath) -> BandSet:
    """Diagonalize along the path and resolve band connectivity."""
    kpts = path.points()
    n_k = len(kpts)
    energies = np.empty((n_k, MATRIX_DIM))
    states = np.empty((n_k, MATRIX_DIM, MATRIX_DIM), complex)
    for i, k in enumerate(kpts):
        try:
            w, v = np.linalg.eigh(build_hamiltonian(params, k))
        except np.linalg.LinAlgError as exc:
            raise BandSolveError(f"eigensolver failed at k-point {i} ({k})") from exc
        energies[i], states[i] = w, v

    order = np.empty((n_k, MATRIX_DIM), int)
    order[0] = np.arange(MATRIX_DIM)
    for i in range(n_k - 1):
        prev = states[i][:, order[i]]
        ov = np.abs(prev.conj().T @ states[i + 1])
        order[i + 1] = _greedy_assign(ov)
    return BandSet(path=path, kpoints=kpts, arclength=path.arclength(),
                   energies=energies, states=states, order=order)


def connection_overlaps(band_set: BandSet, degeneracy_tol: float = 1e-8) -> np.ndarray:
    """Matched-band overlap between adjacent k-points, (n_k - 1, n_bands).

    For a band matched into a degenerate cluster the overlap is taken with
    the whole cluster subspace, which removes the arbitrary gauge rotation
    inside degenerate doublets.
    """
    out = np.empty((band_set.n_k - 1, band_set.n_bands))
    for i in range(band_set.n_k - 1):
        w_next = band_set.energies[i + 1]
        for b in range(band_set.n_bands):
            psi = band_set.states[i][:, band_set.order[i, b]]
            j = band_set.order[i + 1, b]
            cluster = np.abs(w_next - w_next[j]) < degeneracy_tol
            block = band_set.states[i + 1][:, cluster]
            out[i, b] = float(np.linalg.norm(block.conj().T @ psi))
    return out


@dataclass(frozen=True)
class OrbitalFractions:
    """Squared-amplitude weights on the orbital subspaces, spin-summed.

    s_frac + p_frac + sstar_frac = 1; pz_frac is the pz part of p_frac.
    """

    s_frac: float
    p_frac: float
    pz_frac: float
    sstar_frac: float

    def __post_init__(self):
        total = self.s_frac + self.p_frac + self.sstar_frac
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"orbital fractions sum to {total}, not 1")


def _fractions_of_states(block: np.ndarray) -> OrbitalFractions:
    weight = np.mean(np.abs(block) ** 2, axis=1)
    s = float(weight[_ORB_OF_STATE == 0].sum())
    p = float(weight[np.isin(_ORB_OF_STATE, (1, 2, 3))].sum())
    pz = float(weight[_ORB_OF_STATE == 3].sum())
    sstar = float(weight[_ORB_OF_STATE == 4].sum())
    return OrbitalFractions(s, p, pz, sstar)


def orbital_fractions(band_set: BandSet, band_index: int, k_index: int,
                      degeneracy_tol: float = 1e-8) -> OrbitalFractions:
    """Orbital composition of one band at one k-point.

    Averaged over the degenerate cluster containing ``band_index`` so the
    result does not depend on the arbitrary basis inside a degenerate
    subspace.
    """
    if not (0 <= k_index < band_set.n_k):
        raise IndexError(f"k_index {k_index} out of range")
    if not (0 <= band_index < band_set.n_bands):
        raise IndexError(f"band_index {band_index} out of range")
    w = band_set.energies[k_index]
    cluster = np.abs(w - w[band_index]) < degeneracy_tol
    return _fractions_of_states(band_set.states[k_index][:, cluster])


def orbital_fractions_at(params: TBParams, k, band_index: int,
                         degeneracy_tol: float = 1e-8) -> OrbitalFractions:
    """Orbital composition at a single k, without building a path."""
    w, v = np.linalg.eigh(build_hamiltonian(params, k))
    cluster = np.abs(w - w[band_index]) < degeneracy_tol
    return _fractions_of_states(v[:, cluster])


def bands_to_csv(band_set: BandSet, fh: TextIO) -> None:
    labels = band_set.path.point_labels()
    fh.write("s,k_label,band_index,energy_ev\n")
    for i in range(band_set.n_k):
        for b in range(band_set.n_bands):
            fh.write(f"{band_set.arclength[i]:.12g},{labels[i]},{b},"
                     f"{band_set.energies[i, b]:.12g}\n")


def fractions_to_csv(band_set: BandSet, fh: TextIO,
                     bands: list[int] | None = None) -> None:
    fh.write("band_index,k_index,s,p,pz,sstar\n")
    for b in bands if bands is not None else range(band_set.n_bands):
        for i in range(band_set.n_k):
            fr = orbital_fractions(band_set, b, i)
            fh.write(f"{b},{i},{fr.s_frac:.12g},{fr.p_frac:.12g},"
                     f"{fr.pz_frac:.12g},{fr.sstar_frac:.12g}\n")
