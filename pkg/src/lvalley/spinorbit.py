"""Multipole spin-orbit Hamiltonians on the two-spinor and eight-spinor bases.

The single-electron Hamiltonian is expanded in symmetry-breaking multipole
fields.  Implemented channels, in the 2x2 spin sector at wave vector k:

* electric monopole  q0 * k^2 * sigma_0          (free-electron-like term)
* electric dipole    q_dip . (k x sigma)         (Rashba spin-orbit)
* magnetic dipole    m_dip . sigma               (Zeeman)
* magnetic toroidal  (t_dip . k) * sigma_0
* electric toroidal  g0 * (k . sigma)
* electric octupole  sqrt(15) * q_xyz * [kx(ky^2-kz^2) sx + cyc.]
                                                 (Dresselhaus spin-orbit)

Higher multipole ranks are deliberately not implemented: with only s and p
valence orbitals there is nothing for rank >= 4 fields to couple to, and
:meth:`MultipoleField.from_multipoles` rejects them explicitly.

On the eight-spinor basis |s up>, |s dn>, |px up> ... |pz dn| the same
electric dipole field additionally acquires its orbital realization, an
s<->p matrix element, which together with the intra-atomic L.S coupling
produces the splitting of the p manifold into one-dimensional partner
bands plus doublets along the body diagonal.  `bsvsp_check` reports the
per-band spin polarizations and their cancellation within each degenerate
group ("band splitting with vanishing spin polarization").
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dfield
from typing import TYPE_CHECKING

import numpy as np

from .lattice import KVector

if TYPE_CHECKING:  # pragma: no cover
    from .tightbinding import TBParams

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

#: unit vector along the body diagonal (the Λ axis / growth direction)
BODY_DIAGONAL = np.ones(3) / math.sqrt(3.0)


def _levi(i: int, j: int, k: int) -> int:
    return int((i - j) * (j - k) * (k - i) / 2)


#: l=1 angular momentum matrices in the cartesian {px,py,pz} basis,
#: (L_i)_{jk} = -i eps_{ijk}, hbar = 1
L_CARTESIAN = tuple(
    np.array([[-1j * _levi(i, j, k) for k in range(3)] for j in range(3)], complex)
    for i in range(3))

#: L.S on the p shell (p orbital (x,y,z) major, spin minor): 6x6
P_SHELL_LS = sum(np.kron(L, s) for L, s in zip(L_CARTESIAN, PAULI)) / 2.0

#: basis labels of the eight-spinor space
EIGHT_SPINOR_LABELS = tuple(
    f"|{orb}{spin}⟩" for orb in ("s", "px", "py", "pz") for spin in ("↑", "↓"))


class LambdaAxisError(ValueError):
    """k does not lie on the body-diagonal (kx = ky = kz) axis."""


def _vec3(v, name: str) -> np.ndarray:
    arr = np.asarray(v, float)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be a finite 3-vector, got {v!r}")
    return arr


@dataclass(frozen=True)
class MultipoleField:
    """External symmetry-breaking fields, one entry per implemented channel."""

    q0: float = 0.0
    q_dip: tuple[float, float, float] = (0.0, 0.0, 0.0)
    m_dip: tuple[float, float, float] = (0.0, 0.0, 0.0)
    t_dip: tuple[float, float, float] = (0.0, 0.0, 0.0)
    g0: float = 0.0
    q_xyz: float = 0.0

    def __post_init__(self):
        for name in ("q0", "g0", "q_xyz"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        for name in ("q_dip", "m_dip", "t_dip"):
            object.__setattr__(self, name, tuple(_vec3(getattr(self, name), name)))

    @classmethod
    def from_multipoles(cls, components: dict) -> "MultipoleField":
        """Build a field from multipole-labelled components.

        Recognized keys (case-insensitive): Q0, Q1, M1, T1, G0, Qxyz.
        Any other multipole label raises NotImplementedError: the model is
        truncated at the channels listed in the module docstring.
        """
        kw: dict = {}
        mapping = {"q0": "q0", "q1": "q_dip", "m1": "m_dip", "t1": "t_dip",
                   "g0": "g0", "qxyz": "q_xyz"}
        for key, value in components.items():
            slot = mapping.get(str(key).strip().lower())
            if slot is None:
                raise NotImplementedError(
                    f"multipole channel {key!r} is not implemented; supported "
                    f"channels: {sorted(mapping)} (higher ranks are outside "
                    "the s/p-orbital truncation)")
            kw[slot] = value
        return cls(**kw)


@dataclass(frozen=True)
class SpinorHamiltonian:
    """2x2 Hermitian spin Hamiltonian with its generating (k, field)."""

    matrix: np.ndarray
    k: KVector
    field: MultipoleField

    def __post_init__(self):
        m = np.asarray(self.matrix, complex)
        if m.shape != (2, 2):
            raise ValueError("spinor Hamiltonian must be 2x2")
        if np.max(np.abs(m - m.conj().T)) > 1e-14:
            raise ValueError("spinor Hamiltonian is not Hermitian")
        object.__setattr__(self, "matrix", m)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def _as_k(k) -> KVector:
    return k if isinstance(k, KVector) else KVector.from_array(np.asarray(k, float))


def _rashba_matrix(q_dip, karr) -> np.ndarray:
    qx, qy, qz = q_dip
    kx, ky, kz = karr
    return (qx * (ky * SIGMA_Z - kz * SIGMA_Y)
            + qy * (kz * SIGMA_X - kx * SIGMA_Z)
            + qz * (kx * SIGMA_Y - ky * SIGMA_X))


def _dresselhaus_matrix(q_xyz, karr) -> np.ndarray:
    kx, ky, kz = karr
    pref = math.sqrt(15.0) * q_xyz
    return pref * (kx * (ky * ky - kz * kz) * SIGMA_X
                   + ky * (kz * kz - kx * kx) * SIGMA_Y
                   + kz * (kx * kx - ky * ky) * SIGMA_Z)


def h_rashba(field: MultipoleField, k) -> SpinorHamiltonian:
    """Rashba spin-orbit term: q_dip . (k x sigma).  Traceless by construction."""
    k = _as_k(k)
    return SpinorHamiltonian(_rashba_matrix(field.q_dip, k.as_array()), k, field)


def h_dresselhaus(field: MultipoleField, k) -> SpinorHamiltonian:
    """Dresselhaus (electric octupole) term.

    Vanishes identically, not just approximately, whenever kx = ky = kz:
    every bracket (ky^2 - kz^2) etc. is an exact floating-point zero.
    """
    k = _as_k(k)
    return SpinorHamiltonian(_dresselhaus_matrix(field.q_xyz, k.as_array()), k, field)


def h_lambda(field: MultipoleField, k) -> SpinorHamiltonian:
    """Spin-independent part plus the two spin-orbit channels.

    This is the Hamiltonian governing the body-diagonal axis physics:
    h = (q0 k^2 + t_dip.k) sigma_0 + h_rashba + h_dresselhaus.
    Zeeman and k.sigma channels are external perturbations and are not
    part of it.
    """
    k = _as_k(k)
    karr = k.as_array()
    scalar = field.q0 * float(karr @ karr) + float(np.dot(field.t_dip, karr))
    m = scalar * SIGMA_0
    m = m + _rashba_matrix(field.q_dip, karr)
    m = m + _dresselhaus_matrix(field.q_xyz, karr)
    return SpinorHamiltonian(m, k, field)


def h_total(field: MultipoleField, k) -> SpinorHamiltonian:
    """All implemented channels:

    q0 k^2 sigma_0 + q_dip.(k x sigma) + m_dip.sigma + (t_dip.k) sigma_0
    + g0 (k.sigma) + Dresselhaus.
    """
    k = _as_k(k)
    karr = k.as_array()
    m = h_lambda(field, k).matrix.copy()
    for comp, pauli in zip(field.m_dip, PAULI):
        m += comp * pauli
    for comp, pauli in zip(karr, PAULI):
        m += field.g0 * comp * pauli
    return SpinorHamiltonian(m, k, field)


def spinor_along(n: np.ndarray, sign: int) -> np.ndarray:
    """Normalized eigenspinor of sigma.n with eigenvalue ``sign`` (+1 or -1)."""
    n = np.asarray(n, float)
    n = n / np.linalg.norm(n)
    cos_half = math.sqrt((1.0 + n[2]) / 2.0)
    sin_half = math.sqrt((1.0 - n[2]) / 2.0)
    phase = complex(1.0, 0.0)
    if abs(n[0]) > 0 or abs(n[1]) > 0:
        phi = math.atan2(n[1], n[0])
        phase = complex(math.cos(phi), math.sin(phi))
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    if sign == +1:
        return np.array([cos_half, sin_half * phase], complex)
    return np.array([-sin_half * phase.conjugate(), cos_half], complex)


P_ORBITALS = ("px", "py", "pz")


def orbital_soc_expectation(p_orbital: str, spin_sign: int,
                            field: MultipoleField, k) -> float:
    """<p_a, +/-S | h_lambda | p_a, +/-S> on the body-diagonal axis.

    The spin quantization axis is the growth axis, i.e. the body diagonal
    itself.  Because the Rashba effective field q_dip x k is perpendicular
    to k, its on-axis expectation vanishes for every dipole field, and the
    octupole term is identically zero there, so opposite spins give equal
    energies: the two spin branches overlap in one band.
    """
    if p_orbital not in P_ORBITALS:
        raise ValueError(f"p_orbital must be one of {P_ORBITALS}, got {p_orbital!r}")
    k = _as_k(k)
    if not k.on_body_diagonal():
        raise LambdaAxisError(f"k = {k} is not on the kx = ky = kz axis")
    chi = spinor_along(BODY_DIAGONAL, spin_sign)
    h = h_lambda(field, k).matrix
    return float(np.real(chi.conj() @ h @ chi))


# ---------------------------------------------------------------------------
# eight-spinor machinery

def eight_spinor_hamiltonian(params: "TBParams", field: MultipoleField, k,
                             sp_dipole: float = 1.0) -> np.ndarray:
    """Single-site s/p Hamiltonian with spin, 8x8 Hermitian.

    On-site orbital energies and the intra-atomic L.S coupling come from
    ``params`` (es, ep, soc_lambda); the multipole field enters through the
    2x2 spin channels replicated over orbitals plus the orbital (s<->p
    dipole) realization of the polar field, scaled by ``sp_dipole``.
    """
    k = _as_k(k)
    h = np.kron(np.diag([params.es, params.ep, params.ep, params.ep]), SIGMA_0)
    h = h.astype(complex)
    h[2:, 2:] += params.soc_lambda * P_SHELL_LS
    h += np.kron(np.eye(4), h_total(field, k).matrix)
    dip = np.zeros((4, 4))
    dip[0, 1:] = sp_dipole * np.asarray(field.q_dip)
    dip[1:, 0] = dip[0, 1:]
    h += np.kron(dip, SIGMA_0)
    return h


def time_reversal(state: np.ndarray) -> np.ndarray:
    """Antiunitary time reversal on an eight-spinor: (I4 x -i sigma_y) K."""
    return np.kron(np.eye(4), -1j * SIGMA_Y) @ np.conj(state)


def eight_spinor_jn(n: np.ndarray = BODY_DIAGONAL) -> np.ndarray:
    """Total angular momentum component J.n on the eight-spinor basis.

    With a polar field along ``n`` and k on the same axis this commutes
    with the Hamiltonian, so its expectation labels the bands; the
    one-dimensional partner pair carries J.n = +/- 3/2.
    """
    l_orb = np.zeros((4, 4), complex)
    l_orb[1:, 1:] = sum(c * L for c, L in zip(n, L_CARTESIAN))
    s_half = sum(c * s for c, s in zip(n, PAULI)) / 2.0
    return np.kron(l_orb, SIGMA_0) + np.kron(np.eye(4), s_half)


@dataclass(frozen=True)
class PolarizedBand:
    """One eigenstate with its spin polarization and degeneracy partners."""

    energy: float
    spin_expectation: tuple[float, float, float]
    partners: tuple[int, ...]
    state: np.ndarray = dfield(repr=False, default=None)

    def __post_init__(self):
        if np.linalg.norm(self.spin_expectation) > 1.0 + 1e-10:
            raise ValueError("|<sigma>| exceeds 1 beyond tolerance")


def _degenerate_clusters(energies: np.ndarray, tol: float) -> list[list[int]]:
    clusters, current = [], [0]
    for i in range(1, len(energies)):
        if energies[i] - energies[current[-1]] < tol:
            current.append(i)
        else:
            clusters.append(current)
            current = [i]
    clusters.append(current)
    return clusters


def bsvsp_check(params: "TBParams", field: MultipoleField, k,
                sp_dipole: float = 1.0,
                degeneracy_tol: float = 1e-8) -> list[PolarizedBand]:
    """Spin polarizations of the eight-spinor bands at one Λ-axis k.

    Bands are grouped by energy within ``degeneracy_tol``.  Inside each
    degenerate group the basis is canonicalized by diagonalizing the spin
    projection along the body diagonal, which resolves time-reversal
    partner pairs; the reported per-band <sigma> are those of the
    canonical partners.  Summing <sigma> over any group reproduces the
    basis-independent subspace trace.
    """
    k = _as_k(k)
    if not k.on_body_diagonal():
        raise LambdaAxisError(f"k = {k} is not on the kx = ky = kz axis")
    h = eight_spinor_hamiltonian(params, field, k, sp_dipole)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise RuntimeError(f"eigensolver failed at k = {k}") from exc

    sig = [np.kron(np.eye(4), s) for s in PAULI]
    sig_n = sum(n * s for n, s in zip(BODY_DIAGONAL, sig))
    bands: list[PolarizedBand | None] = [None] * len(w)
    for cluster in _degenerate_clusters(w, degeneracy_tol):
        sub = v[:, cluster]
        proj = sub.conj().T @ sig_n @ sub
        _, u = np.linalg.eigh(proj)
        canon = sub @ u
        for pos, idx in enumerate(cluster):
            psi = canon[:, pos]
            pol = tuple(float(np.real(psi.conj() @ s @ psi)) for s in sig)
            partners = tuple(j for j in cluster if j != idx)
            bands[idx] = PolarizedBand(float(w[idx]), pol, partners, psi)
    return bands


def group_spin_sums(bands: list[PolarizedBand]) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """Summed spin expectation of each degenerate group."""
    seen, out = set(), []
    for i, band in enumerate(bands):
        group = tuple(sorted((i,) + band.partners))
        if group in seen:
            continue
        seen.add(group)
        total = np.sum([bands[j].spin_expectation for j in group], axis=0)
        out.append((group, total))
    return out
