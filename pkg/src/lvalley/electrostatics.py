"""Finite-difference Poisson electrostatics of fin-MOS qubit cross-sections.

The grid is a 2D z-y cross-section (z = growth direction, index 0 rising
from the substrate; y = lateral, index 1).  Two device variants:

* ``planarized``: the fin is buried, oxide fills up to the fin top, a
  flat gate of width W sits on a thin gate-oxide layer above the fin;
* ``protruding``: the fin sticks out and the gate electrode straddles it,
  separated by a conformal oxide shell, with vacuum elsewhere.

Gate and substrate cells are Dirichlet; everything else solves
div(eps grad phi) = -rho on a 5-point stencil with harmonic-mean face
permittivities (flux continuity at dielectric interfaces).  The exterior
boundary is zero-flux.  ``fixed_potential`` mode instead pins the fin
cells that touch oxide to a supplied interface potential.

The linear system is small enough for a sparse direct solve, which is the
default; a red-black SOR iteration is provided as well and both are held
to the same relative-residual contract.  The kernel is dimension-agnostic:
:func:`solve_grid` accepts 2D or 3D arrays, and :func:`solve_poisson_3d`
extrudes a fin cross-section along the fin direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import TextIO

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla


class Region(IntEnum):
    SI_FIN = 0
    OXIDE = 1
    GATE = 2
    SUBSTRATE = 3
    VACUUM = 4


VARIANTS = ("planarized", "protruding")


class ConvergenceError(RuntimeError):
    """Iteration cap reached; carries the last relative residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


def _cells(length_nm: float, h_nm: float, what: str) -> int:
    n = length_nm / h_nm
    if abs(n - round(n)) > 1e-9:
        raise ValueError(f"cell size {h_nm} nm does not divide {what} = {length_nm} nm")
    return int(round(n))


@dataclass(frozen=True)
class Geometry:
    """Region map of one cross-section plus the construction lengths.

    ``gated_rows`` is the z-range of fin cells inside the gate footprint:
    the whole fin column for a planarized device (the gate faces it from
    above) and the wrapped upper segment for a protruding device.
    """

    region: np.ndarray  # (nz, ny) of Region values
    h_nm: float
    w_nm: float
    variant: str
    fin_rows: tuple[int, int]  # half-open z-index range of the fin
    fin_cols: tuple[int, int]  # half-open y-index range of the fin
    gated_rows: tuple[int, int]

    @property
    def shape(self) -> tuple[int, int]:
        return self.region.shape

    def mask(self, which: Region) -> np.ndarray:
        return self.region == int(which)

    def extent_nm(self) -> tuple[float, float]:
        nz, ny = self.region.shape
        return nz * self.h_nm, ny * self.h_nm


def build_geometry(variant: str, w_nm: float, h_nm: float,
                   lz_nm: float, ly_nm: float, *,
                   fin_height_nm: float = 6.0, gate_ox_nm: float = 1.0,
                   gate_nm: float = 2.0, substrate_nm: float = 2.0,
                   gate_wrap_nm: float | None = None) -> Geometry:
    """Rasterize one fin cross-section onto a uniform cell grid.

    All lengths must be integer multiples of ``h_nm``.  The fin is centred
    in y, which requires the leftover width (ly - w) to split evenly; the
    resulting region map is mirror symmetric about the fin axis.

    For the protruding variant ``gate_wrap_nm`` sets how far down from the
    fin top the straddling gate (and its conformal oxide shell) reaches;
    the default is half the fin height.  The drop toward the substrate
    then happens below the gated segment, where the dot is not formed.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if min(w_nm, h_nm, lz_nm, ly_nm) <= 0:
        raise ValueError("all lengths must be positive")
    nz = _cells(lz_nm, h_nm, "domain height")
    ny = _cells(ly_nm, h_nm, "domain width")
    n_w = _cells(w_nm, h_nm, "fin width")
    n_fin = _cells(fin_height_nm, h_nm, "fin height")
    n_ox = _cells(gate_ox_nm, h_nm, "gate oxide")
    n_gate = _cells(gate_nm, h_nm, "gate thickness")
    n_sub = _cells(substrate_nm, h_nm, "substrate")
    if gate_wrap_nm is None:
        n_wrap = max(n_fin // 2, 1)
    else:
        n_wrap = _cells(gate_wrap_nm, h_nm, "gate wrap depth")
    if not (1 <= n_wrap <= n_fin):
        raise ValueError("gate wrap depth must lie between one cell and the fin height")
    if n_w > ny:
        raise ValueError(f"fin width {w_nm} nm exceeds the domain width {ly_nm} nm")
    if (ny - n_w) % 2:
        raise ValueError("fin cannot be centred: (ly - w)/h must be even")
    top_needed = n_sub + n_fin + n_ox + n_gate
    if top_needed > nz:
        raise ValueError("domain height too small for substrate+fin+oxide+gate")

    y0 = (ny - n_w) // 2
    y1 = y0 + n_w
    z_fin0, z_fin1 = n_sub, n_sub + n_fin

    region = np.full((nz, ny), int(Region.OXIDE), dtype=np.int8)
    region[:n_sub, :] = Region.SUBSTRATE
    region[z_fin0:z_fin1, y0:y1] = Region.SI_FIN

    if variant == "planarized":
        # oxide beside the fin is already in place; add the gate stack
        region[z_fin1:z_fin1 + n_ox, :] = Region.OXIDE
        region[z_fin1 + n_ox:z_fin1 + n_ox + n_gate, y0:y1] = Region.GATE
        gated = (z_fin0, z_fin1)
    else:
        region[z_fin0:, :] = np.where(
            region[z_fin0:, :] == Region.SI_FIN, Region.SI_FIN, Region.VACUUM)
        shell0, shell1 = y0 - n_ox, y1 + n_ox
        gate0, gate1 = shell0 - n_gate, shell1 + n_gate
        if gate0 < 0 or gate1 > ny:
            raise ValueError("domain too narrow for the wrap-around gate")
        z_wrap0 = z_fin1 - n_wrap
        zs = np.arange(nz)[:, None]
        ys = np.arange(ny)[None, :]
        in_shell = ((zs >= z_wrap0) & (zs < z_fin1 + n_ox)
                    & (ys >= shell0) & (ys < shell1))
        in_gate = ((zs >= z_wrap0) & (zs < z_fin1 + n_ox + n_gate)
                   & (ys >= gate0) & (ys < gate1))
        free = region[...] == Region.VACUUM
        region[in_shell & free] = Region.OXIDE
        free = region[...] == Region.VACUUM
        region[in_gate & free] = Region.GATE
        gated = (z_wrap0, z_fin1)

    return Geometry(region=region, h_nm=h_nm, w_nm=w_nm, variant=variant,
                    fin_rows=(z_fin0, z_fin1), fin_cols=(y0, y1),
                    gated_rows=gated)


@dataclass(frozen=True)
class BoundarySpec:
    gate_voltage: float
    substrate_voltage: float = 0.0
    interface_mode: str = "dielectric_continuity"
    interface_potential: float | None = None
    eps_si: float = 11.7
    eps_ox: float = 3.9

    def __post_init__(self):
        if self.interface_mode not in ("dielectric_continuity", "fixed_potential"):
            raise ValueError(f"unknown interface_mode {self.interface_mode!r}")
        if self.interface_mode == "fixed_potential" and self.interface_potential is None:
            raise ValueError("fixed_potential mode needs interface_potential")
        if self.eps_si <= 0 or self.eps_ox <= 0:
            raise ValueError("permittivities must be positive")


@dataclass(frozen=True)
class FieldGrid:
    potential: np.ndarray
    residual: float
    iterations: int


def _lo(ndim: int, axis: int) -> tuple[slice, ...]:
    return tuple(slice(None, -1) if a == axis else slice(None) for a in range(ndim))


def _hi(ndim: int, axis: int) -> tuple[slice, ...]:
    return tuple(slice(1, None) if a == axis else slice(None) for a in range(ndim))


def _neighbor_weights(eps: np.ndarray, dirichlet: np.ndarray):
    """Stencil weights to the +/- neighbour along each axis (0 across the
    exterior boundary).

    Faces take the harmonic mean of the adjacent permittivities; a face
    shared with a Dirichlet (electrode) cell takes the dielectric side's
    value, since the electrode surface lies at the face.  Works for any
    grid dimensionality, so the same kernel serves the 2D cross-sections
    and extruded 3D boxes.
    """
    ndim = eps.ndim
    out = []
    for axis in range(ndim):
        lo, hi = _lo(ndim, axis), _hi(ndim, axis)
        e_a, e_b = eps[lo].copy(), eps[hi].copy()
        d_a, d_b = dirichlet[lo], dirichlet[hi]
        e_a[d_a & ~d_b] = e_b[d_a & ~d_b]
        e_b[d_b & ~d_a] = e_a[d_b & ~d_a]
        face = 2.0 * e_a * e_b / (e_a + e_b)
        w_plus = np.zeros_like(eps)
        w_minus = np.zeros_like(eps)
        w_plus[lo] = face
        w_minus[hi] = face
        out.append((w_plus, w_minus))
    return out


def _apply_operator(full: np.ndarray, weights) -> np.ndarray:
    ndim = full.ndim
    diag = sum(wp + wm for wp, wm in weights)
    lap = -diag * full
    for axis, (w_plus, w_minus) in enumerate(weights):
        lo, hi = _lo(ndim, axis), _hi(ndim, axis)
        lap[lo] += w_plus[lo] * full[hi]
        lap[hi] += w_minus[hi] * full[lo]
    return lap


def _residual_norm(phi, weights, dirichlet, values, rhs) -> float:
    full = np.where(dirichlet, values, phi)
    r = (_apply_operator(full, weights) + rhs)[~dirichlet]
    scale = float(np.linalg.norm(rhs[~dirichlet]))
    if scale == 0.0:
        # pure boundary-driven problem: scale by the Dirichlet data spread
        scale = max(float(np.max(np.abs(values[dirichlet]), initial=0.0)), 1.0)
    return float(np.linalg.norm(r)) / scale


def solve_grid(eps: np.ndarray, dirichlet: np.ndarray, values: np.ndarray,
               charge: np.ndarray | None = None, h: float = 1.0,
               tol: float = 1e-8, max_iter: int = 100_000,
               method: str = "direct", sweep: str = "rb",
               omega: float | None = None) -> FieldGrid:
    """Solve div(eps grad phi) = -charge with the given Dirichlet cells.

    ``charge`` is the scaled density rho/eps0 in V per length^2 (matching
    ``h``); exterior boundaries are zero-flux.  Accepts 2D cross-section
    grids or 3D boxes (same contracts, 5- resp. 7-point stencil).  Returns
    the potential on the full grid with Dirichlet cells holding their
    imposed values.
    """
    eps = np.asarray(eps, float)
    dirichlet = np.asarray(dirichlet, bool)
    values = np.asarray(values, float)
    rhs_cell = (np.zeros_like(eps) if charge is None
                else np.asarray(charge, float) * h * h)
    weights = _neighbor_weights(eps, dirichlet)
    if not np.any(~dirichlet):
        return FieldGrid(values.copy(), 0.0, 0)

    if method == "direct":
        phi = _solve_direct(weights, dirichlet, values, rhs_cell)
        res = _residual_norm(phi, weights, dirichlet, values, rhs_cell)
        full = np.where(dirichlet, values, phi)
        return FieldGrid(full, res, 0)
    if method == "sor":
        return _solve_sor(weights, dirichlet, values, rhs_cell,
                          tol=tol, max_iter=max_iter, sweep=sweep, omega=omega)
    raise ValueError(f"unknown method {method!r}")


def _solve_direct(weights, dirichlet, values, rhs_cell) -> np.ndarray:
    shape = dirichlet.shape
    ndim = dirichlet.ndim
    idx = -np.ones(shape, dtype=np.int64)
    free = ~dirichlet
    n_free = int(free.sum())
    idx[free] = np.arange(n_free)

    rows, cols, vals = [], [], []
    diag = sum(wp + wm for wp, wm in weights)[free]
    b = rhs_cell[free].astype(float)

    def couple(wgt, axis, step):
        src = np.zeros(shape, bool)
        src[_lo(ndim, axis) if step > 0 else _hi(ndim, axis)] = True
        src &= free
        nb = list(np.where(src))
        nb[axis] = nb[axis] + step
        nb = tuple(nb)
        w = wgt[src]
        own = idx[src]
        ff = ~dirichlet[nb]
        rows.extend(own[ff]); cols.extend(idx[nb][ff]); vals.extend(-w[ff])
        # Dirichlet neighbours land on the RHS
        np.add.at(b, own[~ff], w[~ff] * values[nb][~ff])

    for axis, (w_plus, w_minus) in enumerate(weights):
        couple(w_plus, axis, +1)
        couple(w_minus, axis, -1)

    rows.extend(range(n_free)); cols.extend(range(n_free)); vals.extend(diag)
    a = sp.csr_matrix((vals, (rows, cols)), shape=(n_free, n_free))
    x = spla.spsolve(a.tocsc(), b)
    phi = np.zeros(shape)
    phi[free] = x
    return phi


def _optimal_omega(shape: tuple[int, ...]) -> float:
    rho = math.cos(math.pi / max(shape))
    return 2.0 / (1.0 + math.sqrt(1.0 - rho * rho))


def _gauss_seidel_estimate(phi, weights, rhs_cell):
    ndim = phi.ndim
    diag = sum(wp + wm for wp, wm in weights)
    acc = rhs_cell.copy()
    for axis, (w_plus, w_minus) in enumerate(weights):
        lo, hi = _lo(ndim, axis), _hi(ndim, axis)
        acc[lo] += w_plus[lo] * phi[hi]
        acc[hi] += w_minus[hi] * phi[lo]
    return np.divide(acc, diag, out=np.zeros_like(acc), where=diag > 0)


def _solve_sor(weights, dirichlet, values, rhs_cell, *, tol, max_iter,
               sweep, omega) -> FieldGrid:
    if omega is None:
        omega = _optimal_omega(dirichlet.shape)
    colors = (np.indices(dirichlet.shape).sum(axis=0) % 2) == 0
    order = (colors, ~colors) if sweep == "rb" else (~colors, colors)
    free = ~dirichlet
    phi = np.where(dirichlet, values, 0.0)
    for it in range(1, max_iter + 1):
        for color in order:
            act = color & free
            gs = _gauss_seidel_estimate(phi, weights, rhs_cell)
            phi[act] = (1.0 - omega) * phi[act] + omega * gs[act]
        if it % 16 == 0 or it == max_iter:
            res = _residual_norm(phi, weights, dirichlet, values, rhs_cell)
            if res < tol:
                return FieldGrid(np.where(dirichlet, values, phi), res, it)
    res = _residual_norm(phi, weights, dirichlet, values, rhs_cell)
    raise ConvergenceError(
        f"SOR did not reach tol={tol} in {max_iter} sweeps "
        f"(last residual {res:.3e})", res)


def solve_poisson_3d(geom: Geometry, bc: BoundarySpec, lx_nm: float,
                     charge: np.ndarray | None = None, tol: float = 1e-8,
                     max_iter: int = 100_000, method: str = "direct",
                     sweep: str = "rb") -> FieldGrid:
    """Solve the fin problem on a 3D box: the cross-section extruded along
    the fin direction x (leading array axis), zero-flux at the x ends.

    Same contracts as :func:`solve_poisson`; the returned potential has
    shape (nx, nz, ny).  With x-uniform boundary data the solution is
    x-independent and matches the 2D cross-section solve.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n_x = _cells(lx_nm, geom.h_nm, "extrusion length")
    eps2, dirichlet2, values2 = _fin_problem_arrays(geom, bc)
    tile = lambda a: np.broadcast_to(a, (n_x,) + a.shape).copy()
    return solve_grid(tile(eps2), tile(dirichlet2), tile(values2),
                      charge=charge, h=geom.h_nm, tol=tol, max_iter=max_iter,
                      method=method, sweep=sweep)


def _interface_cells(geom: Geometry) -> np.ndarray:
    """Fin cells with at least one oxide neighbour."""
    fin = geom.mask(Region.SI_FIN)
    ox = geom.mask(Region.OXIDE)
    out = np.zeros_like(fin)
    out[:-1, :] |= fin[:-1, :] & ox[1:, :]
    out[1:, :] |= fin[1:, :] & ox[:-1, :]
    out[:, :-1] |= fin[:, :-1] & ox[:, 1:]
    out[:, 1:] |= fin[:, 1:] & ox[:, :-1]
    return out


def _fin_problem_arrays(geom: Geometry, bc: BoundarySpec):
    eps = np.ones(geom.shape)
    eps[geom.mask(Region.SI_FIN)] = bc.eps_si
    eps[geom.mask(Region.OXIDE)] = bc.eps_ox

    dirichlet = geom.mask(Region.GATE) | geom.mask(Region.SUBSTRATE)
    values = np.zeros(geom.shape)
    values[geom.mask(Region.GATE)] = bc.gate_voltage
    values[geom.mask(Region.SUBSTRATE)] = bc.substrate_voltage
    if bc.interface_mode == "fixed_potential":
        iface = _interface_cells(geom)
        dirichlet |= iface
        values[iface] = bc.interface_potential
    return eps, dirichlet, values


def solve_poisson(geom: Geometry, bc: BoundarySpec,
                  charge: np.ndarray | None = None, tol: float = 1e-8,
                  max_iter: int = 100_000, method: str = "direct",
                  sweep: str = "rb") -> FieldGrid:
    """Assemble the Dirichlet data for a fin geometry and solve."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    eps, dirichlet, values = _fin_problem_arrays(geom, bc)
    return solve_grid(eps, dirichlet, values, charge=charge, h=geom.h_nm,
                      tol=tol, max_iter=max_iter, method=method, sweep=sweep)


def contour_quantize(field: FieldGrid, n_levels: int = 10) -> np.ndarray:
    """Uniform quantization of the potential into ``n_levels`` bands."""
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    phi = field.potential
    lo, hi = float(phi.min()), float(phi.max())
    if hi - lo <= 1e-12 * max(abs(lo), abs(hi), 1.0):
        return np.zeros(phi.shape, dtype=np.int64)  # constant field: one band
    edges = np.linspace(lo, hi, n_levels + 1)[1:-1]
    return np.digitize(phi, edges)


@dataclass(frozen=True)
class GradientMetric:
    max_abs: float   # V/nm
    mean_abs: float  # V/nm


def fin_gradient_metric(field: FieldGrid, geom: Geometry) -> GradientMetric:
    """Growth-direction |dphi/dz| statistics over the fin cells inside the
    gate footprint (``geom.gated_rows``), where the dot is formed."""
    z0, z1 = geom.gated_rows
    y0, y1 = geom.fin_cols
    if z1 <= z0 or y1 <= y0:
        raise ValueError("geometry has an empty fin region")
    phi = field.potential
    grad = (phi[z0 + 1:z1 + 1, y0:y1] - phi[z0 - 1:z1 - 1, y0:y1]) / (2.0 * geom.h_nm)
    mag = np.abs(grad)
    return GradientMetric(max_abs=float(mag.max()), mean_abs=float(mag.mean()))


def potential_to_csv(field: FieldGrid, geom: Geometry, fh: TextIO) -> None:
    fh.write("z,y,phi\n")
    nz, ny = field.potential.shape
    h = geom.h_nm
    for i in range(nz):
        for j in range(ny):
            fh.write(f"{(i + 0.5) * h:.10g},{(j + 0.5) * h:.10g},"
                     f"{field.potential[i, j]:.10g}\n")


def contours_to_pgm(labels: np.ndarray, fh: TextIO, n_levels: int = 10) -> None:
    """ASCII portable graymap of the quantized contour bands, top row first."""
    nz, ny = labels.shape
    fh.write(f"P2\n{ny} {nz}\n255\n")
    scale = 255 // max(n_levels - 1, 1)
    for i in range(nz - 1, -1, -1):
        fh.write(" ".join(str(int(v) * scale) for v in labels[i]) + "\n")


def contours_to_csv(labels: np.ndarray, geom: Geometry, fh: TextIO) -> None:
    fh.write("z,y,band\n")
    nz, ny = labels.shape
    h = geom.h_nm
    for i in range(nz):
        for j in range(ny):
            fh.write(f"{(i + 0.5) * h:.10g},{(j + 0.5) * h:.10g},{int(labels[i, j])}\n")
