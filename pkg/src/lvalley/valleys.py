"""Effective-mass ellipsoid model of conduction valleys under confinement.

Each valley is a rotational ellipsoid with longitudinal mass ml along its
axis and transverse mass mt.  A quantum well along the growth axis sees
the projected confinement mass

    1/m_z = cos^2(theta)/ml + sin^2(theta)/mt,

and the leading particle-in-a-box level E = h^2 / (8 m_z W^2) orders the
valleys: larger confinement mass, lower level.  Six <100> valleys under
(001) growth split 2+4 (twofold ground state); four <111> half-pair
valleys under (111) growth split 1+3 with the aligned valley as the
non-degenerate ground state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants

_UNIT_TOL = 1e-12


def _unit(v, name: str) -> np.ndarray:
    arr = np.asarray(v, float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector")
    norm = float(np.linalg.norm(arr))
    if norm == 0:
        raise ValueError(f"{name} must be nonzero")
    return arr / norm


@dataclass(frozen=True)
class Valley:
    """One conduction-band valley: major axis plus (ml, mt) in units of m0."""

    axis: tuple[float, float, float]
    ml: float
    mt: float
    family: str  # "X0" or "L"

    def __post_init__(self):
        if self.ml <= 0 or self.mt <= 0:
            raise ValueError("effective masses must be positive")
        if self.family not in ("X0", "L"):
            raise ValueError(f"family must be 'X0' or 'L', got {self.family!r}")
        axis = _unit(self.axis, "valley axis")
        if abs(np.linalg.norm(axis) - 1.0) > _UNIT_TOL:
            raise ValueError("axis normalization failed")
        object.__setattr__(self, "axis", tuple(axis))


@dataclass(frozen=True)
class ValleySet:
    valleys: tuple[Valley, ...]
    growth_axis: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "growth_axis", tuple(_unit(self.growth_axis,
                                                            "growth axis")))

    @classmethod
    def x0_family(cls, ml: float, mt: float,
                  growth_axis=(0.0, 0.0, 1.0)) -> "ValleySet":
        """The six <100> valleys of the off-center Δ-line minima."""
        axes = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
        valleys = tuple(Valley(a, ml, mt, "X0") for a in axes)
        return cls(valleys, growth_axis)

    @classmethod
    def l_family(cls, ml: float, mt: float,
                 growth_axis=(1.0, 1.0, 1.0)) -> "ValleySet":
        """The four <111> zone-edge valleys.

        The eight half-ellipsoids at the zone boundary are identified
        pairwise across it, leaving four whole valleys.
        """
        axes = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
        valleys = tuple(Valley(a, ml, mt, "L") for a in axes)
        return cls(valleys, growth_axis)


def confinement_mass(valley: Valley, growth_axis=None) -> float:
    """Effective mass presented to the confinement direction, units of m0."""
    n = _unit(growth_axis if growth_axis is not None else valley.axis, "growth axis")
    cos2 = float(np.dot(valley.axis, n)) ** 2
    return 1.0 / (cos2 / valley.ml + (1.0 - cos2) / valley.mt)


def box_level_ev(m_rel: float, width_nm: float) -> float:
    """Leading particle-in-a-box level h^2/(8 m W^2) in eV."""
    w = width_nm * 1e-9
    e_joule = constants.h ** 2 / (8.0 * m_rel * constants.m_e * w * w)
    return e_joule / constants.e


@dataclass(frozen=True)
class SplittingGroup:
    m_z: float
    degeneracy: int
    energy_ev: float  # confinement level relative to the ground group


@dataclass(frozen=True)
class SplittingReport:
    groups: tuple[SplittingGroup, ...]
    ground_degeneracy: int
    well_width_nm: float

    def degeneracy_pattern(self) -> tuple[int, ...]:
        return tuple(g.degeneracy for g in self.groups)

    def splitting_ev(self) -> float:
        """Gap between the first excited group and the ground group (0 if none)."""
        if len(self.groups) < 2:
            return 0.0
        return self.groups[1].energy_ev


def split_valleys(valley_set: ValleySet, well_width_nm: float,
                  mass_tol: float = 1e-9) -> SplittingReport:
    """Group valleys by confinement mass and order them by box level."""
    if well_width_nm <= 0:
        raise ValueError("well width must be positive")
    masses = [confinement_mass(v, valley_set.growth_axis) for v in valley_set.valleys]
    groups: list[list[float]] = []
    for m in sorted(masses, reverse=True):  # heavy mass -> low level -> first
        if groups and abs(groups[-1][0] - m) < mass_tol:
            groups[-1].append(m)
        else:
            groups.append([m])
    e0 = box_level_ev(groups[0][0], well_width_nm)
    out = tuple(
        SplittingGroup(m_z=float(np.mean(g)), degeneracy=len(g),
                       energy_ev=box_level_ev(float(np.mean(g)), well_width_nm) - e0)
        for g in groups)
    return SplittingReport(groups=out, ground_degeneracy=out[0].degeneracy,
                           well_width_nm=well_width_nm)
