"""Diamond-lattice geometry, reciprocal space and dot level counting.

Unit conventions used across the package are fixed here: lengths in nm,
wave vectors in units of 2*pi/a, energies in eV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Si lattice constant, nm
A_SI_NM = 0.543

#: absolute tolerance for k-vector comparisons
K_ATOL = 1e-12


@dataclass(frozen=True)
class LatticeSpec:
    """Diamond (face-centred cubic, two-atom basis) lattice."""

    a: float = A_SI_NM
    basis: tuple[tuple[float, float, float], tuple[float, float, float]] = (
        (0.0, 0.0, 0.0), (0.25, 0.25, 0.25))

    def __post_init__(self):
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise ValueError(f"lattice constant must be positive, got {self.a}")

    @property
    def primitive_vectors(self) -> np.ndarray:
        """FCC primitive translations as rows, in nm."""
        return 0.5 * self.a * np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], float)


@dataclass(frozen=True)
class KVector:
    """A reciprocal-space point, components in units of 2*pi/a."""

    kx: float
    ky: float
    kz: float

    def __post_init__(self):
        for c in (self.kx, self.ky, self.kz):
            if not math.isfinite(c):
                raise ValueError("k components must be finite")

    @classmethod
    def from_array(cls, arr) -> "KVector":
        x, y, z = np.asarray(arr, float)
        return cls(float(x), float(y), float(z))

    def as_array(self) -> np.ndarray:
        return np.array([self.kx, self.ky, self.kz])

    def to_inverse_nm(self, spec: LatticeSpec) -> np.ndarray:
        """Physical wave vector in rad/nm."""
        return self.as_array() * (2.0 * np.pi / spec.a)

    def isclose(self, other: "KVector", atol: float = K_ATOL) -> bool:
        return bool(np.all(np.abs(self.as_array() - other.as_array()) <= atol))

    def on_body_diagonal(self, atol: float = K_ATOL) -> bool:
        return abs(self.kx - self.ky) <= atol and abs(self.ky - self.kz) <= atol


#: high-symmetry points of the FCC Brillouin zone, units of 2*pi/a
HIGH_SYMMETRY_POINTS = {
    "Γ": KVector(0.0, 0.0, 0.0),
    "X": KVector(0.0, 0.0, 1.0),
    "L": KVector(0.5, 0.5, 0.5),
    "K": KVector(0.75, 0.75, 0.0),
}


@dataclass(frozen=True)
class PathSegment:
    label: str
    start: KVector
    end: KVector
    samples: int

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("a path segment needs at least 2 samples")

    def points(self) -> np.ndarray:
        t = np.linspace(0.0, 1.0, self.samples)[:, None]
        return (1.0 - t) * self.start.as_array() + t * self.end.as_array()


@dataclass(frozen=True)
class KPath:
    """Ordered piecewise-linear path through reciprocal space."""

    segments: tuple[PathSegment, ...]

    def points(self) -> np.ndarray:
        return np.concatenate([seg.points() for seg in self.segments])

    def arclength(self) -> np.ndarray:
        """Cumulative |dk| along the sampled path, units of 2*pi/a."""
        pts = self.points()
        ds = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        return np.concatenate([[0.0], np.cumsum(ds)])

    def point_labels(self) -> list[str]:
        return [seg.label for seg in self.segments for _ in range(seg.samples)]

    def to_csv(self, fh) -> None:
        fh.write("s,kx,ky,kz\n")
        for s, (kx, ky, kz) in zip(self.arclength(), self.points()):
            fh.write(f"{s:.12g},{kx:.12g},{ky:.12g},{kz:.12g}\n")


_PATH_ALIASES = {
    "Γ-Δ-X": "Γ-Δ-X", "G-D-X": "Γ-Δ-X", "DELTA": "Γ-Δ-X", "GDX": "Γ-Δ-X",
    "Γ-Λ-L": "Γ-Λ-L", "G-L-L": "Γ-Λ-L", "LAMBDA": "Γ-Λ-L", "GLL": "Γ-Λ-L",
    "K-L": "K-L", "KL": "K-L",
}

_PATH_DEFS = {
    "Γ-Δ-X": ("Δ", "Γ", "X"),
    "Γ-Λ-L": ("Λ", "Γ", "L"),
    "K-L": ("K", "K", "L"),
}


def standard_path(name: str, samples: int) -> KPath:
    """One of the named high-symmetry paths, uniformly sampled.

    ``name`` accepts the canonical form ("Γ-Δ-X", "Γ-Λ-L", "K-L") or the
    ASCII aliases "delta", "lambda", "kl".  The segment label names the
    high-symmetry line (Δ, Λ) or, for the zone-edge K-L cut, the starting
    point K.
    """
    canon = _PATH_ALIASES.get(name.strip().upper()) or _PATH_ALIASES.get(name.strip())
    if canon is None:
        raise ValueError(
            f"unknown path name {name!r}; expected one of {sorted(_PATH_DEFS)} "
            "or aliases delta/lambda/kl")
    label, a, b = _PATH_DEFS[canon]
    seg = PathSegment(label, HIGH_SYMMETRY_POINTS[a], HIGH_SYMMETRY_POINTS[b], samples)
    return KPath((seg,))


def reciprocal_basis(spec: LatticeSpec) -> tuple[KVector, KVector, KVector]:
    """Reciprocal primitive vectors b1, b2, b3 in units of 2*pi/a.

    Built from the cross-product construction; a_i . b_j = 2*pi*delta_ij
    holds to machine precision.
    """
    avec = spec.primitive_vectors
    volume = float(np.dot(avec[0], np.cross(avec[1], avec[2])))
    bs = []
    for i in range(3):
        b_nm = 2.0 * np.pi * np.cross(avec[(i + 1) % 3], avec[(i + 2) % 3]) / volume
        bs.append(KVector.from_array(b_nm * spec.a / (2.0 * np.pi)))
    return tuple(bs)


@dataclass(frozen=True)
class DotGeometry:
    """Cubic quantum dot."""

    side: float  # nm
    shape: str = "cube"

    def __post_init__(self):
        if self.shape != "cube":
            raise ValueError("only cubic dots are supported")
        if not (self.side > 0.0 and math.isfinite(self.side)):
            raise ValueError(f"dot side must be positive, got {self.side}")


@dataclass(frozen=True)
class DotLevelCount:
    unit_cells: int
    levels: int
    electrons: int


def count_dot_levels(geom: DotGeometry, spec: LatticeSpec,
                     rounding: str = "nearest") -> DotLevelCount:
    """Unit cells, one-band orbital levels and storable electrons of a cubic dot.

    The number of distinct crystal momenta in one band equals the number of
    unit cells N, and each momentum holds two electrons, so the dot stores
    2N electrons in that band.
    """
    cells = (geom.side / spec.a) ** 3
    if rounding == "nearest":
        n = int(round(cells))
    elif rounding == "floor":
        n = int(math.floor(cells))
    else:
        raise ValueError(f"rounding must be 'nearest' or 'floor', got {rounding!r}")
    return DotLevelCount(unit_cells=n, levels=n, electrons=2 * n)
