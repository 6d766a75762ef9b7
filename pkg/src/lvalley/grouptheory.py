"""Character-table engine for the C3v double group.

The double group of the threefold axis has six conjugacy classes
(E, Ebar, 2C3, 2C3bar, 3IxC2, 3IxC2bar; order 12) and six irreps
Λ1..Λ6.  Characters are exact small Gaussian integers, so products and
inner products incur no rounding beyond complex multiplication of exact
values.

Class-label note: the reflection classes are written "3I×C₂" /"3I×C̄₂"
(inversion times a twofold rotation); in Mulliken-style tables the same
operations appear as the vertical mirrors σv.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: (label, class size) in canonical column order
CLASSES: tuple[tuple[str, int], ...] = (
    ("E", 1), ("Ē", 1), ("2C₃", 2), ("2C̄₃", 2), ("3I×C₂", 3), ("3I×C̄₂", 3),
)

GROUP_ORDER = sum(size for _, size in CLASSES)

#: ASCII aliases accepted wherever an irrep name is expected
NAME_ALIASES = {
    "L1": "Λ1", "L2": "Λ2", "L3": "Λ3", "L4": "Λ4", "L5": "Λ5", "L6": "Λ6",
    "D12": "D1/2", "D_1/2": "D1/2",
}


class RepresentationError(Exception):
    """Character vector is not a valid (non-negative integer) representation."""


@dataclass(frozen=True)
class RepVector:
    """Characters of a (possibly reducible) representation, one per class."""

    characters: tuple[complex, ...]

    def __post_init__(self):
        if len(self.characters) != len(CLASSES):
            raise ValueError(
                f"expected {len(CLASSES)} characters, got {len(self.characters)}")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.characters, complex)

    @property
    def dimension(self) -> int:
        chi_e = self.characters[0]
        dim = chi_e.real if isinstance(chi_e, complex) else float(chi_e)
        if abs(complex(chi_e).imag) > 1e-14 or abs(dim - round(dim)) > 1e-14 or dim <= 0:
            raise RepresentationError(f"χ(E) = {chi_e} is not a positive integer")
        return int(round(dim))


def _rv(*chars) -> RepVector:
    return RepVector(tuple(complex(c) for c in chars))


I = 1j  # noqa: E741  (the table is conventionally written with i)

_IRREPS: dict[str, RepVector] = {
    "Λ1": _rv(1, 1, 1, 1, 1, 1),
    "Λ2": _rv(1, 1, 1, 1, -1, -1),
    "Λ3": _rv(2, 2, -1, -1, 0, 0),
    "Λ4": _rv(1, -1, -1, 1, I, -I),
    "Λ5": _rv(1, -1, -1, 1, -I, I),
    "Λ6": _rv(2, -2, 1, -1, 0, 0),
}

#: spin-1/2 rotation representation; as a C3v-double-group rep it equals Λ6
SPINOR_D12 = _rv(2, -2, 1, -1, 0, 0)


@dataclass(frozen=True)
class CharacterTable:
    classes: tuple[tuple[str, int], ...]
    irreps: dict[str, RepVector]

    @property
    def class_sizes(self) -> np.ndarray:
        return np.array([size for _, size in self.classes], float)

    @property
    def order(self) -> int:
        return int(self.class_sizes.sum())

    def irrep(self, name: str) -> RepVector:
        key = NAME_ALIASES.get(name.strip(), name.strip())
        if key == "D1/2":
            return SPINOR_D12
        try:
            return self.irreps[key]
        except KeyError:
            raise KeyError(
                f"unknown irrep {name!r}; known: {sorted(self.irreps)} and D1/2"
            ) from None

    def inner(self, a: RepVector, b: RepVector) -> complex:
        """Class-weighted character inner product <a, b>."""
        w = self.class_sizes
        return complex(np.sum(w * a.as_array() * b.as_array().conj()) / self.order)


def builtin_table() -> CharacterTable:
    """The C3v double-group character table."""
    return CharacterTable(classes=CLASSES, irreps=dict(_IRREPS))


def product(rep_a: RepVector, rep_b: RepVector) -> RepVector:
    """Direct (tensor) product: classwise character multiplication."""
    if len(rep_a.characters) != len(rep_b.characters):
        raise ValueError("representations have different class structures")
    return RepVector(tuple(a * b for a, b in zip(rep_a.characters, rep_b.characters)))


def decompose(rep: RepVector, table: CharacterTable,
              tol: float = 1e-9) -> list[tuple[str, int]]:
    """Multiplicities of each irrep in ``rep`` via character orthogonality.

    Raises RepresentationError if any multiplicity is not a non-negative
    integer within ``tol`` (the vector then is not a true representation).
    """
    out = []
    for name, irrep in table.irreps.items():
        m = table.inner(rep, irrep)
        m_int = round(m.real)
        if abs(m.imag) > tol or abs(m.real - m_int) > tol or m_int < 0:
            raise RepresentationError(
                f"multiplicity of {name} is {m:.3g}: not a representation")
        if m_int:
            out.append((name, int(m_int)))
    return out


def recompose(parts: list[tuple[str, int]], table: CharacterTable) -> RepVector:
    """Sum of irrep characters with the given multiplicities."""
    acc = np.zeros(len(CLASSES), complex)
    for name, mult in parts:
        acc += mult * table.irrep(name).as_array()
    return RepVector(tuple(acc))


def _fmt(c: complex) -> str:
    re, im = c.real, c.imag
    if im == 0:
        return f"{int(re)}" if re == int(re) else f"{re:g}"
    if re == 0:
        return {1.0: "i", -1.0: "-i"}.get(im, f"{im:g}i")
    return f"{c:g}"


def format_table(table: CharacterTable) -> str:
    """Aligned text rendering of the character table."""
    header = [""] + [f"{label}({size})" for label, size in table.classes]
    rows = [header]
    for name, rep in table.irreps.items():
        rows.append([name] + [_fmt(c) for c in rep.characters])
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(row, widths))
                     for row in rows)
