"""lvalley: modelling toolkit for L-valley (111) silicon spin qubits.

Subpackages cover the diamond lattice and reciprocal space, an empirical
sp3s* tight-binding model, multipole spin-orbit Hamiltonians and their
symmetry cancellations, the C3v double-group character table, effective-
mass valley splitting, the L-level electron injection protocol, and
finite-difference fin-MOS electrostatics.
"""

__version__ = "0.1.0"

from . import (  # noqa: F401
    config,
    electrostatics,
    grouptheory,
    injection,
    lattice,
    spinorbit,
    tightbinding,
    valleys,
    verification,
)
