"""Discrete-event simulation of the L-level electron injection protocol.

Chain: source - Qubit(1) - Qubit(2) - drain, with barrier gates B1, B2, B3.
Each dot carries a ladder of spin-degenerate orbital levels; one of them
(the "L level") is the target.  The protocol:

1.  fill: with B1 open, electrons enter Qubit(1) from the source one by
    one in ascending level order while affordable at mu_S, stopping as
    soon as the first electron sits on the L level;
2.  shuttle: with B2 open, the L electron of Qubit(1) tunnels to
    Qubit(2).  It lands on the L level with probability p_L, otherwise it
    relaxes into the lowest empty lower level.  A second transfer onto an
    occupied L level is Coulomb blocked, which terminates the series;
3.  detect: a single transfer followed by blockade is the L signature;
    a multi-electron succession is the lower-level signature;
4.  on the lower-level signature the drain flushes those electrons
    (mu_D below them, B3 open) and the pass is retried.

Timing is event-stepped; tunnelling rates are abstracted into the single
probability p_L.  Within one injection series the relaxation channel is
drawn once and then held (the microscopic path is a property of the
junction during the series, not a fresh coin per electron); this makes
the series signature binary and the retry count exactly geometric in
p_L.  The draw is re-armed when the drain flush ends a series.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, TextIO

import numpy as np

EVENT_KINDS = ("inject", "tunnel_L_to_L", "tunnel_L_to_X0_relax", "blockade",
               "drain_flush", "detect_L", "detect_X0", "warning")

SOURCE, QUBIT1, QUBIT2, DRAIN = "S", "Q1", "Q2", "D"
_DOT_INDEX = {QUBIT1: 0, QUBIT2: 1}


class InjectionSignalError(RuntimeError):
    """Detection window contains no transfer events."""


@dataclass(frozen=True)
class DotSpec:
    """Orbital ladder of one dot.

    ``level_energies`` are the spin-degenerate orbital levels in eV,
    strictly increasing; ``l_level_index`` is 1-based.  ``charging_energy``
    raises the cost of the n-th added electron by (n-1)*U.
    """

    level_energies: tuple[float, ...]
    l_level_index: int = 4
    charging_energy: float = 0.0

    def __post_init__(self):
        if not (1 <= self.l_level_index <= len(self.level_energies)):
            raise ValueError("l_level_index out of range")
        diffs = np.diff(self.level_energies)
        if len(diffs) and not np.all(diffs > 0):
            raise ValueError("level energies must be strictly increasing")
        if self.charging_energy < 0:
            raise ValueError("charging energy must be >= 0")

    @classmethod
    def default(cls, levels: int = 6, l_index: int = 4, spacing: float = 0.1,
                delta_e_l_gamma: float = 1.0, charging_energy: float = 0.0
                ) -> "DotSpec":
        """Equally spaced lower levels; the ladder resumes one gap above L."""
        if levels < 1 or not (1 <= l_index <= levels):
            raise ValueError("need levels >= 1 and 1 <= l_index <= levels")
        energies = [i * spacing for i in range(l_index)]
        e_l = energies[-1]
        for j in range(levels - l_index):
            energies.append(e_l + delta_e_l_gamma + j * spacing)
        return cls(tuple(energies), l_index, charging_energy)

    @property
    def n_levels(self) -> int:
        return len(self.level_energies)

    @property
    def l_energy(self) -> float:
        return self.level_energies[self.l_level_index - 1]

    def stop_window(self, delta_e_l_gamma: float) -> tuple[float, float]:
        """[mu_lo, mu_hi) for mu_S such that filling stops at one L electron."""
        return self.l_energy, self.l_energy + delta_e_l_gamma

    def lower_level_indices(self) -> range:
        """0-based indices of the levels below the L level."""
        return range(self.l_level_index - 1)


@dataclass(frozen=True)
class StochasticParams:
    p_l: float
    rng_seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.p_l <= 1.0):
            raise ValueError(f"p_l must be in [0, 1], got {self.p_l}")


@dataclass(frozen=True)
class ProtocolEvent:
    time_step: int
    kind: str
    dot_from: str = ""
    dot_to: str = ""
    n_moved: int = 0
    note: str = ""

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")


@dataclass
class DeviceState:
    """Occupancies, potentials and barrier states of the dot chain.

    ``occupancy[d, level, spin]`` is 0 or 1 with d = 0 for Qubit(1) and
    d = 1 for Qubit(2).  ``relax_channel`` caches the per-series channel
    draw ("L" or "X0"); None means not yet drawn.
    """

    mu_s: float
    mu_d: float
    occupancy: np.ndarray
    b1_open: bool = False
    b2_open: bool = False
    b3_open: bool = False
    delta_e_l_gamma: float = 1.0
    relax_channel: str | None = None
    clock: int = 0

    @classmethod
    def initial(cls, spec: DotSpec, mu_s: float | None = None,
                mu_d: float | None = None,
                delta_e_l_gamma: float = 1.0) -> "DeviceState":
        lo, hi = spec.stop_window(delta_e_l_gamma)
        if mu_s is None:
            mu_s = 0.5 * (lo + hi)
        if mu_d is None:
            mu_d = spec.level_energies[0] - 1.0
        occ = np.zeros((2, spec.n_levels, 2), dtype=np.int8)
        return cls(mu_s=mu_s, mu_d=mu_d, occupancy=occ,
                   delta_e_l_gamma=delta_e_l_gamma)

    def copy(self) -> "DeviceState":
        return replace(self, occupancy=self.occupancy.copy())

    def electron_count(self, dot: str) -> int:
        return int(self.occupancy[_DOT_INDEX[dot]].sum())

    def level_occupancy(self, dot: str, level_index0: int) -> int:
        return int(self.occupancy[_DOT_INDEX[dot], level_index0].sum())

    def l_occupancy(self, dot: str, spec: DotSpec) -> int:
        return self.level_occupancy(dot, spec.l_level_index - 1)

    def validate(self, spec: DotSpec) -> None:
        if self.occupancy.min() < 0 or self.occupancy.max() > 1:
            raise AssertionError("spin-orbital occupancy outside {0, 1}")
        if self.occupancy.shape != (2, spec.n_levels, 2):
            raise AssertionError("occupancy shape does not match the dot spec")

    def _tick(self) -> int:
        step = self.clock
        self.clock += 1
        return step


def _next_empty_spin_orbital(state: DeviceState, dot: str,
                             levels: Iterable[int]) -> tuple[int, int] | None:
    d = _DOT_INDEX[dot]
    for lvl in levels:
        for spin in range(2):
            if state.occupancy[d, lvl, spin] == 0:
                return lvl, spin
    return None


def fill_from_source(state: DeviceState, spec: DotSpec
                     ) -> tuple[DeviceState, list[ProtocolEvent]]:
    """Fill Qubit(1) from the source in ascending level order.

    An electron is added while its electrochemical cost (level energy plus
    the charging ladder U * n_present) stays at or below mu_S; filling
    stops immediately once the L level receives its first electron.
    """
    state = state.copy()
    events: list[ProtocolEvent] = []
    if not state.b1_open:
        events.append(ProtocolEvent(state._tick(), "warning", SOURCE, QUBIT1,
                                    0, "B1 closed; fill skipped"))
        return state, events
    d = _DOT_INDEX[QUBIT1]
    while True:
        slot = _next_empty_spin_orbital(state, QUBIT1, range(spec.n_levels))
        if slot is None:
            break
        lvl, spin = slot
        cost = spec.level_energies[lvl] + spec.charging_energy * state.electron_count(QUBIT1)
        if cost > state.mu_s:
            break
        state.occupancy[d, lvl, spin] = 1
        events.append(ProtocolEvent(state._tick(), "inject", SOURCE, QUBIT1, 1))
        if lvl == spec.l_level_index - 1:
            break  # one electron on the L level ends the fill
    state.validate(spec)
    return state, events


def shuttle(state: DeviceState, spec: DotSpec, params: StochasticParams,
            rng: np.random.Generator | None = None
            ) -> tuple[DeviceState, list[ProtocolEvent]]:
    """Attempt one Qubit(1) -> Qubit(2) transfer of the L electron."""
    state = state.copy()
    events: list[ProtocolEvent] = []
    if not state.b2_open:
        events.append(ProtocolEvent(state._tick(), "warning", QUBIT1, QUBIT2,
                                    0, "B2 closed; shuttle skipped"))
        return state, events
    if state.l_occupancy(QUBIT1, spec) == 0:
        events.append(ProtocolEvent(state._tick(), "warning", QUBIT1, QUBIT2,
                                    0, "nothing to shuttle"))
        return state, events
    if rng is None:
        rng = np.random.default_rng(params.rng_seed)
    if state.relax_channel is None:
        state.relax_channel = "L" if rng.random() < params.p_l else "X0"

    d1, d2 = _DOT_INDEX[QUBIT1], _DOT_INDEX[QUBIT2]
    l0 = spec.l_level_index - 1
    if state.relax_channel == "L":
        if state.l_occupancy(QUBIT2, spec) >= 1:
            events.append(ProtocolEvent(state._tick(), "blockade", QUBIT1, QUBIT2,
                                        0, "L level occupied"))
            return state, events
        target = (l0, 0)
        kind = "tunnel_L_to_L"
    else:
        slot = _next_empty_spin_orbital(state, QUBIT2, spec.lower_level_indices())
        if slot is None:
            events.append(ProtocolEvent(state._tick(), "blockade", QUBIT1, QUBIT2,
                                        0, "lower levels full"))
            return state, events
        target = slot
        kind = "tunnel_L_to_X0_relax"

    spin_from = 0 if state.occupancy[d1, l0, 0] else 1
    state.occupancy[d1, l0, spin_from] = 0
    state.occupancy[d2, target[0], target[1]] = 1
    events.append(ProtocolEvent(state._tick(), kind, QUBIT1, QUBIT2, 1))
    state.validate(spec)
    return state, events


TRANSFER_KINDS = ("tunnel_L_to_L", "tunnel_L_to_X0_relax")


def detect(state: DeviceState, events: list[ProtocolEvent]) -> str:
    """Classify an injection series from its simulated current signature.

    One transfer then blockade reads as an L-level injection; two or more
    successive transfers read as lower-level filling.
    """
    transfers = sum(ev.n_moved for ev in events if ev.kind in TRANSFER_KINDS)
    if transfers == 0:
        raise InjectionSignalError("no transfer events in the detection window")
    return "detect_L" if transfers == 1 else "detect_X0"


def flush_drain(state: DeviceState, spec: DotSpec
                ) -> tuple[DeviceState, list[ProtocolEvent]]:
    """Drain every lower-level electron of Qubit(2); L occupancy survives."""
    state = state.copy()
    events: list[ProtocolEvent] = []
    if not state.b3_open:
        events.append(ProtocolEvent(state._tick(), "warning", QUBIT2, DRAIN,
                                    0, "B3 closed; flush skipped"))
        return state, events
    lower = list(spec.lower_level_indices())
    floor = min(spec.level_energies[lvl] for lvl in lower) if lower else None
    if floor is None or state.mu_d >= floor:
        events.append(ProtocolEvent(state._tick(), "warning", QUBIT2, DRAIN,
                                    0, "mu_D too high; flush skipped"))
        return state, events
    d2 = _DOT_INDEX[QUBIT2]
    moved = int(state.occupancy[d2, lower].sum())
    state.occupancy[d2, lower] = 0
    state.relax_channel = None
    events.append(ProtocolEvent(state._tick(), "drain_flush", QUBIT2, DRAIN, moved))
    state.validate(spec)
    return state, events


@dataclass(frozen=True)
class ProtocolReport:
    success: bool
    retries: int
    events: tuple[ProtocolEvent, ...]
    transfers_per_pass: tuple[int, ...]
    final_state: DeviceState


def run_protocol(spec: DotSpec, params: StochasticParams, max_retries: int,
                 mu_s: float | None = None, delta_e_l_gamma: float = 1.0,
                 rng: np.random.Generator | None = None) -> ProtocolReport:
    """fill -> shuttle series -> detect, flushing and retrying on the
    lower-level signature; deterministic for a fixed seed."""
    if max_retries < 0:
        raise ValueError("max_retries must be >= 0")
    if rng is None:
        rng = np.random.default_rng(params.rng_seed)
    state = DeviceState.initial(spec, mu_s=mu_s, delta_e_l_gamma=delta_e_l_gamma)
    log: list[ProtocolEvent] = []
    counts: list[int] = []
    success = False
    retries = 0
    for pass_index in range(max_retries + 1):
        state.b1_open = True
        state.b2_open = True
        state.b3_open = False
        series: list[ProtocolEvent] = []
        while True:
            if state.l_occupancy(QUBIT1, spec) == 0:
                state, ev = fill_from_source(state, spec)
                series.extend(ev)
            state, ev = shuttle(state, spec, params, rng)
            series.extend(ev)
            kind = ev[-1].kind
            if kind == "blockade":
                break
            if kind == "warning":
                break  # nothing movable: avoid spinning without a signal
        log.extend(series)
        outcome = detect(state, series)
        log.append(ProtocolEvent(state._tick(), outcome, QUBIT2, "", 0))
        counts.append(sum(e.n_moved for e in series if e.kind in TRANSFER_KINDS))
        if outcome == "detect_L":
            success = True
            retries = pass_index
            break
        if pass_index == max_retries:
            retries = max_retries
            break
        state.b1_open = False
        state.b2_open = False
        state.b3_open = True
        state, ev = flush_drain(state, spec)
        log.extend(ev)
    return ProtocolReport(success=success, retries=retries, events=tuple(log),
                          transfers_per_pass=tuple(counts), final_state=state)


@dataclass(frozen=True)
class TrialStats:
    successes: int
    trials: int
    retries: tuple[int, ...]

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    @property
    def mean_retries(self) -> float:
        return float(np.mean(self.retries))


def monte_carlo(spec: DotSpec, params: StochasticParams, max_retries: int,
                trials: int, mu_s: float | None = None,
                delta_e_l_gamma: float = 1.0) -> TrialStats:
    """Independent seeded trials; child seeds derive from params.rng_seed.

    Trials are state-isolated, so they may equally be farmed out to worker
    processes; the sequential loop here keeps the result bit-reproducible.
    """
    seeds = np.random.SeedSequence(params.rng_seed).spawn(trials)
    successes = 0
    retries = []
    for seq in seeds:
        report = run_protocol(spec, params, max_retries, mu_s=mu_s,
                              delta_e_l_gamma=delta_e_l_gamma,
                              rng=np.random.default_rng(seq))
        successes += report.success
        retries.append(report.retries)
    return TrialStats(successes=successes, trials=trials, retries=tuple(retries))


def events_to_csv(events: Iterable[ProtocolEvent], fh: TextIO) -> None:
    fh.write("step,kind,dot_from,dot_to,n_moved\n")
    for ev in events:
        fh.write(f"{ev.time_step},{ev.kind},{ev.dot_from},{ev.dot_to},{ev.n_moved}\n")
