import io
import math

import numpy as np
import pytest

from lvalley.injection import (
    DeviceState,
    DotSpec,
    InjectionSignalError,
    ProtocolEvent,
    QUBIT1,
    QUBIT2,
    StochasticParams,
    detect,
    events_to_csv,
    fill_from_source,
    flush_drain,
    monte_carlo,
    run_protocol,
    shuttle,
)

SPEC = DotSpec.default()


def fresh(mu_s=None, b1=True, b2=False, b3=False):
    state = DeviceState.initial(SPEC, mu_s=mu_s)
    state.b1_open, state.b2_open, state.b3_open = b1, b2, b3
    return state


def test_default_ladder_layout():
    assert SPEC.level_energies == pytest.approx((0.0, 0.1, 0.2, 0.3, 1.3, 1.4))
    assert SPEC.l_energy == pytest.approx(0.3)
    assert SPEC.stop_window(1.0) == pytest.approx((0.3, 1.3))


def test_seven_electrons_across_stop_window():
    lo, hi = SPEC.stop_window(1.0)
    for mu in (lo, 0.5 * (lo + hi), hi - 1e-9):
        state, events = fill_from_source(fresh(mu_s=mu), SPEC)
        assert state.electron_count(QUBIT1) == 7
        assert state.l_occupancy(QUBIT1, SPEC) == 1
        assert len([e for e in events if e.kind == "inject"]) == 7


def test_mu_below_lowest_level_fills_nothing():
    state, events = fill_from_source(fresh(mu_s=-0.5), SPEC)
    assert state.electron_count(QUBIT1) == 0
    assert not [e for e in events if e.kind == "inject"]


def test_fill_respects_closed_barrier():
    state, events = fill_from_source(fresh(b1=False), SPEC)
    assert state.electron_count(QUBIT1) == 0
    assert events[0].kind == "warning"


def test_charging_ladder_threshold():
    # with charging energy U the seventh electron needs mu_S >= E_L + 6U
    u = 0.01
    spec = DotSpec.default(charging_energy=u)
    threshold = spec.l_energy + 6 * u
    state = DeviceState.initial(spec, mu_s=threshold - 1e-9)
    state.b1_open = True
    state, _ = fill_from_source(state, spec)
    assert state.electron_count(QUBIT1) == 6
    state = DeviceState.initial(spec, mu_s=threshold)
    state.b1_open = True
    state, _ = fill_from_source(state, spec)
    assert state.electron_count(QUBIT1) == 7


def test_shuttle_deterministic_l_transfer():
    state, _ = fill_from_source(fresh(), SPEC)
    state.b2_open = True
    state, events = shuttle(state, SPEC, StochasticParams(p_l=1.0, rng_seed=0))
    assert events[-1].kind == "tunnel_L_to_L"
    assert state.l_occupancy(QUBIT2, SPEC) == 1
    assert state.l_occupancy(QUBIT1, SPEC) == 0


def test_shuttle_blockade_on_occupied_l():
    state, _ = fill_from_source(fresh(), SPEC)
    state.b2_open = True
    params = StochasticParams(p_l=1.0, rng_seed=0)
    state, _ = shuttle(state, SPEC, params)
    state, _ = fill_from_source(state, SPEC)
    before = state.occupancy.copy()
    state, events = shuttle(state, SPEC, params)
    assert events[-1].kind == "blockade"
    assert np.array_equal(before, state.occupancy)


def test_shuttle_noop_cases():
    state = fresh(b2=False)
    state, events = shuttle(state, SPEC, StochasticParams(p_l=1.0))
    assert events[-1].kind == "warning"
    state = fresh(b2=True)
    state, events = shuttle(state, SPEC, StochasticParams(p_l=1.0))
    assert events[-1].kind == "warning"  # nothing on the L level yet


def test_six_in_succession_without_l_channel():
    rep = run_protocol(SPEC, StochasticParams(p_l=0.0, rng_seed=5), max_retries=0)
    assert rep.transfers_per_pass == (6,)
    kinds = [e.kind for e in rep.events]
    assert "detect_X0" in kinds and "detect_L" not in kinds
    assert rep.final_state.electron_count(QUBIT2) == 6


def test_flush_preserves_l_occupancy():
    state = fresh(b3=True)
    d2 = 1  # Qubit(2) slot in the occupancy array
    state.occupancy[d2, SPEC.l_level_index - 1, 0] = 1
    state.occupancy[d2, 0, :] = 1
    state, events = flush_drain(state, SPEC)
    assert events[-1].kind == "drain_flush"
    assert events[-1].n_moved == 2
    assert state.l_occupancy(QUBIT2, SPEC) == 1
    assert state.electron_count(QUBIT2) == 1


def test_flush_requires_low_drain_potential():
    state = fresh(b3=True)
    state.mu_d = 0.5  # above the lowest levels
    state.occupancy[1, 0, 0] = 1
    state, events = flush_drain(state, SPEC)
    assert events[-1].kind == "warning"
    assert state.electron_count(QUBIT2) == 1


def test_flush_empty_dot_noop():
    state = fresh(b3=True)
    state, events = flush_drain(state, SPEC)
    assert events[-1].kind == "drain_flush"
    assert events[-1].n_moved == 0


def test_detect_classification():
    mk = lambda kind, n: ProtocolEvent(0, kind, QUBIT1, QUBIT2, n)
    one = [mk("tunnel_L_to_L", 1), mk("blockade", 0)]
    assert detect(None, one) == "detect_L"
    six = [mk("tunnel_L_to_X0_relax", 1)] * 6 + [mk("blockade", 0)]
    assert detect(None, six) == "detect_X0"
    with pytest.raises(InjectionSignalError):
        detect(None, [mk("blockade", 0)])


def test_protocol_immediate_success():
    rep = run_protocol(SPEC, StochasticParams(p_l=1.0, rng_seed=3), max_retries=4)
    assert rep.success and rep.retries == 0
    assert rep.transfers_per_pass == (1,)
    assert rep.final_state.l_occupancy(QUBIT2, SPEC) == 1


def test_protocol_exhausts_retries():
    rep = run_protocol(SPEC, StochasticParams(p_l=0.0, rng_seed=3), max_retries=5)
    assert not rep.success and rep.retries == 5
    assert len([e for e in rep.events if e.kind == "drain_flush"]) == 5
    assert rep.transfers_per_pass == (6,) * 6


def test_protocol_reproducible():
    params = StochasticParams(p_l=0.5, rng_seed=1234)
    r1 = run_protocol(SPEC, params, max_retries=10)
    r2 = run_protocol(SPEC, params, max_retries=10)
    assert r1.events == r2.events
    b1, b2 = io.StringIO(), io.StringIO()
    events_to_csv(r1.events, b1)
    events_to_csv(r2.events, b2)
    assert b1.getvalue() == b2.getvalue()


def test_electron_bookkeeping():
    # total electrons on the dots = injected - flushed, for every pass
    rep = run_protocol(SPEC, StochasticParams(p_l=0.5, rng_seed=99), max_retries=20)
    injected = sum(e.n_moved for e in rep.events if e.kind == "inject")
    flushed = sum(e.n_moved for e in rep.events if e.kind == "drain_flush")
    on_dots = (rep.final_state.electron_count(QUBIT1)
               + rep.final_state.electron_count(QUBIT2))
    assert on_dots == injected - flushed
    assert rep.final_state.occupancy.max() <= 1


def test_geometric_retry_statistics():
    params = StochasticParams(p_l=0.5, rng_seed=42)
    stats = monte_carlo(SPEC, params, max_retries=2, trials=3000)
    want = 1.0 - 0.5 ** 3
    sigma = math.sqrt(want * (1 - want) / stats.trials)
    assert abs(stats.success_rate - want) <= 3 * sigma


def test_monte_carlo_reproducible():
    params = StochasticParams(p_l=0.3, rng_seed=7)
    s1 = monte_carlo(SPEC, params, max_retries=5, trials=200)
    s2 = monte_carlo(SPEC, params, max_retries=5, trials=200)
    assert s1 == s2


def test_spec_validation():
    with pytest.raises(ValueError):
        DotSpec((0.0, 0.1), l_level_index=5)
    with pytest.raises(ValueError):
        DotSpec((0.3, 0.2), l_level_index=1)
    with pytest.raises(ValueError):
        StochasticParams(p_l=1.5)
    with pytest.raises(ValueError):
        ProtocolEvent(0, "teleport")
    with pytest.raises(ValueError):
        run_protocol(SPEC, StochasticParams(p_l=0.5), max_retries=-1)


def test_event_csv_format():
    rep = run_protocol(SPEC, StochasticParams(p_l=1.0, rng_seed=0), max_retries=0)
    buf = io.StringIO()
    events_to_csv(rep.events, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "step,kind,dot_from,dot_to,n_moved"
    assert any(",tunnel_L_to_L," in ln for ln in lines)
    assert all(ln.count(",") == 4 for ln in lines)
