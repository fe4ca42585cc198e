import math

import numpy as np
import pytest

from gsldpc.codes import from_check_adjacency
from gsldpc.decoder import (
    PHI_CEIL,
    PHI_FLOOR,
    c2v_bp,
    c2v_ms,
    hard_decision,
    init_state,
    phi,
    syndrome,
    total_llr,
    update_group,
    v2c,
)


def boxplus(vals):
    """Independent oracle for the exact check update: 2*atanh(prod tanh(x/2))."""
    p = 1.0
    for v in vals:
        p *= math.tanh(v / 2.0)
    return 2.0 * math.atanh(p)


def toy_code():
    return from_check_adjacency(
        [np.array(a) for a in ([0, 1, 3], [1, 2, 4], [0, 4, 5], [2, 3, 5])], 6)


def two_check_code():
    # one variable shared by construction helpers: checks {0,1}, {1,2}
    return from_check_adjacency([np.array([0, 1]), np.array([1, 2])], 3)


# ---------------------------------------------------------------------------
# phi


def test_phi_value():
    # oracle: direct -log(tanh(x/2))
    assert phi(0.5) == pytest.approx(1.4068291137472952, rel=1e-12)


def test_phi_involution_on_log_grid():
    x = np.logspace(np.log10(PHI_FLOOR), np.log10(20.0), 400)
    err = np.abs(phi(phi(x)) - x)
    assert (err <= 1e-9 * x).all()


def test_phi_clamps_extremes():
    lo = phi(0.0)
    assert np.isfinite(lo) and lo == phi(PHI_FLOOR)
    assert lo == pytest.approx(28.324, abs=0.01)
    hi = phi(1e6)
    assert np.isfinite(hi) and hi == phi(PHI_CEIL)
    assert 0 < hi < 2e-13


def test_phi_vectorized_matches_scalar():
    xs = np.array([0.01, 0.5, 3.0, 25.0])
    out = phi(xs)
    for x, o in zip(xs, out):
        assert phi(float(x)) == o


# ---------------------------------------------------------------------------
# check updates


def _state_with_v2c(code, per_check_inputs):
    """Build a state and overwrite v2c check-side slices."""
    state = init_state(code, np.ones(code.n_vars), seed=1)
    fl = code.flat()
    for m, vals in per_check_inputs.items():
        lo = fl.chk_ptr[m]
        state.v2c[lo:lo + len(vals)] = vals
    return state


def test_c2v_bp_degree2_passthrough():
    code = two_check_code()
    state = _state_with_v2c(code, {0: [99.0, 1.3]})  # target var 0, other input 1.3
    assert c2v_bp(state, 0, 0) == pytest.approx(1.3, rel=1e-9)


def test_c2v_bp_matches_boxplus_oracle():
    code = toy_code()
    rng = np.random.default_rng(3)
    for _ in range(200):
        vals = rng.uniform(0.05, 8.0, 3) * rng.choice([-1.0, 1.0], 3)
        state = _state_with_v2c(code, {0: vals})
        for pos, n in enumerate([0, 1, 3]):
            others = [v for i, v in enumerate(vals) if i != pos]
            assert c2v_bp(state, 0, n) == pytest.approx(boxplus(others), rel=1e-7, abs=1e-10)


def test_c2v_bp_two_inputs_frozen_value():
    code = toy_code()
    state = _state_with_v2c(code, {0: [0.0, 1.5, -0.5]})
    state.v2c[code.flat().chk_ptr[0]] = 7.7  # target edge value is excluded anyway
    # oracle: boxplus(1.5, -0.5) = -0.31366632352474966
    assert c2v_bp(state, 0, 0) == pytest.approx(-0.31366632352474966, rel=1e-9)


def test_c2v_bp_sign_flip_antisymmetry():
    code = toy_code()
    rng = np.random.default_rng(4)
    vals = rng.uniform(0.2, 4.0, 3)
    for flip in range(3):
        plus = _state_with_v2c(code, {0: vals})
        flipped = vals.copy()
        flipped[flip] = -flipped[flip]
        minus = _state_with_v2c(code, {0: flipped})
        targets = [0, 1, 3]
        for pos, n in enumerate(targets):
            a = c2v_bp(plus, 0, n)
            b = c2v_bp(minus, 0, n)
            if pos == flip:
                assert a == b
            else:
                assert a == -b


def test_c2v_ms_min_and_sign():
    code = toy_code()
    state = _state_with_v2c(code, {0: [9.0, 1.5, -0.5]})
    assert c2v_ms(state, 0, 0) == -0.5
    assert c2v_ms(state, 0, 1) == -0.5  # min over {9.0, 0.5}
    assert c2v_ms(state, 0, 3) == pytest.approx(1.5)


def test_c2v_ms_equals_bp_at_degree2():
    code = two_check_code()
    rng = np.random.default_rng(5)
    for _ in range(100):
        v = float(rng.uniform(0.01, 10.0) * rng.choice([-1, 1]))
        state = _state_with_v2c(code, {0: [1.0, v]})
        bp_out = c2v_bp(state, 0, 0)
        ms_out = c2v_ms(state, 0, 0)
        assert bp_out == pytest.approx(ms_out, rel=1e-9)


def test_c2v_ms_dominates_bp():
    code = toy_code()
    rng = np.random.default_rng(6)
    for _ in range(10_000):
        vals = rng.uniform(0.01, 10.0, 3) * rng.choice([-1.0, 1.0], 3)
        state = _state_with_v2c(code, {0: vals})
        n = int(rng.choice([0, 1, 3]))
        assert abs(c2v_ms(state, 0, n)) >= abs(c2v_bp(state, 0, n)) - 1e-12


# ---------------------------------------------------------------------------
# variable updates


def _state_with_c2v(code, n, vals, lam):
    state = init_state(code, np.full(code.n_vars, lam), seed=1)
    fl = code.flat()
    for k, val in zip(range(fl.var_ptr[n], fl.var_ptr[n + 1]), vals):
        state.c2v[fl.var_edge[k]] = val
    return state


def test_v2c_sum_example():
    # three incoming checks on a degree-3 variable
    code = from_check_adjacency([np.array([0]), np.array([0]), np.array([0])], 1)
    state = _state_with_c2v(code, 0, [0.5, -1.0, 0.25], lam=2.0)
    assert v2c(state, 0, 0) == pytest.approx(1.25)
    assert total_llr(state, 0) == pytest.approx(1.75)


def test_v2c_degree1_returns_channel_llr():
    code = two_check_code()
    state = init_state(code, np.array([0.7, -0.2, 0.9]), seed=0)
    assert v2c(state, 0, 0) == pytest.approx(0.7)


def test_v2c_total_difference_identity():
    code = toy_code()
    rng = np.random.default_rng(8)
    state = init_state(code, rng.normal(size=6), seed=2)
    state.c2v[:] = rng.normal(size=code.n_edges)
    fl = code.flat()
    for n in range(6):
        for k in range(fl.var_ptr[n], fl.var_ptr[n + 1]):
            m = int(fl.edge_check[fl.var_edge[k]])
            e = int(fl.var_edge[k])
            assert v2c(state, n, m) == pytest.approx(
                total_llr(state, n) - state.c2v[e], abs=1e-12)


# ---------------------------------------------------------------------------
# decisions and syndrome


def test_hard_decision_signs():
    out = hard_decision(np.array([2.3, -1.0]))
    assert list(out) == [0, 1]
    assert (hard_decision(np.ones(5)) == 0).all()


def test_hard_decision_tie_is_reproducible():
    llr = np.array([0.0, 0.0, 1.0])
    ties = np.array([1, 0, 1], dtype=np.uint8)
    a = hard_decision(llr, ties)
    b = hard_decision(llr, ties)
    assert (a == b).all()
    assert list(a[:2]) == [1, 0]


def test_hard_decision_zero_without_ties_raises():
    with pytest.raises(ValueError):
        hard_decision(np.array([0.0]))


def test_syndrome_toy_single_error():
    code = toy_code()
    u = np.zeros(6, dtype=np.uint8)
    u[0] = 1
    assert list(syndrome(u, code)) == [1, 0, 1, 0]


def test_syndrome_zero_word():
    code = toy_code()
    assert not syndrome(np.zeros(6, dtype=np.uint8), code).any()


# ---------------------------------------------------------------------------
# group update


def test_update_group_empty_is_noop():
    code = toy_code()
    state = init_state(code, np.random.default_rng(0).normal(size=6), seed=3)
    before = state.v2c.copy()
    update_group(state, np.array([], dtype=np.int64))
    assert (state.v2c == before).all()


def test_update_group_matches_literal_kernels():
    # one full-group update from init equals the per-edge definitional ops
    code = toy_code()
    rng = np.random.default_rng(9)
    lam = rng.normal(0, 2, 6)
    ref = init_state(code, lam, seed=4)
    fl = code.flat()
    expect_c2v = np.empty(code.n_edges)
    for m in range(code.n_checks):
        for e in range(fl.chk_ptr[m], fl.chk_ptr[m + 1]):
            expect_c2v[e] = c2v_bp(ref, m, int(fl.chk_var[e]))
    state = init_state(code, lam, seed=4)
    update_group(state, np.arange(6), kernel="bp")
    assert np.allclose(state.c2v, expect_c2v, rtol=1e-9, atol=1e-12)
    for n in range(6):
        assert state.total_llr[n] == pytest.approx(
            lam[n] + expect_c2v[fl.var_edge[fl.var_ptr[n]:fl.var_ptr[n + 1]]].sum(),
            rel=1e-9)


def test_update_group_edge_identity():
    code = toy_code()
    rng = np.random.default_rng(10)
    state = init_state(code, rng.normal(0, 2, 6), seed=5)
    update_group(state, np.array([0, 1, 2]), kernel="bp")
    update_group(state, np.array([3, 4, 5]), kernel="bp")
    fl = code.flat()
    for n in range(6):
        for k in range(fl.var_ptr[n], fl.var_ptr[n + 1]):
            e = int(fl.var_edge[k])
            assert abs(state.v2c[e] + state.c2v[e] - state.total_llr[n]) <= 1e-9


def test_update_group_rejects_double_update():
    code = toy_code()
    state = init_state(code, np.ones(6), seed=6)
    update_group(state, np.array([0, 1]))
    with pytest.raises(ValueError, match="already updated"):
        update_group(state, np.array([1, 2]))


def test_update_group_syndrome_refresh():
    code = toy_code()
    # strong all-positive LLRs: after one sweep everything decodes to zero
    state = init_state(code, np.full(6, 5.0), seed=7)
    state.hard[:] = 1  # poison; refresh must fix the touched checks
    update_group(state, np.arange(6), kernel="ms")
    assert not state.syndrome.any()
    assert not state.hard.any()
