import numpy as np
import pytest

from qisflow.errors import DegenerateUpdate, DimMismatch
from qisflow.oja import (
    CorrelationModel,
    CouplingState,
    SignalStream,
    draw_signal,
    draw_signals,
    oja_step_normalized,
    oja_step_truncated,
    run_learning,
    run_learning_batch,
)


def random_rotation(rng, m):
    q, r = np.linalg.qr(rng.standard_normal((m, m)))
    return q * np.sign(np.diag(r))


def test_zero_spectrum_gives_zero_signal():
    model = CorrelationModel([0.0, 0.0, 0.0], 0.1)
    stream = SignalStream(3)
    for _ in range(5):
        assert np.array_equal(draw_signal(model, stream), np.zeros(3))


def test_sample_covariance_within_three_standard_errors():
    model = CorrelationModel([2.0, 1.0], 0.1)
    n = 10**6
    x = draw_signals(model, SignalStream(17), n)
    prod = x[:, :, None] * x[:, None, :]
    est = prod.mean(axis=0)
    se = prod.std(axis=0) / np.sqrt(n)
    assert np.all(np.abs(est - np.diag([2.0, 1.0])) < 3 * se)


def test_streams_are_deterministic():
    model = CorrelationModel([2.0, 1.0], 0.1)
    a = [draw_signal(model, SignalStream(5)) for _ in range(3)]
    b = [draw_signal(model, SignalStream(5)) for _ in range(3)]
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    s = SignalStream(9)
    first = draw_signals(model, s, 10)
    assert np.array_equal(draw_signals(model, s.clone(), 10), first)


def test_draw_signal_matches_draw_signals():
    model = CorrelationModel([2.0, 1.0, 0.5], 0.1, random_rotation(np.random.default_rng(0), 3))
    s1, s2 = SignalStream(4), SignalStream(4)
    single = np.array([draw_signal(model, s1) for _ in range(7)])
    assert np.allclose(single, draw_signals(model, s2, 7), rtol=0, atol=1e-15)


def test_spawned_streams_differ_and_record_keys():
    kids = SignalStream(1).spawn(3)
    model = CorrelationModel([1.0, 1.0], 0.1)
    draws = [draw_signal(model, k) for k in kids]
    assert not np.array_equal(draws[0], draws[1])
    assert [k.key for k in kids] == [[1, 0], [1, 1], [1, 2]]


def test_normalized_step_examples():
    st = CouplingState([0.6, 0.8])
    assert np.allclose(oja_step_normalized(st, [0.0, 0.0], 0.1).W, st.W, atol=1e-16)
    assert np.allclose(oja_step_normalized(st, [1.0, 2.0], 0.0).W, st.W, atol=1e-16)
    out = oja_step_normalized(CouplingState([1.0, 0.0]), [1.0, 1.0], 0.1)
    assert np.allclose(out.W, np.array([1.1, 0.1]) / np.sqrt(1.22), atol=1e-15)
    assert np.allclose(out.W, [0.995893, 0.090536], atol=1e-6)
    assert out.step == 1


def test_normalized_step_degenerate():
    # for eta > 0 the component along W only grows, so only W = 0 can vanish
    with pytest.raises(DegenerateUpdate):
        oja_step_normalized(CouplingState([0.0, 0.0]), [1.0, 1.0], 0.1)


def test_truncated_step_examples():
    st = CouplingState([0.6, 0.8])
    assert np.array_equal(oja_step_truncated(st, [0.0, 0.0], 0.1).W, st.W)
    out = oja_step_truncated(CouplingState([1.0, 0.0]), [1.0, 1.0], 0.1)
    assert np.allclose(out.W, [1.0, 0.1], atol=1e-15)


def test_truncation_error_is_second_order(rng):
    # |normalized - truncated| = O(eta^2): halving eta divides the gap by ~4
    w = rng.standard_normal(3)
    w /= np.linalg.norm(w)
    x = rng.standard_normal(3)
    gaps = []
    for eta in (1e-2, 5e-3):
        a = oja_step_normalized(CouplingState(w), x, eta).W
        b = oja_step_truncated(CouplingState(w), x, eta).W
        gaps.append(np.linalg.norm(a - b))
    assert 2.5 <= gaps[0] / gaps[1] <= 6


@pytest.mark.slow
def test_normalized_runs_keep_unit_norm():
    model = CorrelationModel([2.0, 1.0], 1e-3)
    traj = run_learning(model, CouplingState([1.0, 0.0]), 10**6, SignalStream(1), "normalized", stride=1000)
    assert np.max(traj.diagnostics["norm_err"]) < 1e-14


def test_zero_steps_returns_initial_state():
    model = CorrelationModel([2.0, 1.0], 1e-3)
    traj = run_learning(model, CouplingState([0.6, 0.8]), 0, SignalStream(0))
    assert len(traj) == 1
    assert np.array_equal(traj.final, [0.6, 0.8])


def test_run_learning_times_and_metadata():
    model = CorrelationModel([2.0, 1.0], 1e-2)
    traj = run_learning(model, CouplingState([0.6, 0.8]), 100, SignalStream(3), stride=25)
    assert np.allclose(traj.times, [0, 0.25, 0.5, 0.75, 1.0])
    assert traj.meta["streams"] == [[3]]
    again = run_learning(model, CouplingState([0.6, 0.8]), 100, SignalStream(3), stride=25)
    assert np.array_equal(traj.states, again.states)


def test_batch_matches_individual_runs():
    model = CorrelationModel([2.0, 1.0, 0.3], 1e-2)
    streams = SignalStream(8).spawn(4)
    w0 = CouplingState(np.ones(3) / np.sqrt(3))
    batch = run_learning_batch(model, w0, 300, streams, stride=100, chunk=64)
    for i, st in enumerate(SignalStream(8).spawn(4)):
        single = run_learning(model, w0, 300, st, stride=100)
        assert np.allclose(batch.states[:, i], single.states, rtol=0, atol=1e-13)


def test_rotated_frame_same_seed_is_exact_rotation(rng):
    # X = G C^(1/2) g, so G^T X is the G = I signal with the same draws
    c = [2.0, 1.0, 0.5]
    G = random_rotation(rng, 3)
    w0 = np.array([0.6, 0.0, 0.8])
    plain = run_learning(CorrelationModel(c, 1e-2), CouplingState(w0), 500, SignalStream(3), stride=50)
    rot = run_learning(CorrelationModel(c, 1e-2, G), CouplingState(G @ w0), 500, SignalStream(3), stride=50)
    assert np.max(np.abs(rot.states - plain.states)) < 1e-12


def test_rotated_frame_moments_match_in_distribution(rng):
    c = [2.0, 1.0, 0.5]
    G = random_rotation(rng, 3)
    w0 = np.array([0.6, 0.0, 0.8])
    runs, steps, eta = 2000, 200, 1e-2
    a = run_learning_batch(CorrelationModel(c, eta), CouplingState(w0), steps, SignalStream(100).spawn(runs), stride=steps).final
    b = run_learning_batch(CorrelationModel(c, eta, G), CouplingState(G @ w0), steps, SignalStream(200).spawn(runs), stride=steps).final
    iu, ju = np.triu_indices(3)

    def feats(w):
        return np.concatenate([w, w[:, iu] * w[:, ju]], axis=1)

    fa, fb = feats(a), feats(b)
    se = np.sqrt(fa.var(axis=0) / runs + fb.var(axis=0) / runs)
    assert np.all(np.abs(fa.mean(axis=0) - fb.mean(axis=0)) < 3 * se)


def test_model_validation():
    with pytest.raises(ValueError):
        CorrelationModel([1.0, -1.0], 0.1)
    with pytest.raises(ValueError):
        CorrelationModel([1.0, 1.0], 0.0)
    with pytest.raises(ValueError):
        CorrelationModel([1.0, 1.0], 0.1, [[1.0, 1.0], [0.0, 1.0]])
    with pytest.raises(DimMismatch):
        run_learning(CorrelationModel([1.0, 1.0], 0.1), CouplingState([1.0, 0.0, 0.0]), 2, SignalStream(0))
