import numpy as np
import pytest

from groupwalk.errors import FormatError
from groupwalk.tracking import (
    Detection,
    KalmanConfig,
    TrackState,
    init_track,
    predict,
    step_frame,
    update,
)

CFG = KalmanConfig()


def _assert_valid(state):
    cov = state.cov
    assert cov.shape == (8, 8) and state.mean.shape == (8,)
    assert np.abs(cov - cov.T).max() < 1e-9 * np.abs(cov).max()
    np.linalg.cholesky(cov)


def _scalar_axis_filter(zs, r, q_pos, q_vel, p_pos, p_vel):
    """Two-state (position, velocity) filter for one box coordinate."""
    F = np.array([[1.0, 1.0], [0.0, 1.0]])
    Q = np.diag([q_pos, q_vel])
    x = np.array([zs[0], 0.0])
    P = np.diag([p_pos, p_vel])
    out = [(x.copy(), P.copy())]
    for z in zs[1:]:
        x = F @ x
        P = F @ P @ F.T + Q
        s = P[0, 0] + r
        k = P[:, 0] / s
        x = x + k * (z - x[0])
        P = P - np.outer(k, P[0, :])
        out.append((x.copy(), P.copy()))
    return out


def test_default_noise_levels():
    assert (CFG.meas_noise, CFG.proc_noise_pos, CFG.proc_noise_vel) == (10.0, 10.0, 2.0)
    np.testing.assert_array_equal(CFG.R, 10.0 * np.eye(4))
    np.testing.assert_array_equal(CFG.Q, np.diag([10.0] * 4 + [2.0] * 4))


def test_config_rejects_nonpositive():
    with pytest.raises(ValueError):
        KalmanConfig(meas_noise=0.0)


def test_init_track():
    st = init_track(Detection(0, 1, 5, 5, 10, 20), CFG)
    np.testing.assert_array_equal(st.mean, [5, 5, 10, 20, 0, 0, 0, 0])
    np.testing.assert_array_equal(st.cov, np.diag([100.0] * 4 + [25.0] * 4))
    assert st.last_frame == 0
    again = init_track(Detection(0, 1, 5, 5, 10, 20), CFG)
    np.testing.assert_array_equal(again.mean, st.mean)
    np.testing.assert_array_equal(again.cov, st.cov)


def test_detection_rejects_empty_box():
    with pytest.raises(FormatError):
        Detection(0, 1, 5, 5, 0, 20)


def test_predict_constant_velocity():
    st = TrackState(1, np.array([0, 0, 10, 10, 2, 0, 0, 0], float), np.eye(8), 0)
    assert predict(st, 1, CFG).mean[0] == 2.0
    still = TrackState(1, np.array([4, 5, 10, 10, 0, 0, 0, 0], float), np.eye(8), 0)
    np.testing.assert_array_equal(predict(still, 7, CFG).mean[:4], [4, 5, 10, 10])


def test_predict_covariance_by_hand():
    P = np.diag([1.0, 2.0, 3.0, 4.0, 0.5, 0.5, 0.5, 0.5])
    P[0, 4] = P[4, 0] = 0.1
    st = TrackState(1, np.zeros(8), P, 0)
    out = predict(st, 1, CFG).cov
    # x/vx block: F = [[1,1],[0,1]] on [[1, .1], [.1, .5]] plus Q = diag(10, 2)
    np.testing.assert_allclose(out[np.ix_([0, 4], [0, 4])], [[1.7 + 10, 0.6], [0.6, 0.5 + 2]])
    assert np.trace(out) > np.trace(P)


def test_predict_multi_frame_equals_repeated():
    st = init_track(Detection(0, 1, 0, 0, 10, 10), CFG)
    a = predict(st, 3, CFG)
    b = predict(predict(predict(st, 1, CFG), 1, CFG), 1, CFG)
    np.testing.assert_array_equal(a.mean, b.mean)
    np.testing.assert_array_equal(a.cov, b.cov)


def test_update_matches_per_axis_filter():
    rng = np.random.default_rng(3)
    n = 40
    truth = np.stack([5 + 2.0 * np.arange(n), 50 - 1.0 * np.arange(n),
                      30 + 0.1 * np.arange(n), 60 + 0.2 * np.arange(n)], axis=1)
    zs = truth + rng.normal(0, 1, size=truth.shape)
    st = init_track(Detection(0, 7, *zs[0]), CFG)
    states = [st]
    for f in range(1, n):
        st = update(predict(st, 1, CFG), Detection(f, 7, *zs[f]), CFG)
        states.append(st)
    for axis in range(4):
        ref = _scalar_axis_filter(zs[:, axis], 10.0, 10.0, 2.0, 100.0, 25.0)
        for st, (x, P) in zip(states, ref):
            np.testing.assert_allclose(st.mean[[axis, axis + 4]], x, rtol=1e-9, atol=1e-9)
            np.testing.assert_allclose(st.cov[np.ix_([axis, axis + 4], [axis, axis + 4])], P,
                                       rtol=1e-9, atol=1e-9)


def test_stationary_flows_converge():
    st = init_track(Detection(0, 1, 5, 5, 10, 20), CFG)
    for f in range(1, 50):
        st = update(predict(st, 1, CFG), Detection(f, 1, 5, 5, 10, 20), CFG)
    assert np.all(np.abs(st.mean[4:]) < 0.05)


def test_constant_velocity_noiseless():
    st = init_track(Detection(0, 1, 0, 0, 10, 20), CFG)
    for f in range(1, 50):
        st = update(predict(st, 1, CFG), Detection(f, 1, 3.0 * f, 0, 10, 20), CFG)
        _assert_valid(st)
    assert abs(st.mean[4] - 3.0) < 0.1


def test_uninformative_measurement():
    cfg = KalmanConfig(meas_noise=1e12)
    st = TrackState(1, np.array([0, 0, 10, 10, 1, 1, 0, 0], float), np.eye(8) * 4, 0)
    pred = predict(st, 1, cfg)
    post = update(pred, Detection(1, 1, 500, -300, 80, 90), cfg)
    np.testing.assert_allclose(post.mean, pred.mean, atol=1e-3)


def test_update_contracts_position_variance():
    st = predict(init_track(Detection(0, 1, 0, 0, 10, 10), CFG), 1, CFG)
    post = update(st, Detection(1, 1, 1, 1, 10, 10), CFG)
    assert np.all(np.diag(post.cov)[:4] <= np.diag(st.cov)[:4])


def test_update_rejects_wrong_id():
    st = init_track(Detection(0, 1, 0, 0, 10, 10), CFG)
    with pytest.raises(ValueError):
        update(st, Detection(1, 2, 0, 0, 10, 10), CFG)


def test_step_frame_births_and_deaths():
    dets = [Detection(0, i, 10.0 * i, 0, 10, 10) for i in (1, 2, 3)]
    tracks = step_frame({}, dets, CFG)
    assert sorted(tracks) == [1, 2, 3]
    for f in range(1, 11):
        tracks = step_frame(tracks, [Detection(f, 1, 0, 0, 10, 10)], CFG, max_gap=10)
    assert 2 in tracks  # unseen for 10 frames
    tracks = step_frame(tracks, [Detection(11, 1, 0, 0, 10, 10)], CFG, max_gap=10)
    assert sorted(tracks) == [1]  # unseen for 11 frames


def test_step_frame_empty_frame_drops_stale():
    tracks = step_frame({}, [Detection(0, 1, 0, 0, 10, 10)], CFG)
    assert step_frame(tracks, [], CFG, max_gap=3, frame=3) == tracks
    assert step_frame(tracks, [], CFG, max_gap=3, frame=4) == {}


def test_step_frame_updates_once_per_frame():
    tracks = step_frame({}, [Detection(0, 1, 0, 0, 10, 10)], CFG)
    expected = tracks[1]
    for f in range(1, 6):
        d = Detection(f, 1, 2.0 * f, 0, 10, 10)
        tracks = step_frame(tracks, [d], CFG)
        expected = update(predict(expected, 1, CFG), d, CFG)
        np.testing.assert_array_equal(tracks[1].mean, expected.mean)
        np.testing.assert_array_equal(tracks[1].cov, expected.cov)


def test_step_frame_gap_uses_multi_frame_predict():
    tracks = step_frame({}, [Detection(0, 1, 0, 0, 10, 10)], CFG)
    d = Detection(4, 1, 8, 0, 10, 10)
    out = step_frame(tracks, [d], CFG)[1]
    ref = update(predict(tracks[1], 4, CFG), d, CFG)
    np.testing.assert_array_equal(out.mean, ref.mean)


def test_step_frame_rejects_duplicates_and_mixed_frames():
    with pytest.raises(FormatError, match="frame 4"):
        step_frame({}, [Detection(4, 1, 0, 0, 1, 1), Detection(4, 1, 2, 2, 1, 1)], CFG)
    with pytest.raises(FormatError):
        step_frame({}, [Detection(4, 1, 0, 0, 1, 1), Detection(5, 2, 2, 2, 1, 1)], CFG)


def test_covariance_stays_valid_under_noise():
    rng = np.random.default_rng(0)
    st = init_track(Detection(0, 1, 0, 0, 30, 60), CFG)
    for f in range(1, 200):
        z = np.array([2.0 * f, -1.0 * f, 30, 60]) + rng.normal(0, 5, 4)
        st = update(predict(st, 1 + (f % 3 == 0), CFG), Detection(f, 1, *z), CFG)
        _assert_valid(st)


def test_determinism():
    def run():
        st = init_track(Detection(0, 1, 0, 0, 30, 60), CFG)
        rng = np.random.default_rng(9)
        for f in range(1, 30):
            st = update(predict(st, 1, CFG), Detection(f, 1, *rng.normal(0, 3, 2), 30, 60), CFG)
        return st
    a, b = run(), run()
    assert a.mean.tobytes() == b.mean.tobytes() and a.cov.tobytes() == b.cov.tobytes()
