import numpy as np
import pytest

from groupwalk import io
from groupwalk.synth import (
    GroupSpec,
    ScenarioSpec,
    SingletonSpec,
    SplitSpec,
    generate,
    p5_split,
    spec_from_dict,
    three_groups,
)


def test_noiseless_group_translates_rigidly():
    sc = generate(ScenarioSpec(groups=(GroupSpec(3, (0.0, 0.0), (2.0, -1.0)),), frames=20))
    for f in range(1, 20):
        for prev, cur in zip(sc.detections[f - 1], sc.detections[f]):
            assert (cur.x - prev.x, cur.y - prev.y) == (2.0, -1.0)
            assert (cur.w, cur.h) == (prev.w, prev.h)
    assert all(gt == sc.ground_truth[0] for gt in sc.ground_truth)
    assert len(set(sc.ground_truth[0].values())) == 1


def test_singletons_get_their_own_cluster():
    sc = generate(three_groups())
    gt = sc.ground_truth[0]
    sizes = sorted(np.bincount(list(gt.values()))[1:].tolist())
    assert sizes == [1, 2, 3]


def test_split_changes_truth_at_split_frame():
    spec = p5_split(split_frame=40, frames=80)
    sc = generate(spec)
    assert len(set(sc.ground_truth[39].values())) == 1
    sizes = sorted(np.bincount(list(sc.ground_truth[40].values()))[1:].tolist())
    assert [s for s in sizes if s] == [1, 2, 3]
    assert all(sc.ground_truth[f] == sc.ground_truth[40] for f in range(40, 80))


def test_split_velocities_apply_from_split_frame():
    spec = ScenarioSpec(
        groups=(GroupSpec(2, (0.0, 0.0), (1.0, 0.0)),),
        frames=10,
        split_at=SplitSpec(5, 0, (((0,), (0.0, 4.0)), ((1,), (-3.0, 0.0)))),
    )
    sc = generate(spec)
    d4, d5 = sc.detections[4], sc.detections[5]
    assert (d5[0].x - d4[0].x, d5[0].y - d4[0].y) == (0.0, 4.0)
    assert (d5[1].x - d4[1].x, d5[1].y - d4[1].y) == (-3.0, 0.0)


def test_depth_scale_grows_boxes():
    spec = ScenarioSpec(singletons=(SingletonSpec((0.0, 0.0), (1.0, 0.0)),),
                        frames=30, depth_scale=1.01)
    sc = generate(spec)
    assert sc.detections[29][0].w == pytest.approx(40.0 * 1.01 ** 29)
    assert sc.detections[29][0].h == pytest.approx(80.0 * 1.01 ** 29)


def test_noise_statistics():
    spec = ScenarioSpec(singletons=(SingletonSpec((0.0, 0.0), (0.0, 0.0)),),
                        frames=4000, obs_noise=2.0)
    xs = np.array([d[0].x for d in generate(spec).detections])
    ws = np.array([d[0].w for d in generate(spec).detections])
    assert xs.std() == pytest.approx(2.0, rel=0.05)
    assert ws.std() == pytest.approx(0.2, rel=0.05)


def test_fixed_seed_is_byte_identical():
    import io as stdio

    def dump(seed):
        buf = stdio.StringIO()
        sc = generate(p5_split(seed=seed))
        io.write_detections(sc.frames(), buf)
        io.write_ground_truth(enumerate(sc.ground_truth), buf)
        return buf.getvalue()

    assert dump(3) == dump(3)
    assert dump(3) != dump(4)


def test_invalid_specs():
    with pytest.raises(ValueError):
        ScenarioSpec(frames=10)
    with pytest.raises(ValueError):
        ScenarioSpec(groups=(GroupSpec(2, (0, 0), (1, 0)),), obs_noise=-1)
    with pytest.raises(ValueError):
        ScenarioSpec(groups=(GroupSpec(3, (0, 0), (1, 0)),),
                     split_at=SplitSpec(5, 0, (((0, 1), (1, 0)),)))


def test_spec_from_dict_round_trip():
    spec = spec_from_dict({
        "groups": [{"size": 6, "spawn": [200, 300], "velocity": [2, 0]}],
        "frames": 200, "obs_noise": 1.0, "seed": 0,
        "split_at": {"frame": 60, "group": 0, "parts": [
            {"members": [0, 1, 2], "velocity": [2, -3]},
            {"members": [3, 4], "velocity": [1, 3]},
            {"members": [5], "velocity": [5, 1]},
        ]},
    })
    a, b = generate(spec), generate(p5_split())
    assert [[(d.x, d.y, d.w, d.h) for d in f] for f in a.detections] == \
           [[(d.x, d.y, d.w, d.h) for d in f] for f in b.detections]
