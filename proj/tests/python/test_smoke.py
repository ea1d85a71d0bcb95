"""Smoke tests for the pathguide python module (built into the CMake tree)."""

import os

import numpy as np
import pytest

import pathguide as pg


def default_palette():
    return pg.ClassPalette.defaults()


def class_color(palette, name):
    for e in palette.entries():
        if e.name == name:
            return e.color
    raise KeyError(name)


def test_decode_and_analyze_roundtrip():
    palette = default_palette()
    sidewalk = class_color(palette, "sidewalk")
    road = class_color(palette, "road")

    image = np.zeros((60, 90, 3), dtype=np.uint8)
    image[:, :] = road
    image[:, 30:60] = sidewalk  # centered walkable column

    frame = pg.decode_mask(image, palette)
    assert frame.width == 90 and frame.height == 60

    back = pg.render_colors(frame)
    assert np.array_equal(back, image)

    analysis = pg.analyze(frame, theta_conf=0.3)
    assert analysis.present
    assert analysis.codes == (0, 1, 0)
    cx, cy = analysis.centroid
    assert cx == pytest.approx(44.5)
    assert analysis.component_mask.sum() == 60 * 30


def test_component_and_centroid_helpers():
    grid = np.zeros((5, 7), dtype=bool)
    grid[1:4, 2:5] = True
    mask, count, present = pg.largest_component(grid)
    assert present and count == 9
    assert pg.estimate_centroid(mask) == pytest.approx((3.0, 2.0))
    assert pg.binary_conversion(0.5, 0.3) == 1
    with pytest.raises(ValueError):
        pg.binary_conversion(1.5, 0.3)


def test_verdict_voting():
    v = pg.LightVerdict()
    v = pg.update_verdict(v, pg.LightClass.vehicle_green)
    assert v.color == pg.VerdictColor.none  # non-pedestrian predictions are discarded
    for _ in range(4):
        v = pg.update_verdict(v, pg.LightClass.pedestrian_green)
    for _ in range(3):
        v = pg.update_verdict(v, pg.LightClass.pedestrian_red)
    assert v.color == pg.VerdictColor.green
    assert len(v.buffer) == 7


def test_controller_step():
    palette = default_palette()
    classes = np.full((240, 320), 2, dtype=np.uint8)  # all sidewalk
    frame = pg.frame_from_classes(classes, palette)
    analysis = pg.analyze(frame, theta_conf=0.3)

    ctrl = pg.Controller(pg.ControllerConfig())
    result = ctrl.step(analysis, pg.VerdictColor.none, altitude=1.2)
    cmd = result.command
    assert (cmd.v_lr, cmd.v_f, cmd.v_ud, cmd.v_yaw) == (0, 20, 0, 0)
    assert cmd.rc_line() == "rc 0 20 0 0"

    stopped = ctrl.step(analysis, pg.VerdictColor.red, altitude=1.2, frame_index=1)
    assert stopped.command.v_f == 0
    assert stopped.voice.text == "stop"


def test_closed_loop_scenario():
    root = os.environ.get("PATHGUIDE_ROOT", os.path.join(os.path.dirname(__file__), "..", ".."))
    scenario = os.path.join(root, "scenarios", "sidewalk_20m.scn")
    record = pg.run_scenario(scenario, step_cap=700)
    m = record.metrics
    assert m.goal_reached
    assert m.red_light_violations == 0
    assert m.obstacle_hits == 0
    assert m.walkable_fraction >= 0.95
    assert record.steps == m.total_steps
