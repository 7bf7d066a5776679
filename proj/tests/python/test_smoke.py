# Copyright 2026 The warpkit Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import warpkit

POINTS = np.array([[-0.5, -0.5], [0.5, -0.4], [0.4, 0.6], [-0.6, 0.3]])
DISP = np.array([[0.05, 0.02], [-0.03, 0.04], [0.02, -0.05], [0.01, 0.03]])


def smooth_image(seed, h=24, w=20, c=3):
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:h, 0:w]
    planes = [0.5 + 0.4 * np.sin(0.3 * x + rng.uniform(0, 6)) * np.cos(0.25 * y + rng.uniform(0, 6)) for _ in range(c)]
    return np.stack(planes, axis=-1)


def test_spline_interpolates_control_points():
    params = warpkit.fit(POINTS, DISP, lam=0.0)
    np.testing.assert_allclose(params.evaluate(POINTS + DISP), POINTS, atol=1e-10)
    np.testing.assert_allclose(params.w.sum(axis=0), 0.0, atol=1e-12)
    assert warpkit.kernel(1.0) == 0.0
    assert warpkit.kernel(math.e) == pytest.approx(math.e**2)


def test_warp_matches_flow_resample():
    img = smooth_image(0)
    warped = warpkit.warp_image(img, POINTS, DISP, alpha=1.5)
    flow = warpkit.build_flow(warpkit.fit(POINTS, 1.5 * DISP), 24, 20)
    assert flow.shape == (24, 20, 2)
    np.testing.assert_array_equal(warped, warpkit.resample(img, flow))
    np.testing.assert_array_equal(warpkit.warp_image(img, POINTS, DISP, alpha=0.0), img)


def test_vjp_matches_finite_difference():
    img = smooth_image(1)
    rng = np.random.default_rng(2)
    upstream = rng.normal(size=img.shape)
    grads = warpkit.warp_vjp(img, POINTS, DISP, upstream)
    assert grads["image"].shape == img.shape
    h = 1e-6
    for i in range(len(DISP)):
        bumped = DISP.copy()
        bumped[i, 0] += h
        dropped = DISP.copy()
        dropped[i, 0] -= h
        fd = (np.sum(upstream * warpkit.warp_image(img, POINTS, bumped))
              - np.sum(upstream * warpkit.warp_image(img, POINTS, dropped))) / (2 * h)
        assert grads["displacements"][i, 0] == pytest.approx(fd, rel=1e-3, abs=1e-6)
    report = warpkit.check_gradients(0, 16, 16, 8)
    assert report["passed"] and report["max_rel_error"] < 1e-4


def test_backends_identities():
    img = smooth_image(3)
    np.testing.assert_array_equal(warpkit.projective_warp(img, [1, 0, 0, 0, 1, 0, 0, 0]), img)
    np.testing.assert_array_equal(warpkit.dense_warp(img, np.zeros((4, 4, 2))), img)
    np.testing.assert_array_equal(warpkit.landmark_warp(img, POINTS, np.zeros_like(POINTS)), img)


def test_losses():
    assert warpkit.patch_adv_loss_generator(np.zeros((5, 3))) == pytest.approx(math.log(3), abs=1e-12)
    uniform = np.zeros((2, 6))
    loss = warpkit.identity_adv_loss_discriminator(uniform, [0, 1], uniform, [0, 1], uniform, [0, 1])
    assert loss == pytest.approx(3 * math.log(6), abs=1e-12)
    assert warpkit.total_generator_loss(1, 1, 1, 1) == 23.0
    with pytest.raises(warpkit.LabelError):
        warpkit.identity_adv_loss_generator(uniform, [0, 2])
    feats = np.random.default_rng(4).normal(size=(6, 6, 2))
    out = warpkit.adain(feats, [0.5, -1.0], [2.0, 0.3])
    np.testing.assert_allclose(out.mean(axis=(0, 1)), [0.5, -1.0], atol=1e-10)


def test_png_and_wfld_round_trip(tmp_path):
    img = np.round(smooth_image(5) * 255) / 255
    warpkit.write_png(img, str(tmp_path / "a.png"))
    np.testing.assert_array_equal(warpkit.read_png(str(tmp_path / "a.png")), img)
    flow = warpkit.build_flow(warpkit.fit(POINTS, DISP), 7, 9)
    warpkit.write_wfld(flow, str(tmp_path / "a.wfld"))
    np.testing.assert_allclose(warpkit.read_wfld(str(tmp_path / "a.wfld")), flow, atol=1e-7)
    with pytest.raises(warpkit.IoError):
        warpkit.read_png(str(tmp_path / "missing.png"))


def test_alignment():
    templ = warpkit.template_landmarks()
    angle = 0.4
    rot = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
    source = 0.8 * templ @ rot.T + np.array([12.0, -5.0])
    t = warpkit.estimate_similarity(source, templ)
    assert t["scale"] == pytest.approx(1 / 0.8, rel=1e-10)
    assert t["rotation"] == pytest.approx(-angle, abs=1e-10)
    aligned = warpkit.align_face(smooth_image(6, 64, 64, 1), warpkit.template_landmarks(32), size=32)
    assert aligned.shape == (32, 32, 1)


def test_fit_and_errors():
    report = warpkit.roundtrip(0, size=16, k=4, iterations=30)
    assert len(report["trajectory"]) == 30
    assert report["best_loss"] == min(report["trajectory"])
    with pytest.raises(warpkit.DuplicatePointError):
        warpkit.fit(np.zeros((3, 2)), np.zeros((3, 2)))
    with pytest.raises(warpkit.ShapeError):
        warpkit.warp_image(np.zeros((4, 4)), POINTS, DISP[:3])
    assert issubclass(warpkit.DivergenceError, warpkit.Error)


def test_divergence_carries_trajectory():
    src = smooth_image(7, 32, 32, 1)
    target = warpkit.projective_warp(src, [1, 0, 0.002, 0, 1, 0, 0, 0])
    with pytest.raises(warpkit.DivergenceError) as info:
        warpkit.fit_warp(src, target, step_size=5.0, iterations=400)
    trajectory = info.value.trajectory
    assert len(trajectory) == 101
    assert trajectory[-1] > 10 * trajectory[0]
