# Copyright 2026 The QGE Lab Authors. All Rights Reserved.
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
# ==============================================================================
import math

import numpy as np
import pytest

import qge_lab


def test_version():
    assert qge_lab.__version__.startswith("0.1.0")


def test_norm_identity_small():
    for eta in range(5):
        assert qge_lab.sector_norm(4, 2, eta) == pytest.approx(
            math.comb(eta, 2) * math.comb(4 - eta + 2, 2), abs=1e-9)
    assert qge_lab.binom_norm(4, 1, 2) == 6
    assert len(qge_lab.observable_labels(4, 2)) == 66


def test_poly_transform_matches_numpy():
    rng = np.random.default_rng(3)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    a = (g + g.conj().T) / 2
    a /= 1.1 * np.linalg.norm(a, 2)
    got = qge_lab.eigen_poly_transform(a, [0.0, 0.0, 1.0], chebyshev=False)
    np.testing.assert_allclose(got, a @ a, atol=1e-12)


def test_probe_readout():
    dist = qge_lab.readout_distribution(0.2, 3)
    assert sum(dist) == pytest.approx(1.0)
    assert dist[5] + dist[6] >= 8 / math.pi**2
    assert qge_lab.single_shot_success(0.2, 3) >= 0.81
    assert qge_lab.grid(1) == [-0.25, 0.25]


def test_schedule_and_costs():
    q_max, delta, reps = qge_lab.schedule(0.25, count=10)
    assert q_max == 2 and len(delta) == 3 and len(reps) == 3
    ranking = qge_lab.compare(152, 2, 113, 1e-3)
    assert ranking[0][0] == "method-2"
    assert qge_lab.total_queries("method-1", 4, 1, 2, 0.5) == pytest.approx(
        2 * qge_lab.total_queries("method-1", 4, 1, 2, 1.0))


def test_simulate_within_budget():
    out = qge_lab.simulate(4, 1, 2, epsilon=0.1, method="method-2", trials=20, seed=5, jobs=2)
    assert out["max_mse"] <= 0.01
    assert len(out["labels"]) == len(out["mse"])


def test_errors_raise():
    with pytest.raises(qge_lab.QgeError):
        qge_lab.simulate(4, 1, 2, epsilon=2.0)
    with pytest.raises(qge_lab.QgeError):
        qge_lab.total_queries("grover", 4, 1, 2, 0.1)


def test_cli_and_verify(tmp_path):
    code, out, _ = qge_lab.cli(["cost", "--N", "8", "--k", "1", "--out", str(tmp_path)])
    assert code == 0 and "ranking" in out
    assert (tmp_path / "cost.csv").exists()
    assert qge_lab.verify(["norm-identity"]) == [("norm-identity", True)]


def test_block_encoding_dump(tmp_path):
    a = np.diag([0.5, -0.25]).astype(complex)
    path = tmp_path / "be.bin"
    qge_lab.dump_block_encoding(a, 1.0, str(path))
    raw = path.read_bytes()
    assert raw[:6] == b"QGEBE\x00"
    u = qge_lab.load_block_encoding(str(path))
    assert u.shape == (4, 4)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(u[:2, :2], a, atol=1e-15)
