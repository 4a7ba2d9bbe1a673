import json
import math
import os

import pytest

import ctlab

DATA = os.environ.get("CTLAB_TEST_DATA", os.path.join(os.path.dirname(__file__), "..", "data"))


def test_representation_residuals():
    rep = ctlab.solve_representation(2, 1, 1, 1)
    x, y, z = rep["traces"]
    assert abs(x - complex(1.5, math.sqrt(3) / 2)) < 1e-9
    assert abs(y - x.conjugate()) < 1e-9
    assert abs(z - x.conjugate()) < 1e-9
    assert rep["commutator_residual"] < 1e-9
    assert rep["conjugacy_residual"] < 1e-6


def test_bad_monodromy_raises_value_error():
    with pytest.raises(ValueError):
        ctlab.solve_representation(1, 0, 0, 1)


def test_stable_slope_is_golden():
    assert ctlab.stable_slope(2, 1, 1, 1) == pytest.approx((math.sqrt(5) - 1) / 2)


def test_path_example_electric_distance():
    edges = [(i, i + 1, 1.0) for i in range(4)]
    d = ctlab.electric_distances(5, edges, [[1, 2, 3]])
    assert d[0][4] == 3.0
    assert d[1][3] == 1.0


def test_delta_on_cycle_and_tree():
    cycle = [(i, (i + 1) % 12, 1.0) for i in range(12)]
    assert ctlab.four_point_delta(12, cycle) == 3.0
    assert ctlab.four_point_delta(12, cycle, samples=50, seed=2) <= 3.0
    tree = [(i, (i - 1) // 2, 1.0) for i in range(1, 15)]
    assert ctlab.four_point_delta(15, tree) == 0.0
    assert ctlab.tracking_constant(15, tree, [[0, 1, 2]], 7, 14) == 0.0


def test_cli_round_trip_is_deterministic():
    args = ["coarse", "delta", "--graph", os.path.join(DATA, "cycle12.graph")]
    first = ctlab.run_cli(args)
    second = ctlab.run_cli(args)
    assert first == second
    assert first[0] == 0
    assert json.loads(first[1])["delta"] == 3.0
    assert ctlab.run_cli(["ct-draw"])[0] == 2


def test_vacuous_leaf_run():
    report = ctlab.verify_leaves(leaves=0)
    assert report["summary"]["pass"] is True


def test_identity_ladder_audit():
    report = ctlab.ladder_audit("blocks=1\nradius=3\nkind=thick\nautomorphism=identity\nsamples=0\nseed=7\n")
    assert report["summary"]["pass"] is True
    assert report["audits"]["lipschitz"]["constants"]["C"] <= 1.0 + 1e-9
