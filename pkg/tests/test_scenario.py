import copy
import json
import logging
import math

import numpy as np
import pytest

from chiral_lics.errors import ScenarioError
from chiral_lics.model import CyclicLicsParams, MultiLicsParams
from chiral_lics.scenario import load_scenario, parse_scenario, scenario_hash
from chiral_lics.stirap import StirapPulses

CYCLIC = {
    "kind": "two-level-cyclic",
    "params": {"gamma_g": 0.5, "gamma_e": 2.24, "q": 4, "omega_c": 1.2, "delta": 4.506},
    "branches": [{"label": "L", "chirality_sign": 1, "s_g": 7}, {"label": "R", "chirality_sign": -1, "s_g": 2}],
    "initial_state": {"basis_index": 0},
    "time": {"t_start": 0, "t_stop": 5, "points": 11},
}

MULTI = {
    "kind": "multilevel",
    "params": {"gamma_g": 1.7, "gamma_e": 1.9, "q_gg": 1.2, "q_ee": 2.4, "q_ge": 2.26, "s_g": 19, "s_e": 20, "delta": -6.2},
    "branches": [
        {"label": "R", "initial_state": {"named": "darkR"}},
        {"label": "L", "initial_state": {"named": "brightL"}},
    ],
    "time": {"t_stop": 8},
}


def _with(doc, **changes):
    out = copy.deepcopy(doc)
    for dotted, value in changes.items():
        target = out
        *parents, leaf = dotted.split(".")
        for key in parents:
            target = target[int(key)] if isinstance(target, list) else target[key]
        target[leaf] = value
    return out


def test_parse_cyclic_branches():
    sc = parse_scenario(CYCLIC)
    assert [b.label for b in sc.branches] == ["L", "R"]
    left, right = sc.branches
    assert left.params == CyclicLicsParams(gamma_g=0.5, gamma_e=2.24, q=4, omega_c=1.2, delta=4.506, s_g=7)
    assert right.params.chirality_sign == -1 and right.params.s_g == 2
    np.testing.assert_array_equal(left.c0, [1, 0])
    np.testing.assert_array_equal(sc.time.values(), np.linspace(0, 5, 11))


def test_parse_multilevel_named_states():
    sc = parse_scenario(MULTI)
    r, l = sc.branches
    assert isinstance(r.params, MultiLicsParams) and r.params.n_g == 5
    assert r.c0[[0, 2]] == pytest.approx([-1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert l.c0[[0, 2]] == pytest.approx([1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert sc.time.t_start == 0 and sc.time.points == 500


def test_parse_three_wave_defaults():
    sc = parse_scenario({"kind": "three-wave", "branches": [{"label": "L"}, {"label": "R", "chirality_sign": -1}]})
    assert sc.branches[0].params == StirapPulses()
    assert [b.chirality_sign for b in sc.branches] == [1, -1]
    assert sc.branches[0].c0 is None


def test_missing_branches_gives_single_default_branch():
    doc = {k: v for k, v in CYCLIC.items() if k != "branches"}
    sc = parse_scenario(doc)
    assert [b.label for b in sc.branches] == ["default"]


def test_complex_amplitudes_are_normalized(caplog):
    doc = _with(CYCLIC, initial_state={"amplitudes": [3, [0, 4]]})
    with caplog.at_level(logging.WARNING, logger="chiral_lics.scenario"):
        sc = parse_scenario(doc)
    np.testing.assert_allclose(sc.branches[0].c0, [0.6, 0.8j])
    assert "renormalizing" in caplog.text


def test_nearly_normalized_amplitudes_do_not_warn(caplog):
    doc = _with(CYCLIC, initial_state={"amplitudes": [0.6, [0, 0.8000000001]]})
    with caplog.at_level(logging.WARNING, logger="chiral_lics.scenario"):
        parse_scenario(doc)
    assert caplog.text == ""


@pytest.mark.parametrize(
    "doc, path",
    [
        ({"params": {}}, "kind"),
        (_with(CYCLIC, kind="four-wave"), "kind"),
        (_with(CYCLIC, **{"params.gamma_g": -1}), "branches[0]"),
        (_with(CYCLIC, **{"params.gamma_g": "fast"}), "branches[0].gamma_g"),
        (_with(CYCLIC, **{"params.colour": 1}), "branches[0].colour"),
        (_with(CYCLIC, **{"branches.1.label": "L"}), "branches[1].label"),
        (_with(CYCLIC, initial_state={"basis_index": 2}), "initial_state.basis_index"),
        (_with(CYCLIC, initial_state={"amplitudes": [0, 0]}), "initial_state.amplitudes"),
        (_with(CYCLIC, initial_state={"amplitudes": [1, [0, 1, 2]]}), "initial_state.amplitudes[1]"),
        (_with(CYCLIC, initial_state={"named": "darkR"}), "initial_state.named"),
        (_with(CYCLIC, time={"t_start": 0}), "time.t_stop"),
        (_with(CYCLIC, time={"t_stop": 5, "points": 2.5}), "time.points"),
        (_with(CYCLIC, scan={"axis": "delta", "start": 0, "stop": 1}), "scan.t_probe"),
        (_with(CYCLIC, scan={"axis": "q", "start": 0, "stop": 1}), "scan.axis"),
        (_with(CYCLIC, trap={"bracket": [3, 1]}), "trap.bracket"),
        (_with(MULTI, **{"branches.0.initial_state": {"named": "up"}}), "branches[0].initial_state.named"),
        ({"kind": "three-wave", "branches": [{"label": "L", "stokes": {"peak": 1, "center": 2, "width": 1}}]}, "branches[0].stokes.center"),
        ({"kind": "three-wave", "branches": [{"label": "L", "pump": {"peak": 1, "center": 2, "width": 0}}]}, "branches[0].pump.width"),
        ({"kind": "three-wave", "initial_state": {"basis_index": 1}}, "initial_state"),
    ],
)
def test_schema_errors_name_the_field(doc, path):
    with pytest.raises(ScenarioError) as err:
        parse_scenario(doc)
    assert err.value.path == path
    assert str(err.value).startswith(path + ":")


def test_hash_is_canonical():
    reordered = json.loads(json.dumps(CYCLIC, sort_keys=True))
    assert scenario_hash(CYCLIC) == scenario_hash(reordered)
    assert scenario_hash(CYCLIC) != scenario_hash(_with(CYCLIC, **{"params.q": 4.0001}))
    assert parse_scenario(CYCLIC).sha256 == scenario_hash(CYCLIC)


def test_load_scenario(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(MULTI))
    assert load_scenario(path).kind == "multilevel"
    path.write_text("{not json")
    with pytest.raises(ScenarioError, match="not valid JSON"):
        load_scenario(path)
    with pytest.raises(ScenarioError, match="cannot read"):
        load_scenario(tmp_path / "missing.json")
