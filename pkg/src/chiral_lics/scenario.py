"""Scenario documents: JSON files describing one run of the CLI.

A scenario names a system kind, its parameters, one or more *branches*
(typically the two enantiomers, each overriding some parameters or the
initial state) and the sampling for the requested run::

    {
      "kind": "two-level-cyclic",
      "params": {"gamma_g": 0.5, "gamma_e": 2.24, "q": 4, "omega_c": 1.2, "delta": 4.506},
      "branches": [
        {"label": "L", "chirality_sign": 1, "s_g": 7},
        {"label": "R", "chirality_sign": -1, "s_g": 2}
      ],
      "initial_state": {"basis_index": 0},
      "time": {"t_start": 0, "t_stop": 5, "points": 500},
      "scan": {"axis": "delta", "start": 0, "stop": 10, "points": 2001, "t_probe": 5},
      "trap": {"bracket": [-10, 10]}
    }

All rates and frequencies are in 1/T and times in T.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray

from .darkbright import enantiomer_state
from .errors import ParameterError, ScenarioError
from .model import CyclicLicsParams, MultiLicsParams
from .stirap import PulseSpec, StirapPulses

log = logging.getLogger(__name__)

KINDS = ("two-level-cyclic", "multilevel", "three-wave")
NAMED_STATES = ("darkR", "brightL")
RENORMALIZE_WARN = 1e-6

_PARAM_TYPES = {"two-level-cyclic": CyclicLicsParams, "multilevel": MultiLicsParams}
_THREE_WAVE_KEYS = {"stokes", "pump", "phi_p", "chirality_sign"}


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_stop: float
    points: int = 500

    def values(self) -> NDArray[np.float64]:
        return np.linspace(self.t_start, self.t_stop, self.points)


@dataclass(frozen=True)
class ScanSpec:
    axis: str
    start: float
    stop: float
    points: int = 500
    t_probe: float | None = None

    def values(self) -> NDArray[np.float64]:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class TrapSpec:
    bracket: tuple[float, float] = (-10.0, 10.0)
    n_scan: int = 201


@dataclass(frozen=True)
class Branch:
    """One enantiomer (or other variant) of the system.

    ``params`` is the fully resolved parameter object for the kind
    (``CyclicLicsParams``, ``MultiLicsParams`` or ``StirapPulses``);
    ``c0`` the normalized initial amplitudes (``None`` for three-wave).
    """

    label: str
    params: Any
    c0: NDArray[np.complex128] | None
    chirality_sign: int = 1
    phi_p: float = 0.0


@dataclass(frozen=True)
class Scenario:
    kind: str
    branches: tuple[Branch, ...]
    time: TimeGrid | None = None
    scan: ScanSpec | None = None
    trap: TrapSpec = field(default_factory=TrapSpec)
    output: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def sha256(self) -> str:
        return scenario_hash(self.raw)


def scenario_hash(doc: dict) -> str:
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise ScenarioError(f"{path}.{key}" if path else key, "required field is missing")
    return doc[key]


def _number(value, path: str, *, integer=False, positive=False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(path, "must be finite")
    if integer:
        if not float(value).is_integer():
            raise ScenarioError(path, f"expected an integer, got {value!r}")
        value = int(value)
    if positive and value <= 0:
        raise ScenarioError(path, f"must be > 0, got {value!r}")
    return value


def _mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ScenarioError(path, f"expected an object, got {type(value).__name__}")
    return value


def _check_keys(doc: dict, allowed, path: str):
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise ScenarioError(f"{path}.{unknown[0]}" if path else unknown[0], "unknown field")


def _params(kind: str, values: dict, path: str):
    cls = _PARAM_TYPES[kind]
    names = {f.name for f in dataclasses.fields(cls)}
    _check_keys(values, names, path)
    kwargs = {}
    for key, value in values.items():
        integer = key in ("n_g", "n_e", "chirality_sign")
        kwargs[key] = _number(value, f"{path}.{key}", integer=integer)
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ScenarioError(path, str(exc)) from None
    except ParameterError as exc:
        raise ScenarioError(path, str(exc)) from None


def _pulse(doc, path: str) -> PulseSpec:
    doc = _mapping(doc, path)
    _check_keys(doc, {"peak", "center", "width", "shape"}, path)
    try:
        return PulseSpec(
            peak=_number(_require(doc, "peak", path), f"{path}.peak"),
            center=_number(_require(doc, "center", path), f"{path}.center"),
            width=_number(_require(doc, "width", path), f"{path}.width", positive=True),
            shape=doc.get("shape", "gaussian"),
        )
    except ParameterError as exc:
        raise ScenarioError(path, str(exc)) from None


def _amplitude(value, path: str) -> complex:
    if isinstance(value, list):
        if len(value) != 2:
            raise ScenarioError(path, "complex amplitudes are written as [re, im]")
        return complex(_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))
    return complex(_number(value, path))


def initial_state(spec, dim: int, n_g: int, n_e: int, path: str = "initial_state") -> NDArray[np.complex128]:
    """Resolve an initial-state spec to a normalized amplitude vector.

    ``{"basis_index": k}``, ``{"named": "darkR" | "brightL"}`` or
    ``{"amplitudes": [a, [re, im], ...]}``. Explicit amplitudes are
    renormalized, with a warning when the norm was off by more than 1e-6.
    """
    spec = _mapping(spec, path)
    if len(spec) != 1:
        raise ScenarioError(path, "give exactly one of basis_index, named, amplitudes")
    (key, value), = spec.items()
    if key == "basis_index":
        k = _number(value, f"{path}.basis_index", integer=True)
        if not 0 <= k < dim:
            raise ScenarioError(f"{path}.basis_index", f"must be in [0, {dim}), got {k}")
        c = np.zeros(dim, dtype=complex)
        c[k] = 1.0
        return c
    if key == "named":
        if value not in NAMED_STATES:
            raise ScenarioError(f"{path}.named", f"expected one of {NAMED_STATES}, got {value!r}")
        try:
            return enantiomer_state(value, n_g, n_e)
        except ParameterError as exc:
            raise ScenarioError(f"{path}.named", str(exc)) from None
    if key == "amplitudes":
        if not isinstance(value, list) or len(value) != dim:
            raise ScenarioError(f"{path}.amplitudes", f"expected a list of {dim} amplitudes")
        c = np.array([_amplitude(a, f"{path}.amplitudes[{i}]") for i, a in enumerate(value)])
        norm = float(np.linalg.norm(c))
        if norm == 0:
            raise ScenarioError(f"{path}.amplitudes", "state has zero norm")
        if abs(norm - 1.0) > RENORMALIZE_WARN:
            log.warning("%s: renormalizing amplitudes (norm was %.9g)", path, norm)
        return c / norm
    raise ScenarioError(f"{path}.{key}", "unknown initial state form")


def _branch_docs(doc: dict) -> list[dict]:
    branches = doc.get("branches")
    if branches is None:
        return [{"label": "default"}]
    if not isinstance(branches, list) or not branches:
        raise ScenarioError("branches", "expected a non-empty list")
    labels = []
    for i, b in enumerate(branches):
        b = _mapping(b, f"branches[{i}]")
        label = b.get("label")
        if not isinstance(label, str) or not label:
            raise ScenarioError(f"branches[{i}].label", "each branch needs a non-empty string label")
        if label in labels:
            raise ScenarioError(f"branches[{i}].label", f"duplicate label {label!r}")
        labels.append(label)
    return branches


def _lics_branches(kind: str, doc: dict) -> tuple[Branch, ...]:
    base = dict(_mapping(_require(doc, "params", ""), "params"))
    top_state = doc.get("initial_state")
    out = []
    for i, bdoc in enumerate(_branch_docs(doc)):
        path = f"branches[{i}]"
        overrides = {k: v for k, v in bdoc.items() if k not in ("label", "initial_state")}
        p = _params(kind, {**base, **overrides}, path if overrides else "params")
        state_spec = bdoc.get("initial_state", top_state)
        state_path = f"{path}.initial_state" if "initial_state" in bdoc else "initial_state"
        if kind == "multilevel":
            n_g, n_e = p.n_g, p.n_e
        else:
            n_g = n_e = 1
        if state_spec is None:
            state_spec = {"basis_index": 0}
        c0 = initial_state(state_spec, n_g + n_e, n_g, n_e, state_path)
        sign = getattr(p, "chirality_sign", 1)
        out.append(Branch(bdoc["label"], p, c0, sign))
    return tuple(out)


def _three_wave_branches(doc: dict) -> tuple[Branch, ...]:
    base = dict(_mapping(doc.get("params", {}), "params"))
    out = []
    for i, bdoc in enumerate(_branch_docs(doc)):
        path = f"branches[{i}]"
        merged = {**base, **{k: v for k, v in bdoc.items() if k != "label"}}
        _check_keys(merged, _THREE_WAVE_KEYS, path)
        defaults = StirapPulses()
        stokes = _pulse(merged["stokes"], f"{path}.stokes") if "stokes" in merged else defaults.stokes
        pump = _pulse(merged["pump"], f"{path}.pump") if "pump" in merged else defaults.pump
        sign = _number(merged.get("chirality_sign", 1), f"{path}.chirality_sign", integer=True)
        if sign not in (1, -1):
            raise ScenarioError(f"{path}.chirality_sign", f"must be +1 or -1, got {sign}")
        if stokes.center >= pump.center:
            raise ScenarioError(f"{path}.stokes.center", "counterintuitive ordering requires the Stokes pulse first")
        phi_p = _number(merged.get("phi_p", 0.0), f"{path}.phi_p")
        out.append(Branch(bdoc["label"], StirapPulses(stokes=stokes, pump=pump), None, sign, phi_p))
    return tuple(out)


def parse_scenario(doc: dict) -> Scenario:
    """Validate a scenario document; errors name the offending field path."""
    doc = _mapping(doc, "")
    _check_keys(doc, {"kind", "description", "params", "branches", "initial_state", "time", "scan", "trap", "output"}, "")
    kind = _require(doc, "kind", "")
    if kind not in KINDS:
        raise ScenarioError("kind", f"expected one of {KINDS}, got {kind!r}")
    if kind == "three-wave":
        if "initial_state" in doc:
            raise ScenarioError("initial_state", "three-wave runs always start in state 1")
        branches = _three_wave_branches(doc)
    else:
        branches = _lics_branches(kind, doc)

    time = None
    if "time" in doc:
        t = _mapping(doc["time"], "time")
        _check_keys(t, {"t_start", "t_stop", "points"}, "time")
        t_start = _number(t.get("t_start", 0.0), "time.t_start")
        t_stop = _number(_require(t, "t_stop", "time"), "time.t_stop")
        points = _number(t.get("points", 500), "time.points", integer=True, positive=True)
        if t_start < 0 or t_stop < t_start:
            raise ScenarioError("time", "need 0 <= t_start <= t_stop")
        time = TimeGrid(t_start, t_stop, points)

    scan = None
    if "scan" in doc:
        s = _mapping(doc["scan"], "scan")
        _check_keys(s, {"axis", "start", "stop", "points", "t_probe"}, "scan")
        axis = s.get("axis", "delta")
        if axis not in ("delta", "time"):
            raise ScenarioError("scan.axis", f"expected 'delta' or 'time', got {axis!r}")
        start = _number(_require(s, "start", "scan"), "scan.start")
        stop = _number(_require(s, "stop", "scan"), "scan.stop")
        points = _number(s.get("points", 500), "scan.points", integer=True, positive=True)
        if stop < start or (points > 1 and stop == start):
            raise ScenarioError("scan", "need start < stop (or start == stop with points == 1)")
        t_probe = None
        if "t_probe" in s:
            t_probe = _number(s["t_probe"], "scan.t_probe")
            if t_probe < 0:
                raise ScenarioError("scan.t_probe", "must be >= 0")
        if axis == "delta" and t_probe is None:
            raise ScenarioError("scan.t_probe", "a delta scan needs a probe time")
        scan = ScanSpec(axis, start, stop, points, t_probe)

    trap = TrapSpec()
    if "trap" in doc:
        tr = _mapping(doc["trap"], "trap")
        _check_keys(tr, {"bracket", "n_scan"}, "trap")
        bracket = tr.get("bracket", list(trap.bracket))
        if not isinstance(bracket, list) or len(bracket) != 2:
            raise ScenarioError("trap.bracket", "expected [lo, hi]")
        lo, hi = (_number(v, f"trap.bracket[{i}]") for i, v in enumerate(bracket))
        if not hi > lo:
            raise ScenarioError("trap.bracket", "need lo < hi")
        n_scan = _number(tr.get("n_scan", trap.n_scan), "trap.n_scan", integer=True, positive=True)
        if n_scan < 3:
            raise ScenarioError("trap.n_scan", "must be >= 3")
        trap = TrapSpec((lo, hi), n_scan)

    output = _mapping(doc.get("output", {}), "output")
    _check_keys(output, {"format", "path"}, "output")
    return Scenario(kind, branches, time, scan, trap, output, doc)


def load_scenario(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError("", f"cannot read scenario {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("", f"{path} is not valid JSON: {exc}") from None
    return parse_scenario(doc)
