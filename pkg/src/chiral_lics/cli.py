"""Command-line interface: ``chiral-lics {evolve,fano,trap,darkbright,stirap}``.

Every subcommand reads a JSON scenario and writes a :class:`ScanResult` as
CSV or JSON. Exit codes: 0 success, 2 scenario error, 3 numerical failure,
4 trapping detuning not found.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .darkbright import (
    bright_builder,
    bright_population,
    bright_two_level_params,
    build_composite_rotation_5x5,
    decompose,
    generic_decomposition,
)
from .errors import IntegrationError, ParameterError, ScenarioError, StructuralError, TrapNotFoundError
from .model import CyclicLicsParams, MultiLicsParams, basis_labels, build_cyclic_hamiltonian, build_multilevel_hamiltonian
from .propagator import evolve_constant, evolve_timedep
from .results import FORMATS, ScanResult
from .scenario import Scenario, load_scenario
from .stirap import ThreeWaveParams, build_three_wave_hamiltonian, prepare_superposition
from .trapping import (
    cyclic_builder,
    fano_scan,
    multilevel_builder,
    trapping_branch,
    trapping_detuning_cyclic,
    trapping_detuning_numeric,
    trapping_detuning_two_level,
)

log = logging.getLogger("chiral_lics")

EXIT_OK = 0
EXIT_SCENARIO = 2
EXIT_NUMERICAL = 3
EXIT_NOT_FOUND = 4


def _meta(scenario: Scenario, command: str, **extra) -> dict:
    meta = {
        "tool": "chiral-lics",
        "version": __version__,
        "command": command,
        "scenario_sha256": scenario.sha256,
        "kind": scenario.kind,
    }
    meta.update(extra)
    return meta


def _hamiltonian(params):
    if isinstance(params, CyclicLicsParams):
        return build_cyclic_hamiltonian(params)
    return build_multilevel_hamiltonian(params)


def _labels(params) -> tuple[str, ...]:
    if isinstance(params, MultiLicsParams):
        return basis_labels(params.n_g, params.n_e)
    return basis_labels(1, 1)


def _pmap(fn, items, threads: int):
    items = list(items)
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _three_wave_params(branch) -> ThreeWaveParams:
    pulses = branch.params
    return ThreeWaveParams(
        pump=pulses.pump,
        stokes=pulses.stokes,
        control=pulses.pump,
        phi_p=branch.phi_p,
        phi_s=math.pi / 2 - branch.phi_p,
        chirality_sign=branch.chirality_sign,
    )


def run_evolve(scenario: Scenario, *, threads: int = 1, tol: float = 1e-9) -> ScanResult:
    """Populations and ionization versus time for every branch."""
    if scenario.time is not None:
        times = scenario.time.values()
    elif scenario.scan is not None and scenario.scan.axis == "time":
        times = scenario.scan.values()
    else:
        raise ScenarioError("time", "evolve needs a time block or a scan with axis 'time'")

    def one(branch):
        if scenario.kind == "three-wave":
            p = _three_wave_params(branch)
            span = (float(times[0]), float(times[-1]))
            if span[1] <= span[0]:
                raise ScenarioError("time", "three-wave evolution needs t_stop > t_start")
            return evolve_timedep(
                lambda t: build_three_wave_hamiltonian(p, t),
                np.array([1, 0, 0], dtype=complex),
                span,
                times=times,
                rtol=tol,
                labels=("psi1", "psi2", "psi3"),
            )
        return evolve_constant(_hamiltonian(branch.params), branch.c0, times, labels=_labels(branch.params))

    results = _pmap(one, scenario.branches, threads)
    columns = ["t"]
    for branch, res in zip(scenario.branches, results):
        columns += [f"pop_{branch.label}_{s}" for s in res.labels]
        if scenario.kind != "three-wave":
            columns.append(f"I_{branch.label}")
    rows = []
    for k, t in enumerate(times):
        row = [float(t)]
        for res in results:
            row += res.populations[k].tolist()
            if scenario.kind != "three-wave":
                row.append(float(res.ionization_clamped[k]))
        rows.append(row)
    summary = {}
    for branch, res in zip(scenario.branches, results):
        entry = {"method": res.method}
        if branch.c0 is not None and isinstance(branch.params, MultiLicsParams):
            entry["bright_population"] = bright_population(branch.c0, branch.params.n_g, branch.params.n_e)
        if scenario.kind != "three-wave":
            entry["final_ionization"] = float(res.ionization[-1])
        summary[branch.label] = entry
    return ScanResult(_meta(scenario, "evolve", summary=summary), columns, rows)


def _builder(branch):
    if isinstance(branch.params, CyclicLicsParams):
        return cyclic_builder(branch.params)
    return multilevel_builder(branch.params)


def run_fano(scenario: Scenario, *, threads: int = 1, tol: float = 1e-9) -> ScanResult:
    """Ionization at the probe time versus two-photon detuning, plus located minima."""
    if scenario.kind == "three-wave":
        raise ScenarioError("kind", "fano scans need a LICS system")
    scan = scenario.scan
    if scan is None or scan.axis != "delta":
        raise ScenarioError("scan", "fano needs a scan block with axis 'delta'")
    deltas = scan.values()
    profiles = [fano_scan(_builder(b), deltas, scan.t_probe, b.c0, threads=threads) for b in scenario.branches]
    columns = ["delta"] + [f"I_{b.label}" for b in scenario.branches]
    rows = [[float(d)] + [float(np.clip(p.ionization[k], 0.0, 1.0)) for p in profiles] for k, d in enumerate(deltas)]
    summary = {}
    for b, prof in zip(scenario.branches, profiles):
        entry = {"minima": [list(m) for m in prof.minima], "failures": {str(k): v for k, v in prof.failures.items()}}
        if prof.minima:
            entry["global_minimum"] = list(prof.global_minimum)
        summary[b.label] = entry
    return ScanResult(_meta(scenario, "fano", t_probe=scan.t_probe, summary=summary), columns, rows)


def run_trap(scenario: Scenario, *, threads: int = 1, tol: float = 1e-8) -> ScanResult:
    """Closed-form and numeric trapping detunings.

    Cyclic systems report both sign branches of the closed form for every
    scenario branch; the numeric search uses the chirality that traps on
    that branch. Multilevel systems are searched on their bright block.
    """
    if scenario.kind == "three-wave":
        raise ScenarioError("kind", "trap needs a LICS system")
    lo, hi = scenario.trap.bracket
    columns = ["label", "chirality_sign", "branch_sign", "delta_analytic", "delta_numeric", "residual"]
    jobs = []
    for b in scenario.branches:
        p = b.params
        if isinstance(p, CyclicLicsParams):
            for branch_sign in (-1, 1):
                sigma = trapping_branch(branch_sign)
                q = p.replace(chirality_sign=sigma)
                if p.omega_c == 0:
                    analytic = trapping_detuning_two_level(q)
                else:
                    analytic = trapping_detuning_cyclic(q, branch_sign)
                jobs.append((b.label, sigma, branch_sign, analytic, cyclic_builder(q)))
        else:
            analytic = trapping_detuning_two_level(bright_two_level_params(p))
            jobs.append((b.label, 0, 0, analytic, bright_builder(p)))

    def solve(job):
        return trapping_detuning_numeric(job[4], (lo, hi), n_scan=scenario.trap.n_scan, found_tol=tol)

    found = _pmap(solve, jobs, threads)
    rows = [[lab, sig, br, float(an), r.delta, r.residual] for (lab, sig, br, an, _), r in zip(jobs, found)]
    return ScanResult(_meta(scenario, "trap", bracket=[lo, hi]), columns, rows)


def _state_kinds(n_g: int, n_e: int) -> list[str]:
    return ["dark_g"] * (n_g - 1) + ["dark_e"] * (n_e - 1) + ["bright_g", "bright_e"]


def run_darkbright(scenario: Scenario, *, threads: int = 1, tol: float = 1e-9) -> ScanResult:
    """Rotation rows, rotated-state energies and bright block for every multilevel branch."""
    if scenario.kind != "multilevel":
        raise ScenarioError("kind", "darkbright needs a multilevel system")
    n_max = max(b.params.dim for b in scenario.branches)
    columns = ["label", "row", "state", "energy_re", "energy_im"] + [f"w_{k}" for k in range(n_max)]
    rows, summary = [], {}
    for b in scenario.branches:
        p = b.params
        gen = generic_decomposition(p)
        dec = gen
        entry = {"n_g": p.n_g, "n_e": p.n_e, "n_dark": gen.n_dark, "rotation": "generic"}
        if (p.n_g, p.n_e) == (5, 5):
            dec = decompose(build_multilevel_hamiltonian(p), build_composite_rotation_5x5(), params=p, tol=tol)
            entry["rotation"] = "composite_givens_5x5"
            entry["bright_block_generic_vs_explicit"] = float(np.max(np.abs(dec.h_bright - gen.h_bright)))
        energies = np.diag(dec.transformed)
        for k, kind in enumerate(_state_kinds(p.n_g, p.n_e)):
            w_row = list(map(float, dec.w[k].real)) + [None] * (n_max - p.dim)
            rows.append([b.label, k, kind, float(energies[k].real), float(energies[k].imag)] + w_row)
        entry.update(
            h_bright=[[[z.real, z.imag] for z in row] for row in dec.h_bright.tolist()],
            unitarity_error=dec.unitarity_error(),
            off_block_leakage=dec.off_block_leakage(),
            max_dark_energy_imag=float(np.max(np.abs(dec.dark_energies.imag), initial=0.0)),
        )
        summary[b.label] = entry
    return ScanResult(_meta(scenario, "darkbright", summary=summary), columns, rows)


def run_stirap(scenario: Scenario, *, threads: int = 1, tol: float = 1e-9) -> ScanResult:
    """Three-wave STIRAP per branch: populations versus time, fidelities in the metadata."""
    if scenario.kind != "three-wave":
        raise ScenarioError("kind", "stirap needs a three-wave system")
    n_samples = scenario.time.points if scenario.time is not None else 500

    def one(b):
        return prepare_superposition(b.chirality_sign, b.params, phi_p=b.phi_p, rtol=tol, n_samples=n_samples)

    results = _pmap(one, scenario.branches, threads)
    times = results[0].evolution.times
    for r in results[1:]:
        if not np.array_equal(r.evolution.times, times):
            raise ScenarioError("branches", "stirap branches must share pulse timing")
    columns = ["t"] + [f"pop_{b.label}_{s}" for b in scenario.branches for s in ("psi1", "psi2", "psi3")]
    rows = [[float(t)] + [x for r in results for x in r.evolution.populations[k].tolist()] for k, t in enumerate(times)]
    summary = {
        b.label: {
            "chirality_sign": b.chirality_sign,
            "fidelity": r.fidelity,
            "final_state": [[z.real, z.imag] for z in r.final_state.tolist()],
            "target": [[z.real, z.imag] for z in r.target.tolist()],
        }
        for b, r in zip(scenario.branches, results)
    }
    if len(results) == 2:
        summary["mutual_overlap"] = float(abs(np.vdot(results[0].final_state, results[1].final_state)))
    return ScanResult(_meta(scenario, "stirap", summary=summary), columns, rows)


COMMANDS = {
    "evolve": run_evolve,
    "fano": run_fano,
    "trap": run_trap,
    "darkbright": run_darkbright,
    "stirap": run_stirap,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chiral-lics", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress and wall time to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "evolve": "populations and ionization versus time",
        "fano": "ionization versus two-photon detuning at a probe time",
        "trap": "closed-form and numeric trapping detunings",
        "darkbright": "dark/bright block diagonalization of a multilevel system",
        "stirap": "three-wave STIRAP preparation of enantiomer superpositions",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--scenario", required=True, type=Path, help="scenario JSON file")
        p.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=FORMATS, default=None, help="csv or json (default: from --out suffix, else csv)")
        p.add_argument("--threads", type=int, default=1, help="worker threads (output is identical for any value)")
        p.add_argument(
            "--tol",
            type=float,
            default=None,
            help="integrator rtol (evolve three-wave, stirap; default 1e-9), "
            "trap residual limit (trap; default 1e-8), block leakage limit (darkbright; default 1e-9)",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    fmt = args.format
    if fmt is None:
        fmt = "json" if args.out is not None and args.out.suffix == ".json" else "csv"
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_SCENARIO
    kwargs = {"threads": args.threads}
    if args.tol is not None:
        if not args.tol > 0:
            print("error: --tol must be > 0", file=sys.stderr)
            return EXIT_SCENARIO
        kwargs["tol"] = args.tol

    started = time.perf_counter()
    try:
        scenario = load_scenario(args.scenario)
        result = COMMANDS[args.command](scenario, **kwargs)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except TrapNotFoundError as exc:
        print(f"not found: {exc}", file=sys.stderr)
        for delta, value in exc.trace[:: max(1, len(exc.trace) // 20)]:
            print(f"  delta={delta:.6g}  min|Im lambda|={value:.3e}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except (IntegrationError, StructuralError, ParameterError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    # wall time stays out of the output so repeated runs are byte-identical
    log.info("%s finished in %.3f s", args.command, time.perf_counter() - started)

    text = result.dumps(fmt)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_bytes(text.encode("utf-8"))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
