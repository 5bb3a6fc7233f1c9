"""Multilevel LICS with five degenerate ground and excited states.

The R enantiomer starts in a dark state and never ionizes; the L enantiomer
overlaps the bright state by 2/5 and saturates there. Writes
``ionization.csv`` and ``fano.csv`` to ``--out``.
"""

import argparse
from pathlib import Path

import numpy as np

from chiral_lics.darkbright import (
    bright_builder,
    bright_population,
    build_composite_rotation_5x5,
    decompose,
    enantiomer_state,
)
from chiral_lics.model import MultiLicsParams, build_multilevel_hamiltonian
from chiral_lics.propagator import evolve_constant
from chiral_lics.results import ScanResult
from chiral_lics.trapping import fano_scan, multilevel_builder, trapping_detuning_numeric


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results/fig4"))
    parser.add_argument("--delta", type=float, default=-6.2)
    parser.add_argument("--t-probe", type=float, default=8.0)
    parser.add_argument("--t-stop", type=float, default=200.0)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    p = MultiLicsParams(
        gamma_g=1.7, gamma_e=1.9, q_gg=1.2, q_ee=2.4, q_ge=2.26, s_g=19.0, s_e=20.0, delta=args.delta
    )
    h = build_multilevel_hamiltonian(p)
    dec = decompose(h, build_composite_rotation_5x5(), params=p)
    print(f"dark energies: {np.round(dec.dark_energies.real, 6)}")
    print(f"bright block:\n{np.round(dec.h_bright, 6)}")
    print(f"unitarity {dec.unitarity_error():.1e}, leakage {dec.off_block_leakage():.1e}")

    c_r, c_l = enantiomer_state("darkR"), enantiomer_state("brightL")
    print(f"bright population: R {bright_population(c_r):.3f}, L {bright_population(c_l):.3f}")
    times = np.linspace(0, args.t_stop, 2001)
    i_r = evolve_constant(h, c_r, times).ionization
    i_l = evolve_constant(h, c_l, times).ionization
    rows = [[float(t), float(a), float(b)] for t, a, b in zip(times, i_r, i_l)]
    ScanResult({"delta": args.delta}, ["t", "I_R", "I_L"], rows).write(args.out / "ionization.csv", "csv")
    print(f"I_R max {np.max(np.abs(i_r)):.1e}; I_L({args.t_stop:g}T) = {i_l[-1]:.6f}")

    trap = trapping_detuning_numeric(bright_builder(p), (-10, 10))
    c_bright = np.r_[np.full(5, 1 / np.sqrt(5)), np.zeros(5)]
    deltas = np.linspace(-10, 10, 2001)
    prof_bright = fano_scan(multilevel_builder(p), deltas, args.t_probe, c_bright)
    prof_l = fano_scan(multilevel_builder(p), deltas, args.t_probe, c_l)
    rows = [[float(d), float(a), float(b)] for d, a, b in zip(deltas, prof_bright.ionization, prof_l.ionization)]
    ScanResult(
        {"t_probe": args.t_probe, "bright_trap": trap.delta}, ["delta", "I_bright", "I_L"], rows
    ).write(args.out / "fano.csv", "csv")
    print(f"bright-block trap {trap.delta:.6f}; Fano minimum at t = {args.t_probe:g}T: {prof_bright.global_minimum[0]:.4f}")


if __name__ == "__main__":
    main()
