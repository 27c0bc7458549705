"""Grid refinement for the vacuum/silver interface problems.

Runs the plane-wave scattering and surface plasmon cases at N = 32, 64, 128
for one temporal period and prints the observed convergence rates.  Takes
about a minute for both schemes.

    python3 demos/interface_convergence.py [--case scatter2d|spp2d] [--out DIR]
"""

import argparse
from pathlib import Path

from drude_rc.harness import NORMS, ExperimentConfig, convergence_study
from drude_rc.plotting import plot_emit


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--case", choices=("scatter2d", "spp2d"), default="scatter2d")
    ap.add_argument("--out", type=Path, default=Path("out/interface"))
    args = ap.parse_args()
    for scheme in ("rc2", "rc4"):
        out = args.out / args.case / scheme
        rep = convergence_study(ExperimentConfig(case=args.case, scheme=scheme, out=out), [32, 64, 128])
        print(f"{args.case} {scheme}")
        for f in rep.fields:
            for nm in NORMS:
                print(f"   {f:>2} {nm:>4}: errors {rep.errors(f, nm)}  rates {rep.rates(f, nm).round(2)}")
        print(f"   plot: {plot_emit(out / 'convergence.csv', 'convergence')}")


if __name__ == "__main__":
    main()
