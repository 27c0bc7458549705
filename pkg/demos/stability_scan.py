"""Amplification factors over the admissible (Lambda, Omega, Gamma) region.

Prints the largest amplification factor of each root class and the time
step limits for silver next to vacuum, then writes heat maps of the scans.

    python3 demos/stability_scan.py [--out DIR]
"""

import argparse
from pathlib import Path

from drude_rc.harness import stability_report, write_scan_csv
from drude_rc.materials import VACUUM, silver
from drude_rc.plotting import plot_emit
from drude_rc.stability import rc4_gamma_limit


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("out/stability"))
    args = ap.parse_args()
    for scheme in ("rc2", "rc4"):
        rep = stability_report([VACUUM, silver()], [0.01, 0.01], scheme)
        print(f"{scheme}: dt = {rep.dt:.6g}, binding constraint {rep.binding}")
        for cls in sorted({r[5] for r in rep.scan}):
            worst = max(r[4] for r in rep.scan if r[5] == cls)
            print(f"   max |A| for {cls}: 1 {worst - 1:+.3e}")
        csv = write_scan_csv(args.out / f"scan_{scheme}.csv", rep.scan)
        print(f"   heat map: {plot_emit(csv, 'scan')}")
    print(f"damping limit at Omega = 0: Gamma* = {rc4_gamma_limit(0.0):.10f}")


if __name__ == "__main__":
    main()
