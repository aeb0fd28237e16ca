"""``leesdp-sdpa INPUT OUTPUT``: solve a .dat-s file with the sdpa-python bindings.

Writes SDPA-style result lines (objValPrimal / objValDual are values of
c^T x, as the SDPA executables report them) so the output goes through the
same parser as a native SDPA binary.
"""

from __future__ import annotations

import argparse
import sys


def solve_file(src: str) -> dict:
    import sdpap  # optional dependency

    A, b, c, K, J = sdpap.importsdpa(src)
    _, _, info, timeinfo, sdpainfo = sdpap.solve(A, b, c, K, J, {"print": "no"})
    # importsdpa flips the sign of the objective, so these are -(c^T x)
    return {
        "objValPrimal": -info["primalObj"],
        "objValDual": -info["dualObj"],
        "phase": sdpainfo.get("phasevalue", "noINFO"),
        "time": timeinfo.get("total", 0.0),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="leesdp-sdpa", description=__doc__.splitlines()[0])
    ap.add_argument("input")
    ap.add_argument("output", nargs="?")
    args = ap.parse_args(argv)
    try:
        res = solve_file(args.input)
    except ImportError:
        print("sdpa-python (module sdpap) is not installed", file=sys.stderr)
        return 3
    text = (
        f"phase.value = {res['phase']}\n"
        f"objValPrimal = {res['objValPrimal']:+.16e}\n"
        f"objValDual   = {res['objValDual']:+.16e}\n"
        f"total time   = {res['time']:.3f}\n"
    )
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
