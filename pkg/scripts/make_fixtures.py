#!/usr/bin/env python3
"""Regenerate the oracle-recorded tolerance fixtures.

Runs every shipped verification case, records the achieved residuals, and
writes each tolerance as a safety multiple of the final achieved value,
never below the dense-algebra measurement floor.  The output file is the
single source both the library defaults and the test suite read.

Usage:  python scripts/make_fixtures.py [--margin 4.0]
"""

import argparse
import json
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mobnuc import lowest_weight as lw  # noqa: E402
from mobnuc.report import MEASUREMENT_FLOOR  # noqa: E402

OUT = Path(__file__).resolve().parent.parent / "src" / "mobnuc" / "data" / "oracle_tolerances.json"

DIMS = [50, 100, 200]
GLW_DIMS = [200, 400, 800]
TN_DIMS = [100, 200, 400]
BLOCK = 10


def tol_of(final: float, margin: float) -> float:
    return max(margin * final, MEASUREMENT_FLOOR)


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--margin", type=float, default=4.0)
    args = ap.parse_args()
    mg = args.margin
    fx = {"meta": {"margin": mg, "floor": MEASUREMENT_FLOOR,
                   "generator": "scripts/make_fixtures.py"}}

    fx["m1"] = []
    for s in (0.5, 1.0, 2.0):
        res = [lw.factorization_residual(1.0, s, N, BLOCK) for N in DIMS]
        fx["m1"].append({"alpha": 1.0, "s": s, "block": BLOCK, "dims": DIMS,
                         "residuals": res, "tolerance": tol_of(res[-1], mg)})

    fx["t2"] = []
    for s in (0.5, 1.0):
        r = lw.verify_two_route_factorization(1.0, s, 200, BLOCK, tolerance=1.0)
        fx["t2"].append({"alpha": 1.0, "s": s, "block": BLOCK, "dims": [200],
                         "residuals": r.residuals,
                         "golden_thompson_slack": r.details["golden_thompson_slack"],
                         "tolerance": tol_of(r.residuals[-1], mg)})

    for which, grid in (("m2", (0.5, 1.0)), ("kdc", (0.05, 0.1, 0.2)), ("ko", (0.0,))):
        fx[which] = []
        for p in grid:
            eps = [lw.inequality_epsilon(1.0, p, N, BLOCK, which)[0] for N in DIMS]
            fx[which].append({"alpha": 1.0, "param": p, "block": BLOCK,
                              "dims": DIMS, "residuals": eps,
                              "tolerance": tol_of(eps[-1], mg)})

    fx["glw"] = []
    for at in (2.0, 2.5):
        devs = []
        for N in GLW_DIMS:
            _, det = lw.weight_deformation_spectrum(at, N, 5, return_details=True)
            devs.append(det["max_deviation"])
        fx["glw"].append({"alpha_target": at, "dims": GLW_DIMS,
                          "residuals": devs, "tolerance": tol_of(devs[-1], mg)})

    fx["trace_norm"] = []
    for alpha, t in ((1.0, math.sinh(0.5)), (2.0, math.sinh(1.0))):
        exact = lw.closed_form_trace_norm(alpha, t)
        rel = [abs(lw.embedding_trace_norm(alpha, t, N) - exact) / exact
               for N in TN_DIMS]
        fx["trace_norm"].append({"alpha": alpha, "t": t, "dims": TN_DIMS,
                                 "rel_errors": rel, "exact": exact,
                                 "tolerance": tol_of(rel[-1], mg)})

    OUT.write_text(json.dumps(fx, indent=2) + "\n")
    print(f"wrote {OUT}")
    for k, cases in fx.items():
        if k == "meta":
            continue
        for c in cases:
            print(f"  {k}: {c}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
