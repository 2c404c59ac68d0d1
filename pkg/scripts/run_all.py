#!/usr/bin/env python3
"""Run the four boundary-limit experiments with their canonical schedules.

The depth schedule for the metric, curvature, and localization experiments is
dyadic down to t = 1e-3; the scaling experiment stops at t = 6.25e-3 because
each of its steps rebuilds a kernel model on the blown-up domain, whose dense
Gram assembly grows quickly as t shrinks.  Results (CSV + log-log SVG) land in
--out; exit status is nonzero if any gate fails.
"""

import argparse
import sys

import spanlab as sl

DEPTHS = tuple(0.128 * 0.5**j for j in range(8))
SCALING_DEPTHS = tuple(0.1 * 0.5**j for j in range(5))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--domain", choices=("disk", "annulus"), default="annulus")
    ap.add_argument("--inner-radius", type=float, default=0.5)
    ap.add_argument("--base-point", type=complex, default=1.0 + 0.0j)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    if args.domain == "disk":
        domain = sl.disk()
        names = ["metric-distance", "curvature-limit", "scaling-kernel"]
    else:
        domain = sl.annulus(args.inner_radius)
        names = ["metric-distance", "curvature-limit", "localization", "scaling-kernel"]

    all_ok = True
    for name in names:
        steps = SCALING_DEPTHS if name == "scaling-kernel" else DEPTHS
        config = sl.ExperimentConfig(base_point=args.base_point, steps=steps)
        result = sl.run_experiment(name, domain, config)
        print(f"== {result.name} ==")
        print(result.table())
        for line in result.gate_lines():
            print(line)
        for path in result.save(args.out):
            print(f"wrote {path}")
        print()
        all_ok = all_ok and result.passed
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
