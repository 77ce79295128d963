"""Desk-scale sweep of q_i = T^i n_i over fully singularized braid closures."""
import argparse
import json
import time

from cuberes.harness_cli import SweepSpec, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-strands", type=int, default=3)
    ap.add_argument("--max-crossings", type=int, default=5)
    ap.add_argument("-D", type=int, default=10)
    ap.add_argument("--jobs", type=int, default=4)
    ap.add_argument("--store", default=None)
    ap.add_argument("--policy", default="fully-singularized")
    args = ap.parse_args()
    t0 = time.perf_counter()
    spec = SweepSpec(args.max_strands, args.max_crossings, args.policy, "q", args.D)
    summary = run_sweep(spec, args.store, args.jobs)
    recs = summary.pop("records")
    slow = sorted(recs, key=lambda r: -r.runtime)[:5]
    summary["wall_seconds"] = round(time.perf_counter() - t0, 1)
    summary["slowest"] = [(r.braid_word, r.runtime) for r in slow]
    summary["failing"] = [(r.braid_word, r.assignment, r.first_failure) for r in recs if r.verdict == "fails"]
    print(json.dumps(summary, indent=1))


if __name__ == "__main__":
    main()
