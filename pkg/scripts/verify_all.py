"""Run every verification suite and print a per-criterion summary.

    python3 scripts/verify_all.py --seed 42 --out report.json
"""
import argparse
import json
from collections import defaultdict

from plasmasym.suites import SuiteConfig, run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--samples", type=int)
    ap.add_argument("--out", default="report.json")
    args = ap.parse_args()
    rep = run(SuiteConfig("all", args.seed, args.samples))
    with open(args.out, "w") as fh:
        json.dump(rep, fh, indent=2, sort_keys=True)
    groups = defaultdict(list)
    for e in rep["checks"]:
        groups[e["criterion"]].append(e["ok"])
    for crit in sorted(groups, key=lambda c: (not c.isdigit(), int(c) if c.isdigit() else 0)):
        oks = groups[crit]
        print(f"{crit:>6}: {sum(oks)}/{len(oks)} ok")
    print(f"all: {'PASS' if rep['pass'] else 'FAIL'} ({rep['n_checks']} checks) -> {args.out}")


if __name__ == "__main__":
    main()
