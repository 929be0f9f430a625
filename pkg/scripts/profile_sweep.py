#!/usr/bin/env python
import argparse
import logging
import sys
from pathlib import Path

import yappi  # type: ignore

sys.path.append(str(Path(".").parent.absolute()))
from uebk import config, sweep  # type: ignore


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument(
        "--max_dprime", type=int, default=10, help="Largest d' to sweep"
    )
    parser.add_argument(
        "--profile", action="store_true", help="Set this flag to run yappi profiler"
    )
    parser.add_argument(
        "--trials", type=int, default=config.TRIALS, help="Rank sampling trials per family"
    )
    parser.add_argument(
        "--workers", type=int, default=1, help="Worker processes for the sweep"
    )
    parser.add_argument(
        "--debug", action="store_true", help="Should we run in debug mode?"
    )
    args = parser.parse_args()

    if args.debug:
        config.get_logger().setLevel(logging.DEBUG)

    if args.profile:
        yappi.set_clock_type("cpu")
        yappi.start(builtins=True)

    summary = sweep.run_sweep(
        max_dprime=args.max_dprime,
        config=config.VerifyConfig.from_env(trials=args.trials),
        workers=args.workers,
    )
    print(f"{summary.total - len(summary.failures)}/{summary.total} families passed")

    if args.profile:
        prof_filename = "callgrind.uebk.prof"
        stats = yappi.get_func_stats()
        stats.sort("ttot", "asc")
        stats.save(prof_filename, type="callgrind")  # type: ignore
