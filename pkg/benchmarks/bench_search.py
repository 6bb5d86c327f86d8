"""Compare the compiled search kernel with the pure-Python one.

Both kernels receive identical problems built once up front, so only the
search itself is timed.  Run from the repository root:

    python benchmarks/bench_search.py [--repeat N] [--quick]
"""

from __future__ import annotations

import argparse
import json
import random
import statistics
import sys
import time
from pathlib import Path

from deontasp.asp import _search, solver
from deontasp.asp.grounder import ground
from deontasp.corpus import load_entries
from deontasp.deontic import common_core
from deontasp.pacman.game import initial_state, step
from deontasp.pacman.layout import load_layout
from deontasp.pacman.supervisor import norm_base, state_to_facts

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from oracles import random_ground_program  # noqa: E402


def _problem(program, optimal: bool):
    res = solver._simplify(ground(program))
    prob, _, _ = solver.build_problem(res, optimal, 0, 2**20)
    return prob


def workloads(quick: bool) -> dict[str, list]:
    out: dict[str, list] = {}
    (ex1,) = load_entries("driving_ex1")
    out["driving, all answer sets"] = [_problem(ex1.full_program(), False)]
    out["driving, optimal"] = [_problem(e.full_program(), True) for e in load_entries("driving")]

    state = initial_state(load_layout())
    rng = random.Random(1)
    base = norm_base("vegan").program
    supervisor = []
    for _ in range(20 if quick else 100):
        supervisor.append(_problem(common_core() + base + state_to_facts(state), True))
        state, _ = step(state, rng.choice(["east", "west", "stop"]), rng)
        if not state.ongoing:
            state = initial_state(load_layout())
    out["supervisor steps"] = supervisor

    rng = random.Random(2)
    out["random ground programs"] = [
        _problem(random_ground_program(rng, max_atoms=8, min_atoms=6, max_rules=16), True)
        for _ in range(50 if quick else 300)
    ]
    return out


def time_kernel(kernel, problems, repeat: int) -> float:
    runs = []
    for _ in range(repeat):
        start = time.perf_counter()
        for prob in problems:
            kernel.search(prob)
        runs.append(time.perf_counter() - start)
    return statistics.median(runs)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    parser.add_argument("--json", action="store_true", help="print one JSON object instead of a table")
    args = parser.parse_args(argv)
    try:
        from deontasp.asp import _csearch
    except ImportError:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` first", file=sys.stderr)
        return 1
    rows = []
    for name, problems in workloads(args.quick).items():
        for prob in problems:
            a, b = _search.search(prob), _csearch.search(prob)
            if a[0] != b[0] or sorted(map(sorted, a[1])) != sorted(map(sorted, b[1])):
                print(f"kernels disagree on {name}", file=sys.stderr)
                return 1
        pure = time_kernel(_search, problems, args.repeat)
        compiled = time_kernel(_csearch, problems, args.repeat)
        rows.append({"workload": name, "problems": len(problems), "pure_s": pure, "compiled_s": compiled,
                     "speedup": pure / compiled if compiled else float("inf")})
    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    print(f"{'workload':<28}{'problems':>9}{'pure (ms)':>12}{'compiled (ms)':>15}{'speedup':>9}")
    for r in rows:
        print(f"{r['workload']:<28}{r['problems']:>9}{1000 * r['pure_s']:>12.1f}"
              f"{1000 * r['compiled_s']:>15.1f}{r['speedup']:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
