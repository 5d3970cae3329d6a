"""Compare the compiled and pure-Python configuration-graph kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--max-agents 5]

Explores the reachable configurations of a system where every agent steps
through seven states on its own, so the graph has 7**n nodes and n * 7**n
edges.  Reports the best wall time of the bare kernel call and of the full
``build_graph`` (which adds decoding and adjacency lists) per backend.
"""

import argparse
import time

from memsys._accel import BACKENDS
from memsys.graph import build_graph, compile_system
from memsys.system import MemorySystem, TransitionEntry


def cycling_system(n: int, m: int = 7) -> MemorySystem:
    states = [f"Q{i}" for i in range(m)]
    agents = [str(i) for i in range(1, n + 1)]
    rule = tuple(("s", q, states[(i + 1) % m]) for i, q in enumerate(states))
    entries = [TransitionEntry(f"step{a}", f"I{a}", (1,), rule) for a in agents]
    return MemorySystem.build(states, ["s"], {q: "s" for q in states}, agents,
                              {f"I{a}": [a] for a in agents}, entries, ["Q0"] * n)


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def kernel_call(sys: MemorySystem, backend: str):
    a = compile_system(sys)
    explore = BACKENDS[backend].explore
    return lambda: explore(a["init"], a["sig"], a["nb_members"], a["entry_nb"],
                           a["entry_guard"], a["entry_upd"], a["n_signals"], 10**7)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--max-agents", type=int, default=5)
    args = ap.parse_args()
    backends = sorted(BACKENDS)
    header = f"{'agents':>6} {'nodes':>8} {'edges':>8}"
    for what in ("kernel", "graph"):
        header += "".join(f" {what + '/' + b:>17}" for b in backends)
        if len(backends) == 2:
            header += f" {'speedup':>8}"
    print(header)
    for n in range(2, args.max_agents + 1):
        sys = cycling_system(n)
        g = build_graph(sys, 10**7)
        row = f"{n:>6} {len(g):>8} {len(g.edges):>8}"
        for fns in ({b: kernel_call(sys, b) for b in backends},
                    {b: (lambda b=b: build_graph(sys, 10**7, backend=b)) for b in backends}):
            times = {b: best_time(fns[b], args.repeat) for b in backends}
            row += "".join(f" {times[b] * 1000:>15.1f}ms" for b in backends)
            if len(backends) == 2:
                row += f" {times['python'] / times['compiled']:>7.1f}x"
        print(row)

if __name__ == "__main__":
    main()
