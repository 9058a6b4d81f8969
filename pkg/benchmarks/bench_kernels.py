"""Compare the compiled and pure-Python inner loops.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``. Each kernel is
timed on the same inputs for every importable backend, and the outputs are
checked for bit-equality against the Python reference.
"""
import argparse
import time

import numpy as np

from teichcurrents import kernels
from teichcurrents.currents import _normalizer
from teichcurrents.holonomy import domain_moves, evaluate_word, regular_polygon_rep
from teichcurrents.moebius import fixed_vectors, geodesic_step
from teichcurrents.words import curve, enumerate_classes


def cases(H):
    classes = enumerate_classes(2, 5)
    lt = np.array([H.letter_index(x) for c in classes for x in c.rep], dtype=np.int64)
    off = np.cumsum([0] + [c.length for c in classes]).astype(np.int64)
    mv = domain_moves(H)
    g = np.array((evaluate_word(H, curve("a1 b2 A2 b1").rep) @ geodesic_step(0.3)).entries)
    m1 = evaluate_word(H, curve("a1").rep)
    m2 = evaluate_word(H, curve("a1 b1").rep)
    p, q = fixed_vectors(m2)
    S = _normalizer(m1)
    return {
        "eval_words (2046 classes)":
            lambda K: K.eval_words(H.array, lt, off),
        "flow_series (T=200, dt=0.05)":
            lambda K: K.flow_series(np.array([1.0, 0.0, 0.0, 1.0]), mv.matrices, 0.05,
                                    4000, kernels.OBSERVABLES["exp"], mv.skip_s, 10_000),
        "reduce_point":
            lambda K: K.reduce_point(g, mv.matrices, mv.skip_s, 10_000),
        "linked_axes (depth 5)":
            lambda K: K.linked_axes(H.array, H.inverse_index, S, np.array(p),
                                    np.array(q), 5),
    }


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    H = regular_polygon_rep(2)
    found = kernels.backends()
    print(f"backends: {', '.join(found)} (selected: {kernels.BACKEND})")
    print(f"{'kernel':32s}" + "".join(f"{n:>12s}" for n in found) + f"{'speedup':>10s}  equal")
    for name, fn in cases(H).items():
        best, outs = {}, {}
        for bn, K in found.items():
            times = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                outs[bn] = fn(K)
                times.append(time.perf_counter() - t0)
            best[bn] = min(times)
        row = f"{name:32s}" + "".join(f"{best[n] * 1e3:10.2f}ms" for n in found)
        if "cython" in found:
            row += f"{best['python'] / best['cython']:9.1f}x"
            row += f"  {_same(outs['python'], outs['cython'])}"
        print(row)


if __name__ == "__main__":
    main()
