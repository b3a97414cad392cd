"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""
import argparse
import json
import math
import time

import numpy as np

from tbgroups import kernels
from tbgroups.algebra import FieldSpec, VSpace
from tbgroups.cipher import group_generators
from tbgroups.corpus import compliant_cipher
from tbgroups.group_engine import Permutation, bsgs, is_primitive


def sym_generators(n):
    return [Permutation.from_cycles(n, [0, 1]), Permutation.from_cycles(n, list(range(n)))]


def cases():
    rng = np.random.default_rng(1)
    sp = VSpace(FieldSpec.prime(2), 4, 2)
    cipher_gens = group_generators(compliant_cipher(rng, sp), 0)
    return {
        "bsgs Sym(32)": lambda: bsgs(sym_generators(32)).order == math.factorial(32),
        "bsgs Sym(48)": lambda: bsgs(sym_generators(48)).order == math.factorial(48),
        "primitivity 256-pt cipher": lambda: is_primitive(cipher_gens, sp).primitive,
        "sift 1000 elements": lambda: _sift_many(),
    }


def _sift_many():
    g = bsgs(sym_generators(40))
    rng = np.random.default_rng(0)
    return all(Permutation(rng.permutation(40)) in g for _ in range(1000))


def timed(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t = time.perf_counter()
        assert fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json")
    args = ap.parse_args(argv)
    backends = kernels.available()
    results = {}
    for name, fn in cases().items():
        row = {}
        for b in backends:
            kernels.set_backend(b)
            row[b] = timed(fn, args.repeat)
        results[name] = row
    width = max(map(len, results))
    print(f"{'case':<{width}}  " + "  ".join(f"{b:>10}" for b in backends) + ("   speedup" if len(backends) > 1 else ""))
    for name, row in results.items():
        cells = "  ".join(f"{row[b]:>9.3f}s" for b in backends)
        extra = f"  {row['python'] / row['cython']:>7.1f}x" if "cython" in row else ""
        print(f"{name:<{width}}  {cells}{extra}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2)


if __name__ == "__main__":
    main()
