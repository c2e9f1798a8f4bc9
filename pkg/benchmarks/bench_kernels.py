"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both backends get identical inputs; results are compared before timing
is reported.
"""
import argparse
import random
import time

import numpy as np

from procverify import _kernels_py as pure
from procverify.equiv import _kernel_args
from procverify.lts import Lts, inp, tau
from procverify.models import build
from procverify.vp import concretize

try:
    from procverify import _kernels as compiled
except ImportError:
    compiled = None


def random_lts(n, density, seed):
    rng = random.Random(seed)
    acts = [inp("a"), inp("b"), tau]
    trans = [(f"s{i}", rng.choice(acts), f"s{rng.randrange(n)}")
             for i in range(n) for _ in range(density)]
    return Lts.build("s0", trans)


def workloads():
    yield "jobshop vs abs_jobshop (weak)", build("jobshop"), build("abs_jobshop"), True
    abp, spec = concretize(build("abp")), concretize(build("spec_buf"))
    yield f"abp {len(abp.states)} states vs spec (weak)", abp, spec, True
    sp = concretize(build("simple_protocol"))
    yield f"simple protocol {len(sp.states)} states vs itself (strong)", sp, sp, False
    r1, r2 = random_lts(300, 3, 1), random_lts(300, 3, 2)
    yield "random 300 x 300 (strong)", r1, r2, False
    yield "random 300 x 300 (weak)", r1, r2, True


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        res = fn()
        times.append(time.perf_counter() - t)
    return min(times), res


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
        return 1
    print(f"{'workload':50} {'pure (s)':>10} {'cython (s)':>11} {'speedup':>8}")
    for name, p1, p2, weak in workloads():
        kargs = _kernel_args(p1, p2, weak)
        full = np.ones((len(p1.states), len(p2.states)), dtype=np.uint8)
        tp, (m1, s1) = best_of(lambda: pure.greatest_fixpoint(full.copy(), *kargs), args.repeat)
        tc, (m2, s2) = best_of(lambda: compiled.greatest_fixpoint(full.copy(), *kargs), args.repeat)
        if not np.array_equal(np.asarray(m1), np.asarray(m2)) or int(s1) != int(s2):
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:50} {tp:10.4f} {tc:11.4f} {tp / max(tc, 1e-9):7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
