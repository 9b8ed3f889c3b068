"""Compare the numba kernels with the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Times three workloads on both paths: batch sifting through a stabilizer
chain, Todd-Coxeter enumeration of the {3,3,5} group, and an end-to-end
stabilizer chain for the 240-point signed action.  The end-to-end run
switches paths through the HYPERTOPE_NUMBA environment flag in a child
process, since the flag is read once at import.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from hypertope import _kernels as K
from hypertope.constructions import build_from_symbol, coxeter_presentation
from hypertope.permcore.presentation import _flatten


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_sift(repeat):
    C = build_from_symbol("delta2^{{4,3}}")
    base, pos, tinv = C.group.chain.packed()
    rng = np.random.default_rng(0)
    members = C.group.element_array()
    extra = np.array([rng.permutation(C.degree) for _ in range(members.shape[0])], dtype=np.int32)
    elems = np.ascontiguousarray(np.concatenate([members, extra]))
    K.sift_mask_jit(elems[:2], base, pos, tinv)  # compile
    t_py = best_of(lambda: K.sift_mask_py(elems, base, pos, tinv), repeat)
    t_jit = best_of(lambda: K.sift_mask_jit(elems, base, pos, tinv), repeat)
    return f"sift {elems.shape[0]} perms, degree {C.degree}", t_py, t_jit


def bench_todd_coxeter(repeat):
    pres = coxeter_presentation((3, 3, 5))
    rel, rel_off = _flatten(pres.relators)
    sub, sub_off = _flatten([])
    K.todd_coxeter_jit(pres.generators, rel, rel_off, sub, sub_off, 10**6)  # compile
    args = (pres.generators, rel, rel_off, sub, sub_off, 10**6)
    t_py = best_of(lambda: K.todd_coxeter_py(*args), max(1, repeat // 3))
    t_jit = best_of(lambda: K.todd_coxeter_jit(*args), repeat)
    return "Todd-Coxeter {3,3,5}, 14400 cosets", t_py, t_jit


def bench_end_to_end():
    code = ("import time; from hypertope.constructions import build_from_symbol;"
            "C = build_from_symbol('{3}'); C.order(); t = time.perf_counter();"
            "assert build_from_symbol('2^{{3,3,5}}').order() == 2**120 * 14400;"
            "print(time.perf_counter() - t)")
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, HYPERTOPE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        out[flag] = float(res.stdout.strip())
    return "2^{{3,3,5}} chain, degree 240", out["0"], out["1"]


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--skip-end-to-end", action="store_true")
    args = parser.parse_args()
    if K.numba is None:
        sys.exit("numba is not installed; nothing to compare")
    rows = [bench_sift(args.repeat), bench_todd_coxeter(args.repeat)]
    if not args.skip_end_to_end:
        rows.append(bench_end_to_end())
    print(f"{'workload':42s} {'numpy (s)':>10s} {'numba (s)':>10s} {'speedup':>8s}")
    for name, t_py, t_jit in rows:
        print(f"{name:42s} {t_py:10.4f} {t_jit:10.4f} {t_py / t_jit:7.1f}x")


if __name__ == "__main__":
    main()
