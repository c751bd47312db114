"""Time the hot kernels under both NHRABI_BACKEND settings.

Each backend runs in its own interpreter because the flag is read at import.
Usage: python benchmarks/bench_backends.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
import numpy as np
from nhrabi import BACKEND, ModelParams
from nhrabi.numerics import bessel_i_orders, dft_magnitude
from nhrabi.dynamics import evolve_numeric
from nhrabi.floquet import FloquetConfig, scan_phase

repeat = int(sys.argv[1])

def best(fn):
    fn()  # warm-up, includes compilation for numba
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)

xs = np.linspace(0.01, 40.0, 2000)
x = np.random.default_rng(0).normal(size=4096)
cases = {
    "bessel 2000 x orders 0..64": lambda: [bessel_i_orders(64, v) for v in xs],
    "dft 4096 samples": lambda: dft_magnitude(x, 0.01),
    "ode 10 periods, point A": lambda: evolve_numeric(ModelParams(2.5, 1.0)),
    "phase grid 16x16, N=32": lambda: scan_phase((0, 3), (0, 6), 16, FloquetConfig(n_harmonics=32)),
}
print(json.dumps({"backend": BACKEND, "seconds": {k: best(f) for k, f in cases.items()}}))
"""


def run(backend: str, repeat: int) -> dict:
    env = dict(os.environ, NHRABI_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", CHILD, str(repeat)], env=env, check=True, capture_output=True, text=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    res = {b: run(b, args.repeat) for b in ("numba", "numpy")}
    if res["numba"]["backend"] != "numba":
        print("numba not importable; both runs used the numpy fallback")
    print(f"{'kernel':32s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speed-up':>9s}")
    for k, t_numpy in res["numpy"]["seconds"].items():
        t_jit = res["numba"]["seconds"][k]
        print(f"{k:32s} {t_jit:10.4f} {t_numpy:10.4f} {t_numpy / t_jit:9.1f}")


if __name__ == "__main__":
    main()
