"""Time the loss-channel kernel: numba vs pure numpy.

    python benchmarks/bench_loss_kernel.py [--dims 10 20 30 49] [--repeat 5]

The numba timing excludes the first (compiling) call.  The two outputs are
also checked against each other.
"""

import argparse
import time

import numpy as np

from lossent import _kernels
from lossent.fock_oracle import kraus_weights


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[10, 20, 30, 49])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--eta", type=float, default=0.5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"{'dim':>4} {'numpy [s]':>11} {'numba [s]':>11} {'speedup':>8} {'max diff':>10}")
    for d in args.dims:
        t4 = rng.normal(size=(d, d, d, d))
        w = kraus_weights(args.eta, d)
        t_np, out_np = best_of(_kernels.loss_first_mode_numpy, (t4, w), args.repeat)
        if not _kernels.HAVE_NUMBA:
            print(f"{d:>4} {t_np:>11.4f} {'n/a':>11}")
            continue
        _kernels.loss_first_mode_numba(t4[:2, :2, :2, :2].copy(), w[:2, :2].copy())
        t_nb, out_nb = best_of(_kernels.loss_first_mode_numba, (t4, w), args.repeat)
        diff = float(np.max(np.abs(out_np - out_nb)))
        print(f"{d:>4} {t_np:>11.4f} {t_nb:>11.4f} {t_np / t_nb:>7.1f}x {diff:>10.1e}")


if __name__ == "__main__":
    main()
