"""Time the compiled kernels against the numpy fallback.

Run with ``python benchmarks/bench_kernels.py``; the end-to-end row times a
full time-domain amplitude set with each backend.
"""
import argparse
import timeit

import numpy as np

from vacharvest import _kernels_py, kernels
from vacharvest.amplitudes import Path, ScenarioConfig, assemble_amplitudes

try:
    from vacharvest import _kernels as _compiled
except ImportError:
    _compiled = None


def _best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def _use(impl):
    kernels.cos2_spectrum = impl.cos2_spectrum
    kernels.cos2_overlap = impl.cos2_overlap


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    nu = np.linspace(-200.0, 200.0, 4001)
    x, w = np.polynomial.legendre.leggauss(48)
    cfg = ScenarioConfig.symmetric(9.5, 1.0)
    backends = {"python": _kernels_py}
    if _compiled is not None:
        backends["cython"] = _compiled
    else:
        print("compiled extension not built; timing the fallback only")

    cases = {
        "cos2_spectrum (4001 pts)": (lambda m: (lambda: m.cos2_spectrum(nu, 1.0)), 200),
        "cos2_overlap (scalar u)": (lambda m: (lambda: m.cos2_overlap(0.3, 1.0, 0.0, 1.0, 0.0, 19.0, x, w)), 2000),
    }
    print(f"{'case':32s}" + "".join(f"{b:>14s}" for b in backends))
    for name, (make, number) in cases.items():
        row = [_best(make(m), args.repeat, number) for m in backends.values()]
        print(f"{name:32s}" + "".join(f"{t * 1e6:12.2f}us" for t in row))

    row = []
    for m in backends.values():
        _use(m)
        row.append(_best(lambda: assemble_amplitudes(cfg, Path.TIME_DOMAIN), max(1, args.repeat // 2), 1))
    print(f"{'amplitude set, time path':32s}" + "".join(f"{t * 1e3:12.1f}ms" for t in row))


if __name__ == "__main__":
    main()
