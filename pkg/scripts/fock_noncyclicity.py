"""Partial traces over a truncated Fock range fail to be cyclic."""
import argparse

import numpy as np

from univhub.fock import noncyclicity_demo, normalized_traces, verify_fock


def main(nmax):
    print(f"{'Nmax':>4} {'suite':>6} {'difference':>11} {'sqrt(2 Nmax)':>12} {'full trace':>10}")
    for N in nmax:
        ok = verify_fock(N).passed if N >= 1 else None
        d = noncyclicity_demo(N)
        print(f"{N:>4} {str(ok):>6} {d['difference']:11.6f} {np.sqrt(2 * N):12.6f} {d['full_trace_difference']:10.1e}")
    print()
    for N in (10, 100, 10000):
        print(f"(1/N) tr_N at N={N}: {normalized_traces(N)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, nargs="+", default=[1, 2, 3, 4, 5])
    main(ap.parse_args().nmax)
