"""Hermiticity and exchange symmetry of twisted XX chains over a q scan."""
import argparse
from dataclasses import dataclass

import numpy as np

from univhub.twist import Refinement, hermiticity_residual, symmetry_residual, twisted_hamiltonian
from univhub.xx import ZOO


@dataclass
class Config:
    L: int = 3


QS = [1.0, -1.0, 2.0, 0.5, np.exp(0.7j), np.exp(2.1j), 2 * np.exp(0.7j)]


def main(cfg: Config):
    print(f"{'model':<18} {'q':>16} {'symmetry':>9} {'hermit.':>9}")
    for m in ZOO:
        if m.is_trivial:
            continue
        for q in QS:
            ref = Refinement.maximal(m, q)
            H = twisted_hamiltonian(m, ref, cfg.L)
            qs = f"{q.real:+.3f}{q.imag:+.3f}j" if isinstance(q, complex) else f"{q:+.3f}"
            print(f"{m.label():<18} {qs:>16} {symmetry_residual(m, ref):9.2e} {hermiticity_residual(H):9.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=int, default=3)
    main(Config(L=ap.parse_args().L))
