"""Bethe-equation energies against exact diagonalization, sector by sector."""
import argparse
from dataclasses import dataclass, field

from univhub.xx import XXModel
from univhub.xx_bethe import bae_vs_ed


@dataclass
class Config:
    lengths: list = field(default_factory=lambda: [4, 6])
    tol: float = 1e-10


MODELS = [
    (XXModel.gl(2), True),
    (XXModel.gl(1, 1, (1,)), False),
    (XXModel.gl(2, 1, (1,)), False),
    (XXModel.gl(3, 0, (1, 2)), False),
]


def main(cfg: Config):
    print(f"{'model':<18} {'L':>2} {'sectors':>7} {'max dist':>10} {'exact':>6} {'pass':>5}")
    for m, exact in MODELS:
        for L in cfg.lengths:
            if m.s**L > 5000:
                continue
            r = bae_vs_ed(m, L, tol=cfg.tol, exact=exact)
            print(f"{m.label():<18} {L:>2} {r['sectors']:>7} {r['max_distance']:10.1e} {str(exact):>6} {str(r['pass']):>5}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=int, nargs="+", default=[4, 6])
    main(Config(lengths=ap.parse_args().L))
