"""Identity suite over the XX zoo and the Hubbard zoo; prints worst residuals."""
import argparse
import time
from dataclasses import dataclass

from univhub.hubbard import hubbard_zoo, unitarity_residual, ybe_residual
from univhub.xx import ZOO, verify_theorem1


@dataclass
class Config:
    samples: int = 20
    seed: int = 0
    tol: float = 1e-12
    U: tuple = (0.5, 2.0, 10.0)


def main(cfg: Config):
    print(f"{'model':<22} {'worst':>10} {'ok':>4}")
    t0 = time.perf_counter()
    for m in ZOO:
        rep = verify_theorem1(m, n_samples=cfg.samples, seed=cfg.seed, tol=cfg.tol)
        worst = max(r.value for r in rep.residuals.values())
        print(f"{m.label():<22} {worst:10.2e} {'yes' if rep.passed else 'NO':>4}")
    print(f"xx zoo: {time.perf_counter() - t0:.2f} s\n")
    print(f"{'hubbard':<40} {'YBE':>10} {'unitarity':>10}")
    for U in cfg.U:
        for m in hubbard_zoo(U):
            print(f"{m.label():<40} {ybe_residual(m, 0.31, -0.57, 0.83):10.2e} {unitarity_residual(m, 0.4, -0.15):10.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    main(Config(samples=a.samples, seed=a.seed))
