"""Error of the effective Hamiltonian against ED as U doubles."""
import argparse
from dataclasses import dataclass, field

from univhub.hubbard import HubbardModel
from univhub.strong_coupling import RESOLVENT_SCALARS, error_ratio, closed_three_site, strong_coupling_vs_ed, three_site_spectrum


@dataclass
class Config:
    U: list = field(default_factory=lambda: [4.0, 8.0, 16.0, 32.0])


def main(cfg: Config):
    m = HubbardModel.standard(1.0)
    for L, fourth, target in ((4, False, 8), (6, True, 32)):
        rows = strong_coupling_vs_ed(m, L, cfg.U, fourth=fourth)
        print(f"L={L} {'H2+H4' if fourth else 'H2'} (expected ratio {target})")
        for a, b in zip(rows, rows[1:]):
            print(f"  U {a['U']:5.1f} -> {b['U']:5.1f}: err {a['error']:.3e} -> {b['error']:.3e}, ratio {error_ratio([a, b]):6.2f}")
    print(f"\nresolvent / closed-form scalars: {RESOLVENT_SCALARS}")
    for U in (2.0, 5.0):
        got = three_site_spectrum(m.with_U(U))["values"]
        print(f"three sites U={U}: {[round(x, 12) for x in got]}  closed form {closed_three_site(U)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--U", type=float, nargs="+", default=[4.0, 8.0, 16.0, 32.0])
    main(Config(U=ap.parse_args().U))
