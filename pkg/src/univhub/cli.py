"""Command-line front end: ``univhub {verify,spectrum,bae,perturb,fock}``.

Configs are JSON, one model per document or a list of them::

    {"up": {"m": 2, "n": 0, "N": [1]}, "down": {"m": 2, "n": 0, "N": [1]},
     "U": 2.0, "L": 3, "twist": [[1, 1, 1.0, 0.7]]}

Exit codes: 0 all checks pass, 1 some check failed, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import __version__, chain
from .graded import GradingError
from .hubbard import (
    HubbardModel,
    hamiltonian_from_transfer,
    hamiltonian_hubbard,
    pair_perm,
    r_hubbard,
    symmetry_hubbard,
    unitarity_residual,
    ybe_residual,
)
from .xx import ZOO, XXModel, hamiltonian_xx, symmetry_xx, verify_theorem1

SUITES = ("all", "theorem1", "hubbard", "symmetry", "twist")
DEFAULT_L = 3


class ConfigError(ValueError):
    pass


@dataclass
class ModelConfig:
    up: dict
    down: dict | None = None
    U: float = 2.0
    L: int = DEFAULT_L
    twist: list = field(default_factory=list)
    twist_down: list = field(default_factory=list)
    seed: int = 0
    tol: float = 1e-10

    def xx(self, which: str = "up") -> XXModel:
        d = self.up if which == "up" else self.down
        return XXModel.gl(d["m"], d["n"], d["N"])

    def hubbard(self) -> HubbardModel | None:
        if self.down is None:
            return None
        return HubbardModel(self.xx("up"), self.xx("down"), self.U)

    @property
    def site_dim(self) -> int:
        s = self.up["m"] + self.up["n"]
        if self.down is not None:
            s *= self.down["m"] + self.down["n"]
        return s


def _space_config(raw, name: str) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError(f"{name}: expected an object with m, n, N")
    try:
        m, n = int(raw["m"]), int(raw.get("n", 0))
        N = [int(i) for i in raw["N"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: needs integer m, n and an index list N ({exc})") from None
    if m < 0 or n < 0 or m + n < 1:
        raise ConfigError(f"{name}.m/{name}.n: need m, n >= 0 and m + n >= 1")
    for i in N:
        if not 1 <= i <= m + n:
            raise ConfigError(f"{name}.N: index {i} outside [1, {m + n}]")
    if len(set(N)) != len(N):
        raise ConfigError(f"{name}.N: repeated index")
    return {"m": m, "n": n, "N": sorted(N)}


def parse_config(raw: dict, seed: int | None = None, tol: float | None = None) -> ModelConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config: each model must be a JSON object")
    unknown = set(raw) - {"up", "down", "U", "L", "twist", "twist_down", "seed", "tol"}
    if unknown:
        raise ConfigError(f"config: unknown field(s) {sorted(unknown)}")
    if "up" not in raw:
        raise ConfigError("up: missing")
    up = _space_config(raw["up"], "up")
    down = _space_config(raw["down"], "down") if raw.get("down") is not None else None
    try:
        U = float(raw.get("U", 2.0))
        L = int(raw.get("L", DEFAULT_L))
    except (TypeError, ValueError):
        raise ConfigError("U/L: U must be real and L an integer") from None
    if not np.isfinite(U):
        raise ConfigError("U: must be finite")
    if L < 2:
        raise ConfigError("L: must be >= 2")
    cfg = ModelConfig(up, down, U, L)
    for key in ("twist", "twist_down"):
        rows = raw.get(key, [])
        if not isinstance(rows, list) or any(not isinstance(r, list) or len(r) != 4 for r in rows):
            raise ConfigError(f"{key}: expected rows [a, abar, modulus, angle]")
        if any(r[2] == 0 for r in rows):
            raise ConfigError(f"{key}: modulus must be nonzero")
        setattr(cfg, key, [[int(r[0]), int(r[1]), float(r[2]), float(r[3])] for r in rows])
    if cfg.twist_down and down is None:
        raise ConfigError("twist_down: needs a down model")
    cfg.seed = int(raw.get("seed", 0)) if seed is None else seed
    cfg.tol = float(raw.get("tol", 1e-10)) if tol is None else tol
    if not cfg.tol > 0:
        raise ConfigError("tol: must be positive")
    try:
        chain.check_cap(cfg.hubbard().site if down else cfg.xx().space, L)
    except GradingError as exc:
        raise ConfigError(f"L: {exc}") from None
    return cfg


def load_configs(path: str | None, seed: int | None, tol: float | None) -> list[ModelConfig]:
    """Read a JSON file; without a path, the default XX zoo."""
    if path is None:
        raw = [{"up": _xx_dict(m)} for m in ZOO]
    else:
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"--model: cannot read {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--model: invalid JSON ({exc})") from None
    if isinstance(raw, dict):
        raw = [raw]
    if not isinstance(raw, list) or not raw:
        raise ConfigError("config: expected an object or a non-empty list")
    return [parse_config(r, seed, tol) for r in raw]


def _xx_dict(m: XXModel) -> dict:
    return {"m": m.space.grades.count(0), "n": m.space.grades.count(1), "N": list(m.subset_N)}


# --------------------------------------------------------------------------
# reports


class Report:
    def __init__(self, command: str, configs, timings: bool = False):
        self.command = command
        self.configs = configs
        self.checks: dict[str, dict] = {}
        self.data: dict[str, object] = {}
        self._timings: dict[str, float] | None = {} if timings else None

    def check(self, name: str, residual: float, tol: float, at_least: bool = False):
        """Record a check; ``at_least`` flips it into residual >= tol."""
        residual = float(residual)
        ok = residual >= tol if at_least else residual <= tol
        self.checks[name] = {"residual": residual, "tolerance": tol, "mode": "min" if at_least else "max",
                             "pass": bool(ok)}

    def timed(self, name: str, fn: Callable):
        t0 = time.perf_counter()
        out = fn()
        if self._timings is not None:
            self._timings[name] = time.perf_counter() - t0
        return out

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks.values())

    def to_dict(self) -> dict:
        out = {
            "tool": "univhub",
            "version": __version__,
            "command": self.command,
            "config": [asdict(c) for c in self.configs],
            "checks": [{"name": k, **v} for k, v in sorted(self.checks.items())],
            "data": self.data,
            "pass": self.passed,
        }
        if self._timings is not None:
            out["timings"] = self._timings
        return out


def _label(i: int, cfg: ModelConfig) -> str:
    m = cfg.hubbard() or cfg.xx()
    return f"{i}:{m.label()}"


# --------------------------------------------------------------------------
# commands


def cmd_verify(configs, rep: Report, suite: str = "all"):
    from .twist import (
        Refinement,
        hermiticity_residual,
        symmetry_residual,
        twisted_hamiltonian,
        twisted_hubbard_hamiltonian,
        twisted_hubbard_ybe,
        verify_twisted,
    )

    want = lambda s: suite in ("all", s)
    for i, cfg in enumerate(configs):
        tag = _label(i, cfg)
        spins = [("up", cfg.xx("up"))] + ([("down", cfg.xx("down"))] if cfg.down else [])
        if want("theorem1"):
            for spin, m in spins:
                res = rep.timed(f"{tag}:theorem1:{spin}", lambda: verify_theorem1(m, seed=cfg.seed, tol=cfg.tol))
                for k, r in res.residuals.items():
                    rep.check(f"{tag}:theorem1:{spin}:{k}", r.value, cfg.tol)
        hm = cfg.hubbard()
        if hm is not None and want("hubbard"):
            rng = np.random.default_rng(cfg.seed)
            pts = rng.uniform(-0.6, 0.6, size=(3, 3))
            rep.check(f"{tag}:hubbard:YBE", max(ybe_residual(hm, *p) for p in pts), cfg.tol)
            rep.check(f"{tag}:hubbard:unitarity", max(unitarity_residual(hm, a, b) for a, b, _ in pts), cfg.tol)
            rep.check(f"{tag}:hubbard:regularity",
                      float(np.abs(r_hubbard(hm, pts[0, 0], pts[0, 0]) - pair_perm(hm)).max()), cfg.tol)
            Ls = min(cfg.L, 3)
            diff = hamiltonian_from_transfer(hm, Ls) - hamiltonian_hubbard(hm, Ls)
            rep.check(f"{tag}:hubbard:hamiltonian-from-transfer", float(np.abs(diff).max()), cfg.tol)
        if want("symmetry"):
            if hm is not None:
                sym = lambda cross: symmetry_hubbard(hm, min(cfg.L, 3), cross=cross)
            else:
                sym = lambda cross: symmetry_xx(spins[0][1], cfg.L, cross=cross)
            blk, crs = sym(False), sym(True)
            if blk:
                rep.check(f"{tag}:symmetry:block", max(max(v.values()) for v in blk.values()), cfg.tol)
            if crs:
                worst = min(max(v["H"], v["t"]) for v in crs.values())
                rep.check(f"{tag}:symmetry:cross-min", worst, 1e-2, at_least=True)
        if want("twist") and (cfg.twist or cfg.twist_down):
            ref = Refinement.from_rows(cfg.xx("up"), cfg.twist)
            if hm is None:
                res = verify_twisted(cfg.xx("up"), ref, seed=cfg.seed, tol=cfg.tol)
                for k, r in res.residuals.items():
                    rep.check(f"{tag}:twist:{k}", r.value, cfg.tol)
                herm = hermiticity_residual(twisted_hamiltonian(cfg.xx("up"), ref, cfg.L))
                rep.data[f"{tag}:twist:symmetry"] = symmetry_residual(cfg.xx("up"), ref)
                phase = ref.is_phase
            else:
                refs = (ref, Refinement.from_rows(cfg.xx("down"), cfg.twist_down))
                rep.check(f"{tag}:twist:hubbard-YBE", twisted_hubbard_ybe(hm, refs, 0.3, -0.5, 0.9), cfg.tol)
                herm = hermiticity_residual(twisted_hubbard_hamiltonian(hm, refs, min(cfg.L, 3)))
                phase = all(r.is_phase for r in refs)
            if phase:
                rep.check(f"{tag}:twist:hermitian", herm, 1e-13)
            else:
                rep.data[f"{tag}:twist:hermiticity"] = herm


def cmd_spectrum(configs, rep: Report):
    from .strong_coupling import charge_keys

    for i, cfg in enumerate(configs):
        tag = _label(i, cfg)
        hm = cfg.hubbard()
        if hm is not None:
            H = hamiltonian_hubbard(hm, cfg.L)
            labels = charge_keys(hm, cfg.L)
        else:
            H = hamiltonian_xx(cfg.xx(), cfg.L)
            labels = chain.occupation_labels(cfg.xx().space, cfg.L)
        herm = float(np.abs(H - H.conj().T).max())
        rep.check(f"{tag}:hermitian", herm, cfg.tol)
        spectra = chain.sector_spectra(H, labels)
        rep.data[tag] = {
            "dim": int(H.shape[0]),
            "eigenvalues": np.linalg.eigvalsh(H).round(12).tolist(),
            "sectors": [{"charges": [int(c) for c in k], "eigenvalues": np.asarray(v).round(12).tolist()}
                        for k, v in sorted(spectra.items())],
        }


def cmd_bae(configs, rep: Report):
    from .hubbard_bethe import bae_unbarred, bae_unbarred_residual, bae_unbarred_via_xx, vacuum_sector_report
    from .xx_bethe import bae_vs_ed

    for i, cfg in enumerate(configs):
        tag = _label(i, cfg)
        hm = cfg.hubbard()
        if hm is None:
            res = rep.timed(tag, lambda: bae_vs_ed(cfg.xx(), cfg.L, tol=cfg.tol, exact=True))
            rep.check(f"{tag}:bae-vs-ed", res["max_distance"], cfg.tol)
            rep.check(f"{tag}:bae-sectors-exact", float(len(res["sector_mismatch"]) + len(res["unpredicted_sectors"])), 0.5)
            rep.data[tag] = {k: v for k, v in res.items() if k in ("sectors", "max_distance", "pass")}
            continue
        vac = vacuum_sector_report(hm, cfg.L, 0.3)
        rep.check(f"{tag}:vacuum-eigenvalue", vac["eigen_residual"], cfg.tol)
        rep.check(f"{tag}:vacuum-energy", vac["energy_residual"], cfg.tol)
        M = {"up": 1 if hm.up.r > 1 else 0, "down": 1 if hm.down.r > 1 else 0}
        fam = bae_unbarred(hm, cfg.L, M["up"], M["down"])
        rep.check(f"{tag}:unbarred-bae", bae_unbarred_residual(fam, cfg.L), cfg.tol)
        same = bae_unbarred_via_xx(hm, cfg.L, M["up"], M["down"])
        rep.check(f"{tag}:unbarred-bae-vs-xx", 0.0 if all(same.values()) else 1.0, 0.5)


def cmd_perturb(configs, rep: Report, U_list):
    from .strong_coupling import error_ratio, strong_coupling_vs_ed

    for i, cfg in enumerate(configs):
        hm = cfg.hubbard()
        if hm is None:
            raise ConfigError("perturb: needs a down model")
        tag = _label(i, cfg)
        fourth = cfg.L >= 6
        rows = rep.timed(tag, lambda: strong_coupling_vs_ed(hm, cfg.L, U_list, fourth=fourth))
        target = 32.0 if fourth else 8.0
        ratio = error_ratio(rows) if len(rows) > 1 else float("nan")
        rep.data[tag] = {"rows": rows, "ratio": ratio, "expected": target, "fourth": fourth}
        if len(rows) > 1 and U_list[-1] == 2 * U_list[0]:
            rep.check(f"{tag}:ratio", abs(np.log2(ratio / target)), 1.0)


def cmd_fock(rep: Report, nmax_list, tol: float):
    from .fock import noncyclicity_demo, verify_fock

    for N in nmax_list:
        for kind, ell in (("even-odd", None), ("small-modes", min(1, N))):
            res = verify_fock(N, kind, ell, tol=max(tol, 1e-12))
            for k, r in res.residuals.items():
                rep.check(f"{res.model}:{k}", r.value, r.tolerance)
        if N >= 1:
            demo = noncyclicity_demo(N)
            rep.check(f"Nmax={N}:noncyclic", demo["difference"], 1e-12, at_least=True)
            rep.data[f"Nmax={N}"] = demo


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="univhub", description="Universal XX and Hubbard model checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, model=True):
        if model:
            sp.add_argument("--model", metavar="PATH", help="JSON model config (default: XX zoo)")
        sp.add_argument("--out", metavar="PATH", help="write the JSON report here (default: stdout)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")

    v = sub.add_parser("verify", help="identity suites")
    common(v)
    v.add_argument("--suite", choices=SUITES, default="all")
    common(sub.add_parser("spectrum", help="ED spectra by charge sector"))
    common(sub.add_parser("bae", help="Bethe equations against ED"))
    pt = sub.add_parser("perturb", help="strong-coupling scaling study")
    common(pt)
    pt.add_argument("--U", dest="U_list", type=float, nargs="+", default=[8.0, 16.0])
    fk = sub.add_parser("fock", help="truncated Fock-space demo")
    common(fk, model=False)
    fk.add_argument("--nmax", type=int, nargs="+", default=[1, 3, 5])
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol <= 0:
        parser.error("--tol: must be positive")
    try:
        if args.command == "fock":
            if any(n < 0 for n in args.nmax):
                raise ConfigError("--nmax: values must be >= 0")
            rep = Report("fock", [], args.timings)
            cmd_fock(rep, args.nmax, args.tol)
        else:
            configs = load_configs(args.model, args.seed, args.tol)
            rep = Report(args.command, configs, args.timings)
            if args.command == "verify":
                cmd_verify(configs, rep, args.suite)
            elif args.command == "spectrum":
                cmd_spectrum(configs, rep)
            elif args.command == "bae":
                cmd_bae(configs, rep)
            else:
                cmd_perturb(configs, rep, args.U_list)
    except (ConfigError, GradingError) as exc:
        print(f"univhub: error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(rep.to_dict(), indent=2, sort_keys=True, default=_json_default)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if rep.passed else 1


def _json_default(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"not serializable: {type(x)}")


if __name__ == "__main__":
    sys.exit(main())
