"""Command-line experiment driver.

Every run writes its primary output to ``--out`` and a manifest next to it
(``<out>.manifest.json``) echoing the full run configuration, the package
version, the worker count and the chunk size. ``replay`` re-executes a
manifest; at the same worker/chunk setting the outputs are byte-identical.

Exit codes: 0 success, 2 usage or domain error, 3 capacity guard,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, config, io
from .distribution import (
    EmpiricalSample,
    ModelFamily,
    PrimeFamily,
    finite_dim_samples,
    ks_distance,
    prime_increment_moment,
    supnorm_samples_model,
    supnorm_samples_primes,
)
from .errors import CapacityError, DomainError, InvariantError
from .family import worker_count
from .legendre_path import build_path, sup_norm, symmetry_defect
from .moments import (
    MomentRequest,
    empirical_moment,
    moment_gap_sweep,
    theoretical_moment,
)
from .random_model import joint_moment_mc, sample_model_path, sample_signs


@dataclass
class RunConfig:
    """Everything needed to regenerate one CLI run."""

    subcommand: str
    kind: str | None = None
    p: int | None = None
    q: list[int] = field(default_factory=list)
    n_terms: int | None = None
    grid: int | None = None
    count: int | None = None
    trials: int | None = None
    seed: int | None = None
    truncation: int = config.DEFAULT_TRUNCATION
    support: int | None = None
    variant: str = "combined"
    mode: str = "exact"
    z: float | None = None
    points: list[float] = field(default_factory=list)
    exponents: list[int] = field(default_factory=list)
    s: float | None = None
    t: float | None = None
    power: int = 4
    fix_sign: int | None = None
    residue_class: int | None = None
    source: str = "primes"
    a: str | None = None
    b: str | None = None
    out: str = "out.csv"
    format: str = "csv"

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise DomainError(f"unknown manifest keys: {sorted(unknown)}")
        return cls(**data)


def _need(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) in (None, [])]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise DomainError(f"{cfg.subcommand} {cfg.kind or ''}: missing {flags}".replace("  ", " "))


def _emit_table(cfg: RunConfig, header, rows, extra: dict | None = None) -> None:
    if cfg.format == "csv":
        io.write_csv(cfg.out, header, rows)
    else:
        cols = {h: [r[i] for r in rows] for i, h in enumerate(header)}
        io.write_json(cfg.out, {**(extra or {}), "columns": cols})


# ------------------------------------------------------------------ commands


def cmd_path(cfg: RunConfig) -> dict:
    _need(cfg, "p")
    path = build_path(cfg.p)
    path.check_invariants()
    p = path.p
    rows = [(j, j / p, float(path.vertices[j])) for j in range(p + 1)]
    summary = {"p": p, "epsilon": path.prime.epsilon, "residue_class": path.prime.residue_class,
               "symmetry_defect": symmetry_defect(path), "sup_norm": sup_norm(path)}
    _emit_table(cfg, ["j", "t", "value"], rows, summary)
    return summary


def cmd_sample(cfg: RunConfig) -> dict:
    _need(cfg, "seed", "n_terms", "grid")
    sample = sample_signs(cfg.seed, cfg.n_terms)
    if cfg.fix_sign is not None:
        sample = sample.with_sign_minus_one(cfg.fix_sign)
    mp = sample_model_path(sample, cfg.n_terms, cfg.grid)
    sidecar = mp.sidecar()
    _emit_table(cfg, ["t", "value"], list(zip(mp.grid.tolist(), mp.values.tolist())), sidecar)
    if cfg.format == "csv":
        io.write_json(cfg.out + ".sidecar.json", sidecar)
    return sidecar


def _request(cfg: RunConfig) -> MomentRequest:
    _need(cfg, "points", "exponents")
    return MomentRequest(tuple(cfg.points), tuple(cfg.exponents), cfg.variant)


def cmd_moment(cfg: RunConfig) -> dict:
    req = _request(cfg)
    if cfg.kind == "theoretical":
        mv = theoretical_moment(req, cfg.truncation, cfg.support)
        record = {"request": req.to_dict(), "variant": req.variant, "A": cfg.truncation,
                  "support": cfg.support, "value": mv.value, "tail_bound": mv.tail_bound,
                  "mode": "series"}
        io.write_json(cfg.out, record)
        return record
    if cfg.kind == "empirical":
        _need(cfg, "q")
        rows = [(int(Q), empirical_moment(req, Q, cfg.mode, cfg.z)) for Q in cfg.q]
        if cfg.format == "json" and len(rows) == 1:
            record = {"request": req.to_dict(), "variant": req.variant, "Q": rows[0][0],
                      "value": rows[0][1], "mode": cfg.mode, "z": cfg.z}
            io.write_json(cfg.out, record)
            return record
        _emit_table(cfg, ["Q", "value"], rows, {"request": req.to_dict(), "mode": cfg.mode})
        return {"rows": len(rows)}
    if cfg.kind == "gap":
        _need(cfg, "q")
        gaps = moment_gap_sweep(req, cfg.q, cfg.truncation, cfg.mode, cfg.z)
        rows = [(g.Q, g.empirical, g.theoretical.value, g.theoretical.tail_bound, g.gap)
                for g in gaps]
        _emit_table(cfg, ["Q", "empirical", "theoretical", "tail_bound", "gap"], rows,
                    {"request": req.to_dict(), "A": cfg.truncation, "mode": cfg.mode})
        return {"final_gap": gaps[-1].gap}
    if cfg.kind == "mc":
        _need(cfg, "n_terms", "trials", "seed")
        est = joint_moment_mc(req.points, req.exponents, cfg.n_terms, cfg.trials, cfg.seed,
                              req.variant)
        record = {"request": req.to_dict(), "variant": req.variant, "N": cfg.n_terms,
                  "value": est.value, "stderr": est.stderr, "trials": est.trials,
                  "mode": "monte-carlo", "seed": cfg.seed}
        io.write_json(cfg.out, record)
        return record
    raise DomainError(f"unknown moment kind {cfg.kind!r}")


def _supnorm_sample(cfg: RunConfig) -> EmpiricalSample:
    if cfg.source == "primes":
        _need(cfg, "q")
        return supnorm_samples_primes(cfg.q[0], cfg.residue_class)
    _need(cfg, "n_terms", "count", "seed")
    grid = cfg.grid if cfg.grid is not None else 4 * cfg.n_terms + 1
    return supnorm_samples_model(cfg.n_terms, grid, cfg.count, cfg.seed, cfg.fix_sign)


def _write_sample(cfg: RunConfig, sample: EmpiricalSample) -> dict:
    meta = {"source": sample.source, **sample.metadata}
    _emit_table(cfg, ["value"], [(v,) for v in sample.values.tolist()], meta)
    if cfg.format == "csv":
        io.write_json(cfg.out + ".sidecar.json", meta)
    return {**meta, "mean": float(np.mean(sample.values))}


def cmd_dist(cfg: RunConfig) -> dict:
    if cfg.kind == "supnorm":
        return _write_sample(cfg, _supnorm_sample(cfg))
    if cfg.kind == "ks":
        if cfg.a is not None or cfg.b is not None:
            _need(cfg, "a", "b")
            va, vb = io.read_value_csv(cfg.a), io.read_value_csv(cfg.b)
            sources = {"a": cfg.a, "b": cfg.b}
        else:
            _need(cfg, "q", "n_terms", "count", "seed")
            sa = supnorm_samples_primes(cfg.q[0], cfg.residue_class)
            grid = cfg.grid if cfg.grid is not None else 4 * cfg.n_terms + 1
            sb = supnorm_samples_model(cfg.n_terms, grid, cfg.count, cfg.seed, cfg.fix_sign)
            va, vb = sa.values, sb.values
            sources = {"a": sa.source, "b": sb.source}
        record = {"ks": ks_distance(va, vb), "sizes": [int(va.size), int(vb.size)], **sources}
        io.write_json(cfg.out, record)
        return record
    if cfg.kind == "fdd":
        _need(cfg, "points")
        if cfg.source == "primes":
            _need(cfg, "q")
            src = PrimeFamily(cfg.q[0], cfg.residue_class)
        else:
            _need(cfg, "n_terms", "count", "seed")
            src = ModelFamily(cfg.n_terms, cfg.count, cfg.seed, cfg.fix_sign)
        mat = finite_dim_samples(src, cfg.points)
        header = [f"t_{i + 1}" for i in range(mat.shape[1])]
        _emit_table(cfg, header, mat.tolist(), {"source": src.tag(), "points": cfg.points})
        return {"source": src.tag(), "rows": int(mat.shape[0])}
    if cfg.kind == "increment":
        _need(cfg, "q", "s", "t")
        value = prime_increment_moment(cfg.q[0], cfg.s, cfg.t, cfg.power, cfg.residue_class)
        record = {"Q": cfg.q[0], "s": cfg.s, "t": cfg.t, "power": cfg.power,
                  "residue_class": cfg.residue_class, "value": value,
                  "trivial_bound": abs(cfg.t - cfg.s) ** 2 if cfg.power == 4 else None}
        io.write_json(cfg.out, record)
        return record
    raise DomainError(f"unknown dist kind {cfg.kind!r}")


COMMANDS = {"path": cmd_path, "sample": cmd_sample, "moment": cmd_moment, "dist": cmd_dist}


def manifest_path(out: str) -> str:
    return out + ".manifest.json"


def execute(cfg: RunConfig) -> dict:
    """Run one configuration and write its manifest."""
    if cfg.format not in ("csv", "json"):
        raise DomainError("format must be csv or json")
    Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
    summary = COMMANDS[cfg.subcommand](cfg)
    manifest = {"config": cfg.to_dict(), "version": __version__, "workers": worker_count(),
                "chunk_size": config.CHUNK_SIZE, "summary": summary}
    io.write_json(manifest_path(cfg.out), manifest)
    return manifest


def replay(manifest_file: str, out: str | None = None) -> dict:
    data = json.loads(Path(manifest_file).read_text(encoding="utf-8"))
    cfg = RunConfig.from_dict(data["config"])
    if out is not None:
        cfg.out = out
    return execute(cfg)


# ------------------------------------------------------------------ parsing


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", required=True, help="primary output file")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="legendre-paths",
                                 description="Legendre paths, random multiplicative models and their moments.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("path", help="vertex table of one Legendre path")
    sp.add_argument("--p", type=int, required=True)
    _common(sp)

    sp = sub.add_parser("sample", help="one model path on a uniform grid")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--n-terms", type=int, required=True)
    sp.add_argument("--grid", type=int, required=True)
    sp.add_argument("--fix-sign", type=int, choices=[-1, 1])
    _common(sp)

    sp = sub.add_parser("moment", help="theoretical, empirical, gap or Monte Carlo moments")
    sp.add_argument("kind", choices=["theoretical", "empirical", "gap", "mc"])
    sp.add_argument("--points", type=_floats, required=True, help="comma-separated t values")
    sp.add_argument("--exponents", type=_ints, required=True, help="comma-separated exponents")
    sp.add_argument("--variant", choices=["plus", "minus", "combined"], default="combined")
    sp.add_argument("--truncation", type=int, default=config.DEFAULT_TRUNCATION)
    sp.add_argument("--support", type=int)
    sp.add_argument("--q", type=_ints, default=[], help="comma-separated Q values")
    sp.add_argument("--mode", choices=["exact", "polya"], default="exact")
    sp.add_argument("--z", type=float)
    sp.add_argument("--n-terms", type=int)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--seed", type=int)
    _common(sp)

    sp = sub.add_parser("dist", help="sup-norm samples, KS distance, fdd matrices, increments")
    sp.add_argument("kind", choices=["supnorm", "ks", "fdd", "increment"])
    sp.add_argument("--source", choices=["primes", "model"], default="primes")
    sp.add_argument("--q", type=_ints, default=[])
    sp.add_argument("--residue-class", type=int, choices=[1, 3])
    sp.add_argument("--n-terms", type=int)
    sp.add_argument("--grid", type=int)
    sp.add_argument("--count", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--fix-sign", type=int, choices=[-1, 1])
    sp.add_argument("--points", type=_floats, default=[])
    sp.add_argument("--s", type=float)
    sp.add_argument("--t", type=float)
    sp.add_argument("--power", type=int, default=4)
    sp.add_argument("--a", help="sample CSV (ks)")
    sp.add_argument("--b", help="sample CSV (ks)")
    _common(sp)

    sp = sub.add_parser("replay", help="re-run a manifest")
    sp.add_argument("manifest")
    sp.add_argument("--out", help="write outputs here instead of the recorded path")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    names = {f.name for f in dataclasses.fields(RunConfig)}
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in names})


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        if ns.subcommand == "replay":
            replay(ns.manifest, ns.out)
        else:
            execute(config_from_args(ns))
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
