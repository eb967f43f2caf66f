"""Command-line front end: ``quadreturns <command> [options]``.

Options may also come from a ``key=value`` file given with ``--config``;
explicit flags win over the file, which wins over built-in defaults.
Exit status is 0 on success, 1 on a failed check, 2 on configuration errors
and 3 when a request exceeds an engine's capacity.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import __version__, kernels, limits, oracle, reproduce, sampler
from .compare import ConvergenceRow, compare_law, sweep
from .errors import BudgetExhausted, CapacityExceeded
from .shuffle import joint_law
from .walk import Conditioning, Parity, validate

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CAPACITY = 0, 1, 2, 3

DEFAULTS = {
    "walk": None,
    "n": None,
    "ns": None,
    "cond": "none",
    "parity": None,
    "mode": "exact",
    "backend": "auto",
    "method": "rejection",
    "seed": None,
    "trials": 100_000,
    "lanes": None,
    "out": None,
    "format": "csv",
    "conditional": False,
    "force": False,
    "scale": "default",
}

INT_KEYS = {"n", "seed", "trials", "lanes"}
BOOL_KEYS = {"conditional", "force"}


class ConfigError(ValueError):
    pass


def format_value(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return format_value(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def read_config(path: str) -> Dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def _coerce(key: str, value):
    if value is None or not isinstance(value, str):
        return value
    if key in INT_KEYS:
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {value!r}") from None
    if key in BOOL_KEYS:
        return value.strip().lower() in {"1", "true", "yes", "on"}
    return value


def resolve(args: argparse.Namespace) -> Dict[str, object]:
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            cfg.update(read_config(args.config))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            cfg[key] = value
    return {k: _coerce(k, v) for k, v in cfg.items()}


def _need(cfg, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise ConfigError("missing required option(s): " + ", ".join("--" + k for k in missing))


def _ns(cfg) -> List[int]:
    raw = cfg["ns"]
    if isinstance(raw, str):
        try:
            return [int(v) for v in raw.split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"ns must be a comma-separated list of integers, got {raw!r}") from None
    return list(raw)


def provenance(command: str, cfg: dict, **extra) -> dict:
    echo = {k: v for k, v in cfg.items() if v is not None and k != "out"}
    return _jsonable(
        {
            "command": command,
            "config": echo,
            "version": __version__,
            "kernel_backend": kernels.BACKEND,
            **extra,
        }
    )


def emit(cfg: dict, header: Sequence[str], rows: Iterable[Sequence], meta: dict, stdout) -> None:
    buf = io.StringIO()
    if cfg["format"] == "json":
        body = {"columns": list(header), "rows": [[format_value(v) for v in r] for r in rows]}
        body["meta"] = meta
        json.dump(body, buf, indent=2, sort_keys=True)
        buf.write("\n")
    else:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for r in rows:
            writer.writerow([format_value(v) for v in r])
    if cfg["out"]:
        with open(cfg["out"], "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        if cfg["format"] == "csv":
            with open(cfg["out"] + ".json", "w", encoding="utf-8") as fh:
                json.dump(meta, fh, indent=2, sort_keys=True)
                fh.write("\n")
    else:
        stdout.write(buf.getvalue())


# ---------------------------------------------------------------------------
# commands


def cmd_exact(cfg, stdout) -> int:
    _need(cfg, "walk", "n")
    walk = validate(cfg["walk"])
    law = joint_law(cfg["n"], walk, cfg["cond"], mode=cfg["mode"], backend=cfg["backend"])
    rows = list(law.rows(conditional=cfg["conditional"]))
    meta = provenance(
        "exact",
        cfg,
        engine_backend=law.backend,
        event_probability=law.event_probability,
        log_event_probability=law.log_event_probability,
        truncation_remainder=law.truncation_remainder,
    )
    emit(cfg, ("r1", "r2", "mass"), rows, meta, stdout)
    return EXIT_OK


def cmd_limit(cfg, stdout) -> int:
    _need(cfg, "walk")
    walk = validate(cfg["walk"])
    law = limits.limit_joint(walk, cfg["cond"], cfg["parity"])
    if law.discrete:
        table, tail = law.pmf_table()
        rows = [(r1, r2, v) for (r1, r2), v in np.ndenumerate(table) if v]
        header = ("r1", "r2", "mass")
    else:
        tail = 0.0
        rows = []
        for axis, marg in ((1, law.marginals[0]), (2, law.marginals[1])):
            if marg.continuous:
                grid = [i / 20 for i in range(0, 121)]
            else:
                grid = list(range(marg.support_max() + 1))
            rows += [(axis, x, marg.cdf(x)) for x in grid]
        header = ("axis", "x", "cdf")
    meta = provenance("limit", cfg, structure=law.structure, tail_bound=tail)
    emit(cfg, header, rows, meta, stdout)
    return EXIT_OK


def cmd_sample(cfg, stdout) -> int:
    _need(cfg, "walk", "n", "seed")
    walk = validate(cfg["walk"])
    n = cfg["n"]
    if cfg["method"] == "rejection" and not cfg["force"]:
        forecast = sampler.acceptance_forecast(n, walk, cfg["cond"])
        if forecast < sampler.REFUSE_BELOW:
            raise ConfigError(
                f"forecast acceptance rate {forecast:.3g} is below "
                f"{sampler.REFUSE_BELOW:g}; use the exact engine or pass --force"
            )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BudgetExhausted)
        law = sampler.sample(
            n, walk, cfg["cond"], seed=cfg["seed"], trials=cfg["trials"],
            method=cfg["method"], lanes=cfg["lanes"],
        )
    rows = [(r1, r2, v) for (r1, r2), v in sorted(law.cells().items())]
    meta = provenance(
        "sample",
        cfg,
        trials=law.trials,
        accepted=law.accepted,
        acceptance_rate=law.acceptance_rate,
        event_probability=law.event_probability,
        empty=law.empty,
        lanes=law.lanes,
    )
    emit(cfg, ("r1", "r2", "mass"), rows, meta, stdout)
    return EXIT_OK


def _row(r: ConvergenceRow):
    return (r.n, r.parity.value, r.metric, r.value, r.slack)


ROW_HEADER = ("n", "parity", "metric", "value", "slack")


def cmd_compare(cfg, stdout) -> int:
    _need(cfg, "walk", "n")
    walk = validate(cfg["walk"])
    law = joint_law(cfg["n"], walk, cfg["cond"], mode=cfg["mode"], backend=cfg["backend"])
    row = compare_law(law, limits.limit_joint(walk, cfg["cond"], cfg["parity"] or Parity.of(cfg["n"])))
    meta = provenance("compare", cfg, engine_backend=law.backend, scales=row.scales)
    emit(cfg, ROW_HEADER, [_row(row)], meta, stdout)
    return EXIT_OK


def cmd_sweep(cfg, stdout) -> int:
    _need(cfg, "walk", "ns")
    walk = validate(cfg["walk"])
    rows = sweep(_ns(cfg), walk, cfg["cond"], backend=cfg["backend"], mode=cfg["mode"])
    meta = provenance("sweep", cfg, scales=[r.scales for r in rows])
    emit(cfg, ROW_HEADER, [_row(r) for r in rows], meta, stdout)
    return EXIT_OK


def cmd_oracle(cfg, stdout) -> int:
    _need(cfg, "walk", "n")
    walk = validate(cfg["walk"])
    brute = oracle.enumerate_joint(cfg["n"], walk, cfg["cond"])
    fast = joint_law(cfg["n"], walk, cfg["cond"], backend="exact")
    agree = brute.as_dict() == fast.as_dict()
    meta = provenance("oracle", cfg, shuffle_agrees=agree)
    emit(cfg, ("r1", "r2", "mass"), list(brute.rows()), meta, stdout)
    return EXIT_OK if agree else EXIT_FAIL


def cmd_reproduce(cfg, stdout, target: str) -> int:
    walks = [cfg["walk"]] if cfg["walk"] else None
    checks = reproduce.run(target, cfg["scale"], walks)
    text = "".join(c.line() + "\n" for c in checks)
    if cfg["out"]:
        with open(cfg["out"], "w", encoding="utf-8") as fh:
            fh.write(text)
        meta = provenance(
            "reproduce", cfg, target=target, checks=[c.as_dict() for c in checks]
        )
        with open(cfg["out"] + ".json", "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        stdout.write(text)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, *names: str) -> None:
    p.add_argument("--config", help="key=value file of option defaults")
    p.add_argument("--out", help="output file (a .json provenance sidecar is written next to it)")
    p.add_argument("--format", choices=("csv", "json"))
    opts = {
        "walk": dict(help='step probabilities "p1,q1,p2,q2" (decimal or a/b)'),
        "n": dict(type=int, help="walk length"),
        "ns": dict(help="comma-separated walk lengths"),
        "cond": dict(choices=[c.value for c in Conditioning], help="conditioning"),
        "parity": dict(choices=("even", "odd"), help="parity of the limit law"),
        "mode": dict(choices=("exact", "windowed")),
        "backend": dict(choices=("auto", "exact", "float")),
        "method": dict(choices=("rejection", "tilted")),
        "seed": dict(type=int),
        "trials": dict(type=int),
        "lanes": dict(type=int, help=f"worker threads (default ${sampler.THREADS_ENV} or 1)"),
        "scale": dict(choices=("small", "default")),
    }
    for name in names:
        p.add_argument("--" + name, **opts[name])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadreturns",
        description="Returns to the axes of quarter-plane walks: exact laws, limits, sampling.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact joint law of the return counts")
    _common(p, "walk", "n", "cond", "mode", "backend")
    p.add_argument("--conditional", action="store_true", help="normalise by the event probability")

    p = sub.add_parser("limit", help="limit law grid")
    _common(p, "walk", "cond", "parity")

    p = sub.add_parser("sample", help="Monte Carlo estimate")
    _common(p, "walk", "n", "cond", "method", "seed", "trials", "lanes")
    p.add_argument("--force", action="store_true", help="run even when acceptance is hopeless")

    p = sub.add_parser("compare", help="distance between the exact law and its limit")
    _common(p, "walk", "n", "cond", "parity", "mode", "backend")

    p = sub.add_parser("sweep", help="distances over several lengths")
    _common(p, "walk", "ns", "cond", "mode", "backend")

    p = sub.add_parser("oracle", help="brute-force law, cross-checked against the fast engine")
    _common(p, "walk", "n", "cond")

    p = sub.add_parser("reproduce", help="run a convergence check with thresholds")
    p.add_argument("target", help="one of " + ", ".join(reproduce.TARGETS))
    _common(p, "walk", "scale")
    return parser


COMMANDS = {
    "exact": cmd_exact,
    "limit": cmd_limit,
    "sample": cmd_sample,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
}


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
        if args.command == "reproduce":
            return cmd_reproduce(cfg, stdout, args.target)
        return COMMANDS[args.command](cfg, stdout)
    except CapacityExceeded as exc:
        print(f"quadreturns: capacity exceeded: {exc}", file=stderr)
        return EXIT_CAPACITY
    except (ValueError, OSError) as exc:
        print(f"quadreturns: {exc}", file=stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
