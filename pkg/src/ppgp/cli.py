"""Command-line front end.

Subcommands: ``design``, ``fit``, ``predict``, ``eval-grid``,
``bench-table``, ``tune``, ``theory-check``.

Every subcommand accepts ``--config FILE`` (plain text, one ``key=value``
per line, ``#`` comments) plus per-key flags; flags override the file.
Unknown keys are rejected with the list of valid keys, missing required
keys with an example snippet.

All output is CSV.  Comment lines (``# ...``) record the resolved
configuration, the master seed, and wall-clock times; the body below them
is deterministic, so identical configs produce byte-identical bodies.

Exit codes: 0 success, 1 usage or config error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import designs, ratecheck
from .benchmarks import by_name
from .errors import (
    ConfigError,
    DomainError,
    FitError,
    MetricError,
    ModelFormatError,
    SingularMatrixError,
    TrainingError,
)
from .evaluation import TuneGrid, benchmark_table, cross_validate
from .gp import GpModel, fit
from .kernels import MultivariateKernel, kernel1d_from_config
from .modelio import load_model, save_model
from .pursuit import PpgprModel, TrainConfig, default_node_count, train

__all__ = ["main"]

_USAGE_ERRORS = (ConfigError, DomainError, ModelFormatError)
_NUMERICAL_ERRORS = (SingularMatrixError, FitError, TrainingError, MetricError)


@dataclass(frozen=True)
class Key:
    """One config entry: name, type tag, default (as text), requiredness."""

    name: str
    kind: str  # str | int | float | bool | ints | floats | strs | kernels
    default: str | None = None
    required: bool = False
    example: str = ""
    help: str = ""


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean (1/0/true/false), got {raw!r}")


def _parse_kernels(raw: str):
    """family:nu:phi triples separated by ';' (nu ignored for gaussian)."""
    out = []
    for part in raw.split(";"):
        fields = part.strip().split(":")
        if len(fields) != 3:
            raise ConfigError(
                f"kernel spec {part!r} is not family:nu:phi (e.g. matern:2.5:1.0)"
            )
        family = fields[0].strip()
        nu = None if fields[1].strip() in ("", "-") else float(fields[1])
        phi = float(fields[2])
        out.append((family, nu, phi))
    return tuple(out)


def _parse_value(key: Key, raw: str):
    try:
        if key.kind == "str":
            return raw
        if key.kind == "int":
            return int(raw)
        if key.kind == "float":
            return float(raw)
        if key.kind == "bool":
            return _parse_bool(raw)
        if key.kind == "ints":
            return tuple(int(x) for x in raw.split(",") if x.strip() != "")
        if key.kind == "floats":
            return tuple(float(x) for x in raw.split(",") if x.strip() != "")
        if key.kind == "strs":
            return tuple(x.strip() for x in raw.split(",") if x.strip() != "")
        if key.kind == "kernels":
            return _parse_kernels(raw)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"bad value for {key.name!r}: {raw!r} ({exc})") from None
    raise ConfigError(f"unknown key kind {key.kind!r}")


_KERNEL_KEYS = [
    Key("family", "str", default="matern", example="family=matern"),
    Key("nu", "float", default="2.5", example="nu=2.5"),
    Key("phi", "float", default="1.0", example="phi=1.0"),
]
_TRAIN_KEYS = [
    Key("eta", "float", default="1e-9", example="eta=1e-9"),
    Key("epochs", "int", default="150", example="epochs=150"),
    Key("M", "int", example="M=35", help="defaults to min(n_train-5, 5d)"),
    Key("early_stop_rel", "float", default="0.04", example="early_stop_rel=0.04",
        help="10-epoch relative-improvement threshold; 0 disables early stop"),
    Key("nugget", "float", default="1e-6", example="nugget=1e-6"),
    Key("center", "bool", default="1", example="center=1"),
]

SUBCOMMANDS: dict[str, list[Key]] = {
    "design": [
        Key("generator", "str", required=True, example="generator=halton",
            help="halton | randomized-lhs | uniform-random"),
        Key("n", "int", required=True, example="n=40"),
        Key("d", "int", required=True, example="d=8"),
        Key("seed", "int", default="0", example="seed=0"),
        Key("out", "str", example="out=design.csv"),
    ],
    "fit": [
        Key("function", "str", required=True, example="function=borehole"),
        Key("method", "str", default="ppgpr", example="method=ppgpr",
            help="gp-iso | gp-pro | gp-add | ppgpr"),
        Key("n_train", "int", example="n_train=40", help="defaults to 5 d"),
        *_KERNEL_KEYS,
        *_TRAIN_KEYS,
        Key("seed", "int", default="0", example="seed=0"),
        Key("model_out", "str", required=True, example="model_out=model.txt"),
        Key("trace_out", "str", example="trace_out=trace.csv"),
        Key("out", "str", example="out=fit.csv"),
    ],
    "predict": [
        Key("model", "str", required=True, example="model=model.txt"),
        Key("points", "str", required=True, example="points=points.csv"),
        Key("out", "str", example="out=predictions.csv"),
    ],
    "eval-grid": [
        Key("function", "str", required=True, example="function=xy-plus-x2"),
        Key("resolution", "int", default="101", example="resolution=101"),
        Key("model", "str", example="model=model.txt",
            help="optional: tabulate this model instead of the true function"),
        Key("out", "str", example="out=grid.csv"),
    ],
    "bench-table": [
        Key("functions", "strs", required=True,
            example="functions=borehole,otl-circuit"),
        Key("methods", "strs", required=True,
            example="methods=gp-iso,gp-pro,ppgpr"),
        Key("seeds", "ints", default="0", example="seeds=0,1,2"),
        Key("n_train", "int", example="n_train=40", help="defaults to 5 d"),
        *_KERNEL_KEYS,
        *_TRAIN_KEYS,
        Key("out", "str", example="out=table.csv"),
    ],
    "tune": [
        Key("function", "str", required=True, example="function=borehole"),
        Key("n_train", "int", example="n_train=40", help="defaults to 5 d"),
        Key("etas", "floats", default="1e-7,1e-8,1e-9,1e-10",
            example="etas=1e-7,1e-8,1e-9,1e-10"),
        Key("Ms", "ints", example="Ms=35", help="defaults to min(n_train-5, 5d)"),
        Key("kernels", "kernels", default="matern:2.5:1.0",
            example="kernels=matern:2.5:1.0;gaussian:-:0.5"),
        Key("folds", "int", default="5", example="folds=5"),
        Key("epochs", "int", default="150", example="epochs=150"),
        Key("early_stop_rel", "float", default="0.04",
            example="early_stop_rel=0.04",
            help="10-epoch relative-improvement threshold; 0 disables early stop"),
        Key("nugget", "float", default="1e-6", example="nugget=1e-6"),
        Key("center", "bool", default="1", example="center=1"),
        Key("seed", "int", default="0", example="seed=0"),
        Key("out", "str", example="out=tune.csv"),
    ],
    "theory-check": [
        Key("structures", "strs", default="additive,isotropic",
            example="structures=additive,isotropic"),
        Key("nu", "float", default="2.5", example="nu=2.5"),
        Key("d", "int", default="2", example="d=2"),
        Key("n_list", "ints", default="10,20,40,80", example="n_list=10,20,40,80"),
        Key("trials", "int", default="0", example="trials=2",
            help="prior draws per n; 0 skips the sup-error column"),
        Key("nugget", "float", default="1e-10", example="nugget=1e-10"),
        Key("seed", "int", default="0", example="seed=0"),
        Key("out", "str", example="out=rates.csv"),
    ],
}


def load_config_file(path: str) -> dict[str, str]:
    """Parse a key=value config file; '#' starts a comment line."""
    out: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(
                f"{path}:{lineno}: expected key=value, got {stripped!r}"
            )
        k, v = stripped.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def resolve_config(sub: str, file_cfg: dict[str, str], flag_cfg: dict[str, str]) -> dict:
    """Merge defaults < config file < flags into a typed config dict."""
    keys = {k.name: k for k in SUBCOMMANDS[sub]}
    for name in file_cfg:
        if name not in keys:
            raise ConfigError(
                f"unknown config key {name!r} for '{sub}'; valid keys: "
                + ", ".join(sorted(keys))
            )
    resolved: dict = {}
    raw: dict[str, str] = {}
    for name, key in keys.items():
        if key.default is not None:
            raw[name] = key.default
    raw.update(file_cfg)
    raw.update({k: v for k, v in flag_cfg.items() if v is not None})
    missing = [k for k in keys.values() if k.required and k.name not in raw]
    if missing:
        snippet = "\n".join(k.example for k in SUBCOMMANDS[sub] if k.example)
        raise ConfigError(
            "missing required key(s): "
            + ", ".join(k.name for k in missing)
            + f"\nexample config for '{sub}':\n{snippet}"
        )
    for name, value in raw.items():
        resolved[name] = _parse_value(keys[name], value)
    for name in keys:
        resolved.setdefault(name, None)
    return resolved


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _csv_line(values) -> str:
    return ",".join(_fmt(v) for v in values)


def _header_comments(sub: str, cfg: dict) -> list[str]:
    lines = [f"# ppgp {sub}"]
    for name in sorted(cfg):
        value = cfg[name]
        if value is None:
            continue
        if isinstance(value, tuple):
            rendered = ",".join(
                ":".join("-" if f is None else _fmt(f) for f in v)
                if isinstance(v, tuple) else _fmt(v)
                for v in value
            )
        else:
            rendered = _fmt(value)
        lines.append(f"# config {name}={rendered}")
    if "seed" in cfg and cfg["seed"] is not None:
        lines.append(f"# master seed={cfg['seed']}")
    elif "seeds" in cfg and cfg["seeds"] is not None:
        lines.append(f"# master seeds={','.join(str(s) for s in cfg['seeds'])}")
    return lines


def _emit(path: str | None, comments: list[str], body: str) -> None:
    text = "".join(c + "\n" for c in comments) + body
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _read_points_csv(path: str) -> np.ndarray:
    rows = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read points file {path!r}: {exc}") from None
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split(",")
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            continue  # header line
    if not rows:
        raise ConfigError(f"no numeric rows found in {path!r}")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ConfigError(f"ragged rows in {path!r}: widths {sorted(widths)}")
    return np.array(rows)


def _build_model(cfg: dict, seed: int):
    """Fit the configured model on a Halton training design; returns
    (model, U_train, Y_train, resolved M or None)."""
    fn = by_name(cfg["function"])
    d = fn.dim
    n_train = cfg["n_train"] if cfg.get("n_train") else 5 * d
    U = designs.halton(n_train, d).points
    Y = fn.eval_unit(U)
    base = kernel1d_from_config(
        {"family": cfg["family"], "nu": cfg["nu"], "phi": cfg["phi"]}
    )
    if cfg["method"] == "ppgpr":
        M = cfg["M"] if cfg.get("M") else default_node_count(n_train, d)
        weight_seed = int(np.random.SeedSequence(seed).spawn(2)[1].generate_state(1)[0])
        tc = TrainConfig(
            eta=cfg["eta"], epochs=cfg["epochs"], M=M,
            early_stop_rel=cfg["early_stop_rel"], seed=weight_seed,
            nugget=cfg["nugget"], center=cfg["center"],
        )
        model = train(U, Y, base, tc)
        return model, U, Y, M
    structure = {"gp-iso": "isotropic", "gp-pro": "product", "gp-add": "additive"}.get(
        cfg["method"]
    )
    if structure is None:
        raise ConfigError(
            f"unknown method {cfg['method']!r}; valid: gp-iso, gp-pro, gp-add, ppgpr"
        )
    kernel = MultivariateKernel(base=base, structure=structure, dim=d)
    model = fit(U, Y, kernel, nugget=cfg["nugget"], center=cfg["center"])
    return model, U, Y, None


def _run_design(cfg: dict) -> tuple[str, list[str]]:
    gen = cfg["generator"]
    if gen == "halton":
        design = designs.halton(cfg["n"], cfg["d"])
    elif gen == "randomized-lhs":
        design = designs.randomized_lhs(cfg["n"], cfg["d"], cfg["seed"])
    elif gen == "uniform-random":
        design = designs.uniform_random(cfg["n"], cfg["d"], cfg["seed"])
    else:
        raise ConfigError(
            f"unknown generator {gen!r}; valid: halton, randomized-lhs, uniform-random"
        )
    lines = [_csv_line([f"x{j + 1}" for j in range(design.d)])]
    for row in design.points:
        lines.append(_csv_line(row))
    return "\n".join(lines) + "\n", []


def _run_fit(cfg: dict) -> tuple[str, list[str]]:
    t0 = time.perf_counter()
    model, U, Y, M = _build_model(cfg, cfg["seed"])
    wall_ms = 1e3 * (time.perf_counter() - t0)
    save_model(model, cfg["model_out"])
    comments = [f"# wall_ms={wall_ms:.1f}", f"# model written to {cfg['model_out']}"]
    if isinstance(model, PpgprModel):
        if cfg.get("trace_out"):
            trace_lines = ["epoch,loss"]
            trace_lines += [_csv_line([e, l]) for e, l in model.trace]
            with open(cfg["trace_out"], "w", encoding="utf-8", newline="\n") as fh:
                fh.write("\n".join(trace_lines) + "\n")
            comments.append(f"# trace written to {cfg['trace_out']}")
        body = "\n".join([
            "method,function,n_train,M,best_epoch,epochs_run,loss,diverged",
            _csv_line([
                cfg["method"], cfg["function"], U.shape[0], M,
                model.best_epoch, len(model.trace),
                model.trace[model.best_epoch][1], int(model.diverged),
            ]),
        ]) + "\n"
    else:
        body = "\n".join([
            "method,function,n_train,loss",
            _csv_line([
                cfg["method"], cfg["function"], U.shape[0], model.log_likelihood(),
            ]),
        ]) + "\n"
    return body, comments


def _run_predict(cfg: dict) -> tuple[str, list[str]]:
    model = load_model(cfg["model"])
    pts = _read_points_csv(cfg["points"])
    d = model.dim
    if pts.shape[1] != d:
        raise ConfigError(
            f"points have {pts.shape[1]} columns but the model expects {d}"
        )
    preds = model.predict(pts)
    lines = [_csv_line([f"x{j + 1}" for j in range(d)] + ["prediction"])]
    for row, p in zip(pts, preds):
        lines.append(_csv_line(list(row) + [p]))
    return "\n".join(lines) + "\n", []


def _run_eval_grid(cfg: dict) -> tuple[str, list[str]]:
    fn = by_name(cfg["function"])
    if fn.dim != 2:
        raise ConfigError(
            f"eval-grid needs a 2-input function, {cfg['function']!r} has {fn.dim}"
        )
    res = cfg["resolution"]
    if res < 2:
        raise ConfigError("resolution must be at least 2")
    axis = np.linspace(0.0, 1.0, res)
    g1, g2 = np.meshgrid(axis, axis, indexing="ij")
    pts = np.stack([g1.ravel(), g2.ravel()], axis=1)
    if cfg.get("model"):
        model = load_model(cfg["model"])
        vals = model.predict(pts)
        source = "model"
    else:
        vals = fn.eval_unit(pts)
        source = "function"
    lines = [_csv_line(["x1", "x2", "value"])]
    for (u1, u2), v in zip(pts, vals):
        lines.append(_csv_line([u1, u2, v]))
    return "\n".join(lines) + "\n", [f"# values from {source}"]


def _run_bench_table(cfg: dict) -> tuple[str, list[str]]:
    t0 = time.perf_counter()
    reports = benchmark_table(
        cfg["functions"], cfg["methods"], cfg["seeds"],
        n_train=cfg.get("n_train"),
        family=cfg["family"], nu=cfg["nu"], phi=cfg["phi"],
        eta=cfg["eta"], epochs=cfg["epochs"], M=cfg.get("M"),
        early_stop_rel=cfg["early_stop_rel"],
        nugget=cfg["nugget"], center=cfg["center"],
    )
    wall_ms = 1e3 * (time.perf_counter() - t0)
    lines = [_csv_line([
        "function", "method", "seed", "n_train", "n_test",
        "family", "nu", "phi", "eta", "epochs", "M", "centered", "diverged",
        "rmse", "rmse_abs",
    ])]
    for r in reports:
        h = r.hyperparameters

        def cell(name):
            v = h.get(name)
            return "" if v is None else v

        lines.append(_csv_line([
            r.function, r.method, r.seed, r.n_train, r.n_test,
            cell("family"), cell("nu"), cell("phi"),
            cell("eta"), cell("epochs"), cell("M"),
            int(r.centered), int(r.diverged), r.rmse, r.rmse_abs,
        ]))
    return "\n".join(lines) + "\n", [f"# wall_ms={wall_ms:.1f}"]


def _run_tune(cfg: dict) -> tuple[str, list[str]]:
    fn = by_name(cfg["function"])
    d = fn.dim
    n_train = cfg["n_train"] if cfg.get("n_train") else 5 * d
    U = designs.halton(n_train, d).points
    Y = fn.eval_unit(U)
    Ms = cfg["Ms"] if cfg.get("Ms") else (default_node_count(n_train, d),)
    grid = TuneGrid(etas=cfg["etas"], Ms=Ms, kernels=cfg["kernels"], folds=cfg["folds"])
    t0 = time.perf_counter()
    best, table = cross_validate(
        U, Y, grid, cfg["seed"],
        epochs=cfg["epochs"], early_stop_rel=cfg["early_stop_rel"],
        nugget=cfg["nugget"], center=cfg["center"],
    )
    wall_ms = 1e3 * (time.perf_counter() - t0)
    lines = [_csv_line([
        "kind", "grid_index", "eta", "M", "family", "nu", "phi", "fold",
        "rmse", "mean_rmse",
    ])]
    for row in table:
        lines.append(_csv_line([
            "fold", row["grid_index"], row["eta"], row["M"], row["family"],
            "" if row["nu"] is None else row["nu"], row["phi"],
            row["fold"], row["rmse"], "",
        ]))
    family, nu, phi = best["kernel"]
    lines.append(_csv_line([
        "best", "", best["eta"], best["M"], family,
        "" if nu is None else nu, phi, "", "", best["mean_rmse"],
    ]))
    return "\n".join(lines) + "\n", [f"# wall_ms={wall_ms:.1f}"]


def _run_theory_check(cfg: dict) -> tuple[str, list[str]]:
    t0 = time.perf_counter()
    lines = [_csv_line([
        "record", "structure", "metric", "n", "max_p", "sup_err",
        "slope", "intercept", "r2",
    ])]
    for structure in cfg["structures"]:
        rows = ratecheck.sup_error_curve(
            structure, cfg["nu"], cfg["d"], cfg["n_list"],
            trials=cfg["trials"], seed=cfg["seed"], nugget=cfg["nugget"],
        )
        for row in rows:
            lines.append(_csv_line([
                "curve", structure, "", row.n, row.max_p,
                "" if np.isnan(row.sup_err) else row.sup_err, "", "", "",
            ]))
        fits = [("max_p", [(r.n, r.max_p) for r in rows])]
        if cfg["trials"] > 0:
            fits.append(("sup_err", [(r.n, r.sup_err) for r in rows]))
        for metric, pairs in fits:
            rf = ratecheck.rate_fit(pairs)
            lines.append(_csv_line([
                "fit", structure, metric, "", "", "",
                rf.slope, rf.intercept, rf.r2,
            ]))
    wall_ms = 1e3 * (time.perf_counter() - t0)
    return "\n".join(lines) + "\n", [f"# wall_ms={wall_ms:.1f}"]


_RUNNERS = {
    "design": _run_design,
    "fit": _run_fit,
    "predict": _run_predict,
    "eval-grid": _run_eval_grid,
    "bench-table": _run_bench_table,
    "tune": _run_tune,
    "theory-check": _run_theory_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppgp",
        description="Gaussian-process and projection-pursuit surrogate modeling.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, keys in SUBCOMMANDS.items():
        p = sub.add_parser(name, help=f"{name} (keys: {', '.join(k.name for k in keys)})")
        p.add_argument("--config", default=None, help="key=value config file")
        for key in keys:
            p.add_argument(
                f"--{key.name.replace('_', '-')}",
                dest=f"key_{key.name}",
                default=None,
                help=key.help or f"{key.kind}"
                + (f" (default {key.default})" if key.default else ""),
            )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems; remap to our usage code
        return 0 if exc.code in (0, None) else 1
    sub = args.subcommand
    try:
        file_cfg = load_config_file(args.config) if args.config else {}
        flag_cfg = {
            k[len("key_"):]: v for k, v in vars(args).items() if k.startswith("key_")
        }
        cfg = resolve_config(sub, file_cfg, flag_cfg)
        body, extra = _RUNNERS[sub](cfg)
        comments = _header_comments(sub, cfg) + extra
        _emit(cfg.get("out"), comments, body)
        return 0
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
