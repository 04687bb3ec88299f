"""
Command-line experiment runner.

Every catalog experiment is a subcommand whose flags mirror its parameters.
``run CONFIG`` executes a YAML config; any flags after the config path
override its values. Parameter precedence is defaults < config < flags.

Exit codes: 0 success, 1 bad input, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import platform
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import jsonschema
import numpy as np
import yaml

from . import __version__
from .experiments import CATALOG, Param, Table, catalog_schema, default_parameters, get_experiment, json_schema

OUTPUT_DIR_ENV = "QWALKLAB_OUTPUT_DIR"
EXIT_OK, EXIT_BAD_INPUT, EXIT_RUNTIME = 0, 1, 2


class BadInput(Exception):
    """Invalid user input: unknown experiment, bad parameter or bad config."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 by default
        raise BadInput(f"{self.prog}: {message}")


def _add_param(sp: argparse.ArgumentParser, p: Param) -> None:
    flag = "--" + p.name.replace("_", "-")
    kw: dict[str, Any] = {"dest": p.name, "default": argparse.SUPPRESS, "help": f"{p.help} (default {p.default})"}
    if p.type == "boolean":
        sp.add_argument(flag, action=argparse.BooleanOptionalAction, **kw)
        return
    if p.type == "number-list":
        sp.add_argument(flag, type=float, nargs="+", **kw)
        return
    sp.add_argument(flag, type={"number": float, "integer": int, "string": str}[p.type], choices=p.choices, **kw)


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    sp.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS, help="output format (default csv)")
    sp.add_argument("--output", "-o", default=argparse.SUPPRESS, help="output file path")
    sp.add_argument("--config", default=argparse.SUPPRESS, help="YAML config; flags override its values")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qwalklab", description="Quantum walk experiment runner.")
    parser.add_argument("--version", action="version", version=f"qwalklab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    ls = sub.add_parser("list-experiments", help="print the catalog as JSON Schema")
    ls.add_argument("name", nargs="?", help="print only this experiment")
    ex = sub.add_parser("example-config", help="print a YAML config filled with defaults")
    ex.add_argument("name")
    run = sub.add_parser("run", help="run a YAML config; trailing flags override it")
    run.add_argument("config")
    run.add_argument("overrides", nargs=argparse.REMAINDER)
    for name, e in CATALOG.items():
        sp = sub.add_parser(name, help=e.description, description=e.description)
        for p in e.params:
            _add_param(sp, p)
        _add_common(sp)
    return parser


def load_config(path: str | Path) -> dict[str, Any]:
    """
    Read and validate a YAML config against its experiment schema.

    Raises
    ------
    BadInput
        If the file is unreadable, malformed or fails validation.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise BadInput(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise BadInput(f"config {path} is not valid YAML: {exc}") from exc
    if not isinstance(cfg, dict) or "experiment" not in cfg:
        raise BadInput(f"config {path} must be a mapping with an 'experiment' key")
    validate_config(cfg)
    return cfg


def validate_config(cfg: dict[str, Any]) -> None:
    try:
        schema = json_schema(cfg["experiment"])
    except KeyError as exc:
        raise BadInput(str(exc.args[0])) from exc
    try:
        jsonschema.validate(cfg, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise BadInput(f"invalid config at {where}: {exc.message}") from exc


def resolve(name: str, config: dict[str, Any] | None, flags: dict[str, Any]) -> dict[str, Any]:
    """Merge defaults, config and flags into a validated run description."""
    if config is not None and config["experiment"] != name:
        raise BadInput(f"config is for {config['experiment']!r}, not {name!r}")
    cfg = config or {}
    params = default_parameters(name)
    params.update(cfg.get("parameters") or {})
    meta_keys = ("seed", "format", "output", "config")
    params.update({k: v for k, v in flags.items() if k not in meta_keys})
    run = {
        "experiment": name,
        "seed": flags.get("seed", cfg.get("seed", 0)),
        "format": flags.get("format", cfg.get("format", "csv")),
        "parameters": params,
    }
    out = flags.get("output", cfg.get("output_path"))
    if out is not None:
        run["output_path"] = out
    validate_config(run)
    for k, v in params.items():
        vals = v if isinstance(v, list) else [v]
        if any(isinstance(x, float) and not math.isfinite(x) for x in vals):
            raise BadInput(f"parameter {k} must be finite")
    return run


def default_output(name: str, fmt: str) -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "results")) / f"{name}.{fmt}"


def _cell(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _json_value(v: Any) -> Any:
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        v = float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def render(table: Table, fmt: str) -> str:
    """Serialize a table as CSV (header row first) or JSON."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.columns)
        for row in table.rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue()
    doc = {"columns": table.columns, "rows": _json_value(table.rows), "summary": _json_value(table.summary)}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def execute(run: dict[str, Any]) -> tuple[Table, Path, Path]:
    """
    Run a resolved description and write the data file and its ``.meta.json`` sidecar.

    Raises
    ------
    BadInput
        If the experiment rejects its parameters.
    OSError
        If an output file cannot be written.
    """
    e = get_experiment(run["experiment"])
    t0 = time.perf_counter()
    try:
        table = e.run(dict(run["parameters"]), int(run["seed"]))
    except (ValueError, KeyError) as exc:
        raise BadInput(f"{e.name}: {exc}") from exc
    wall = time.perf_counter() - t0
    path = Path(run["output_path"]) if "output_path" in run else default_output(e.name, run["format"])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render(table, run["format"]))
    meta = {
        "experiment": e.name,
        "parameters": run["parameters"],
        "angles": "degrees",
        "seed": run["seed"],
        "format": run["format"],
        "data_file": path.name,
        "software": {"qwalklab": __version__, "python": platform.python_version(), "numpy": np.__version__},
        "wall_time_s": wall,
        "summary": table.summary,
    }
    meta_path = path.with_name(path.name + ".meta.json")
    meta_path.write_text(json.dumps(_json_value(meta), indent=1, sort_keys=True) + "\n")
    return table, path, meta_path


def _dispatch(argv: Sequence[str]) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    cmd = args.pop("command")
    if cmd == "list-experiments":
        name = args.get("name")
        if name is not None:
            try:
                doc = json_schema(name)
            except KeyError as exc:
                raise BadInput(str(exc.args[0])) from exc
        else:
            doc = catalog_schema()
        print(json.dumps(doc, indent=1))
        return EXIT_OK
    if cmd == "example-config":
        try:
            params = default_parameters(args["name"])
        except KeyError as exc:
            raise BadInput(str(exc.args[0])) from exc
        print(yaml.safe_dump({"experiment": args["name"], "seed": 0, "format": "csv", "parameters": params},
                             sort_keys=False), end="")
        return EXIT_OK
    if cmd == "run":
        cfg = load_config(args["config"])
        return _dispatch([cfg["experiment"], "--config", args["config"], *args["overrides"]])
    config = load_config(args["config"]) if "config" in args else None
    run = resolve(cmd, config, args)
    table, path, meta_path = execute(run)
    print(json.dumps(_json_value({"output": str(path), "meta": str(meta_path), "summary": table.summary})))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        return _dispatch(list(sys.argv[1:] if argv is None else argv))
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
