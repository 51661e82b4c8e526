"""Command-line runner: ``dyncov <scenario> [--config FILE] [--seed N] [--reps N] [--out DIR] [--format csv|json]``.

Every run writes ``<out>/<scenario>.csv`` (raw samples, fixed columns) and
``<out>/<scenario>.json`` (resolved config, predictions, estimates and a
verdict per claim). The exit status is 0 when every verdict passes, 1 when
one fails and 2 for an invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

from .analytic import NeverDetected
from .config import ConfigError
from .scenarios import SCENARIOS, ScenarioResult, resolve

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


def _jsonable(obj: Any) -> Any:
    """Plain JSON types; non-finite floats become the strings ``"inf"``, ``"-inf"``, ``"nan"``."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def summary(cfg, result: ScenarioResult) -> dict:
    out = {
        "scenario": cfg.scenario,
        "seed": cfg.seed,
        "passed": result.passed,
        "claims": [c.to_dict() for c in result.claims],
        "csv_columns": list(result.columns),
        "config": cfg.to_dict(),
    }
    for key, value in result.extras.items():
        out.setdefault(key, value)
    return _jsonable(out)


def render_csv(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_jsonable(v) for v in row])
    return buf.getvalue()


def claims_csv(result: ScenarioResult) -> str:
    cols = ["name", "predicted", "empirical", "se", "ci_low", "ci_high", "tolerance", "passed", "note"]
    rows = []
    for c in result.claims:
        lo, hi = c.ci if c.ci is not None else (None, None)
        rows.append([c.name, c.predicted, c.empirical, c.se, lo, hi, c.tolerance, int(c.passed), c.note])
    return render_csv(cols, [["" if v is None else v for v in r] for r in rows])


def run(scenario: str, file_dict: dict | None = None, overrides: dict | None = None) -> tuple[int, dict, ScenarioResult]:
    """Resolve the config, run the scenario and write both output files."""
    cfg = resolve(scenario, file_dict, overrides)
    result = SCENARIOS[scenario].run(cfg)
    doc = summary(cfg, result)
    out_dir = Path(cfg.output.dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{scenario}.csv").write_text(render_csv(result.columns, result.rows), encoding="utf-8",
                                              newline="")
    (out_dir / f"{scenario}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                                               encoding="utf-8")
    return (EXIT_OK if result.passed else EXIT_FAILED), doc, result


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dyncov", description=__doc__.splitlines()[0])
    parser.add_argument("scenario", choices=sorted(SCENARIOS), metavar="scenario",
                        help="one of: " + ", ".join(sorted(SCENARIOS)))
    parser.add_argument("--config", type=Path, help="JSON config file (scenario defaults fill the rest)")
    parser.add_argument("--seed", type=int, help="base seed (overrides the config file)")
    parser.add_argument("--reps", type=int, help="replications / detection samples")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", choices=("csv", "json"),
                        help="format of the verdict report echoed to stdout")
    return parser


def _load(path: Path) -> dict:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("--config", str(exc)) from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("--config", f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("--config", "top level must be an object")
    return obj


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides: dict = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.reps is not None:
        overrides["replications"] = args.reps
    output = {k: v for k, v in (("dir", args.out), ("format", args.format)) if v is not None}
    if output:
        overrides["output"] = output
    try:
        file_dict = _load(args.config) if args.config else {}
        file_dict.setdefault("scenario", args.scenario)
        status, doc, result = run(args.scenario, file_dict, overrides)
    except ConfigError as exc:
        print(f"dyncov: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NeverDetected as exc:
        print(f"dyncov: invalid config: intruder: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if doc["config"]["output"]["format"] == "csv":
        sys.stdout.write(claims_csv(result))
    else:
        sys.stdout.write(json.dumps({k: doc[k] for k in ("scenario", "seed", "passed", "claims")},
                                    indent=2, sort_keys=True) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
