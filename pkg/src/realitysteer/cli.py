"""Command-line front end: trial ensembles, parameter sweeps, and the
verification suite.

Subcommands::

    realitysteer run <config.json>    [--out P] [--threads N] [--trials N] [--format json|csv]
    realitysteer verify [--suite a,b] [--seed N] [--out P] [--format json|csv]
    realitysteer sweep <config.json>  [--out P] [--threads N] [--trials N] [--format json|csv]

Exit codes: 0 success / all checks passed, 1 verification failure,
2 configuration or usage error, 3 runtime error.  ``--threads`` defaults to
the ``REALITY_STEER_THREADS`` environment variable.

Config files are JSON.  A run config holds a ``scenario`` block plus
``num_trials`` / ``output_path`` / ``emit_per_trial``; a sweep config adds a
``sweep`` block with ``axis`` (one of lambda, env_qubits, accessible_k,
weight_c0sq), ``values``, ``trials_per_point``, and (for accessible_k)
``num_record_qubits``.  Scenario keys: num_alive, num_dead, weights (real
amplitudes or [re, im] pairs; omitted means equal weights), env_qubits,
encoding (plain|tagged), observe_variant (a|b|c), participation
(all|dead_only|alive_only), nonlinear_lambda, rng_seed.

Reports are JSON documents ``{"payload": ..., "metadata": ...}``.  The
payload is fully determined by config and seed and serializes byte-
identically across runs; timestamps live only in the metadata block.
"""

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .protocol import (
    BranchStructure,
    Participation,
    RecordEncoding,
    Scenario,
    TrialEngine,
    decoupling_sweep,
    run_ensemble,
    scenario_layout,
)
from .verify import CHECK_NAMES, DEFAULT_SEED, expected_post_probabilities, run_checks

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

SWEEP_AXES = ("lambda", "env_qubits", "accessible_k", "weight_c0sq")


class ConfigError(ValueError):
    """Configuration problem; message names the offending key."""


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario
    num_trials: int
    output_path: "str | None"
    emit_per_trial: bool


@dataclass(frozen=True)
class SweepConfig:
    base: Scenario
    axis: str
    values: tuple
    trials_per_point: int
    num_record_qubits: int = 10


def _get(mapping, key, expected, context, default=None, required=False):
    if key not in mapping:
        if required:
            raise ConfigError(f"{context}.{key}: missing required key")
        return default
    value = mapping[key]
    if expected is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if expected in (int, float) and isinstance(value, bool):
        raise ConfigError(
            f"{context}.{key}: expected {expected.__name__}, got bool"
        )
    if expected is not None and not isinstance(value, expected):
        raise ConfigError(
            f"{context}.{key}: expected {getattr(expected, '__name__', expected)}, "
            f"got {type(value).__name__}"
        )
    return value


def _parse_weights(raw, num_branches, context):
    if raw is None:
        return np.full(num_branches, 1.0 / math.sqrt(num_branches))
    if not isinstance(raw, list) or len(raw) != num_branches:
        raise ConfigError(
            f"{context}.weights: expected a list of {num_branches} amplitudes"
        )
    weights = []
    for entry in raw:
        if isinstance(entry, (int, float)) and not isinstance(entry, bool):
            weights.append(complex(entry))
        elif isinstance(entry, list) and len(entry) == 2:
            weights.append(complex(entry[0], entry[1]))
        else:
            raise ConfigError(
                f"{context}.weights: entries must be numbers or [re, im] pairs"
            )
    total = sum(abs(w) ** 2 for w in weights)
    if abs(total - 1.0) > 1e-10:
        raise ConfigError(
            f"{context}.weights: squared amplitudes sum to {total:.6f}, expected 1"
        )
    return np.array(weights)


def parse_scenario(block, context: str = "scenario") -> Scenario:
    if not isinstance(block, dict):
        raise ConfigError(f"{context}: expected an object")
    known = {
        "num_alive", "num_dead", "weights", "env_qubits", "encoding",
        "observe_variant", "participation", "nonlinear_lambda", "rng_seed",
    }
    for key in block:
        if key not in known:
            raise ConfigError(f"{context}.{key}: unknown key")
    num_alive = _get(block, "num_alive", int, context, default=1)
    num_dead = _get(block, "num_dead", int, context, default=1)
    if num_alive < 1:
        raise ConfigError(f"{context}.num_alive: must be >= 1")
    if num_dead < 1:
        raise ConfigError(f"{context}.num_dead: must be >= 1")
    weights = _parse_weights(block.get("weights"), num_alive + num_dead, context)
    env_qubits = _get(block, "env_qubits", int, context, default=1)
    if env_qubits < 1:
        raise ConfigError(f"{context}.env_qubits: must be >= 1")
    encoding_name = _get(block, "encoding", str, context, default="plain")
    try:
        encoding = RecordEncoding(encoding_name)
    except ValueError:
        raise ConfigError(f"{context}.encoding: must be 'plain' or 'tagged'") from None
    variant = _get(block, "observe_variant", str, context, default="a")
    if variant not in ("a", "b", "c"):
        raise ConfigError(f"{context}.observe_variant: must be one of a, b, c")
    participation_name = _get(block, "participation", str, context, default="all")
    try:
        participation = Participation(participation_name)
    except ValueError:
        raise ConfigError(
            f"{context}.participation: must be one of all, dead_only, alive_only"
        ) from None
    lambda_raw = block.get("nonlinear_lambda")
    if lambda_raw is not None:
        if isinstance(lambda_raw, bool) or not isinstance(lambda_raw, (int, float)):
            raise ConfigError(f"{context}.nonlinear_lambda: expected a number or null")
        if not np.isfinite(lambda_raw) or lambda_raw < 0:
            raise ConfigError(f"{context}.nonlinear_lambda: must be finite and >= 0")
        lambda_raw = float(lambda_raw)
    rng_seed = _get(block, "rng_seed", int, context, default=0)
    try:
        scenario = Scenario(
            branch_structure=BranchStructure(num_alive, num_dead, weights),
            env_qubits=env_qubits,
            encoding=encoding,
            observe_variant=variant,
            participation=participation,
            nonlinear_lambda=lambda_raw,
            rng_seed=rng_seed,
        )
    except ValueError as error:
        # Scenario-level validation (e.g. the qubit budget) names the key that
        # most directly drives register size.
        message = str(error)
        if "budget" in message:
            raise ConfigError(
                f"{context}.env_qubits: {message} (reduce env_qubits or branches)"
            ) from None
        raise ConfigError(f"{context}: {message}") from None
    return scenario


def parse_config(path: str):
    """Parse a JSON config into a RunConfig or SweepConfig (the latter when a
    ``sweep`` block is present); all scenario invariants are enforced here."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = handle.read()
    except OSError as error:
        raise ConfigError(f"{path}: {error}") from None
    try:
        document = json.loads(raw)
    except json.JSONDecodeError as error:
        raise ConfigError(
            f"{path}:{error.lineno}:{error.colno}: invalid JSON ({error.msg})"
        ) from None
    if not isinstance(document, dict):
        raise ConfigError(f"{path}: top level must be an object")
    scenario = parse_scenario(document.get("scenario", {}), "scenario")
    if "sweep" in document:
        block = document["sweep"]
        if not isinstance(block, dict):
            raise ConfigError("sweep: expected an object")
        axis = _get(block, "axis", str, "sweep", required=True)
        if axis not in SWEEP_AXES:
            raise ConfigError(f"sweep.axis: must be one of {', '.join(SWEEP_AXES)}")
        values = _get(block, "values", list, "sweep", required=True)
        if not values:
            raise ConfigError("sweep.values: must be non-empty")
        trials_per_point = _get(block, "trials_per_point", int, "sweep", default=1000)
        if trials_per_point < 1:
            raise ConfigError("sweep.trials_per_point: must be >= 1")
        num_record_qubits = _get(block, "num_record_qubits", int, "sweep", default=10)
        if not 1 <= num_record_qubits <= 12:
            raise ConfigError("sweep.num_record_qubits: must be in 1..12")
        for value in values:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError("sweep.values: entries must be numbers")
        _validate_sweep_values(axis, values, scenario, num_record_qubits)
        return SweepConfig(
            base=scenario,
            axis=axis,
            values=tuple(values),
            trials_per_point=trials_per_point,
            num_record_qubits=num_record_qubits,
        )
    num_trials = _get(document, "num_trials", int, "config", default=1000)
    if num_trials < 1:
        raise ConfigError("config.num_trials: must be >= 1")
    output_path = _get(document, "output_path", str, "config")
    emit_per_trial = _get(document, "emit_per_trial", bool, "config", default=False)
    return RunConfig(scenario, num_trials, output_path, emit_per_trial)


def _validate_sweep_values(axis, values, base: Scenario, num_record_qubits: int):
    if axis == "lambda":
        if any(v < 0 for v in values):
            raise ConfigError("sweep.values: lambda values must be >= 0")
        if base.branch_structure.num_branches != 2:
            raise ConfigError("sweep.axis: lambda sweeps need a two-branch scenario")
    elif axis == "env_qubits":
        for v in values:
            if not float(v).is_integer() or v < 1:
                raise ConfigError("sweep.values: env_qubits values must be integers >= 1")
            parse_scenario_budget = replace(base, env_qubits=int(v))
            del parse_scenario_budget  # construction alone enforces the budget
    elif axis == "accessible_k":
        for v in values:
            if not float(v).is_integer() or not 0 <= v <= num_record_qubits:
                raise ConfigError(
                    f"sweep.values: accessible_k values must be integers in "
                    f"0..{num_record_qubits}"
                )
    elif axis == "weight_c0sq":
        if any(not 0 <= v <= 1 for v in values):
            raise ConfigError("sweep.values: weight_c0sq values must be in [0, 1]")
        if base.branch_structure.num_branches != 2:
            raise ConfigError("sweep.axis: weight sweeps need a two-branch scenario")


def _scenario_payload(scenario: Scenario) -> dict:
    return {
        "num_alive": scenario.branch_structure.num_alive,
        "num_dead": scenario.branch_structure.num_dead,
        "weights": [[float(w.real), float(w.imag)] for w in scenario.branch_structure.weights],
        "env_qubits": scenario.env_qubits,
        "encoding": scenario.encoding.value,
        "observe_variant": scenario.observe_variant,
        "participation": scenario.participation.value,
        "nonlinear_lambda": scenario.nonlinear_lambda,
        "rng_seed": scenario.rng_seed,
        "total_qubits": scenario_layout(scenario).total_qubits,
    }


def _ensemble_chunk(args):
    scenario, count, first = args
    return run_ensemble(scenario, count, first_trial=first)


def _run_trials(scenario: Scenario, num_trials: int, threads: int):
    """Per-trial seeding makes chunked parallel execution agree with serial."""
    if threads <= 1 or num_trials < 2 * threads:
        return run_ensemble(scenario, num_trials)
    chunk = math.ceil(num_trials / threads)
    jobs = [
        (scenario, min(chunk, num_trials - first), first)
        for first in range(0, num_trials, chunk)
    ]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(_ensemble_chunk, jobs))
    return [report for part in parts for report in part]


def _summarize(scenario: Scenario, reports) -> dict:
    structure = scenario.branch_structure
    labels = [structure.label(k) for k in range(structure.num_branches)]
    num = len(reports)
    pre_counts = {label: 0 for label in labels}
    post_counts = {label: 0 for label in labels}
    for report in reports:
        pre_counts[report.pre_outcome] += 1
        post_counts[report.post_outcome] += 1
    analytic = expected_post_probabilities(scenario)
    return {
        "num_trials": num,
        "pre_outcome_frequencies": {k: v / num for k, v in pre_counts.items()},
        "post_outcome_frequencies": {k: v / num for k, v in post_counts.items()},
        "analytic_post_probabilities": {
            label: float(analytic[k]) for k, label in enumerate(labels)
        },
        "erased_fraction": sum(r.erased for r in reports) / num,
        "memory_consistent_fraction": sum(r.memory_consistent for r in reports) / num,
        "mean_brain_purity_after_erase": float(
            np.mean([r.brain_purity_after_erase for r in reports])
        ),
        "mean_brain_entropy_bits": float(
            np.mean([r.brain_entropy_after_erase for r in reports])
        ),
    }


def canonical_payload_bytes(payload: dict) -> bytes:
    """Deterministic serialization of the primary report payload."""
    return json.dumps(payload, sort_keys=True, indent=2).encode("utf-8")


def _write_document(payload: dict, path: str):
    document = {
        "payload": payload,
        "metadata": {
            "created_utc": datetime.now(timezone.utc).isoformat(),
            "package_version": __version__,
        },
    }
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, sort_keys=True, indent=2)
        handle.write("\n")


def _write_csv_rows(path: str, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def cmd_run(config: RunConfig, out: "str | None" = None, threads: int = 1,
            trials: "int | None" = None, fmt: str = "json") -> int:
    num_trials = trials if trials is not None else config.num_trials
    reports = _run_trials(config.scenario, num_trials, threads)
    summary = _summarize(config.scenario, reports)
    payload = {
        "kind": "run",
        "config": {
            "scenario": _scenario_payload(config.scenario),
            "num_trials": num_trials,
            "emit_per_trial": config.emit_per_trial,
        },
        "summary": summary,
    }
    if config.emit_per_trial:
        payload["per_trial"] = [asdict(report) for report in reports]
    path = out or config.output_path or "run_report.json"
    if fmt == "csv":
        rows = [[key, json.dumps(value, sort_keys=True)] for key, value in sorted(summary.items())]
        _write_csv_rows(path, ["quantity", "value"], rows)
    else:
        _write_document(payload, path)
    post = summary["post_outcome_frequencies"]
    print(f"ran {num_trials} trials of a {config.scenario.branch_structure.num_branches}-branch scenario")
    for label in sorted(post):
        print(f"  post[{label}] = {post[label]:.4f}")
    print(f"report written to {path}")
    return EXIT_OK


def cmd_verify(suite, seed: int, out: "str | None" = None, fmt: str = "json") -> int:
    try:
        verdicts = run_checks(suite, rng_seed=seed)
    except KeyError as error:
        raise ConfigError(
            f"--suite: {error.args[0]}; known: {', '.join(CHECK_NAMES)}, all"
        ) from None
    width = max(len(v.check_name) for v in verdicts)
    for verdict in verdicts:
        status = "PASS" if verdict.passed else "FAIL"
        print(
            f"{status}  {verdict.check_name:<{width}}  metric={verdict.metric:.3e}  "
            f"tolerance={verdict.tolerance:.1e}"
        )
    if out:
        payload = {"kind": "verify", "seed": seed, "verdicts": [asdict(v) for v in verdicts]}
        if fmt == "csv":
            _write_csv_rows(
                out,
                ["check_name", "passed", "metric", "tolerance", "details"],
                [[v.check_name, v.passed, repr(v.metric), repr(v.tolerance), v.details] for v in verdicts],
            )
        else:
            _write_document(payload, out)
    return EXIT_OK if all(v.passed for v in verdicts) else EXIT_VERIFY_FAILED


def _sweep_rows(config: SweepConfig, threads: int, trials: "int | None") -> list:
    trials_per_point = trials if trials is not None else config.trials_per_point
    rows = []
    if config.axis == "accessible_k":
        table = decoupling_sweep(
            config.num_record_qubits,
            [int(v) for v in config.values],
            trials_per_point,
            config.base.rng_seed,
        )
        for value in config.values:
            results = table[int(value)]
            rows.append(
                {
                    "accessible_k": int(value),
                    "num_record_qubits": config.num_record_qubits,
                    "num_encodings": len(results),
                    "mean_conditional_trace_distance": float(
                        np.mean([r.conditional_trace_distance for r in results])
                    ),
                    "mean_leaked_bits": float(np.mean([r.leaked_bits for r in results])),
                    "feasible_fraction": float(
                        np.mean([1.0 if r.feasible else 0.0 for r in results])
                    ),
                }
            )
        return rows
    for value in config.values:
        if config.axis == "lambda":
            scenario = replace(config.base, nonlinear_lambda=float(value))
        elif config.axis == "env_qubits":
            scenario = replace(config.base, env_qubits=int(value))
        else:  # weight_c0sq
            scenario = replace(
                config.base,
                branch_structure=BranchStructure.two_branch(
                    math.sqrt(float(value)), math.sqrt(1.0 - float(value))
                ),
            )
        reports = _run_trials(scenario, trials_per_point, threads)
        summary = _summarize(scenario, reports)
        row = {
            config.axis: value,
            "num_trials": trials_per_point,
            "post_outcome_frequencies": summary["post_outcome_frequencies"],
            "analytic_post_probabilities": summary["analytic_post_probabilities"],
        }
        if config.axis == "env_qubits":
            engine = TrialEngine(scenario)
            row["brain_purity_after_erase"] = engine.brain_purity
            row["erase_exact"] = bool(abs(engine.brain_purity - 1.0) <= 1e-12)
        rows.append(row)
    return rows


def cmd_sweep(config: SweepConfig, out: "str | None" = None, threads: int = 1,
              trials: "int | None" = None, fmt: str = "json") -> int:
    rows = _sweep_rows(config, threads, trials)
    payload = {
        "kind": "sweep",
        "config": {
            "scenario": _scenario_payload(config.base),
            "axis": config.axis,
            "values": list(config.values),
            "trials_per_point": trials if trials is not None else config.trials_per_point,
            "num_record_qubits": config.num_record_qubits,
        },
        "rows": rows,
    }
    header = sorted({key for row in rows for key in row})
    print("  ".join(header))
    for row in rows:
        print("  ".join(json.dumps(row.get(key), sort_keys=True) for key in header))
    path = out or f"sweep_{config.axis}.json"
    if fmt == "csv":
        _write_csv_rows(
            path,
            header,
            [[json.dumps(row.get(key), sort_keys=True) for key in header] for row in rows],
        )
    else:
        _write_document(payload, path)
    print(f"report written to {path}")
    return EXIT_OK


def _default_threads() -> int:
    raw = os.environ.get("REALITY_STEER_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="realitysteer",
        description="Branch-navigation simulator: trial ensembles, sweeps, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="report path (overrides config output_path)")
        p.add_argument("--threads", type=int, default=_default_threads(),
                       help="worker processes (default: REALITY_STEER_THREADS or 1)")
        p.add_argument("--trials", type=int, help="override trial count")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    run_p = sub.add_parser("run", help="execute a trial ensemble from a config file")
    run_p.add_argument("config")
    common(run_p)

    verify_p = sub.add_parser("verify", help="run verification checks")
    verify_p.add_argument("--suite", default="all",
                          help="comma-separated check names or 'all'")
    verify_p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify_p.add_argument("--out", help="write verdicts to this path")
    verify_p.add_argument("--format", choices=("json", "csv"), default="json")

    sweep_p = sub.add_parser("sweep", help="run a parameter sweep from a config file")
    sweep_p.add_argument("config")
    common(sweep_p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = parse_config(args.config)
            if not isinstance(config, RunConfig):
                raise ConfigError(f"{args.config}: expected a run config, found a sweep block")
            return cmd_run(config, args.out, args.threads, args.trials, args.format)
        if args.command == "sweep":
            config = parse_config(args.config)
            if not isinstance(config, SweepConfig):
                raise ConfigError(f"{args.config}: sweep config needs a 'sweep' block")
            return cmd_sweep(config, args.out, args.threads, args.trials, args.format)
        suite = tuple(name.strip() for name in args.suite.split(",") if name.strip())
        return cmd_verify(suite or ("all",), args.seed, args.out, args.format)
    except ConfigError as error:
        print(f"config error: {error}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as error:
        print(f"runtime error: {error}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
