"""Command-line pipeline: denoise, impute, test, simulate.

Stages are file-coupled; each command reads CSV input, writes CSV/JSON
output into --output-dir, and can be re-run independently. Flags can be
preloaded from a flat key=value config file; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from ssamt.diagnostics import goodness_of_denoising, w_correlation
from ssamt.hypotheses import one_way_f, two_sample_t
from ssamt.imputation import impute
from ssamt.mssa import embed_multi
from ssamt.mtp import PROCEDURES
from ssamt.simulation import SIGNAL_KINDS, SignalModel, run_study
from ssamt.ssa import (
    _resolve_rank,
    decompose,
    embed,
    hankelize,
    reconstruct_group,
)
from ssamt.timeseries import (
    CsvOptions,
    GroupedSample,
    MultiSeries,
    TimeSeries,
    read_csv,
    read_label_column,
    write_csv,
)


class CliError(Exception):
    """User-facing configuration or input problem."""


# ---------------------------------------------------------------------------
# configuration plumbing


def _load_config(path: str) -> dict[str, str]:
    cfg: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def _merge_config(args: argparse.Namespace) -> None:
    """Fill unset flags from the config file; flags given on the command
    line keep priority."""
    if not getattr(args, "config", None):
        return
    cfg = _load_config(args.config)
    for key, raw in cfg.items():
        if not hasattr(args, key):
            raise CliError(f"unknown config key {key!r}")
        if getattr(args, key) is not None:
            continue
        if key == "input":
            setattr(args, key, [part.strip() for part in raw.split(",") if part.strip()])
        elif key == "per_group":
            setattr(args, key, raw.lower() in ("1", "true", "yes", "on"))
        else:
            setattr(args, key, raw)
    args.config = None


def _parse_int(value, flag: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise CliError(f"--{flag} expects an integer, got {value!r}") from None


def _parse_float(value, flag: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise CliError(f"--{flag} expects a number, got {value!r}") from None


def _parse_rank(value):
    if value is None or value == "full":
        return value
    return _parse_int(value, "rank")


def _parse_windows(value) -> list[int]:
    return [_parse_int(part, "window") for part in str(value).split(",") if part.strip()]


def _single_input(args) -> str:
    inputs = args.input or []
    if len(inputs) != 1:
        raise CliError(f"this command needs exactly one --input file, got {len(inputs)}")
    return inputs[0]


def _out_dir(args) -> Path:
    if not args.output_dir:
        raise CliError("--output-dir is required")
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(payload: dict, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _read_numeric(path: str, group_column: str | None) -> tuple[MultiSeries, list[str] | None]:
    exclude = (group_column,) if group_column else ()
    ms = read_csv(path, CsvOptions(exclude=exclude))
    labels = read_label_column(path, group_column) if group_column else None
    return ms, labels


# ---------------------------------------------------------------------------
# denoise


def _standardize(ms: MultiSeries) -> tuple[MultiSeries, list[tuple[float, float]]]:
    """Center and scale each series so no variable dominates the joint
    decomposition; constant series keep scale 1."""
    scaled, params = [], []
    for s in ms:
        mu = float(s.values.mean())
        sd = float(s.values.std(ddof=1))
        scale = sd if sd > 0.0 else 1.0
        scaled.append(TimeSeries(s.name, (s.values - mu) / scale))
        params.append((mu, scale))
    return MultiSeries(tuple(scaled)), params


def _mssa_block(ms: MultiSeries, window: int | None, rank) -> tuple[list[np.ndarray], int, int]:
    """Standardized joint denoising of one stack; returns the rescaled
    series values plus the window and rank actually used."""
    n_min = min(s.effective_length for s in ms)
    used_window = window if window is not None else n_min // 2
    scaled, params = _standardize(ms)
    matrix = embed_multi(scaled, used_window)
    joint = decompose(matrix)
    used_rank = _resolve_rank(joint, rank)
    low_rank = reconstruct_group(joint, range(used_rank))
    values = [
        hankelize(low_rank[:, span.start : span.stop]) * scale + mu
        for span, (mu, scale) in zip(matrix.column_spans, params)
    ]
    return values, used_window, used_rank


def _denoise_all(ms, labels, method, window, rank, per_group):
    """Run the chosen preprocessing over all variables.

    Returns (denoised values per variable, per-variable window, per-variable
    rank or None for method "none").
    """
    names = ms.names
    if method == "none":
        return [np.array(s.values) for s in ms], {}, {}

    if method == "ssa":
        values, windows, ranks = [], {}, {}
        for s in ms:
            n = len(s)
            used_window = window if window is not None else n // 2
            dec = decompose(embed(s, used_window))
            used_rank = _resolve_rank(dec, rank)
            values.append(hankelize(reconstruct_group(dec, range(used_rank))))
            windows[s.name] = used_window
            ranks[s.name] = used_rank
        return values, windows, ranks

    if method == "mssa":
        if per_group:
            if labels is None:
                raise CliError("--per-group needs --group-column")
            n = len(ms.series[0])
            out = [np.empty(n) for _ in names]
            windows, ranks = {}, {}
            seen = list(dict.fromkeys(labels))
            for label in seen:
                rows = np.array([l == label for l in labels])
                sub = MultiSeries(tuple(TimeSeries(s.name, s.values[rows]) for s in ms))
                vals, used_window, used_rank = _mssa_block(sub, window, rank)
                for j, v in enumerate(vals):
                    out[j][rows] = v
                for name in names:
                    windows.setdefault(name, used_window)
                    ranks.setdefault(name, used_rank)
            return out, windows, ranks
        vals, used_window, used_rank = _mssa_block(ms, window, rank)
        return vals, {n: used_window for n in names}, {n: used_rank for n in names}

    raise CliError(f"unknown method {method!r}; valid methods: none, ssa, mssa")


def cmd_denoise(args) -> int:
    _merge_config(args)
    path = _single_input(args)
    out = _out_dir(args)
    method = args.method or "none"
    window = _parse_int(args.window, "window") if args.window is not None else None
    rank = _parse_rank(args.rank)

    ms, labels = _read_numeric(path, args.group_column)
    if any(s.has_missing for s in ms):
        bad = [s.name for s in ms if s.has_missing]
        raise CliError(
            f"{path}: variables {bad} contain missing values; run the impute command first"
        )

    values, windows, ranks = _denoise_all(ms, labels, method, window, rank, args.per_group)

    warnings: list[str] = []
    diagnostics: dict[str, dict] = {}
    if method != "none":
        for s, v in zip(ms, values):
            entry: dict = {"rank": ranks[s.name], "window": windows[s.name]}
            try:
                score = goodness_of_denoising(s.values, v)
                entry["goodness_db"] = score.goodness_db
                entry["affine"] = score.affine
                if score.affine:
                    print(f"{s.name}: goodness of denoising is inf (affine fit)")
            except ValueError as exc:
                warnings.append(f"{s.name}: goodness of denoising undefined ({exc})")
            try:
                entry["w_correlation"] = w_correlation(v, s.values - v, windows[s.name])
            except ValueError as exc:
                warnings.append(f"{s.name}: w-correlation undefined ({exc})")
            diagnostics[s.name] = entry

    denoised = MultiSeries(tuple(TimeSeries(s.name, v) for s, v in zip(ms, values)))
    _write_output_csv(denoised, labels, args.group_column, path, out / "denoised.csv")

    window_values = set(windows.values())
    rank_values = set(ranks.values())
    report = {
        "dataset": str(path),
        "preprocessing": {
            "method": method,
            "L": windows[ms.names[0]] if len(window_values) == 1 else None,
            "rank": ranks[ms.names[0]] if len(rank_values) == 1 else None,
        },
        "tests": [],
        "procedures": [],
        "diagnostics": diagnostics,
        "warnings": warnings,
    }
    _write_json(report, out / "denoise_report.json")
    return 0


def _write_output_csv(ms, labels, group_column, source_path, target_path) -> None:
    """Write the numeric columns, re-attaching the label column so the
    output keeps the shape of the input file."""
    if labels is None:
        write_csv(ms, target_path)
        return
    header, _ = _raw_header(source_path)
    import csv as _csv

    n = max(len(s) for s in ms)
    with open(target_path, "w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh)
        writer.writerow(header)
        for i in range(n):
            row = []
            for name in header:
                if name == group_column:
                    row.append(labels[i])
                else:
                    s = ms.get(name)
                    if i >= len(s) or s.missing[i]:
                        row.append("NA")
                    else:
                        row.append(repr(float(s.values[i])))
            writer.writerow(row)


def _raw_header(path):
    import csv as _csv

    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(_csv.reader(fh))
    return rows[0], rows[1:]


# ---------------------------------------------------------------------------
# impute


def cmd_impute(args) -> int:
    _merge_config(args)
    path = _single_input(args)
    out = _out_dir(args)
    window = _parse_int(args.window, "window") if args.window is not None else None
    rank = _parse_rank(args.rank)

    ms, labels = _read_numeric(path, args.group_column)
    if not any(s.has_missing for s in ms):
        raise CliError(f"{path}: nothing to impute (no missing values)")

    warnings: list[str] = []
    convergence: dict[str, dict] = {}
    completed = []
    for s in ms:
        if not s.has_missing:
            completed.append(s)
            continue
        used_window = window if window is not None else len(s) // 2
        try:
            result = impute(s, used_window, rank)
        except ValueError as exc:
            warnings.append(f"{s.name}: not imputed ({exc})")
            completed.append(s)
            continue
        completed.append(result.series)
        convergence[s.name] = {
            "iterations": result.iterations,
            "converged": result.converged,
        }
        if not result.converged:
            warnings.append(f"{s.name}: imputation did not converge within the iteration cap")

    imputed = MultiSeries(tuple(completed))
    _write_output_csv(imputed, labels, args.group_column, path, out / "imputed.csv")
    report = {
        "dataset": str(path),
        "imputation": convergence,
        "warnings": warnings,
    }
    _write_json(report, out / "impute_report.json")
    return 0


# ---------------------------------------------------------------------------
# test


def _resolve_groups(args) -> tuple[list[str], dict[str, list[tuple[str, np.ndarray]]], list[str]]:
    """Collect per-variable (label, values) groups from either one labelled
    file or a two-file pair. Missing entries are dropped per variable."""
    inputs = args.input or []
    warnings: list[str] = []
    if len(inputs) == 2:
        if args.group_column:
            raise CliError("--group-column cannot be combined with two input files")
        frames = [read_csv(p) for p in inputs]
        names = frames[0].names
        if set(frames[1].names) != set(names):
            raise CliError("the two input files must share the same variable columns")
        stems = [Path(p).stem for p in inputs]
        groups: dict[str, list[tuple[str, np.ndarray]]] = {}
        for name in names:
            per_var = []
            for stem, frame in zip(stems, frames):
                s = frame.get(name)
                if s.has_missing:
                    warnings.append(f"{name}: dropped {int(s.missing.sum())} missing entries in {stem}")
                per_var.append((stem, s.observed()))
            groups[name] = per_var
        return list(names), groups, warnings

    path = _single_input(args)
    if not args.group_column:
        raise CliError("grouping needs --group-column, or two --input files")
    ms, labels = _read_numeric(path, args.group_column)
    label_order = list(dict.fromkeys(labels))
    if len(label_order) < 2:
        raise CliError(f"group column {args.group_column!r} holds fewer than 2 distinct labels")
    label_array = np.array(labels)
    groups = {}
    for s in ms:
        per_var = []
        for label in label_order:
            rows = (label_array == label) & ~s.missing
            dropped = int(((label_array == label) & s.missing).sum())
            if dropped:
                warnings.append(f"{s.name}: dropped {dropped} missing entries in group {label!r}")
            per_var.append((label, s.values[rows]))
        groups[s.name] = per_var
    return list(ms.names), groups, warnings


def cmd_test(args) -> int:
    _merge_config(args)
    out = _out_dir(args)
    kind = args.test or "t"
    if kind not in ("t", "f"):
        raise CliError(f"--test must be 't' or 'f', got {kind!r}")
    alpha = _parse_float(args.alpha, "alpha") if args.alpha is not None else 0.05
    if not 0.0 < alpha < 1.0:
        raise CliError(f"--alpha must lie in (0, 1), got {alpha}")
    wanted = (args.procedures or ",".join(PROCEDURES)).split(",")
    wanted = [w.strip() for w in wanted if w.strip()]
    unknown = [w for w in wanted if w not in PROCEDURES]
    if unknown:
        raise CliError(f"unknown procedures {unknown}; valid: {', '.join(PROCEDURES)}")
    if not wanted:
        raise CliError("need at least one procedure")

    names, groups, warnings = _resolve_groups(args)
    if kind == "f":
        warnings.append(
            "one-way F degrees of freedom follow the standard (k-1, N-k) convention"
        )

    tests = []
    for name in names:
        per_var = groups[name]
        try:
            if kind == "t":
                if len(per_var) != 2:
                    raise ValueError(f"two-sample t needs exactly 2 groups, got {len(per_var)}")
                result = two_sample_t(per_var[0][1], per_var[1][1], name)
            else:
                result = one_way_f(GroupedSample(name, tuple(per_var)))
        except ValueError as exc:
            warnings.append(f"{name}: excluded from testing ({exc})")
            continue
        tests.append(result)

    if not tests:
        raise CliError("no variable survived the degeneracy checks; nothing to test")

    p_values = [t.p_value for t in tests]
    procedures = []
    for proc_name in wanted:
        report = PROCEDURES[proc_name](p_values, alpha)
        procedures.append(
            {
                "procedure": report.procedure,
                "alpha": report.alpha,
                "decisions": list(report.decisions),
                "rejection_count": report.rejection_count,
                "adjusted_thresholds": list(report.adjusted_thresholds),
            }
        )

    report = {
        "dataset": ", ".join(args.input),
        "preprocessing": {"method": "none", "L": None, "rank": None},
        "tests": [
            {
                "variable_name": t.variable_name,
                "statistic": t.statistic,
                "dof": t.dof[0] if len(t.dof) == 1 else list(t.dof),
                "p_value": t.p_value,
                "kind": t.kind,
            }
            for t in tests
        ],
        "procedures": procedures,
        "diagnostics": {},
        "warnings": warnings,
    }
    _write_json(report, out / "test_report.json")
    return 0


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    _merge_config(args)
    out = _out_dir(args)
    model = args.model or "all"
    kinds = list(SIGNAL_KINDS) if model == "all" else [model]
    for kind in kinds:
        if kind not in SIGNAL_KINDS:
            raise CliError(
                f"unknown model {kind!r}; valid models: {', '.join(SIGNAL_KINDS)} (or 'all')"
            )
    replications = _parse_int(args.replications, "replications") if args.replications is not None else 100
    sigma = _parse_float(args.sigma, "sigma") if args.sigma is not None else 1.0
    seed = _parse_int(args.seed, "seed") if args.seed is not None else 0
    length = 100
    windows = _parse_windows(args.window) if args.window is not None else [length // 2]

    for kind in kinds:
        report = run_study(SignalModel(kind, length), replications, windows, sigma, seed)
        payload = {
            "model": report.model,
            "length": report.length,
            "window_lengths": list(report.window_lengths),
            "mean_rmse": list(report.mean_rmse),
            "replications": report.replications,
            "sigma": report.sigma,
            "seed": report.seed,
        }
        _write_json(payload, out / f"sim_{kind}.json")
        with open(out / f"sim_{kind}.csv", "w", newline="", encoding="utf-8") as fh:
            import csv as _csv

            writer = _csv.writer(fh)
            writer.writerow(["model", "length", "window", "mean_rmse", "replications", "sigma", "seed"])
            for w, rmse in zip(report.window_lengths, report.mean_rmse):
                writer.writerow(
                    [report.model, report.length, w, repr(rmse), report.replications, repr(report.sigma), report.seed]
                )
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--input", action="append", help="input CSV file (repeatable for 'test')")
    sub.add_argument("--output-dir", help="directory for output files")
    sub.add_argument("--config", help="flat key=value file supplying defaults for the flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssamt",
        description="SSA denoising/imputation plus FWER-controlled multiple testing",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    denoise = commands.add_parser("denoise", help="reduce noise in every variable of a CSV")
    _add_common(denoise)
    denoise.add_argument("--method", choices=["none", "ssa", "mssa"], help="preprocessing method (default none)")
    denoise.add_argument("--window", help="window length L (default floor(N/2))")
    denoise.add_argument("--rank", help="components kept: an integer or 'full' (default: hard threshold)")
    denoise.add_argument("--group-column", help="label column to pass through untouched")
    denoise.add_argument("--per-group", action="store_true", default=None,
                         help="stack each group separately instead of one joint stack (mssa)")
    denoise.set_defaults(func=cmd_denoise)

    imp = commands.add_parser("impute", help="fill missing values by iterative SSA filtering")
    _add_common(imp)
    imp.add_argument("--window", help="window length L (default floor(N/2))")
    imp.add_argument("--rank", help="components kept per pass: an integer or 'full' (default: hard threshold)")
    imp.add_argument("--group-column", help="label column to pass through untouched")
    imp.set_defaults(func=cmd_impute)

    test = commands.add_parser("test", help="per-variable tests with FWER control")
    _add_common(test)
    test.add_argument("--test", choices=["t", "f"], help="statistic: pooled two-sample t or one-way F (default t)")
    test.add_argument("--procedures", help="comma list of bonferroni,holm,sidak_ss,sidak_sd,hochberg (default all)")
    test.add_argument("--alpha", help="FWER level in (0, 1) (default 0.05)")
    test.add_argument("--group-column", help="column holding the group label of each row")
    test.set_defaults(func=cmd_test)

    sim = commands.add_parser("simulate", help="Monte Carlo accuracy study on synthetic signals")
    _add_common(sim)
    sim.add_argument("--model", help="signal model name or 'all'")
    sim.add_argument("--replications", help="number of Monte Carlo replications (default 100)")
    sim.add_argument("--sigma", help="noise standard deviation (default 1.0)")
    sim.add_argument("--window", help="comma list of window lengths (default 50)")
    sim.add_argument("--seed", help="master seed (default 0)")
    sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError) as exc:
        print(f"ssamt: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
