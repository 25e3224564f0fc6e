"""Command-line front end: run experiments, validate configs, rebuild figures.

Subcommands
-----------
``musicopt run <config.json>``
    Build the problem, network and algorithms described by the config, run
    every algorithm on the identical instance, and write one trace CSV per
    algorithm label plus a ``summary.csv`` into the output directory.
``musicopt validate <config.json>``
    Check the config schema and semantic constraints without running
    anything; prints ``ok`` or every problem found.  Bias-corrected configs
    whose step size fails the sufficient linear-rate condition get a warning
    (the condition is sufficient, not necessary, so this does not fail
    validation).
``musicopt figures <config.json>``
    Fill in the documented parameterization of a named figure recipe, apply
    any overrides from the config, and run it like ``run``.

Exit codes: 0 on success, 1 on validation failure, 2 on I/O failure.  The
environment variable ``MUSICOPT_OUTPUT_DIR`` overrides ``run.output_dir``.

Config schema (JSON, all fields required unless marked optional)::

    {
      "problem": {
        "kind": "quadratic" | "logistic",
        "source": {"kind": "synthetic", "p": int, "m": int, "seed": int}
                | {"kind": "libsvm", "path": str, "label_pos": num,
                   "label_neg": num, "m_per_agent": int, "seed": int},
        "mu": num >= 0
      },
      "network": {"n": int >= 2, "avg_degree": num in (0, n),
                   "seed": int, "rule": "metropolis"},
      "algorithms": [
        {"label": str, "kind": "dgd" | "atc" | "inexact_music" |
                 "exact_diffusion" | "exact_music" | "easgd_like",
         "E": int >= 1, "beta": num,
         "schedule": {"kind": "constant" | "diminishing",
                      "alpha0": num > 0, "delta": num in (0, 2) (diminishing only)}}
      ],
      "run": {"T": int >= 1, "target_error": num > 0 (optional),
              "output_dir": str}
    }

A figures config replaces ``run.T``/``run.target_error`` with
``run.recipe``; any other section present is deep-merged over the recipe's
defaults, so supplying only ``problem.source.path`` is enough to point the
letter-data recipes at a local file.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import re
import sys
from dataclasses import dataclass

import numpy as np

from .dataio import (
    LibsvmFormatError,
    binary_filter,
    logistic_from_shards,
    parse_libsvm,
    partition,
    quadratic_from_shards,
    synth_logistic,
    synth_uniform,
)
from .errors import ConfigError, DivergenceError
from .experiment import compare, export_csv, fit_linear_rate
from .objectives import centralized_gd_optimum, estimate_bounds
from .optimizers import (
    ALGORITHM_KINDS,
    SINGLE_UPDATE_KINDS,
    AlgorithmConfig,
    StepSchedule,
    stability_check,
)
from .topology import erdos_renyi, half_identity, metropolis_weights

__all__ = ["main", "cmd_run", "cmd_validate", "cmd_figures", "parse_config", "FIGURE_RECIPES"]

OUTPUT_DIR_ENV = "MUSICOPT_OUTPUT_DIR"

# Reference-optimum settings for problems without a closed form.
X_STAR_ITERS = 200_000


@dataclass(frozen=True)
class SyntheticSource:
    p: int
    m: int
    seed: int


@dataclass(frozen=True)
class LibsvmSource:
    path: str
    label_pos: float
    label_neg: float
    m_per_agent: int
    seed: int


@dataclass(frozen=True)
class ProblemSpec:
    kind: str
    source: SyntheticSource | LibsvmSource
    mu: float


@dataclass(frozen=True)
class NetworkSpec:
    n: int
    avg_degree: float
    seed: int
    rule: str


@dataclass(frozen=True)
class RunSpec:
    T: int
    output_dir: str
    target_error: float | None = None


@dataclass(frozen=True)
class ExperimentSpec:
    problem: ProblemSpec
    network: NetworkSpec
    algorithms: list[tuple[str, AlgorithmConfig]]
    run: RunSpec


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_num(x) -> bool:
    return _is_int(x) or isinstance(x, float)


def _check_keys(d: dict, allowed: set[str], path: str, errs: list[str]):
    for key in d:
        if key not in allowed:
            errs.append(f"{path}.{key}: unknown key")


def _get_int(d: dict, key: str, path: str, errs: list[str], minimum: int | None = None):
    if key not in d:
        errs.append(f"{path}.{key}: missing required field")
        return None
    if not _is_int(d[key]):
        errs.append(f"{path}.{key}: expected an integer, got {d[key]!r}")
        return None
    if minimum is not None and d[key] < minimum:
        errs.append(f"{path}.{key}: must be at least {minimum}, got {d[key]}")
        return None
    return d[key]


def _get_num(d: dict, key: str, path: str, errs: list[str]):
    if key not in d:
        errs.append(f"{path}.{key}: missing required field")
        return None
    if not _is_num(d[key]):
        errs.append(f"{path}.{key}: expected a number, got {d[key]!r}")
        return None
    return float(d[key])


def _get_str(d: dict, key: str, path: str, errs: list[str], choices=None):
    if key not in d:
        errs.append(f"{path}.{key}: missing required field")
        return None
    if not isinstance(d[key], str):
        errs.append(f"{path}.{key}: expected a string, got {d[key]!r}")
        return None
    if choices is not None and d[key] not in choices:
        errs.append(f"{path}.{key}: must be one of {sorted(choices)}, got {d[key]!r}")
        return None
    return d[key]


def _parse_source(d, errs: list[str]) -> SyntheticSource | LibsvmSource | None:
    path = "problem.source"
    if not isinstance(d, dict):
        errs.append(f"{path}: expected an object")
        return None
    kind = _get_str(d, "kind", path, errs, choices={"synthetic", "libsvm"})
    if kind == "synthetic":
        _check_keys(d, {"kind", "p", "m", "seed"}, path, errs)
        p = _get_int(d, "p", path, errs, minimum=1)
        m = _get_int(d, "m", path, errs, minimum=1)
        seed = _get_int(d, "seed", path, errs)
        if None not in (p, m, seed):
            return SyntheticSource(p, m, seed)
    elif kind == "libsvm":
        _check_keys(d, {"kind", "path", "label_pos", "label_neg", "m_per_agent", "seed"}, path, errs)
        file_path = _get_str(d, "path", path, errs)
        pos = _get_num(d, "label_pos", path, errs)
        neg = _get_num(d, "label_neg", path, errs)
        m_per = _get_int(d, "m_per_agent", path, errs, minimum=1)
        seed = _get_int(d, "seed", path, errs)
        if None not in (file_path, pos, neg, m_per, seed):
            if pos == neg:
                errs.append(f"{path}: label_pos and label_neg must differ")
                return None
            return LibsvmSource(file_path, pos, neg, m_per, seed)
    return None


def _parse_algorithm(d, idx: int, errs: list[str]) -> tuple[str, AlgorithmConfig] | None:
    path = f"algorithms[{idx}]"
    if not isinstance(d, dict):
        errs.append(f"{path}: expected an object")
        return None
    _check_keys(d, {"label", "kind", "E", "beta", "schedule"}, path, errs)
    label = _get_str(d, "label", path, errs)
    if label is not None and not label.strip():
        errs.append(f"{path}.label: must not be empty")
        label = None
    kind = _get_str(d, "kind", path, errs, choices=set(ALGORITHM_KINDS))
    e = _get_int(d, "E", path, errs, minimum=1)
    beta = _get_num(d, "beta", path, errs)
    schedule = None
    if "schedule" not in d:
        errs.append(f"{path}.schedule: missing required field")
    elif not isinstance(d["schedule"], dict):
        errs.append(f"{path}.schedule: expected an object")
    else:
        sd = d["schedule"]
        spath = f"{path}.schedule"
        skind = _get_str(sd, "kind", spath, errs, choices={"constant", "diminishing"})
        alpha0 = _get_num(sd, "alpha0", spath, errs)
        if alpha0 is not None and alpha0 <= 0:
            errs.append(f"{spath}.alpha0: must be positive, got {alpha0}")
            alpha0 = None
        if skind == "constant":
            _check_keys(sd, {"kind", "alpha0"}, spath, errs)
            if alpha0 is not None:
                schedule = StepSchedule.constant(alpha0)
        elif skind == "diminishing":
            _check_keys(sd, {"kind", "alpha0", "delta"}, spath, errs)
            delta = _get_num(sd, "delta", spath, errs)
            if delta is not None and not (0.0 < delta < 2.0):
                errs.append(f"{spath}.delta: must lie in (0, 2), got {delta}")
                delta = None
            if alpha0 is not None and delta is not None:
                schedule = StepSchedule.diminishing(alpha0, delta)
    if None in (label, kind, e, beta, schedule):
        return None
    if kind in SINGLE_UPDATE_KINDS and e != 1:
        errs.append(f"{path}.E: {kind} combines every iteration; E must be 1")
        return None
    if kind in ("exact_music", "easgd_like") and not (0.0 <= beta <= 1.0):
        errs.append(f"{path}.beta: must lie in [0, 1], got {beta}")
        return None
    return label, AlgorithmConfig(kind=kind, schedule=schedule, E=e, beta=beta)


def parse_config(doc) -> ExperimentSpec:
    """Validate a config document exhaustively; raises :class:`ConfigError`
    carrying every problem found."""
    errs: list[str] = []
    if not isinstance(doc, dict):
        raise ConfigError(["top level: expected an object"])
    _check_keys(doc, {"problem", "network", "algorithms", "run"}, "top", errs)

    problem = None
    if "problem" not in doc:
        errs.append("problem: missing required section")
    elif not isinstance(doc["problem"], dict):
        errs.append("problem: expected an object")
    else:
        pd = doc["problem"]
        _check_keys(pd, {"kind", "source", "mu"}, "problem", errs)
        kind = _get_str(pd, "kind", "problem", errs, choices={"quadratic", "logistic"})
        mu = _get_num(pd, "mu", "problem", errs)
        if mu is not None and mu < 0:
            errs.append(f"problem.mu: must be nonnegative, got {mu}")
            mu = None
        source = _parse_source(pd.get("source"), errs) if "source" in pd else None
        if "source" not in pd:
            errs.append("problem.source: missing required field")
        if None not in (kind, mu) and source is not None:
            problem = ProblemSpec(kind, source, mu)

    network = None
    if "network" not in doc:
        errs.append("network: missing required section")
    elif not isinstance(doc["network"], dict):
        errs.append("network: expected an object")
    else:
        nd = doc["network"]
        _check_keys(nd, {"n", "avg_degree", "seed", "rule"}, "network", errs)
        n = _get_int(nd, "n", "network", errs, minimum=2)
        deg = _get_num(nd, "avg_degree", "network", errs)
        seed = _get_int(nd, "seed", "network", errs)
        rule = _get_str(nd, "rule", "network", errs, choices={"metropolis"})
        if deg is not None and n is not None and not (0.0 < deg < n):
            errs.append(f"network.avg_degree: must lie in (0, n={n}), got {deg}")
            deg = None
        if None not in (n, deg, seed) and rule is not None:
            network = NetworkSpec(n, deg, seed, rule)

    algorithms: list[tuple[str, AlgorithmConfig]] = []
    if "algorithms" not in doc:
        errs.append("algorithms: missing required section")
    elif not isinstance(doc["algorithms"], list) or not doc["algorithms"]:
        errs.append("algorithms: expected a nonempty list")
    else:
        for idx, entry in enumerate(doc["algorithms"]):
            parsed = _parse_algorithm(entry, idx, errs)
            if parsed is not None:
                algorithms.append(parsed)
        labels = [lab for lab, _ in algorithms]
        for lab in sorted({l for l in labels if labels.count(l) > 1}):
            errs.append(f"algorithms: duplicate label {lab!r}")

    run = None
    if "run" not in doc:
        errs.append("run: missing required section")
    elif not isinstance(doc["run"], dict):
        errs.append("run: expected an object")
    else:
        rd = doc["run"]
        _check_keys(rd, {"T", "target_error", "output_dir"}, "run", errs)
        t = _get_int(rd, "T", "run", errs, minimum=1)
        out = _get_str(rd, "output_dir", "run", errs)
        target = None
        if "target_error" in rd:
            target = _get_num(rd, "target_error", "run", errs)
            if target is not None and target <= 0:
                errs.append(f"run.target_error: must be positive, got {target}")
                target = None
        if None not in (t, out):
            run = RunSpec(t, out, target)

    if errs:
        raise ConfigError(errs)
    assert problem is not None and network is not None and run is not None
    return ExperimentSpec(problem, network, algorithms, run)


def build_problem(spec: ExperimentSpec):
    """Construct the objective described by a validated spec.

    File-system or data-format failures raise ``OSError`` or
    :class:`LibsvmFormatError` for the caller to map to exit code 2.
    """
    p = spec.problem
    n = spec.network.n
    if isinstance(p.source, SyntheticSource):
        s = p.source
        if p.kind == "quadratic":
            return synth_uniform(s.p, s.m, n, s.seed, p.mu)
        return synth_logistic(s.p, s.m, n, s.seed, p.mu)
    s = p.source
    with open(s.path, "r", encoding="utf-8") as fh:
        dataset = parse_libsvm(fh)
    filtered = binary_filter(dataset, s.label_pos, s.label_neg)
    shards = partition(filtered, n, s.m_per_agent, s.seed)
    if p.kind == "quadratic":
        return quadratic_from_shards(shards, filtered.dim, p.mu)
    return logistic_from_shards(shards, filtered.dim, p.mu)


def reference_optimum(problem, kind: str) -> np.ndarray:
    """Closed form for least squares; long full-gradient descent otherwise."""
    if kind == "quadratic":
        return problem.optimum()
    bounds = estimate_bounds(problem)
    alpha = 1.0 / (2.0 * bounds.L_est)
    return centralized_gd_optimum(problem, alpha, X_STAR_ITERS).x


def _safe_name(label: str, taken: set[str]) -> str:
    base = re.sub(r"[^A-Za-z0-9._-]+", "_", label) or "trace"
    name = base
    k = 2
    while name in taken:
        name = f"{base}_{k}"
        k += 1
    taken.add(name)
    return name


def _execute(spec: ExperimentSpec) -> int:
    out_dir = os.environ.get(OUTPUT_DIR_ENV) or spec.run.output_dir
    try:
        problem = build_problem(spec)
    except OSError as exc:
        print(f"error: cannot read data file: {exc}", file=sys.stderr)
        return 2
    except (LibsvmFormatError, ValueError) as exc:
        print(f"error: bad data file: {exc}", file=sys.stderr)
        return 2
    graph = erdos_renyi(spec.network.n, spec.network.avg_degree, spec.network.seed)
    try:
        x_star = reference_optimum(problem, spec.problem.kind)
    except (np.linalg.LinAlgError, DivergenceError) as exc:
        print(f"error: reference optimum failed: {exc}", file=sys.stderr)
        return 1
    configs = dict(spec.algorithms)
    try:
        result = compare(
            problem, graph, configs, spec.run.T, x_star, spec.run.target_error
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        os.makedirs(out_dir, exist_ok=True)
        taken: set[str] = set()
        summary_lines = ["label,final_rel_error,rounds_to_target,fitted_rate,status"]
        for label, trace in result.traces.items():
            name = _safe_name(label, taken)
            with open(os.path.join(out_dir, f"{name}.csv"), "w", encoding="utf-8") as fh:
                fh.write(export_csv(trace))
            final = f"{trace.records[-1].rel_error:.17g}" if trace.records else ""
            rounds = result.rounds_to_target.get(label)
            rounds_s = "" if rounds is None else str(rounds)
            try:
                rate = f"{fit_linear_rate(trace).rho:.17g}"
            except ValueError:
                rate = ""
            summary_lines.append(f"{label},{final},{rounds_s},{rate},{trace.status_str()}")
        with open(os.path.join(out_dir, "summary.csv"), "w", encoding="utf-8") as fh:
            fh.write("\n".join(summary_lines) + "\n")
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return 2

    for line in summary_lines:
        print(line)
    print(f"wrote {len(result.traces) + 1} files to {out_dir}")
    return 0


def _load_json(path: str) -> tuple[dict | None, int]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return None, 2
    try:
        return json.loads(text), 0
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return None, 1


def cmd_run(config_path: str) -> int:
    doc, code = _load_json(config_path)
    if doc is None:
        return code
    try:
        spec = parse_config(doc)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return 1
    return _execute(spec)


def cmd_validate(config_path: str) -> int:
    doc, code = _load_json(config_path)
    if doc is None:
        return code
    try:
        spec = parse_config(doc)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return 1

    corrected = [
        (label, cfg)
        for label, cfg in spec.algorithms
        if cfg.kind in ("exact_music", "easgd_like") and cfg.beta > 0.0
    ]
    if corrected:
        try:
            problem = build_problem(spec)
        except OSError as exc:
            print(f"error: cannot read data file: {exc}", file=sys.stderr)
            return 2
        except (LibsvmFormatError, ValueError) as exc:
            print(f"error: bad data file: {exc}", file=sys.stderr)
            return 2
        bounds = estimate_bounds(problem)
        graph = erdos_renyi(spec.network.n, spec.network.avg_degree, spec.network.seed)
        wb = half_identity(metropolis_weights(graph))
        eigs = np.linalg.eigvalsh(wb.w)
        z_norm = float(np.abs(eigs).max())
        zmi_norm = float(np.abs(eigs - 1.0).max())
        for label, cfg in corrected:
            alpha0 = cfg.schedule.alpha0
            try:
                ok = stability_check(bounds, alpha0, cfg.E, cfg.beta, z_norm, zmi_norm)
            except ValueError:
                print(
                    f"warning: {label}: alpha0={alpha0} exceeds the stability "
                    f"precondition 1/(2*L_est)={1.0 / (2.0 * bounds.L_est):.3e}"
                )
                continue
            if not ok:
                print(
                    f"warning: {label}: the sufficient linear-rate condition fails "
                    f"for alpha={alpha0}, E={cfg.E}, beta={cfg.beta}; "
                    "convergence is not guaranteed"
                )
    print("ok")
    return 0


def _quadratic_base() -> dict:
    return {
        "problem": {
            "kind": "quadratic",
            "source": {"kind": "synthetic", "p": 10, "m": 10, "seed": 1},
            "mu": 1e-6,
        },
        "network": {"n": 100, "avg_degree": 4.0, "seed": 1, "rule": "metropolis"},
    }


def _letter_base() -> dict:
    return {
        "problem": {
            "kind": "logistic",
            "source": {
                "kind": "libsvm",
                "path": "letter.scale",
                "label_pos": 2,
                "label_neg": 4,
                "m_per_agent": 30,
                "seed": 1,
            },
            "mu": 1e-3,
        },
        "network": {"n": 50, "avg_degree": 4.0, "seed": 1, "rule": "metropolis"},
    }


def _const(alpha0: float) -> dict:
    return {"kind": "constant", "alpha0": alpha0}


def _recipe_fig2a() -> dict:
    doc = _quadratic_base()
    doc["algorithms"] = [
        {"label": f"inexact_music_E{e}", "kind": "inexact_music", "E": e,
         "beta": 0.0, "schedule": _const(1e-4)}
        for e in (1, 2, 4, 8)
    ]
    doc["run"] = {"T": 60_000, "target_error": 0.1, "output_dir": "fig2a"}
    return doc


def _recipe_fig2b() -> dict:
    doc = _quadratic_base()
    doc["algorithms"] = [
        {"label": f"inexact_music_alpha{a:g}", "kind": "inexact_music", "E": 3,
         "beta": 0.0, "schedule": _const(a)}
        for a in (1e-3, 1e-4, 1e-5)
    ]
    doc["run"] = {"T": 60_000, "target_error": 0.1, "output_dir": "fig2b"}
    return doc


def _recipe_fig2c() -> dict:
    doc = _quadratic_base()
    doc["algorithms"] = [
        {"label": f"inexact_music_E{e}", "kind": "inexact_music", "E": e, "beta": 0.0,
         "schedule": {"kind": "diminishing", "alpha0": 1e-3, "delta": 0.5}}
        for e in (1, 2, 4, 8)
    ]
    doc["run"] = {"T": 60_000, "target_error": 0.1, "output_dir": "fig2c"}
    return doc


def _recipe_fig2d() -> dict:
    doc = _quadratic_base()
    doc["algorithms"] = [
        {"label": f"inexact_music_delta{d:g}", "kind": "inexact_music", "E": 3,
         "beta": 0.0,
         "schedule": {"kind": "diminishing", "alpha0": 1e-3, "delta": d}}
        for d in (0.25, 0.5, 1.0, 1.5)
    ]
    doc["run"] = {"T": 60_000, "target_error": 0.1, "output_dir": "fig2d"}
    return doc


def _recipe_fig4() -> dict:
    doc = _quadratic_base()
    doc["algorithms"] = [
        {"label": "exact_diffusion", "kind": "exact_diffusion", "E": 1,
         "beta": 0.0, "schedule": _const(2e-3)}
    ] + [
        {"label": f"exact_music_E{e}", "kind": "exact_music", "E": e,
         "beta": 1.0, "schedule": _const(2e-3)}
        for e in (1, 2, 3, 4)
    ]
    doc["run"] = {"T": 8_000, "target_error": 1e-6, "output_dir": "fig4"}
    return doc


def _recipe_fig6() -> dict:
    doc = _letter_base()
    doc["algorithms"] = [
        {"label": "exact_diffusion", "kind": "exact_diffusion", "E": 1,
         "beta": 0.0, "schedule": _const(2e-3)},
    ] + [
        {"label": f"exact_music_E{e}", "kind": "exact_music", "E": e,
         "beta": 1.0, "schedule": _const(2e-3)}
        for e in (2, 3, 4)
    ] + [
        {"label": "easgd_like_E3", "kind": "easgd_like", "E": 3,
         "beta": 1.0, "schedule": _const(2e-3)},
    ]
    doc["run"] = {"T": 100_000, "target_error": 1e-10, "output_dir": "fig6"}
    return doc


def _recipe_fig7() -> dict:
    # Same runs as fig6; the exported CSV carries both the iteration and the
    # communication-round axis, so either reading can be reproduced.
    doc = _recipe_fig6()
    doc["run"]["output_dir"] = "fig7"
    return doc


FIGURE_RECIPES = {
    "fig2a": _recipe_fig2a,
    "fig2b": _recipe_fig2b,
    "fig2c": _recipe_fig2c,
    "fig2d": _recipe_fig2d,
    "fig4": _recipe_fig4,
    "fig6": _recipe_fig6,
    "fig7": _recipe_fig7,
}


def _deep_merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def cmd_figures(config_path: str) -> int:
    doc, code = _load_json(config_path)
    if doc is None:
        return code
    if not isinstance(doc, dict) or not isinstance(doc.get("run"), dict):
        print("error: run: missing required section", file=sys.stderr)
        return 1
    overrides = copy.deepcopy(doc)
    recipe_name = overrides["run"].pop("recipe", None)
    if recipe_name not in FIGURE_RECIPES:
        print(
            f"error: run.recipe: must be one of {sorted(FIGURE_RECIPES)}, "
            f"got {recipe_name!r}",
            file=sys.stderr,
        )
        return 1
    merged = _deep_merge(FIGURE_RECIPES[recipe_name](), overrides)
    try:
        spec = parse_config(merged)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return 1
    return _execute(spec)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="musicopt",
        description="Simulate decentralized first-order optimization algorithms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, descr in (
        ("run", "run every configured algorithm and export trace CSVs"),
        ("validate", "check a config without running it"),
        ("figures", "run a named figure recipe with optional overrides"),
    ):
        p = sub.add_parser(name, help=descr)
        p.add_argument("config", help="path to a JSON config file")
    args = parser.parse_args(argv)
    if args.command == "run":
        return cmd_run(args.config)
    if args.command == "validate":
        return cmd_validate(args.config)
    return cmd_figures(args.config)


if __name__ == "__main__":
    sys.exit(main())
