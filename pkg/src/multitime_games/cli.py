"""Config-driven run pipeline: parse a game/run document, solve the requested
value fields, execute the selected checks, and emit CSVs plus a deterministic
JSON report.

Exit codes: 0 all checks passed, 1 some check failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import jsonschema
import numpy as np

from .benchmarks import REGISTRY, get_game
from .errors import (
    BranchPreconditionFailed,
    MultitimeGameError,
    SchemaError,
    TreeTooLarge,
)
from .families import Family
from .flows import path_independence_check
from .games import GameSpec
from .grids import MultitimeGrid, StateGrid
from .reports import render_summary, write_field_csv, write_report_json
from .solver import DEFAULT_OUT_OF_BOX, dpp_residual, solve_value
from .verify import (
    TestFunction,
    lemma_integral_check,
    oracle_value,
    terminal_condition_check,
    viscosity_check,
)

CHECK_ORDER = ("closed-form", "isaacs", "dpp", "viscosity", "lemma",
               "path-independence", "oracle-compare")

_FAMILY_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["constant", "affine-in-x", "bilinear-uv", "polynomial"]},
        "values": {"type": "array"},
        "linear": {"type": "array"},
        "offset": {"type": "array"},
        "quad": {"type": "array"},
        "state_linear": {"type": "array"},
        "terms": {"type": "array"},
    },
    "additionalProperties": False,
}

_TEST_FN_SCHEMA = {
    "type": "object",
    "properties": {
        "constant": {"type": "number"},
        "linear": {"type": "array", "items": {"type": "number"}},
        "quadratic": {"type": "array"},
    },
    "additionalProperties": False,
}

_INLINE_GAME_SCHEMA = {
    "type": "object",
    "required": ["m", "n", "horizon", "dynamics", "running_cost",
                 "terminal_cost", "controls_u", "controls_v"],
    "properties": {
        "m": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 1},
        "horizon": {"type": "array", "minItems": 1,
                    "items": {"type": "number", "exclusiveMinimum": 0}},
        "dynamics": _FAMILY_SCHEMA,
        "running_cost": _FAMILY_SCHEMA,
        "terminal_cost": _FAMILY_SCHEMA,
        "controls_u": {"type": "array", "minItems": 1,
                       "items": {"type": "array", "items": {"type": "number"}}},
        "controls_v": {"type": "array", "minItems": 1,
                       "items": {"type": "array", "items": {"type": "number"}}},
        "name": {"type": "string"},
    },
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["game"],
    "properties": {
        "game": {"type": ["string", "object"]},
        "multitime_grid": {
            "type": "object",
            "required": ["counts"],
            "properties": {"counts": {"type": "array", "minItems": 1,
                                      "items": {"type": "integer", "minimum": 2}}},
            "additionalProperties": False,
        },
        "state_grid": {
            "type": "object",
            "required": ["low", "high", "counts"],
            "properties": {
                "low": {"type": "array", "items": {"type": "number"}},
                "high": {"type": "array", "items": {"type": "number"}},
                "counts": {"type": "array", "items": {"type": "integer", "minimum": 2}},
            },
            "additionalProperties": False,
        },
        "solver": {
            "type": "object",
            "properties": {
                "sides": {"type": "array", "minItems": 1,
                          "items": {"enum": ["upper", "lower"]}},
                "substeps_per_unit": {"type": "integer", "minimum": 1},
                "slack_c1": {"type": "number", "minimum": 0},
                "slack_c2": {"type": "number", "minimum": 0},
                "out_of_box": {"enum": ["extrapolate", "clamp"]},
            },
            "additionalProperties": False,
        },
        "checks": {
            "type": "object",
            "properties": {
                "closed-form": {
                    "type": "object",
                    "properties": {"tol": {"type": "number", "exclusiveMinimum": 0}},
                    "additionalProperties": False,
                },
                "isaacs": {
                    "type": "object",
                    "properties": {
                        "expect_max": {"type": "number"},
                        "tol": {"type": "number", "exclusiveMinimum": 0},
                        "order_tol": {"type": "number", "exclusiveMinimum": 0},
                    },
                    "additionalProperties": False,
                },
                "dpp": {
                    "type": "object",
                    "properties": {
                        "count": {"type": "integer", "minimum": 1},
                        "span_steps": {"type": "array",
                                       "items": {"type": "integer", "minimum": 0}},
                        "tol": {"type": "number", "exclusiveMinimum": 0},
                        "side": {"enum": ["upper", "lower"]},
                    },
                    "additionalProperties": False,
                },
                "viscosity": {
                    "type": "object",
                    "properties": {
                        "count": {"type": "integer", "minimum": 1},
                        "side": {"enum": ["upper", "lower"]},
                    },
                    "additionalProperties": False,
                },
                "lemma": {
                    "type": "object",
                    "required": ["branch", "margins", "span", "test_fn"],
                    "properties": {
                        "branch": {"enum": ["caseI", "caseII"]},
                        "margins": {"type": "array",
                                    "items": {"type": "number", "exclusiveMinimum": 0}},
                        "span": {"type": "array",
                                 "items": {"type": "number", "minimum": 0}},
                        "start": {"type": "array", "items": {"type": "number"}},
                        "x0": {"type": "array", "items": {"type": "number"}},
                        "test_fn": _TEST_FN_SCHEMA,
                    },
                    "additionalProperties": False,
                },
                "path-independence": {
                    "type": "object",
                    "required": ["x0", "u_index", "v_index"],
                    "properties": {
                        "x0": {"type": "array", "items": {"type": "number"}},
                        "u_index": {"type": "integer", "minimum": 0},
                        "v_index": {"type": "integer", "minimum": 0},
                        "start": {"type": "array", "items": {"type": "number"}},
                        "end": {"type": "array", "items": {"type": "number"}},
                        "max_endpoint_gap": {"type": "number", "minimum": 0},
                        "expect_endpoint_gap": {"type": "number", "minimum": 0},
                        "tol": {"type": "number", "exclusiveMinimum": 0},
                    },
                    "additionalProperties": False,
                },
                "oracle-compare": {
                    "type": "object",
                    "properties": {
                        "samples": {"type": "integer", "minimum": 1},
                        "steps_per_axis": {"type": "array",
                                           "items": {"type": "integer", "minimum": 0}},
                        "tol": {"type": "number", "exclusiveMinimum": 0},
                    },
                    "additionalProperties": False,
                },
            },
            "additionalProperties": False,
        },
        "output_dir": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "threads": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}


@dataclass
class RunConfig:
    """Validated run description; seed-for-seed deterministic execution."""

    game: GameSpec
    game_label: str
    mgrid: MultitimeGrid
    sgrid: StateGrid
    sides: tuple[str, ...]
    substeps_per_unit: int
    slack_c1: float
    slack_c2: float
    out_of_box: str
    checks: dict
    output_dir: str
    seed: int
    threads: int
    raw: dict = dc_field(repr=False, default=None)


def _family_from_dict(doc: dict, blocks, outputs: int, directions: int,
                      path: str) -> Family:
    kind = doc["kind"]
    try:
        if kind == "constant":
            fam = Family.constant(doc["values"], blocks)
        elif kind == "affine-in-x":
            fam = Family.affine_state(doc["linear"], doc.get("offset"), blocks=blocks)
        elif kind == "bilinear-uv":
            fam = Family.bilinear_controls(doc["quad"], doc.get("state_linear"),
                                           doc.get("offset"), blocks=blocks)
        else:
            terms = [
                [[(term["coeff"], tuple(term["powers"])) for term in comp]
                 for comp in per_dir]
                for per_dir in doc["terms"]
            ]
            fam = Family.polynomial(terms, blocks=blocks, outputs=outputs)
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError([f"{path}: {exc}"]) from exc
    if fam.outputs != outputs or fam.directions != directions:
        raise SchemaError([
            f"{path}: family has {fam.directions} directions x {fam.outputs} "
            f"outputs, expected {directions} x {outputs}"
        ])
    return fam


def _game_from_doc(doc, path: str = "game") -> tuple[GameSpec, str]:
    if isinstance(doc, str):
        if doc not in REGISTRY:
            raise SchemaError(
                [f"{path}: unknown registry game {doc!r}; available: {sorted(REGISTRY)}"]
            )
        return get_game(doc), doc
    m, n = doc["m"], doc["n"]
    controls_u = np.asarray(doc["controls_u"], dtype=float)
    controls_v = np.asarray(doc["controls_v"], dtype=float)
    if controls_u.ndim != 2 or controls_v.ndim != 2:
        raise SchemaError([f"{path}: control lists must be rectangular"])
    blocks = (m, n, controls_u.shape[1], controls_v.shape[1])
    try:
        game = GameSpec(
            m=m, n=n, horizon=doc["horizon"],
            dynamics=_family_from_dict(doc["dynamics"], blocks, n, m,
                                       f"{path}.dynamics"),
            running_cost=_family_from_dict(doc["running_cost"], blocks, 1, m,
                                           f"{path}.running_cost"),
            terminal_cost=_family_from_dict(doc["terminal_cost"], (0, n, 0, 0), 1, 1,
                                            f"{path}.terminal_cost"),
            controls_u=controls_u, controls_v=controls_v,
            name=doc.get("name", "inline"),
        )
    except ValueError as exc:
        raise SchemaError([f"{path}: {exc}"]) from exc
    return game, game.name


def _test_fn_from_doc(doc: dict, m: int, n: int, path: str) -> TestFunction:
    try:
        return TestFunction(m, n, doc.get("constant", 0.0), doc.get("linear"),
                            doc.get("quadratic"))
    except ValueError as exc:
        raise SchemaError([f"{path}: {exc}"]) from exc


def parse_config(document) -> RunConfig:
    """Validate a config document (dict or JSON text) into a RunConfig.

    Raises SchemaError carrying one "path: message" entry per problem.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError([f"<document>: invalid JSON: {exc}"]) from exc
    if not isinstance(document, dict):
        raise SchemaError(["<document>: top level must be a JSON object"])

    problems = []

    def collect(schema, payload, prefix=""):
        validator = jsonschema.Draft202012Validator(schema)
        for err in sorted(validator.iter_errors(payload),
                          key=lambda e: list(e.absolute_path)):
            loc = ".".join(str(p) for p in err.absolute_path)
            loc = ".".join(filter(None, (prefix, loc))) or "<root>"
            problems.append(f"{loc}: {err.message}")

    collect(CONFIG_SCHEMA, document)
    if isinstance(document.get("game"), dict):
        collect(_INLINE_GAME_SCHEMA, document["game"], "game")
    if problems:
        raise SchemaError(problems)

    game, label = _game_from_doc(document["game"])

    mg_doc = document.get("multitime_grid", {"counts": [11] * game.m})
    if len(mg_doc["counts"]) != game.m:
        raise SchemaError([
            f"multitime_grid.counts: expected {game.m} entries, got {len(mg_doc['counts'])}"
        ])
    mgrid = MultitimeGrid(game.horizon, tuple(mg_doc["counts"]))

    sg_doc = document.get("state_grid", {
        "low": [-2.0] * game.n, "high": [2.0] * game.n, "counts": [21] * game.n,
    })
    try:
        if not (len(sg_doc["low"]) == len(sg_doc["high"]) == len(sg_doc["counts"]) == game.n):
            raise ValueError(f"state grid axes must all have {game.n} entries")
        if any(hi <= lo for lo, hi in zip(sg_doc["low"], sg_doc["high"])):
            raise ValueError("state_grid.high must exceed state_grid.low per axis")
        sgrid = StateGrid.uniform(sg_doc["low"], sg_doc["high"], sg_doc["counts"])
    except ValueError as exc:
        raise SchemaError([f"state_grid: {exc}"]) from exc

    sv = document.get("solver", {})
    sides = tuple(sv.get("sides", ["upper", "lower"]))
    checks = dict(document.get("checks", {}))

    problems = []
    if "isaacs" in checks and not {"upper", "lower"} <= set(sides):
        problems.append("checks.isaacs: requires both sides to be solved")
    for name in ("dpp", "viscosity"):
        side = checks.get(name, {}).get("side", "upper")
        if name in checks and side not in sides:
            problems.append(f"checks.{name}: side {side!r} is not being solved")
    for name, key in (("lemma", "margins"), ("lemma", "span")):
        if name in checks and len(checks[name][key]) != game.m:
            problems.append(f"checks.{name}.{key}: expected {game.m} entries")
    if "path-independence" in checks:
        doc = checks["path-independence"]
        if doc["u_index"] >= game.num_u or doc["v_index"] >= game.num_v:
            problems.append("checks.path-independence: control index out of range")
        if game.m != 2:
            problems.append("checks.path-independence: built-in orders need m == 2")
    if problems:
        raise SchemaError(problems)

    return RunConfig(
        game=game,
        game_label=label,
        mgrid=mgrid,
        sgrid=sgrid,
        sides=sides,
        substeps_per_unit=int(sv.get("substeps_per_unit", 64)),
        slack_c1=float(sv.get("slack_c1", 2.0)),
        slack_c2=float(sv.get("slack_c2", 2.0)),
        out_of_box=sv.get("out_of_box", DEFAULT_OUT_OF_BOX),
        checks=checks,
        output_dir=document.get("output_dir", "out"),
        seed=int(document.get("seed", 0)),
        threads=int(document.get("threads", 1)),
        raw=document,
    )


# -- individual checks --------------------------------------------------------


def _closed_form_expected(config: RunConfig):
    """Closed form g(x) + sum_a c_a (T_a - t_a); only exists when the dynamics
    vanish identically and the running cost is constant per direction."""
    game = config.game
    if any(comp for per_dir in game.dynamics.terms for comp in per_dir):
        return None
    rates = []
    for per_dir in game.running_cost.terms:
        comp = per_dir[0]
        if any(any(pw) for _, pw in comp):
            return None
        rates.append(sum(c for c, _ in comp))
    return np.asarray(rates)


def _check_closed_form(config: RunConfig, fields, rng, doc):
    tol = doc.get("tol", 1e-9)
    rates = _closed_form_expected(config)
    if rates is None:
        return {"passed": False,
                "summary": "game has moving state or non-constant cost; "
                           "no closed form available"}
    pts = config.sgrid.nodes()
    gvals = config.game.terminal_at(pts).reshape(config.sgrid.shape)
    worst = 0.0
    for side, field in fields.items():
        for t_index in np.ndindex(config.mgrid.shape):
            t = config.mgrid.point(t_index)
            expected = gvals + float(rates @ (config.game.horizon - t))
            worst = max(worst, float(np.max(np.abs(field.values[t_index] - expected))))
    return {"passed": worst <= tol, "max_abs_error": worst, "tol": tol,
            "summary": f"max closed-form error {worst:.3e} (tol {tol:g})"}


def _check_isaacs(config: RunConfig, fields, rng, doc):
    order_tol = doc.get("order_tol", 1e-9)
    gap = fields["upper"].values - fields["lower"].values
    min_gap = float(gap.min())
    max_gap = float(gap.max())
    flat = int(np.argmax(gap))
    t_at = np.unravel_index(flat, gap.shape)[:config.game.m]
    result = {
        "min_gap": min_gap,
        "max_gap": max_gap,
        "max_at_multitime": [float(c) for c in config.mgrid.point(t_at)],
        "order_tol": order_tol,
    }
    passed = min_gap >= -order_tol
    if "expect_max" in doc:
        tol = doc.get("tol", 1e-6)
        passed = passed and abs(max_gap - doc["expect_max"]) <= tol
        result["expect_max"] = doc["expect_max"]
        result["tol"] = tol
    result["passed"] = passed
    result["summary"] = f"gap field in [{min_gap:.3e}, {max_gap:.6f}]"
    return result


def _check_dpp(config: RunConfig, fields, rng, doc):
    side = doc.get("side", "upper")
    count = doc.get("count", 20)
    steps = np.asarray(doc.get("span_steps", [1] * config.game.m), dtype=int)
    tol = doc.get("tol", 1e-9)
    field = fields[side]
    span = steps * config.mgrid.spacings
    residuals = []
    for _ in range(count):
        t_index = tuple(int(rng.integers(0, c - s)) for c, s in
                        zip(config.mgrid.counts, steps))
        x_index = tuple(int(rng.integers(0, c)) for c in config.sgrid.shape)
        residuals.append(dpp_residual(config.game, field, t_index, x_index, span))
    worst = float(np.max(np.abs(residuals)))
    return {"passed": worst <= tol, "max_abs_residual": worst,
            "median_abs_residual": float(np.median(np.abs(residuals))),
            "count": count, "tol": tol, "side": side,
            "summary": f"max |residual| {worst:.3e} over {count} nodes (tol {tol:g})"}


def _check_viscosity(config: RunConfig, fields, rng, doc):
    side = doc.get("side", "upper")
    count = doc.get("count", 20)
    field = fields[side]
    tau = (config.slack_c1 * float(np.max(config.mgrid.spacings))
           + config.slack_c2 * float(np.max(config.sgrid.spacings)))
    total, failures = 0, 0
    worst_margin = None
    for _ in range(count):
        test_fn = TestFunction.random(config.game.m, config.game.n, rng)
        findings = viscosity_check(config.game, field, test_fn, side,
                                   config.slack_c1, config.slack_c2)
        for finding in findings:
            total += 1
            failures += not finding.passed
            for _, lhs, _ in finding.per_axis:
                margin = lhs + tau if finding.kind == "max" else tau - lhs
                worst_margin = margin if worst_margin is None else min(worst_margin, margin)
    result = {"passed": failures == 0, "findings": total, "failures": failures,
              "sweeps": count, "slack": tau, "side": side,
              "worst_margin": worst_margin}
    result["summary"] = (
        f"{total} findings, {failures} failures"
        + (f", worst margin {worst_margin:.4f}" if worst_margin is not None
           else ", no extrema touched")
    )
    return result


def _check_lemma(config: RunConfig, fields, rng, doc):
    game = config.game
    test_fn = _test_fn_from_doc(doc["test_fn"], game.m, game.n, "checks.lemma.test_fn")
    start = np.asarray(doc.get("start", [0.0] * game.m), dtype=float)
    x0 = np.asarray(doc.get("x0", [0.0] * game.n), dtype=float)
    try:
        res = lemma_integral_check(game, start, x0, test_fn, doc["margins"],
                                   doc["span"], doc["branch"],
                                   substeps_per_unit=config.substeps_per_unit)
    except BranchPreconditionFailed as exc:
        return {"passed": False, "summary": f"precondition failed: {exc}"}
    certificate = (res.certificate if isinstance(res.certificate, int)
                   else list(res.certificate.table))
    return {
        "passed": res.passed,
        "branch": res.branch,
        "certificate": certificate,
        "per_axis": [
            {"axis": a, "lhs": lhs, "rhs": rhs, "ok": ok}
            for a, lhs, rhs, ok in res.per_axis
        ],
        "per_axis_ok": all(ok for _, _, _, ok in res.per_axis),
        "summed": {"lhs": res.summed[0], "rhs": res.summed[1], "ok": res.summed[2]},
        "summary": f"{res.branch} summed lhs {res.summed[0]:.4f} vs rhs {res.summed[1]:.4f}",
    }


def _check_path_independence(config: RunConfig, fields, rng, doc):
    game = config.game
    start = np.asarray(doc.get("start", [0.0] * game.m), dtype=float)
    end = np.asarray(doc.get("end", game.horizon), dtype=float)
    res = path_independence_check(game, start, end,
                                  (doc["u_index"], doc["v_index"]), doc["x0"],
                                  substeps_per_unit=config.substeps_per_unit)
    passed = True
    if "max_endpoint_gap" in doc:
        passed = passed and res.endpoint_gap <= doc["max_endpoint_gap"]
    if "expect_endpoint_gap" in doc:
        tol = doc.get("tol", 1e-3)
        passed = passed and abs(res.endpoint_gap - doc["expect_endpoint_gap"]) <= tol
    return {"passed": passed, "endpoint_gap": res.endpoint_gap,
            "cost_gap": res.cost_gap,
            "summary": f"endpoint gap {res.endpoint_gap:.6e}, "
                       f"cost gap {res.cost_gap:.6e}"}


def _check_oracle_compare(config: RunConfig, fields, rng, doc):
    game, mgrid, sgrid = config.game, config.mgrid, config.sgrid
    tol = doc.get("tol", 1e-6)
    count = doc.get("samples", 5)
    from .verify import MAX_TREE_STEPS

    if "steps_per_axis" in doc:
        steps = np.asarray(doc["steps_per_axis"], dtype=int)
        if np.any(steps > np.asarray(mgrid.counts) - 1):
            return {"passed": False,
                    "summary": "steps_per_axis exceeds the grid extent"}
        t_candidates = [tuple(np.asarray(mgrid.counts) - 1 - steps)]
    else:
        t_candidates = [
            idx for idx in np.ndindex(mgrid.shape)
            if 1 <= sum(c - 1 - i for c, i in zip(mgrid.counts, idx)) <= MAX_TREE_STEPS
        ]
    # sample states from the middle of the box so the comparison is not
    # dominated by characteristics leaving the gridded region
    x_lo = [c // 4 for c in sgrid.shape]
    x_hi = [max(lo + 1, 3 * c // 4 + 1) for lo, c in zip(x_lo, sgrid.shape)]

    worst = 0.0
    tried = []
    try:
        for _ in range(count):
            t_index = t_candidates[int(rng.integers(0, len(t_candidates)))]
            x_index = tuple(int(rng.integers(lo, hi)) for lo, hi in zip(x_lo, x_hi))
            steps = [c - 1 - i for c, i in zip(mgrid.counts, t_index)]
            for side in config.sides:
                res = oracle_value(game, mgrid.point(t_index), sgrid.node(x_index),
                                   steps, side=side)
                gap = abs(res.value - fields[side].value_at(t_index, x_index))
                worst = max(worst, gap)
                tried.append({"side": side, "t_index": list(t_index),
                              "x_index": list(x_index), "gap": gap})
    except TreeTooLarge as exc:
        return {"passed": False, "summary": f"TreeTooLarge: {exc}"}
    return {"passed": worst <= tol, "max_gap": worst, "tol": tol,
            "samples": tried,
            "summary": f"max |oracle - field| {worst:.3e} (tol {tol:g})"}


_CHECK_RUNNERS = {
    "closed-form": _check_closed_form,
    "isaacs": _check_isaacs,
    "dpp": _check_dpp,
    "viscosity": _check_viscosity,
    "lemma": _check_lemma,
    "path-independence": _check_path_independence,
    "oracle-compare": _check_oracle_compare,
}


# -- pipeline -------------------------------------------------------------


def run(config: RunConfig, only=None, out_dir=None, seed=None, threads=None) -> int:
    """Solve the configured sides, run the selected checks, write outputs.

    `only` restricts execution to a subset of configured check names (None
    runs them all).  Returns the process exit code.
    """
    seed = config.seed if seed is None else seed
    threads = config.threads if threads is None else threads
    out = Path(config.output_dir if out_dir is None else out_dir)
    out.mkdir(parents=True, exist_ok=True)

    if only is not None:
        missing = [name for name in only if name not in config.checks]
        if missing:
            raise SchemaError(
                [f"checks.{name}: not configured, required by this subcommand"
                 for name in missing]
            )

    started = time.perf_counter()
    rng = np.random.default_rng(seed)

    fields = {}
    report = {
        "game": config.game_label,
        "seed": seed,
        "grids": {
            "horizon": [float(h) for h in config.game.horizon],
            "multitime_counts": list(config.mgrid.counts),
            "state_counts": list(config.sgrid.shape),
            "state_low": [float(a[0]) for a in config.sgrid.axes],
            "state_high": [float(a[-1]) for a in config.sgrid.axes],
        },
        "solves": {},
        "checks": {},
    }
    for side in config.sides:
        field = solve_value(config.game, config.mgrid, config.sgrid, side,
                            out_of_box=config.out_of_box, workers=threads)
        fields[side] = field
        rows = write_field_csv(field, out / f"values_{side}.csv")
        report["solves"][side] = {
            "compatibility_residual": field.compatibility_residual,
            "out_of_box_count": field.out_of_box_count,
            "out_of_box": field.out_of_box,
            "csv_rows": rows,
            "terminal_gap": terminal_condition_check(field, config.game),
        }

    all_passed = True
    for name in CHECK_ORDER:
        if name not in config.checks:
            continue
        if only is not None and name not in only:
            continue
        outcome = _CHECK_RUNNERS[name](config, fields, rng, config.checks[name])
        report["checks"][name] = outcome
        all_passed &= bool(outcome["passed"])
    report["passed"] = all_passed

    write_report_json(report, out / "report.json")
    wall = time.perf_counter() - started
    (out / "summary.txt").write_text(render_summary(report, wall), encoding="utf-8")
    print(render_summary(report, wall), end="")
    return 0 if all_passed else 1


_SUBCOMMAND_CHECKS = {
    "solve": (),
    "dpp-check": ("dpp",),
    "viscosity": ("viscosity",),
    "isaacs": ("isaacs",),
    "lemma": ("lemma",),
    "path-check": ("path-independence",),
    "oracle-compare": ("oracle-compare",),
    "all": None,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multitime-games",
        description="Solve multitime zero-sum game value fields and run "
                    "structural checks from a JSON configuration.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="path to the JSON run config")
    common.add_argument("--out", default=None, help="output directory override")
    common.add_argument("--seed", type=int, default=None, help="seed override")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads for the grid solve")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, checks in _SUBCOMMAND_CHECKS.items():
        if name == "solve":
            text = "solve the configured sides and export CSVs"
        elif name == "all":
            text = "solve and run every configured check"
        else:
            text = f"solve and run the {checks[0]} check"
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"config error: {exc}")
        return 2
    try:
        config = parse_config(text)
        return run(config, only=_SUBCOMMAND_CHECKS[args.command],
                   out_dir=args.out, seed=args.seed, threads=args.threads)
    except SchemaError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}")
        return 2
    except MultitimeGameError as exc:
        print(f"run failed: {type(exc).__name__}: {exc}")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
