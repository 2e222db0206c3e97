"""``effect-factor``: batch runs over JSON configs.

Exit status: 0 when every check passes, 1 when a check fails (the report is
still written), 2 for configuration errors, 3 when an instance exceeds a cap.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Optional, Sequence

from . import __version__, finset
from .analysis import FORMULAS, kernel_partition, modularity_profile, stability_check
from .faults import corrupted_powerset, merge_pair, remove_element
from .finset import FinSet, InstanceTooLarge
from .monad import KINDS, monad_spec
from .presets import PRESETS, identity_left_or, preset
from .signature import (
    DEFAULT_ROUND_WORK,
    Interpretation,
    Operation,
    SignatureError,
    check_lemma2_stabilization,
    factor,
    interpretation,
    render,
    verify_theorem1,
)

SCHEMA_VERSION = 1
SUBCOMMANDS = ("factor", "laws", "theory", "stability", "modularity", "presets")
# extra interpretations that only make sense as comparison targets
FIXTURES = {"identity-left-or": identity_left_or}
# injected faults: the first applies to `laws`, the others to `factor`
FAULTS = ("corrupted-bind", "merge-pair", "remove-element")
# partitions with more terms than this list block representatives only
PARTITION_LISTING_LIMIT = 200


class ConfigError(ValueError):
    pass


@dataclass
class ModelConfig:
    """Either a preset id or an explicit monad, signature and effect tables."""

    preset: Optional[str] = None
    size: int = 2
    monad: Optional[dict] = None
    signature: Optional[list] = None
    effects: Optional[dict] = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class RunConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    compare: Optional[ModelConfig] = None
    objects: list = field(default_factory=lambda: [0, 1, 2, 3])
    theorem_objects: Optional[list] = None
    depth: int = 3
    term_depth: int = 2
    budget: int = 10**5
    seed: int = 0
    max_carrier: int = finset.DEFAULT_MAX_CARRIER
    max_round_work: int = DEFAULT_ROUND_WORK
    formula: Optional[str] = None
    fault: Optional[dict] = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"version": SCHEMA_VERSION, **self.model.to_dict()}
        if self.compare is not None:
            out["compare"] = self.compare.to_dict()
        for f in fields(self):
            if f.name in ("model", "compare"):
                continue
            value = getattr(self, f.name)
            if value is not None:
                out[f.name] = value
        return out


_MODEL_KEYS = {f.name for f in fields(ModelConfig)}
_RUN_KEYS = {f.name for f in fields(RunConfig)} - {"model"}
_IGNORED = {"version", "effects_decoded", "comment"}


def _model(data: dict, where: str) -> ModelConfig:
    model = ModelConfig(**{k: data[k] for k in _MODEL_KEYS if k in data})
    if model.preset is None and model.monad is None:
        raise ConfigError(f"{where}: give either 'preset' or 'monad'")
    if not isinstance(model.size, int) or model.size < 0:
        raise ConfigError(f"{where}.size: must be a non-negative integer")
    if model.preset is not None and model.preset not in PRESETS and model.preset not in FIXTURES:
        raise ConfigError(f"{where}.preset: unknown preset id {model.preset!r}")
    if model.preset is None and model.signature is None:
        model.signature = []
    return model


def parse_config(text: str) -> RunConfig:
    """Parse a JSON run configuration; omitted fields take their defaults."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    version = data.get("version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"version: unsupported schema version {version!r}")
    unknown = set(data) - _MODEL_KEYS - _RUN_KEYS - _IGNORED
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(sorted(unknown))}")
    cfg = RunConfig(model=_model(data, "config"))
    if "compare" in data:
        if not isinstance(data["compare"], dict):
            raise ConfigError("compare: must be an object")
        cfg.compare = _model(data["compare"], "compare")
    for key in _RUN_KEYS - {"compare"}:
        if key in data:
            setattr(cfg, key, data[key])
    for key in ("depth", "term_depth", "budget", "seed", "max_carrier", "max_round_work"):
        value = getattr(cfg, key)
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise ConfigError(f"{key}: must be a non-negative integer, got {value!r}")
    for key in ("objects", "theorem_objects"):
        value = getattr(cfg, key)
        if value is not None and (not isinstance(value, list) or not all(isinstance(v, int) and v >= 0 for v in value)):
            raise ConfigError(f"{key}: must be a list of non-negative integers")
    if cfg.fault is not None:
        if not isinstance(cfg.fault, dict) or cfg.fault.get("kind") not in FAULTS:
            raise ConfigError(f"fault.kind: expected one of {', '.join(FAULTS)}")
        obj = cfg.fault.get("object", 2)
        if not isinstance(obj, int) or obj < 0:
            raise ConfigError("fault.object: must be a non-negative integer")
    if cfg.formula is not None and cfg.formula not in FORMULAS:
        raise ConfigError(f"formula: unknown formula id {cfg.formula!r}")
    return cfg


def build_interpretation(model: ModelConfig, where: str = "config") -> Interpretation:
    if model.preset is not None:
        if model.preset in FIXTURES:
            return FIXTURES[model.preset]()
        return preset(model.preset, model.size)
    spec = dict(model.monad or {})
    kind = spec.pop("kind", None)
    if kind not in KINDS:
        raise ConfigError(f"{where}.monad.kind: expected one of {', '.join(KINDS)}, got {kind!r}")
    try:
        M = monad_spec(kind, **spec)
    except ValueError as exc:
        raise ConfigError(f"{where}.monad: {exc}") from None
    ops = []
    for i, op in enumerate(model.signature or []):
        try:
            A = FinSet(op["A"], op.get("A_labels"))
            B = FinSet(op["B"], op.get("B_labels"))
            ops.append(Operation(op["name"], A, B))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{where}.signature[{i}]: {exc}") from None
    try:
        return interpretation(M, ops, model.effects or {})
    except SignatureError as exc:
        raise ConfigError(f"{where}.effects: {exc}") from None


def describe_interpretation(interp: Interpretation) -> dict:
    """Explicit tables with their decoded values alongside."""
    M = interp.monad
    return {
        "monad": {"kind": M.kind, **M.params},
        "signature": [
            {"name": op.name, "A": op.A.size, "B": op.B.size,
             **({"A_labels": list(op.A.labels)} if op.A.labels else {}),
             **({"B_labels": list(op.B.labels)} if op.B.labels else {})}
            for op in interp.signature
        ],
        "effects": {op.name: list(interp.gen(op.name).table) for op in interp.signature},
        "effects_decoded": {
            op.name: [_jsonable(M.decode(op.B.size, t)) for t in interp.gen(op.name).table] for op in interp.signature
        },
    }


def _jsonable(value: Any) -> Any:
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    return value


# -- subcommands -------------------------------------------------------------------


def _checks(report: dict, name: str, passed: bool, **detail) -> None:
    report["checks"].append({"name": name, "passed": bool(passed), **detail})


def run_factor(cfg: RunConfig, report: dict) -> None:
    interp = build_interpretation(cfg.model)
    report["interpretation"] = describe_interpretation(interp)
    F = factor(interp, cfg.objects, cfg.max_round_work)
    if cfg.fault is not None:
        kind, obj = cfg.fault["kind"], cfg.fault.get("object", 2)
        if kind == "corrupted-bind":
            raise ConfigError("fault.kind: corrupted-bind applies to the laws subcommand")
        if len(F.saturate(obj).elements) < 2:
            raise ConfigError(f"fault.object: R {obj} has fewer than two elements")
        F = merge_pair(F, obj) if kind == "merge-pair" else remove_element(F, obj)
    rows = []
    for n in cfg.objects:
        entry = F.saturate(n)
        lemma = check_lemma2_stabilization(F, n)
        rows.append({
            "X": n,
            "T": entry.carrier_size,
            "R": len(entry.elements),
            "n_bijective": len(entry.elements) == entry.carrier_size,
            "layer_trace": list(entry.layer_trace),
            "rounds_to_fixpoint": entry.rounds_to_fixpoint,
        })
        _checks(report, f"lemma2[X={n}]", lemma.passed, **{k: v for k, v in lemma.to_dict().items() if k == "defect"})
    report["results"]["objects"] = rows
    theorem_objects = cfg.theorem_objects if cfg.theorem_objects is not None else [n for n in cfg.objects if n <= 2]
    thm = verify_theorem1(F, theorem_objects, cfg.budget, cfg.seed, cfg.term_depth)
    report["results"]["theorem_objects"] = theorem_objects
    report["results"]["theorem1"] = thm.to_dict()
    for r in thm.results:
        _checks(report, f"theorem1:{r.name}", r.passed, **({"counterexample": r.counterexample} if r.counterexample else {}))


def run_laws(cfg: RunConfig, report: dict) -> None:
    from .monad import check_monad_laws

    if cfg.model.monad is not None:
        spec = dict(cfg.model.monad)
        try:
            M = monad_spec(spec.pop("kind", None), **spec)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"config.monad: {exc}") from None
    else:
        M = build_interpretation(cfg.model).monad
    if cfg.fault is not None:
        if cfg.fault["kind"] != "corrupted-bind":
            raise ConfigError(f"fault.kind: {cfg.fault['kind']} applies to the factor subcommand")
        if M.kind != "powerset":
            raise ConfigError("fault.kind: corrupted-bind is defined for the powerset monad")
        M = corrupted_powerset()
    laws = check_monad_laws(M, [FinSet(n) for n in cfg.objects], cfg.budget, cfg.seed)
    report["results"]["laws"] = laws.to_dict()
    for r in laws.results:
        _checks(report, r.name, r.passed, **({"counterexample": r.counterexample} if r.counterexample else {}))


def run_theory(cfg: RunConfig, report: dict) -> None:
    interp = build_interpretation(cfg.model)
    report["interpretation"] = describe_interpretation(interp)
    rows = []
    for n in cfg.objects:
        part = kernel_partition(interp.signature, interp, n, cfg.depth)
        row = part.to_dict(show_terms=len(part.terms) <= PARTITION_LISTING_LIMIT)
        if "partition" not in row:
            row["representatives"] = [
                {"term": render(part.terms[members[0]], interp.signature), "size": len(members)} for members in part.blocks
            ]
        rows.append(row)
    report["results"]["theory"] = rows


def run_stability(cfg: RunConfig, report: dict) -> None:
    if cfg.compare is None:
        raise ConfigError("stability needs a 'compare' model")
    interpA = build_interpretation(cfg.model)
    interpB = build_interpretation(cfg.compare, "compare")
    report["interpretation"] = describe_interpretation(interpA)
    report["compare_interpretation"] = describe_interpretation(interpB)
    try:
        stab = stability_check(interpA.signature, interpA, interpB, cfg.objects, cfg.depth)
    except SignatureError as exc:
        raise ConfigError(f"compare: {exc}") from None
    report["results"]["stability"] = stab.to_dict()
    for row in stab.rows:
        _checks(report, f"stability[X={row['object']}]", row["equal"],
                **({"distinguishing": row["distinguishing"]} if "distinguishing" in row else {}))


def run_modularity(cfg: RunConfig, report: dict) -> None:
    interp = build_interpretation(cfg.model)
    formula = cfg.formula
    if formula is None:
        if cfg.model.preset not in PRESETS:
            raise ConfigError("modularity needs a 'formula' for non-preset models")
        formula = PRESETS[cfg.model.preset].formula
    report["interpretation"] = describe_interpretation(interp)
    profile = modularity_profile(interp, interp.signature, cfg.objects, formula)
    report["results"]["modularity"] = profile.to_dict()
    for row in profile.rows:
        _checks(report, f"modularity[X={row['X']}]", row["verdict"] == "match", R=row["R"], expected=row["expected"])


def run_presets(report: dict) -> None:
    listing = []
    for name, p in PRESETS.items():
        interp = p()
        listing.append({
            "name": name,
            "monad": interp.monad.describe(),
            "operations": [f"{op.name}: {op.A.size} -> {op.B.size}" for op in interp.signature],
            "formula": p.formula,
            "description": p.description,
        })
    report["results"]["presets"] = listing


RUNNERS = {
    "factor": run_factor,
    "laws": run_laws,
    "theory": run_theory,
    "stability": run_stability,
    "modularity": run_modularity,
}


def run(subcommand: str, cfg: Optional[RunConfig], timing: bool = False) -> dict:
    """Execute one subcommand and return the report as a plain dict."""
    if subcommand not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    report: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "tool": "effect-factor",
        "tool_version": __version__,
        "subcommand": subcommand,
        "config": None if cfg is None else cfg.to_dict(),
        "seed": None if cfg is None else cfg.seed,
        "checks": [],
        "results": {},
    }
    start = time.perf_counter()
    if subcommand == "presets":
        run_presets(report)
    else:
        if cfg is None:
            raise ConfigError(f"{subcommand} needs --config")
        with finset.carrier_cap(cfg.max_carrier):
            RUNNERS[subcommand](cfg, report)
    report["passed"] = all(c["passed"] for c in report["checks"])
    if timing:
        report["elapsed_seconds"] = round(time.perf_counter() - start, 3)
    return report


# -- output ---------------------------------------------------------------------------


def emit_report(report: dict, fmt: str = "machine") -> str:
    if fmt == "machine":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "human":
        return _human(report)
    raise ValueError(f"unknown format {fmt!r}")


def _table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> list[str]:
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return lines


def _human(report: dict) -> str:
    out = [f"effect-factor {report['tool_version']}  {report['subcommand']}"]
    cfg = report.get("config")
    if cfg:
        model = cfg.get("preset") or cfg.get("monad", {}).get("kind")
        out.append(f"model: {model}  objects: {cfg.get('objects')}  depth: {cfg.get('depth')}  "
                   f"budget: {cfg.get('budget')}  seed: {cfg.get('seed')}")
    res = report["results"]
    if "presets" in res:
        out += _table(["preset", "monad", "operations", "formula"],
                      [[p["name"], p["monad"], ", ".join(p["operations"]) or "-", p["formula"]] for p in res["presets"]])
    if "objects" in res:
        out.append("")
        out += _table(["|X|", "|T X|", "|R X|", "n bijective", "rounds", "layer trace"],
                      [[r["X"], r["T"], r["R"], r["n_bijective"], r["rounds_to_fixpoint"], r["layer_trace"]] for r in res["objects"]])
    for key in ("theorem1", "laws"):
        if key in res:
            out.append("")
            out += _table(["check", "result", "cases", "mode", "skipped"],
                          [[r["name"], "pass" if r["passed"] else "FAIL", r["cases"], r["mode"], ",".join(r.get("skipped", [])) or "-"]
                           for r in res[key]["results"]])
    if "theory" in res:
        for row in res["theory"]:
            out.append("")
            out.append(f"|X| = {row['object']}: {row['terms']} terms of depth <= {row['depth']} in {row['blocks']} blocks")
            if "partition" in row:
                for members in row["partition"]:
                    out.append("  { " + ", ".join(members) + " }")
            else:
                for rep in row["representatives"]:
                    out.append(f"  [{rep['size']}] {rep['term']}")
    if "stability" in res:
        out.append("")
        out += _table(["|X|", "terms", "blocks A", "blocks B", "equal", "distinguishing"],
                      [[r["object"], r["terms"], r["blocks_A"], r["blocks_B"], r["equal"],
                        _distinguishing(r.get("distinguishing"))] for r in res["stability"]["rows"]])
    if "modularity" in res:
        m = res["modularity"]
        out.append("")
        out.append(f"expected |R X| = {m['expression']} with parameter {m['param']}")
        out += _table(["|X|", "|R X|", "expected", "verdict"], [[r["X"], r["R"], r["expected"], r["verdict"]] for r in m["rows"]])
    failed = [c for c in report["checks"] if not c["passed"]]
    for c in failed:
        detail = c.get("counterexample") or c.get("distinguishing") or c.get("defect")
        out.append(f"FAILED {c['name']}: {json.dumps(detail, sort_keys=True)}")
    if "elapsed_seconds" in report:
        out.append(f"elapsed: {report['elapsed_seconds']} s")
    out.append("")
    out.append("result: " + ("PASS" if report["passed"] else "FAIL"))
    return "\n".join(out) + "\n"


def _distinguishing(d: Optional[dict]) -> str:
    if not d:
        return "-"
    return f"{d['terms'][0]} ~ {d['terms'][1]} merged in {d['merged_in']}"


# -- entry point ------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="effect-factor", description="Factor free-monad morphisms into catalog monads.")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--format", choices=("human", "machine"), default="human")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--budget", type=int)
    parser.add_argument("--max-carrier", type=int)
    parser.add_argument("--depth", type=int)
    parser.add_argument("--timing", action="store_true", help="include wall-clock time (makes reports non-reproducible)")
    parser.add_argument("--output", help="write the report here instead of stdout")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cfg = None
    try:
        if args.config is not None:
            with open(args.config, encoding="utf-8") as fh:
                cfg = parse_config(fh.read())
            for name in ("seed", "budget", "max_carrier", "depth"):
                value = getattr(args, name)
                if value is not None:
                    setattr(cfg, name, value)
        report = run(args.subcommand, cfg, args.timing)
    except (ConfigError, OSError) as exc:
        print(f"effect-factor: config error: {exc}", file=sys.stderr)
        return 2
    except InstanceTooLarge as exc:
        print(f"effect-factor: instance too large: {exc}", file=sys.stderr)
        return 3
    text = emit_report(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
