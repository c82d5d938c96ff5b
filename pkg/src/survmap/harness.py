"""Experiment pipelines: load an instance, run the heuristic / verifier / model
emission, and write reproducible reports.

Every output except ``timing.csv`` depends only on the experiment spec, so
repeated runs produce byte-identical files.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

from survmap.errors import DomainError, StageError, SurvmapError
from survmap.failure_model import SrlgSet, gen_3srlg_set, k_failure_set
from survmap.heuristic import HeuristicConfig, ProtectionPlan, run_srlg_heuristic
from survmap.instance_io import Instance, format_instance, read_instance, write_instance
from survmap.milp import build_model, emit_lp, model_size_report
from survmap.milp.sizes import ModelDims
from survmap.net_model import LogicalNetwork, Mapping, PhysicalNetwork
from survmap.topologies import LOGICAL_CATALOG, PHYSICAL_CATALOG, logical_by_name, physical_by_name, fig2_instance
from survmap.verifier import (
    SurvivabilityReport,
    format_csv,
    format_table,
    verify_k,
    verify_srlg,
)

PIPELINES = ("heuristic", "verify", "milp-emit", "full")
MODES = ("srlg", "k")


@dataclass(frozen=True)
class ExperimentSpec:
    """One run.

    ``physical`` and ``logical`` are catalogue names (NSF, NSF1, CLN1..4,
    FIG2) or instance file paths; ``logical=None`` takes the logical network
    (and any routes) from the physical source. In SRLG mode the scenarios come
    from ``srlg_file``, from ``srlg_count`` generated groups, or from the
    physical source itself; in k mode ``k`` is set and no SRLG source is.
    Generated groups are drawn on ``srlg_base`` (default: the physical
    network) and cut to ``srlg_count``.
    """

    physical: str
    logical: str | None = None
    mode: str = "srlg"
    srlg_file: str | None = None
    srlg_count: int | None = None
    srlg_seed: int = 0
    srlg_base: str | None = None
    k: int | None = None
    pipeline: str = "heuristic"
    out_dir: str | None = None
    family: str | None = None
    root: int | None = None
    config: HeuristicConfig = field(default_factory=HeuristicConfig)
    name: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}")
        if self.pipeline not in PIPELINES:
            raise DomainError(f"pipeline must be one of {PIPELINES}")
        srlg_sources = (self.srlg_file is not None) + (self.srlg_count is not None)
        if self.mode == "k":
            if self.k is None or srlg_sources:
                raise DomainError("k mode needs k and no SRLG source")
        else:
            if self.k is not None:
                raise DomainError("srlg mode does not take k")
            if srlg_sources > 1:
                raise DomainError("give either an SRLG file or a generated count, not both")
        if self.family is not None and not self.family.endswith("-" + self.mode):
            raise DomainError(f"family {self.family} does not match mode {self.mode}")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        parts = [Path(self.physical).stem]
        if self.logical:
            parts.append(Path(self.logical).stem)
        if self.mode == "k":
            parts.append(f"k{self.k}")
        elif self.srlg_count is not None:
            parts.append(f"R{self.srlg_count}")
        return "+".join(parts)


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    phys: PhysicalNetwork
    logical: LogicalNetwork
    scenarios: SrlgSet | None
    metrics: dict[str, str]
    report: SurvivabilityReport | None = None
    plan: ProtectionPlan | None = None
    lp_text: str | None = None
    timings_ms: dict[str, float] = field(default_factory=dict)
    files: list[str] = field(default_factory=list)

    @property
    def survivable(self) -> bool | None:
        return None if self.report is None else self.report.survivable


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except SurvmapError as exc:
        raise StageError(name, exc) from exc
    except OSError as exc:
        raise StageError(name, exc) from exc


def _is_builtin(name: str, catalog) -> bool:
    return name.upper() in catalog or name.upper() in ("FIG2", "NSF(1)")


def _load_physical(name: str) -> Instance:
    if name.upper() == "FIG2":
        return fig2_instance()
    if _is_builtin(name, PHYSICAL_CATALOG):
        return Instance(physical_by_name(name))
    return read_instance(name)


def _load_logical(name: str) -> LogicalNetwork:
    if _is_builtin(name, LOGICAL_CATALOG):
        return logical_by_name(name)
    return read_instance(name).require_logical()


def generate_srlgs(phys: PhysicalNetwork, seed: int, count: int) -> SrlgSet:
    """``count`` 3-SRLGs; fewer than ``ceil(|E|/3)`` groups are a prefix of a covering set."""
    if count < 1:
        raise DomainError("SRLG count must be at least 1")
    full = max(count, math.ceil(phys.num_edges / 3))
    return gen_3srlg_set(phys, seed, full).prefix(count)


def load(spec: ExperimentSpec) -> tuple[PhysicalNetwork, LogicalNetwork, SrlgSet | None, Mapping | None]:
    source = _load_physical(spec.physical)
    phys = source.phys
    if spec.logical is None:
        logical = source.require_logical()
        mapping = source.mapping
    else:
        logical = _load_logical(spec.logical)
        mapping = None
    logical.check_against(phys)
    srlgs = None
    if spec.mode == "srlg":
        if spec.srlg_file is not None:
            srlgs = read_instance(spec.srlg_file).srlgs
            if srlgs is None:
                raise DomainError(f"{spec.srlg_file} has no srlg records")
        elif spec.srlg_count is not None:
            base = _load_physical(spec.srlg_base).phys if spec.srlg_base else phys
            srlgs = generate_srlgs(base, spec.srlg_seed, spec.srlg_count)
        else:
            srlgs = source.srlgs
            if srlgs is None:
                raise DomainError("no SRLG source: give a file, a count, or an instance with srlg records")
        for scenario in srlgs:
            scenario.check_against(phys)
    return phys, logical, srlgs, mapping


def metrics_row(label: str, report: SurvivabilityReport, plan: ProtectionPlan | None) -> dict[str, str]:
    row = {
        "instance": label,
        "Surv": "Yes" if report.survivable else "No",
        report.metric_name: str(report.protected_count),
        "Total": str(report.total_count),
        "PhyS": str(report.phys_utilization),
        "Tree#": str(plan.tree_count) if plan else "-",
        "LogS": str(plan.logical_edges_used) if plan else "-",
        "Augment#": str(len(plan.augmented_edges)) if plan else "-",
    }
    return row


def metric_columns(mode: str) -> tuple[str, ...]:
    return ("instance", "Surv", "MaxS" if mode == "srlg" else "SIdx", "Total", "PhyS", "Tree#", "LogS", "Augment#")


def _timed(timings: dict[str, float], stage: str, fn, *args, **kwargs):
    start = time.perf_counter()
    out = _stage(stage, fn, *args, **kwargs)
    timings[stage] = (time.perf_counter() - start) * 1000.0
    return out


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Execute ``spec.pipeline``; errors are raised as :class:`StageError`."""
    timings: dict[str, float] = {}
    phys, logical, srlgs, mapping = _timed(timings, "load", load, spec)
    scenarios = srlgs if spec.mode == "srlg" else None
    result = ExperimentResult(spec, phys, logical, scenarios, {}, timings_ms=timings)
    out = Path(spec.out_dir) if spec.out_dir else None
    if out is not None:
        _stage("write", out.mkdir, parents=True, exist_ok=True)
        text = format_instance(phys, logical, srlgs, mapping, header=f"instance {spec.label}")
        _stage("write", write_instance, out / "instance.txt", text)
        result.files.append(str(out / "instance.txt"))

    if spec.pipeline in ("heuristic", "full"):
        if spec.mode == "srlg":
            plan = _timed(timings, "heuristic", run_srlg_heuristic, phys, logical, srlgs, spec.config)
        else:
            plan_srlgs = _timed(timings, "enumerate", k_failure_set, phys, spec.k)
            plan = _timed(timings, "heuristic", run_srlg_heuristic, phys, logical, plan_srlgs, spec.config)
        result.plan = plan
        # The plan's own bookkeeping is never reported; the verifier recounts.
        if spec.mode == "srlg":
            report = _timed(timings, "verify", verify_srlg, plan.logical, plan.mapping, srlgs)
        else:
            report = _timed(timings, "verify", verify_k, plan.logical, plan.mapping, spec.k)
        result.report = report
        if out is not None:
            text = format_instance(
                phys, plan.logical, srlgs, plan.mapping, plan.trees, plan.protects() if srlgs else None,
                header=f"plan {spec.label}",
            )
            _stage("write", write_instance, out / "plan.txt", text)
            result.files.append(str(out / "plan.txt"))
    elif spec.pipeline == "verify":
        if mapping is None:
            raise StageError("verify", DomainError("the instance has no routes to verify"))
        if spec.mode == "srlg":
            result.report = _timed(timings, "verify", verify_srlg, logical, mapping, srlgs)
        else:
            result.report = _timed(timings, "verify", verify_k, logical, mapping, spec.k)

    if spec.pipeline in ("milp-emit", "full"):
        family = spec.family or f"tree-{spec.mode}"
        target = result.plan.logical if result.plan is not None else logical
        model = _timed(
            timings, "build-model", build_model, family, phys, target,
            srlgs=srlgs, k=spec.k, root=spec.root, instance=spec.label,
        )
        result.lp_text = _timed(timings, "emit", emit_lp, model)
        sizes = _stage("sizes", model_size_report, family, ModelDims.of_model(model), model)
        if out is not None:
            _stage("write", write_instance, out / "model.lp", result.lp_text)
            _stage("write", write_instance, out / "sizes.txt", str(sizes) + "\n")
            result.files += [str(out / "model.lp"), str(out / "sizes.txt")]

    if result.report is not None:
        result.metrics = metrics_row(spec.label, result.report, result.plan)
        if out is not None:
            cols = metric_columns(spec.mode)
            _stage("write", write_instance, out / "metrics.csv", format_csv([result.metrics], cols))
            _stage("write", write_instance, out / "metrics.txt", format_table([result.metrics], cols))
            result.files += [str(out / "metrics.csv"), str(out / "metrics.txt")]
    if out is not None:
        lines = ["stage,ms"] + [f"{k},{v:.3f}" for k, v in timings.items()]
        _stage("write", write_instance, out / "timing.csv", "\n".join(lines) + "\n")
        result.files.append(str(out / "timing.csv"))
    return result


SWEEP_PHYSICAL = ("NSF", "NSF1")
SWEEP_LOGICAL = ("CLN1", "CLN2", "CLN3", "CLN4")
SWEEP_COUNTS = (5, 6, 7)


def sweep_specs(
    seed: int = 0,
    counts=SWEEP_COUNTS,
    physical=SWEEP_PHYSICAL,
    logical=SWEEP_LOGICAL,
    k: int | None = None,
    config: HeuristicConfig | None = None,
) -> list[ExperimentSpec]:
    """Heuristic runs for every network pair, sharing NSF-drawn SRLG sets across NSF and NSF1."""
    config = config or HeuristicConfig()
    specs = []
    for p in physical:
        for lg in logical:
            if k is not None:
                specs.append(ExperimentSpec(p, lg, mode="k", k=k, config=config, name=f"{p}+{lg}"))
                continue
            for n in counts:
                specs.append(
                    ExperimentSpec(
                        p, lg, srlg_count=n, srlg_seed=seed, srlg_base="NSF", config=config, name=f"{p}+{lg} R={n}"
                    )
                )
    return specs


def run_sweep(specs: list[ExperimentSpec]) -> tuple[list[ExperimentResult], str, str]:
    """Run ``specs`` and return (results, text table, csv)."""
    results = [run_experiment(replace(s, out_dir=None)) for s in specs]
    modes = {s.mode for s in specs}
    if len(modes) > 1:
        raise DomainError("a sweep must use a single mode")
    cols = metric_columns(modes.pop() if modes else "srlg")
    rows = [r.metrics for r in results]
    return results, format_table(rows, cols), format_csv(rows, cols)
