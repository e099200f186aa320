"""End-to-end verification pipeline and report construction.

A pipeline takes a seed fibration, one even branch specification for the
family base change, and a ledger of assumptions (Picard numbers, torsion
orders, externally certified exclusion facts).  It derives the covering
stages, runs the lattice and Mordell-Weil arithmetic, and emits a single
deterministic report; the JSON document is the contract and the text
rendering is derived from it.

Every number in the report carries a tag: 'paper' for values quoted from
the published fiber tables, 'trivial' for bookkeeping identities,
'derived' for values computed here, 'assumed' for declared inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from .jsonio import (
    Assumption,
    InputError,
    SchemaError,
    dumps_canonical,
    exclusion_fact_to_json,
    gram_to_json,
    load_json,
    parse_assumptions,
    parse_branch_spec,
    parse_exclusion_fact,
    parse_gram,
    parse_surface_config,
    surface_config_to_json,
)
from .kodaira import is_star
from .lattice import GramLattice, NotPerfectSquareRatioError
from .mordell_weil import check_disc_consistency, shioda_tate
from .surfaces import (
    BaseChangeResult,
    BranchSpec,
    SurfaceConfig,
    SurfaceInvariants,
    invariants,
    quadratic_base_change,
)
from .transcendental import (
    DiscResolution,
    ExclusionFact,
    RigidityCertificate,
    VERDICT_FAILS,
    VERDICT_HOLDS_POSSIBLE,
    double_cover_disc_candidates,
    resolve_disc,
    rigidity_transfer,
    shioda_inose_unscale,
    specialization_index,
)

SEED_STAGE = "X"
FAMILY_STAGE = "S_t"

TAGS = ("paper", "trivial", "derived", "assumed")


class PipelineError(RuntimeError):
    """The pipeline cannot run on this input."""


class PipelineContradictionError(PipelineError):
    """A certified stage failed an exact consistency check."""


def tagged(value: Any, tag: str) -> dict:
    if tag not in TAGS:
        raise ValueError(f"unknown tag {tag!r}")
    return {"tag": tag, "value": value}


@dataclass(frozen=True)
class PipelineSpec:
    seed: SurfaceConfig
    family_branch: BranchSpec
    assumptions: tuple[Assumption, ...]
    stages: tuple[tuple[str, BranchSpec], ...]


def build_pipeline_spec(
    seed: SurfaceConfig, family_branch: BranchSpec, assumptions: tuple[Assumption, ...]
) -> PipelineSpec:
    """Derive the covering stages from the family branch specification.

    The family stage uses the branch set as given.  When the branch
    contains exactly three star fibers, each pair of them defines one
    K3 double-cover stage: Y_k omits the k-th star (in fiber order).
    """
    stages: list[tuple[str, BranchSpec]] = [(FAMILY_STAGE, family_branch)]
    star_labels = [
        label for label, f in seed.fibers if label in family_branch.labels and is_star(f)
    ]
    if len(star_labels) == 3:
        for k in range(3):
            pair = frozenset(x for i, x in enumerate(star_labels) if i != k)
            stages.append((f"Y{k}", BranchSpec(pair)))
    return PipelineSpec(
        seed=seed,
        family_branch=family_branch,
        assumptions=assumptions,
        stages=tuple(stages),
    )


class _AssumptionIndex:
    def __init__(self, assumptions: tuple[Assumption, ...]):
        self.all = assumptions
        self.flags: dict[str, str] = {}
        self.seed_gram: GramLattice | None = None
        self.seed_gram_provenance = ""
        self.si_stage: str | None = None
        self.si_provenance = ""
        self.stage_lattices: dict[str, tuple[GramLattice, str]] = {}
        self.torsion: dict[str, tuple[int, str]] = {}
        self.facts: list[ExclusionFact] = []
        for a in assumptions:
            if a.name in ("picard_maximal", "constant_transcendental_vhs", "specialization_injective"):
                self.flags[a.name] = a.provenance
            elif a.name == "seed_transcendental_lattice":
                self.seed_gram = parse_gram(a.payload["gram"], "assumption.gram")
                self.seed_gram_provenance = a.provenance
            elif a.name == "shioda_inose_cover":
                self.si_stage = a.payload["stage"]
                self.si_provenance = a.provenance
            elif a.name == "stage_transcendental_lattice":
                gram = parse_gram(a.payload["gram"], "assumption.gram")
                self.stage_lattices[a.payload["stage"]] = (gram, a.provenance)
            elif a.name == "torsion_order":
                self.torsion[a.payload["stage"]] = (a.payload["order"], a.provenance)
            elif a.name == "exclusion_fact":
                self.facts.append(parse_exclusion_fact(a.payload, "assumption.payload"))

    def has(self, flag: str) -> bool:
        return flag in self.flags


def _invariants_json(inv: SurfaceInvariants) -> dict:
    out = {
        "e": tagged(inv.e, "derived"),
        "d": tagged(inv.d, "derived"),
        "p_g": tagged(inv.p_g, "derived"),
        "q": tagged(inv.q, "derived"),
        "b1": tagged(inv.b1, "derived"),
        "b2": tagged(inv.b2, "derived"),
        "h11": tagged(inv.h11, "derived"),
        "kind": inv.kind,
    }
    if inv.extrapolated:
        out["extrapolated"] = True
    return out


def _base_change_json(bc: BaseChangeResult) -> dict:
    log = []
    for row in bc.log:
        log.append(
            {
                "label": row.label,
                "source": row.source_token,
                "branched": row.branched,
                "star": row.star,
                "images": [{"label": lab, "type": tok} for lab, tok in row.images],
                "delta": tagged(row.delta, row.table_source if row.table_source in TAGS else "derived"),
                "table": row.table_source,
            }
        )
    out = {
        "delta": tagged(bc.delta, "derived"),
        "euler_before": tagged(bc.euler_before, "derived"),
        "euler_after": tagged(bc.euler_after, "derived"),
        "log": log,
    }
    if bc.d_before is not None:
        out["d_before"] = tagged(bc.d_before, "derived")
        out["d_after"] = tagged(bc.d_after, "derived")
    return out


def _shioda_tate_json(config: SurfaceConfig, rho: int) -> dict:
    st = shioda_tate(config, rho)
    return {
        "rho": tagged(st.rho, "assumed"),
        "trivial_rank": tagged(st.trivial_rank, "derived"),
        "mw_rank": tagged(st.mw_rank, "derived"),
        "trivial_disc": tagged(str(st.trivial_disc), "derived"),
    }


def _consistency_json(
    config: SurfaceConfig, disc: int, rho: int, torsion: int, torsion_provenance: str
) -> dict:
    check = check_disc_consistency(config, disc, rho, torsion)
    out = {
        "candidate_disc": tagged(disc, "derived"),
        "torsion_order": tagged(torsion, "assumed"),
        "torsion_provenance": torsion_provenance,
        "mw_rank": tagged(check.mw_rank, "derived"),
        "mwl_disc": tagged(str(check.mwl_disc), "derived"),
        "denominator_bound": tagged(check.denominator_bound, "derived"),
        "consistent": check.consistent,
    }
    if check.reason:
        out["reason"] = check.reason
    return out


def _resolution_json(resolution: DiscResolution) -> dict:
    certificate = []
    for cand in resolution.certificate:
        classes = []
        for cv in cand.classes:
            entry: dict[str, Any] = {"form": gram_to_json(cv.form.gram())}
            if cv.excluded_by is not None:
                entry["excluded_by"] = cv.excluded_by
                entry["fact_kind"] = cv.fact_kind
            classes.append(entry)
        item: dict[str, Any] = {
            "alpha": cand.alpha,
            "disc": tagged(cand.disc, "derived"),
            "excluded": cand.excluded,
            "classes": classes,
        }
        if cand.reason:
            item["reason"] = cand.reason
        certificate.append(item)
    out: dict[str, Any] = {
        "certificate": certificate,
        "surviving": [{"alpha": a, "disc": d} for a, d in resolution.surviving],
        "resolved": resolution.resolved,
    }
    if resolution.resolved:
        out["resolved_disc"] = tagged(resolution.resolved_disc, "derived")
        out["alpha"] = tagged(resolution.alpha, "derived")
    form = resolution.surviving_form
    if form is not None:
        out["surviving_form"] = gram_to_json(form.gram())
    return out


def _rigidity_json(cert: RigidityCertificate) -> dict:
    out: dict[str, Any] = {
        "lattice": gram_to_json(cert.lattice),
        "index_bound": tagged(cert.index_bound, "derived"),
        "rigid": cert.rigid,
        "checks": [
            {"index": c.index, "status": c.status, "detail": c.detail} for c in cert.checks
        ],
        "conclusion": cert.conclusion,
    }
    if cert.witness is not None:
        out["witness"] = gram_to_json(cert.witness)
        out["witness_reduced"] = gram_to_json(cert.witness_reduced.gram())
    return out


def run_pipeline(spec: PipelineSpec) -> dict:
    seed = spec.seed
    seed_inv = invariants(seed)
    if seed_inv.kind != "K3" or seed_inv.e != 24:
        raise PipelineError(
            f"seed configuration must be a K3 fibration with e = 24; "
            f"got kind {seed_inv.kind!r} with e = {seed_inv.e}"
        )
    asm = _AssumptionIndex(spec.assumptions)
    notes: list[str] = []
    conditional = False

    # Seed record.
    have_picard = asm.has("picard_maximal")
    seed_record: dict[str, Any] = {
        "name": SEED_STAGE,
        "config": surface_config_to_json(seed),
        "invariants": _invariants_json(seed_inv),
    }
    if have_picard:
        seed_record["shioda_tate"] = _shioda_tate_json(seed, seed_inv.h11)
    else:
        notes.append("no Picard-number assumption: Shioda-Tate accounting skipped")
        conditional = True
    if asm.seed_gram is not None:
        seed_record["transcendental"] = {
            "gram": gram_to_json(asm.seed_gram),
            "disc": tagged(asm.seed_gram.disc(), "assumed"),
            "provenance": asm.seed_gram_provenance,
        }

    # Covering stages.
    stage_records: list[dict] = []
    stage_data: dict[str, tuple[SurfaceConfig, SurfaceInvariants]] = {}
    family_ok = True
    for name, branch in spec.stages:
        if not family_ok and name != FAMILY_STAGE:
            notes.append(f"stage {name} skipped: the family stage is not elliptic-elliptic")
            conditional = True
            continue
        bc = quadratic_base_change(
            seed, branch, name=f"{seed.name}/{name}", allow_fresh=(name == FAMILY_STAGE)
        )
        inv = invariants(bc.config)
        record: dict[str, Any] = {
            "name": name,
            "branch": list(branch.sorted_labels()),
            "base_change": _base_change_json(bc),
            "config": surface_config_to_json(bc.config),
            "invariants": _invariants_json(inv),
        }
        if have_picard:
            record["shioda_tate"] = _shioda_tate_json(bc.config, inv.h11)
        if name == FAMILY_STAGE and inv.kind != "elliptic-elliptic":
            family_ok = False
            record["family_gate"] = {
                "ok": False,
                "detail": f"expected an elliptic surface over an elliptic base, got {inv.kind!r}",
            }
            notes.append(
                f"family stage has kind {inv.kind!r}; the construction needs "
                "'elliptic-elliptic', remaining stages skipped"
            )
            conditional = True
        elif name == FAMILY_STAGE:
            record["family_gate"] = {"ok": True, "detail": "elliptic-elliptic"}
        stage_records.append(record)
        stage_data[name] = (bc.config, inv)
    if len(spec.stages) == 1 and family_ok:
        notes.append(
            "no K3 covering stages: the family branch does not contain exactly three star fibers"
        )
        conditional = True

    analysis: dict[str, Any] = {}
    stage_disc: dict[str, tuple[list[int], str]] = {}  # stage -> (central discs, source)
    nearby_disc: int | None = None

    if asm.seed_gram is None:
        notes.append("no seed transcendental lattice assumption: lattice analysis skipped")
        conditional = True
    else:
        t_x = asm.seed_gram
        candidates = double_cover_disc_candidates(t_x.disc(), t_x.rank)
        analysis["candidates"] = {
            "disc_seed": tagged(t_x.disc(), "assumed"),
            "list": [{"alpha": a, "disc": tagged(d, "derived")} for a, d in candidates],
        }

        # Shioda-Inose quotient stage: pairing divides by two.
        si_stage = asm.si_stage
        if si_stage is not None and si_stage in stage_data:
            t_si = shioda_inose_unscale(t_x)
            analysis["shioda_inose"] = {
                "stage": si_stage,
                "gram": gram_to_json(t_si),
                "disc": tagged(t_si.disc(), "derived"),
                "provenance": asm.si_provenance,
            }
            stage_disc[si_stage] = ([t_si.disc()], "shioda_inose")
            rigidity = rigidity_transfer(t_si)
            analysis["rigidity"] = _rigidity_json(rigidity)
            if rigidity.rigid:
                conditional_on = sorted(
                    name
                    for name in (
                        "constant_transcendental_vhs",
                        "specialization_injective",
                        "picard_maximal",
                    )
                    if asm.has(name)
                ) + ["shioda_inose_cover"]
                analysis["nearby_lattice"] = {
                    "gram": gram_to_json(t_si),
                    "disc": tagged(t_si.disc(), "derived"),
                    "conclusion": (
                        "the nearby transcendental lattice contains the quotient lattice "
                        "with finite index and no proper even overlattice exists, so they "
                        "are equal"
                    ),
                    "conditional_on": conditional_on,
                }
                nearby_disc = t_si.disc()
                if FAMILY_STAGE in stage_data:
                    stage_disc[FAMILY_STAGE] = ([nearby_disc], "rigidity_transfer")
            else:
                notes.append(
                    "quotient lattice admits a proper even overlattice: the nearby "
                    "lattice is not pinned down"
                )
                conditional = True
        else:
            notes.append("no usable Shioda-Inose cover stage: nearby lattice not determined")
            conditional = True

        for stage, (gram, provenance) in sorted(asm.stage_lattices.items()):
            if stage in stage_data:
                analysis.setdefault("assumed_stage_lattices", []).append(
                    {
                        "stage": stage,
                        "gram": gram_to_json(gram),
                        "disc": tagged(gram.disc(), "assumed"),
                        "provenance": provenance,
                    }
                )
                stage_disc[stage] = ([gram.disc()], "assumption")

        # Discriminant resolution for the remaining K3 stages.
        resolutions: list[dict] = []
        for name, _branch in spec.stages:
            if name in stage_disc or name not in stage_data:
                continue
            config, inv = stage_data[name]
            if inv.kind != "K3":
                notes.append(f"stage {name} is not a K3 surface: no discriminant analysis")
                conditional = True
                continue
            if not have_picard:
                notes.append(f"stage {name}: discriminant resolution needs a Picard assumption")
                conditional = True
                continue
            torsion = asm.torsion.get(name)
            resolution = resolve_disc(
                candidates,
                asm.facts,
                config,
                inv.h11,
                torsion[0] if torsion else None,
            )
            item = {"stage": name, "resolution": _resolution_json(resolution)}
            resolutions.append(item)
            stage_disc[name] = ([d for _a, d in resolution.surviving], "resolution")
            if not resolution.resolved:
                survivors = ", ".join(str(d) for _a, d in resolution.surviving)
                notes.append(
                    f"stage {name}: discriminant not uniquely resolved, "
                    f"surviving candidates {{{survivors}}}"
                )
                conditional = True
        if resolutions:
            analysis["resolutions"] = resolutions

        # Height-denominator cross-checks, stage by stage.
        denominator_checks: list[dict] = []
        for name in [SEED_STAGE] + [n for n, _b in spec.stages]:
            if name == SEED_STAGE:
                config, inv = seed, seed_inv
                discs, source = ([t_x.disc()], "assumption")
            else:
                if name not in stage_data or name not in stage_disc:
                    continue
                config, inv = stage_data[name]
                discs, source = stage_disc[name]
            if not have_picard:
                continue
            torsion = asm.torsion.get(name)
            if torsion is None:
                notes.append(f"stage {name}: no torsion assumption, height cross-check skipped")
                conditional = True
                continue
            candidate_pool = discs
            if source == "resolution":
                # Report the bound on every candidate, including excluded ones.
                candidate_pool = [d for _a, d in candidates]
            for disc in candidate_pool:
                entry = _consistency_json(config, disc, inv.h11, torsion[0], torsion[1])
                entry["stage"] = name
                entry["certified"] = disc in discs
                denominator_checks.append(entry)
                if entry["certified"] and not entry["consistent"] and len(discs) == 1:
                    raise PipelineContradictionError(
                        f"stage {name}: certified discriminant {disc} fails the "
                        f"height-denominator check: {entry.get('reason')}"
                    )
        if denominator_checks:
            analysis["denominator_checks"] = denominator_checks

    # Specialization indices and the verdict.
    specialization: dict[str, Any] = {}
    verdict = None
    if nearby_disc is None:
        notes.append("nearby lattice unknown: specialization indices not computed")
        conditional = True
    else:
        per_stage = []
        failing = []
        undetermined = False
        for name, _branch in spec.stages:
            if name == FAMILY_STAGE or name not in stage_disc:
                continue
            discs, source = stage_disc[name]
            indices = []
            incompatible = []
            for disc in sorted(set(discs)):
                try:
                    result = specialization_index(disc, nearby_disc)
                except NotPerfectSquareRatioError:
                    incompatible.append(disc)
                    continue
                indices.append({"central_disc": tagged(disc, "derived"),
                                "index": tagged(result.index, "derived"),
                                "verdict": result.verdict})
            if not indices:
                stage_verdict = "undetermined"
                undetermined = True
            elif all(item["verdict"] == VERDICT_FAILS for item in indices):
                stage_verdict = VERDICT_FAILS
            elif all(item["verdict"] == VERDICT_HOLDS_POSSIBLE for item in indices):
                stage_verdict = VERDICT_HOLDS_POSSIBLE
            else:
                stage_verdict = "undetermined"
                undetermined = True
            entry = {
                "stage": name,
                "source": source,
                "nearby_disc": tagged(nearby_disc, "derived"),
                "indices": indices,
                "verdict": stage_verdict,
            }
            if incompatible:
                entry["incompatible_discs"] = sorted(incompatible)
                notes.append(
                    f"stage {name}: discriminant(s) {sorted(incompatible)} are not related "
                    "to the nearby lattice by a finite-index embedding"
                )
            per_stage.append(entry)
            if stage_verdict == VERDICT_FAILS:
                failing.append(name)
        specialization["per_stage"] = per_stage
        if failing:
            verdict = VERDICT_FAILS
        elif undetermined or not per_stage:
            verdict = "undetermined"
        else:
            verdict = VERDICT_HOLDS_POSSIBLE
        specialization["failing_stages"] = failing
        specialization["verdict"] = verdict
        if verdict == "undetermined":
            conditional = True

    ledger = []
    for a in spec.assumptions:
        entry: dict[str, Any] = {"name": a.name, "provenance": a.provenance}
        if a.name == "exclusion_fact":
            entry["payload"] = exclusion_fact_to_json(parse_exclusion_fact(a.payload, "ledger"))
        elif a.payload:
            entry["payload"] = a.payload
        ledger.append(entry)

    report = {
        "schema": "invcycle-report/1",
        "pipeline": {"name": seed.name},
        "seed": seed_record,
        "stages": stage_records,
        "analysis": analysis,
        "specialization": specialization,
        "assumption_ledger": ledger,
        "notes": notes,
        "status": "conditional" if conditional else "verified",
    }
    if verdict is not None:
        report["verdict"] = verdict
    return report


def _data_root():
    return resources.files("invcycle").joinpath("data")


def load_pipeline_files(
    config_path: str | Path, branch_path: str | Path, assumptions_path: str | Path
) -> PipelineSpec:
    config = parse_surface_config(load_json(config_path), "config")
    branch = parse_branch_spec(load_json(branch_path), "branch")
    assumptions = parse_assumptions(load_json(assumptions_path), "assumptions")
    return build_pipeline_spec(config, branch, assumptions)


def run_custom(
    config_path: str | Path, branch_path: str | Path, assumptions_path: str | Path
) -> dict:
    return run_pipeline(load_pipeline_files(config_path, branch_path, assumptions_path))


def run_example(example_id: int) -> dict:
    if example_id not in (1, 2):
        raise SchemaError(f"unknown example {example_id}; available: 1, 2")
    base = _data_root().joinpath(f"example{example_id}")
    with resources.as_file(base) as root:
        return run_custom(root / "config.json", root / "branch.json", root / "assumptions.json")


def report_exit_code(report: dict, strict: bool = False) -> int:
    if report["status"] == "verified":
        return 0
    return 1 if strict else 2


def _fmt_tagged(value: Any) -> str:
    if isinstance(value, dict) and "tag" in value and "value" in value:
        return f"{value['value']} [{value['tag']}]"
    return str(value)


def _fmt_gram(gram: list[list[str]]) -> str:
    return "[" + ", ".join("[" + ", ".join(row) + "]" for row in gram) + "]"


def render_text(report: dict) -> str:
    """Human-readable rendering derived from the JSON report."""
    lines: list[str] = []
    push = lines.append
    push(f"pipeline: {report['pipeline']['name']}")
    push(f"status: {report['status']}" + (f"    verdict: {report['verdict']}" if "verdict" in report else ""))
    push("")
    seed = report["seed"]
    inv = seed["invariants"]
    push(f"seed {seed['name']}: genus {seed['config']['base_genus']}, fibers "
         + ", ".join(f"{f['label']}:{f['type']}" for f in seed["config"]["fibers"]))
    push(f"  e = {_fmt_tagged(inv['e'])}, d = {_fmt_tagged(inv['d'])}, kind = {inv['kind']}")
    if "transcendental" in seed:
        t = seed["transcendental"]
        push(f"  transcendental gram {_fmt_gram(t['gram'])}, disc {_fmt_tagged(t['disc'])}")
    if "shioda_tate" in seed:
        st = seed["shioda_tate"]
        push(
            f"  Shioda-Tate: rho {_fmt_tagged(st['rho'])}, trivial rank "
            f"{_fmt_tagged(st['trivial_rank'])}, MW rank {_fmt_tagged(st['mw_rank'])}, "
            f"trivial disc {_fmt_tagged(st['trivial_disc'])}"
        )
    for stage in report["stages"]:
        push("")
        inv = stage["invariants"]
        push(f"stage {stage['name']}: branch {{{', '.join(stage['branch'])}}}")
        bc = stage["base_change"]
        push(f"  delta = {_fmt_tagged(bc['delta'])}, e: {_fmt_tagged(bc['euler_before'])} -> "
             f"{_fmt_tagged(bc['euler_after'])}")
        push(f"  fibers: {', '.join(f['label'] + ':' + f['type'] for f in stage['config']['fibers'])}")
        push(f"  kind = {inv['kind']}, h11 = {_fmt_tagged(inv['h11'])}")
        if "shioda_tate" in stage:
            st = stage["shioda_tate"]
            push(f"  Shioda-Tate: rho {_fmt_tagged(st['rho'])}, MW rank {_fmt_tagged(st['mw_rank'])}, "
                 f"trivial disc {_fmt_tagged(st['trivial_disc'])}")
        if "family_gate" in stage and not stage["family_gate"]["ok"]:
            push(f"  family gate FAILED: {stage['family_gate']['detail']}")
    analysis = report.get("analysis", {})
    if "candidates" in analysis:
        push("")
        cands = ", ".join(
            f"alpha={c['alpha']}: {c['disc']['value']}" for c in analysis["candidates"]["list"]
        )
        push(f"analysis: disc candidates from seed disc {_fmt_tagged(analysis['candidates']['disc_seed'])}: {cands}")
    if "shioda_inose" in analysis:
        si = analysis["shioda_inose"]
        push(f"  quotient lattice at {si['stage']}: gram {_fmt_gram(si['gram'])}, disc {_fmt_tagged(si['disc'])}")
    if "rigidity" in analysis:
        rig = analysis["rigidity"]
        push(f"  rigidity up to index {_fmt_tagged(rig['index_bound'])}: "
             + ("rigid" if rig["rigid"] else "NOT rigid"))
        if "witness" in rig:
            push(f"    witness overlattice {_fmt_gram(rig['witness'])} (reduced {_fmt_gram(rig['witness_reduced'])})")
    if "nearby_lattice" in analysis:
        near = analysis["nearby_lattice"]
        push(f"  nearby lattice: gram {_fmt_gram(near['gram'])}, disc {_fmt_tagged(near['disc'])}")
        push(f"    conditional on: {', '.join(near['conditional_on'])}")
    for item in analysis.get("assumed_stage_lattices", []):
        push(f"  assumed lattice at {item['stage']}: disc {_fmt_tagged(item['disc'])} ({item['provenance']})")
    for item in analysis.get("resolutions", []):
        res = item["resolution"]
        survivors = ", ".join(str(s["disc"]) for s in res["surviving"])
        state = f"resolved to {res['resolved_disc']['value']}" if res["resolved"] else f"ambiguous ({survivors})"
        push(f"  discriminant resolution at {item['stage']}: {state}")
        for cand in res["certificate"]:
            mark = "excluded" if cand["excluded"] else "survives"
            push(f"    alpha={cand['alpha']} disc={cand['disc']['value']}: {mark}")
            for cls in cand["classes"]:
                if "excluded_by" in cls:
                    push(f"      class {_fmt_gram(cls['form'])} excluded by {cls['excluded_by']}")
                else:
                    push(f"      class {_fmt_gram(cls['form'])} not excluded")
            if "reason" in cand:
                push(f"      reason: {cand['reason']}")
    for check in analysis.get("denominator_checks", []):
        if check["consistent"]:
            flag = "ok"
        elif check["certified"]:
            flag = "CONTRADICTION"
        else:
            flag = "excluded by height bound"
        push(
            f"  height check {check['stage']} disc {check['candidate_disc']['value']}: "
            f"disc(MWL) = {check['mwl_disc']['value']}, bound {check['denominator_bound']['value']}, {flag}"
        )
    spec_section = report.get("specialization", {})
    if spec_section.get("per_stage"):
        push("")
        push("specialization:")
        for entry in spec_section["per_stage"]:
            idx = ", ".join(
                f"disc {i['central_disc']['value']}: index {i['index']['value']} ({i['verdict']})"
                for i in entry["indices"]
            )
            push(f"  {entry['stage']} (from {entry['source']}): {idx}")
        push(f"overall verdict: {spec_section['verdict']}")
    if report["notes"]:
        push("")
        push("notes:")
        for note in report["notes"]:
            push(f"  - {note}")
    push("")
    push(f"assumptions ({len(report['assumption_ledger'])}):")
    for a in report["assumption_ledger"]:
        push(f"  - {a['name']}: {a['provenance']}")
    return "\n".join(lines) + "\n"


def report_to_json(report: dict) -> str:
    return dumps_canonical(report)
