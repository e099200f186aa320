"""JSON parsing and serialization for configurations, lattices and facts.

Gram matrix entries travel as decimal integer strings so that values of
any size survive serialization; integers are accepted on input.  Parse
errors carry the position, schema errors carry the offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .kodaira import FiberTokenError, fiber
from .lattice import BinaryEvenForm, GramLattice
from .surfaces import BranchSpec, OddBranchCountError, SurfaceConfig
from .transcendental import ExclusionFact


class InputError(ValueError):
    """Base class for errors in user-supplied documents."""


class ParseError(InputError):
    """The document is not valid JSON, or a token is lexically malformed."""


class SchemaError(InputError):
    """The document does not match the expected shape; names the field."""


def load_json(path: str | Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _require(obj: Any, field: str, kind: type, where: str) -> Any:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    if field not in obj:
        raise SchemaError(f"{where}: missing field {field!r}")
    value = obj[field]
    if kind is int and isinstance(value, bool):
        raise SchemaError(f"{where}.{field}: expected an integer")
    if not isinstance(value, kind):
        raise SchemaError(f"{where}.{field}: expected {kind.__name__}")
    return value


def _reject_unknown(obj: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise SchemaError(f"{where}: unknown field {unknown[0]!r}")


def parse_int_entry(value: Any, where: str) -> int:
    """Gram entries: decimal integer strings, with bare integers tolerated."""
    if isinstance(value, bool):
        raise SchemaError(f"{where}: expected an integer or integer string")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        stripped = value.strip()
        sign_stripped = stripped[1:] if stripped[:1] in "+-" else stripped
        if sign_stripped.isdigit():
            return int(stripped)
        raise ParseError(f"{where}: {value!r} is not a decimal integer string")
    raise SchemaError(f"{where}: expected an integer or integer string")


def parse_gram(value: Any, where: str) -> GramLattice:
    if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
        raise SchemaError(f"{where}: expected an array of arrays")
    rows = [
        [parse_int_entry(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)]
        for i, row in enumerate(value)
    ]
    try:
        return GramLattice(rows)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def gram_to_json(lattice: GramLattice) -> list[list[str]]:
    return [[str(x) for x in row] for row in lattice.gram]


def parse_fiber_token(value: Any, where: str) -> Any:
    if not isinstance(value, str):
        raise SchemaError(f"{where}: expected a fiber token string")
    try:
        return fiber(value)
    except FiberTokenError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def parse_surface_config(obj: Any, where: str = "config") -> SurfaceConfig:
    name = _require(obj, "name", str, where)
    genus = _require(obj, "base_genus", int, where)
    fibers_raw = _require(obj, "fibers", list, where)
    _reject_unknown(obj, {"name", "base_genus", "fibers"}, where)
    fibers = []
    for i, entry in enumerate(fibers_raw):
        spot = f"{where}.fibers[{i}]"
        label = _require(entry, "label", str, spot)
        fib = parse_fiber_token(_require(entry, "type", str, spot), f"{spot}.type")
        _reject_unknown(entry, {"label", "type"}, spot)
        fibers.append((label, fib))
    try:
        return SurfaceConfig(name=name, base_genus=genus, fibers=tuple(fibers))
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def surface_config_to_json(config: SurfaceConfig) -> dict:
    return {
        "name": config.name,
        "base_genus": config.base_genus,
        "fibers": [{"label": label, "type": f.token} for label, f in config.fibers],
    }


def parse_branch_spec(obj: Any, where: str = "branch") -> BranchSpec:
    labels = _require(obj, "branch", list, where)
    _reject_unknown(obj, {"branch"}, where)
    for i, label in enumerate(labels):
        if not isinstance(label, str):
            raise SchemaError(f"{where}.branch[{i}]: expected a string label")
    if len(set(labels)) != len(labels):
        raise SchemaError(f"{where}.branch: labels must be distinct")
    try:
        return BranchSpec(frozenset(labels))
    except OddBranchCountError as exc:
        raise SchemaError(f"{where}.branch: {exc}") from exc


def branch_spec_to_json(branch: BranchSpec) -> dict:
    return {"branch": list(branch.sorted_labels())}


def parse_exclusion_fact(obj: Any, where: str) -> ExclusionFact:
    kind = _require(obj, "kind", str, where)
    provenance = _require(obj, "provenance", str, where)
    _reject_unknown(obj, {"kind", "form", "fibers", "provenance"}, where)
    form = None
    if "form" in obj:
        lattice = parse_gram(obj["form"], f"{where}.form")
        try:
            form = BinaryEvenForm.from_gram(lattice)
        except ValueError as exc:
            raise SchemaError(f"{where}.form: {exc}") from exc
    fibers = None
    if "fibers" in obj:
        raw = obj["fibers"]
        if not isinstance(raw, list):
            raise SchemaError(f"{where}.fibers: expected an array of fiber tokens")
        fibers = tuple(
            parse_fiber_token(tok, f"{where}.fibers[{i}]").token for i, tok in enumerate(raw)
        )
    try:
        return ExclusionFact(kind=kind, form=form, fibers=fibers, provenance=provenance)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def exclusion_fact_to_json(fact: ExclusionFact) -> dict:
    out: dict[str, Any] = {"kind": fact.kind}
    if fact.form is not None:
        out["form"] = gram_to_json(fact.form.gram())
    if fact.fibers is not None:
        out["fibers"] = list(fact.fibers)
    out["provenance"] = fact.provenance
    return out


@dataclass(frozen=True)
class Assumption:
    name: str
    payload: dict
    provenance: str


_ASSUMPTION_NAMES = {
    "picard_maximal",
    "constant_transcendental_vhs",
    "specialization_injective",
    "seed_transcendental_lattice",
    "shioda_inose_cover",
    "stage_transcendental_lattice",
    "torsion_order",
    "exclusion_fact",
}


def parse_assumptions(obj: Any, where: str = "assumptions") -> tuple[Assumption, ...]:
    entries = _require(obj, "assumptions", list, where)
    _reject_unknown(obj, {"assumptions"}, where)
    out = []
    for i, entry in enumerate(entries):
        spot = f"{where}[{i}]"
        name = _require(entry, "name", str, spot)
        provenance = _require(entry, "provenance", str, spot)
        payload = entry.get("payload", {})
        if not isinstance(payload, dict):
            raise SchemaError(f"{spot}.payload: expected an object")
        _reject_unknown(entry, {"name", "payload", "provenance"}, spot)
        if name not in _ASSUMPTION_NAMES:
            raise SchemaError(f"{spot}.name: unknown assumption {name!r}")
        if not provenance.strip():
            raise SchemaError(f"{spot}.provenance: must be nonempty")
        _validate_assumption_payload(name, payload, f"{spot}.payload")
        out.append(Assumption(name=name, payload=payload, provenance=provenance))
    return tuple(out)


def _validate_assumption_payload(name: str, payload: dict, where: str) -> None:
    if name in ("picard_maximal", "constant_transcendental_vhs", "specialization_injective"):
        _reject_unknown(payload, set(), where)
    elif name == "seed_transcendental_lattice":
        parse_gram(_require(payload, "gram", list, where), f"{where}.gram")
        _reject_unknown(payload, {"gram"}, where)
    elif name == "shioda_inose_cover":
        _require(payload, "stage", str, where)
        _reject_unknown(payload, {"stage"}, where)
    elif name == "stage_transcendental_lattice":
        _require(payload, "stage", str, where)
        parse_gram(_require(payload, "gram", list, where), f"{where}.gram")
        _reject_unknown(payload, {"stage", "gram"}, where)
    elif name == "torsion_order":
        _require(payload, "stage", str, where)
        order = _require(payload, "order", int, where)
        if order < 1:
            raise SchemaError(f"{where}.order: must be a positive integer")
        _reject_unknown(payload, {"stage", "order"}, where)
    elif name == "exclusion_fact":
        parse_exclusion_fact(payload, where)


def dumps_canonical(document: Any) -> str:
    """Deterministic JSON rendering: sorted keys, two-space indent."""
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
