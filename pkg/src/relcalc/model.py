"""Model-file ingestion.

A model is a single JSON document::

    {
      "components": [
        {"id": "s1", "prior": {"alpha": 5, "beta": 2}, "tests": {"n": 2, "x": 2}},
        {"id": "s2", "prior": {"theta_hat": 0.8, "n_pr": 10}}
      ],
      "structure": ["series", "s1", "s2"],
      "system_tests": {"n_ts": 4, "x_ts": 4},
      "notes": "optional free text"
    }

Each component states its prior either directly as shapes {alpha, beta} or
as an elicitation {theta_hat, n_pr}; exactly one form. "tests" is the
component's own pass/fail campaign. "structure" follows the grammar in
relcalc.rbd; "system_tests" is a whole-system campaign. Unknown keys are
rejected so typos fail loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .betacore import BetaParams, PriorElicitation, TestRecord, conjugate_update, elicit_prior
from .engine import SystemTestData
from .errors import InvalidParameterError, ModelFormatError, RelcalcError
from .rbd import BlockNode, leaf_ids, structure_from_obj


@dataclass(frozen=True)
class ComponentSpec:
    id: str
    prior: BetaParams
    tests: TestRecord | None = None

    def posterior(self) -> BetaParams:
        """Prior updated with the component's own campaign, if any."""
        return conjugate_update(self.prior, self.tests) if self.tests else self.prior


@dataclass(frozen=True)
class ModelFile:
    components: tuple[ComponentSpec, ...]
    structure: BlockNode | None = None
    system_tests: SystemTestData | None = None
    notes: str | None = None

    def posterior_map(self) -> dict[str, BetaParams]:
        return {c.id: c.posterior() for c in self.components}

    def prior_map(self) -> dict[str, BetaParams]:
        return {c.id: c.prior for c in self.components}


def _require_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ModelFormatError(
            f"{where}: unknown key(s) {', '.join(sorted(map(repr, unknown)))}"
        )


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModelFormatError(f"{where} must be an integer, got {value!r}")
    return value


def _parse_prior(obj, where: str) -> BetaParams:
    if not isinstance(obj, dict):
        raise ModelFormatError(f"{where}: prior must be an object, got {obj!r}")
    keys = set(obj)
    if keys == {"alpha", "beta"}:
        return BetaParams(obj["alpha"], obj["beta"])
    if keys == {"theta_hat", "n_pr"}:
        return elicit_prior(PriorElicitation(obj["theta_hat"], obj["n_pr"]))
    raise ModelFormatError(
        f"{where}: prior must be exactly {{alpha, beta}} or {{theta_hat, n_pr}}, "
        f"got keys {sorted(keys)}"
    )


def _parse_component(obj, position: int) -> ComponentSpec:
    where = f"components[{position}]"
    if not isinstance(obj, dict):
        raise ModelFormatError(f"{where} must be an object, got {obj!r}")
    _require_keys(obj, {"id", "prior", "tests"}, where)
    cid = obj.get("id")
    if not isinstance(cid, str) or not cid:
        raise ModelFormatError(f"{where}: id must be a nonempty string, got {cid!r}")
    where = f"component {cid!r}"
    if "prior" not in obj:
        raise ModelFormatError(f"{where}: missing prior")
    try:
        prior = _parse_prior(obj["prior"], where)
        tests = None
        if obj.get("tests") is not None:
            t = obj["tests"]
            if not isinstance(t, dict):
                raise ModelFormatError(f"{where}: tests must be an object, got {t!r}")
            _require_keys(t, {"n", "x"}, f"{where} tests")
            if "n" not in t or "x" not in t:
                raise ModelFormatError(f"{where}: tests must state both n and x")
            tests = TestRecord(_as_int(t["n"], f"{where} tests.n"),
                               _as_int(t["x"], f"{where} tests.x"))
    except (InvalidParameterError, ModelFormatError) as exc:
        raise ModelFormatError(f"{where}: {exc}") from exc
    return ComponentSpec(id=cid, prior=prior, tests=tests)


def parse_model(text: str) -> ModelFile:
    """Parse and validate a model document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelFormatError(f"model document must be an object, got {doc!r}")
    _require_keys(doc, {"components", "structure", "system_tests", "notes"}, "model")

    raw_components = doc.get("components")
    if not isinstance(raw_components, list) or not raw_components:
        raise ModelFormatError("model must declare a nonempty 'components' list")
    components = tuple(_parse_component(c, i) for i, c in enumerate(raw_components))
    declared = [c.id for c in components]
    if len(declared) != len(set(declared)):
        dupes = sorted({cid for cid in declared if declared.count(cid) > 1})
        raise ModelFormatError(f"duplicate component id(s): {', '.join(dupes)}")

    structure = None
    if doc.get("structure") is not None:
        structure = structure_from_obj(doc["structure"])
        unknown = set(leaf_ids(structure)) - set(declared)
        if unknown:
            raise ModelFormatError(
                f"structure references undeclared component id(s): "
                f"{', '.join(sorted(unknown))}"
            )

    system_tests = None
    if doc.get("system_tests") is not None:
        st = doc["system_tests"]
        if not isinstance(st, dict):
            raise ModelFormatError(f"system_tests must be an object, got {st!r}")
        _require_keys(st, {"n_ts", "x_ts"}, "system_tests")
        if "n_ts" not in st or "x_ts" not in st:
            raise ModelFormatError("system_tests must state both n_ts and x_ts")
        try:
            system_tests = SystemTestData(
                _as_int(st["n_ts"], "system_tests.n_ts"),
                _as_int(st["x_ts"], "system_tests.x_ts"),
            )
        except (InvalidParameterError, ModelFormatError) as exc:
            raise ModelFormatError(f"system_tests: {exc}") from exc

    notes = doc.get("notes")
    if notes is not None and not isinstance(notes, str):
        raise ModelFormatError(f"notes must be a string, got {notes!r}")

    return ModelFile(
        components=components,
        structure=structure,
        system_tests=system_tests,
        notes=notes,
    )


def load_model(path) -> ModelFile:
    """Read and parse a model file from disk."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFormatError(f"cannot read model file {path}: {exc}") from exc
    try:
        return parse_model(text)
    except RelcalcError as exc:
        raise ModelFormatError(f"{path}: {exc}") from exc
