"""Reliability block diagrams: series/parallel trees over named components.

A diagram is a finite tree. Leaves are components; a Series node works only
if every child works; a Parallel node works if at least one child does.
Component ids must be unique across the whole tree — a shared physical
component in two branches would break the independence assumption behind
every Monte Carlo routine here, so such trees are rejected outright.

Also provides an exact first/second-moment recursion for the system value
under independent beta-distributed leaves, used as the oracle for the Monte
Carlo engine, and a JSON structure grammar: a component id string, or an
array ["series"|"parallel", child, child, ...].
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Union

from .betacore import BetaParams, beta_mean
from .errors import (
    DuplicateComponentError,
    InvalidParameterError,
    ModelFormatError,
    StructureMismatchError,
)

BlockNode = Union["Component", "Series", "Parallel"]


@dataclass(frozen=True)
class Component:
    """Leaf of the diagram: one physical subsystem."""

    id: str

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ModelFormatError(f"component id must be a nonempty string, got {self.id!r}")


class _Combiner:
    """Common behaviour of Series and Parallel nodes."""

    __slots__ = ("children",)

    def __init__(self, *children: BlockNode):
        if len(children) == 1 and isinstance(children[0], (list, tuple)):
            children = tuple(children[0])
        if not children:
            raise ModelFormatError(f"{type(self).__name__.lower()} node needs at least one child")
        for child in children:
            if not isinstance(child, (Component, Series, Parallel)):
                raise ModelFormatError(f"invalid child node: {child!r}")
        self.children = tuple(children)
        ids = leaf_ids(self)
        if len(ids) != len(set(ids)):
            seen, dups = set(), set()
            for cid in ids:
                (dups if cid in seen else seen).add(cid)
            raise DuplicateComponentError(dups)

    def __eq__(self, other):
        return type(other) is type(self) and other.children == self.children

    def __hash__(self):
        return hash((type(self).__name__, self.children))

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(map(repr, self.children))})"


class Series(_Combiner):
    """All children must work. A single child acts as a pass-through."""


class Parallel(_Combiner):
    """At least one child must work. A single child acts as a pass-through."""


def leaf_ids(node: BlockNode) -> tuple[str, ...]:
    """Component ids in canonical (depth-first, left-to-right) order."""
    if isinstance(node, Component):
        return (node.id,)
    out: list[str] = []
    for child in node.children:
        out.extend(leaf_ids(child))
    return tuple(out)


def check_coverage(node: BlockNode, assignment: Mapping[str, object]) -> tuple[str, ...]:
    """Require the mapping to cover exactly the tree's leaf ids."""
    ids = leaf_ids(node)
    missing = set(ids) - set(assignment)
    extra = set(assignment) - set(ids)
    if missing or extra:
        raise StructureMismatchError(missing=missing, extra=extra)
    return ids


def system_reliability(node: BlockNode, thetas: Mapping[str, float]) -> float:
    """Evaluate the diagram at fixed per-component survival probabilities.

    Component -> its theta; Series -> product of children; Parallel ->
    1 - prod(1 - child), i.e. theta_a + theta_b - theta_a*theta_b for two
    children.
    """
    check_coverage(node, thetas)
    for cid, value in thetas.items():
        if not 0.0 <= float(value) <= 1.0:
            raise InvalidParameterError(
                f"theta for component {cid!r} must be in [0, 1], got {value}"
            )
    return _eval(node, thetas)


def _eval(node: BlockNode, thetas: Mapping[str, float]) -> float:
    if isinstance(node, Component):
        return float(thetas[node.id])
    if isinstance(node, Series):
        acc = _eval(node.children[0], thetas)
        for child in node.children[1:]:
            acc = acc * _eval(child, thetas)
        return acc
    acc = 1.0
    for child in node.children:
        acc = acc * (1.0 - _eval(child, thetas))
    return 1.0 - acc


def analytic_first_two_moments(
    node: BlockNode, priors: Mapping[str, BetaParams]
) -> tuple[float, float]:
    """Exact (E[Y], E[Y**2]) of the system value under independent beta leaves.

    Leaf: E[X] = a/(a+b), E[X**2] = a(a+1)/((a+b)(a+b+1)). Series multiplies
    both moments across children (independence). Parallel works through the
    complements U = 1 - X: E[Y] = 1 - prod E[U], and
    E[Y**2] = 1 - 2 prod E[U] + prod E[U**2] with E[U**2] = 1 - 2E[X] + E[X**2].
    """
    check_coverage(node, priors)
    return _moments(node, priors)


def _moments(node, priors):
    if isinstance(node, Component):
        p = priors[node.id]
        s = p.alpha + p.beta
        m1 = beta_mean(p)
        m2 = p.alpha * (p.alpha + 1.0) / (s * (s + 1.0))
        return m1, m2
    if isinstance(node, Series):
        m1, m2 = 1.0, 1.0
        for child in node.children:
            c1, c2 = _moments(child, priors)
            m1 *= c1
            m2 *= c2
        return m1, m2
    u1, u2 = 1.0, 1.0
    for child in node.children:
        c1, c2 = _moments(child, priors)
        u1 *= 1.0 - c1
        u2 *= 1.0 - 2.0 * c1 + c2
    return 1.0 - u1, 1.0 - 2.0 * u1 + u2


def structure_from_obj(obj) -> BlockNode:
    """Build a tree from the parsed JSON form of the structure grammar."""
    if isinstance(obj, str):
        return Component(obj)
    if isinstance(obj, list):
        if not obj:
            raise ModelFormatError("structure array must not be empty")
        head = obj[0]
        if not isinstance(head, str) or head not in ("series", "parallel"):
            raise ModelFormatError(
                f"structure array must start with 'series' or 'parallel', got {head!r}"
            )
        if len(obj) == 1:
            raise ModelFormatError(f"'{head}' node has no children")
        children = [structure_from_obj(c) for c in obj[1:]]
        return Series(*children) if head == "series" else Parallel(*children)
    raise ModelFormatError(
        f"structure element must be a component id or an array, got {obj!r}"
    )


def structure_to_obj(node: BlockNode):
    """Inverse of structure_from_obj; children keep document order."""
    if isinstance(node, Component):
        return node.id
    head = "series" if isinstance(node, Series) else "parallel"
    return [head] + [structure_to_obj(c) for c in node.children]


def parse_structure(text: str) -> BlockNode:
    """Parse the JSON structure grammar into a tree."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"malformed structure document: {exc}") from exc
    return structure_from_obj(obj)


def serialize_structure(node: BlockNode) -> str:
    """Canonical JSON text for a tree; parse_structure round-trips it."""
    return json.dumps(structure_to_obj(node))
