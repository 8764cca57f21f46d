"""Replayable construction trees: scale / add / superpose over generator weightings.

Builders evaluate eagerly and cache the claimed value on each node;
``replay`` ignores those caches and recomputes from the leaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CertificateError, InputError
from .ops import Operation
from .rationals import format_rational, to_rational
from .weightings import Weighting, superpose_weighting, validate_weighting


class Node:
    value: Weighting


@dataclass(eq=False)
class Leaf(Node):
    weighting: Weighting
    label: Optional[str] = None

    def __post_init__(self):
        self.value = self.weighting


@dataclass(eq=False)
class Scale(Node):
    coef: Fraction
    child: Node

    def __post_init__(self):
        self.coef = to_rational(self.coef)
        if self.coef < 0:
            raise InputError("Scale coefficients must be nonnegative")
        self.value = self.child.value.scaled(self.coef)


@dataclass(eq=False)
class Add(Node):
    left: Node
    right: Node

    def __post_init__(self):
        self.value = self.left.value + self.right.value


@dataclass(eq=False)
class Superpose(Node):
    child: Node
    ops: tuple[Operation, ...]

    def __post_init__(self):
        self.ops = tuple(self.ops)
        # intermediate superpositions need not be proper
        self.value = superpose_weighting(self.child.value, self.ops)


def linear(terms: Sequence[tuple[object, Node]]) -> Node:
    """Left-folded sum of scaled nodes; unit coefficients are not wrapped."""
    out: Optional[Node] = None
    for c, node in terms:
        c = to_rational(c)
        term = node if c == 1 else Scale(c, node)
        out = term if out is None else Add(out, term)
    if out is None:
        raise InputError("empty linear combination")
    return out


@dataclass
class ReplayResult:
    weighting: Weighting
    matches: Optional[bool]


def _evaluate(root: Node) -> Weighting:
    memo: dict[int, Weighting] = {}
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in memo:
            continue
        kids = _children(node)
        if not expanded and any(id(k) not in memo for k in kids):
            stack.append((node, True))
            stack.extend((k, False) for k in kids if id(k) not in memo)
            continue
        if isinstance(node, Leaf):
            val = node.weighting
        elif isinstance(node, Scale):
            val = memo[id(node.child)].scaled(node.coef)
        elif isinstance(node, Add):
            val = memo[id(node.left)] + memo[id(node.right)]
        elif isinstance(node, Superpose):
            val = superpose_weighting(memo[id(node.child)], node.ops)
        else:
            raise CertificateError(f"unknown node type {type(node).__name__}")
        memo[id(node)] = val
    return memo[id(root)]


def _children(node: Node) -> list[Node]:
    if isinstance(node, (Scale, Superpose)):
        return [node.child]
    if isinstance(node, Add):
        return [node.left, node.right]
    return []


def replay(root: Node, expected: Optional[Weighting] = None) -> ReplayResult:
    """Recompute the tree bottom-up; the final value must be a valid weighting."""
    for leaf in _nodes(root):
        if isinstance(leaf, Leaf) and not validate_weighting(leaf.weighting).valid:
            raise CertificateError("certificate leaf is not a valid weighting")
    result = _evaluate(root)
    report = validate_weighting(result)
    if not report.valid:
        raise CertificateError(
            "replayed certificate is not a valid weighting: "
            + ("nonzero total" if not report.zero_sum else "negative weight on a non-projection")
        )
    return ReplayResult(result, None if expected is None else result == expected)


def _nodes(root: Node) -> list[Node]:
    """All distinct nodes, children before parents."""
    order: list[Node] = []
    seen: set[int] = set()
    stack = [(root, False)]
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        stack.extend((k, False) for k in reversed(_children(node)) if id(k) not in seen)
    return order


# ----------------------------------------------------------------- JSON (DAG)


def tree_to_json(root: Node, generators: Sequence[Weighting] = ()) -> dict:
    """Flatten to a node list in dependency order; shared subtrees appear once.

    Leaves equal to one of ``generators`` reference it by index.
    """
    ids: dict[int, int] = {}
    nodes = []
    for node in _nodes(root):
        entry: dict
        if isinstance(node, Leaf):
            entry = {"kind": "leaf"}
            idx = next((i for i, g in enumerate(generators) if g == node.weighting), None)
            if idx is None:
                entry["weighting"] = node.weighting.to_json()
            else:
                entry["generator"] = idx
            if node.label:
                entry["label"] = node.label
        elif isinstance(node, Scale):
            entry = {"kind": "scale", "coef": format_rational(node.coef), "child": ids[id(node.child)]}
        elif isinstance(node, Add):
            entry = {"kind": "add", "left": ids[id(node.left)], "right": ids[id(node.right)]}
        else:
            entry = {
                "kind": "superpose",
                "child": ids[id(node.child)],
                "ops": [op.to_json() for op in node.ops],
            }
        ids[id(node)] = len(nodes)
        entry["id"] = ids[id(node)]
        nodes.append(entry)
    return {
        "generators": [g.to_json() for g in generators],
        "nodes": nodes,
        "root": ids[id(root)],
    }


def tree_from_json(data: dict) -> Node:
    from .io import operation_from_json, weighting_from_json

    gens = [weighting_from_json(g) for g in data.get("generators", [])]
    built: dict[int, Node] = {}
    try:
        for entry in data["nodes"]:
            kind = entry["kind"]
            if kind == "leaf":
                w = gens[entry["generator"]] if "generator" in entry else weighting_from_json(entry["weighting"])
                node: Node = Leaf(w, entry.get("label"))
            elif kind == "scale":
                node = Scale(to_rational(entry["coef"]), built[entry["child"]])
            elif kind == "add":
                node = Add(built[entry["left"]], built[entry["right"]])
            elif kind == "superpose":
                child = built[entry["child"]]
                ops = [operation_from_json(o, child.value.n) for o in entry["ops"]]
                node = Superpose(child, tuple(ops))
            else:
                raise InputError(f"unknown certificate node kind {kind!r}")
            built[entry["id"]] = node
        return built[data["root"]]
    except (KeyError, IndexError, TypeError) as exc:
        raise InputError(f"malformed certificate: {exc}") from None
