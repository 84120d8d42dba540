"""Network configuration models (AsIs / ToBe) and their traversal.

Model documents are JSON::

    {
      "name": "asis",
      "groupValues": [
        {"id": "Cf1", "group": "Config", "items": {"name": "campus1", "deviceModel": "cisco-1812j"}},
        {"id": "Cf1_Hn", "group": "Hostname", "items": {"name": "campus1"}}
      ],
      "relationshipValues": [{"from": "Cf1", "to": "Cf1_Hn"}]
    }

An item that is missing or ``null`` is EMPTY (represented as ``None``);
``""`` is an ordinary string value.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping

from .errors import ChainCycleError, ValidationError
from .metamodel import Metamodel, RelationshipDecl, _check_keys, _parse_document

CONFIG_GROUP = "Config"

Value = str | int | bool | None


@dataclass(frozen=True)
class GroupValue:
    id: str
    group: str
    items: Mapping[str, Value] = field(default_factory=dict)

    def value(self, item: str) -> Value:
        """Item value, or ``None`` when EMPTY."""
        return self.items.get(item)

    def filled(self) -> dict[str, Value]:
        return {k: v for k, v in self.items.items() if v is not None}


@dataclass(frozen=True)
class RelationshipValue:
    from_id: str
    to_id: str
    decl_index: int | None
    # orientation against the declaration: True when from_id sits on the decl's "a" end
    from_is_a: bool = True

    @property
    def a_id(self) -> str:
        return self.from_id if self.from_is_a else self.to_id

    @property
    def b_id(self) -> str:
        return self.to_id if self.from_is_a else self.from_id


@dataclass(frozen=True)
class Violation:
    kind: str  # "endpoint" | "multiplicity" | "composition"
    ids: tuple[str, ...]
    decl: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class Model:
    name: str
    group_values: tuple[GroupValue, ...]
    relationship_values: tuple[RelationshipValue, ...]
    metamodel: Metamodel = field(repr=False, compare=False)

    @cached_property
    def by_id(self) -> dict[str, GroupValue]:
        return {gv.id: gv for gv in self.group_values}

    def get(self, gv_id: str) -> GroupValue | None:
        return self.by_id.get(gv_id)

    @cached_property
    def _adjacency(self) -> dict[str, list[tuple[str, RelationshipValue]]]:
        adj: dict[str, list[tuple[str, RelationshipValue]]] = defaultdict(list)
        for rv in self.relationship_values:
            adj[rv.from_id].append((rv.to_id, rv))
            if rv.to_id != rv.from_id:
                adj[rv.to_id].append((rv.from_id, rv))
        return adj

    def neighbours(self, gv_id: str) -> list[tuple[str, RelationshipValue]]:
        return self._adjacency.get(gv_id, [])


def _coerce(value: Any, data_type: str, where: str) -> Value:
    if value is None:
        return None
    if data_type == "string" and isinstance(value, str):
        return value
    if data_type == "bool" and isinstance(value, bool):
        return value
    if data_type == "int" and isinstance(value, int) and not isinstance(value, bool):
        return value
    raise ValidationError(f"{where}: expected {data_type}, got {value!r}")


def _infer_decl(m: Metamodel, from_group: str, to_group: str) -> tuple[int | None, bool]:
    matches = []
    for index, decl in enumerate(m.relationships):
        if m.is_a(from_group, decl.a) and m.is_a(to_group, decl.b):
            matches.append((index, True))
        elif m.is_a(from_group, decl.b) and m.is_a(to_group, decl.a):
            matches.append((index, False))
    if len(matches) > 1:
        decls = "; ".join(m.relationships[i].describe() for i, _ in matches)
        raise ValidationError(
            f"ambiguous relationship {from_group} -> {to_group}: matches {decls}"
        )
    return matches[0] if matches else (None, True)


def load_model(document: str | bytes | Mapping, m: Metamodel) -> Model:
    """Parse a model document and type-check it against ``m``.

    Conformance (multiplicities, composition ownership, endpoint
    compatibility) is left to :func:`validate_conformance`.
    """
    doc = _parse_document(document)
    _check_keys(doc, ("name", "groupValues", "relationshipValues"), ("groupValues",), "model")
    raw_gvs = doc["groupValues"]
    raw_rvs = doc.get("relationshipValues", [])
    if not isinstance(raw_gvs, list) or not isinstance(raw_rvs, list):
        raise ValidationError("model: 'groupValues' and 'relationshipValues' must be arrays")

    gvs: dict[str, GroupValue] = {}
    for i, raw in enumerate(raw_gvs):
        _check_keys(raw, ("id", "group", "items"), ("id", "group"), f"groupValues[{i}]")
        gv_id = raw["id"]
        if not isinstance(gv_id, str) or not gv_id:
            raise ValidationError(f"groupValues[{i}]: id must be a non-empty string")
        if gv_id in gvs:
            raise ValidationError(f"duplicate group value id {gv_id!r}")
        group = raw["group"]
        if group not in m.groups:
            raise ValidationError(f"group value {gv_id!r}: unknown group {group!r}")
        types = m.item_types(group)
        raw_items = raw.get("items", {})
        if not isinstance(raw_items, dict):
            raise ValidationError(f"group value {gv_id!r}: items must be an object")
        unknown = sorted(set(raw_items) - set(types))
        if unknown:
            raise ValidationError(
                f"group value {gv_id!r}: unknown item(s) {', '.join(unknown)} for group {group!r}"
            )
        items = {
            name: _coerce(raw_items.get(name), dtype, f"group value {gv_id!r} item {name!r}")
            for name, dtype in types.items()
        }
        gvs[gv_id] = GroupValue(gv_id, group, items)

    rvs = []
    for i, raw in enumerate(raw_rvs):
        _check_keys(raw, ("from", "to"), ("from", "to"), f"relationshipValues[{i}]")
        for end in ("from", "to"):
            if raw[end] not in gvs:
                raise ValidationError(
                    f"relationshipValues[{i}]: unknown group value {raw[end]!r}"
                )
        src, dst = gvs[raw["from"]], gvs[raw["to"]]
        decl_index, from_is_a = _infer_decl(m, src.group, dst.group)
        rvs.append(RelationshipValue(src.id, dst.id, decl_index, from_is_a))

    return Model(doc.get("name", ""), tuple(gvs.values()), tuple(rvs), m)


def validate_conformance(model: Model, m: Metamodel) -> list[Violation]:
    """Every multiplicity, composition-ownership and endpoint violation in ``model``."""
    violations = []
    per_decl: dict[int, list[RelationshipValue]] = defaultdict(list)
    for rv in model.relationship_values:
        if rv.decl_index is None:
            a, b = model.by_id[rv.from_id], model.by_id[rv.to_id]
            violations.append(Violation(
                "endpoint", (rv.from_id, rv.to_id), "",
                f"no relationship declared between {a.group} ({a.id}) and {b.group} ({b.id})",
            ))
        else:
            per_decl[rv.decl_index].append(rv)

    for index, decl in enumerate(m.relationships):
        a_partners: dict[str, int] = defaultdict(int)  # b-end id -> number of a partners
        b_partners: dict[str, int] = defaultdict(int)
        for rv in per_decl.get(index, ()):
            b_partners[rv.a_id] += 1
            a_partners[rv.b_id] += 1
        for gv in model.group_values:
            if m.is_a(gv.group, decl.a) and not decl.b_mult.admits(b_partners[gv.id]):
                violations.append(_mult_violation(gv, decl, decl.b, decl.b_mult, b_partners[gv.id]))
            if m.is_a(gv.group, decl.b) and not decl.a_mult.admits(a_partners[gv.id]):
                violations.append(_mult_violation(gv, decl, decl.a, decl.a_mult, a_partners[gv.id]))

    owners: dict[str, list[str]] = defaultdict(list)
    for index, rvs in per_decl.items():
        decl = m.relationships[index]
        if decl.kind != "composition":
            continue
        for rv in rvs:
            whole, part = (rv.a_id, rv.b_id) if decl.composite_end == "a" else (rv.b_id, rv.a_id)
            owners[part].append(whole)
    for part, wholes in owners.items():
        if len(wholes) > 1:
            violations.append(Violation(
                "composition", (part, *sorted(wholes)), "",
                f"{part} is owned by more than one composite: {', '.join(sorted(wholes))}",
            ))
    return violations


def _mult_violation(gv, decl: RelationshipDecl, far: str, mult, count: int) -> Violation:
    return Violation(
        "multiplicity", (gv.id,), decl.describe(),
        f"{gv.id} ({gv.group}) is linked to {count} {far} value(s); "
        f"{decl.describe()} allows {mult}",
    )


def config_roots(model: Model) -> list[GroupValue]:
    """All Config group values, ordered by id."""
    m = model.metamodel
    roots = [gv for gv in model.group_values if m.is_a(gv.group, CONFIG_GROUP)]
    return sorted(roots, key=lambda gv: gv.id)


def traversal(config: GroupValue, model: Model, m: Metamodel) -> list[GroupValue]:
    """Deterministic preorder depth-first walk of the group values under ``config``.

    Group values of non-config-relevant groups (Link, Client...) are not
    entered, nor are other Config values. Siblings are ordered by
    (group, id), except groups carrying a ``0..1``/``0..1`` self-reference,
    whose siblings are visited in chain order from the head.
    """
    chain_decls = {i for i, d in enumerate(m.relationships)
                   if d.is_self_reference and d.a_mult.text == "0..1" and d.b_mult.text == "0..1"}
    visited: set[str] = set()
    order: list[GroupValue] = []
    stack = [config.id]
    while stack:
        gv_id = stack.pop()
        if gv_id in visited:
            continue
        visited.add(gv_id)
        gv = model.by_id[gv_id]
        order.append(gv)
        children = _ordered_children(gv, model, m, visited, chain_decls)
        stack.extend(reversed(children))
    return order


def _ordered_children(gv, model, m, visited, chain_decls) -> list[str]:
    by_group: dict[str, set[str]] = defaultdict(set)
    for other_id, rv in model.neighbours(gv.id):
        if rv.decl_index in chain_decls or other_id in visited:
            continue
        other = model.by_id[other_id]
        if not m.group(other.group).config_relevant or m.is_a(other.group, CONFIG_GROUP):
            continue
        by_group[other.group].add(other_id)

    ordered = []
    for group in sorted(by_group):
        siblings = by_group[group]
        chain = m.chain_decl(group)
        if chain is None:
            ordered.extend(sorted(siblings))
        else:
            ordered.extend(_chain_order(siblings, model, m.relationships.index(chain)))
    return ordered


def _chain_order(siblings: set[str], model: Model, decl_index: int) -> list[str]:
    nxt: dict[str, str] = {}
    for rv in model.relationship_values:
        if rv.decl_index == decl_index and rv.from_id in siblings and rv.to_id in siblings:
            nxt.setdefault(rv.from_id, rv.to_id)
    heads = sorted(siblings - set(nxt.values()))
    order: list[str] = []
    seen: set[str] = set()
    for head in heads:
        current: str | None = head
        while current is not None:
            if current in seen:
                raise ChainCycleError(f"chain cycle through {current!r}")
            seen.add(current)
            order.append(current)
            current = nxt.get(current)
    if len(order) != len(siblings):
        stuck = sorted(siblings - seen)
        raise ChainCycleError(f"chain cycle among {', '.join(stuck)}")
    return order
