"""Network configuration metamodel: specification-item groups, items, relationships.

A metamodel is loaded from a JSON document::

    {
      "groups": [
        {"name": "Config", "items": [{"name": "deviceModel", "type": "string"}]},
        {"name": "Hostname", "items": [{"name": "name", "type": "string"}]}
      ],
      "relationships": [
        {"a": "Config", "b": "Hostname", "aMult": "1", "bMult": "0..1",
         "kind": "composition", "compositeEnd": "a"}
      ]
    }

Multiplicities follow UML placement: ``aMult`` bounds how many ``a``-side
instances one ``b``-side instance may be linked to, and vice versa.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping

from .errors import ParseError, ValidationError

DATA_TYPES = ("string", "int", "bool")
KINDS = ("association", "composition")

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_MULT_RE = re.compile(r"^(\d+)(?:\.\.(\d+|\*))?$")


@dataclass(frozen=True)
class Multiplicity:
    """Inclusive bounds on a relationship end; ``upper is None`` means unbounded."""

    lower: int
    upper: int | None
    text: str

    @classmethod
    def parse(cls, text: str) -> Multiplicity:
        if not isinstance(text, str):
            raise ValidationError(f"multiplicity must be a string, got {text!r}")
        if text == "*":
            return cls(0, None, text)
        m = _MULT_RE.match(text)
        if m is None:
            raise ValidationError(f"bad multiplicity {text!r}")
        lower = int(m.group(1))
        if m.group(2) is None:
            return cls(lower, lower, text)
        if m.group(2) == "*":
            return cls(lower, None, text)
        upper = int(m.group(2))
        if upper < lower:
            raise ValidationError(f"bad multiplicity {text!r}: upper bound below lower bound")
        return cls(lower, upper, text)

    def admits(self, count: int) -> bool:
        return count >= self.lower and (self.upper is None or count <= self.upper)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class SpecItem:
    name: str
    data_type: str


@dataclass(frozen=True)
class SpecItemGroup:
    name: str
    items: tuple[SpecItem, ...] = ()
    parent: str | None = None
    config_relevant: bool = True


@dataclass(frozen=True)
class RelationshipDecl:
    a: str
    b: str
    a_mult: Multiplicity
    b_mult: Multiplicity
    kind: str = "association"
    composite_end: str | None = None  # "a" | "b"

    @property
    def is_self_reference(self) -> bool:
        return self.a == self.b

    def describe(self) -> str:
        arrow = "<>-" if self.kind == "composition" else "--"
        return f"{self.a}[{self.a_mult}] {arrow} {self.b}[{self.b_mult}]"


@dataclass(frozen=True)
class Metamodel:
    groups: Mapping[str, SpecItemGroup]
    relationships: tuple[RelationshipDecl, ...] = field(default_factory=tuple)

    def group(self, name: str) -> SpecItemGroup:
        try:
            return self.groups[name]
        except KeyError:
            raise ValidationError(f"unknown group {name!r}") from None

    def ancestors(self, name: str) -> list[str]:
        """``name`` followed by its parents, nearest first."""
        chain = []
        current: str | None = name
        while current is not None:
            chain.append(current)
            current = self.group(current).parent
        return chain

    def is_a(self, name: str, other: str) -> bool:
        return other in self._ancestor_sets[name]

    @cached_property
    def _ancestor_sets(self) -> dict[str, frozenset[str]]:
        return {name: frozenset(self.ancestors(name)) for name in self.groups}

    @cached_property
    def _effective_items(self) -> dict[str, tuple[SpecItem, ...]]:
        out = {}
        for name in self.groups:
            items: list[SpecItem] = []
            for ancestor in reversed(self.ancestors(name)):
                items.extend(self.groups[ancestor].items)
            out[name] = tuple(items)
        return out

    def effective_items(self, group: str) -> list[SpecItem]:
        self.group(group)
        return list(self._effective_items[group])

    def item_types(self, group: str) -> dict[str, str]:
        return {item.name: item.data_type for item in self._effective_items[group]}

    def effective_relationships(self, group: str) -> list[RelationshipDecl]:
        lineage = set(self.ancestors(group))
        return [r for r in self.relationships if r.a in lineage or r.b in lineage]

    def chain_decl(self, group: str) -> RelationshipDecl | None:
        """The self-referencing ``0..1``/``0..1`` declaration ordering ``group``, if any."""
        for decl in self.effective_relationships(group):
            if (
                decl.is_self_reference
                and decl.a_mult.text == "0..1"
                and decl.b_mult.text == "0..1"
            ):
                return decl
        return None


def effective_items(m: Metamodel, group: str) -> list[SpecItem]:
    """Inherited items (ancestor first) followed by the group's own items."""
    return m.effective_items(group)


def effective_relationships(m: Metamodel, group: str) -> list[RelationshipDecl]:
    """Relationships touching ``group`` or any of its ancestors, in declaration order."""
    return m.effective_relationships(group)


def _check_keys(obj: Any, allowed: Iterable[str], required: Iterable[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ValidationError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ValidationError(f"{where}: missing key(s) {', '.join(missing)}")


def _check_name(name: Any, where: str) -> str:
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise ValidationError(f"{where}: invalid name {name!r}")
    return name


def _parse_document(document: str | bytes | Mapping) -> Any:
    if isinstance(document, Mapping):
        return document
    try:
        return json.loads(document)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"not a JSON document: {exc}") from exc


def load_metamodel(document: str | bytes | Mapping) -> Metamodel:
    """Parse and validate a metamodel document (JSON text or an already-decoded dict)."""
    doc = _parse_document(document)
    _check_keys(doc, ("groups", "relationships"), ("groups",), "metamodel")
    raw_groups = doc["groups"]
    raw_rels = doc.get("relationships", [])
    if not isinstance(raw_groups, list) or not isinstance(raw_rels, list):
        raise ValidationError("metamodel: 'groups' and 'relationships' must be arrays")

    groups: dict[str, SpecItemGroup] = {}
    for i, raw in enumerate(raw_groups):
        _check_keys(raw, ("name", "parent", "configRelevant", "items"), ("name",), f"groups[{i}]")
        name = _check_name(raw["name"], f"groups[{i}]")
        if name in groups:
            raise ValidationError(f"duplicate group {name!r}")
        relevant = raw.get("configRelevant", True)
        if not isinstance(relevant, bool):
            raise ValidationError(f"group {name!r}: configRelevant must be a boolean")
        parent = raw.get("parent")
        if parent is not None:
            _check_name(parent, f"group {name!r} parent")
        items = []
        seen = set()
        for j, raw_item in enumerate(raw.get("items", [])):
            _check_keys(raw_item, ("name", "type"), ("name", "type"), f"group {name!r} items[{j}]")
            item_name = _check_name(raw_item["name"], f"group {name!r} items[{j}]")
            if raw_item["type"] not in DATA_TYPES:
                raise ValidationError(
                    f"group {name!r} item {item_name!r}: type must be one of {DATA_TYPES}"
                )
            if item_name in seen:
                raise ValidationError(f"group {name!r}: duplicate item {item_name!r}")
            seen.add(item_name)
            items.append(SpecItem(item_name, raw_item["type"]))
        groups[name] = SpecItemGroup(name, tuple(items), parent, relevant)

    for g in groups.values():
        if g.parent is not None and g.parent not in groups:
            raise ValidationError(f"group {g.name!r}: unknown parent {g.parent!r}")
    _check_acyclic(groups)
    _check_no_redeclaration(groups)

    rels = []
    for i, raw in enumerate(raw_rels):
        _check_keys(
            raw,
            ("a", "b", "aMult", "bMult", "kind", "compositeEnd"),
            ("a", "b", "aMult", "bMult"),
            f"relationships[{i}]",
        )
        for end in ("a", "b"):
            if raw[end] not in groups:
                raise ValidationError(f"relationships[{i}]: unknown group {raw[end]!r}")
        kind = raw.get("kind", "association")
        if kind not in KINDS:
            raise ValidationError(f"relationships[{i}]: kind must be one of {KINDS}")
        composite_end = raw.get("compositeEnd")
        if kind == "composition" and composite_end not in ("a", "b"):
            raise ValidationError(f"relationships[{i}]: composition needs compositeEnd 'a' or 'b'")
        if kind == "association" and composite_end is not None:
            raise ValidationError(f"relationships[{i}]: compositeEnd only allowed on compositions")
        try:
            a_mult = Multiplicity.parse(raw["aMult"])
            b_mult = Multiplicity.parse(raw["bMult"])
        except ValidationError as exc:
            raise ValidationError(f"relationships[{i}]: {exc}") from None
        rels.append(RelationshipDecl(raw["a"], raw["b"], a_mult, b_mult, kind, composite_end))

    return Metamodel(groups, tuple(rels))


def _check_acyclic(groups: Mapping[str, SpecItemGroup]) -> None:
    done: set[str] = set()
    for start in groups:
        path: list[str] = []
        current: str | None = start
        while current is not None and current not in done:
            if current in path:
                cycle = " -> ".join(path[path.index(current):] + [current])
                raise ValidationError(f"generalization cycle: {cycle}")
            path.append(current)
            current = groups[current].parent
        done.update(path)


def _check_no_redeclaration(groups: Mapping[str, SpecItemGroup]) -> None:
    for g in groups.values():
        own = {item.name for item in g.items}
        parent = g.parent
        while parent is not None:
            clash = own & {item.name for item in groups[parent].items}
            if clash:
                raise ValidationError(
                    f"group {g.name!r} redeclares inherited item(s) "
                    f"{', '.join(sorted(clash))} from {parent!r}"
                )
            parent = groups[parent].parent


def dump_metamodel(m: Metamodel) -> dict:
    """Inverse of :func:`load_metamodel`; ``load_metamodel(dump_metamodel(m)) == m``."""
    groups = []
    for g in m.groups.values():
        raw: dict[str, Any] = {"name": g.name}
        if g.parent is not None:
            raw["parent"] = g.parent
        if not g.config_relevant:
            raw["configRelevant"] = False
        raw["items"] = [{"name": i.name, "type": i.data_type} for i in g.items]
        groups.append(raw)
    rels = []
    for r in m.relationships:
        raw = {"a": r.a, "b": r.b, "aMult": r.a_mult.text, "bMult": r.b_mult.text, "kind": r.kind}
        if r.composite_end is not None:
            raw["compositeEnd"] = r.composite_end
        rels.append(raw)
    return {"groups": groups, "relationships": rels}
