"""Device configuration command templates (CSV) and row applicability.

A template is a CSV file whose first line is exactly::

    commandType,specItemGroup,specItem,procType,id,command,modal,depId,condition

One row per command. ``template`` rows fire on labeled item values;
``header``/``footer`` rows open and close every session; ``mode-before`` /
``mode-after`` rows bracket every modal command.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .errors import TemplateError
from .metamodel import Metamodel
from .model import GroupValue, Value

HEADER = ["commandType", "specItemGroup", "specItem", "procType", "id",
          "command", "modal", "depId", "condition"]
CMD_TYPES = ("template", "header", "footer", "mode-before", "mode-after")
PROC_TYPES = {"set": "set", "unset": "unset", "set/unset": "set-or-unset"}
ANY = "*"

PLACEHOLDER_RE = re.compile(r"<([A-Za-z_][A-Za-z0-9_]*)>")
_CONDITION_RE = re.compile(r"^<([A-Za-z_][A-Za-z0-9_]*)>\s*==\s*(\S(?:.*\S)?)$")


@dataclass(frozen=True)
class Condition:
    item: str
    literal: str

    @classmethod
    def parse(cls, text: str) -> Condition:
        m = _CONDITION_RE.match(text.strip())
        if m is None:
            raise TemplateError(f"malformed condition {text!r}; expected '<item> == value'")
        return cls(m.group(1), m.group(2))

    def __str__(self) -> str:
        return f"<{self.item}> == {self.literal}"


@dataclass(frozen=True)
class TemplateRow:
    cmd_type: str
    id: int
    command: str
    group: str | None = None
    spec_items: tuple[str, ...] | str = ()  # tuple of names, or ANY
    proc_type: str | None = None  # "set" | "unset" | "set-or-unset"
    modal: bool = False
    dep_id: int | None = None
    condition: Condition | None = None

    @cached_property
    def placeholders(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(PLACEHOLDER_RE.findall(self.command)))

    def applies(self, pass_: str) -> bool:
        return self.proc_type == pass_ or self.proc_type == "set-or-unset"


@dataclass(frozen=True)
class Template:
    device_model: str
    rows: tuple[TemplateRow, ...] = field(default_factory=tuple)

    @cached_property
    def by_id(self) -> dict[int, TemplateRow]:
        return {row.id: row for row in self.rows}

    def of_type(self, cmd_type: str) -> list[TemplateRow]:
        return [row for row in self.rows if row.cmd_type == cmd_type]

    @cached_property
    def rows_by_group(self) -> dict[str, list[TemplateRow]]:
        out: dict[str, list[TemplateRow]] = {}
        for row in self.rows:
            if row.cmd_type == "template":
                out.setdefault(row.group, []).append(row)
        return out


def _parse_int(text: str, what: str, line: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise TemplateError(f"line {line}: {what} must be an integer, got {text!r}") from None
    if value <= 0:
        raise TemplateError(f"line {line}: {what} must be positive, got {value}")
    return value


def _parse_row(cells: list[str], line: int) -> TemplateRow:
    if len(cells) != len(HEADER):
        raise TemplateError(f"line {line}: expected {len(HEADER)} columns, got {len(cells)}")
    cmd_type, group, spec, proc, id_text, command, modal, dep, cond = (c.strip() for c in cells)
    if cmd_type not in CMD_TYPES:
        raise TemplateError(f"line {line}: unknown commandType {cmd_type!r}")
    row_id = _parse_int(id_text, "id", line)
    dep_id = _parse_int(dep, "depId", line) if dep else None
    if not command:
        raise TemplateError(f"line {line}: empty command")
    if modal not in ("", "TRUE"):
        raise TemplateError(f"line {line}: modal must be TRUE or blank, got {modal!r}")

    if cmd_type != "template":
        extra = [name for name, value in
                 (("specItemGroup", group), ("specItem", spec), ("procType", proc),
                  ("modal", modal), ("condition", cond)) if value]
        if extra:
            raise TemplateError(
                f"line {line}: {cmd_type} row carries template-only field(s) {', '.join(extra)}"
            )
        if PLACEHOLDER_RE.search(command):
            raise TemplateError(f"line {line}: {cmd_type} row cannot use placeholders")
        return TemplateRow(cmd_type, row_id, command, dep_id=dep_id)

    if not group or not spec or not proc:
        raise TemplateError(f"line {line}: template row needs specItemGroup, specItem and procType")
    if proc not in PROC_TYPES:
        raise TemplateError(f"line {line}: procType must be set, unset or set/unset, got {proc!r}")
    spec_items: tuple[str, ...] | str = ANY if spec == ANY else tuple(
        s.strip() for s in spec.split("/"))
    if spec_items != ANY and not all(spec_items):
        raise TemplateError(f"line {line}: empty name in specItem {spec!r}")
    try:
        condition = Condition.parse(cond) if cond else None
    except TemplateError as exc:
        raise TemplateError(f"line {line}: {exc}") from None
    return TemplateRow(
        "template", row_id, command, group, spec_items, PROC_TYPES[proc],
        modal == "TRUE", dep_id, condition,
    )


def load_template(name: str, text: str) -> Template:
    """Parse CSV ``text`` into a :class:`Template` keyed by ``name`` (the deviceModel)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise TemplateError(f"template {name!r}: missing header row") from None
    if header != HEADER:
        raise TemplateError(f"template {name!r}: header must be {','.join(HEADER)}")
    rows = []
    for line, cells in enumerate(reader, start=2):
        if not cells:
            continue
        try:
            rows.append(_parse_row(cells, line))
        except TemplateError as exc:
            raise TemplateError(f"template {name!r}: {exc}") from None

    ids: set[int] = set()
    for row in rows:
        if row.id in ids:
            raise TemplateError(f"template {name!r}: duplicate id {row.id}")
        ids.add(row.id)
    deps = {row.id: row.dep_id for row in rows}
    for row in rows:
        if row.dep_id is not None and row.dep_id not in ids:
            raise TemplateError(f"template {name!r}: row {row.id} depends on unknown id {row.dep_id}")
    for start in deps:
        seen = []
        current: int | None = start
        while current is not None:
            if current in seen:
                cycle = " -> ".join(map(str, seen[seen.index(current):] + [current]))
                raise TemplateError(f"template {name!r}: depId cycle {cycle}")
            seen.append(current)
            current = deps[current]
    return Template(name, tuple(rows))


def load_template_dir(directory: str | Path) -> list[Template]:
    """Every ``*.csv`` in ``directory``, keyed by filename stem, in name order."""
    paths = sorted(Path(directory).glob("*.csv"))
    return [load_template(p.stem, p.read_text(encoding="utf-8")) for p in paths]


def select_template(config: GroupValue, library: Iterable[Template]) -> Template:
    device_model = config.value("deviceModel")
    if device_model is None:
        raise TemplateError(f"Config {config.id!r} has no deviceModel")
    found = [t for t in library if t.device_model == device_model]
    if not found:
        raise TemplateError(f"Config {config.id!r}: no template named {device_model!r}")
    if len(found) > 1:
        raise TemplateError(f"Config {config.id!r}: {len(found)} templates named {device_model!r}")
    return found[0]


def expand_spec_items(row: TemplateRow, m: Metamodel) -> list[str]:
    """Item names a template row watches, with ``*`` expanded over the row's group."""
    known = [item.name for item in m.effective_items(row.group)]
    if row.spec_items == ANY:
        return known
    for name in row.spec_items:
        if name not in known:
            raise TemplateError(f"row {row.id}: {name!r} is not an item of {row.group}")
    return list(row.spec_items)


def canonical(value: Value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def eval_condition(cond: Condition | None, gv: GroupValue) -> bool:
    if cond is None:
        return True
    if cond.item not in gv.items:
        raise TemplateError(f"condition item {cond.item!r} is not an item of {gv.group}")
    value = gv.value(cond.item)
    return value is not None and canonical(value) == cond.literal


def check_template(template: Template, m: Metamodel) -> None:
    """Check every group and item name the template mentions against ``m``."""
    for row in template.rows:
        if row.cmd_type != "template":
            continue
        if row.group not in m.groups:
            raise TemplateError(
                f"template {template.device_model!r} row {row.id}: unknown group {row.group!r}")
        expand_spec_items(row, m)
        known = set(m.item_types(row.group))
        names = list(row.placeholders) + ([row.condition.item] if row.condition else [])
        for name in names:
            if name not in known:
                raise TemplateError(
                    f"template {template.device_model!r} row {row.id}: "
                    f"{name!r} is not an item of {row.group}")
