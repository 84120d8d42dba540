"""Turn labeled AsIs/ToBe models into ordered per-device command procedures.

For each Config the generator keeps a list of command instances (in the
order they were produced) and a tree linking each instance to the most
recent instance of the row it depends on. Header rows go in first, then
the unset pass over the AsIs model, the set pass over the ToBe model and
the footer rows. Modal commands that turned out to be unnecessary are
pruned, mode-before/mode-after rows are attached around the surviving
modal commands, and the procedure is read off the tree in preorder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .diff import Label, LabeledModel, label_models
from .errors import GenerationError
from .metamodel import Metamodel
from .model import GroupValue, Model, config_roots, traversal
from .template import (PLACEHOLDER_RE, Template, TemplateRow, canonical, check_template,
                       eval_condition, expand_spec_items, select_template)

HOSTNAME_GROUP = "Hostname"


@dataclass(frozen=True)
class CommandInstance:
    seq: int
    text: str
    row_id: int | None
    kind: str
    modal: bool = False
    pass_: str | None = None  # "unset" | "set" for template rows
    source_id: str | None = None
    labeled: bool = False  # any watched item carries SET/UNSET


@dataclass
class CommandTree:
    instances: list[CommandInstance] = field(default_factory=list)
    parent_of: dict[int, int] = field(default_factory=dict)
    children: dict[int, list[int]] = field(default_factory=dict)
    removed: set[int] = field(default_factory=set)
    # emission-time wrappers per modal seq: (row id, text)
    before: dict[int, list[tuple[int, str]]] = field(default_factory=dict)
    after: dict[int, list[tuple[int, str]]] = field(default_factory=dict)
    _latest: dict[int, int] = field(default_factory=dict, repr=False)

    def add(self, row: TemplateRow, text: str, **kw) -> CommandInstance:
        parent = None
        if row.dep_id is not None:
            parent = self._latest.get(row.dep_id)
            if parent is None:
                raise GenerationError(
                    f"row {row.id} depends on row {row.dep_id}, which has no earlier instance"
                )
        inst = CommandInstance(len(self.instances), text, row.id, row.cmd_type,
                               modal=row.modal, **kw)
        self.instances.append(inst)
        self.children[inst.seq] = []
        if parent is not None:
            self.parent_of[inst.seq] = parent
            self.children[parent].append(inst.seq)
        self._latest[row.id] = inst.seq
        return inst

    def alive(self) -> list[CommandInstance]:
        return [i for i in self.instances if i.seq not in self.removed]

    def roots(self) -> list[int]:
        return [i.seq for i in self.alive() if i.seq not in self.parent_of]

    def live_children(self, seq: int) -> list[int]:
        return [c for c in self.children[seq] if c not in self.removed]

    def remove(self, seq: int) -> None:
        self.removed.add(seq)


@dataclass
class Procedure:
    device_name: str
    config_id: str
    commands: list[str]
    tree: CommandTree = field(default_factory=CommandTree, repr=False)
    trace: list[tuple[int | None, str]] = field(default_factory=list, repr=False)

    def render(self) -> str:
        return "".join(line + "\n" for line in self.commands)


def apply_row(row: TemplateRow, gv: GroupValue, labels: LabeledModel, pass_: str,
              tree: CommandTree) -> CommandInstance | None:
    """Add an instance of ``row`` for ``gv`` if either firing condition holds.

    Condition 1: a watched item carries this pass's label, every
    placeholder is filled and the row condition is true. Condition 2: the
    row is modal and every placeholder is filled (kept tentatively; see
    :func:`prune_redundant_modals`).
    """
    m = labels.base.metamodel
    wanted = Label.UNSET if pass_ == "unset" else Label.SET
    watched = [labels.label(gv.id, name) for name in expand_spec_items(row, m)]
    filled = all(gv.value(name) is not None for name in row.placeholders)
    if not filled:
        return None
    condition_1 = wanted in watched and eval_condition(row.condition, gv)
    if not (condition_1 or row.modal):
        return None
    text = PLACEHOLDER_RE.sub(lambda mo: canonical(gv.value(mo.group(1))), row.command)
    labeled = any(label is not Label.NONE for label in watched)
    return tree.add(row, text, pass_=pass_, source_id=gv.id, labeled=labeled)


def _run_pass(config_id: str, labeled: LabeledModel, pass_: str, template: Template,
              tree: CommandTree) -> None:
    model = labeled.base
    config = model.get(config_id)
    if config is None:
        return
    m = model.metamodel
    for gv in traversal(config, model, m):
        if not m.group(gv.group).config_relevant:
            continue
        for row in template.rows_by_group.get(gv.group, ()):
            if row.applies(pass_):
                apply_row(row, gv, labeled, pass_, tree)


def prune_redundant_modals(tree: CommandTree) -> CommandTree:
    """Drop modal instances with no SET/UNSET on their watched items and no children.

    Runs to a fixpoint: removing a leaf can leave its modal parent childless.
    """
    pending = [i.seq for i in tree.alive() if i.modal]
    while pending:
        seq = pending.pop()
        inst = tree.instances[seq]
        if seq in tree.removed or inst.labeled or tree.live_children(seq):
            continue
        tree.remove(seq)
        parent = tree.parent_of.get(seq)
        if parent is not None and tree.instances[parent].modal:
            pending.append(parent)
    return tree


def inject_mode_wrappers(tree: CommandTree, template: Template) -> CommandTree:
    before = [(r.id, r.command) for r in template.of_type("mode-before")]
    after = [(r.id, r.command) for r in template.of_type("mode-after")]
    for inst in tree.alive():
        if inst.modal:
            if before:
                tree.before[inst.seq] = before
            if after:
                tree.after[inst.seq] = after
    return tree


def emit_trace(tree: CommandTree) -> list[tuple[int | None, str]]:
    """Like :func:`emit` but pairs every line with the template row id it came from."""
    out: list[tuple[int | None, str]] = []

    def visit(seq: int) -> None:
        out.extend(tree.before.get(seq, ()))
        inst = tree.instances[seq]
        out.append((inst.row_id, inst.text))
        for child in tree.live_children(seq):
            visit(child)
        out.extend(tree.after.get(seq, ()))

    for root in tree.roots():
        visit(root)
    return out


def emit(tree: CommandTree) -> list[str]:
    """Preorder walk: roots and children in seq order, wrappers around modal subtrees."""
    return [text for _, text in emit_trace(tree)]


def device_name(config_id: str, *models: Model) -> str:
    """Hostname ``name`` under the Config, from the first model that has one."""
    for model in models:
        config = model.get(config_id)
        if config is None:
            continue
        for gv in traversal(config, model, model.metamodel):
            if gv.group == HOSTNAME_GROUP and gv.value("name") is not None:
                return str(gv.value("name"))
    return config_id


def generate_for_config(config_id: str, labeled_asis: LabeledModel, labeled_tobe: LabeledModel,
                        template: Template) -> Procedure:
    tree = CommandTree()
    for row in template.of_type("header"):
        tree.add(row, row.command)
    _run_pass(config_id, labeled_asis, "unset", template, tree)
    _run_pass(config_id, labeled_tobe, "set", template, tree)
    for row in template.of_type("footer"):
        tree.add(row, row.command)

    prune_redundant_modals(tree)
    if not any(inst.kind == "template" for inst in tree.alive()):
        # untouched device: no bare header/footer
        tree.removed.update(i.seq for i in tree.instances)
    inject_mode_wrappers(tree, template)
    name = device_name(config_id, labeled_tobe.base, labeled_asis.base)
    trace = emit_trace(tree)
    return Procedure(name, config_id, [text for _, text in trace], tree, trace)


def generate_all(asis: Model, tobe: Model, metamodel: Metamodel,
                 templates: Iterable[Template]) -> list[Procedure]:
    """One procedure per Config id (union of both models), in id order."""
    library = list(templates)
    labeled_asis, labeled_tobe = label_models(asis, tobe)
    configs: dict[str, GroupValue] = {gv.id: gv for gv in config_roots(asis)}
    configs.update({gv.id: gv for gv in config_roots(tobe)})  # ToBe deviceModel wins

    procedures = []
    checked: set[str] = set()
    for config_id in sorted(configs):
        template = select_template(configs[config_id], library)
        if template.device_model not in checked:
            check_template(template, metamodel)
            checked.add(template.device_model)
        procedures.append(generate_for_config(config_id, labeled_asis, labeled_tobe, template))
    return procedures
