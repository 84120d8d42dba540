"""Model differences: pair group values by id and label item values set/unset."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .errors import PairingError
from .model import GroupValue, Model, Value


class Label(enum.Enum):
    SET = "set"
    UNSET = "unset"
    NONE = "none"


@dataclass(frozen=True)
class PairingResult:
    matched: list[tuple[str, str]]
    asis_only: list[str]
    tobe_only: list[str]


@dataclass(frozen=True)
class LabeledModel:
    base: Model
    # (group value id, item name) -> label; only non-EMPTY item values appear
    labels: Mapping[tuple[str, str], Label] = field(default_factory=dict)

    def label(self, gv_id: str, item: str) -> Label:
        return self.labels.get((gv_id, item), Label.NONE)

    def marked(self, label: Label) -> set[tuple[str, str]]:
        return {key for key, value in self.labels.items() if value is label}


def pair_groups(asis: Model, tobe: Model) -> PairingResult:
    matched, asis_only = [], []
    for gv in asis.group_values:
        other = tobe.get(gv.id)
        if other is None:
            asis_only.append(gv.id)
            continue
        if other.group != gv.group:
            raise PairingError(
                f"id {gv.id!r} is a {gv.group} in AsIs but a {other.group} in ToBe"
            )
        matched.append((gv.id, other.id))
    tobe_only = [gv.id for gv in tobe.group_values if asis.get(gv.id) is None]
    return PairingResult(matched, asis_only, tobe_only)


def same_value(a: Value, b: Value) -> bool:
    """Typed equality: ``1 != True`` and ``"1" != 1``."""
    return type(a) is type(b) and a == b


def _label_pair(old: GroupValue, new: GroupValue, asis_labels, tobe_labels) -> None:
    for item in dict.fromkeys([*old.items, *new.items]):
        before, after = old.value(item), new.value(item)
        if before is not None and after is not None:
            changed = not same_value(before, after)
            asis_labels[old.id, item] = Label.UNSET if changed else Label.NONE
            tobe_labels[new.id, item] = Label.SET if changed else Label.NONE
        elif before is not None:
            asis_labels[old.id, item] = Label.UNSET
        elif after is not None:
            tobe_labels[new.id, item] = Label.SET


def label_models(asis: Model, tobe: Model) -> tuple[LabeledModel, LabeledModel]:
    """Label AsIs item values UNSET and ToBe item values SET where they differ.

    EMPTY values are never labeled. Group values without a partner of the
    same id are labeled wholesale. Link/Client values are labeled too; the
    generator ignores them.
    """
    pairing = pair_groups(asis, tobe)
    asis_labels: dict[tuple[str, str], Label] = {}
    tobe_labels: dict[tuple[str, str], Label] = {}
    for asis_id, tobe_id in pairing.matched:
        _label_pair(asis.by_id[asis_id], tobe.by_id[tobe_id], asis_labels, tobe_labels)
    for gv_id in pairing.asis_only:
        for item in asis.by_id[gv_id].filled():
            asis_labels[gv_id, item] = Label.UNSET
    for gv_id in pairing.tobe_only:
        for item in tobe.by_id[gv_id].filled():
            tobe_labels[gv_id, item] = Label.SET
    return LabeledModel(asis, asis_labels), LabeledModel(tobe, tobe_labels)


def diff_report(asis: Model, tobe: Model) -> dict:
    """JSON-ready diff summary with NONE labels omitted.

    Labels are nested as ``{group value id: {item: "set"|"unset"}}``.
    """
    pairing = pair_groups(asis, tobe)
    labeled_asis, labeled_tobe = label_models(asis, tobe)

    def nested(labeled: LabeledModel) -> dict:
        out: dict[str, dict[str, str]] = {}
        for (gv_id, item), label in sorted(labeled.labels.items()):
            if label is not Label.NONE:
                out.setdefault(gv_id, {})[item] = label.value
        return out

    return {
        "matched": [asis_id for asis_id, _ in pairing.matched],
        "asisOnly": pairing.asis_only,
        "tobeOnly": pairing.tobe_only,
        "labels": {"asis": nested(labeled_asis), "tobe": nested(labeled_tobe)},
    }
