"""
Label what changed between AsIs and ToBe
========================================

Group values are paired by id. Values that disappear or change are marked
``unset`` on the AsIs side, values that appear or change are marked ``set``
on the ToBe side. EMPTY values never carry a label.
"""

import json

from netproc import Label, diff_report, label_models, load_bundled, pair_groups

mm, asis, tobe, _ = load_bundled()

pairing = pair_groups(asis, tobe)
print("matched:", len(pairing.matched))
print("only in AsIs:", pairing.asis_only)
print("only in ToBe:", pairing.tobe_only)

###############################################################################
# Per-item labels
# ---------------

labeled_asis, labeled_tobe = label_models(asis, tobe)
for gv_id, item in sorted(labeled_asis.marked(Label.UNSET))[:6]:
    print("unset", gv_id, item, "was", labeled_asis.base.by_id[gv_id].value(item))
for gv_id, item in sorted(labeled_tobe.marked(Label.SET))[:6]:
    print("set  ", gv_id, item, "now", labeled_tobe.base.by_id[gv_id].value(item))

###############################################################################
# The same information as JSON, which is what ``netproc diff`` prints.
# Comparing a model with itself gives no labels at all.

report = diff_report(asis, tobe)
print(json.dumps(report["labels"]["tobe"].get("Cf1_Vl10"), indent=2))
print(diff_report(asis, asis)["labels"])
