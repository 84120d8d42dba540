"""
Load the bundled metamodel and campus models
============================================

The metamodel declares which configuration groups exist and how they relate.
Here we load it, look at inherited items, then load the AsIs and ToBe
campus models and check that both conform.
"""

from netproc import config_roots, effective_items, load_bundled, traversal, validate_conformance

mm, asis, tobe, templates = load_bundled()

###############################################################################
# Groups and inherited items
# --------------------------
# EthernetSetting inherits ``name`` from LinkableElement, so it comes first.

print([item.name for item in effective_items(mm, "EthernetSetting")])

irrelevant = sorted(name for name, g in mm.groups.items() if not g.config_relevant)
print("not configured on devices:", irrelevant)

###############################################################################
# Conformance
# -----------
# An empty list means no endpoint, multiplicity or composition problems.

for name, model in (("asis", asis), ("tobe", tobe)):
    print(name, len(model.group_values), "group values,", validate_conformance(model, mm))

###############################################################################
# Walking one device
# ------------------
# Traversal starts at a Config and never steps into Links, Clients or other
# devices. Access-list entries come out in chain order.

first = config_roots(tobe)[0]
for gv in traversal(first, tobe, mm):
    print(f"  {gv.group:<22} {gv.id}")
