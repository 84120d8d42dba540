"""
Generate the static-route to OSPF migration
===========================================

Each Config picks the template named after its ``deviceModel``. Unset
commands come from AsIs, set commands from ToBe, and every command is hung
under the most recent instance of the row it depends on.
"""

from netproc import generate_all, load_bundled

mm, asis, tobe, templates = load_bundled()
procedures = generate_all(asis, tobe, mm, templates)

for proc in procedures:
    print(f"--- {proc.device_name} ({proc.config_id}), {len(proc.commands)} commands")
    print(proc.render(), end="")

###############################################################################
# Looking at the command tree
# ---------------------------
# Modal commands with nothing beneath them and no change of their own are
# pruned. The removed instances are still in the tree for inspection.

campus2 = procedures[1]
pruned = [campus2.tree.instances[seq].text for seq in sorted(campus2.tree.removed)]
print("pruned on", campus2.device_name, pruned)

###############################################################################
# Which template row produced each line.

for row_id, text in procedures[2].trace[:8]:
    print(f"{row_id:>3}  {text}")
