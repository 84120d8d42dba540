"""
Ordered access lists
====================

ACL entries are linked one to the next. Ids say nothing about order, so the
generator follows the links. A loop in the links is rejected.
"""

from netproc import ChainCycleError, generate_all, load_bundled, load_model

mm, _, _, templates = load_bundled()


def acl_models(chain, close_loop=False):
    entries = {"Cf1_z": "10.0.0.0", "Cf1_a": "10.1.0.0", "Cf1_m": "0.0.0.0"}
    gvs = [{"id": "Cf1", "group": "Config", "items": {"deviceModel": "cisco-1812j"}}]
    gvs += [{"id": i, "group": "AccessList",
             "items": {"number": 30, "action": "permit", "source": src, "wildcard": "0.0.255.255"}}
            for i, src in entries.items()]
    rels = [{"from": "Cf1", "to": i} for i in entries]
    rels += [{"from": a, "to": b} for a, b in zip(chain, chain[1:])]
    if close_loop:
        rels.append({"from": chain[-1], "to": chain[0]})
    empty = load_model({"groupValues": gvs[:1], "relationshipValues": []}, mm)
    return empty, load_model({"groupValues": gvs, "relationshipValues": rels}, mm)


asis, tobe = acl_models(["Cf1_z", "Cf1_a", "Cf1_m"])
[proc] = generate_all(asis, tobe, mm, templates)
print("\n".join(proc.commands))

###############################################################################
# Closing the loop

asis, tobe = acl_models(["Cf1_z", "Cf1_a", "Cf1_m"], close_loop=True)
try:
    generate_all(asis, tobe, mm, templates)
except ChainCycleError as exc:
    print("rejected:", exc)
