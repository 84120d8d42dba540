import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import fuzz
import naive
from scan import dependency_order_ok
from netproc import (CommandTree, GenerationError, Label, TemplateRow, apply_row, bundled, emit,
                     generate_all, generate_for_config, inject_mode_wrappers, label_models,
                     load_metamodel, load_model, load_template, prune_redundant_modals)
from netproc.template import HEADER

HEAD = ",".join(HEADER) + "\n"
FZ = fuzz.METAMODEL


@pytest.fixture(scope="module")
def mm():
    return load_metamodel(bundled("metamodel.json").read_text(encoding="utf-8"))


def tpl(*lines, name="fz"):
    return load_template(name, HEAD + "".join(line + "\n" for line in lines))


def model(m, *gvs, rels=()):
    return load_model({
        "groupValues": [{"id": i, "group": g, "items": items} for i, g, items in gvs],
        "relationshipValues": [{"from": a, "to": b} for a, b in rels],
    }, m)


HOSTNAME_TEMPLATE = (
    "header,,,,1,configure terminal,,,",
    "template,Hostname,name,set,3,hostname <name>,,1,",
    "footer,,,,4,end,,1,",
)


def hostname_models(old, new):
    cfg = ("Cf1", "Config", {"deviceModel": "fz"})
    return (model(FZ, cfg, ("Cf1_Hn", "Hostname", {"name": old}), rels=[("Cf1", "Cf1_Hn")]),
            model(FZ, cfg, ("Cf1_Hn", "Hostname", {"name": new}), rels=[("Cf1", "Cf1_Hn")]))


def test_hostname_change_full_trace():
    asis, tobe = hostname_models("Router0", "Router1")
    [proc] = generate_all(asis, tobe, FZ, [tpl(*HOSTNAME_TEMPLATE)])
    assert proc.commands == ["configure terminal", "hostname Router1", "end"]
    assert proc.device_name == "Router1"
    assert proc.render() == "configure terminal\nhostname Router1\nend\n"


def test_no_labels_no_commands():
    asis, _ = hostname_models("Router0", "Router0")
    [proc] = generate_all(asis, asis, FZ, [tpl(*HOSTNAME_TEMPLATE)])
    assert proc.commands == []
    assert proc.render() == ""


def test_ospf_added(mm):
    cfg = ("Cf1", "Config", {"deviceModel": "fz"})
    asis = model(mm, cfg)
    tobe = model(mm, cfg, ("Os", "OspfSetting", {"processId": 1}),
                 ("If", "OspfInterfaceSetting", {"network": "10.0.2.0", "wildcard": "0.0.0.255", "areaId": 0}),
                 rels=[("Cf1", "Os"), ("Os", "If")])
    t = tpl("header,,,,1,configure terminal,,,",
            "template,OspfSetting,*,set,2,router ospf <processId>,TRUE,1,",
            "template,OspfInterfaceSetting,*,set,3,network <network> <wildcard> area <areaId>,,2,",
            "mode-after,,,,4,exit,,,",
            "footer,,,,5,end,,1,")
    [proc] = generate_all(asis, tobe, mm, [t])
    assert proc.commands == ["configure terminal", "router ospf 1",
                             "network 10.0.2.0 0.0.0.255 area 0", "exit", "end"]


def test_removed_device_gets_pure_unset():
    cfg = ("Cf9", "Config", {"deviceModel": "fz"})
    asis = model(FZ, cfg, ("R", "Route", {"prefix": "10.1.0.0", "nextHop": "10.9.0.1"}),
                 rels=[("Cf9", "R")])
    tobe = model(FZ)
    t = tpl("template,Route,*,unset,1,no ip route <prefix> <nextHop>,,,",
            "template,Route,*,set,2,ip route <prefix> <nextHop>,,,")
    [proc] = generate_all(asis, tobe, FZ, [t])
    assert proc.config_id == "Cf9"
    assert proc.device_name == "Cf9"
    assert proc.commands == ["no ip route 10.1.0.0 10.9.0.1"]
    assert {i.pass_ for i in proc.tree.alive()} == {"unset"}


def test_unset_pass_reads_asis_values():
    asis, tobe = hostname_models("old", "new")
    t = tpl("template,Hostname,name,unset,1,no hostname <name>,,,",
            "template,Hostname,name,set,2,hostname <name>,,,")
    [proc] = generate_all(asis, tobe, FZ, [t])
    assert proc.commands == ["no hostname old", "hostname new"]


def test_two_configs_in_id_order_and_independent():
    doc = {"groupValues": [], "relationshipValues": []}
    for cf in ("Cf2", "Cf1"):
        doc["groupValues"] += [{"id": cf, "group": "Config", "items": {"deviceModel": "fz"}},
                               {"id": cf + "_Hn", "group": "Hostname", "items": {"name": cf.lower()}}]
        doc["relationshipValues"].append({"from": cf, "to": cf + "_Hn"})
    tobe_doc = fuzz.mutate_doc(random.Random(11), doc, p_change=1.0, p_empty=0.0)
    t = tpl(*HOSTNAME_TEMPLATE)
    procs = generate_all(load_model(doc, FZ), load_model(tobe_doc, FZ), FZ, [t])
    assert [p.config_id for p in procs] == ["Cf1", "Cf2"]

    def only_cf1(d):
        return {k: [x for x in v if "Cf2" not in str(x)] for k, v in d.items()}
    [alone] = generate_all(load_model(only_cf1(doc), FZ), load_model(only_cf1(tobe_doc), FZ), FZ, [t])
    assert alone.commands == procs[0].commands


def test_dangling_dependency_is_error():
    asis, tobe = hostname_models("a", "b")
    t = tpl("template,Route,*,set,1,route,,,", "template,Hostname,name,set,2,hostname <name>,,1,")
    with pytest.raises(GenerationError, match="row 2 depends on row 1"):
        generate_all(asis, tobe, FZ, [t])


# --- apply_row -------------------------------------------------------------

def labeled_pair(old, new):
    asis, tobe = hostname_models(old, new)
    return label_models(asis, tobe)


def test_apply_row_set_label():
    _, tobe = labeled_pair("Router0", "Router1")
    row = tpl("template,Hostname,name,set,3,hostname <name>,,,").rows[0]
    inst = apply_row(row, tobe.base.by_id["Cf1_Hn"], tobe, "set", CommandTree())
    assert inst.text == "hostname Router1"
    assert inst.pass_ == "set" and inst.source_id == "Cf1_Hn"


def test_apply_row_no_label_not_modal():
    _, tobe = labeled_pair("Router1", "Router1")
    row = tpl("template,Hostname,name,set,3,hostname <name>,,,").rows[0]
    assert apply_row(row, tobe.base.by_id["Cf1_Hn"], tobe, "set", CommandTree()) is None


def test_apply_row_modal_is_speculative():
    cfg = ("Cf1", "Config", {"deviceModel": "fz"})
    vlan = ("V", "Vlan", {"vlanId": 10})
    m = model(FZ, cfg, vlan, rels=[("Cf1", "V")])
    _, tobe = label_models(m, m)
    row = tpl("template,Vlan,*,set/unset,1,interface vlan <vlanId>,TRUE,,").rows[0]
    inst = apply_row(row, tobe.base.by_id["V"], tobe, "set", CommandTree())
    assert inst.text == "interface vlan 10"
    assert inst.modal and not inst.labeled


def test_apply_row_skips_empty_placeholder():
    cfg = ("Cf1", "Config", {"deviceModel": "fz"})
    m0 = model(FZ, cfg)
    m1 = model(FZ, cfg, ("V", "Vlan", {"vlanId": 10, "ipAddress": None}), rels=[("Cf1", "V")])
    _, tobe = label_models(m0, m1)
    for line in ("template,Vlan,*,set,1,ip address <ipAddress>,,,",
                 "template,Vlan,*,set,1,interface <ipAddress>,TRUE,,"):
        assert apply_row(tpl(line).rows[0], tobe.base.by_id["V"], tobe, "set", CommandTree()) is None


def test_apply_row_condition_gate():
    cfg = ("Cf1", "Config", {"deviceModel": "fz"})
    m0 = model(FZ, cfg)
    m1 = model(FZ, cfg, ("V", "Vlan", {"vlanId": 10, "shutdown": False}), rels=[("Cf1", "V")])
    _, tobe = label_models(m0, m1)
    t = tpl("template,Vlan,shutdown,set,1,shutdown,,,<shutdown> == true",
            "template,Vlan,shutdown,set,2,no shutdown,,,<shutdown> == false")
    gv = tobe.base.by_id["V"]
    tree = CommandTree()
    assert apply_row(t.rows[0], gv, tobe, "set", tree) is None
    assert apply_row(t.rows[1], gv, tobe, "set", tree).text == "no shutdown"


# --- tree operations ---------------------------------------------------------

def row(id_, dep=None, modal=False, kind="template"):
    return TemplateRow(kind, id_, f"r{id_}", "G", "*", "set", modal, dep)


def test_prune_childless_label_free_modal():
    tree = CommandTree()
    tree.add(row(1, kind="header"), "conf")
    tree.add(row(2, dep=1, modal=True), "interface vlan 10")
    prune_redundant_modals(tree)
    assert emit(tree) == ["conf"]


def test_prune_keeps_modal_with_child():
    tree = CommandTree()
    tree.add(row(2, modal=True), "M")
    tree.add(row(3, dep=2), "leaf", labeled=True)
    prune_redundant_modals(tree)
    assert emit(tree) == ["M", "leaf"]


def test_prune_keeps_labeled_childless_modal():
    tree = CommandTree()
    tree.add(row(2, modal=True), "M", labeled=True)
    prune_redundant_modals(tree)
    assert emit(tree) == ["M"]


def test_prune_nested_chain_to_fixpoint():
    tree = CommandTree()
    tree.add(row(1, modal=True), "M1")
    tree.add(row(2, dep=1, modal=True), "M2")
    prune_redundant_modals(tree)
    assert emit(tree) == []
    assert tree.removed == {0, 1}


def nested_tree():
    tree = CommandTree()
    tree.add(row(1, modal=True), "M1")
    tree.add(row(2, dep=1, modal=True), "M2")
    tree.add(row(3, dep=2), "leaf", labeled=True)
    return tree


def test_nested_mode_after():
    t = tpl("mode-after,,,,9,exit,,,")
    tree = inject_mode_wrappers(prune_redundant_modals(nested_tree()), t)
    assert emit(tree) == ["M1", "M2", "leaf", "exit", "exit"]


def test_mode_before_and_after_in_template_order():
    t = tpl("mode-before,,,,7,b1,,,", "mode-after,,,,8,a1,,,", "mode-before,,,,9,b2,,,",
            "mode-after,,,,10,a2,,,")
    tree = inject_mode_wrappers(nested_tree(), t)
    assert emit(tree) == ["b1", "b2", "M1", "b1", "b2", "M2", "leaf", "a1", "a2", "a1", "a2"]


def test_no_wrapper_rows_leave_tree_alone():
    tree = inject_mode_wrappers(nested_tree(), tpl())
    assert emit(tree) == ["M1", "M2", "leaf"]


def test_emit_single_chain():
    tree = CommandTree()
    tree.add(row(1, kind="header"), "header")
    tree.add(row(2, dep=1), "cmd")
    tree.add(row(3, dep=1, kind="footer"), "footer")
    assert emit(tree) == ["header", "cmd", "footer"]


def test_emit_empty():
    assert emit(CommandTree()) == []


def test_emit_roots_in_seq_order():
    tree = CommandTree()
    tree.add(row(1), "r0")
    tree.add(row(2, dep=1), "c0")
    for i in range(3):
        tree.add(row(10 + i), f"x{i}")
    tree.remove(2), tree.remove(3), tree.remove(4)
    tree.add(row(5), "r5")
    tree.add(row(6, dep=5), "c5")
    assert tree.instances[5].seq == 5
    assert emit(tree) == ["r0", "c0", "r5", "c5"]


def test_most_recent_dependency_wins():
    tree = CommandTree()
    tree.add(row(1), "p1")
    tree.add(row(1), "p2")
    child = tree.add(row(2, dep=1), "c")
    assert tree.parent_of[child.seq] == 1


def test_link_rows_never_fire():
    cfg = ("Cf1", "Config", {"deviceModel": "fz"})
    link_pair = lambda d: model(FZ, cfg, ("V1", "Vlan", {"vlanId": 1}), ("V2", "Vlan", {"vlanId": 2}),
                                ("L", "Link", {"description": d}),
                                rels=[("Cf1", "V1"), ("Cf1", "V2"), ("L", "V1"), ("L", "V2")])
    t = tpl("template,Link,*,set/unset,1,description <description>,,,")
    [proc] = generate_all(link_pair("a"), link_pair("b"), FZ, [t])
    assert proc.commands == []


# --- properties over fuzzed inputs ---------------------------------------------

seeds = st.integers(0, 2**32 - 1)


def fuzz_case(seed, **kw):
    rng = random.Random(seed)
    asis, tobe = fuzz.random_pair(rng, **kw)
    return asis, tobe, fuzz.random_template(rng)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_generation_invariants(seed):
    asis, tobe, t = fuzz_case(seed)
    procs = generate_all(asis, tobe, FZ, [t])
    again = generate_all(asis, tobe, FZ, [t])
    assert [p.commands for p in procs] == [p.commands for p in again]
    relevant = {gv.id for m in (asis, tobe) for gv in m.group_values
                if FZ.groups[gv.group].config_relevant}
    for proc in procs:
        assert dependency_order_ok(proc, t)
        alive = proc.tree.alive()
        assert all(i.source_id is None or i.source_id in relevant for i in alive)
        for inst in alive:
            if inst.modal:
                assert inst.labeled or proc.tree.live_children(inst.seq)
        if proc.commands:
            assert any(i.kind == "template" for i in alive)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_unset_work_precedes_set_work(seed):
    # holds when every template row hangs under a dependency; free-standing
    # rows become extra roots emitted after the header's subtree
    rng = random.Random(seed)
    asis, tobe = fuzz.random_pair(rng)
    t = fuzz.random_template(rng, anchored=True)
    for proc in generate_all(asis, tobe, FZ, [t]):
        order = [proc.tree.instances[seq].pass_ for seq in _preorder(proc.tree)]
        order = [p for p in order if p is not None]
        assert order == sorted(order, key=lambda p: p == "set")


def _preorder(tree):
    out = []

    def visit(seq):
        out.append(seq)
        for c in tree.live_children(seq):
            visit(c)
    for r in tree.roots():
        visit(r)
    return out


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_rollback_symmetry(seed):
    rng = random.Random(seed)
    a, b = fuzz.random_pair(rng)
    t = fuzz.random_template(rng, symmetric=True)
    forward = generate_all(a, b, FZ, [t])
    backward = generate_all(b, a, FZ, [t])

    def fired(procs, pass_):
        return {(p.config_id, i.row_id, i.source_id) for p in procs
                for i in p.tree.instances if i.pass_ == pass_}
    assert fired(forward, "set") == fired(backward, "unset")
    assert fired(forward, "unset") == fired(backward, "set")


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_matches_naive_interpreter(seed):
    asis, tobe, t = fuzz_case(seed, max_values=10)
    for proc in generate_all(asis, tobe, FZ, [t]):
        assert proc.commands == naive.naive_procedure(proc.config_id, asis, tobe, FZ, t)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_identity_generates_nothing(seed):
    rng = random.Random(seed)
    m = fuzz.random_model(rng)
    t = fuzz.random_template(rng)
    assert all(p.commands == [] for p in generate_all(m, m, FZ, [t]))
