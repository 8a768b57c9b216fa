"""Deterministic Graphviz export of diagrams.

Generators and structural morphisms become labeled nodes, wires become
edges (dashed for classical, solid for quantum), and swaps render as plain
edge crossings without a node.  Node and edge order follow a left-to-right
traversal of the term, so the output is stable across runs.
"""

from __future__ import annotations

from .diagrams import (
    Box, Cap, Copy, Cup, Dagger, Delete, Diagram, Discard, Id, Par, Seq, Swap,
    push_daggers, validate,
)


class _Plug:
    """One end of a wire segment, merged by union-find as terms compose."""

    __slots__ = ("parent", "src", "dst", "wire")

    def __init__(self, wire):
        self.parent = self
        self.src = None
        self.dst = None
        self.wire = wire

    def root(self):
        node = self
        while node.parent is not node:
            node.parent = node.parent.parent
            node = node.parent
        return node


def _merge(a: _Plug, b: _Plug):
    ra, rb = a.root(), b.root()
    if ra is rb:
        return
    rb.parent = ra
    for side in ("src", "dst"):
        theirs = getattr(rb, side)
        if theirs is not None:
            if getattr(ra, side) is not None:
                raise AssertionError("wire connected twice on one side")
            setattr(ra, side, theirs)


_STRUCTURAL_LABELS = {
    Cup: "cup",
    Cap: "cap",
    Copy: "copy",
    Delete: "delete",
    Discard: "discard",
}


def export_dot(d: Diagram) -> str:
    """Render a diagram as deterministic Graphviz text."""
    validate(d)
    d = push_daggers(d)

    nodes: list[tuple[str, str, str]] = []   # (id, label, shape)
    plugs: list[_Plug] = []

    def new_plug(wire, src=None, dst=None):
        p = _Plug(wire)
        p.src, p.dst = src, dst
        plugs.append(p)
        return p

    def add_node(label, shape):
        nid = f"n{len(nodes)}"
        nodes.append((nid, label, shape))
        return nid

    def build(term):
        if isinstance(term, Id):
            ps = [new_plug(w) for w in term.word]
            return ps, ps
        if isinstance(term, Seq):
            ins_a, outs_a = build(term.first)
            ins_b, outs_b = build(term.second)
            for a, b in zip(outs_a, ins_b):
                _merge(a, b)
            return ins_a, outs_b
        if isinstance(term, Par):
            ins_l, outs_l = build(term.left)
            ins_r, outs_r = build(term.right)
            return ins_l + ins_r, outs_l + outs_r
        if isinstance(term, Swap):
            p, q = new_plug(term.a), new_plug(term.b)
            return [p, q], [q, p]
        if isinstance(term, Dagger):
            return _leaf_node(term.inner, suffix="†")
        return _leaf_node(term)

    def _leaf_node(term, suffix=""):
        if isinstance(term, Box):
            label, shape = term.name + suffix, "box"
        else:
            label = _STRUCTURAL_LABELS[type(term)] + suffix
            shape = "circle"
        nid = add_node(label, shape)
        ins = [new_plug(w, dst=nid) for w in term.dom]
        outs = [new_plug(w, src=nid) for w in term.cod]
        return ins, outs

    ins, outs = build(d)
    for plug in ins:
        nid = add_node("", "point")
        _merge(plug, new_plug(plug.wire, src=nid))
    for plug in outs:
        nid = add_node("", "point")
        _merge(plug, new_plug(plug.wire, dst=nid))

    lines = ["digraph diagram {", "  rankdir=LR;"]
    for nid, label, shape in nodes:
        lines.append(f'  {nid} [label="{label}", shape={shape}];')
    seen = set()
    for plug in plugs:
        root = plug.root()
        if id(root) in seen:
            continue
        seen.add(id(root))
        if root.src is None or root.dst is None:
            raise AssertionError("dangling wire in rendered diagram")
        style = "dashed" if root.wire.is_classical else "solid"
        lines.append(f"  {root.src} -> {root.dst} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
