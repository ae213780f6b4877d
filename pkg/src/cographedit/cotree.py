"""Cotrees, induced-P4 search and cograph recognition."""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import _tree
from .errors import DomainError, NotCograph
from .graph import Graph, members

SERIES = "series"
PARALLEL = "parallel"
LEAF = "leaf"


@dataclass(frozen=True)
class Cotree:
    """A cotree node: a leaf holding ``vertex`` or an internal node of ``kind``."""

    kind: str
    vertex: int | None = None
    children: tuple[Cotree, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return self.kind == LEAF

    def leaves(self) -> list[int]:
        out, stack = [], [self]
        while stack:
            t = stack.pop()
            if t.is_leaf:
                out.append(t.vertex)
            else:
                stack.extend(t.children)
        return out

    def leaf_mask(self) -> int:
        x = 0
        for v in self.leaves():
            x |= 1 << v
        return x

    def __str__(self):
        return to_term(self)


def leaf(v: int) -> Cotree:
    return Cotree(LEAF, v)


def series(*children: Cotree) -> Cotree:
    return Cotree(SERIES, None, tuple(children))


def parallel(*children: Cotree) -> Cotree:
    return Cotree(PARALLEL, None, tuple(children))


def canonical(t: Cotree) -> Cotree:
    """Flatten same-label parent/child pairs and sort children by smallest leaf.

    Unary internal nodes are spliced out.  The result alternates labels on
    every root-to-leaf path, which makes it unique for its cograph.
    """
    if t.is_leaf:
        return t
    kids = []
    for c in t.children:
        c = canonical(c)
        if not c.is_leaf and c.kind == t.kind:
            kids.extend(c.children)
        else:
            kids.append(c)
    if not kids:
        raise DomainError("internal cotree node without children")
    if len(kids) == 1:
        return kids[0]
    kids.sort(key=lambda c: min(c.leaves()))
    return Cotree(t.kind, None, tuple(kids))


def is_canonical(t: Cotree) -> bool:
    if t.is_leaf:
        return True
    return len(t.children) >= 2 and all(
        (c.is_leaf or c.kind != t.kind) and is_canonical(c) for c in t.children
    )


# -- P4 search -------------------------------------------------------------

def find_induced_p4(g: Graph) -> tuple[int, int, int, int] | None:
    """An induced path ``a-b-c-d`` of ``g``, or ``None`` if ``g`` is a cograph.

    Every induced P4 has a middle edge ``b-c``; for each edge the candidate
    ends are ``N(b) - N[c]`` and ``N(c) - N[b]``, and any non-adjacent pair
    across them completes a P4.
    """
    rows = g.rows
    for b in range(g.n):
        nb = rows[b]
        for c in members(nb >> (b + 1)):
            c += b + 1
            nc = rows[c]
            ends_b = nb & ~nc & ~(1 << c)
            if not ends_b:
                continue
            ends_c = nc & ~nb & ~(1 << b)
            if not ends_c:
                continue
            for a in members(ends_b):
                d = ends_c & ~rows[a]
                if d:
                    return a, b, c, (d & -d).bit_length() - 1
    return None


def is_cograph(g: Graph) -> bool:
    return find_induced_p4(g) is None


# -- array tree conversion -------------------------------------------------

def _from_arrays(nodes, meta) -> Cotree | None:
    root = int(meta[0])
    if root == -1:
        return None
    lab = nodes[_tree.F_LAB]

    def build(v):
        if lab[v] == _tree.LEAF:
            return leaf(int(nodes[_tree.F_VTX, v]))
        kids = []
        c = nodes[_tree.F_FC, v]
        while c != -1:
            kids.append(build(int(c)))
            c = nodes[_tree.F_NS, c]
        return Cotree(SERIES if lab[v] == _tree.SERIES else PARALLEL, None, tuple(kids))

    return canonical(build(root))


def _to_arrays(t: Cotree | None, n: int):
    """Load a cotree into the working-array layout (canonical form)."""
    nodes, leafmap, meta = _tree.new_tree(n)
    if t is None:
        return nodes, leafmap, meta
    t = canonical(t)
    code = {SERIES: _tree.SERIES, PARALLEL: _tree.PARALLEL, LEAF: _tree.LEAF}

    def build(node, parent):
        i = _tree._alloc(nodes, meta, code[node.kind])
        if parent == -1:
            meta[0] = i
        else:
            _tree._append(nodes, parent, i)
        if node.is_leaf:
            if not 0 <= node.vertex < n:
                raise DomainError(f"leaf {node.vertex} out of range for n={n}")
            nodes[_tree.F_VTX, i] = node.vertex
            nodes[_tree.F_SIZE, i] = 1
            leafmap[node.vertex] = i
        else:
            size = 0
            for c in node.children:
                size += build(c, i)
            nodes[_tree.F_SIZE, i] = size
        return nodes[_tree.F_SIZE, i]

    build(t, -1)
    return nodes, leafmap, meta


# -- recognition -----------------------------------------------------------

def build_cotree(g: Graph) -> Cotree:
    """Canonical cotree of a cograph; raises :class:`NotCograph` otherwise."""
    if g.n == 0:
        raise DomainError("the empty graph has no cotree")
    nodes, _, meta, failed = _tree.recognize(g.to_matrix())
    if failed >= 0:
        witness = find_induced_p4(g)
        if witness is None:
            raise AssertionError("incremental recognition rejected a P4-free graph")
        raise NotCograph(witness)
    return _from_arrays(nodes, meta)


def cotree_to_graph(t: Cotree, n: int | None = None) -> Graph:
    """The cograph realized by ``t``: adjacent iff the leaves' LCA is series.

    ``n`` defaults to one more than the largest leaf index.
    """
    verts = t.leaves()
    if len(set(verts)) != len(verts):
        raise DomainError("cotree has a repeated leaf")
    if n is None:
        n = max(verts) + 1
    rows = [0] * n

    def realize(node) -> int:
        if node.is_leaf:
            return 1 << node.vertex
        masks = [realize(c) for c in node.children]
        total = 0
        for x in masks:
            total |= x
        if node.kind == SERIES:
            for x in masks:
                others = total & ~x
                for v in members(x):
                    rows[v] |= others
        return total

    realize(t)
    return Graph(n, tuple(rows))


# -- serialization ---------------------------------------------------------

def to_term(t: Cotree) -> str:
    if t.is_leaf:
        return str(t.vertex)
    tag = "S" if t.kind == SERIES else "P"
    return tag + "(" + ",".join(to_term(c) for c in t.children) + ")"


_TOKEN = re.compile(r"\s*(?:(\d+)|([SP])\(|(,)|(\)))")


def parse_term(text: str) -> Cotree:
    pos = 0

    def token():
        nonlocal pos
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise DomainError(f"bad cotree term at offset {pos}: {text[pos:pos + 10]!r}")
        pos = mt.end()
        return mt

    def node():
        mt = token()
        if mt.group(1) is not None:
            return leaf(int(mt.group(1)))
        if mt.group(2) is None:
            raise DomainError(f"expected leaf or S(/P( at offset {mt.start()}")
        kind = SERIES if mt.group(2) == "S" else PARALLEL
        kids = [node()]
        while True:
            sep = token()
            if sep.group(4) is not None:
                break
            if sep.group(3) is None:
                raise DomainError(f"expected ',' or ')' at offset {sep.start()}")
            kids.append(node())
        return Cotree(kind, None, tuple(kids))

    t = node()
    if text[pos:].strip():
        raise DomainError(f"trailing text after cotree term: {text[pos:]!r}")
    return t


def to_record(t: Cotree) -> dict:
    if t.is_leaf:
        return {"leaf": t.vertex}
    return {"type": t.kind, "children": [to_record(c) for c in t.children]}


def from_record(rec: dict) -> Cotree:
    if "leaf" in rec:
        return leaf(int(rec["leaf"]))
    if rec.get("type") not in (SERIES, PARALLEL):
        raise DomainError(f"unknown cotree node type {rec.get('type')!r}")
    return Cotree(rec["type"], None, tuple(from_record(c) for c in rec["children"]))
