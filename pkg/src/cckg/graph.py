"""Conceptual graph data model and the linear notation used to print and parse it.

A graph is a bipartite structure of concept boxes and relation arcs.  Here the
relation nodes are folded into labelled edges, which is enough because every
relation in a temporary graph or CCKG is binary.

Linear notation::

    [write]->(obj)->[message(letter)]; [write]->(agent)->[person:you]

A concept box reads ``type:referent(alias(alias...))``.  Boxes with identical
text inside one string denote the same node; when two distinct nodes print the
same, a ``#n`` suffix tells them apart.  ``-(rel)->`` is accepted as a synonym
of ``->(rel)->`` and ``<-(rel)<-`` reverses the arc direction.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import networkx as nx

from .errors import GraphError, NotationError


@dataclass
class ConceptNode:
    node_id: int
    type_label: str
    referent: str | None = None
    aliases: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.type_label:
            raise GraphError("concept type label must be non-empty")
        self.aliases = _clean_aliases(self.type_label, self.aliases)

    @property
    def labels(self) -> tuple[str, ...]:
        return (self.type_label, *self.aliases)

    def display(self) -> str:
        text = self.type_label
        if self.referent:
            text += ":" + self.referent
        if self.aliases:
            text += "".join("(" + a for a in self.aliases) + ")" * len(self.aliases)
        return text

    def signature(self) -> tuple:
        return (self.type_label, self.referent, tuple(self.aliases))


def _clean_aliases(type_label, aliases):
    out = []
    for a in aliases:
        if a and a != type_label and a not in out:
            out.append(a)
    return out


@dataclass(frozen=True)
class RelationEdge:
    edge_id: int
    rel_label: str
    source: int
    target: int
    # original edge ids a derived (transitivity) shortcut stands for
    derived_from: tuple[int, ...] | None = None

    @property
    def derived(self) -> bool:
        return self.derived_from is not None


class ConceptualGraph:
    """Concept nodes joined by directed, labelled relation edges."""

    def __init__(self, provenance: Iterable[str] = ()):
        self.nodes: dict[int, ConceptNode] = {}
        self.edges: dict[int, RelationEdge] = {}
        self.head: int | None = None
        self.provenance: list[str] = list(provenance)
        self.degraded: list[str] = []
        self._next_node = 0
        self._next_edge = 0
        self._edge_index: dict[tuple[str, int, int], int] = {}

    # construction -----------------------------------------------------

    def add_node(self, type_label, referent=None, aliases=()) -> int:
        nid = self._next_node
        self._next_node += 1
        self.nodes[nid] = ConceptNode(nid, type_label, referent or None, list(aliases))
        return nid

    def add_edge(self, rel_label, source, target, derived_from=None) -> int:
        """Add an edge, returning the id of an existing identical edge if there is one."""
        if source not in self.nodes or target not in self.nodes:
            raise GraphError(f"edge ({rel_label}) references a missing node")
        key = (rel_label, source, target)
        if key in self._edge_index:
            return self._edge_index[key]
        eid = self._next_edge
        self._next_edge += 1
        self.edges[eid] = RelationEdge(eid, rel_label, source, target, derived_from)
        self._edge_index[key] = eid
        return eid

    def has_edge(self, rel_label, source, target) -> bool:
        return (rel_label, source, target) in self._edge_index

    def remove_edge(self, eid):
        e = self.edges.pop(eid)
        del self._edge_index[(e.rel_label, e.source, e.target)]

    def relabel_edge(self, eid, rel_label):
        e = self.edges[eid]
        if e.rel_label == rel_label:
            return eid
        self.remove_edge(eid)
        return self.add_edge(rel_label, e.source, e.target, e.derived_from)

    def merge_nodes(self, keep: int, drop: int):
        """Fold node ``drop`` into ``keep``, redirecting its edges."""
        if keep == drop:
            return
        a, b = self.nodes[keep], self.nodes[drop]
        a.aliases = _clean_aliases(a.type_label, a.aliases + list(b.labels))
        if a.referent is None:
            a.referent = b.referent
        for eid in [e for e, edge in self.edges.items() if drop in (edge.source, edge.target)]:
            edge = self.edges[eid]
            self.remove_edge(eid)
            src = keep if edge.source == drop else edge.source
            tgt = keep if edge.target == drop else edge.target
            if src == tgt and edge.source != edge.target:
                continue
            self.add_edge(edge.rel_label, src, tgt, edge.derived_from)
        del self.nodes[drop]
        if self.head == drop:
            self.head = keep

    def copy(self) -> "ConceptualGraph":
        g = ConceptualGraph(self.provenance)
        g.degraded = list(self.degraded)
        for nid, n in self.nodes.items():
            g.nodes[nid] = ConceptNode(nid, n.type_label, n.referent, list(n.aliases))
        g.edges = dict(self.edges)
        g._edge_index = dict(self._edge_index)
        g._next_node = self._next_node
        g._next_edge = self._next_edge
        g.head = self.head
        return g

    def original(self) -> "ConceptualGraph":
        """Copy without derived transitivity edges."""
        g = self.copy()
        for eid in [e for e, edge in g.edges.items() if edge.derived]:
            g.remove_edge(eid)
        return g

    # queries ----------------------------------------------------------

    def __len__(self):
        return len(self.nodes)

    @property
    def size(self) -> tuple[int, int]:
        """(concept count, relation count), derived edges excluded."""
        return len(self.nodes), sum(1 for e in self.edges.values() if not e.derived)

    def out_edges(self, nid) -> list[RelationEdge]:
        return [e for e in self.edges.values() if e.source == nid]

    def in_edges(self, nid) -> list[RelationEdge]:
        return [e for e in self.edges.values() if e.target == nid]

    def labels(self) -> set[str]:
        out = set()
        for n in self.nodes.values():
            out.update(n.labels)
        return out

    def find(self, label) -> list[int]:
        return [nid for nid, n in self.nodes.items() if label in n.labels]

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        adj = defaultdict(set)
        for e in self.edges.values():
            adj[e.source].add(e.target)
            adj[e.target].add(e.source)
        start = next(iter(self.nodes))
        seen = {start}
        stack = [start]
        while stack:
            for m in adj[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return len(seen) == len(self.nodes)

    def validate(self):
        for e in self.edges.values():
            if e.source not in self.nodes or e.target not in self.nodes:
                raise GraphError(f"edge {e.edge_id} ({e.rel_label}) references a missing node")
        if self.head is not None and self.head not in self.nodes:
            raise GraphError(f"head {self.head} is not a node of the graph")

    def to_networkx(self, include_derived=True) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        for nid, n in self.nodes.items():
            g.add_node(nid, label=n.signature())
        for e in self.edges.values():
            if include_derived or not e.derived:
                g.add_edge(e.source, e.target, rel=e.rel_label)
        return g

    def __repr__(self):
        return f"ConceptualGraph({format_linear(self)!r})"

    # serialization ----------------------------------------------------

    def canonical_order(self) -> list[int]:
        """Node ids in a stable, mostly label-determined order."""
        disp = {nid: n.display() for nid, n in self.nodes.items()}
        out_sig = defaultdict(list)
        in_sig = defaultdict(list)
        for e in self.edges.values():
            out_sig[e.source].append((e.rel_label, disp[e.target]))
            in_sig[e.target].append((e.rel_label, disp[e.source]))
        key = {
            nid: (disp[nid], sorted(out_sig[nid]), sorted(in_sig[nid]), nid)
            for nid in self.nodes
        }
        return sorted(self.nodes, key=key.__getitem__)

    def to_dict(self) -> dict:
        order = self.canonical_order()
        renum = {nid: i for i, nid in enumerate(order)}
        nodes = []
        for nid in order:
            n = self.nodes[nid]
            rec = {"id": renum[nid], "type": n.type_label}
            if n.referent:
                rec["referent"] = n.referent
            if n.aliases:
                rec["aliases"] = list(n.aliases)
            nodes.append(rec)
        edge_ids = {}
        edges = []
        for e in sorted(
            self.edges.values(),
            key=lambda e: (e.derived, renum[e.source], e.rel_label, renum[e.target]),
        ):
            edge_ids[e.edge_id] = len(edges)
            rec = {"source": renum[e.source], "rel": e.rel_label, "target": renum[e.target]}
            if e.derived:
                rec["derived_from"] = [edge_ids[x] for x in e.derived_from]
            edges.append(rec)
        out = {"nodes": nodes, "edges": edges}
        if self.head is not None:
            out["head"] = renum[self.head]
        out["provenance"] = list(self.provenance)
        if self.degraded:
            out["degraded"] = list(self.degraded)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ConceptualGraph":
        g = cls(data.get("provenance", ()))
        g.degraded = list(data.get("degraded", ()))
        ids = {}
        for rec in data["nodes"]:
            ids[rec["id"]] = g.add_node(rec["type"], rec.get("referent"), rec.get("aliases", ()))
        eids = []
        for rec in data["edges"]:
            try:
                src, tgt = ids[rec["source"]], ids[rec["target"]]
            except KeyError as exc:
                raise GraphError(f"edge references unknown node {exc.args[0]}") from None
            derived = rec.get("derived_from")
            if derived is not None:
                derived = tuple(eids[i] for i in derived)
            eids.append(g.add_edge(rec["rel"], src, tgt, derived))
        if "head" in data:
            if data["head"] not in ids:
                raise GraphError(f"head {data['head']} is not a node of the graph")
            g.head = ids[data["head"]]
        return g


# ----------------------------------------------------------------------
# linear notation


def node_texts(g: ConceptualGraph) -> dict[int, str]:
    """Printable box text per node, with ``#n`` tags where displays collide."""
    order = g.canonical_order()
    seen = defaultdict(list)
    for nid in order:
        seen[g.nodes[nid].display()].append(nid)
    out = {}
    for disp, nids in seen.items():
        if len(nids) == 1:
            out[nids[0]] = disp
        else:
            for i, nid in enumerate(nids, 1):
                out[nid] = f"{disp}#{i}"
    return out


def format_linear(g: ConceptualGraph, include_derived=False) -> str:
    text = node_texts(g)
    arcs = sorted(
        (text[e.source], e.rel_label, text[e.target])
        for e in g.edges.values()
        if include_derived or not e.derived
    )
    touched = set()
    for e in g.edges.values():
        if include_derived or not e.derived:
            touched.update((e.source, e.target))
    items = [f"[{s}]->({r})->[{t}]" for s, r, t in arcs]
    items += sorted(f"[{text[n]}]" for n in g.nodes if n not in touched)
    return "; ".join(items)


_ARROW = re.compile(r"\s*(->\((?P<f1>[^()]+)\)->|-\((?P<f2>[^()]+)\)->|<-\((?P<b>[^()]+)\)<-)\s*")


def parse_box(text: str) -> tuple[str, str | None, list[str], str | None]:
    """Split box content ``type:ref(a(b))#tag`` into its parts."""
    tag = None
    m = re.search(r"#(\w+)$", text)
    if m:
        tag = m.group(1)
        text = text[: m.start()]
    text = text.strip()
    aliases = []
    if "(" in text:
        i = text.index("(")
        chain, text = text[i:], text[:i]
        depth = 0
        cur = ""
        for ch in chain:
            if ch == "(":
                if depth:
                    aliases.append(cur.strip())
                cur = ""
                depth += 1
            elif ch == ")":
                if cur.strip():
                    aliases.append(cur.strip())
                cur = ""
                depth -= 1
                if depth < 0:
                    raise NotationError(f"unbalanced parentheses in box {text!r}")
            else:
                if depth == 0:
                    raise NotationError(f"text after alias chain in box {text!r}")
                cur += ch
        if depth:
            raise NotationError(f"unbalanced parentheses in box {text!r}")
    referent = None
    if ":" in text:
        text, referent = text.split(":", 1)
        referent = referent.strip() or None
    type_label = text.strip()
    if not type_label:
        raise NotationError("empty concept type in box")
    return type_label, referent, aliases, tag


def _split_items(text: str) -> list[str]:
    items, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == ";" and depth == 0:
            items.append(cur)
            cur = ""
        else:
            cur += ch
    items.append(cur)
    return [i.strip() for i in items if i.strip()]


def _read_box(item: str, pos: int) -> tuple[str, int]:
    while pos < len(item) and item[pos].isspace():
        pos += 1
    if pos >= len(item) or item[pos] != "[":
        raise NotationError(f"expected '[' at position {pos} in {item!r}")
    depth = 0
    for j in range(pos, len(item)):
        if item[j] == "[":
            depth += 1
        elif item[j] == "]":
            depth -= 1
            if depth == 0:
                return item[pos + 1 : j], j + 1
    raise NotationError(f"unterminated concept box in {item!r}")


def iter_arcs(text: str) -> Iterator[tuple[str, str | None, str | None]]:
    """Yield (box, rel, box) triples; single boxes yield (box, None, None)."""
    for item in _split_items(text):
        box, pos = _read_box(item, 0)
        if pos >= len(item.rstrip()):
            yield box, None, None
            continue
        while pos < len(item.rstrip()):
            m = _ARROW.match(item, pos)
            if not m:
                raise NotationError(f"expected relation arrow at position {pos} in {item!r}")
            nxt, pos = _read_box(item, m.end())
            if m.group("b"):
                yield nxt, m.group("b").strip(), box
            else:
                yield box, (m.group("f1") or m.group("f2")).strip(), nxt
            box = nxt


def parse_linear(text: str, canonical_rel=None) -> ConceptualGraph:
    """Parse linear notation.  ``canonical_rel`` maps relation aliases (e.g. sub -> agent)."""
    g = ConceptualGraph()
    ids: dict[str, int] = {}

    def node(box):
        key = box.strip()
        if key not in ids:
            t, r, a, _ = parse_box(key)
            ids[key] = g.add_node(t, r, a)
        return ids[key]

    for left, rel, right in iter_arcs(text):
        s = node(left)
        if rel is None:
            continue
        if canonical_rel is not None:
            rel = canonical_rel(rel)
        g.add_edge(rel, s, node(right))
    return g


def is_isomorphic(g1: ConceptualGraph, g2: ConceptualGraph, labels=True) -> bool:
    if g1.size != g2.size:
        return False
    nm = nx.algorithms.isomorphism.categorical_node_match("label", None) if labels else None
    em = nx.algorithms.isomorphism.categorical_multiedge_match("rel", None)
    return nx.is_isomorphic(
        g1.to_networkx(include_derived=False),
        g2.to_networkx(include_derived=False),
        node_match=nm,
        edge_match=em,
    )
