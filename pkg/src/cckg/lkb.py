"""Lexical knowledge base archive (JSON, ``cckg-lkb/1``) and DOT export."""

from __future__ import annotations

import json
import os
import tempfile
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .cluster import ClusterResult
from .config import config_path, load_relation_hierarchy
from .errors import GraphError, LkbFormatError, VersionMismatchError
from .graph import ConceptualGraph, node_texts
from .hierarchy import Hierarchy
from .lexicon import DictionaryEntry, Lexicon, Sentence, SentenceKind
from .match import MatchContext
from .rules import RuleSet, load_rules
from .transform import build_all_graphs, extract_genus_links

FORMAT_VERSION = "cckg-lkb/1"


@dataclass
class LkbArchive:
    lexicon: Lexicon
    concept_h: Hierarchy
    relation_h: Hierarchy
    graphs: dict[str, ConceptualGraph] = field(default_factory=dict)
    clusters: dict[str, ClusterResult] = field(default_factory=dict)
    format_version: str = FORMAT_VERSION

    @classmethod
    def build(cls, lex: Lexicon, rules: RuleSet | None = None, relation_h: Hierarchy | None = None):
        """Temporary graphs and concept hierarchy for every entry of ``lex``."""
        rules = rules or load_rules(config_path("rules.txt"))
        graphs = build_all_graphs(lex, rules)
        return cls(lex, extract_genus_links(lex), relation_h or load_relation_hierarchy(), graphs)

    def context(self) -> MatchContext:
        return MatchContext(self.concept_h, self.relation_h, self.lexicon, self.graphs)

    # serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        lex = self.lexicon
        return {
            "format_version": self.format_version,
            "lexicon": {
                "entries": {
                    hw: {
                        "pos": e.part_of_speech,
                        "sentences": [[s.text, s.kind.value] for s in e.sentences],
                    }
                    for hw, e in sorted(lex.entries.items())
                },
                "counts": dict(sorted(lex.counts.items())),
                "total_count": lex.total_count,
                "cutoff_override": lex.cutoff_override,
            },
            "concept_hierarchy": self.concept_h.to_dict(),
            "relation_hierarchy": self.relation_h.to_dict(),
            "graphs": {hw: g.to_dict() for hw, g in sorted(self.graphs.items())},
            "clusters": {t: c.to_dict() for t, c in sorted(self.clusters.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LkbArchive":
        version = data.get("format_version")
        if version != FORMAT_VERSION:
            raise VersionMismatchError(f"archive format {version!r}, expected {FORMAT_VERSION!r}")
        try:
            lx = data["lexicon"]
            lex = Lexicon(cutoff_override=lx.get("cutoff_override"))
            for hw, rec in lx["entries"].items():
                sents = [Sentence(text, SentenceKind(kind)) for text, kind in rec["sentences"]]
                lex.entries[hw] = DictionaryEntry(hw, rec["pos"], sents)
            lex.counts = Counter(lx["counts"])
            lex.total_count = lx["total_count"]
            archive = cls(
                lex,
                Hierarchy.from_dict(data["concept_hierarchy"]),
                Hierarchy.from_dict(data["relation_hierarchy"]),
                {hw: ConceptualGraph.from_dict(g) for hw, g in data["graphs"].items()},
                {t: ClusterResult.from_dict(c) for t, c in data.get("clusters", {}).items()},
            )
        except (KeyError, TypeError, ValueError, GraphError) as exc:
            raise LkbFormatError(f"invariant violation: malformed archive ({exc})") from None
        archive.validate()
        return archive

    def validate(self):
        lex = self.lexicon
        if lex.total_count != sum(lex.counts.values()):
            raise LkbFormatError("invariant violation: lexicon total_count differs from the sum of counts")
        for hw in self.graphs:
            if hw not in lex.entries:
                raise LkbFormatError(f"invariant violation: graphs/{hw} has no dictionary entry")
        named = {f"graphs/{hw}": g for hw, g in self.graphs.items()}
        named.update({f"clusters/{t}/cckg": c.cckg for t, c in self.clusters.items()})
        for where, g in sorted(named.items()):
            try:
                g.validate()
            except GraphError as exc:
                raise LkbFormatError(f"invariant violation: {where}: {exc}") from None
            for e in g.edges.values():
                if e.rel_label not in self.relation_h:
                    raise LkbFormatError(
                        f"invariant violation: {where}: relation {e.rel_label!r} not in the relation hierarchy"
                    )
            for n in g.nodes.values():
                if n.type_label.startswith("label-") and n.type_label not in self.concept_h:
                    raise LkbFormatError(
                        f"invariant violation: {where}: covert label {n.type_label!r} not in the concept hierarchy"
                    )
        for t, c in self.clusters.items():
            if c.trigger != t or t not in c.cluster:
                raise LkbFormatError(f"invariant violation: clusters/{t}: trigger missing from its cluster")

    def __eq__(self, other):
        return isinstance(other, LkbArchive) and self.to_dict() == other.to_dict()


def dumps_lkb(archive: LkbArchive) -> str:
    return json.dumps(archive.to_dict(), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def save_lkb(archive: LkbArchive, path):
    path = Path(path)
    text = dumps_lkb(archive)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def loads_lkb(text: str) -> LkbArchive:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise LkbFormatError(f"cannot parse archive: {exc.msg}", offset) from None
    if not isinstance(data, dict):
        raise LkbFormatError("archive must be a JSON object", 0)
    return LkbArchive.from_dict(data)


def load_lkb(path) -> LkbArchive:
    return loads_lkb(Path(path).read_text(encoding="utf-8"))


# ----------------------------------------------------------------------
# DOT


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: ConceptualGraph, name: str = "cckg") -> str:
    order = g.canonical_order()
    pos = {nid: i for i, nid in enumerate(order)}
    ids = {nid: f"n{i}" for nid, i in pos.items()}
    text = node_texts(g)
    lines = [f"digraph {_quote(name)} {{", "  node [shape=box];"]
    for nid in order:
        lines.append(f"  {ids[nid]} [label={_quote(text[nid])}];")
    for e in sorted(g.edges.values(), key=lambda e: (pos[e.source], e.rel_label, pos[e.target], e.derived)):
        style = ", style=dashed" if e.derived else ""
        lines.append(f"  {ids[e.source]} -> {ids[e.target]} [label={_quote(e.rel_label)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(g: ConceptualGraph, path, name: str = "cckg"):
    Path(path).write_text(to_dot(g, name), encoding="utf-8")
