"""Relaxed maximal common subgraph and maximal join of conceptual graphs.

Matching is relaxed in four ways:

* concepts match when identical, when a sufficiently informative type subsumes
  both, when the words' own definition graphs overlap (covert category), or
  through a predictable meaning shift (draw / drawing, make(draw));
* relations match through the relation hierarchy, which is how a preposition
  left in a temporary graph gets its semantic reading;
* ``[A]->(r)->[piece]->(of)->[B]`` also offers the shortcut ``[A]->(r)->[B]``
  for transitive relations;
* a derivational template such as ``draw <=> [make]->(obj)->[drawing]`` adds
  virtual edges around every ``draw`` node.

The search is exact: depth-first enumeration of connected sets of compatible
edge pairs with memoisation on the pair set, under an expansion budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import GraphError, MatchBudgetExceeded, UnknownLabelError
from .graph import ConceptNode, ConceptualGraph, format_linear
from .hierarchy import Hierarchy
from .lexicon import Lexicon
from .rules import DerivationalRule, default_rules

IDENTICAL = "identical"
HIERARCHY = "hierarchy-subsumption"
DEFGRAPH = "defgraph-subsumption"
MEANING_SHIFT = "meaning-shift"

PREPOSITION_ROOT = "preposition"
_KIND_RANK = {IDENTICAL: 0, HIERARCHY: 1, MEANING_SHIFT: 2, DEFGRAPH: 3}


@dataclass
class MatchConfig:
    ic_threshold: float = 2.0
    budget: int = 10000
    transitive_relations: frozenset = frozenset({"part-of", "in", "from", "of", "on"})
    mediators: frozenset = frozenset({"part", "piece"})
    min_defgraph_overlap: tuple = (2, 1)
    generic_concepts: frozenset = frozenset({"person", "something", "thing"})
    derivational_rules: list = field(default_factory=lambda: list(default_rules().derivations))

    def __post_init__(self):
        if self.ic_threshold < 0 or self.budget < 1 or min(self.min_defgraph_overlap) < 0:
            raise ValueError("match thresholds must be non-negative and the budget positive")
        self.transitive_relations = frozenset(self.transitive_relations)
        self.mediators = frozenset(self.mediators)
        self.generic_concepts = frozenset(self.generic_concepts)
        self.min_defgraph_overlap = tuple(self.min_defgraph_overlap)

    @classmethod
    def from_settings(cls, settings: dict, rules=None) -> "MatchConfig":
        keys = ("ic_threshold", "budget", "transitive_relations", "mediators",
                "min_defgraph_overlap", "generic_concepts")
        kwargs = {k: settings[k] for k in keys if k in settings}
        if rules is not None:
            kwargs["derivational_rules"] = list(rules.derivations)
        return cls(**kwargs)


class MatchContext:
    """Hierarchies, lexicon statistics and temporary graphs consulted while matching."""

    def __init__(
        self,
        concept_h: Hierarchy,
        relation_h: Hierarchy,
        lexicon: Lexicon | None = None,
        graphs: dict[str, ConceptualGraph] | None = None,
    ):
        self.concept_h = concept_h
        self.relation_h = relation_h
        self.lexicon = lexicon
        self.graphs = graphs or {}
        self._ic: dict = {}
        self._defgraph: dict = {}

    def ic(self, label: str) -> float:
        key = (label, self.concept_h._version)
        if key not in self._ic:
            counts = self.lexicon.counts if self.lexicon is not None else None
            self._ic[key] = self.concept_h.information_content(label, counts)
        return self._ic[key]


@dataclass(frozen=True)
class ConceptMatch:
    type_label: str
    referent: str | None
    aliases: tuple
    kind: str
    # for definition-graph matches: (matched words, superclass) awaiting a covert label
    covert: tuple | None = None

    @property
    def label(self) -> str:
        return ConceptNode(0, self.type_label, self.referent, list(self.aliases)).display()


@dataclass
class NodeMapping:
    pairs: list = field(default_factory=list)  # (g1 node, g2 node, kind)
    virtual: list = field(default_factory=list)  # pairs where one side only exists virtually

    def __len__(self):
        return len(self.pairs)


@dataclass
class MatchResult:
    subgraph: ConceptualGraph
    mapping: NodeMapping
    size: tuple
    new_covert_labels: list = field(default_factory=list)
    maximal: bool = True
    # join bookkeeping
    labels: dict = field(default_factory=dict, repr=False)  # (n1, n2) -> ConceptMatch
    g1_relabel: dict = field(default_factory=dict, repr=False)  # g1 edge id -> relation, None drops it
    g2_covered: set = field(default_factory=set, repr=False)  # g2 edge ids already in g1


# ----------------------------------------------------------------------
# relations


def relations_match(r1: str, r2: str, rel_h: Hierarchy) -> str | None:
    """Common reading of two relation labels, preferring the semantic one."""
    a, b = rel_h.canonical(r1), rel_h.canonical(r2)
    for label in (a, b):
        if label not in rel_h:
            raise UnknownLabelError(label, rel_h.name)
    if a == b:
        return a
    if rel_h.subsumes(a, b):
        anc, desc = a, b
    elif rel_h.subsumes(b, a):
        anc, desc = b, a
    else:
        return None
    if _is_preposition(desc, rel_h) and not _is_preposition(anc, rel_h):
        return anc
    return desc


def _is_preposition(label, rel_h) -> bool:
    return PREPOSITION_ROOT in rel_h and rel_h.subsumes(PREPOSITION_ROOT, label)


# ----------------------------------------------------------------------
# concepts


def _referent(c1, c2):
    if c1.referent and c2.referent and c1.referent != c2.referent:
        return False, None
    return True, c1.referent or c2.referent


def _ordered_aliases(first, second):
    out = []
    for a in (*first, *second):
        if a not in out:
            out.append(a)
    return tuple(out)


def _identical(c1: ConceptNode, c2: ConceptNode):
    if c1.type_label == c2.type_label:
        first, second = sorted((tuple(c1.aliases), tuple(c2.aliases)))
        return c1.type_label, _ordered_aliases(first, second)
    in1 = c2.type_label in c1.aliases
    in2 = c1.type_label in c2.aliases
    if in1 != in2:
        outer, inner = (c1, c2) if in1 else (c2, c1)
    elif set(c1.labels) & set(c2.labels):
        outer, inner = sorted((c1, c2), key=lambda c: (c.type_label, tuple(c.aliases)))
    else:
        return None
    return outer.type_label, _ordered_aliases(outer.aliases, inner.labels)


def _derives(derived: str, base: str) -> bool:
    if derived == base:
        return False
    for suffix in ("ing", "ed", "er", "ion", "s"):
        if derived.endswith(suffix):
            stem = derived[: -len(suffix)]
            if base in (stem, stem + "e") or (len(stem) > 2 and stem[-1] == stem[-2] and base == stem[:-1]):
                return True
    return False


def _meaning_shift(c1, c2, rules: list[DerivationalRule]):
    t1, t2 = c1.type_label, c2.type_label
    for r in rules:
        if r.other is not None and {t1, t2} == {r.lemma, r.other}:
            base, derived = (c1, c2) if t1 == r.lemma else (c2, c1)
            return base.type_label, _ordered_aliases((derived.type_label,), base.aliases + derived.aliases)
    for r in rules:
        head = r.shifted_head
        if head is None:
            continue
        if (t1, t2) in ((head, r.lemma), (r.lemma, head)):
            shifted, original = (c1, c2) if t1 == head else (c2, c1)
            return head, _ordered_aliases((original.type_label,), shifted.aliases + original.aliases)
    for base, derived in ((c1, c2), (c2, c1)):
        if _derives(derived.type_label, base.type_label):
            return base.type_label, _ordered_aliases((derived.type_label,), base.aliases + derived.aliases)
    return None


def _defgraph_word(c: ConceptNode, graphs) -> str | None:
    for label in c.labels:
        if label in graphs:
            return label
    return None


def concepts_match(
    c1: ConceptNode,
    c2: ConceptNode,
    ctx: MatchContext,
    cfg: MatchConfig | None = None,
    defgraph: bool = True,
) -> ConceptMatch | None:
    """First applicable of: identical, hierarchy, definition graph, meaning shift."""
    cfg = cfg or MatchConfig()
    ok, ref = _referent(c1, c2)
    if not ok:
        return None
    same = _identical(c1, c2)
    if same is not None:
        return ConceptMatch(same[0], ref, same[1], IDENTICAL)

    h = ctx.concept_h
    a, b = c1.type_label, c2.type_label
    if a in h and b in h:
        lcs = h.least_common_subsumer(a, b, ctx.ic)
        if lcs is not None and ctx.ic(lcs) >= cfg.ic_threshold:
            if h.subsumes(a, b) or h.subsumes(b, a):
                spec, gen = (c2, c1) if h.subsumes(a, b) else (c1, c2)
                return ConceptMatch(spec.type_label, ref, _ordered_aliases(spec.aliases, gen.aliases), HIERARCHY)
            return ConceptMatch(h.canonical(lcs), ref, _ordered_aliases(c1.aliases, c2.aliases), HIERARCHY)

    if defgraph:
        w1, w2 = _defgraph_word(c1, ctx.graphs), _defgraph_word(c2, ctx.graphs)
        # a word and its own ancestor are a hierarchy question, not a covert category
        if w1 and w2 and w1 in h and w2 in h and not (h.subsumes(w1, w2) or h.subsumes(w2, w1)):
            sup = h.least_common_subsumer(w1, w2, ctx.ic)
            if sup is not None and defgraph_overlap(w1, w2, ctx, cfg) >= 0:
                words = tuple(sorted((w1, w2)))
                placeholder = "label-?" + "+".join(words)
                return ConceptMatch(placeholder, ref, (), DEFGRAPH, (words, sup))

    shifted = _meaning_shift(c1, c2, cfg.derivational_rules)
    if shifted is not None:
        return ConceptMatch(shifted[0], ref, shifted[1], MEANING_SHIFT)
    return None


def defgraph_overlap(w1: str, w2: str, ctx: MatchContext, cfg: MatchConfig) -> int:
    """Size margin of the overlap between two words' definition graphs, or -1.

    The two heads are pinned to each other and generic concepts are removed
    first; inside, concepts match without a further definition-graph level.
    """
    key = (tuple(sorted((w1, w2))), ctx.concept_h._version)
    if key not in ctx._defgraph:
        g1 = _strip_generic(ctx.graphs[key[0][0]], cfg)
        g2 = _strip_generic(ctx.graphs[key[0][1]], cfg)
        ok = -1
        if g1.head is not None and g2.head is not None:
            m = maximal_common_subgraph(
                g1, g2, ctx, cfg, pinned=(g1.head, g2.head), _nested=True, strict=False
            )
            concepts, relations = m.size
            need_c, need_r = cfg.min_defgraph_overlap
            if concepts >= need_c and relations >= need_r:
                ok = relations
        ctx._defgraph[key] = ok
    return ctx._defgraph[key]


def _strip_generic(g: ConceptualGraph, cfg: MatchConfig) -> ConceptualGraph:
    out = g.original()
    for nid in [n for n, node in out.nodes.items() if node.type_label in cfg.generic_concepts]:
        if nid == out.head:
            continue
        for eid in [e.edge_id for e in out.edges.values() if nid in (e.source, e.target)]:
            out.remove_edge(eid)
        del out.nodes[nid]
    return out


# ----------------------------------------------------------------------
# transitivity


def normalize_transitivity(g: ConceptualGraph, cfg: MatchConfig | None = None) -> ConceptualGraph:
    """Copy of ``g`` with derived ``[A]->(r)->[B]`` shortcuts through part/piece mediators."""
    cfg = cfg or MatchConfig()
    out = g.copy()

    def path(e):
        return e.derived_from if e.derived else (e.edge_id,)

    changed = True
    while changed:
        changed = False
        for e1 in list(out.edges.values()):
            if e1.rel_label not in cfg.transitive_relations:
                continue
            mid = out.nodes[e1.target]
            if mid.type_label not in cfg.mediators:
                continue
            for e2 in list(out.edges.values()):
                if e2.source != e1.target or e2.rel_label != "of" or e2.target == e1.source:
                    continue
                if out.has_edge(e1.rel_label, e1.source, e2.target):
                    continue
                out.add_edge(e1.rel_label, e1.source, e2.target, path(e1) + path(e2))
                changed = True
    return out


# ----------------------------------------------------------------------
# maximal common subgraph


class _E(NamedTuple):
    kind: str  # real | derived | virtual
    eid: int | None
    rel: str
    s: int
    t: int
    cover: frozenset  # original edge ids this edge accounts for
    inner: tuple  # intermediate nodes of a derived path, in order
    path: tuple  # original edge ids of a derived path


class _Side:
    def __init__(self, g: ConceptualGraph, cfg: MatchConfig):
        self.g = normalize_transitivity(g, cfg)
        self.nodes: dict[int, ConceptNode] = dict(self.g.nodes)
        self.edges: list[_E] = []
        for e in sorted(self.g.edges.values(), key=lambda e: e.edge_id):
            if e.derived:
                inner = tuple(self.g.edges[x].target for x in e.derived_from[:-1])
                self.edges.append(
                    _E("derived", e.edge_id, e.rel_label, e.source, e.target,
                       frozenset(e.derived_from), inner, tuple(e.derived_from))
                )
            else:
                self.edges.append(
                    _E("real", e.edge_id, e.rel_label, e.source, e.target, frozenset({e.edge_id}), (), ())
                )
        vid = -1
        for rule in cfg.derivational_rules:
            t = rule.template
            if t is None or not t.edges:
                continue
            for nid in sorted(self.g.nodes):
                if self.g.nodes[nid].type_label != rule.lemma:
                    continue
                local = {0: nid}
                for tn in sorted(t.nodes):
                    if tn == 0:
                        continue
                    node = t.nodes[tn]
                    self.nodes[vid] = ConceptNode(vid, node.type_label, node.referent, list(node.aliases))
                    local[tn] = vid
                    vid -= 1
                for te in sorted(t.edges.values(), key=lambda e: e.edge_id):
                    self.edges.append(
                        _E("virtual", None, te.rel_label, local[te.source], local[te.target],
                           frozenset(), (), ())
                    )


class _Search:
    def __init__(self, s1: _Side, s2: _Side, ctx, cfg, pinned, nested):
        self.s1, self.s2 = s1, s2
        self.ctx, self.cfg = ctx, cfg
        self.pinned = pinned
        self.nested = nested
        self._cm: dict = {}
        self.pairs: list[tuple] = []  # (i1, i2, rel, (s1, s2), (t1, t2))
        self._build_pairs()
        self.visits = 0
        self.exhausted = False
        self.best = None  # (score, text, state)

    def cm(self, a, b):
        key = (a, b)
        if key not in self._cm:
            if self.pinned is not None and (a == self.pinned[0] or b == self.pinned[1]):
                if (a, b) == tuple(self.pinned):
                    n1 = self.s1.nodes[a]
                    n2 = self.s2.nodes[b]
                    ok, ref = _referent(n1, n2)
                    self._cm[key] = ConceptMatch(
                        n1.type_label, ref if ok else n1.referent,
                        _ordered_aliases(n1.aliases, n2.labels), IDENTICAL,
                    )
                else:
                    self._cm[key] = None
            else:
                self._cm[key] = concepts_match(
                    self.s1.nodes[a], self.s2.nodes[b], self.ctx, self.cfg, defgraph=not self.nested
                )
        return self._cm[key]

    def _build_pairs(self):
        rel_h = self.ctx.relation_h
        for i1, e1 in enumerate(self.s1.edges):
            for i2, e2 in enumerate(self.s2.edges):
                if e1.kind != "real" and e2.kind != "real":
                    continue
                if (e1.s == e1.t) != (e2.s == e2.t):
                    continue
                rel = relations_match(e1.rel, e2.rel, rel_h)
                if rel is None:
                    continue
                if self.cm(e1.s, e2.s) is None or self.cm(e1.t, e2.t) is None:
                    continue
                self.pairs.append((i1, i2, rel, (e1.s, e2.s), (e1.t, e2.t)))

    # state handling -----------------------------------------------------------

    def compatible(self, p, m1, m2, used1, used2, cov1, cov2, res1, res2, arcs) -> bool:
        i1, i2, rel, sp, tp = p
        e1, e2 = self.s1.edges[i1], self.s2.edges[i2]
        if i1 in used1 or i2 in used2 or e1.cover & cov1 or e2.cover & cov2:
            return False
        # (with, instrument) and (instrument, instrument) would print as one arc
        if (rel, sp, tp) in arcs:
            return False
        for a, b in (sp, tp):
            if m1.get(a, b) != b or m2.get(b, a) != a or a in res1 or b in res2:
                return False
        for n in e1.inner:
            if n in m1 or n in res1:
                return False
        for n in e2.inner:
            if n in m2 or n in res2:
                return False
        return True

    def run(self):
        seeds = list(range(len(self.pairs)))
        if self.pinned is not None:
            seeds = [k for k in seeds if tuple(self.pinned) in (self.pairs[k][3], self.pairs[k][4])]
        seen = set()
        for k in seeds:
            if self.exhausted:
                break
            self._extend(frozenset([k]), seen)
        return self.best

    def _materialize(self, state):
        m1, m2 = {}, {}
        used1, used2, cov1, cov2, res1, res2 = set(), set(), set(), set(), set(), set()
        arcs = set()
        for k in state:
            i1, i2, rel, sp, tp = self.pairs[k]
            arcs.add((rel, sp, tp))
            e1, e2 = self.s1.edges[i1], self.s2.edges[i2]
            for a, b in (sp, tp):
                m1[a] = b
                m2[b] = a
            used1.add(i1)
            used2.add(i2)
            cov1 |= e1.cover
            cov2 |= e2.cover
            res1.update(e1.inner)
            res2.update(e2.inner)
        return m1, m2, used1, used2, cov1, cov2, res1, res2, arcs

    def _extend(self, state, seen):
        if state in seen or self.exhausted:
            return
        seen.add(state)
        self.visits += 1
        if self.visits > self.cfg.budget:
            self.exhausted = True
            return
        self._consider(state)
        m1, m2, used1, used2, cov1, cov2, res1, res2, arcs = self._materialize(state)
        for k, p in enumerate(self.pairs):
            if k in state:
                continue
            if p[3][0] not in m1 and p[4][0] not in m1:
                continue
            if self.compatible(p, m1, m2, used1, used2, cov1, cov2, res1, res2, arcs):
                self._extend(state | {k}, seen)

    def score(self, state):
        """(relations, concepts, -weakness): relaxed concept or relation matches lose exact ties."""
        rels = 0
        nodes = set()
        relaxed = 0
        canon = self.ctx.relation_h.canonical
        for k in state:
            i1, i2, _, sp, tp = self.pairs[k]
            e1, e2 = self.s1.edges[i1], self.s2.edges[i2]
            nodes.update((sp, tp))
            relaxed += canon(e1.rel) != canon(e2.rel)
            if e1.kind == "derived":
                rels += len(e1.path)
                nodes.update(("1", n) for n in e1.inner)
            elif e2.kind == "derived":
                rels += len(e2.path)
                nodes.update(("2", n) for n in e2.inner)
            else:
                rels += 1
        weakness = relaxed + sum(_KIND_RANK[self.cm(a, b).kind] for a, b in nodes if not isinstance(a, str))
        return rels, len(nodes), -weakness

    def _consider(self, state):
        sc = self.score(state)
        if self.best is not None and sc[:2] < self.best[0][:2]:
            return
        if self.best is not None and sc < self.best[0]:
            return
        text = format_linear(self.build(state)[0])
        if self.best is None or sc > self.best[0] or text < self.best[1]:
            self.best = (sc, text, state)

    # result construction -------------------------------------------------------

    def build(self, state):
        g = ConceptualGraph()
        node_of = {}
        labels = {}

        def pair_node(a, b):
            if (a, b) not in node_of:
                c = self.cm(a, b)
                node_of[(a, b)] = g.add_node(c.type_label, c.referent, c.aliases)
                labels[(a, b)] = c
            return node_of[(a, b)]

        def side_node(side, n):
            key = (side, n)
            if key not in node_of:
                src = (self.s1 if side == "1" else self.s2).nodes[n]
                node_of[key] = g.add_node(src.type_label, src.referent, src.aliases)
            return node_of[key]

        g1_relabel, g2_covered = {}, set()
        for k in sorted(state):
            i1, i2, rel, sp, tp = self.pairs[k]
            e1, e2 = self.s1.edges[i1], self.s2.edges[i2]
            s, t = pair_node(*sp), pair_node(*tp)
            if e1.kind == "derived" or e2.kind == "derived":
                side, e = ("1", e1) if e1.kind == "derived" else ("2", e2)
                sg = (self.s1 if side == "1" else self.s2).g
                chain = [s] + [side_node(side, n) for n in e.inner] + [t]
                for j, eid in enumerate(e.path):
                    label = rel if j == 0 else sg.edges[eid].rel_label
                    g.add_edge(label, chain[j], chain[j + 1])
                if side == "1":
                    g2_covered.add(e2.eid)
                else:
                    # the g2 path replaces the direct g1 edge in a join
                    g1_relabel[e1.eid] = None
            else:
                g.add_edge(rel, s, t)
                if e1.kind == "real":
                    g1_relabel[e1.eid] = rel
                if e1.kind == "real" and e2.kind == "real":
                    g2_covered.add(e2.eid)
        return g, labels, g1_relabel, g2_covered


def maximal_common_subgraph(
    g1: ConceptualGraph,
    g2: ConceptualGraph,
    ctx: MatchContext,
    cfg: MatchConfig | None = None,
    pinned: tuple | None = None,
    commit: bool = True,
    strict: bool = True,
    _nested: bool = False,
) -> MatchResult:
    """Largest connected common subgraph, ordered by (relations, concepts).

    ``pinned`` forces a node pair (g1 node, g2 node) into the match.  With
    ``commit`` false, covert categories are left pending (see ``commit_covert``).
    When the budget runs out a ``MatchBudgetExceeded`` carrying the best result
    is raised, unless ``strict`` is false.
    """
    cfg = cfg or MatchConfig()
    s1, s2 = _Side(g1, cfg), _Side(g2, cfg)
    search = _Search(s1, s2, ctx, cfg, pinned, _nested)
    best = search.run()
    if best is not None:
        state = best[2]
        sub, labels, g1_relabel, g2_covered = search.build(state)
    else:
        sub, labels, g1_relabel, g2_covered = _single_pair(search, s1, s2, pinned)
    mapping = NodeMapping()
    for (a, b), c in sorted(labels.items()):
        if a >= 0 and b >= 0:
            mapping.pairs.append((a, b, c.kind))
        else:
            mapping.virtual.append((a, b, c.kind))
    result = MatchResult(
        sub, mapping, sub.size, [], not search.exhausted, labels, g1_relabel, g2_covered
    )
    if commit:
        commit_covert(result, ctx)
    if search.exhausted and strict:
        raise MatchBudgetExceeded(result)
    return result


def _single_pair(search, s1, s2, pinned):
    g = ConceptualGraph()
    labels = {}
    if pinned is not None:
        candidates = [tuple(pinned)]
    else:
        candidates = [(a, b) for a in sorted(s1.g.nodes) for b in sorted(s2.g.nodes)]
    # the two heads first, then the alphabetically first resolved label
    heads = (s1.g.head, s2.g.head)
    best = None
    for a, b in candidates:
        c = search.cm(a, b)
        if c is None:
            continue
        key = ((a, b) != heads, _KIND_RANK[c.kind], c.label)
        if best is None or key < best[0]:
            best = (key, (a, b), c)
    if best is not None:
        best = best[1:]
    if best is not None:
        (a, b), c = best
        g.add_node(c.type_label, c.referent, c.aliases)
        labels[(a, b)] = c
    return g, labels, {}, set()


def commit_covert(result: MatchResult, ctx: MatchContext) -> list[str]:
    """Create the covert categories of a result's definition-graph pairs and relabel."""
    rename = {}
    for key, c in list(result.labels.items()):
        if c.kind != DEFGRAPH or c.covert is None:
            continue
        words, sup = c.covert
        before = ctx.concept_h.covert_counter
        label = ctx.concept_h.add_covert_category(words, sup)
        if ctx.concept_h.covert_counter != before:
            result.new_covert_labels.append(label)
        rename[c.type_label] = label
        result.labels[key] = ConceptMatch(label, c.referent, c.aliases, DEFGRAPH)
    for n in result.subgraph.nodes.values():
        if n.type_label in rename:
            n.type_label = rename[n.type_label]
    return result.new_covert_labels


# ----------------------------------------------------------------------
# join


def maximal_join(g1: ConceptualGraph, g2: ConceptualGraph, m: MatchResult) -> ConceptualGraph:
    """Union of g1 and g2 around the match, with the resolved labels on shared nodes."""
    for a, b, _ in m.mapping.pairs:
        if a not in g1.nodes or b not in g2.nodes:
            raise GraphError(f"mapping pair ({a}, {b}) references a node absent from the graphs")
    for a, b, _ in m.mapping.virtual:
        if (a >= 0 and a not in g1.nodes) or (b >= 0 and b not in g2.nodes):
            raise GraphError(f"mapping pair ({a}, {b}) references a node absent from the graphs")
    for eid in m.g1_relabel:
        if eid not in g1.edges:
            raise GraphError(f"match references edge {eid} absent from the first graph")

    out = g1.original()
    out.provenance = list(g1.provenance) + [p for p in g2.provenance if p not in g1.provenance]
    out.degraded = list(g1.degraded) + list(g2.degraded)
    for eid, rel in sorted(m.g1_relabel.items()):
        if eid not in out.edges:
            continue
        if rel is None:
            out.remove_edge(eid)
        else:
            out.relabel_edge(eid, rel)

    image = {}
    for (a, b), c in sorted(m.labels.items()):
        extra = (g1.nodes[a].aliases if a >= 0 else []) + (g2.nodes[b].aliases if b >= 0 else [])
        aliases = _ordered_aliases(c.aliases, extra)
        if a >= 0:
            node = out.nodes[a]
            node.type_label = c.type_label
            node.referent = c.referent
            node.aliases = [x for x in aliases if x != c.type_label]
            if b >= 0:
                image[b] = a
        elif b >= 0:
            image[b] = out.add_node(c.type_label, c.referent, aliases)
    for nid in sorted(g2.nodes):
        if nid not in image:
            n = g2.nodes[nid]
            image[nid] = out.add_node(n.type_label, n.referent, n.aliases)
    for e in sorted(g2.edges.values(), key=lambda e: e.edge_id):
        if e.derived or e.edge_id in m.g2_covered:
            continue
        s, t = image[e.source], image[e.target]
        if s == t and e.source != e.target:
            continue
        out.add_edge(e.rel_label, s, t)
    return out


def passes_threshold(m: MatchResult, concepts: int = 3, relations: int = 2) -> bool:
    c, r = m.size
    return c >= concepts and r >= relations and m.subgraph.is_connected()
