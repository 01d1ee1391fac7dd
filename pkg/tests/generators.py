"""Seeded random graphs and contexts shared by the property suites."""

from cckg.graph import ConceptualGraph
from cckg.hierarchy import Hierarchy
from cckg.match import MatchConfig, MatchContext

ALPHABET = ["ant", "bee", "cat", "dog", "eel", "fox", "gnu", "hen", "owl", "yak"]
PLAIN_RELS = ["agent", "obj", "loc"]

# a small world where every relaxation method can fire
RELAXED_LABELS = ["cat", "dog", "fox", "hen", "owl", "beast", "bird", "draw", "drawing", "piece"]
RELAXED_RELS = ["agent", "obj", "with", "instrument", "by", "manner", "of", "on"]
RELAXED_HIERARCHY = """
beast < something
bird < something
cat < beast
dog < beast
fox < beast
hen < bird
owl < bird
draw < act
"""


def random_graph(rng, labels, rels, max_nodes=6, max_edges=5, min_edges=0):
    g = ConceptualGraph()
    ids = [g.add_node(rng.choice(labels)) for _ in range(rng.randint(2, max_nodes))]
    for _ in range(rng.randint(min_edges, max_edges)):
        s, t = rng.sample(ids, 2)
        g.add_edge(rng.choice(rels), s, t)
    return g


def perturbed(rng, g, labels, rels, max_edges=5):
    """Copy of ``g`` with some labels changed and edges dropped or added."""
    h = ConceptualGraph()
    ids = {
        n: h.add_node(x.type_label if rng.random() < 0.8 else rng.choice(labels))
        for n, x in g.nodes.items()
    }
    for e in g.edges.values():
        if rng.random() < 0.75:
            rel = e.rel_label if rng.random() < 0.85 else rng.choice(rels)
            h.add_edge(rel, ids[e.source], ids[e.target])
    for _ in range(rng.randint(0, 2)):
        if len(h.edges) < max_edges:
            s, t = rng.sample(list(ids.values()), 2)
            h.add_edge(rng.choice(rels), s, t)
    return h


def connected_graph(rng, labels, rels, max_nodes=6, extra=2):
    g = ConceptualGraph()
    ids = [g.add_node(rng.choice(labels)) for _ in range(rng.randint(1, max_nodes))]
    for k in range(1, len(ids)):
        a, b = ids[k], rng.choice(ids[:k])
        if rng.random() < 0.5:
            a, b = b, a
        g.add_edge(rng.choice(rels), a, b)
    for _ in range(rng.randint(0, extra)):
        if len(ids) > 1:
            s, t = rng.sample(ids, 2)
            g.add_edge(rng.choice(rels), s, t)
    return g


def plain_setting(relation_h):
    """Matching reduced to label identity: no hierarchy, rules or transitivity."""
    cfg = MatchConfig(transitive_relations=(), mediators=(), derivational_rules=[], budget=10**6)
    return MatchContext(Hierarchy(), relation_h), cfg


def relaxed_setting(relation_h):
    cfg = MatchConfig(ic_threshold=1.0, derivational_rules=[], budget=10**6)
    return MatchContext(Hierarchy.loads(RELAXED_HIERARCHY), relation_h), cfg
