"""Independent reference implementations used to check the package.

Nothing here imports the matching or transformation code; graphs are read only
through their plain ``nodes``/``edges`` fields.
"""

import itertools
import re
from collections import Counter


def node_label(n):
    # the printed box: type, referent and alias chain
    text = n.type_label + (f":{n.referent}" if n.referent else "")
    for a in n.aliases:
        text += f"({a}"
    return text + ")" * len(n.aliases)


def triples(g, include_derived=False):
    return [
        (e.source, e.rel_label, e.target)
        for e in g.edges.values()
        if include_derived or not e.derived
    ]


# ----------------------------------------------------------------------
# isomorphism by backtracking


def isomorphic(g1, g2):
    """Label- and relation-preserving bijection test for small graphs."""
    if len(g1.nodes) != len(g2.nodes):
        return False
    t1, t2 = triples(g1), triples(g2)
    if Counter(r for _, r, _ in t1) != Counter(r for _, r, _ in t2):
        return False
    lab1 = {n: node_label(x) for n, x in g1.nodes.items()}
    lab2 = {n: node_label(x) for n, x in g2.nodes.items()}
    if Counter(lab1.values()) != Counter(lab2.values()):
        return False
    e2 = Counter(t2)
    order = sorted(g1.nodes)
    nodes2 = sorted(g2.nodes)

    def ok(m):
        img = Counter((m[s], r, m[t]) for s, r, t in t1 if s in m and t in m)
        return all(e2[k] >= v for k, v in img.items())

    def go(i, m, used):
        if i == len(order):
            return Counter((m[s], r, m[t]) for s, r, t in t1) == e2
        a = order[i]
        for b in nodes2:
            if b in used or lab2[b] != lab1[a]:
                continue
            m[a] = b
            used.add(b)
            if ok(m) and go(i + 1, m, used):
                return True
            del m[a]
            used.discard(b)
        return False

    return go(0, {}, set())


# ----------------------------------------------------------------------
# exhaustive maximal common subgraph under label identity


def _connected(edges):
    if not edges:
        return False
    adj = {}
    for s, _, t in edges:
        adj.setdefault(s, set()).add(t)
        adj.setdefault(t, set()).add(s)
    start = next(iter(adj))
    seen, stack = {start}, [start]
    while stack:
        for v in adj[stack.pop()]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(adj)


def brute_force_mcs_size(g1, g2):
    """(concepts, relations) of the largest connected common subgraph.

    Concepts match on equal type labels and relations on equal labels; larger
    means more relations first, then more concepts.  Every connected edge
    subset of g1 is tried against every ordered choice of g2 edges.
    """
    e1, e2 = triples(g1), triples(g2)
    l1 = {n: x.type_label for n, x in g1.nodes.items()}
    l2 = {n: x.type_label for n, x in g2.nodes.items()}
    best = (0, 0)
    if set(l1.values()) & set(l2.values()):
        best = (0, 1)  # stored as (relations, concepts)
    for k in range(len(e1), 0, -1):
        if best[0] > k:
            break
        for sub in itertools.combinations(e1, k):
            if not _connected(sub):
                continue
            concepts = len({n for s, _, t in sub for n in (s, t)})
            if (k, concepts) <= best:
                continue
            for image in itertools.permutations(e2, k):
                m, inv, good = {}, {}, True
                for (s, r, t), (s2, r2, t2) in zip(sub, image):
                    if r != r2:
                        good = False
                        break
                    for a, b in ((s, s2), (t, t2)):
                        if l1[a] != l2[b] or m.get(a, b) != b or inv.get(b, a) != a:
                            good = False
                            break
                        m[a], inv[b] = b, a
                    if not good:
                        break
                if good:
                    best = (k, concepts)
                    break
    return best[1], best[0]


# ----------------------------------------------------------------------
# transitivity closure


def transitive_closure(g, transitive, mediators):
    """Triples (source, rel, target) reachable as ``A -r-> M (-of-> M')* -of-> B``.

    Every intermediate node is a mediator; B differs from A and the triple is
    not already a real edge.
    """
    real = set(triples(g))
    of_out = {}
    for s, r, t in real:
        if r == "of":
            of_out.setdefault(s, set()).add(t)
    mediator = {n for n, x in g.nodes.items() if x.type_label in mediators}
    out = set()
    for a, r, m in real:
        if r not in transitive or m not in mediator:
            continue
        seen, frontier = set(), {m}
        while frontier:
            nxt = set()
            for x in frontier:
                if x not in mediator:
                    continue
                for y in of_out.get(x, ()):
                    if y not in seen:
                        seen.add(y)
                        nxt.add(y)
            frontier = nxt
        for b in seen:
            if b != a and (a, r, b) not in real:
                out.add((a, r, b))
    return out


# ----------------------------------------------------------------------
# text statistics


def surface_count(texts, forms):
    """Occurrences of any of ``forms`` as whole words, case-insensitive."""
    pat = re.compile(r"\b(?:" + "|".join(re.escape(f) for f in forms) + r")\b", re.I)
    return sum(len(pat.findall(t)) for t in texts)


def entries_mentioning(entries, forms):
    """Headwords whose given sentence texts contain any of ``forms``."""
    pat = re.compile(r"\b(?:" + "|".join(re.escape(f) for f in forms) + r")\b", re.I)
    return sorted(hw for hw, texts in entries.items() if any(pat.search(t) for t in texts))
