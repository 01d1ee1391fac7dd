"""Definition sentences to temporary conceptual graphs.

Three relation sources feed a temporary graph: prepositions kept verbatim as
relation labels, defining formulas ("A is used to B") and syntactic
constructions found by a small greedy chunk parser (subject, object,
infinitive goal, attribute, modifier, manner, relative clauses).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from .errors import HierarchyCycleError
from .graph import ConceptualGraph
from .hierarchy import Hierarchy
from .lexicon import DictionaryEntry, Lexicon, SentenceKind
from .rules import SLOT, FormulaRule, RuleSet, default_rules
from .tokens import Tagger, Token

log = logging.getLogger(__name__)

NOUN_ATTACHED_PREPS = frozenset({"of"})
NOUN_ROOT = "something"
VERB_ROOT = "act"


class _Builder:
    """Graph under construction for one definition (or one loose sentence)."""

    def __init__(self, rules: RuleSet, headword: str | None = None):
        self.rules = rules
        self.g = ConceptualGraph()
        self.headword = headword
        self.redirect: dict[int, int] = {}
        self.constructions: list[tuple[int, int, str, dict]] = []
        self.template_edges: list[tuple[str, int, int]] = []
        self.template_nodes: set[int] = set()
        if headword:
            self.g.head = self.g.add_node(headword)

    def find(self, nid: int) -> int:
        while nid in self.redirect:
            nid = self.redirect[nid]
        return nid

    def new(self, type_label, referent=None) -> int:
        return self.g.add_node(type_label, referent)

    def fold(self, keep: int, drop: int):
        """Merge ``drop`` into ``keep``; the dropped labels become aliases."""
        keep, drop = self.find(keep), self.find(drop)
        if keep != drop:
            self.g.merge_nodes(keep, drop)
            self.redirect[drop] = keep

    def emit(self, lhs: str, **slots):
        self.constructions.append((self.rules.syntax_order(lhs), len(self.constructions), lhs, slots))

    # resolution of words to nodes ----------------------------------------

    def head(self) -> int | None:
        return self.g.head

    def noun(self, tok: Token, quant: str | None = None) -> int:
        if self.headword and tok.lemma == self.headword:
            return self.g.head
        type_label = tok.surface if tok.proper else tok.lemma
        return self.new(type_label, quant)

    def pronoun(self, tok: Token) -> int:
        if "anaphor" in tok.feats:
            return self.g.head if self.headword else self.new(tok.lemma)
        if "person" in tok.feats:
            return self.new("person", tok.lemma)
        return self.new(tok.lemma)

    def verb(self, tok: Token) -> int:
        if self.headword and tok.lemma == self.headword:
            return self.g.head
        return self.new(tok.lemma)

    # realization -----------------------------------------------------------

    def realize(self, syntax=True) -> ConceptualGraph:
        for rel, a, b in self.template_edges:
            self.g.add_edge(rel, self.find(a), self.find(b))
        if syntax:
            for _, _, lhs, slots in sorted(self.constructions, key=lambda c: c[:2]):
                rule = self.rules.syntax_rule(lhs)
                if rule is not None:
                    self._instantiate(rule.template, slots)
        return self.g

    def _instantiate(self, template: ConceptualGraph, slots: dict):
        local = {}
        for nid, n in template.nodes.items():
            if n.type_label in slots:
                local[nid] = self.find(slots[n.type_label])
            else:
                local[nid] = self.new(n.type_label, n.referent)
        for e in template.edges.values():
            rel = slots.get(e.rel_label, e.rel_label)
            self.g.add_edge(rel, local[e.source], local[e.target])


# ----------------------------------------------------------------------
# chunk parser


class _Parser:
    def __init__(self, tokens: list[Token], builder: _Builder):
        self.t = tokens
        self.i = 0
        self.b = builder
        self.used: set[int] = set()
        self.last_quant_type: str | None = None

    # token helpers ----------------------------------------------------------

    def peek(self, k=0) -> Token | None:
        j = self.i + k
        return self.t[j] if 0 <= j < len(self.t) else None

    def take(self) -> Token:
        tok = self.t[self.i]
        self.used.add(self.i)
        self.i += 1
        return tok

    def at_end(self) -> bool:
        return self.i >= len(self.t)

    def _is_pron(self, tok):
        return tok is not None and tok.pos == "pron" and "rel" not in tok.feats

    def np_end(self, j: int) -> int | None:
        """Index just past an NP starting at ``j``, or None; no side effects."""
        t = self.t
        if j >= len(t):
            return None
        if self._is_pron(t[j]):
            return j + 1
        k = j
        quant = False
        while k < len(t) and t[k].pos == "det":
            quant = quant or "quant" in t[k].feats
            k += 1
        while k < len(t) and t[k].pos == "adj":
            k += 1
        n = k
        while k < len(t) and t[k].pos == "noun":
            k += 1
        if k == n:
            return k if quant and k > j else None
        if "collective" in t[k - 1].feats and k < len(t) and t[k].lemma == "of":
            inner = self.np_end(k + 1)
            if inner is not None:
                return inner
        return k

    def is_np_start(self, k=0) -> bool:
        return self.np_end(self.i + k) is not None

    def is_verb(self, tok) -> bool:
        return tok is not None and tok.pos == "verb"

    def is_conj(self, tok) -> bool:
        return tok is not None and tok.pos == "conj" and tok.lemma in ("and", "or", ",")

    def skip_conj(self) -> int:
        j = self.i
        while j < len(self.t) and self.is_conj(self.t[j]):
            j += 1
        return j

    # noun phrases -------------------------------------------------------------

    def parse_np(self) -> int | None:
        tok = self.peek()
        if self._is_pron(tok):
            self.take()
            return self.b.pronoun(tok)
        quant = None
        while self.peek() is not None and self.peek().pos == "det":
            d = self.take()
            if "quant" in d.feats:
                quant = d.lemma
        adjs = []
        while self.peek() is not None and self.peek().pos == "adj":
            adjs.append(self.take())
        nouns = []
        while self.peek() is not None and self.peek().pos == "noun":
            nouns.append(self.take())
        if not nouns:
            if quant is None:
                return None
            node = self.b.new(self.last_quant_type or "thing", quant)
            return node
        head_tok = nouns[-1]
        if "collective" in head_tok.feats and self.peek() is not None and self.peek().lemma == "of":
            save = self.i
            self.take()
            inner = self.parse_np() if self.is_np_start() else None
            if inner is not None:
                n = self.b.g.nodes[self.b.find(inner)]
                if n.referent is None:
                    n.referent = head_tok.lemma
                for a in adjs:
                    self.b.emit("np:adj[A],np[B]", A=self.b.new(a.lemma), B=inner)
                return inner
            self.i = save
        if self.b.headword and head_tok.lemma == self.b.headword:
            quant = None
        node = self.b.noun(head_tok, quant)
        if quant is not None:
            self.last_quant_type = self.b.g.nodes[node].type_label
        for a in adjs:
            self.b.emit("np:adj[A],np[B]", A=self.b.new(a.lemma), B=node)
        for m in nouns[:-1]:
            self.b.emit("np:noun[A],np[B]", A=self.b.noun(m), B=node)
        return node

    def parse_np_group(self, relatives: bool = True) -> list[int]:
        first = self.parse_np()
        if first is None:
            return []
        nodes = [first]
        while True:
            j = self.skip_conj()
            if j == self.i:
                break
            end = self.np_end(j)
            if end is None or (end < len(self.t) and self.is_verb(self.t[end])):
                break
            for k in range(self.i, j):
                self.used.add(k)
            self.i = j
            nodes.append(self.parse_np())
        self.parse_post(nodes, relatives)
        return nodes

    def parse_post(self, nodes: list[int], relatives: bool = True):
        """Post-modifiers of an NP: of-phrases and relative clauses."""
        while True:
            tok = self.peek()
            if tok is None:
                return
            if tok.pos == "prep" and tok.lemma in NOUN_ATTACHED_PREPS and self.is_np_start(1):
                self.take()
                objs = self.parse_np_group(relatives=False)
                for o in objs:
                    self.b.emit("np:np[A],prep[B],np[C]", A=nodes[-1], B=tok.lemma, C=o)
                continue
            if not relatives:
                return
            if tok.lemma in ("that", "which", "who") and "rel" in tok.feats:
                self.take()
                self.parse_relative(nodes)
                return
            if tok.lemma == "where":
                self.take()
                subj = self.parse_np_group() if self.is_np_start() else []
                for v in self.parse_vp_group(subj):
                    for n in nodes:
                        self.b.emit("np:np[A],where_s[B]", A=n, B=v)
                return
            end = self.np_end(self.i)
            if (
                end is not None
                and end < len(self.t)
                and self.is_verb(self.t[end])
                and "copula" not in self.t[end].feats
            ):
                subj = self.parse_np_group()
                self.parse_vp_group(subj, gap=nodes)
                return
            return

    def parse_relative(self, antecedents: list[int]):
        if self.is_verb(self.peek()):
            self.parse_vp_group(antecedents)
        elif self.is_np_start():
            subj = self.parse_np_group()
            self.parse_vp_group(subj, gap=antecedents)

    # verb phrases ---------------------------------------------------------------

    def parse_vp_group(self, subjects: list[int], gap: list[int] | None = None) -> list[int]:
        verbs = self.parse_vp(subjects, gap)
        while True:
            j = self.skip_conj()
            if j == self.i or j >= len(self.t) or not self.is_verb(self.t[j]):
                break
            for k in range(self.i, j):
                self.used.add(k)
            self.i = j
            verbs += self.parse_vp(subjects, gap)
        return verbs

    def parse_vp(self, subjects: list[int], gap: list[int] | None = None) -> list[int]:
        aux, advs = [], []
        while True:
            tok = self.peek()
            if self.is_verb(tok) and "aux" in tok.feats:
                aux.append(self.take())
            elif tok is not None and tok.pos == "adv" and aux:
                advs.append(self.take())
            else:
                break
        if self.is_verb(self.peek()):
            main = self.take()
        elif any("copula" in a.feats for a in aux):
            self.parse_copula(subjects)
            return []
        elif aux:
            main = aux.pop()
        else:
            return []
        passive = any("copula" in a.feats for a in aux) and "participle" in main.feats
        v = self.b.verb(main)
        for s in subjects:
            self.b.emit("s:np[A],vp_passive[B]" if passive else "s:np[A],vp[B]", A=s, B=v)
        while self.peek() is not None and self.peek().pos == "adv":
            advs.append(self.take())
        objs = []
        if not passive and self.is_np_start():
            objs = self.parse_np_group()
            for o in objs:
                self.b.emit("vp:vp[A],np[B]", A=v, B=o)
        if gap and not objs:
            for a in gap:
                self.b.emit("np:np[A],rel_s[B]", A=a, B=v)
        for a in advs:
            self.b.emit("vp:vp[A],adv[B]", A=v, B=self.b.new(a.lemma))
        self.parse_trailing(v, is_verb=True)
        return [v]

    def parse_copula(self, subjects: list[int]):
        if self.is_np_start():
            pred = self.parse_np()
            head = self.b.head()
            for s in subjects:
                if head is not None and self.b.find(s) == self.b.find(head):
                    self.b.fold(pred, s)
            self.parse_post([pred])
            self.parse_trailing(pred, is_verb=False)
        elif self.peek() is not None and self.peek().pos == "adj":
            while self.peek() is not None and self.peek().pos in ("adj", "conj"):
                tok = self.take()
                if tok.pos == "adj":
                    for s in subjects:
                        self.b.emit("s:np[A],be,adj[B]", A=s, B=self.b.new(tok.lemma))
            if subjects:
                self.parse_trailing(subjects[-1], is_verb=False)

    def parse_trailing(self, head: int, is_verb: bool):
        """Prepositional phrases, infinitives and adverbs after a head."""
        lhs = "vp:vp[A],prep[B],np[C]" if is_verb else "np:np[A],prep[B],np[C]"
        while True:
            tok = self.peek()
            if tok is None:
                return
            if tok.pos == "to" and self.is_verb(self.peek(1)):
                self.take()
                for v2 in self.parse_vp_group([]):
                    self.b.emit("vp:vp[A],inf_vp[B]", A=head, B=v2)
            elif tok.pos in ("prep", "to") and self.is_np_start(1):
                self.take()
                for o in self.parse_np_group():
                    self.b.emit(lhs, A=head, B=tok.lemma, C=o)
            elif tok.pos == "adv" and is_verb:
                self.take()
                self.b.emit("vp:vp[A],adv[B]", A=head, B=self.b.new(tok.lemma))
            else:
                return

    # clauses -------------------------------------------------------------------

    def parse_clause(self) -> list[int]:
        """One clause; returns its verb nodes, or its NP heads when it has no verb."""
        subjects = self.parse_np_group() if self.is_np_start() else []
        if self.is_verb(self.peek()):
            verbs = self.parse_vp_group(subjects)
            return verbs or subjects
        if subjects:
            self.parse_trailing(subjects[-1], is_verb=False)
        return subjects

    def parse_all(self) -> list[int]:
        heads = []
        while not self.at_end():
            start = self.i
            heads += self.parse_clause()
            j = self.skip_conj()
            if j > self.i:
                self.i = j
            if self.i == start:
                self.i += 1
        return heads

    def leftovers(self) -> list[Token]:
        return [
            t for k, t in enumerate(self.t)
            if k not in self.used and t.pos in ("noun", "verb", "adj", "adv")
        ]


# ----------------------------------------------------------------------
# formulas


@dataclass
class FormulaMatch:
    rule: FormulaRule
    spans: dict[str, tuple[int, int]]
    consumed: set[int] = field(default_factory=set)


def match_formula(tokens: list[Token], rules: list[FormulaRule]) -> FormulaMatch | None:
    """Longest-matching formula rule; slots take the words between literals."""
    words = [t.surface.lower() for t in tokens]
    best = None
    for rule in rules:
        m = _match_pattern(rule.pattern, words)
        if m is None:
            continue
        spans, consumed = m
        if best is None or rule.literal_count > best.rule.literal_count:
            best = FormulaMatch(rule, spans, consumed)
    return best


def _match_pattern(pattern, words):
    def rec(pi, wi):
        if pi == len(pattern):
            return ({}, set()) if wi == len(words) else None
        atom = pattern[pi]
        slot = SLOT.match(atom)
        if slot:
            last = pi == len(pattern) - 1
            ends = [len(words)] if last else range(wi + 1, len(words))
            for end in ends:
                if end <= wi:
                    continue
                rest = rec(pi + 1, end)
                if rest is not None:
                    spans, consumed = rest
                    spans[slot.group(1)] = (wi, end)
                    return spans, consumed
            return None
        if wi < len(words) and words[wi] in atom.split("|"):
            rest = rec(pi + 1, wi + 1)
            if rest is not None:
                rest[1].add(wi)
                return rest
        return None

    return rec(0, 0)


def _apply_formula(match: FormulaMatch, tokens, builder: _Builder) -> list[_Parser]:
    heads = {}
    parsers = []
    for name, (s, e) in match.spans.items():
        p = _Parser(tokens[s:e], builder)
        heads[name] = p.parse_all()
        parsers.append(p)
    template = match.rule.template
    for nid, n in template.nodes.items():
        for alias in n.aliases:
            if n.type_label in heads and alias in heads:
                for keep, drop in itertools.product(heads[n.type_label], heads[alias]):
                    builder.fold(keep, drop)
                    builder.template_nodes.add(keep)
    for e in template.edges.values():
        src = template.nodes[e.source].type_label
        tgt = template.nodes[e.target].type_label
        for a, b in itertools.product(heads.get(src, ()), heads.get(tgt, ())):
            builder.template_edges.append((e.rel_label, a, b))
            builder.template_nodes.update((a, b))
    return parsers


def apply_formula_rules(
    tokens: list[Token], rules: RuleSet | list[FormulaRule] | None = None
) -> ConceptualGraph | None:
    """Fragment produced by the best formula alone, or None when none matches."""
    rules = rules if rules is not None else default_rules()
    formulas = rules.formulas if isinstance(rules, RuleSet) else rules
    ruleset = rules if isinstance(rules, RuleSet) else default_rules()
    match = match_formula(tokens, formulas)
    if match is None:
        return None
    builder = _Builder(ruleset)
    _apply_formula(match, tokens, builder)
    g = builder.realize(syntax=False)
    keep = {builder.find(n) for n in builder.template_nodes}
    for nid in [n for n in g.nodes if n not in keep]:
        for eid in [e.edge_id for e in g.edges.values() if nid in (e.source, e.target)]:
            g.remove_edge(eid)
        del g.nodes[nid]
    return g


def apply_syntax_rules(tokens: list[Token], rules: RuleSet | None = None) -> ConceptualGraph:
    """Fragment built by the chunk parser alone (no formulas, no headword)."""
    builder = _Builder(rules or default_rules())
    parser = _Parser(tokens, builder)
    parser.parse_all()
    g = builder.realize()
    _degrade(g, builder, parser, " ".join(t.surface for t in tokens))
    return g


def _degrade(g, builder, parser, text):
    left = parser.leftovers()
    if left:
        for t in left:
            builder.new(t.lemma)
        g.degraded.append(text)


# ----------------------------------------------------------------------
# temporary graphs


def build_temporary_graph(
    entry: DictionaryEntry, lex: Lexicon, rules: RuleSet | None = None, tagger: Tagger | None = None
) -> ConceptualGraph:
    """Temporary graph of one entry from its description and usage sentences."""
    rules = rules or default_rules()
    tagger = tagger or lex.tagger()
    builder = _Builder(rules, entry.headword)
    builder.g.provenance = [entry.headword]
    for sentence in entry.sentences:
        if sentence.kind is SentenceKind.EXAMPLE:
            continue
        tokens = tagger.tokenize(sentence.text)
        match = match_formula(tokens, rules.formulas)
        if match is not None:
            parsers = _apply_formula(match, tokens, builder)
            left = [t for p in parsers for t in p.leftovers()]
        else:
            parser = _Parser(tokens, builder)
            parser.parse_all()
            left = parser.leftovers()
        if left:
            for t in left:
                builder.new(t.lemma)
            builder.g.degraded.append(sentence.text)
    g = builder.realize()
    _unify_same_concepts(g)
    if not g.is_connected() and not g.degraded:
        g.degraded.append("<disconnected>")
    return g


def _unify_same_concepts(g: ConceptualGraph):
    groups: dict[tuple, list[int]] = {}
    for nid in sorted(g.nodes):
        n = g.nodes[nid]
        groups.setdefault((n.type_label, n.referent), []).append(nid)
    for nids in groups.values():
        if len(nids) > 1:
            keep = g.head if g.head in nids else nids[0]
            for other in nids:
                if other != keep:
                    g.merge_nodes(keep, other)


def build_all_graphs(lex: Lexicon, rules: RuleSet | None = None) -> dict[str, ConceptualGraph]:
    tagger = lex.tagger()
    return {
        hw: build_temporary_graph(lex.entries[hw], lex, rules, tagger)
        for hw in sorted(lex.entries)
    }


# ----------------------------------------------------------------------
# genus links


def genus_of(entry: DictionaryEntry, tagger: Tagger) -> list[str]:
    """Genus terms named by the entry's description sentences."""
    out = []
    hw = entry.headword
    for s in entry.sentences:
        if s.kind is not SentenceKind.DESCRIPTION:
            continue
        toks = tagger.tokenize(s.text)
        lem = [t.lemma for t in toks]
        if len(lem) >= 4 and lem[0] == "to" and lem[1] == hw and lem[2] == "be" and lem[3] == "to":
            verbs = [t.lemma for t in toks[4:] if t.pos == "verb"]
            if verbs:
                out.append(verbs[0])
            continue
        k = 0
        while k < len(toks) and toks[k].pos == "det":
            k += 1
        if k >= len(toks) or toks[k].lemma not in (hw, "it", "they"):
            continue
        k += 1
        if k >= len(toks) or toks[k].lemma != "be":
            continue
        k += 1
        while k < len(toks) and toks[k].pos == "det":
            k += 1
        if k + 1 < len(toks) and toks[k].lemma in ("kind", "type") and toks[k + 1].lemma == "of":
            k += 2
        while k < len(toks) and toks[k].pos == "adj":
            k += 1
        nouns = []
        while k < len(toks) and toks[k].pos == "noun":
            nouns.append(toks[k])
            k += 1
            # "a group of words": the genus is the grouped noun, as in the graph
            if "collective" in toks[k - 1].feats and k < len(toks) and toks[k].lemma == "of":
                k += 1
                while k < len(toks) and toks[k].pos in ("det", "adj"):
                    k += 1
                nouns = []
        if nouns and nouns[-1].lemma != hw:
            out.append(nouns[-1].lemma)
    return out


def extract_genus_links(lex: Lexicon) -> Hierarchy:
    """Concept hierarchy from genus sentences; parentless nouns and verbs go under the roots."""
    h = Hierarchy("concept")
    h.add(NOUN_ROOT)
    h.add(VERB_ROOT)
    h.rejected = []
    tagger = lex.tagger()
    genus_pos = {}
    for hw in sorted(lex.entries):
        entry = lex.entries[hw]
        if entry.part_of_speech not in ("noun", "verb"):
            continue
        h.add(hw)
        for g in genus_of(entry, tagger):
            genus_pos.setdefault(g, entry.part_of_speech)
            try:
                h.add_link(hw, g)
            except HierarchyCycleError as exc:
                log.warning("skipping genus link: %s", exc)
                h.rejected.append((hw, g))
    for label in sorted(h.nodes):
        if label in (NOUN_ROOT, VERB_ROOT) or h.parents[label]:
            continue
        entry = lex.entries.get(label)
        pos = entry.part_of_speech if entry else genus_pos.get(label, "noun")
        h.add_link(label, VERB_ROOT if pos == "verb" else NOUN_ROOT)
    return h
