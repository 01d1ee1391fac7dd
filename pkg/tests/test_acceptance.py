"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line; the same lines are repeated in the
terminal summary.
"""

import contextlib
import random
import time

from cckg.cluster import (
    EXPANSION_BACKWARD,
    EXPANSION_FORWARD,
    JOINED,
    ClusterConfig,
    build_cckg,
    start_state,
    trigger_forward,
)
from cckg.config import minidict_path
from cckg.graph import format_linear, is_isomorphic, parse_linear
from cckg.lexicon import SentenceKind, parse_dictionary
from cckg.lkb import LkbArchive
from cckg.match import MatchContext, maximal_common_subgraph, maximal_join
from cckg.rules import default_rules
from cckg.tokens import tokenize_and_tag
from cckg.transform import apply_formula_rules, apply_syntax_rules

import properties
from conftest import ACCEPTANCE, FIXTURE_CUTOFF
from generators import ALPHABET, PLAIN_RELS, perturbed, plain_setting, random_graph
from oracles import brute_force_mcs_size, isomorphic

DRAWING_MCS = (
    "[make(draw)]->(sub)->[John]; [make(draw)]->(obj)->[drawing]; "
    "[make(draw)]->(on)->[piece]; [piece]->(of)->[paper]; [make(draw)]->(instrument)->[label-1]"
)
DRAWING_JOIN = (
    "[make(draw)]->(sub)->[John]; [make(draw)]->(obj)->[drawing]; [drawing]->(att)->[nice]; "
    "[make(draw)]->(on)->[piece]; [piece]->(of)->[paper]; "
    "[make(draw)]->(instrument)->[label-1]; [make(draw)]->(manner)->[rapidly]"
)
LETTER_FORWARD_CCKG = (
    "[write]->(obj)->[word:group(message(letter))]; [write]->(sub)->[person:you]; "
    "[write]->(on)->[paper]; [send]->(obj)->[word:group(message(letter))]; "
    "[send]->(subj)->[person:many]; [send]->(from)->[person:one]; "
    "[send]->(to)->[person:another]; [send]->(through)->[mail]"
)
LETTER_CLUSTER = {
    "letter", "message", "address", "mail", "post office",
    "stamp", "send", "package", "card", "note",
}


@contextlib.contextmanager
def criterion(number, name):
    line = f"criterion {number}: FAIL  {name}"
    try:
        yield
        line = f"criterion {number}: PASS  {name}"
    finally:
        ACCEPTANCE[str(number)] = line
        print(line)


def fresh(lex):
    return LkbArchive.build(lex).context()


def same_graph(g, expected):
    return is_isomorphic(g, expected) and isomorphic(g, expected)


def test_1_relaxed_match_and_join(lex, relation_h, drawing_graphs):
    with criterion(1, "relaxed MCS (6,5) and join (8,7) with label-1 and make(draw), < 1 s"):
        ctx = fresh(lex)
        g1, g2 = drawing_graphs
        t0 = time.perf_counter()
        m = maximal_common_subgraph(g1, g2, ctx)
        joined = maximal_join(g1, g2, m)
        elapsed = time.perf_counter() - t0
        assert m.size == (6, 5)
        assert joined.size == (8, 7)
        assert m.new_covert_labels == ["label-1"]
        assert ctx.concept_h.subsumes("label-1", "pen") and ctx.concept_h.subsumes("label-1", "crayon")
        assert ctx.concept_h.subsumes("something", "label-1")
        assert same_graph(m.subgraph, parse_linear(DRAWING_MCS, relation_h.canonical)), format_linear(m.subgraph)
        assert same_graph(joined, parse_linear(DRAWING_JOIN, relation_h.canonical)), format_linear(joined)
        assert elapsed < 1.0, elapsed


def test_2_trigger_forward_from_letter(relation_h):
    with criterion(2, "trigger forward from letter through the parser, isomorphic, < 1 s"):
        t0 = time.perf_counter()
        lex = parse_dictionary(minidict_path().read_text(encoding="utf-8"), cutoff=FIXTURE_CUTOFF)
        ctx = fresh(lex)
        state = trigger_forward(start_state("letter", lex, ctx), lex, ctx, ClusterConfig())
        elapsed = time.perf_counter() - t0
        assert state.cluster == ["letter", "message"]
        expected = parse_linear(LETTER_FORWARD_CCKG, relation_h.canonical)
        assert state.cckg.size == expected.size == (9, 8)
        assert same_graph(state.cckg, expected), format_linear(state.cckg)
        assert elapsed < 1.0, elapsed


def test_3_letter_cluster():
    with criterion(3, "letter cluster, send/package in expansion-forward 1, card/note backward, < 5 s"):
        t0 = time.perf_counter()
        lex = parse_dictionary(minidict_path().read_text(encoding="utf-8"), cutoff=FIXTURE_CUTOFF)
        cfg = ClusterConfig(max_expansion_steps=3)
        r = build_cckg("letter", lex, fresh(lex), cfg)
        elapsed = time.perf_counter() - t0
        assert set(r.cluster) == LETTER_CLUSTER and len(r.cluster) == 10
        joined = {e.word: (e.phase, e.step) for e in r.trace if e.action == JOINED}
        assert joined["send"] == joined["package"] == (EXPANSION_FORWARD, 1)
        assert joined["card"][0] == joined["note"][0] == EXPANSION_BACKWARD
        assert max(e.step for e in r.trace) <= cfg.max_expansion_steps
        assert r.passes <= 2 + 2 * cfg.max_expansion_steps
        assert elapsed < 5.0, elapsed


def test_4_oracle_equivalence(relation_h):
    with criterion(4, "MCS size equals exhaustive enumeration on 1000 seeded pairs"):
        rng = random.Random(2024)
        agree, nontrivial = 0, 0
        for _ in range(1000):
            labels = ALPHABET[: rng.randint(2, len(ALPHABET))]
            rels = PLAIN_RELS[: rng.randint(1, len(PLAIN_RELS))]
            g1 = random_graph(rng, labels, rels)
            g2 = perturbed(rng, g1, labels, rels) if rng.random() < 0.5 else random_graph(rng, labels, rels)
            assert len(g1.edges) <= 5 and len(g2.edges) <= 5
            ctx, cfg = plain_setting(relation_h)
            got = maximal_common_subgraph(g1, g2, ctx, cfg).size
            want = brute_force_mcs_size(g1, g2)
            assert got == want, (format_linear(g1), format_linear(g2), got, want)
            agree += 1
            nontrivial += want[1] >= 2
        assert agree == 1000
        # the sample must exercise multi-edge matches, not only single concepts
        assert nontrivial >= 50


def test_5_property_suite(lex, relation_h, _archive_dict):
    with criterion(5, "property suite, 1000 seeded cases each"):
        counts = {
            "mcs symmetry": properties.check_mcs_symmetry(relation_h),
            "join node count": properties.check_join_node_count(relation_h),
            "join with self": properties.check_self_join(relation_h),
            "subsumes order": properties.check_subsumes_order(),
            "informativeness antitone": properties.check_informativeness_antitone(),
            "clustering": properties.check_clustering(lex, _archive_dict),
        }
        assert all(n >= 1000 for n in counts.values()), counts


def sentence_graph(text):
    tokens = tokenize_and_tag(text)
    rules = default_rules()
    g = apply_formula_rules(tokens, rules.formulas)
    return g if g is not None else apply_syntax_rules(tokens, rules)


TABLE_ROWS = [
    ("apple on the table", "[apple]->(on)->[table]"),
    ("John eats", "[eat]->(agent)->[John]"),
    ("eat to grow", "[eat]->(goal)->[grow]"),
    ("A pen is used to write.", "[write]->(instrument)->[pen]"),
    ("A wing is a part of a bird.", "[wing]->(part-of)->[bird]"),
    ("A school is a place where children learn.", "[learn]->(loc)->[school]"),
]


def test_6_relation_table_rows():
    with criterion(6, f"{len(TABLE_ROWS)} relation table rows parse to their printed graphs"):
        got = {sentence: format_linear(sentence_graph(sentence)) for sentence, _ in TABLE_ROWS}
        assert got == dict(TABLE_ROWS)


def test_7_ingestion_classification(lex):
    with criterion(7, "cereal and ash sentence kinds; examples add no tokens"):
        D, U, E = SentenceKind.DESCRIPTION, SentenceKind.USAGE, SentenceKind.EXAMPLE
        assert [s.kind for s in lex.entries["cereal"].sentences] == [D, U, U]
        assert [s.kind for s in lex.entries["ash"].sentences] == [U, D, E]
        example = [s.text for s in lex.entries["ash"].sentences if s.kind is E][0]
        # dropping the example sentence leaves every count unchanged
        text = minidict_path().read_text(encoding="utf-8")
        without = parse_dictionary(text.replace(example + "\n", ""), cutoff=FIXTURE_CUTOFF)
        assert len(without.entries["ash"].sentences) == 2
        assert without.counts == lex.counts and without.total_count == lex.total_count
        for word in ("ray", "watch", "father", "fireplace"):
            assert lex.counts[word] == 0
