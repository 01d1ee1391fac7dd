import pytest

from cckg.graph import format_linear
from cckg.lexicon import parse_dictionary
from cckg.rules import default_rules, parse_rules
from cckg.errors import RuleFileError
from cckg.tokens import tokenize_and_tag
from cckg.transform import (
    apply_formula_rules,
    apply_syntax_rules,
    build_all_graphs,
    build_temporary_graph,
    extract_genus_links,
)


def syntax(sentence, lex=None):
    return format_linear(apply_syntax_rules(tokenize_and_tag(sentence, lex), default_rules()))


def formula(sentence, lex=None):
    g = apply_formula_rules(tokenize_and_tag(sentence, lex), default_rules().formulas)
    return None if g is None else format_linear(g)


# ----------------------------------------------------------------------
# tokens


def test_tokens():
    toks = tokenize_and_tag("Many people send messages through the mail.")
    assert [(t.lemma, t.pos) for t in toks] == [
        ("many", "det"), ("person", "noun"), ("send", "verb"), ("message", "noun"),
        ("through", "prep"), ("the", "det"), ("mail", "noun"),
    ]


def test_inflections_prefer_open_class_stems():
    toks = tokenize_and_tag("John uses a pen and it is used to write.")
    assert [t.lemma for t in toks if t.pos == "verb"] == ["use", "be", "use", "write"]


def test_multiword_headword_is_one_token(lex):
    toks = tokenize_and_tag("People mail letters at post offices.", lex)
    assert "post office" in [t.lemma for t in toks]


# ----------------------------------------------------------------------
# relation table


@pytest.mark.parametrize(
    "sentence, expected",
    [
        ("apple on the table", "[apple]->(on)->[table]"),
        ("John eats", "[eat]->(agent)->[John]"),
        ("eat to grow", "[eat]->(goal)->[grow]"),
    ],
)
def test_syntax_rows(sentence, expected):
    assert formula(sentence) is None
    assert syntax(sentence) == expected


@pytest.mark.parametrize(
    "sentence, expected",
    [
        ("A pen is used to write.", "[write]->(instrument)->[pen]"),
        ("A wing is a part of a bird.", "[wing]->(part-of)->[bird]"),
        ("A school is a place where children learn.", "[learn]->(loc)->[school]"),
    ],
)
def test_formula_rows(sentence, expected):
    assert formula(sentence) == expected


def test_formula_needs_whole_pattern():
    assert formula("A pen is a tool.") is None
    assert formula("You write with a pen.") is None


def test_prepositional_phrases_attach_to_verb():
    # both prepositional phrases attach to the verb
    assert syntax("John makes a nice drawing on a piece of paper with the pen.") == (
        "[drawing]->(att)->[nice]; [make]->(agent)->[John]; [make]->(obj)->[drawing]; "
        "[make]->(on)->[piece]; [make]->(with)->[pen]; [piece]->(of)->[paper]"
    )


def test_coordination_fans_out():
    assert syntax("You eat corn, wheat, or rice.") == (
        "[eat]->(agent)->[person:you]; [eat]->(obj)->[corn]; [eat]->(obj)->[rice]; [eat]->(obj)->[wheat]"
    )


def test_degraded_sentence_keeps_isolated_concepts():
    g = apply_syntax_rules(tokenize_and_tag("Quickly slowly."), default_rules())
    assert g.degraded
    assert len(g.nodes) == 2 and not g.edges


# ----------------------------------------------------------------------
# temporary graphs


def test_letter_and_message(lex):
    gs = build_all_graphs(lex)
    assert format_linear(gs["letter"]) == (
        "[write]->(agent)->[person:you]; [write]->(obj)->[message(letter)]; [write]->(on)->[paper]"
    )
    assert format_linear(gs["message"]) == (
        "[send]->(agent)->[person:many]; [send]->(from)->[person:one]; "
        "[send]->(obj)->[word:group(message)]; [send]->(through)->[mail]; [send]->(to)->[person:another]"
    )
    assert gs["letter"].nodes[gs["letter"].head].type_label == "message"


def test_cereal_and_ash_graphs(lex):
    gs = build_all_graphs(lex)
    ash = format_linear(gs["ash"])
    assert "[burn]->(result)->[powder(ash)]" in ash
    assert "fireplace" not in ash and "Ray" not in ash
    cereal = format_linear(gs["cereal"])
    for grain in ("corn", "wheat", "rice"):
        assert f"[food(cereal)]->(made-of)->[{grain}]" in cereal


def test_every_edge_label_is_known(lex, relation_h):
    for hw, g in build_all_graphs(lex).items():
        for e in g.edges.values():
            assert e.rel_label in relation_h, (hw, e.rel_label)


def test_connected_or_degraded(lex):
    for g in build_all_graphs(lex).values():
        assert g.is_connected() or g.degraded


def test_prepositions_not_resolved(lex, relation_h):
    rules = default_rules()
    syntactic = {"agent", "obj", "goal", "att", "mod", "manner", "loc"}
    tagger = lex.tagger()
    for e in lex.entries.values():
        for s in e.defining_sentences():
            toks = tagger.tokenize(s.text)
            if apply_formula_rules(toks, rules) is not None:
                continue
            g = apply_syntax_rules(toks, rules)
            preps = {t.lemma for t in toks if t.pos in ("prep", "to")}
            for edge in g.edges.values():
                assert edge.rel_label in syntactic or edge.rel_label in preps, (s.text, edge.rel_label)


def test_deterministic(lex):
    a = {hw: g.to_dict() for hw, g in build_all_graphs(lex).items()}
    b = {hw: g.to_dict() for hw, g in build_all_graphs(lex).items()}
    assert a == b


def test_examples_are_skipped(lex):
    entry = lex.entries["ash"]
    g = build_temporary_graph(entry, lex)
    assert not ({"watch", "father", "fireplace", "clean"} & g.labels())


# ----------------------------------------------------------------------
# genus links


def test_genus_links(lex):
    h = extract_genus_links(lex)
    assert h.subsumes("food", "cereal")
    assert h.subsumes("something", "pen")
    assert h.subsumes("word", "message") and h.subsumes("message", "letter")
    assert h.subsumes("wax", "crayon") and h.subsumes("tool", "pen")
    assert h.subsumes("act", "draw")


def test_genus_links_empty_lexicon():
    h = extract_genus_links(parse_dictionary(""))
    assert h.nodes == h.roots == {"something", "act"}


def test_genus_cycle_skipped_and_reported(caplog):
    lex = parse_dictionary(
        "@entry hen\n@pos noun\nA hen is a bird.\n\n@entry bird\n@pos noun\nA bird is a hen.\n"
    )
    h = extract_genus_links(lex)
    assert h.rejected == [("hen", "bird")]
    assert "cycle" in caplog.text
    assert h.subsumes("hen", "bird")


# ----------------------------------------------------------------------
# rule files


def test_rule_file_errors():
    with pytest.raises(RuleFileError, match=":1:"):
        parse_rules('formula: "[A] is [A]" => [A]->(r)->[A]\n')
    with pytest.raises(RuleFileError, match=":2:"):
        parse_rules('# ok\nformula: "[A] is [B]" => [A]->(r)->[C]\n')
    with pytest.raises(RuleFileError):
        parse_rules("nonsense\n")
