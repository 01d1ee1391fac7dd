import json
import re

import pytest

from cckg.cluster import ClusterConfig, build_cckg, start_state, trigger_forward
from cckg.errors import LkbFormatError, VersionMismatchError
from cckg.graph import ConceptualGraph, parse_linear
from cckg.lexicon import parse_dictionary
from cckg.lkb import LkbArchive, dumps_lkb, export_dot, load_lkb, loads_lkb, save_lkb, to_dot

from test_cluster import LETTER_CLUSTER


def dot_counts(text):
    nodes = re.findall(r"^\s+n\d+ \[label=", text, re.M)
    edges = re.findall(r"^\s+n\d+ -> n\d+ ", text, re.M)
    return len(nodes), len(edges)


def test_round_trip(archive, tmp_path):
    path = tmp_path / "mini.lkb"
    save_lkb(archive, path)
    again = load_lkb(path)
    assert again == archive
    assert dumps_lkb(again) == path.read_text(encoding="utf-8")
    assert not list(tmp_path.glob("*.tmp"))


def test_clusters_and_covert_counter_survive(lex, archive, tmp_path):
    ctx = archive.context()
    archive.clusters["letter"] = build_cckg("letter", lex, ctx)
    archive.clusters["draw"] = build_cckg("draw", lex, ctx)
    path = tmp_path / "c.lkb"
    save_lkb(archive, path)
    again = load_lkb(path)
    assert again.clusters["letter"].cluster == LETTER_CLUSTER
    assert again.clusters["letter"].trace == archive.clusters["letter"].trace
    assert again.concept_h.covert_counter == archive.concept_h.covert_counter == 2
    assert again == archive


def test_truncated_archive_reports_offset(archive):
    text = dumps_lkb(archive)
    cut = text[: len(text) // 2]
    with pytest.raises(LkbFormatError) as exc:
        loads_lkb(cut)
    assert exc.value.offset is not None and 0 < exc.value.offset <= len(cut.encode())
    assert "byte" in str(exc.value)


def test_version_mismatch(archive):
    data = archive.to_dict()
    data["format_version"] = "cckg-lkb/0"
    with pytest.raises(VersionMismatchError, match="cckg-lkb/0"):
        loads_lkb(json.dumps(data))


def test_invariant_violation_names_location(archive):
    data = archive.to_dict()
    data["graphs"]["letter"]["edges"][0]["rel"] = "frobnicate"
    with pytest.raises(LkbFormatError, match="graphs/letter"):
        LkbArchive.from_dict(data)
    data = archive.to_dict()
    data["lexicon"]["total_count"] += 1
    with pytest.raises(LkbFormatError, match="total_count"):
        LkbArchive.from_dict(data)
    with pytest.raises(LkbFormatError):
        loads_lkb("[]")


def test_empty_archive_round_trip():
    archive = LkbArchive.build(parse_dictionary(""))
    assert loads_lkb(dumps_lkb(archive)) == archive


def test_dot_single_node_and_empty():
    g = ConceptualGraph()
    assert dot_counts(to_dot(g)) == (0, 0)
    g.add_node("ash")
    text = to_dot(g, "ash")
    assert dot_counts(text) == (1, 0)
    assert 'label="ash"' in text


def test_dot_derived_edges_dashed():
    from cckg.match import normalize_transitivity

    g = normalize_transitivity(parse_linear("[make]->(on)->[piece]; [piece]->(of)->[paper]"))
    text = to_dot(g)
    assert dot_counts(text) == (3, 3)
    assert text.count("style=dashed") == 1


def test_dot_of_trigger_forward_graph(lex, ctx, tmp_path):
    state = trigger_forward(start_state("letter", lex, ctx), lex, ctx, ClusterConfig())
    path = tmp_path / "letter.dot"
    export_dot(state.cckg, path, name="letter")
    text = path.read_text(encoding="utf-8")
    assert text.startswith('digraph "letter" {')
    assert dot_counts(text) == (9, 8)
    assert 'label="word:group(message(letter))"' in text
    assert to_dot(state.cckg) == to_dot(ConceptualGraph.from_dict(state.cckg.to_dict()))
