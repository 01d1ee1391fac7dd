import pytest

from cckg.config import load_relation_hierarchy, minidict_path
from cckg.graph import parse_linear
from cckg.lexicon import parse_dictionary
from cckg.lkb import LkbArchive
from cckg.match import MatchContext

# Absolute cutoff used by the cluster fixtures: message (5) stays significant,
# you (22), paper (10) and write (12) do not.
FIXTURE_CUTOFF = 8

DRAWING_G1 = (
    "[make]->(sub)->[John]; [make]->(obj)->[drawing]; [drawing]->(att)->[nice]; "
    "[make]->(on)->[piece]; [piece]->(of)->[paper]; [make]->(with)->[pen]"
)
DRAWING_G2 = (
    "[draw]->(sub)->[John]; [draw]->(on)->[paper]; "
    "[draw]->(instrument)->[crayon]; [draw]->(manner)->[rapidly]"
)


@pytest.fixture(scope="session")
def minidict_text():
    return minidict_path().read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def relation_h():
    return load_relation_hierarchy()


@pytest.fixture(scope="session")
def lex(minidict_text):
    return parse_dictionary(minidict_text, cutoff=FIXTURE_CUTOFF)


@pytest.fixture(scope="session")
def _archive_dict(lex):
    return LkbArchive.build(lex).to_dict()


@pytest.fixture
def archive(_archive_dict):
    # fresh copy per test: matching may add covert categories to the hierarchy
    return LkbArchive.from_dict(_archive_dict)


@pytest.fixture
def ctx(archive) -> MatchContext:
    return archive.context()


@pytest.fixture
def drawing_graphs(relation_h):
    return (
        parse_linear(DRAWING_G1, relation_h.canonical),
        parse_linear(DRAWING_G2, relation_h.canonical),
    )


# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
