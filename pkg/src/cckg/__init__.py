"""Concept clustering knowledge graphs built from a children's dictionary."""

from .cluster import (
    ClusterConfig,
    ClusterResult,
    TraceEvent,
    build_cckg,
    cluster_all,
    expansion_backward,
    expansion_forward,
    start_state,
    trigger_backward,
    trigger_forward,
)
from .errors import (
    CCKGError,
    DuplicateHeadwordError,
    GraphError,
    HierarchyCycleError,
    LkbFormatError,
    MalformedEntryError,
    MatchBudgetExceeded,
    NotationError,
    RuleFileError,
    UnknownLabelError,
    UnknownTriggerError,
    VersionMismatchError,
)
from .graph import ConceptNode, ConceptualGraph, RelationEdge, format_linear, is_isomorphic, parse_linear
from .hierarchy import Hierarchy, informativeness
from .lexicon import DictionaryEntry, Lexicon, Sentence, SentenceKind, classify_sentence, parse_dictionary
from .lkb import LkbArchive, export_dot, load_lkb, save_lkb, to_dot
from .match import (
    MatchConfig,
    MatchContext,
    MatchResult,
    concepts_match,
    maximal_common_subgraph,
    maximal_join,
    relations_match,
)
from .rules import RuleSet, default_rules, load_rules
from .transform import (
    apply_formula_rules,
    apply_syntax_rules,
    build_all_graphs,
    build_temporary_graph,
    extract_genus_links,
)

__version__ = "0.1.0"
