"""Growing a CCKG and its concept cluster from a trigger word.

Four phases run in order: trigger forward, trigger backward, expansion
forward and expansion backward.  Trigger-phase joins are unconditional; an
expansion-phase join needs a match of at least three concepts linked by two
relations.  Candidates are visited alphabetically and joined one at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import MatchBudgetExceeded, UnknownTriggerError
from .graph import ConceptualGraph
from .hierarchy import Hierarchy
from .lexicon import Lexicon
from .match import (
    MatchConfig,
    MatchContext,
    commit_covert,
    maximal_common_subgraph,
    maximal_join,
    passes_threshold,
)

TRIGGER_FORWARD = "trigger-forward"
TRIGGER_BACKWARD = "trigger-backward"
EXPANSION_FORWARD = "expansion-forward"
EXPANSION_BACKWARD = "expansion-backward"

JOINED = "joined"
REJECTED = "rejected-below-threshold"
SKIPPED = "skipped-insignificant"


@dataclass
class ClusterConfig:
    max_expansion_steps: int = 3
    significance_cutoff: int | None = None
    match: MatchConfig = field(default_factory=MatchConfig)
    min_concepts: int = 3
    min_relations: int = 2
    persist_covert: bool = True

    def __post_init__(self):
        if self.max_expansion_steps < 1:
            raise ValueError("max_expansion_steps must be at least 1")

    @classmethod
    def from_settings(cls, settings: dict, rules=None, **overrides) -> "ClusterConfig":
        kwargs = {"match": MatchConfig.from_settings(settings, rules)}
        for key in ("max_expansion_steps", "significance_cutoff"):
            if settings.get(key) is not None:
                kwargs[key] = settings[key]
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)


class TraceEvent(NamedTuple):
    phase: str
    step: int
    word: str
    action: str
    size: tuple

    def __str__(self):
        return f"{self.phase} {self.step} {self.word} {self.action} {self.size[0]},{self.size[1]}"


@dataclass
class ClusterResult:
    trigger: str
    cluster: list[str]
    cckg: ConceptualGraph
    trace: list[TraceEvent] = field(default_factory=list)
    passes: int = 0

    def to_dict(self) -> dict:
        return {
            "trigger": self.trigger,
            "cluster": list(self.cluster),
            "cckg": self.cckg.to_dict(),
            "trace": [[e.phase, e.step, e.word, e.action, list(e.size)] for e in self.trace],
            "passes": self.passes,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClusterResult":
        trace = [TraceEvent(p, s, w, a, tuple(z)) for p, s, w, a, z in data.get("trace", ())]
        return cls(
            data["trigger"],
            list(data["cluster"]),
            ConceptualGraph.from_dict(data["cckg"]),
            trace,
            data.get("passes", 0),
        )

    def trace_text(self) -> str:
        return "\n".join(str(e) for e in self.trace)


class _Engine:
    def __init__(self, lex: Lexicon, ctx: MatchContext, cfg: ClusterConfig):
        self.lex = lex
        self.ctx = ctx
        self.cfg = cfg

    def significant(self, word: str) -> bool:
        cutoff = self.cfg.significance_cutoff
        if cutoff is None:
            cutoff = self.lex.significance_cutoff
        return self.lex.counts.get(word, 0) < cutoff

    def graph(self, word) -> ConceptualGraph:
        return self.ctx.graphs[word]

    def concept_words(self, state: ClusterResult) -> list[str]:
        labels = {label for n in state.cckg.nodes.values() for label in n.labels}
        return sorted(w for w in labels & set(self.lex.entries) if w not in state.cluster)

    def referencing(self, words) -> list[str]:
        words = set(words)
        return sorted(
            hw for hw in self.lex.entries
            if self.lex.definition_lemmas(hw) & words
        )

    def join(self, state, phase, step, word, conditional: bool) -> bool:
        tg = self.graph(word)
        try:
            m = maximal_common_subgraph(state.cckg, tg, self.ctx, self.cfg.match, commit=False)
        except MatchBudgetExceeded as exc:
            if conditional:
                state.trace.append(TraceEvent(phase, step, word, REJECTED, exc.result.size))
                return False
            m = exc.result
        ok = passes_threshold(m, self.cfg.min_concepts, self.cfg.min_relations)
        if conditional and not ok:
            state.trace.append(TraceEvent(phase, step, word, REJECTED, m.size))
            return False
        commit_covert(m, self.ctx)
        state.cckg = maximal_join(state.cckg, tg, m)
        state.cluster.append(word)
        state.trace.append(TraceEvent(phase, step, word, JOINED, m.size))
        return True


def _engine(lex, ctx, cfg):
    return _Engine(lex, ctx, cfg or ClusterConfig())


def trigger_forward(state: ClusterResult, lex, ctx, cfg: ClusterConfig | None = None) -> ClusterResult:
    eng = _engine(lex, ctx, cfg)
    state.passes += 1
    for word in eng.concept_words(state):
        if word in state.cluster:
            continue
        if not eng.significant(word):
            state.trace.append(TraceEvent(TRIGGER_FORWARD, 1, word, SKIPPED, (0, 0)))
            continue
        eng.join(state, TRIGGER_FORWARD, 1, word, conditional=False)
    return state


def trigger_backward(state: ClusterResult, lex, ctx, cfg: ClusterConfig | None = None) -> ClusterResult:
    eng = _engine(lex, ctx, cfg)
    state.passes += 1
    for word in eng.referencing([state.trigger]):
        if word not in state.cluster:
            eng.join(state, TRIGGER_BACKWARD, 1, word, conditional=False)
    return state


def expansion_forward(state: ClusterResult, lex, ctx, cfg: ClusterConfig | None = None) -> ClusterResult:
    eng = _engine(lex, ctx, cfg)
    for step in range(1, eng.cfg.max_expansion_steps + 1):
        state.passes += 1
        changed = False
        for word in eng.concept_words(state):
            if word in state.cluster:
                continue
            if not eng.significant(word):
                state.trace.append(TraceEvent(EXPANSION_FORWARD, step, word, SKIPPED, (0, 0)))
                continue
            changed |= eng.join(state, EXPANSION_FORWARD, step, word, conditional=True)
        if not changed:
            break
    return state


def expansion_backward(state: ClusterResult, lex, ctx, cfg: ClusterConfig | None = None) -> ClusterResult:
    eng = _engine(lex, ctx, cfg)
    for step in range(1, eng.cfg.max_expansion_steps + 1):
        state.passes += 1
        changed = False
        members = [w for w in state.cluster if eng.significant(w)]
        for word in eng.referencing(members):
            if word in state.cluster:
                continue
            changed |= eng.join(state, EXPANSION_BACKWARD, step, word, conditional=True)
        if not changed:
            break
    return state


def start_state(trigger: str, lex: Lexicon, ctx: MatchContext) -> ClusterResult:
    if trigger not in lex.entries:
        raise UnknownTriggerError(trigger)
    cckg = ctx.graphs[trigger].copy()
    cckg.provenance = [trigger]
    return ClusterResult(trigger, [trigger], cckg)


def build_cckg(trigger: str, lex: Lexicon, ctx: MatchContext, cfg: ClusterConfig | None = None) -> ClusterResult:
    cfg = cfg or ClusterConfig()
    if not cfg.persist_covert:
        ctx = MatchContext(
            Hierarchy.from_dict(ctx.concept_h.to_dict()), ctx.relation_h, ctx.lexicon, ctx.graphs
        )
    state = start_state(trigger, lex, ctx)
    for phase in (trigger_forward, trigger_backward, expansion_forward, expansion_backward):
        state = phase(state, lex, ctx, cfg)
    return state


def cluster_all(lex: Lexicon, ctx: MatchContext, cfg: ClusterConfig | None = None) -> dict[str, ClusterResult]:
    """One cluster per headword; overlapping clusters are left as they are."""
    return {hw: build_cckg(hw, lex, ctx, cfg) for hw in sorted(lex.entries)}
