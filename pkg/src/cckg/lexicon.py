"""Dictionary ingestion: entry parsing, sentence classification and occurrence counts.

Entry file format::

    @entry post office
    @pos noun
    A post office is a place where people mail letters and buy stamps.

One sentence per line; a blank line ends the entry; ``#`` lines between
entries are comments.
"""

from __future__ import annotations

import io
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, TextIO

from .errors import DuplicateHeadwordError, MalformedEntryError
from .tokens import Tagger, WordTable, split_words

PARTS_OF_SPEECH = ("noun", "verb", "other")


class SentenceKind(str, Enum):
    DESCRIPTION = "description"
    USAGE = "usage"
    EXAMPLE = "example"


@dataclass
class Sentence:
    text: str
    kind: SentenceKind


@dataclass
class DictionaryEntry:
    headword: str
    part_of_speech: str
    sentences: list[Sentence] = field(default_factory=list)

    def defining_sentences(self) -> list[Sentence]:
        """Description and usage sentences; examples never feed counts or graphs."""
        return [s for s in self.sentences if s.kind is not SentenceKind.EXAMPLE]


@dataclass
class Lexicon:
    entries: dict[str, DictionaryEntry] = field(default_factory=dict)
    counts: Counter = field(default_factory=Counter)
    total_count: int = 0
    cutoff_override: int | None = None
    table: WordTable | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self._lemma_cache: dict[str, frozenset] = {}

    @property
    def headwords(self) -> list[str]:
        return sorted(self.entries)

    def tagger(self) -> Tagger:
        return Tagger.for_lexicon(self, self.table)

    @property
    def significance_cutoff(self) -> int:
        if self.cutoff_override is not None:
            return self.cutoff_override
        return decile_cutoff(self.counts)

    def is_semantically_significant(self, word: str) -> bool:
        return self.counts.get(word, 0) < self.significance_cutoff

    def definition_lemmas(self, headword: str) -> frozenset:
        """Lemmas occurring in the description and usage sentences of ``headword``."""
        if headword not in self._lemma_cache:
            tagger = self.tagger()
            lemmas = set()
            for s in self.entries[headword].defining_sentences():
                lemmas.update(t.lemma for t in tagger.tokenize(s.text) if t.lemma != ",")
            self._lemma_cache[headword] = frozenset(lemmas)
        return self._lemma_cache[headword]

    def dumps(self) -> str:
        blocks = []
        for hw in sorted(self.entries):
            e = self.entries[hw]
            lines = [f"@entry {hw}", f"@pos {e.part_of_speech}"]
            lines += [s.text for s in e.sentences]
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + ("\n" if blocks else "")

    def __eq__(self, other):
        if not isinstance(other, Lexicon):
            return NotImplemented
        return (
            self.entries == other.entries
            and self.counts == other.counts
            and self.total_count == other.total_count
            and self.cutoff_override == other.cutoff_override
        )


def decile_cutoff(counts: Counter) -> int:
    """Smallest k such that every word seen at least k times ranks in the top tenth."""
    ranked = sorted(counts.values(), reverse=True)
    top = math.ceil(len(ranked) / 10)
    if len(ranked) <= top:
        return 1
    return ranked[top] + 1


_DESCRIPTION = r"^(?:(?:a|an|the)\s+)?(?:{hw}|it|they)\s+(?:is|are)\s+(?:a|an)\b"
_VERB_GENUS = r"^to\s+{hw}\s+is\s+to\b"


def classify_sentence(
    entry_headword: str, sentence: str, headwords: Iterable[str] = (), table: WordTable | None = None
) -> SentenceKind:
    """Label a definition sentence as description, usage or example."""
    text = sentence.strip()
    low = text.lower()
    hw = re.escape(entry_headword.lower())
    hw_forms = f"{hw}|{hw}s|{hw}es"
    if re.match(_DESCRIPTION.format(hw=hw_forms), low) or re.match(_VERB_GENUS.format(hw=hw), low):
        return SentenceKind.DESCRIPTION
    words = split_words(text)
    tagger = Tagger(table, {h: "noun" for h in (*headwords, entry_headword)})
    multi = {w for h in (*headwords, entry_headword) for w in h.split()}
    for i, w in enumerate(words):
        if not w[0].isupper() or w == "I":
            continue
        if i > 0 and w.lower() not in multi:
            return SentenceKind.EXAMPLE
        if i == 0 and not (tagger.known(w.lower()) or tagger.known(tagger.lemmatize(w))):
            return SentenceKind.EXAMPLE
    if any(w.lower() in ("his", "her") for w in words):
        return SentenceKind.EXAMPLE
    return SentenceKind.USAGE


def parse_dictionary(
    source: str | TextIO, table: WordTable | None = None, cutoff: int | None = None
) -> Lexicon:
    """Parse entry-file text (or a text stream) into a classified, counted Lexicon."""
    text = source if isinstance(source, str) else source.read()
    raw: list[tuple[str, str, list[tuple[str, int]], int]] = []
    headword = pos = None
    sentences: list[tuple[str, int]] = []
    start = 0

    def close(lineno):
        nonlocal headword, pos, sentences
        if headword is None:
            return
        if pos is None:
            raise MalformedEntryError(f"entry {headword!r} has no @pos line", start)
        if not sentences:
            raise MalformedEntryError(f"entry {headword!r} has no sentences", start)
        raw.append((headword, pos, sentences, start))
        headword, pos, sentences = None, None, []

    for lineno, line in enumerate(io.StringIO(text), 1):
        line = line.rstrip("\n").strip()
        if not line:
            close(lineno)
            continue
        if line.startswith("#") and headword is None:
            continue
        if line.startswith("@entry"):
            close(lineno)
            headword = line[len("@entry"):].strip().lower()
            if not headword:
                raise MalformedEntryError("empty headword", lineno)
            start = lineno
        elif line.startswith("@pos"):
            if headword is None or pos is not None:
                raise MalformedEntryError("@pos outside an entry header", lineno)
            pos = line[len("@pos"):].strip()
            if pos not in PARTS_OF_SPEECH:
                raise MalformedEntryError(f"part of speech must be one of {PARTS_OF_SPEECH}", lineno)
        elif line.startswith("@"):
            raise MalformedEntryError(f"unknown directive {line.split()[0]!r}", lineno)
        else:
            if headword is None:
                raise MalformedEntryError("sentence outside an entry", lineno)
            if pos is None:
                raise MalformedEntryError("sentence before the @pos line", lineno)
            if not line.endswith("."):
                raise MalformedEntryError("sentence does not end with a period", lineno)
            sentences.append((line, lineno))
    close(None)

    lex = Lexicon(cutoff_override=cutoff, table=table)
    names = [hw for hw, *_ in raw]
    for hw, pos, sents, lineno in raw:
        if hw in lex.entries:
            raise DuplicateHeadwordError(f"duplicate headword {hw!r}", lineno)
        lex.entries[hw] = DictionaryEntry(
            hw, pos, [Sentence(s, classify_sentence(hw, s, names, table)) for s, _ in sents]
        )
    return compute_counts(lex)


def compute_counts(lex: Lexicon) -> Lexicon:
    """Fill lemma occurrence counts over description+usage sentences of nouns and verbs."""
    tagger = lex.tagger()
    counts = Counter()
    for entry in lex.entries.values():
        if entry.part_of_speech not in ("noun", "verb"):
            continue
        for s in entry.defining_sentences():
            counts.update(t.lemma for t in tagger.tokenize(s.text) if t.lemma != ",")
    lex.counts = counts
    lex.total_count = sum(counts.values())
    lex._lemma_cache.clear()
    return lex
