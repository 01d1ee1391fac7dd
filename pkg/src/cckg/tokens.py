"""Tokenization, lemmatization and part-of-speech tagging for definition sentences.

Tagging is table driven: a closed-class/seed word table, the part of speech of
dictionary headwords, then suffix rules.  Words listed with several parts of
speech (``mail noun|verb``) are resolved from the preceding token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .errors import RuleFileError

POS_TAGS = ("noun", "verb", "adj", "adv", "prep", "det", "pron", "conj", "to", "other")


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str
    feats: frozenset = field(default_factory=frozenset)

    @property
    def proper(self) -> bool:
        return "proper" in self.feats

    def __repr__(self):
        return f"{self.surface}/{self.pos}"


class WordTable:
    """Word-class table plus irregular lemma exceptions."""

    def __init__(self, entries=None, lemmas=None):
        self.entries: dict[str, tuple[tuple[str, ...], frozenset]] = dict(entries or {})
        self.lemmas: dict[str, str] = dict(lemmas or {})

    @classmethod
    def load(cls, words_path, lemmas_path) -> "WordTable":
        entries = {}
        for lineno, raw in enumerate(Path(words_path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise RuleFileError(f"{words_path}:{lineno}: expected 'word pos [feats]'")
            tags = tuple(parts[1].split("|"))
            bad = [t for t in tags if t not in POS_TAGS]
            if bad:
                raise RuleFileError(f"{words_path}:{lineno}: unknown part of speech {bad[0]!r}")
            feats = frozenset(parts[2].split(",")) if len(parts) == 3 else frozenset()
            entries[parts[0].lower()] = (tags, feats)
        lemmas = {}
        for lineno, raw in enumerate(Path(lemmas_path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise RuleFileError(f"{lemmas_path}:{lineno}: expected 'surface lemma'")
            lemmas[parts[0].lower()] = parts[1].lower()
        return cls(entries, lemmas)

    def tags(self, word) -> tuple[str, ...]:
        return self.entries.get(word, ((), frozenset()))[0]

    def feats(self, word) -> frozenset:
        return self.entries.get(word, ((), frozenset()))[1]

    def __contains__(self, word):
        return word in self.entries


@lru_cache(maxsize=None)
def default_word_table() -> WordTable:
    data = Path(__file__).with_name("data")
    return WordTable.load(data / "words.txt", data / "lemmas.txt")


_WORD = re.compile(r"[A-Za-z][A-Za-z'\-]*|\d+|,")


def split_words(sentence: str) -> list[str]:
    # possessive 's is dropped: "Ray's pen" -> Ray pen
    return [w[:-2] if w.endswith("'s") else w for w in _WORD.findall(sentence)]


class Tagger:
    """Tokenizer bound to a word table and a set of dictionary headwords."""

    def __init__(self, table: WordTable | None = None, headwords=None):
        self.table = table or default_word_table()
        self.headwords: dict[str, str] = dict(headwords or {})  # headword -> pos
        self.multiword = sorted(
            (tuple(h.split()) for h in self.headwords if " " in h), key=len, reverse=True
        )

    @classmethod
    def for_lexicon(cls, lex, table=None) -> "Tagger":
        return cls(table, {hw: e.part_of_speech for hw, e in lex.entries.items()})

    def known(self, word) -> bool:
        return word in self.table or word in self.headwords

    def lemmatize(self, word: str) -> str:
        w = word.lower()
        if w in self.table.lemmas:
            return self.table.lemmas[w]
        if self.known(w):
            return w
        found = []
        for suffix, repl in (
            ("ies", "y"), ("ied", "y"), ("es", ""), ("s", ""),
            ("ed", ""), ("ed", "e"), ("ing", ""), ("ing", "e"),
        ):
            if w.endswith(suffix) and len(w) > len(suffix) + 1:
                stem = w[: -len(suffix)] + repl
                found.append((suffix, stem))
                if suffix in ("ed", "ing") and repl == "" and len(stem) > 2 and stem[-1] == stem[-2]:
                    found.append((suffix, stem[:-1]))
        # closed-class words do not inflect: "uses" is not us+es
        found = [(suffix, stem) for suffix, stem in found if self.known(stem) and not self._closed(stem)]
        # "used" is use+d, not us+ed
        for suffix, stem in found:
            if suffix not in ("ed", "ing", "ied") or self._verbal(stem):
                return stem
        if found:
            return found[0][1]
        if w.endswith("s") and not w.endswith("ss") and len(w) > 3:
            return w[:-1]
        return w

    def _closed(self, stem) -> bool:
        tags = self.table.tags(stem)
        return bool(tags) and all(t in _CLOSED for t in tags) and stem not in self.headwords

    def _verbal(self, stem) -> bool:
        return "verb" in self.table.tags(stem) or self.headwords.get(stem) == "verb"

    def _fuse(self, words: list[str]) -> list[str]:
        out, i = [], 0
        while i < len(words):
            for parts in self.multiword:
                n = len(parts)
                chunk = [w.lower() for w in words[i : i + n]]
                if len(chunk) == n and chunk[:-1] == list(parts[:-1]) and (
                    chunk[-1] == parts[-1] or self.lemmatize(chunk[-1]) == parts[-1]
                ):
                    out.append(" ".join(words[i : i + n]))
                    i += n
                    break
            else:
                out.append(words[i])
                i += 1
        return out

    def tokenize(self, sentence: str) -> list[Token]:
        words = self._fuse(split_words(sentence))
        tokens: list[Token] = []
        for w in words:
            tokens.append(self._tag(w, tokens))
        return tokens

    def _tag(self, surface: str, prev: list[Token]) -> Token:
        if surface == ",":
            return Token(",", ",", "conj", frozenset({"comma"}))
        low = surface.lower()
        if " " in low:
            parts = low.split()
            lemma = " ".join(parts[:-1] + [self.lemmatize(parts[-1])])
            return Token(surface, lemma, self._headword_pos(lemma) or "noun")
        table_tags = self.table.tags(low)
        if table_tags and table_tags[0] in ("det", "pron", "prep", "conj", "to") or (
            table_tags == ("verb",) and "aux" in self.table.feats(low)
        ):
            return Token(surface, low, table_tags[0], self.table.feats(low))
        lemma = self.lemmatize(low)
        feats = set(self.table.feats(lemma))
        if lemma in self.table.lemmas.values() and "aux" in self.table.feats(lemma):
            return Token(surface, lemma, "verb", frozenset(feats))
        if surface[0].isupper() and not self.known(lemma) and not self.known(low):
            return Token(surface, low, "noun", frozenset(feats | {"proper"}))
        tags = self.table.tags(lemma) or self.table.tags(low)
        hw_pos = self._headword_pos(lemma)
        inflected = low != lemma
        if inflected and (low.endswith("ed") or low.endswith("ing") or low in self.table.lemmas):
            if "verb" in tags or hw_pos == "verb":
                if low.endswith("ed") or low in _PARTICIPLES:
                    feats.add("participle")
                return Token(surface, lemma, "verb", frozenset(feats))
        if len(tags) > 1 or (hw_pos and tags and hw_pos not in tags):
            options = tuple(dict.fromkeys((*tags, *( [hw_pos] if hw_pos else []))))
            return Token(surface, lemma, self._disambiguate(options, prev), frozenset(feats))
        if tags:
            return Token(surface, lemma, tags[0], frozenset(feats))
        if hw_pos:
            return Token(surface, lemma, hw_pos, frozenset(feats))
        if low.endswith("ly") and len(low) > 4:
            return Token(surface, low, "adv", frozenset(feats))
        return Token(surface, lemma, "noun", frozenset(feats))

    def _headword_pos(self, lemma):
        pos = self.headwords.get(lemma)
        if pos == "other":
            return None
        return pos

    def _disambiguate(self, options, prev: list[Token]) -> str:
        if "noun" not in options or "verb" not in options:
            return options[0]
        if not prev:
            return "noun"
        p = prev[-1]
        if p.pos in ("det", "adj", "prep") or "poss" in p.feats:
            return "noun"
        if p.pos == "to" or p.pos == "pron" and ("person" in p.feats or "anaphor" in p.feats):
            return "verb"
        if p.pos == "verb" and "aux" in p.feats and "copula" not in p.feats:
            return "verb"
        if p.pos == "adv":
            return "verb"
        clause = prev
        for k in range(len(prev) - 1, -1, -1):
            if prev[k].pos == "conj" or "rel" in prev[k].feats:
                clause = prev[k + 1 :]
                break
        if p.pos == "noun" and not any(t.pos == "verb" for t in clause):
            return "verb"
        if p.pos == "conj" and any(t.pos == "verb" for t in prev):
            before = [t for t in prev[:-1] if t.pos in ("noun", "verb")]
            if before and before[-1].pos == "verb":
                return "verb"
        return "noun"


_CLOSED = frozenset({"det", "pron", "prep", "conj", "to"})

_PARTICIPLES = frozenset(
    "sent made left written drawn eaten grown gone brought bought put kept held given "
    "taken found told read burnt flown worn stuck".split()
)


def tokenize_and_tag(sentence: str, lex=None, table: WordTable | None = None) -> list[Token]:
    """Tokenize and tag one sentence, using ``lex`` headwords when given."""
    tagger = Tagger.for_lexicon(lex, table) if lex is not None else Tagger(table)
    return tagger.tokenize(sentence)
