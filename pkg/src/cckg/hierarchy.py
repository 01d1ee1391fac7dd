"""Multi-parent subsumption hierarchies for concept and relation types.

File format, one statement per line::

    child < parent      # subsumption link
    alias = canonical   # label alias, resolved on every lookup
    label               # bare label: declares a node (used for roots)

``#`` starts a comment.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Mapping

from .errors import HierarchyCycleError, RuleFileError, UnknownLabelError

COVERT_PREFIX = "label-"


class Hierarchy:
    def __init__(self, name: str = "concept"):
        self.name = name
        self.parents: dict[str, set[str]] = {}
        self.aliases: dict[str, str] = {}
        self.covert_counter = 0
        self.covert: dict[str, tuple[frozenset[str], str]] = {}
        self._version = 0
        self._cache: dict = {}

    # structure ----------------------------------------------------------

    @property
    def nodes(self) -> set[str]:
        return set(self.parents)

    @property
    def parent_links(self) -> set[tuple[str, str]]:
        return {(c, p) for c, ps in self.parents.items() for p in ps}

    @property
    def roots(self) -> set[str]:
        return {label for label, ps in self.parents.items() if not ps}

    def canonical(self, label: str) -> str:
        return self.aliases.get(label, label)

    def __contains__(self, label) -> bool:
        return self.canonical(label) in self.parents

    def __len__(self):
        return len(self.parents)

    def _touch(self):
        self._version += 1
        self._cache.clear()

    def _require(self, label) -> str:
        label = self.canonical(label)
        if label not in self.parents:
            raise UnknownLabelError(label, self.name)
        return label

    def add(self, label: str) -> str:
        label = self.canonical(label)
        if label not in self.parents:
            self.parents[label] = set()
            self._touch()
        return label

    def add_alias(self, alias: str, canonical: str):
        self.aliases[alias] = canonical
        self._touch()

    def add_link(self, child: str, parent: str):
        child, parent = self.add(child), self.add(parent)
        if parent in self.parents[child]:
            return
        if child == parent or self.subsumes(child, parent):
            raise HierarchyCycleError(f"{child} < {parent} would create a cycle")
        self.parents[child].add(parent)
        self._touch()

    def children(self, label) -> set[str]:
        label = self._require(label)
        return {c for c, ps in self.parents.items() if label in ps}

    def ancestors(self, label) -> set[str]:
        """All labels subsuming ``label``, itself included."""
        label = self._require(label)
        key = ("anc", label)
        if key not in self._cache:
            seen = {label}
            stack = [label]
            while stack:
                for p in self.parents[stack.pop()]:
                    if p not in seen:
                        seen.add(p)
                        stack.append(p)
            self._cache[key] = frozenset(seen)
        return set(self._cache[key])

    def descendants(self, label) -> set[str]:
        label = self._require(label)
        key = ("desc", label)
        if key not in self._cache:
            kids = {}
            for c, ps in self.parents.items():
                for p in ps:
                    kids.setdefault(p, []).append(c)
            seen = {label}
            stack = [label]
            while stack:
                for c in kids.get(stack.pop(), ()):
                    if c not in seen:
                        seen.add(c)
                        stack.append(c)
            self._cache[key] = frozenset(seen)
        return set(self._cache[key])

    def subsumes(self, ancestor: str, descendant: str) -> bool:
        ancestor = self._require(ancestor)
        return ancestor in self.ancestors(descendant)

    # informativeness ----------------------------------------------------

    def information_content(self, label: str, counts: Mapping[str, int] | None = None) -> float:
        """Resnik-style content of a type: -ln of the share of its root's mass it subsumes.

        Every label carries weight ``count + 1`` (or 1 without counts), so roots
        score exactly 0 and unseen leaves stay finite.
        """
        label = self._require(label)

        def mass(c):
            return sum((counts.get(d, 0) if counts else 0) + 1 for d in self.descendants(c))

        top = [a for a in self.ancestors(label) if not self.parents[a]]
        total = max(mass(r) for r in top)
        return -math.log(mass(label) / total)

    def least_common_subsumer(
        self, a: str, b: str, ic: Callable[[str], float] | None = None
    ) -> str | None:
        """Most informative common ancestor; ties go to the lexicographically first label."""
        a, b = self._require(a), self._require(b)
        if a == b:
            return a
        common = self.ancestors(a) & self.ancestors(b)
        if not common:
            return None
        score = ic or self.information_content
        return min(common, key=lambda c: (-score(c), c))

    def add_covert_category(self, subclasses: Iterable[str], superclass: str) -> str:
        subs = frozenset(self._require(s) for s in subclasses)
        if not subs:
            raise ValueError("a covert category needs at least one subclass")
        superclass = self._require(superclass)
        for label, (kids, parent) in self.covert.items():
            if kids == subs and parent == superclass:
                return label
        self.covert_counter += 1
        label = f"{COVERT_PREFIX}{self.covert_counter}"
        while label in self.parents:
            self.covert_counter += 1
            label = f"{COVERT_PREFIX}{self.covert_counter}"
        self.add_link(label, superclass)
        for s in sorted(subs):
            self.add_link(s, label)
        self.covert[label] = (subs, superclass)
        return label

    # persistence --------------------------------------------------------

    def dumps(self) -> str:
        lines = [f"# {self.name} hierarchy"]
        for alias in sorted(self.aliases):
            lines.append(f"{alias} = {self.aliases[alias]}")
        for label in sorted(self.parents):
            ps = self.parents[label]
            if not ps:
                lines.append(label)
            for p in sorted(ps):
                lines.append(f"{label} < {p}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, name: str = "concept") -> "Hierarchy":
        h = cls(name)
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                if "<" in line:
                    child, parent = (x.strip() for x in line.split("<"))
                    if not child or not parent:
                        raise ValueError
                    h.add_link(child, parent)
                elif "=" in line:
                    alias, canonical = (x.strip() for x in line.split("="))
                    if not alias or not canonical:
                        raise ValueError
                    h.add_alias(alias, canonical)
                else:
                    h.add(line)
            except ValueError:
                raise RuleFileError(f"line {lineno}: cannot parse hierarchy statement {raw!r}")
            except HierarchyCycleError as exc:
                raise RuleFileError(f"line {lineno}: {exc}") from None
        return h

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "links": sorted([c, p] for c, p in self.parent_links),
            "nodes": sorted(self.parents),
            "aliases": dict(sorted(self.aliases.items())),
            "covert_counter": self.covert_counter,
            "covert": {
                label: {"children": sorted(kids), "parent": parent}
                for label, (kids, parent) in sorted(self.covert.items())
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Hierarchy":
        h = cls(data.get("name", "concept"))
        for label in data.get("nodes", ()):
            h.add(label)
        for child, parent in data.get("links", ()):
            h.add_link(child, parent)
        for alias, canonical in data.get("aliases", {}).items():
            h.add_alias(alias, canonical)
        h.covert_counter = data.get("covert_counter", 0)
        for label, rec in data.get("covert", {}).items():
            h.covert[label] = (frozenset(rec["children"]), rec["parent"])
        return h

    def __eq__(self, other):
        return isinstance(other, Hierarchy) and self.to_dict() == other.to_dict()


def informativeness(lex, word: str) -> float:
    """-ln(count/total) over the definition corpus, unseen words counted once."""
    count = lex.counts.get(word, 0) or 1
    total = max(lex.total_count, count)
    return -math.log(count / total)


def concept_informativeness(h: Hierarchy, lex, label: str) -> float:
    return h.information_content(label, lex.counts if lex is not None else None)
