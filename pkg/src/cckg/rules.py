"""Loading of formula, syntax and derivational rules from the rule file."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .errors import NotationError, RuleFileError
from .graph import ConceptualGraph, parse_linear

SLOT = re.compile(r"^\[([A-Z])\]$")


@dataclass(frozen=True)
class FormulaRule:
    pattern: tuple[str, ...]  # literal atoms ("is|are") and slot atoms ("[A]")
    emit: str
    template: ConceptualGraph = field(compare=False, repr=False)

    @property
    def slots(self) -> list[str]:
        return [SLOT.match(a).group(1) for a in self.pattern if SLOT.match(a)]

    @property
    def literal_count(self) -> int:
        return sum(1 for a in self.pattern if not SLOT.match(a))


@dataclass(frozen=True)
class SyntaxRule:
    lhs: str
    emit: str
    template: ConceptualGraph = field(compare=False, repr=False)


@dataclass(frozen=True)
class DerivationalRule:
    lemma: str
    # either another lemma, or a graph whose first node replaces ``lemma``
    other: str | None = None
    template: ConceptualGraph | None = field(default=None, compare=False, repr=False)
    emit: str | None = None

    @property
    def shifted_head(self) -> str | None:
        if self.template is None:
            return None
        return self.template.nodes[0].type_label


@dataclass
class RuleSet:
    formulas: list[FormulaRule] = field(default_factory=list)
    syntax: list[SyntaxRule] = field(default_factory=list)
    derivations: list[DerivationalRule] = field(default_factory=list)

    def syntax_rule(self, lhs: str) -> SyntaxRule | None:
        for r in self.syntax:
            if r.lhs == lhs:
                return r
        return None

    def syntax_order(self, lhs: str) -> int:
        for i, r in enumerate(self.syntax):
            if r.lhs == lhs:
                return i
        return len(self.syntax)


def _template(text, where):
    try:
        return parse_linear(text)
    except NotationError as exc:
        raise RuleFileError(f"{where}: bad template: {exc}") from None


_LINE = re.compile(r'^(formula|syntax):\s*"([^"]+)"\s*=>\s*(.+)$')


def parse_rules(text: str, source: str = "<rules>") -> RuleSet:
    rules = RuleSet()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{source}:{lineno}"
        if line.startswith("derive:"):
            body = line[len("derive:"):]
            if "<=>" not in body:
                raise RuleFileError(f"{where}: derive rule needs '<=>'")
            left, right = (x.strip() for x in body.split("<=>", 1))
            if right.startswith("["):
                rules.derivations.append(
                    DerivationalRule(left, template=_template(right, where), emit=right)
                )
            else:
                rules.derivations.append(DerivationalRule(left, other=right))
            continue
        m = _LINE.match(line)
        if not m:
            raise RuleFileError(f"{where}: cannot parse rule {raw!r}")
        kind, lhs, emit = m.group(1), m.group(2).strip(), m.group(3).strip()
        template = _template(emit, where)
        if kind == "formula":
            pattern = tuple(a.upper() if SLOT.match(a.upper()) else a for a in lhs.lower().split())
            names = [SLOT.match(a).group(1) for a in pattern if SLOT.match(a)]
            if len(set(names)) != len(names):
                raise RuleFileError(f"{where}: a slot appears twice in the pattern")
            used = {n.type_label for n in template.nodes.values()}
            used |= {a for n in template.nodes.values() for a in n.aliases}
            undeclared = {u for u in used if len(u) == 1 and u.isupper() and u not in names}
            if undeclared:
                raise RuleFileError(f"{where}: template uses undeclared slot {sorted(undeclared)[0]}")
            rules.formulas.append(FormulaRule(pattern, emit, template))
        else:
            if not template.edges:
                raise RuleFileError(f"{where}: syntax templates must emit a relation")
            rules.syntax.append(SyntaxRule(lhs, emit, template))
    return rules


def load_rules(path) -> RuleSet:
    path = Path(path)
    return parse_rules(path.read_text(encoding="utf-8"), str(path))


@lru_cache(maxsize=None)
def default_rules() -> RuleSet:
    return load_rules(Path(__file__).with_name("data") / "rules.txt")
