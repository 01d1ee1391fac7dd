"""Exception types raised across the package."""


class CCKGError(Exception):
    """Base class for all package errors."""


class UnknownLabelError(CCKGError, KeyError):
    def __init__(self, label, hierarchy=None):
        self.label = label
        where = f" in {hierarchy} hierarchy" if hierarchy else ""
        super().__init__(f"unknown label {label!r}{where}")

    def __str__(self):
        return self.args[0]


class HierarchyCycleError(CCKGError):
    pass


class MalformedEntryError(CCKGError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class DuplicateHeadwordError(MalformedEntryError):
    pass


class NotationError(CCKGError):
    """Raised for text that is not valid linear conceptual-graph notation."""


class RuleFileError(CCKGError):
    pass


class GraphError(CCKGError):
    """Structural violation inside a conceptual graph (dangling edge, bad mapping)."""


class MatchBudgetExceeded(CCKGError):
    """The subgraph search ran out of budget; ``result`` holds the best match found."""

    def __init__(self, result):
        self.result = result
        super().__init__(
            f"match budget exhausted; best-so-far size {result.size} is not guaranteed maximal"
        )


class UnknownTriggerError(CCKGError, KeyError):
    def __init__(self, word):
        self.word = word
        super().__init__(f"{word!r} is not a dictionary headword")

    def __str__(self):
        return self.args[0]


class LkbFormatError(CCKGError):
    def __init__(self, message, offset=None):
        self.offset = offset
        suffix = f" (at byte {offset})" if offset is not None else ""
        super().__init__(message + suffix)


class VersionMismatchError(LkbFormatError):
    pass
