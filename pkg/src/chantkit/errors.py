"""Exception types shared across the toolkit."""


class ChantkitError(Exception):
    """Base class for all toolkit errors."""


class DuplicateIdentifier(ChantkitError):
    def __init__(self, kind: str, value: str):
        self.kind = kind
        self.value = value
        super().__init__(f"duplicate {kind}: {value!r}")


class ValidationFailed(ChantkitError):
    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__(f"{len(self.errors)} validation error(s): " + "; ".join(self.errors[:5]))


class CorpusLocked(ChantkitError):
    def __init__(self, detail: str = "corpus is locked"):
        super().__init__(detail)


class MalformedCsv(ChantkitError):
    pass


class MissingColumn(ChantkitError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"required column missing from header: {name!r}")


class UnknownField(ChantkitError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown field: {name!r}")


class BadRange(ChantkitError):
    pass


class FilterSyntaxError(ChantkitError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyCandidateSet(ChantkitError):
    pass


class MissingConcordanceEntry(ChantkitError):
    def __init__(self, siglum: str):
        self.siglum = siglum
        super().__init__(f"no concordance entry for siglum {siglum!r}")
