"""Reading and writing the line-oriented ``.abd`` instance format.

Example::

    p abd 5
    h 1 1 2 3 4 0
    m 5 0
    -1 5 0

Lines are ``c`` comments, the ``p abd N`` header, ``n var name`` names,
``h class vars 0`` hypothesis classes, the ``m vars 0`` manifestations,
``w var weight`` penalties and DIMACS clauses.  A candidate explanation
travels in a ``c candidate vars 0`` comment so plain DIMACS tools skip it.
"""

from __future__ import annotations

from typing import Iterable

from .core import AbductionInstance, HypothesisSpace, Theory, clause_key, validate_instance


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


def _ints(tokens: list, lineno: int, terminated: bool = True) -> list:
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None
    if terminated:
        if not values or values[-1] != 0:
            raise ParseError("line must end with 0", lineno)
        values = values[:-1]
        if 0 in values:
            raise ParseError("0 may only terminate a line", lineno)
    return values


def parse_instance(text: str) -> AbductionInstance:
    """Parse an ``.abd`` document and validate the resulting instance."""
    nvars = None
    names: dict = {}
    classes: dict = {}
    manifestations = None
    weights: dict = {}
    candidate = None
    clauses = []

    def check_var(v: int, lineno: int) -> int:
        if nvars is None:
            raise ParseError("data before the 'p abd' header", lineno)
        if not 1 <= abs(v) <= nvars:
            raise ParseError(f"variable {abs(v)} outside 1..{nvars}", lineno)
        return v

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens:
            continue
        head = tokens[0]
        if head == "c":
            if len(tokens) > 1 and tokens[1] == "candidate":
                if candidate is not None:
                    raise ParseError("duplicate candidate line", lineno)
                candidate = [check_var(v, lineno) for v in _ints(tokens[2:], lineno)]
            continue
        if head == "p":
            if nvars is not None:
                raise ParseError("duplicate header", lineno)
            if len(tokens) != 3 or tokens[1] != "abd":
                raise ParseError("header must read 'p abd <nvars>'", lineno)
            nvars = _ints(tokens[2:], lineno, terminated=False)[0]
            if nvars < 0:
                raise ParseError("negative variable count", lineno)
        elif head == "n":
            if len(tokens) != 3:
                raise ParseError("name line must read 'n <var> <name>'", lineno)
            v = check_var(_ints(tokens[1:2], lineno, terminated=False)[0], lineno)
            if v < 0:
                raise ParseError("names attach to variables, not literals", lineno)
            if tokens[2] in names.values() and names.get(v) != tokens[2]:
                raise ParseError(f"name {tokens[2]!r} used twice", lineno)
            names[v] = tokens[2]
        elif head == "h":
            values = _ints(tokens[1:], lineno)
            if not values or values[0] < 1:
                raise ParseError("class line needs a class index >= 1", lineno)
            index, members = values[0], values[1:]
            if index in classes:
                raise ParseError(f"class {index} given twice", lineno)
            if any(check_var(v, lineno) < 0 for v in members):
                raise ParseError("hypotheses must be positive ids", lineno)
            classes[index] = members
        elif head == "m":
            if manifestations is not None:
                raise ParseError("duplicate manifestation line", lineno)
            manifestations = _ints(tokens[1:], lineno)
            if any(check_var(v, lineno) < 0 for v in manifestations):
                raise ParseError("manifestations must be positive ids", lineno)
        elif head == "w":
            values = _ints(tokens[1:], lineno, terminated=False)
            if len(values) != 2:
                raise ParseError("weight line must read 'w <var> <weight>'", lineno)
            v = check_var(values[0], lineno)
            if v in weights:
                raise ParseError(f"weight for {v} given twice", lineno)
            weights[v] = values[1]
        else:
            clauses.append([check_var(v, lineno) for v in _ints(tokens, lineno)])

    if nvars is None:
        raise ParseError("no header line")
    if manifestations is None:
        raise ParseError("no manifestation line")
    if classes and sorted(classes) != list(range(1, len(classes) + 1)):
        raise ParseError(f"class indexes must be 1..{len(classes)}")
    ordered = tuple(frozenset(classes[i]) for i in sorted(classes)) or (frozenset(),)
    raw = AbductionInstance(
        hypotheses=HypothesisSpace(classes=ordered, weights=weights or None),
        manifestations=frozenset(manifestations),
        theory=Theory.of(clauses),
        candidate=None if candidate is None else frozenset(candidate),
        names=names,
    )
    return validate_instance(raw)


def _line(prefix: Iterable, values: Iterable[int]) -> str:
    return " ".join([*map(str, prefix), *map(str, values), "0"])


def serialize_instance(
    instance: AbductionInstance,
    names: bool = False,
    comments: Iterable[str] = (),
) -> str:
    """Canonical text: header, classes, manifestations, weights, clauses.

    Symbolic names are written only when ``names`` is set, so the default
    output depends on the integer structure alone.
    """
    out = [f"c {c}" if c else "c" for c in comments]
    out.append(f"p abd {instance.nvars}")
    if names:
        out.extend(f"n {v} {n}" for v, n in sorted(instance.names.items()))
    for i, cls in enumerate(instance.classes, start=1):
        out.append(_line(["h", i], sorted(cls)))
    out.append(_line(["m"], sorted(instance.M)))
    if instance.weights is not None:
        out.extend(f"w {v} {w}" for v, w in sorted(instance.weights.items()))
    if instance.candidate is not None:
        out.append(_line(["c", "candidate"], sorted(instance.candidate)))
    for clause in sorted(instance.theory, key=clause_key):
        out.append(_line([], clause))
    return "\n".join(out) + "\n"


def read_instance(path) -> AbductionInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(instance: AbductionInstance, path, names: bool = True, comments: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(instance, names=names, comments=comments))
