"""Class-diagram data model and parser for a compact textual diagram language.

The language is line-oriented with a familiar arrow vocabulary:

    diagram Name
    package core {
      class Book @ (20, 30) { attr title; op reserve() }
      interface Searchable
    }
    Author --> Book : writes          // association
    Parent <|-- Child                 // inheritance (child on the right)
    Iface <|.. Impl                   // realization (implementer on the right)
    Client ..> Service                // dependency
    Whole o-- Part                    // aggregation
    Whole *-- Part                    // composition
    (Member, Book) .. Loan            // association class

Statements end at a newline or ';'; '//' starts a comment. Positions are
optional layout coordinates in [0, 100] x [0, 100]; assign_layout fills in a
deterministic grid for anything unpositioned.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

RELATIONSHIP_KINDS = (
    "association",
    "inheritance",
    "realization",
    "dependency",
    "aggregation",
    "composition",
    "association_class",
)

#: Arrow token -> (kind, source side). "right" means the right-hand
#: classifier is the relationship source (child/implementer conventions).
_ARROWS = {
    "-->": ("association", "left"),
    "<|--": ("inheritance", "right"),
    "<|..": ("realization", "right"),
    "..>": ("dependency", "left"),
    "o--": ("aggregation", "left"),
    "*--": ("composition", "left"),
}

_REL_TO_CONCEPT = {
    "association": "Association",
    "inheritance": "Inheritance",
    "realization": "Realization",
    "dependency": "Dependency",
    "aggregation": "Aggregation",
    "composition": "Composition",
    "association_class": "AssociationClass",
}


class DiagramParseError(Exception):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def __post_init__(self):
        if not (0.0 <= self.x <= 100.0 and 0.0 <= self.y <= 100.0):
            raise ValueError(f"position ({self.x}, {self.y}) out of [0, 100] bounds")


@dataclass(frozen=True)
class Attribute:
    name: str


@dataclass(frozen=True)
class Operation:
    name: str


@dataclass(frozen=True)
class Classifier:
    name: str
    kind: str  # "class" | "interface"
    attributes: tuple[Attribute, ...] = ()
    operations: tuple[Operation, ...] = ()
    package_path: tuple[str, ...] = ()
    position: Position | None = None
    decl_index: int = 0


@dataclass(frozen=True)
class Package:
    name: str
    path: tuple[str, ...]
    decl_index: int = 0

    @property
    def depth(self) -> int:
        return len(self.path)


@dataclass(frozen=True)
class Relationship:
    kind: str
    source: str
    target: str
    assoc_class: str | None = None
    label: str | None = None
    decl_index: int = 0

    def __post_init__(self):
        if self.kind not in RELATIONSHIP_KINDS:
            raise ValueError(f"unknown relationship kind {self.kind!r}")
        if (self.kind == "association_class") != (self.assoc_class is not None):
            raise ValueError("assoc_class is set exactly for association_class relationships")

    @property
    def concept_id(self) -> str:
        return _REL_TO_CONCEPT[self.kind]


@dataclass(frozen=True)
class ClassModel:
    name: str
    packages: tuple[Package, ...]
    classifiers: tuple[Classifier, ...]
    relationships: tuple[Relationship, ...]

    def classifier(self, name: str) -> Classifier:
        for c in self.classifiers:
            if c.name == name:
                return c
        raise KeyError(name)

    def package(self, path: tuple[str, ...]) -> Package:
        for p in self.packages:
            if p.path == path:
                return p
        raise KeyError(path)


# --- tokenizer -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<comment>//[^\n]*)
  | (?P<newline>\n)
  | (?P<arrow><\|--|<\|\.\.|-->|\.\.>|o--|\*--|\.\.)
  | (?P<number>-?\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[{}();,:@])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DiagramParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        value = m.group()
        if kind == "newline":
            tokens.append(_Token("newline", value, line, pos - line_start + 1))
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(_Token(kind, value, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.diagram_name = "untitled"
        self.packages: list[Package] = []
        self.classifiers: list[Classifier] = []
        self.raw_relationships: list[tuple] = []
        self.decl_counter = 0

    # token helpers -----------------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> _Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            raise DiagramParseError(f"expected {want!r}, found {t.text or t.kind!r}", t.line, t.column)
        return self.next()

    def skip_separators(self):
        while self.peek().kind == "newline" or (
            self.peek().kind == "sym" and self.peek().text == ";"
        ):
            self.next()

    # grammar -----------------------------------------------------------------

    def parse(self) -> ClassModel:
        self.skip_separators()
        if self.peek().kind == "ident" and self.peek().text == "diagram":
            self.next()
            self.diagram_name = self.expect("ident").text
            self.skip_separators()
        self.parse_scope(package_path=())
        t = self.peek()
        if t.kind != "eof":
            raise DiagramParseError(f"unexpected {t.text!r}", t.line, t.column)
        return self._build()

    def parse_scope(self, package_path: tuple[str, ...]):
        while True:
            self.skip_separators()
            t = self.peek()
            if t.kind == "eof" or (t.kind == "sym" and t.text == "}"):
                return
            if t.kind == "ident" and t.text == "package":
                self.parse_package(package_path)
            elif t.kind == "ident" and t.text in ("class", "interface"):
                self.parse_classifier(package_path)
            elif t.kind == "sym" and t.text == "(":
                self.parse_association_class()
            elif t.kind == "ident":
                self.parse_relationship()
            else:
                raise DiagramParseError(f"unexpected {t.text!r}", t.line, t.column)

    def parse_package(self, package_path):
        self.expect("ident", "package")
        name_tok = self.expect("ident")
        path = package_path + (name_tok.text,)
        if any(p.path == path for p in self.packages):
            raise DiagramParseError(
                f"duplicate package {'.'.join(path)!r}", name_tok.line, name_tok.column
            )
        self.packages.append(Package(name_tok.text, path, self.decl_counter))
        self.decl_counter += 1
        self.skip_separators()
        self.expect("sym", "{")
        self.parse_scope(path)
        self.expect("sym", "}")

    def parse_classifier(self, package_path):
        kind = self.next().text
        name_tok = self.expect("ident")
        for c in self.classifiers:
            if c.name == name_tok.text and c.package_path == package_path:
                raise DiagramParseError(
                    f"duplicate classifier {name_tok.text!r}", name_tok.line, name_tok.column
                )
        position = None
        if self.peek().kind == "sym" and self.peek().text == "@":
            self.next()
            self.expect("sym", "(")
            x_tok = self.expect("number")
            self.expect("sym", ",")
            y_tok = self.expect("number")
            self.expect("sym", ")")
            try:
                position = Position(float(x_tok.text), float(y_tok.text))
            except ValueError as exc:
                raise DiagramParseError(str(exc), x_tok.line, x_tok.column) from None
        attributes: list[Attribute] = []
        operations: list[Operation] = []
        if self.peek().kind == "sym" and self.peek().text == "{":
            self.next()
            while True:
                self.skip_separators()
                t = self.peek()
                if t.kind == "sym" and t.text == "}":
                    self.next()
                    break
                if t.kind == "ident" and t.text == "attr":
                    self.next()
                    attributes.append(Attribute(self.expect("ident").text))
                elif t.kind == "ident" and t.text == "op":
                    self.next()
                    op_name = self.expect("ident").text
                    self.expect("sym", "(")
                    self.expect("sym", ")")
                    operations.append(Operation(op_name))
                else:
                    raise DiagramParseError(
                        f"expected 'attr' or 'op', found {t.text or t.kind!r}", t.line, t.column
                    )
        self.classifiers.append(
            Classifier(
                name=name_tok.text,
                kind=kind,
                attributes=tuple(attributes),
                operations=tuple(operations),
                package_path=package_path,
                position=position,
                decl_index=self.decl_counter,
            )
        )
        self.decl_counter += 1

    def parse_relationship(self):
        left_tok = self.expect("ident")
        arrow_tok = self.peek()
        if arrow_tok.kind != "arrow" or arrow_tok.text not in _ARROWS:
            raise DiagramParseError(
                f"expected a relationship arrow after {left_tok.text!r}, "
                f"found {arrow_tok.text or arrow_tok.kind!r}",
                arrow_tok.line,
                arrow_tok.column,
            )
        self.next()
        right_tok = self.expect("ident")
        label = self._optional_label()
        kind, source_side = _ARROWS[arrow_tok.text]
        if source_side == "left":
            source, target = left_tok.text, right_tok.text
        else:
            source, target = right_tok.text, left_tok.text
        self.raw_relationships.append(
            (kind, source, target, None, label, arrow_tok.line, arrow_tok.column)
        )

    def parse_association_class(self):
        open_tok = self.expect("sym", "(")
        a = self.expect("ident").text
        self.expect("sym", ",")
        b = self.expect("ident").text
        self.expect("sym", ")")
        self.expect("arrow", "..")
        c = self.expect("ident").text
        label = self._optional_label()
        self.raw_relationships.append(
            ("association_class", a, b, c, label, open_tok.line, open_tok.column)
        )

    def _optional_label(self) -> str | None:
        if self.peek().kind == "sym" and self.peek().text == ":":
            self.next()
            words = []
            while self.peek().kind in ("ident", "number"):
                words.append(self.next().text)
            if not words:
                t = self.peek()
                raise DiagramParseError("expected a label after ':'", t.line, t.column)
            return " ".join(words)
        return None

    # resolution ----------------------------------------------------------------

    def _resolve(self, name: str, line: int, column: int) -> Classifier:
        matches = [c for c in self.classifiers if c.name == name]
        if not matches:
            raise DiagramParseError(f"unresolved classifier {name!r}", line, column)
        if len(matches) > 1:
            raise DiagramParseError(
                f"classifier name {name!r} is ambiguous across packages", line, column
            )
        return matches[0]

    def _build(self) -> ClassModel:
        relationships = []
        for index, (kind, src, tgt, assoc, label, line, column) in enumerate(
            self.raw_relationships
        ):
            source = self._resolve(src, line, column)
            target = self._resolve(tgt, line, column)
            assoc_name = None
            if assoc is not None:
                assoc_name = self._resolve(assoc, line, column).name
            if kind == "realization" and target.kind != "interface":
                raise DiagramParseError(
                    f"realization target {target.name!r} must be an interface", line, column
                )
            relationships.append(
                Relationship(kind, source.name, target.name, assoc_name, label, index)
            )
        return ClassModel(
            name=self.diagram_name,
            packages=tuple(self.packages),
            classifiers=tuple(self.classifiers),
            relationships=tuple(relationships),
        )


def parse_diagram(text: str) -> ClassModel:
    """Parse the textual language; the first error is reported with its
    line and column, no recovery is attempted."""
    return _Parser(text).parse()


def serialize_diagram(model: ClassModel) -> str:
    """Canonical text form; parse(serialize(m)) equals m up to formatting."""
    lines = [f"diagram {model.name}"]

    def members(c: Classifier) -> str:
        parts = [f"attr {a.name}" for a in c.attributes]
        parts += [f"op {o.name}()" for o in c.operations]
        return " { " + "; ".join(parts) + " }" if parts else ""

    def position(c: Classifier) -> str:
        if c.position is None:
            return ""
        return f" @ ({c.position.x:g}, {c.position.y:g})"

    def emit_scope(path: tuple[str, ...], indent: str):
        entries: list[tuple[int, str, object]] = []
        for p in model.packages:
            if p.path[:-1] == path and len(p.path) == len(path) + 1:
                entries.append((p.decl_index, "package", p))
        for c in model.classifiers:
            if c.package_path == path:
                entries.append((c.decl_index, "classifier", c))
        for _, what, obj in sorted(entries):
            if what == "package":
                lines.append(f"{indent}package {obj.name} {{")
                emit_scope(obj.path, indent + "  ")
                lines.append(f"{indent}}}")
            else:
                lines.append(f"{indent}{obj.kind} {obj.name}{position(obj)}{members(obj)}")

    emit_scope((), "")
    arrow_for = {kind: arrow for arrow, (kind, _) in _ARROWS.items()}
    for r in sorted(model.relationships, key=lambda r: r.decl_index):
        suffix = f" : {r.label}" if r.label else ""
        if r.kind == "association_class":
            lines.append(f"({r.source}, {r.target}) .. {r.assoc_class}{suffix}")
            continue
        arrow = arrow_for[r.kind]
        if _ARROWS[arrow][1] == "left":
            lines.append(f"{r.source} {arrow} {r.target}{suffix}")
        else:
            lines.append(f"{r.target} {arrow} {r.source}{suffix}")
    return "\n".join(lines) + "\n"


def assign_layout(model: ClassModel) -> ClassModel:
    """Give unpositioned classifiers deterministic grid positions.

    The grid is row-major over declaration order, with cell centres chosen to
    fill the [0, 100] square; fully positioned models pass through unchanged.
    """
    unpositioned = [c for c in model.classifiers if c.position is None]
    if not unpositioned:
        return model
    n = len(unpositioned)
    cols = math.ceil(math.sqrt(n))
    rows = math.ceil(n / cols)
    by_name = {}
    for i, c in enumerate(sorted(unpositioned, key=lambda c: c.decl_index)):
        row, col = divmod(i, cols)
        by_name[c.name] = Position(
            x=(col + 0.5) * 100.0 / cols,
            y=(row + 0.5) * 100.0 / rows,
        )
    classifiers = tuple(
        replace(c, position=by_name[c.name]) if c.name in by_name else c
        for c in model.classifiers
    )
    return replace(model, classifiers=classifiers)


def model_stats(model: ClassModel) -> dict[str, int]:
    stats = {
        "classifiers": len(model.classifiers),
        "classes": sum(1 for c in model.classifiers if c.kind == "class"),
        "interfaces": sum(1 for c in model.classifiers if c.kind == "interface"),
        "attributes": sum(len(c.attributes) for c in model.classifiers),
        "operations": sum(len(c.operations) for c in model.classifiers),
        "packages": len(model.packages),
        "max_package_depth": max((p.depth for p in model.packages), default=0),
    }
    for kind in RELATIONSHIP_KINDS:
        stats[kind] = sum(1 for r in model.relationships if r.kind == kind)
    return stats
