"""Lightweight Java source analysis.

Parses a supported Java subset (classes, methods, statements, expressions;
annotations and generics are tokenized but not resolved) into method models:
every word token is tagged with one of nine code areas, a name+arity call
graph is built across the project, and the metrics driving method
categorization are computed.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from pathlib import Path


class CodeArea(IntEnum):
    """The nine code areas, in fixed priority order (1 = highest)."""

    MethodNameReturn = 1
    Parameters = 2
    EndingUnits = 3
    MethodInvocations = 4
    Branches = 5
    Loops = 6
    Assignments = 7
    LocalVariables = 8
    ErrorHandling = 9


class ReturnClass(str, Enum):
    vector = "vector"
    boolean = "boolean"
    numeric = "numeric"
    string = "string"
    object = "object"
    void = "void"


class Stereotype(str, Enum):
    accessor = "accessor"
    mutator = "mutator"
    collaborator = "collaborator"
    command = "command"


class MethodCategory(str, Enum):
    loc_small = "loc_small"
    loc_medium = "loc_medium"
    loc_large = "loc_large"
    params_none = "params_none"
    params_1to3 = "params_1to3"
    params_gt3 = "params_gt3"
    ret_vector = "ret_vector"
    ret_boolean = "ret_boolean"
    ret_numeric = "ret_numeric"
    ret_string = "ret_string"
    ret_object = "ret_object"
    high_fan_in = "high_fan_in"
    high_fan_out = "high_fan_out"
    stereo_interacting = "stereo_interacting"
    stereo_command = "stereo_command"
    stereo_collaborator = "stereo_collaborator"
    static_method = "static_method"


RESERVED = {
    "abstract", "assert", "boolean", "break", "byte", "case", "char", "class",
    "const", "continue", "default", "do", "double", "else", "enum", "extends",
    "final", "finally", "float", "for", "goto", "if", "implements", "import",
    "instanceof", "int", "interface", "long", "native", "new", "package",
    "private", "protected", "public", "return", "short", "static", "strictfp",
    "super", "switch", "synchronized", "this", "throw", "throws", "transient",
    "try", "void", "volatile", "while", "catch",
}

# reserved words that still enter keyword bags (error-area markers, literals)
KEPT_RESERVED = {"try", "catch", "finally", "throw", "throws", "null", "true", "false"}

MODIFIERS = {
    "public", "private", "protected", "static", "final", "abstract", "native",
    "synchronized", "transient", "volatile", "strictfp", "default",
}

PRIMITIVES = {"boolean", "byte", "short", "int", "long", "float", "double", "char", "void"}

_NUMERIC_TYPES = {"byte", "short", "int", "long", "float", "double", "Byte",
                  "Short", "Integer", "Long", "Float", "Double", "Number", "BigDecimal", "BigInteger"}
_STRING_TYPES = {"String", "char", "Character", "CharSequence", "StringBuilder", "StringBuffer"}
_VECTOR_TYPES = {"Vector", "List", "ArrayList", "LinkedList", "Set", "HashSet", "TreeSet",
                 "Map", "HashMap", "TreeMap", "Collection", "Iterable", "Iterator", "Queue",
                 "Deque", "Stack", "Array"}

_PRINT_NAMES = {"print", "println", "printf"}

_OPS = [
    ">>>=", "<<=", ">>=", ">>>", "...", "==", "!=", "<=", ">=", "&&", "||",
    "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "->", "::",
    "<<", ">>",
]

_ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="}

_WORD_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_STR_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")


class ParseError(Exception):
    pass


class EmptyProjectError(ParseError):
    """Raised when a source root yields no methods at all."""


@dataclass
class Token:
    kind: str  # word | num | str | op
    text: str
    line: int
    start: int
    end: int


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    i, n, line = 0, len(source), 1
    while i < n:
        c = source[i]
        if c == "\n":
            line += 1
            i += 1
            continue
        if c.isspace():
            i += 1
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j < 0 else j
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            j = n if j < 0 else j + 2
            line += source.count("\n", i, j)
            i = j
            continue
        if c == '"':
            j = i + 1
            while j < n and source[j] != '"':
                j += 2 if source[j] == "\\" else 1
            toks.append(Token("str", source[i + 1:j], line, i, min(j + 1, n)))
            line += source.count("\n", i, j)
            i = j + 1
            continue
        if c == "'":
            j = i + 1
            while j < n and source[j] != "'":
                j += 2 if source[j] == "\\" else 1
            toks.append(Token("chr", source[i + 1:j], line, i, min(j + 1, n)))
            i = j + 1
            continue
        m = _WORD_RE.match(source, i)
        if m:
            toks.append(Token("word", m.group(0), line, i, m.end()))
            i = m.end()
            continue
        if c.isdigit():
            j = i
            while j < n and (source[j].isalnum() or source[j] in "._xXbB") and not (
                source[j] == "." and j + 1 < n and not source[j + 1].isdigit()
            ):
                j += 1
            toks.append(Token("num", source[i:j], line, i, j))
            i = j
            continue
        for op in _OPS:
            if source.startswith(op, i):
                toks.append(Token("op", op, line, i, i + len(op)))
                i += len(op)
                break
        else:
            toks.append(Token("op", c, line, i, i + 1))
            i += 1
    return toks


@dataclass
class CallSite:
    name: str
    arity: int
    receiver_root: str | None  # first identifier of the receiver chain, if any
    line: int


@dataclass
class MethodMetrics:
    loc: int
    param_count: int
    return_class: ReturnClass
    fan_in: int = 0
    fan_out: int = 0
    stereotype: Stereotype = Stereotype.command
    is_static: bool = False
    complexity: int = 3


@dataclass
class MethodModel:
    fqname: str
    name: str
    return_type: str
    params: list[tuple[str, str]]  # (name, type)
    is_static: bool
    source: str  # signature + body text
    loc: int
    body_tokens: list[tuple[str, CodeArea, int]]  # word tokens with occurrence areas
    regions: list[tuple[CodeArea, int, int]]  # area -> char span within source
    calls: list[CallSite] = field(default_factory=list)
    counts: dict = field(default_factory=dict)  # branches/loops/trys
    returns_field: bool = False
    writes_field: bool = False
    metrics: MethodMetrics | None = None
    categories: set[MethodCategory] = field(default_factory=set)

    def bag_tokens(self):
        """(raw token, area) pairs eligible for keyword extraction."""
        for text, area, _line in self.body_tokens:
            if text in RESERVED and text not in KEPT_RESERVED:
                continue
            yield text, area

    def snippet_for(self, area: CodeArea, raw_words: set[str]) -> str | None:
        """Source fragment of the smallest region in `area` containing one of
        the raw words (matched against split identifier pieces)."""
        best: tuple[int, int, str] | None = None
        for reg_area, start, end in self.regions:
            if reg_area is not area:
                continue
            frag = self.source[start:end]
            frag_words = {w for w in _WORD_RE.findall(frag)}
            frag_parts = {
                p.lower()
                for w in frag_words
                for p in re.findall(r"[A-Z]+(?![a-z])|[A-Z][a-z]+|[a-z]+", w)
            }
            if raw_words & ({w.lower() for w in frag_words} | frag_parts):
                key = (end - start, start)
                if best is None or key < (best[0], best[1]):
                    best = (end - start, start, frag.strip())
        if best is not None:
            return best[2]
        for reg_area, start, end in self.regions:
            if reg_area is area:
                return self.source[start:end].strip()
        return None


@dataclass
class ProjectModel:
    methods: list[MethodModel]
    edges: list[tuple[str, str, int]]  # caller fqname, callee fqname, occurrences
    externals: list[tuple[str, str, int, int]]  # caller, callee name, arity, occurrences
    errors: list[tuple[str, str]] = field(default_factory=list)  # (file, message)

    def find(self, fqname: str) -> MethodModel:
        for m in self.methods:
            if m.fqname == fqname:
                return m
        raise KeyError(fqname)

    def identifier_vocab(self) -> set[str]:
        """Lowercased split pieces of all identifiers; spell correction must
        never rewrite these."""
        vocab: set[str] = set()
        for m in self.methods:
            for text, _area, _line in m.body_tokens:
                for piece in re.findall(r"[A-Za-z]+", text):
                    for part in re.findall(r"[A-Z]+(?![a-z])|[A-Z][a-z]+|[a-z]+", piece):
                        vocab.add(part.lower())
        return vocab

    def fan_in_values(self) -> list[int]:
        return [m.metrics.fan_in for m in self.methods]

    def fan_out_values(self) -> list[int]:
        return [m.metrics.fan_out for m in self.methods]

    def to_json(self) -> dict:
        return {
            "methods": [method_to_json(m) for m in sorted(self.methods, key=lambda m: m.fqname)],
            "edges": [[a, b, c] for a, b, c in sorted(self.edges)],
            "externals": [[a, b, c, d] for a, b, c, d in sorted(self.externals)],
            "errors": [[f, e] for f, e in sorted(self.errors)],
        }

    @staticmethod
    def from_json(doc: dict) -> "ProjectModel":
        return ProjectModel(
            methods=[method_from_json(rec) for rec in doc["methods"]],
            edges=[(a, b, c) for a, b, c in doc["edges"]],
            externals=[(a, b, c, d) for a, b, c, d in doc["externals"]],
            errors=[(f, e) for f, e in doc.get("errors", [])],
        )


def method_to_json(m: MethodModel) -> dict:
    return {
        "fqname": m.fqname,
        "name": m.name,
        "return_type": m.return_type,
        "params": [[n, t] for n, t in m.params],
        "is_static": m.is_static,
        "source": m.source,
        "loc": m.loc,
        "body_tokens": [[t, int(a), ln] for t, a, ln in m.body_tokens],
        "regions": [[int(a), s, e] for a, s, e in m.regions],
        "metrics": {
            "loc": m.metrics.loc,
            "param_count": m.metrics.param_count,
            "return_class": m.metrics.return_class.value,
            "fan_in": m.metrics.fan_in,
            "fan_out": m.metrics.fan_out,
            "stereotype": m.metrics.stereotype.value,
            "is_static": m.metrics.is_static,
            "complexity": m.metrics.complexity,
        },
        "categories": sorted(c.value for c in m.categories),
    }


def method_from_json(rec: dict) -> MethodModel:
    mm = rec["metrics"]
    return MethodModel(
        fqname=rec["fqname"],
        name=rec["name"],
        return_type=rec["return_type"],
        params=[(n, t) for n, t in rec["params"]],
        is_static=rec["is_static"],
        source=rec["source"],
        loc=rec["loc"],
        body_tokens=[(t, CodeArea(a), ln) for t, a, ln in rec["body_tokens"]],
        regions=[(CodeArea(a), s, e) for a, s, e in rec["regions"]],
        metrics=MethodMetrics(
            loc=mm["loc"],
            param_count=mm["param_count"],
            return_class=ReturnClass(mm["return_class"]),
            fan_in=mm["fan_in"],
            fan_out=mm["fan_out"],
            stereotype=Stereotype(mm["stereotype"]),
            is_static=mm["is_static"],
            complexity=mm["complexity"],
        ),
        categories={MethodCategory(c) for c in rec["categories"]},
    )


class _MethodBuilder:
    """Walks one method's token slice, marking each token occurrence with the
    highest-priority applicable code area and collecting call sites."""

    def __init__(self, toks: list[Token], lo: int, hi: int, fields: set[str], params: set[str]):
        self.toks = toks
        self.lo = lo  # index of '{'
        self.hi = hi  # index of matching '}'
        self.fields = fields
        self.params = params
        self.marks: dict[int, CodeArea] = {}
        self.regions: list[tuple[CodeArea, int, int]] = []
        self.calls: list[CallSite] = []
        self.counts = {"branches": 0, "loops": 0, "trys": 0}
        self.returns_field = False
        self.writes_field = False

    def mark(self, i: int, area: CodeArea) -> None:
        prev = self.marks.get(i)
        if prev is None or area < prev:
            self.marks[i] = area

    def mark_range(self, lo: int, hi: int, area: CodeArea) -> None:
        for i in range(lo, hi):
            self.mark(i, area)

    def region(self, area: CodeArea, lo: int, hi: int) -> None:
        if hi > lo:
            self.regions.append((area, self.toks[lo].start, self.toks[hi - 1].end))

    def match(self, i: int, open_: str, close: str) -> int:
        depth = 0
        while i <= self.hi:
            t = self.toks[i].text
            if t == open_:
                depth += 1
            elif t == close:
                depth -= 1
                if depth == 0:
                    return i
            i += 1
        return self.hi

    def run(self) -> None:
        self.walk_block(self.lo + 1, self.hi)

    def walk_block(self, i: int, end: int) -> None:
        while i < end:
            i = self.walk_statement(i, end)

    def walk_statement(self, i: int, end: int) -> int:
        toks = self.toks
        if i >= end:
            return end
        t = toks[i]
        if t.text == ";":
            return i + 1
        if t.text == "{":
            j = self.match(i, "{", "}")
            self.walk_block(i + 1, j)
            return j + 1
        if t.kind == "word":
            word = t.text
            if word == "if":
                self.counts["branches"] += 1
                rp = self.match(i + 1, "(", ")")
                self.mark_range(i + 1, rp + 1, CodeArea.Branches)
                self.region(CodeArea.Branches, i + 2, rp)
                self.scan_calls(i + 2, rp)
                nxt = self.walk_statement(rp + 1, end)
                if nxt < end and toks[nxt].kind == "word" and toks[nxt].text == "else":
                    nxt = self.walk_statement(nxt + 1, end)
                return nxt
            if word in ("for", "while"):
                self.counts["loops"] += 1
                rp = self.match(i + 1, "(", ")")
                self.mark_range(i + 1, rp + 1, CodeArea.Loops)
                self.region(CodeArea.Loops, i + 2, rp)
                self.scan_calls(i + 2, rp)
                if rp + 1 <= end and rp + 1 <= self.hi and toks[rp + 1].text == ";":
                    return rp + 2  # while(...) ; of a do-while handled below
                return self.walk_statement(rp + 1, end)
            if word == "do":
                self.counts["loops"] += 1
                nxt = self.walk_statement(i + 1, end)
                if nxt < end and toks[nxt].kind == "word" and toks[nxt].text == "while":
                    rp = self.match(nxt + 1, "(", ")")
                    self.mark_range(nxt + 1, rp + 1, CodeArea.Loops)
                    self.region(CodeArea.Loops, nxt + 2, rp)
                    self.scan_calls(nxt + 2, rp)
                    nxt = rp + 1
                    if nxt < end and toks[nxt].text == ";":
                        nxt += 1
                return nxt
            if word == "switch":
                rp = self.match(i + 1, "(", ")")
                self.mark_range(i + 1, rp + 1, CodeArea.Branches)
                self.region(CodeArea.Branches, i + 2, rp)
                self.scan_calls(i + 2, rp)
                lb = rp + 1
                while lb < end and toks[lb].text != "{":
                    lb += 1
                rb = self.match(lb, "{", "}")
                self.walk_switch_body(lb + 1, rb)
                return rb + 1
            if word == "try":
                self.counts["trys"] += 1
                self.mark(i, CodeArea.ErrorHandling)
                self.region(CodeArea.ErrorHandling, i, i + 1)
                j = i + 1
                if j < end and toks[j].text == "(":  # try-with-resources
                    rp = self.match(j, "(", ")")
                    self.mark_range(j, rp + 1, CodeArea.LocalVariables)
                    self.scan_calls(j + 1, rp)
                    j = rp + 1
                while j < end and toks[j].text != "{":
                    j += 1
                rb = self.match(j, "{", "}")
                self.walk_block(j + 1, rb)
                j = rb + 1
                while j < end and toks[j].kind == "word" and toks[j].text in ("catch", "finally"):
                    self.mark(j, CodeArea.ErrorHandling)
                    if toks[j].text == "catch":
                        rp = self.match(j + 1, "(", ")")
                        self.mark_range(j + 1, rp + 1, CodeArea.ErrorHandling)
                        self.region(CodeArea.ErrorHandling, j, rp + 1)
                        j = rp + 1
                    while j < end and toks[j].text != "{":
                        j += 1
                    rb = self.match(j, "{", "}")
                    self.walk_block(j + 1, rb)
                    j = rb + 1
                return j
            if word == "return":
                j = self.stmt_end(i)
                self.mark_range(i, j, CodeArea.EndingUnits)
                self.region(CodeArea.EndingUnits, i, j)
                self.scan_calls(i + 1, j)
                self.check_returns_field(i + 1, j)
                return j + 1
            if word == "throw":
                j = self.stmt_end(i)
                self.mark_range(i, j, CodeArea.ErrorHandling)
                self.region(CodeArea.ErrorHandling, i, j)
                self.scan_calls(i + 1, j)
                return j + 1
            if word in ("break", "continue"):
                j = self.stmt_end(i)
                self.mark_range(i, j, CodeArea.LocalVariables)
                return j + 1
            if word == "synchronized" and i + 1 < end and toks[i + 1].text == "(":
                rp = self.match(i + 1, "(", ")")
                self.scan_calls(i + 2, rp)
                return self.walk_statement(rp + 1, end)
            if word == "assert":
                j = self.stmt_end(i)
                self.mark_range(i, j, CodeArea.Branches)
                self.scan_calls(i + 1, j)
                return j + 1
        return self.walk_simple_statement(i, end)

    def walk_switch_body(self, i: int, end: int) -> None:
        toks = self.toks
        while i < end:
            t = toks[i]
            if t.kind == "word" and t.text in ("case", "default"):
                if t.text == "case":
                    self.counts["branches"] += 1
                j = i + 1
                while j < end and toks[j].text != ":":
                    j += 1
                self.mark_range(i, j, CodeArea.Branches)
                self.region(CodeArea.Branches, i, j)
                i = j + 1
                continue
            i = self.walk_statement(i, end)

    def stmt_end(self, i: int) -> int:
        """Index of the terminating ';' of a statement, skipping nested groups."""
        toks = self.toks
        depth = 0
        while i <= self.hi:
            t = toks[i].text
            if t in "([{":
                depth += 1
            elif t in ")]}":
                if depth == 0:
                    return i  # malformed; stop at enclosing close
                depth -= 1
            elif t == ";" and depth == 0:
                return i
            i += 1
        return self.hi

    def walk_simple_statement(self, i: int, end: int) -> int:
        toks = self.toks
        j = self.stmt_end(i)
        assign = self.find_top_level_assign(i, j)
        if self.is_declaration(i, j):
            self.mark_range(i, j, CodeArea.LocalVariables)
            self.region(CodeArea.LocalVariables, i, j)
            if assign is not None:
                self.scan_calls(assign + 1, j)
        elif assign is not None:
            self.mark_range(i, j, CodeArea.Assignments)
            self.region(CodeArea.Assignments, i, j)
            self.scan_calls(i, j)
            root = self.lhs_root(i)
            if root in self.fields:
                self.writes_field = True
        elif any(toks[k].text in ("++", "--") for k in range(i, j) if toks[k].kind == "op"):
            self.mark_range(i, j, CodeArea.Assignments)
            self.region(CodeArea.Assignments, i, j)
            self.scan_calls(i, j)
            root = self.lhs_root(i)
            if root in self.fields:
                self.writes_field = True
        else:
            area = CodeArea.EndingUnits if self.is_printout(i, j) else CodeArea.LocalVariables
            if area is CodeArea.EndingUnits:
                self.mark_range(i, j, area)
                self.region(CodeArea.EndingUnits, i, j)
            else:
                # bare expression: call tokens get invocation area, rest default
                self.mark_range(i, j, CodeArea.LocalVariables)
            self.scan_calls(i, j)
        return j + 1

    def find_top_level_assign(self, i: int, j: int) -> int | None:
        depth = 0
        for k in range(i, j):
            t = self.toks[k].text
            if t in "([{":
                depth += 1
            elif t in ")]}":
                depth -= 1
            elif depth == 0 and self.toks[k].kind == "op" and t in _ASSIGN_OPS:
                return k
        return None

    def is_declaration(self, i: int, j: int) -> bool:
        """Matches `Type name ...` where Type is a (dotted, generic, array)
        type expression and name is a fresh identifier."""
        toks = self.toks
        k = i
        if k < j and toks[k].kind == "word" and toks[k].text == "final":
            k += 1
        if k >= j or toks[k].kind != "word" or (toks[k].text in RESERVED and toks[k].text not in PRIMITIVES):
            return False
        k += 1
        while k < j and toks[k].text == "." and k + 1 < j and toks[k + 1].kind == "word":
            k += 2
        if k < j and toks[k].text == "<":
            depth = 0
            while k < j:
                if toks[k].text == "<":
                    depth += 1
                elif toks[k].text == ">":
                    depth -= 1
                    if depth == 0:
                        k += 1
                        break
                elif toks[k].text == ">>":
                    depth -= 2
                    if depth <= 0:
                        k += 1
                        break
                k += 1
        while k + 1 < j and toks[k].text == "[" and toks[k + 1].text == "]":
            k += 2
        if k >= j or toks[k].kind != "word" or toks[k].text in RESERVED:
            return False
        k += 1
        while k + 1 < j and toks[k].text == "[" and toks[k + 1].text == "]":
            k += 2
        return k >= j or self.toks[k].text in ("=", ";", ",", ":")

    def lhs_root(self, i: int) -> str | None:
        toks = self.toks
        if toks[i].kind == "word" and toks[i].text == "this" and toks[i + 1].text == ".":
            return toks[i + 2].text if toks[i + 2].kind == "word" else None
        if toks[i].kind == "word" and toks[i].text not in RESERVED:
            return toks[i].text
        return None

    def is_printout(self, i: int, j: int) -> bool:
        toks = self.toks
        for k in range(i, j):
            if toks[k].kind == "word" and toks[k].text in _PRINT_NAMES:
                if k + 1 < j and toks[k + 1].text == "(":
                    return True
        return False

    def check_returns_field(self, i: int, j: int) -> None:
        toks = self.toks
        span = [t for t in toks[i:j]]
        if len(span) == 1 and span[0].kind == "word" and span[0].text in self.fields:
            self.returns_field = True
        if (
            len(span) == 3
            and span[0].text == "this"
            and span[1].text == "."
            and span[2].kind == "word"
            and span[2].text in self.fields
        ):
            self.returns_field = True

    def scan_calls(self, i: int, j: int) -> None:
        """Record call sites and mark invocation expressions, skipping nested
        brace groups (anonymous class or lambda bodies)."""
        toks = self.toks
        k = i
        while k < j:
            t = toks[k]
            if t.text == "{":
                k = self.match(k, "{", "}") + 1
                continue
            if t.kind == "word" and t.text not in RESERVED and k + 1 < j and toks[k + 1].text == "(":
                rp = self.match(k + 1, "(", ")")
                chain_lo = self.chain_start(k)
                self.mark_range(chain_lo, min(rp + 1, j), CodeArea.MethodInvocations)
                self.region(CodeArea.MethodInvocations, chain_lo, min(rp + 1, j))
                is_ctor = chain_lo > self.lo and toks[chain_lo - 1].kind == "word" and toks[chain_lo - 1].text == "new"
                if not is_ctor:
                    self.calls.append(
                        CallSite(
                            name=t.text,
                            arity=self.arity(k + 1, rp),
                            receiver_root=self.receiver_root(chain_lo, k),
                            line=t.line,
                        )
                    )
                k += 1
                continue
            if t.kind == "word" and t.text == "new" and k + 1 < j and toks[k + 1].kind == "word":
                # constructor: mark `new Type(...)` as an invocation
                m = k + 1
                while m + 1 < j and toks[m + 1].text == "." and m + 2 < j and toks[m + 2].kind == "word":
                    m += 2
                if m + 1 < j and toks[m + 1].text == "(":
                    rp = self.match(m + 1, "(", ")")
                    self.mark_range(k + 1, min(rp + 1, j), CodeArea.MethodInvocations)
                    self.region(CodeArea.MethodInvocations, k + 1, min(rp + 1, j))
            k += 1

    def arity(self, lparen: int, rparen: int) -> int:
        """Argument count: top-level commas + 1, or 0 for an empty list."""
        if rparen - lparen <= 1:
            return 0
        depth = 0
        commas = 0
        for k in range(lparen + 1, rparen):
            t = self.toks[k].text
            if t in "([{":
                depth += 1
            elif t in ")]}":
                depth -= 1
            elif t == "," and depth == 0:
                commas += 1
        return commas + 1

    def chain_start(self, name_idx: int) -> int:
        """Start index of the receiver chain `a.b.c(` ending at name_idx."""
        toks = self.toks
        k = name_idx
        while k - 2 > self.lo and toks[k - 1].text == "." and toks[k - 2].kind == "word":
            k -= 2
        return k

    def receiver_root(self, chain_lo: int, name_idx: int) -> str | None:
        toks = self.toks
        if chain_lo == name_idx:
            if chain_lo - 1 > self.lo and toks[chain_lo - 1].text == ".":
                return None  # chained off a call/cast result
            return None
        root = toks[chain_lo]
        if root.kind == "word" and root.text not in RESERVED:
            return root.text
        return None


def _count_loc(body_text: str) -> int:
    """Non-blank body lines with content besides braces and punctuation."""
    loc = 0
    for line in body_text.splitlines():
        stripped = re.sub(r"[\s{}();,]+", "", line)
        if stripped:
            loc += 1
    return loc


def _classify_return(return_type: str) -> ReturnClass:
    base = return_type.split("<")[0].strip()
    if base.endswith("[]"):
        return ReturnClass.vector
    base = base.split(".")[-1]
    if base == "void":
        return ReturnClass.void
    if base in ("boolean", "Boolean"):
        return ReturnClass.boolean
    if base in _NUMERIC_TYPES:
        return ReturnClass.numeric
    if base in _STRING_TYPES:
        return ReturnClass.string
    if base in _VECTOR_TYPES:
        return ReturnClass.vector
    return ReturnClass.object


def parse_source(file_label: str, source: str) -> list[MethodModel]:
    """Parse one compilation unit into method models (no graph metrics yet)."""
    toks = tokenize(source)
    methods: list[MethodModel] = []
    _scan_types(toks, 0, len(toks), [], source, methods)
    return methods


def _skip_annotation(toks: list[Token], i: int) -> int:
    i += 1  # '@'
    if i < len(toks) and toks[i].kind == "word":
        i += 1
        while i + 1 < len(toks) and toks[i].text == "." and toks[i + 1].kind == "word":
            i += 2
    if i < len(toks) and toks[i].text == "(":
        i = _match_group(toks, i, "(", ")") + 1
    return i


def _match_group(toks: list[Token], i: int, open_: str, close: str) -> int:
    depth = 0
    n = len(toks)
    while i < n:
        t = toks[i].text
        if t == open_:
            depth += 1
        elif t == close:
            depth -= 1
            if depth == 0:
                return i
        i += 1
    return n - 1


def _scan_types(toks, lo, hi, outer: list[str], source: str, out: list[MethodModel]) -> None:
    i = lo
    while i < hi:
        t = toks[i]
        if t.text == "@":
            i = _skip_annotation(toks, i)
            continue
        if t.kind == "word" and t.text in ("class", "interface", "enum") and i + 1 < hi and toks[i + 1].kind == "word":
            name = toks[i + 1].text
            j = i + 2
            while j < hi and toks[j].text != "{":
                j += 1
            rb = _match_group(toks, j, "{", "}")
            _scan_members(toks, j + 1, rb, outer + [name], source, out)
            i = rb + 1
            continue
        i += 1


def _collect_fields(toks, lo, hi) -> set[str]:
    """Field names declared directly in a class body."""
    fields: set[str] = set()
    i = lo
    buffer: list[int] = []
    while i < hi:
        t = toks[i]
        if t.text == "@":
            i = _skip_annotation(toks, i)
            continue
        if t.kind == "word" and t.text in ("class", "interface", "enum") and i + 1 < hi and toks[i + 1].kind == "word":
            j = i + 2
            while j < hi and toks[j].text != "{":
                j += 1
            i = _match_group(toks, j, "{", "}") + 1
            buffer = []
            continue
        if t.text == "(":
            i = _match_group(toks, i, "(", ")") + 1
            # method or constructor: skip to its body/terminator
            while i < hi and toks[i].text not in ("{", ";"):
                i += 1
            if i < hi and toks[i].text == "{":
                i = _match_group(toks, i, "{", "}")
            buffer = []
            i += 1
            continue
        if t.text == "=":
            if buffer and toks[buffer[-1]].kind == "word":
                fields.add(toks[buffer[-1]].text)
            # skip initializer up to ';' at this depth
            depth = 0
            while i < hi:
                x = toks[i].text
                if x in "([{":
                    depth += 1
                elif x in ")]}":
                    depth -= 1
                elif x == ";" and depth == 0:
                    break
                i += 1
            buffer = []
            i += 1
            continue
        if t.text == ";":
            words = [k for k in buffer if toks[k].kind == "word" and toks[k].text not in MODIFIERS]
            if len(words) >= 2:
                fields.add(toks[words[-1]].text)
            buffer = []
            i += 1
            continue
        if t.text == "{":
            i = _match_group(toks, i, "{", "}") + 1
            buffer = []
            continue
        buffer.append(i)
        i += 1
    return fields


def _scan_members(toks, lo, hi, type_chain: list[str], source: str, out: list[MethodModel]) -> None:
    fields = _collect_fields(toks, lo, hi)
    type_name = ".".join(type_chain)
    i = lo
    buffer: list[int] = []
    while i < hi:
        t = toks[i]
        if t.text == "@":
            i = _skip_annotation(toks, i)
            continue
        if t.kind == "word" and t.text in ("class", "interface", "enum") and i + 1 < hi and toks[i + 1].kind == "word":
            name = toks[i + 1].text
            j = i + 2
            while j < hi and toks[j].text != "{":
                j += 1
            rb = _match_group(toks, j, "{", "}")
            _scan_members(toks, j + 1, rb, type_chain + [name], source, out)
            i = rb + 1
            buffer = []
            continue
        if t.text == "(" and buffer and toks[buffer[-1]].kind == "word":
            rparen = _match_group(toks, i, "(", ")")
            j = rparen + 1
            throws_words: list[int] = []
            if j < hi and toks[j].kind == "word" and toks[j].text == "throws":
                throws_words.append(j)
                j += 1
                while j < hi and toks[j].text not in ("{", ";"):
                    if toks[j].kind == "word":
                        throws_words.append(j)
                    j += 1
            if j < hi and toks[j].text == "{":
                rb = _match_group(toks, j, "{", "}")
                method = _build_method(
                    toks, buffer, i, rparen, j, rb, throws_words, fields, type_name, source
                )
                if method is not None:
                    out.append(method)
                i = rb + 1
                buffer = []
                continue
            if j < hi and toks[j].text == ";":
                i = j + 1  # abstract/native method
                buffer = []
                continue
            i = rparen + 1
            continue
        if t.text == "=":
            depth = 0
            while i < hi:
                x = toks[i].text
                if x in "([{":
                    depth += 1
                elif x in ")]}":
                    depth -= 1
                elif x == ";" and depth == 0:
                    break
                i += 1
            buffer = []
            i += 1
            continue
        if t.text == ";":
            buffer = []
            i += 1
            continue
        if t.text == "{":  # static/instance initializer
            i = _match_group(toks, i, "{", "}") + 1
            buffer = []
            continue
        buffer.append(i)
        i += 1


def _build_method(toks, buffer, lparen, rparen, lbrace, rbrace, throws_words, fields, type_name, source):
    name_idx = buffer[-1]
    name = toks[name_idx].text
    decl = [k for k in buffer[:-1]]
    # strip modifiers and generic type parameter groups
    is_static = any(toks[k].kind == "word" and toks[k].text == "static" for k in decl)
    ret: list[int] = []
    k = 0
    while k < len(decl):
        idx = decl[k]
        tok = toks[idx]
        if tok.kind == "word" and tok.text in MODIFIERS:
            k += 1
            continue
        if tok.text == "<" and not ret:
            depth = 0
            while k < len(decl):
                x = toks[decl[k]].text
                depth += x.count("<") - x.count(">")
                k += 1
                if depth <= 0:
                    break
            continue
        ret.append(idx)
        k += 1
    if not ret:
        return None  # constructor
    return_type = "".join(toks[idx].text for idx in ret)

    params = _parse_params(toks, lparen + 1, rparen)
    param_names = {n for n, _t in params}

    builder = _MethodBuilder(toks, lbrace, rbrace, fields, param_names)
    builder.run()

    # signature areas
    sig_marks: dict[int, CodeArea] = {}
    for idx in ret:
        sig_marks[idx] = CodeArea.MethodNameReturn
    sig_marks[name_idx] = CodeArea.MethodNameReturn
    for idx in range(lparen + 1, rparen):
        sig_marks[idx] = CodeArea.Parameters
    for idx in throws_words:
        sig_marks[idx] = CodeArea.ErrorHandling

    src_start = toks[buffer[0]].start if buffer else toks[name_idx].start
    src_end = toks[rbrace].end
    body_text = source[toks[lbrace].end: toks[rbrace].start]

    body_tokens: list[tuple[str, CodeArea, int]] = []
    regions = [
        (CodeArea.MethodNameReturn, toks[ret[0]].start - src_start, toks[name_idx].end - src_start),
        (CodeArea.Parameters, toks[lparen].start - src_start, toks[rparen].end - src_start),
    ]
    for area, s, e in builder.regions:
        regions.append((area, s - src_start, e - src_start))

    def emit(idx: int, area: CodeArea) -> None:
        tok = toks[idx]
        if tok.kind in ("word", "num"):
            body_tokens.append((tok.text, area, tok.line))
        elif tok.kind == "str":
            for w in _STR_WORD_RE.findall(tok.text):
                body_tokens.append((w, area, tok.line))

    for idx, area in sorted(sig_marks.items()):
        emit(idx, area)
    for idx in range(lbrace + 1, rbrace):
        area = builder.marks.get(idx, CodeArea.LocalVariables)
        emit(idx, area)

    loc = max(1, _count_loc(body_text))
    return MethodModel(
        fqname=f"{type_name}.{name}",
        name=name,
        return_type=return_type,
        params=params,
        is_static=is_static,
        source=source[src_start:src_end],
        loc=loc,
        body_tokens=body_tokens,
        regions=regions,
        calls=builder.calls,
        counts=builder.counts,
        returns_field=builder.returns_field,
        writes_field=builder.writes_field,
    )


def _parse_params(toks, lo, hi) -> list[tuple[str, str]]:
    if lo >= hi:
        return []
    groups: list[list[Token]] = [[]]
    depth = 0
    for k in range(lo, hi):
        t = toks[k]
        if t.text in ("(", "[", "{", "<"):
            depth += 1
        elif t.text in (")", "]", "}", ">"):
            depth -= 1
        if t.text == "," and depth == 0:
            groups.append([])
        else:
            groups[-1].append(t)
    params: list[tuple[str, str]] = []
    for group in groups:
        words = [t for t in group if t.kind == "word" and t.text not in ("final",)]
        if not words:
            continue
        name = words[-1].text
        type_toks = [t for t in group if not (t.kind == "word" and t.text == name and t is words[-1])]
        type_str = "".join(t.text for t in type_toks if not (t.kind == "word" and t.text == "final"))
        params.append((name, type_str))
    return params


def compute_metrics(m: MethodModel) -> MethodMetrics:
    """Populate the per-method metrics (fan-in/out filled by the project pass).

    complexity = clamp(2 + branch statements + loops + try blocks
                       + ceil(loc / 50), 3, 15)
    """
    raw = (
        2
        + m.counts.get("branches", 0)
        + m.counts.get("loops", 0)
        + m.counts.get("trys", 0)
        + math.ceil(m.loc / 50)
    )
    complexity = max(3, min(15, raw))
    stereotype = _stereotype(m)
    return MethodMetrics(
        loc=m.loc,
        param_count=len(m.params),
        return_class=_classify_return(m.return_type),
        stereotype=stereotype,
        is_static=m.is_static,
        complexity=complexity,
    )


def _stereotype(m: MethodModel) -> Stereotype:
    """Collaborator beats accessor beats mutator; command is the fallback."""
    param_names = {p for p, _t in m.params}
    for call in m.calls:
        if call.receiver_root and (call.receiver_root in param_names or call.receiver_root in m.field_names):
            return Stereotype.collaborator
    if m.returns_field and not m.writes_field:
        return Stereotype.accessor
    if m.writes_field:
        return Stereotype.mutator
    return Stereotype.command


def _percentile(values: list[int], q: float) -> float:
    if not values:
        return 0.0
    vals = sorted(values)
    if len(vals) == 1:
        return float(vals[0])
    idx = q * (len(vals) - 1)
    lo = int(math.floor(idx))
    hi = int(math.ceil(idx))
    if lo == hi:
        return float(vals[lo])
    frac = idx - lo
    return vals[lo] * (1 - frac) + vals[hi] * frac


@dataclass(frozen=True)
class ProjectStats:
    fan_in_p90: float
    fan_out_p90: float

    @staticmethod
    def of(fan_ins: list[int], fan_outs: list[int]) -> "ProjectStats":
        return ProjectStats(_percentile(fan_ins, 0.9), _percentile(fan_outs, 0.9))


def categorize(metrics: MethodMetrics, stats: ProjectStats) -> set[MethodCategory]:
    """Map metrics to the method-category set; the LOC bucket always applies
    (methods under 3 lines clamp into the small bucket)."""
    cats: set[MethodCategory] = set()
    if metrics.loc < 20:
        cats.add(MethodCategory.loc_small)
    elif metrics.loc <= 70:
        cats.add(MethodCategory.loc_medium)
    else:
        cats.add(MethodCategory.loc_large)
    if metrics.param_count == 0:
        cats.add(MethodCategory.params_none)
    elif metrics.param_count <= 3:
        cats.add(MethodCategory.params_1to3)
    else:
        cats.add(MethodCategory.params_gt3)
    ret_map = {
        ReturnClass.vector: MethodCategory.ret_vector,
        ReturnClass.boolean: MethodCategory.ret_boolean,
        ReturnClass.numeric: MethodCategory.ret_numeric,
        ReturnClass.string: MethodCategory.ret_string,
        ReturnClass.object: MethodCategory.ret_object,
    }
    if metrics.return_class in ret_map:
        cats.add(ret_map[metrics.return_class])
    if metrics.fan_in > 0 and metrics.fan_in >= stats.fan_in_p90:
        cats.add(MethodCategory.high_fan_in)
    if metrics.fan_out > 0 and metrics.fan_out >= stats.fan_out_p90:
        cats.add(MethodCategory.high_fan_out)
    stereo_map = {
        Stereotype.collaborator: MethodCategory.stereo_collaborator,
        Stereotype.command: MethodCategory.stereo_command,
        Stereotype.accessor: MethodCategory.stereo_interacting,
        Stereotype.mutator: MethodCategory.stereo_interacting,
    }
    cats.add(stereo_map[metrics.stereotype])
    if metrics.is_static:
        cats.add(MethodCategory.static_method)
    return cats


def tag_code_areas(m: MethodModel) -> dict[str, CodeArea]:
    """Per raw token: the highest-priority area among its occurrences."""
    out: dict[str, CodeArea] = {}
    for text, area, _line in m.body_tokens:
        prev = out.get(text)
        if prev is None or area < prev:
            out[text] = area
    return out


def build_project(methods: list[MethodModel], errors: list[tuple[str, str]] | None = None) -> ProjectModel:
    """Resolve calls by name+arity, fill metrics, categorize every method."""
    for m in methods:
        m.field_names = getattr(m, "field_names", set())
    index: dict[tuple[str, int], list[MethodModel]] = {}
    for m in methods:
        index.setdefault((m.name, len(m.params)), []).append(m)

    for m in methods:
        m.metrics = compute_metrics(m)

    edge_counts: dict[tuple[str, str], int] = {}
    ext_counts: dict[tuple[str, str, int], int] = {}
    for m in methods:
        for call in m.calls:
            targets = index.get((call.name, call.arity), [])
            if len(targets) == 1:
                callee = targets[0]
                edge_counts[(m.fqname, callee.fqname)] = edge_counts.get((m.fqname, callee.fqname), 0) + 1
                m.metrics.fan_out += 1
            else:
                ext_counts[(m.fqname, call.name, call.arity)] = ext_counts.get(
                    (m.fqname, call.name, call.arity), 0
                ) + 1
    fan_in: dict[str, int] = {}
    for (caller, callee), count in edge_counts.items():
        fan_in[callee] = fan_in.get(callee, 0) + count
    for m in methods:
        m.metrics.fan_in = fan_in.get(m.fqname, 0)

    stats = ProjectStats.of([m.metrics.fan_in for m in methods], [m.metrics.fan_out for m in methods])
    for m in methods:
        m.categories = categorize(m.metrics, stats)

    return ProjectModel(
        methods=methods,
        edges=[(a, b, c) for (a, b), c in sorted(edge_counts.items())],
        externals=[(a, n, ar, c) for (a, n, ar), c in sorted(ext_counts.items())],
        errors=errors or [],
    )


def parse_project(source_root: str | Path) -> ProjectModel:
    """Parse every .java file under a directory into a project model.

    Unreadable or unparseable files are collected as per-file errors and
    parsing continues; a project with zero methods raises EmptyProjectError.
    """
    root = Path(source_root)
    methods: list[MethodModel] = []
    errors: list[tuple[str, str]] = []
    files = sorted(root.rglob("*.java"))
    for f in files:
        try:
            source = f.read_text("utf-8")
            file_methods = parse_source(str(f), source)
            _attach_fields(source, file_methods)
            methods.extend(file_methods)
        except Exception as exc:  # per-file isolation
            errors.append((str(f), str(exc)))
    if not methods:
        raise EmptyProjectError(f"no methods found under {root}")
    return build_project(methods, errors)


def parse_sources(named_sources: list[tuple[str, str]]) -> ProjectModel:
    """In-memory variant of parse_project for (name, source) pairs."""
    methods: list[MethodModel] = []
    errors: list[tuple[str, str]] = []
    for name, source in named_sources:
        try:
            file_methods = parse_source(name, source)
            _attach_fields(source, file_methods)
            methods.extend(file_methods)
        except Exception as exc:
            errors.append((name, str(exc)))
    if not methods:
        raise EmptyProjectError("no methods found in sources")
    return build_project(methods, errors)


def _attach_fields(source: str, methods: list[MethodModel]) -> None:
    toks = tokenize(source)
    # reuse the member scanner's field collection per top-level type body
    i = 0
    fields_by_type: dict[str, set[str]] = {}

    def scan(lo, hi, chain):
        j = lo
        while j < hi:
            t = toks[j]
            if t.kind == "word" and t.text in ("class", "interface", "enum") and j + 1 < hi and toks[j + 1].kind == "word":
                name = toks[j + 1].text
                k = j + 2
                while k < hi and toks[k].text != "{":
                    k += 1
                rb = _match_group(toks, k, "{", "}")
                fields_by_type[".".join(chain + [name])] = _collect_fields(toks, k + 1, rb)
                scan(k + 1, rb, chain + [name])
                j = rb + 1
                continue
            j += 1

    scan(0, len(toks), [])
    for m in methods:
        type_name = m.fqname.rsplit(".", 1)[0]
        m.field_names = fields_by_type.get(type_name, set())


def project_to_json_str(project: ProjectModel) -> str:
    return json.dumps(project.to_json(), indent=2, sort_keys=True)
