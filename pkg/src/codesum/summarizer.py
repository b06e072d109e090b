"""Automatic method summaries.

Terms are scored with weighted tf-idf (natural log throughout): the tf-idf
of a keyword is multiplied by the learned weight of its code area for the
method's categories.  The top-n terms (n = method complexity) are rendered
through per-area sentence templates in code-area priority order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .jparse import CodeArea, MethodModel, ProjectModel, ReturnClass
from .textpipe import KeywordBag, Lexicon, split_identifier, stem
from .weights import (
    CrowdCorpusEntry,
    WeightsDB,
    common_words,
    lookup_weight,
    method_keywords,
    summary_keywords,
    _identifier_pieces,
)


@dataclass
class ScoredTerm:
    term: str
    area: CodeArea
    tf: int
    df: int
    tfidf: float
    weight: float
    importance: float
    source_snippet: str = ""


@dataclass
class SummaryText:
    sentences: list[tuple[CodeArea, str]]
    keyword_count: int

    @property
    def text(self) -> str:
        return " ".join(t for _a, t in self.sentences)


@dataclass
class ProjectIndex:
    """Per-method keyword bags and document frequencies for one project."""

    project: ProjectModel
    lex: Lexicon
    bags: dict[str, KeywordBag]
    df: dict[str, int]

    @property
    def N(self) -> int:
        return len(self.project.methods)

    @staticmethod
    def build(project: ProjectModel, lex: Lexicon) -> "ProjectIndex":
        vocab = project.identifier_vocab()
        bags: dict[str, KeywordBag] = {}
        df: dict[str, int] = {}
        for m in project.methods:
            bag = method_keywords(m, lex, vocab)
            bags[m.fqname] = bag
            for word in bag.keywords():
                df[word] = df.get(word, 0) + 1
        return ProjectIndex(project=project, lex=lex, bags=bags, df=df)


def term_importance(t: str, m: MethodModel, index: ProjectIndex, db: WeightsDB) -> ScoredTerm:
    """Weighted tf-idf importance of one method keyword."""
    bag = index.bags[m.fqname]
    if t not in bag:
        raise ValueError(f"{t!r} is not a keyword of {m.fqname}")
    tf = bag.counts[t]
    df = index.df[t]
    n = index.N
    idf = math.log(n / df)
    tfidf = (1.0 + math.log(tf)) * idf
    area = bag.areas[t]
    weight = lookup_weight(db, m, area)
    return ScoredTerm(
        term=t,
        area=area,
        tf=tf,
        df=df,
        tfidf=tfidf,
        weight=weight,
        importance=tfidf * weight,
        source_snippet=_snippet(m, area, t) or "",
    )


def _snippet(m: MethodModel, area: CodeArea, term: str) -> str | None:
    raw_words = {term}
    for text, _a, _ln in m.body_tokens:
        for piece in re.findall(r"[A-Z]+(?![a-z])|[A-Z][a-z]+|[a-z]+", text):
            low = piece.lower()
            if low == term or stem(low) == term:
                raw_words.add(low)
    return m.snippet_for(area, raw_words)


def select_keywords(m: MethodModel, index: ProjectIndex, db: WeightsDB) -> list[ScoredTerm]:
    """Top-n terms by importance, n = method complexity; ties break by area
    priority, then term.  Returns every term when fewer than n exist."""
    scored = [term_importance(t, m, index, db) for t in sorted(index.bags[m.fqname].keywords())]
    scored.sort(key=lambda s: (-s.importance, int(s.area), s.term))
    n = m.metrics.complexity if m.metrics else 5
    return scored[:n]


_OP_WORDS = [
    ("==", "is equal to"),
    ("!=", "is not equal to"),
    ("<=", "is smaller than or equal to"),
    (">=", "is greater than or equal to"),
    ("<", "is smaller than"),
    (">", "is greater than"),
    ("&&", "and"),
    ("||", "or"),
]


def _phrase(text: str) -> str:
    """Split identifiers into lowercase words; drop punctuation and `this`."""
    words: list[str] = []
    for tok in re.findall(r"[A-Za-z_][A-Za-z0-9_]*", text):
        if tok in ("this", "new", "return"):
            continue
        for piece in split_identifier(tok):
            if not piece.isdigit():
                words.append(piece.lower())
    return " ".join(words)


_COND_TOKEN = re.compile(
    "|".join(re.escape(op) for op, _w in _OP_WORDS) + r"|[A-Za-z_][A-Za-z0-9_$]*|[0-9]+"
)


def verbalize_condition(cond: str) -> str:
    """Replace comparison operators with words and split identifiers."""
    op_words = dict(_OP_WORDS)
    tokens: list[str] = []
    for m in _COND_TOKEN.finditer(cond):
        tok = m.group(0)
        if tok in op_words:
            tokens.append(op_words[tok])
        elif tok[0].isdigit():
            tokens.append(tok)
        else:
            ph = _phrase(tok)
            if ph:
                tokens.append(ph)
    return " ".join(tokens) if tokens else cond.strip()


def _verb_s(verb: str) -> str:
    if verb.endswith(("s", "x", "z", "ch", "sh")):
        return verb + "es"
    return verb + "s"


def _name_sentence(m: MethodModel) -> str:
    words = [w.lower() for w in split_identifier(m.name) if not w.isdigit()]
    ret = m.metrics.return_class if m.metrics else ReturnClass.object
    if ret is ReturnClass.boolean:
        rest = " ".join(words[1:] if len(words) > 1 else words)
        return f"Check whether {rest}."
    verb = words[0] if words else "runs"
    rest = " ".join(words[1:])
    if rest:
        return f"{_verb_s(verb).capitalize()} the {rest}."
    return f"{_verb_s(verb).capitalize()}."


def _callee_of(snippet: str) -> str:
    m = re.search(r"([A-Za-z_][A-Za-z0-9_$]*)\s*\(", snippet)
    return m.group(1) if m else snippet


def sentence_for(term: ScoredTerm, m: MethodModel) -> str:
    area = term.area
    snip = term.source_snippet
    if area is CodeArea.MethodNameReturn:
        return _name_sentence(m)
    if area is CodeArea.Parameters:
        count = m.metrics.param_count if m.metrics else len(m.params)
        nums = {0: "no", 1: "one", 2: "two", 3: "three", 4: "four", 5: "five",
                6: "six", 7: "seven", 8: "eight", 9: "nine"}
        word = nums.get(count, str(count))
        return f"Takes {word} parameter{'s' if count != 1 else ''}."
    if area is CodeArea.EndingUnits:
        if snip.lstrip().startswith("return"):
            expr = _phrase(snip)
            return f"Finally, returns the {expr}." if expr else "Finally, returns."
        return f"Finally, prints the {_phrase(snip)}." if _phrase(snip) else "Finally, produces its output."
    if area is CodeArea.MethodInvocations:
        callee = _phrase(_callee_of(snip)) or term.term
        return f"Does part of its work by calling {callee}."
    if area is CodeArea.Branches:
        cond = verbalize_condition(snip) if snip else term.term
        return f"If {cond}, it adjusts its behavior."
    if area is CodeArea.Loops:
        cond = verbalize_condition(snip) if snip else term.term
        return f"Repeats its work until {cond}."
    if area is CodeArea.ErrorHandling:
        action = _phrase(m.name)
        return f"Handles failures of {action} via exception handling."
    if area is CodeArea.Assignments:
        lhs = _phrase(snip.split("=")[0]) if "=" in snip else _phrase(snip)
        rhs = _phrase(snip.split("=", 1)[1]) if "=" in snip else ""
        if lhs and rhs:
            return f"Uses {lhs} to hold the {rhs}."
        return f"Uses {lhs or term.term} to hold a value."
    # LocalVariables
    lv = _phrase(snip.split("=")[0]) if snip else term.term
    return f"Uses {lv or term.term} to hold an intermediate value."


def render_summary(selected: list[ScoredTerm], m: MethodModel) -> SummaryText:
    """One template sentence per selected term, in code-area priority order;
    identical sentences collapse."""
    if not selected:
        raise ValueError("no terms selected")
    ordered = sorted(selected, key=lambda s: (int(s.area), -s.importance, s.term))
    sentences: list[tuple[CodeArea, str]] = []
    seen: set[str] = set()
    for term in ordered:
        text = sentence_for(term, m)
        if text in seen:
            continue
        seen.add(text)
        sentences.append((term.area, text))
    return SummaryText(sentences=sentences, keyword_count=len(selected))


def summarize_method(m: MethodModel, index: ProjectIndex, db: WeightsDB) -> tuple[list[ScoredTerm], SummaryText]:
    selected = select_keywords(m, index, db)
    return selected, render_summary(selected, m)


@dataclass
class CrowdChoice:
    text: str
    keywords: list[str] = field(default_factory=list)
    all_summaries: list[str] = field(default_factory=list)


def select_crowd_summary(mode: str, entry: CrowdCorpusEntry, lex: Lexicon) -> CrowdChoice:
    """Pick or build the crowd-facing summary for a method.

    upvotes: best net votes, earliest submission wins ties.
    similarity: most keywords shared with the method, net votes break ties.
    merged: keywords present in at least half the summaries, rendered through
    the area templates, with every raw summary attached.
    """
    live = [(i, s) for i, s in enumerate(entry.summaries) if not s.removed]
    if not live:
        raise ValueError(f"no summaries available for {entry.method.fqname}")
    texts = [s.text for _i, s in live]
    if mode == "upvotes":
        best = min(live, key=lambda pair: (-(pair[1].upvotes - pair[1].downvotes), pair[0]))
        return CrowdChoice(text=best[1].text, all_summaries=texts)
    m_bag = method_keywords(entry.method, lex)
    vocab = _identifier_pieces(entry.method)
    bags = [(i, s, summary_keywords(s.text, lex, vocab)) for i, s in live]
    if mode == "similarity":
        best = min(
            bags,
            key=lambda trip: (
                -len(common_words(trip[2], m_bag, lex)),
                -(trip[1].upvotes - trip[1].downvotes),
                trip[0],
            ),
        )
        return CrowdChoice(text=best[1].text, all_summaries=texts)
    if mode == "merged":
        threshold = len(bags) / 2.0
        prevalence: dict[str, int] = {}
        for _i, _s, bag in bags:
            for w in bag.keywords():
                prevalence[w] = prevalence.get(w, 0) + 1
        merged = sorted(w for w, c in prevalence.items() if c >= threshold)
        in_method = [w for w in merged if w in m_bag]
        extra = [w for w in merged if w not in m_bag]
        pieces: list[str] = []
        if in_method:
            pseudo = [
                ScoredTerm(
                    term=w,
                    area=m_bag.areas[w],
                    tf=m_bag.counts[w],
                    df=1,
                    tfidf=0.0,
                    weight=1.0,
                    importance=float(m_bag.counts[w]),
                    source_snippet=_snippet(entry.method, m_bag.areas[w], w) or "",
                )
                for w in in_method
            ]
            pieces.append(render_summary(pseudo, entry.method).text)
        if extra:
            pieces.append("Commonly mentioned: " + ", ".join(extra) + ".")
        text = " ".join(pieces) if pieces else texts[0]
        return CrowdChoice(text=text, keywords=merged, all_summaries=texts)
    raise ValueError(f"unknown mode {mode!r}")
