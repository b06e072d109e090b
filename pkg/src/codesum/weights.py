"""Keyword weight learning from crowd summaries.

For every method keyword shared with a summary (directly or through a
synonym), the ratio of its relative frequency in the summary to its relative
frequency in the method is averaged over the method's summaries, attributed
to the keyword's code area, and finally averaged per (method category, code
area) cell.  Unlearned cells default to 1.0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .jparse import CodeArea, MethodCategory, MethodModel
from .textpipe import KeywordBag, Lexicon, preprocess, preprocess_token_stream, synonyms

# a summary this unpopular is dropped automatically and never learned from
REMOVAL_NET_VOTES = -3
REMOVAL_MIN_VOTES = 5


@dataclass
class SummaryRecord:
    text: str
    upvotes: int = 0
    downvotes: int = 0
    author_tier: str = ""

    @property
    def removed(self) -> bool:
        total = self.upvotes + self.downvotes
        return total >= REMOVAL_MIN_VOTES and (self.upvotes - self.downvotes) <= REMOVAL_NET_VOTES


@dataclass
class CrowdCorpusEntry:
    method: MethodModel
    summaries: list[SummaryRecord] = field(default_factory=list)


@dataclass
class WeightsDB:
    """Learned weights per (method category, code area); 1.0 when unlearned."""

    table: dict[tuple[MethodCategory, CodeArea], float] = field(default_factory=dict)
    provenance: dict[tuple[MethodCategory, CodeArea], int] = field(default_factory=dict)

    def get(self, category: MethodCategory, area: CodeArea) -> float:
        return self.table.get((category, area), 1.0)

    def scaled(self, factor: float) -> "WeightsDB":
        return WeightsDB(
            table={k: v * factor for k, v in self.table.items()},
            provenance=dict(self.provenance),
        )

    def to_json(self) -> dict:
        doc: dict[str, dict[str, float]] = {}
        for (cat, area), value in sorted(self.table.items(), key=lambda kv: (kv[0][0].value, int(kv[0][1]))):
            doc.setdefault(cat.value, {})[area.name] = value
        return doc

    @staticmethod
    def from_json(doc: dict) -> "WeightsDB":
        db = WeightsDB()
        for cat_name, areas in doc.items():
            for area_name, value in areas.items():
                db.table[(MethodCategory(cat_name), CodeArea[area_name])] = float(value)
        return db

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2, sort_keys=True), "utf-8")

    @staticmethod
    def load(path: str | Path) -> "WeightsDB":
        return WeightsDB.from_json(json.loads(Path(path).read_text("utf-8")))

    @staticmethod
    def defaults() -> "WeightsDB":
        path = Path(str(resources.files("codesum").joinpath("data", "default_weights.json")))
        return WeightsDB.load(path)


def method_keywords(m: MethodModel, lex: Lexicon, extra_known: set[str] | None = None) -> KeywordBag:
    """Preprocessed keyword bag of a method, each keyword tagged with its
    highest-priority code area."""
    known = set(extra_known or ())
    known |= _identifier_pieces(m)
    bag = KeywordBag()
    for raw, area in m.bag_tokens():
        for keyword in preprocess_token_stream([raw], lex, known):
            bag.add(keyword, area=area)
    return bag


def summary_keywords(text: str, lex: Lexicon, method_vocab: set[str] | None = None) -> KeywordBag:
    """Preprocessed keyword bag of a summary; the method's identifier pieces
    are protected from spell correction."""
    return preprocess(text, lex, method_vocab or ())


def _identifier_pieces(m: MethodModel) -> set[str]:
    import re

    pieces: set[str] = set()
    for raw, _area in m.bag_tokens():
        for part in re.findall(r"[A-Z]+(?![a-z])|[A-Z][a-z]+|[a-z]+", raw):
            pieces.add(part.lower())
    return pieces


def common_words(s: KeywordBag, m: KeywordBag, lex: Lexicon) -> set[str]:
    """Method-side keywords shared with the summary, directly or via a
    synonym (Jaccard-style matching keeps the method keyword as the witness
    so code-area attribution stays possible)."""
    summary_words = s.keywords()
    out: set[str] = set()
    for w in m.keywords():
        if w in summary_words or (synonyms(w, lex) & summary_words):
            out.add(w)
    return out


def weight_in_method(w: str, m: KeywordBag) -> float:
    total = m.total()
    if total == 0:
        raise ValueError("method keyword bag is empty")
    return m.counts.get(w, 0) / total


def weight_in_summary(w: str, s: KeywordBag) -> float:
    total = s.total()
    if total == 0:
        raise ValueError("summary keyword bag is empty")
    return s.counts.get(w, 0) / total


def _summary_occurrences(w: str, s: KeywordBag, lex: Lexicon) -> int:
    """Occurrences of w in the summary, counting synonym matches as the word."""
    count = s.counts.get(w, 0)
    for syn in synonyms(w, lex):
        count += s.counts.get(syn, 0)
    return count


def normalized_weight(w: str, s: KeywordBag, m: KeywordBag, lex: Lexicon | None = None) -> float:
    """Rate of the word's use in the summary relative to the method."""
    wm = weight_in_method(w, m)
    if wm == 0:
        raise ValueError(f"{w!r} is not a method keyword")
    if lex is None:
        ws = weight_in_summary(w, s)
    else:
        total = s.total()
        if total == 0:
            raise ValueError("summary keyword bag is empty")
        ws = _summary_occurrences(w, s, lex) / total
    return ws / wm


def learn_weights(corpus: list[CrowdCorpusEntry], lex: Lexicon, base: "WeightsDB | None" = None) -> WeightsDB:
    """Average normalized keyword weights into (category, area) cells.

    Per method: each keyword shared with at least one summary gets the mean
    of its normalized weights over all of that method's (non-removed)
    summaries, attributed to its code area.  Cells average per-method area
    means so heavily-summarized methods cannot dominate a category.
    """
    cell_method_means: dict[tuple[MethodCategory, CodeArea], list[float]] = {}
    cell_samples: dict[tuple[MethodCategory, CodeArea], int] = {}
    warnings: list[str] = []
    for entry in corpus:
        live = [s for s in entry.summaries if not s.removed]
        if not live:
            warnings.append(f"{entry.method.fqname}: no usable summaries, skipped")
            continue
        m_bag = method_keywords(entry.method, lex)
        if m_bag.total() == 0:
            warnings.append(f"{entry.method.fqname}: empty keyword bag, skipped")
            continue
        method_vocab = _identifier_pieces(entry.method)
        s_bags = [summary_keywords(s.text, lex, method_vocab) for s in live]
        s_bags = [b for b in s_bags if b.total() > 0]
        if not s_bags:
            warnings.append(f"{entry.method.fqname}: no usable summaries, skipped")
            continue
        shared: set[str] = set()
        for s_bag in s_bags:
            shared |= common_words(s_bag, m_bag, lex)
        per_area: dict[CodeArea, list[float]] = {}
        for w in shared:
            values = [normalized_weight(w, s_bag, m_bag, lex) for s_bag in s_bags]
            keyword_weight = sum(values) / len(values)
            area = m_bag.areas[w]
            per_area.setdefault(area, []).append(keyword_weight)
        for area, keyword_weights in per_area.items():
            method_mean = sum(keyword_weights) / len(keyword_weights)
            for cat in sorted(entry.method.categories, key=lambda c: c.value):
                cell = (cat, area)
                cell_method_means.setdefault(cell, []).append(method_mean)
                cell_samples[cell] = cell_samples.get(cell, 0) + len(keyword_weights)
    db = WeightsDB(table=dict(base.table) if base else {}, provenance=dict(base.provenance) if base else {})
    for cell, means in cell_method_means.items():
        db.table[cell] = sum(means) / len(means)
        db.provenance[cell] = cell_samples[cell]
    db.warnings = warnings
    return db


def lookup_weight(db: WeightsDB, categories: "set[MethodCategory] | MethodModel", area: CodeArea) -> float:
    """Mean cell weight over the method's categories (defaults fill gaps)."""
    if isinstance(categories, MethodModel):
        categories = categories.categories
    if not categories:
        return 1.0
    return sum(db.get(cat, area) for cat in categories) / len(categories)
