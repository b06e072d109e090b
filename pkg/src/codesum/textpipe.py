"""Identifier and sentence preprocessing: splitting, abbreviation expansion,
spell correction, stopword removal, stemming, and synonym lookup.

The pipeline turns raw text (identifiers or natural-language summaries) into
a normalized multiset of lowercase stemmed keywords.  Pipeline order:

    tokenize -> split -> expand abbreviations -> lowercase -> spell-correct
             -> remove stopwords -> stem

Standalone digit tokens and single-character tokens are dropped: they carry
no summary semantics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

_TOKEN_RE = re.compile(r"[A-Za-z0-9_]+")
# acronym runs stay intact up to the last capital before a lowercase letter
_SPLIT_RE = re.compile(r"[A-Z]+(?![a-z])|[A-Z][a-z]+|[a-z]+|[0-9]+")
_ALPHA_RE = re.compile(r"[a-z]+$")

_LETTERS = "abcdefghijklmnopqrstuvwxyz"

# words never shortened further; maps irregular forms to their stem
_IRREGULAR_STEMS = {
    "children": "child",
    "indices": "index",
    "matrices": "matrix",
    "vertices": "vertex",
    "mice": "mouse",
    "men": "man",
    "women": "woman",
    "feet": "foot",
    "geese": "goose",
    "teeth": "tooth",
    "using": "use",
    "used": "use",
    "uses": "use",
    "classes": "class",
    "statuses": "status",
}

# trailing double consonants undoubled after -ing/-ed stripping (ll/ss/ff/zz kept)
_UNDOUBLE = set("bdgkmnprt")


@dataclass(frozen=True)
class Lexicon:
    """Immutable lookup tables backing the preprocessing pipeline."""

    abbreviations: Mapping[str, str]
    synonyms: Mapping[str, frozenset[str]]
    stopwords: frozenset[str]
    word_frequencies: Mapping[str, int]
    # stems of known corpus words; spell correction never rewrites these
    stemmed_known: frozenset[str] = field(default_factory=frozenset)

    @staticmethod
    def load(root: Path | None = None) -> "Lexicon":
        """Load the lexicon from a directory of data files (default: bundled)."""
        if root is None:
            root = Path(str(resources.files("codesum").joinpath("data")))
        stopwords = frozenset(
            w.strip().lower()
            for w in (root / "stopwords.txt").read_text("utf-8").splitlines()
            if w.strip()
        )
        abbreviations = {}
        for line in (root / "abbrev.tsv").read_text("utf-8").splitlines():
            if not line.strip():
                continue
            short, full = line.split("\t")
            abbreviations[short.strip().lower()] = full.strip().lower()
        synonyms: dict[str, set[str]] = {}
        for line in (root / "synonyms.tsv").read_text("utf-8").splitlines():
            if not line.strip():
                continue
            word, rest = line.split("\t")
            word = word.strip().lower()
            for other in rest.split(","):
                other = other.strip().lower()
                if other and other != word:
                    synonyms.setdefault(word, set()).add(other)
                    synonyms.setdefault(other, set()).add(word)
        frequencies = {}
        for line in (root / "freq.tsv").read_text("utf-8").splitlines():
            if not line.strip():
                continue
            word, count = line.split("\t")
            frequencies[word.strip().lower()] = int(count)
        stemmed = frozenset(stem(w) for w in frequencies) | frozenset(
            stem(v) for v in abbreviations.values()
        )
        return Lexicon(
            abbreviations=abbreviations,
            synonyms={k: frozenset(v) for k, v in synonyms.items()},
            stopwords=stopwords,
            word_frequencies=frequencies,
            stemmed_known=stemmed,
        )


@dataclass
class KeywordBag:
    """Multiset of preprocessed keywords, optionally tagged with a code area.

    ``areas`` maps keyword -> the smallest (highest-priority) area tag seen
    among its occurrences; tags are any orderable values (the parser uses its
    code-area enum).
    """

    counts: dict[str, int] = field(default_factory=dict)
    areas: dict[str, object] = field(default_factory=dict)

    def add(self, keyword: str, area: object = None, count: int = 1) -> None:
        self.counts[keyword] = self.counts.get(keyword, 0) + count
        if area is not None:
            prev = self.areas.get(keyword)
            if prev is None or area < prev:
                self.areas[keyword] = area

    def total(self) -> int:
        return sum(self.counts.values())

    def keywords(self) -> set[str]:
        return set(self.counts)

    def __contains__(self, keyword: str) -> bool:
        return keyword in self.counts

    def __eq__(self, other: object) -> bool:
        return isinstance(other, KeywordBag) and self.counts == other.counts

    def render(self) -> str:
        """Space-joined keywords with multiplicity; inverse-ish of preprocess."""
        parts = []
        for word in sorted(self.counts):
            parts.extend([word] * self.counts[word])
        return " ".join(parts)


def split_identifier(token: str) -> list[str]:
    """Split an identifier on underscores, punctuation, digit boundaries and
    camel-case transitions, preserving original case.

    "print_mp3FileContent" -> [print, mp, 3, File, Content]
    "XMLHttpRequest" -> [XML, Http, Request]
    """
    if not token:
        raise ValueError("cannot split an empty token")
    return [m.group(0) for chunk in re.split(r"[^A-Za-z0-9]+", token) for m in _SPLIT_RE.finditer(chunk)]


def expand_abbreviation(token: str, lex: Lexicon) -> str:
    """Expand a known abbreviation ("pntr" -> "pointer"); identity otherwise."""
    return lex.abbreviations.get(token, token)


def _edits1(word: str) -> set[str]:
    splits = [(word[:i], word[i:]) for i in range(len(word) + 1)]
    deletes = [a + b[1:] for a, b in splits if b]
    transposes = [a + b[1] + b[0] + b[2:] for a, b in splits if len(b) > 1]
    replaces = [a + c + b[1:] for a, b in splits if b for c in _LETTERS]
    inserts = [a + c + b for a, b in splits for c in _LETTERS]
    return set(deletes + transposes + replaces + inserts)


def correct_spelling(word: str, lex: Lexicon, extra_known: Iterable[str] = ()) -> str:
    """Frequency-corpus spell correction: known words are fixed points, else
    the most frequent candidate at edit distance 1, then 2, else unchanged.

    Words under 3 characters, and words the pipeline itself can produce
    (stems of corpus words, project identifiers), are never rewritten.
    """
    if len(word) < 3 or not _ALPHA_RE.match(word):
        return word
    freq = lex.word_frequencies
    if not freq:
        return word
    if word in freq or word in lex.stopwords or word in lex.stemmed_known or word in set(extra_known):
        return word
    stemmed = stem(word)
    if stemmed in freq or stemmed in lex.stemmed_known:
        return word
    near = _edits1(word)
    candidates = [w for w in near if w in freq]
    if not candidates:
        candidates = [w for e1 in near for w in _edits1(e1) if w in freq]
    if not candidates:
        return word
    return max(candidates, key=lambda w: (freq[w], w))


def stem(word: str) -> str:
    """Rule-based suffix stripping (plurals, -ing, -ed); idempotent."""
    if word in _IRREGULAR_STEMS:
        return _IRREGULAR_STEMS[word]
    out = word
    if out.endswith("ies") and len(out) >= 5:
        out = out[:-3] + "y"
    elif out.endswith("es") and len(out) >= 4 and out[-3] in "sxz":
        out = out[:-2]
    elif out.endswith("s") and len(out) >= 3 and not out.endswith(("ss", "us", "is")):
        out = out[:-1]
    if out.endswith("ing") and len(out) >= 7:
        out = _undouble(out[:-3])
    elif out.endswith("ed") and len(out) >= 5:
        out = _undouble(out[:-2])
    return out


def _undouble(word: str) -> str:
    if len(word) >= 2 and word[-1] == word[-2] and word[-1] in _UNDOUBLE:
        return word[:-1]
    return word


def preprocess(text: str, lex: Lexicon, extra_known: Iterable[str] = ()) -> KeywordBag:
    """Run the full pipeline over free text and aggregate keyword counts."""
    bag = KeywordBag()
    for keyword in preprocess_token_stream(_TOKEN_RE.findall(text), lex, extra_known):
        bag.add(keyword)
    return bag


def preprocess_token_stream(
    tokens: Iterable[str], lex: Lexicon, extra_known: Iterable[str] = ()
) -> Iterable[str]:
    """Yield normalized keywords for each raw token, in order."""
    known = set(extra_known)
    for token in tokens:
        for piece in split_identifier(token):
            if piece.isdigit():
                continue
            word = expand_abbreviation(piece.lower(), lex)
            for sub in word.split():
                sub = correct_spelling(sub, lex, known)
                if len(sub) < 2 or sub in lex.stopwords:
                    continue
                yield stem(sub)


def synonyms(word: str, lex: Lexicon) -> set[str]:
    """Synonym set for a (stemmed, lowercase) word; never contains the word."""
    return set(lex.synonyms.get(word, frozenset())) - {word}
