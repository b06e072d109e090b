"""Keyword-level evaluation measures: precision, recall, F-score, overall
accuracy, and summary-and-method overlap (SMO).

All measures use set semantics.  Empty-denominator cases return None (a
flagged undefined value) for precision/recall; accuracy and SMO raise on
undefined input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .textpipe import KeywordBag, Lexicon, synonyms


@dataclass(frozen=True)
class KeywordComparison:
    retrieved: frozenset[str]
    gold: frozenset[str]
    universe: frozenset[str] = frozenset()

    @staticmethod
    def of(retrieved, gold, universe=()) -> "KeywordComparison":
        return KeywordComparison(frozenset(retrieved), frozenset(gold), frozenset(universe))


def precision(c: KeywordComparison) -> float | None:
    if not c.retrieved:
        return None
    return len(c.retrieved & c.gold) / len(c.retrieved)


def recall(c: KeywordComparison) -> float | None:
    if not c.gold:
        return None
    return len(c.retrieved & c.gold) / len(c.gold)


def fscore(c: KeywordComparison) -> float | None:
    p = precision(c)
    r = recall(c)
    if p is None or r is None:
        return None
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


def overall_accuracy(c: KeywordComparison) -> float:
    """(TP+TN)/(TP+TN+FP+FN) over an explicit keyword universe."""
    if not c.universe:
        raise ValueError("accuracy needs a non-empty universe")
    retrieved = c.retrieved & c.universe
    gold = c.gold & c.universe
    tp = len(retrieved & gold)
    fp = len(retrieved - gold)
    fn = len(gold - retrieved)
    tn = len(c.universe) - tp - fp - fn
    return (tp + tn) / len(c.universe)


def smo(s: KeywordBag | set, m: KeywordBag | set, lex: Lexicon) -> float:
    """|S ∩ (M ∪ Syn(M))| / |S ∪ (M ∪ Syn(M))| over keyword sets."""
    s_words = s.keywords() if isinstance(s, KeywordBag) else set(s)
    m_words = m.keywords() if isinstance(m, KeywordBag) else set(m)
    expanded = set(m_words)
    for w in m_words:
        expanded |= synonyms(w, lex)
    union = s_words | expanded
    if not union:
        raise ValueError("both keyword sets are empty")
    return len(s_words & expanded) / len(union)
