"""Customer co-occurrence sentences.

Transactions are grouped by (category, ISO year, ISO week); within each
group, customer keys ordered by timestamp form one sentence.  Customers
who transact in the same category during the same week therefore appear
in shared context, which is what the embedding trainer consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import FormatError
from .ingest import RawTransaction, customer_key_of


@dataclass(frozen=True, order=True)
class GroupKey:
    """Sentence grouping key: category plus ISO calendar year and week."""

    category: str
    iso_year: int
    iso_week: int


@dataclass
class SentenceCorpus:
    """Ordered sentences of customer-key tokens.

    ``group_keys`` aligns with ``sentences`` when the corpus was built
    from transactions; corpora loaded from text have no group metadata.
    """

    sentences: list[list[str]]
    group_keys: list[GroupKey] | None = None

    @property
    def n_tokens(self) -> int:
        return sum(len(s) for s in self.sentences)


def group_key_of(t: RawTransaction) -> GroupKey:
    iso = t.timestamp.isocalendar()
    return GroupKey(category=t.category, iso_year=iso[0], iso_week=iso[1])


def build_sentences(transactions: Sequence[RawTransaction]) -> SentenceCorpus:
    """Build one sentence per (category, ISO week) group.

    Tokens are customer keys ordered by (timestamp, key) within the
    group; a customer transacting repeatedly in a group appears once per
    transaction, so the total token count equals the transaction count.
    Sentences are emitted in sorted group-key order.
    """
    groups: dict[GroupKey, list[tuple]] = {}
    for t in transactions:
        groups.setdefault(group_key_of(t), []).append((t.timestamp, customer_key_of(t)))
    keys = sorted(groups)
    sentences = []
    for gk in keys:
        entries = sorted(groups[gk])
        sentences.append([key for _, key in entries])
    return SentenceCorpus(sentences=sentences, group_keys=keys)


def save_sentences(corpus: SentenceCorpus, path: str | Path) -> None:
    """Write one space-separated sentence per line."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for sentence in corpus.sentences:
            fh.write(" ".join(sentence) + "\n")


def load_sentences(path: str | Path) -> SentenceCorpus:
    """Load sentences written by :func:`save_sentences`.

    Blank lines are rejected: every sentence must hold at least one
    token.
    """
    sentences: list[list[str]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                raise FormatError("blank sentence", line=line_no)
            sentences.append(line.split())
    return SentenceCorpus(sentences=sentences, group_keys=None)
