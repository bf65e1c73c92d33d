"""Per-term totals (tc) and document frequencies (df) over a corpus.

tc counts every occurrence of a term corpus-wide; df counts the documents
containing it at least once. For every stored term 1 <= df <= tc and
df <= doc_count, which downstream modules rely on (ratios are >= 1, the
tc-as-df proxy never overshoots the document count).
"""

from __future__ import annotations

import array
import itertools
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import ParseError, ValidationError
from .ingest import Document, FrequencyListEntry

#: Accumulated counts are capped at unsigned 64-bit.
MAX_TOTAL = 2**64 - 1

#: The columnar reader stores counts as numpy int64, a tighter bound.
MAX_COLUMN = 2**63 - 1

_SHARD_SIZE = 256  # documents per worker batch when jobs > 1


@dataclass
class TermStatsTable:
    """Term -> (tc, df) mapping plus the corpus document count.

    Treated as immutable once built; reads are safe to share across threads.
    """

    entries: dict[str, tuple[int, int]]
    doc_count: int

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, term: str) -> bool:
        return term in self.entries

    def tc(self, term: str) -> int:
        """Total occurrences of ``term``, 0 if unseen."""
        got = self.entries.get(term)
        return got[0] if got else 0

    def df(self, term: str) -> int:
        """Number of documents containing ``term``, 0 if unseen."""
        got = self.entries.get(term)
        return got[1] if got else 0

    def terms(self) -> list[str]:
        """All stored terms in sorted order."""
        return sorted(self.entries)

    def count_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(tc, df) as parallel int64 arrays in sorted-term order."""
        terms = self.terms()
        try:
            tc = np.fromiter((self.entries[t][0] for t in terms), dtype=np.int64, count=len(terms))
            df = np.fromiter((self.entries[t][1] for t in terms), dtype=np.int64, count=len(terms))
        except OverflowError:
            raise ValidationError("a count exceeds the int64 array limit of 2**63 - 1") from None
        return tc, df

    def validate(self) -> None:
        """Check the table invariants; raises ValidationError on the first hole."""
        if self.doc_count < 0:
            raise ValidationError(f"doc_count must be >= 0, got {self.doc_count}")
        for term, (tc, df) in self.entries.items():
            if not 1 <= df <= tc:
                raise ValidationError(f"term {term!r}: need 1 <= df <= tc, got tc={tc} df={df}")
            if df > self.doc_count:
                raise ValidationError(
                    f"term {term!r}: df={df} exceeds doc_count={self.doc_count}"
                )
            if tc > MAX_TOTAL:
                raise ValidationError(f"term {term!r}: tc={tc} exceeds 2**64 - 1")


def compute_tc_df(documents: Iterable[Document], jobs: int | None = None) -> TermStatsTable:
    """Aggregate tc and df for every term across ``documents``.

    A term occurring k times in one document adds k to its tc and exactly 1
    to its df. Duplicate or empty document ids are refused. With jobs > 1
    the stream is cut into shards that are counted concurrently and then
    recombined with :func:`merge`; results are identical to the single-pass
    order because merging is commutative.
    """
    checked = _checked_ids(documents)
    if jobs is None or jobs <= 1:
        return _tally(checked)
    total = TermStatsTable({}, 0)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        pending = []
        for shard in _shards(checked, _SHARD_SIZE):
            pending.append(pool.submit(_tally, shard))
            if len(pending) >= jobs * 2:
                total = merge(total, pending.pop(0).result())
        for fut in pending:
            total = merge(total, fut.result())
    return total


def _checked_ids(documents: Iterable[Document]) -> Iterator[Document]:
    seen: set[str] = set()
    for doc in documents:
        if not doc.id:
            raise ValidationError("document id must be non-empty")
        if doc.id in seen:
            raise ValidationError(f"duplicate document id: {doc.id!r}")
        seen.add(doc.id)
        yield doc


def _shards(documents: Iterator[Document], size: int) -> Iterator[list[Document]]:
    while True:
        shard = list(itertools.islice(documents, size))
        if not shard:
            return
        yield shard


def _tally(documents: Iterable[Document]) -> TermStatsTable:
    tc: dict[str, int] = {}
    df: dict[str, int] = {}
    n_docs = 0
    for doc in documents:
        n_docs += 1
        for term, k in Counter(doc.tokens).items():
            tc[term] = tc.get(term, 0) + k
            df[term] = df.get(term, 0) + 1
    _check_overflow(tc)
    return TermStatsTable({t: (tc[t], df[t]) for t in tc}, n_docs)


def _check_overflow(tc: dict[str, int]) -> None:
    for term, total in tc.items():
        if total > MAX_TOTAL:
            raise ValidationError(f"term {term!r}: accumulated tc exceeds 2**64 - 1")


def merge(a: TermStatsTable, b: TermStatsTable) -> TermStatsTable:
    """Combine two disjointly-counted tables: counts add, doc_count adds.

    Commutative and associative, which is what makes sharded counting safe.
    """
    entries = dict(a.entries)
    for term, (tc, df) in b.entries.items():
        prev = entries.get(term)
        if prev is None:
            entries[term] = (tc, df)
        else:
            entries[term] = (prev[0] + tc, prev[1] + df)
    merged = TermStatsTable(entries, a.doc_count + b.doc_count)
    _check_overflow({t: v[0] for t, v in entries.items()})
    return merged


def frequency_of_frequencies(source, which: str = "tc") -> dict[int, int]:
    """Map count value -> number of distinct terms having that value.

    ``source`` is a TermStatsTable (``which`` selects the tc or df column)
    or an iterable of FrequencyListEntry (``which`` must then be "tc",
    since lists carry no df). The sum over the result's values equals the
    number of distinct terms.
    """
    if which not in ("tc", "df"):
        raise ValidationError(f"which must be 'tc' or 'df', got {which!r}")
    if isinstance(source, TermStatsTable):
        column = 0 if which == "tc" else 1
        values = [pair[column] for pair in source.entries.values()]
    else:
        if which != "tc":
            raise ValidationError("frequency lists carry no df column; use which='tc'")
        values = [entry.count for entry in source]
    if not values:
        raise ValidationError("no terms to histogram")
    return dict(Counter(values))


def write_stats(table: TermStatsTable, path) -> None:
    """Serialize a table as ``#N=<doc_count>`` then term-sorted tc/df rows."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"#N={table.doc_count}\n")
        for term in table.terms():
            if "\t" in term or "\n" in term:
                raise ValidationError(f"term contains a tab or newline: {term!r}")
            tc, df = table.entries[term]
            fh.write(f"{term}\t{tc}\t{df}\n")


def read_stats(path) -> TermStatsTable:
    """Parse a stats file written by :func:`write_stats`.

    Round-trips losslessly. Violations of the header format, the row
    format, or the tc/df invariants raise ParseError with a line number.
    """
    path = Path(path)
    entries: dict[str, tuple[int, int]] = {}
    doc_count = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if line_no == 1:
                if not line.startswith("#N="):
                    raise ParseError(path, line_no, "missing #N=<doc_count> header")
                count_text = line[3:]
                if not (count_text.isascii() and count_text.isdigit()):
                    raise ParseError(path, line_no, f"doc_count is not a plain integer: {count_text!r}")
                doc_count = int(count_text)
                continue
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError(path, line_no, f"expected term<TAB>tc<TAB>df, got {len(parts)} fields")
            term, tc_text, df_text = parts
            if not term:
                raise ParseError(path, line_no, "empty term")
            for label, text in (("tc", tc_text), ("df", df_text)):
                if not (text.isascii() and text.isdigit()):
                    raise ParseError(path, line_no, f"{label} is not a plain integer: {text!r}")
            tc, df = int(tc_text), int(df_text)
            if not 1 <= df <= tc:
                raise ParseError(path, line_no, f"need 1 <= df <= tc, got tc={tc} df={df}")
            if df > doc_count:
                raise ParseError(path, line_no, f"df={df} exceeds doc_count={doc_count}")
            if tc > MAX_TOTAL:
                raise ParseError(path, line_no, "tc exceeds 2**64 - 1")
            if term in entries:
                raise ParseError(path, line_no, f"duplicate term {term!r}")
            entries[term] = (tc, df)
    if doc_count is None:
        raise ParseError(path, 1, "empty file: missing #N=<doc_count> header")
    return TermStatsTable(entries, doc_count)


def read_stats_columns(path) -> tuple[np.ndarray, np.ndarray, int]:
    """Numeric fast path: (tc, df, doc_count) without building the term dict.

    For multi-million-row tables feeding the correlation and ratio
    pipelines, where the terms themselves are irrelevant. Requires strictly
    ascending term order (which write_stats guarantees and which rules out
    duplicates); use :func:`read_stats` for arbitrary row order.
    """
    path = Path(path)
    tc_buf = array.array("q")
    df_buf = array.array("q")
    doc_count = None
    prev_term = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if line_no == 1:
                if not line.startswith("#N="):
                    raise ParseError(path, line_no, "missing #N=<doc_count> header")
                count_text = line[3:]
                if not (count_text.isascii() and count_text.isdigit()):
                    raise ParseError(path, line_no, f"doc_count is not a plain integer: {count_text!r}")
                doc_count = int(count_text)
                continue
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError(path, line_no, f"expected term<TAB>tc<TAB>df, got {len(parts)} fields")
            term = parts[0]
            if prev_term is not None and term <= prev_term:
                raise ParseError(
                    path, line_no,
                    "rows must be in strictly ascending term order for the columnar reader",
                )
            prev_term = term
            try:
                tc, df = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(path, line_no, f"non-integer count field in {line!r}") from None
            if not 1 <= df <= tc:
                raise ParseError(path, line_no, f"need 1 <= df <= tc, got tc={tc} df={df}")
            if df > doc_count:
                raise ParseError(path, line_no, f"df={df} exceeds doc_count={doc_count}")
            if tc > MAX_COLUMN:
                raise ParseError(path, line_no, "tc exceeds the columnar reader's 2**63 - 1 limit")
            tc_buf.append(tc)
            df_buf.append(df)
    if doc_count is None:
        raise ParseError(path, 1, "empty file: missing #N=<doc_count> header")
    return (
        np.frombuffer(tc_buf, dtype=np.int64).copy(),
        np.frombuffer(df_buf, dtype=np.int64).copy(),
        doc_count,
    )
