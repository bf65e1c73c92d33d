"""Standard competition ("sports") ranking and ranking comparisons.

rank(item) = 1 + number of items with a strictly greater value, so tied
values share the minimum rank of their group and the sequence looks like
1, 2, 2, 4. Ranking is always by value descending.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import ValidationError
from .stats import TermStatsTable


@dataclass
class RankedList:
    """Terms with their values and competition ranks, stored columnar.

    Presentation order is value descending with ties broken by term
    ascending; the rank numbers carry all semantics, the tie-break only
    stabilizes output. Iterating yields (term, value, rank) tuples.
    """

    terms: list[str]
    values: np.ndarray
    ranks: np.ndarray

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        for i, term in enumerate(self.terms):
            yield term, int(self.values[i]), int(self.ranks[i])


class OverlapCounts(NamedTuple):
    union_size: int
    intersection_size: int


def rank_values(values) -> np.ndarray:
    """Competition rank of each entry of a non-negative integer vector.

    Vectorized; ranks correspond positionally to the input.
    """
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValidationError("values must be one-dimensional")
    if arr.size == 0:
        return np.empty(0, dtype=np.int64)
    if arr.dtype.kind == "u" and int(arr.max()) > 2**63 - 1:
        raise ValidationError("values exceed the int64 limit of 2**63 - 1")
    if arr.dtype.kind not in "iuO":
        raise ValidationError(f"values must be integers, got dtype {arr.dtype}")
    try:
        v = arr.astype(np.int64)
    except (OverflowError, TypeError, ValueError):
        raise ValidationError("values must be integers within int64 range") from None
    n = v.size
    if n == 0:
        return np.empty(0, dtype=np.int64)
    if v.min() < 0:
        raise ValidationError("values must be non-negative")
    order = np.argsort(-v, kind="stable")
    sorted_vals = v[order]
    group_start = np.zeros(n, dtype=np.int64)
    group_start[1:] = np.where(sorted_vals[1:] != sorted_vals[:-1], np.arange(1, n), 0)
    ranks_sorted = np.maximum.accumulate(group_start) + 1
    ranks = np.empty(n, dtype=np.int64)
    ranks[order] = ranks_sorted
    return ranks


def sports_rank(pairs: Iterable[tuple[str, int]]) -> RankedList:
    """Rank (term, value) pairs by value descending.

    Values must be non-negative integers; duplicate terms are refused.
    Deterministic: equal inputs give byte-equal exports.
    """
    terms: list[str] = []
    values: list[int] = []
    seen: set[str] = set()
    for term, value in pairs:
        if term in seen:
            raise ValidationError(f"duplicate term: {term!r}")
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise ValidationError(f"value for {term!r} is not an integer: {value!r}")
        if value < 0:
            raise ValidationError(f"value for {term!r} is negative: {value}")
        seen.add(term)
        terms.append(term)
        values.append(int(value))
    n = len(terms)
    order = sorted(range(n), key=lambda i: (-values[i], terms[i]))
    ranks = np.empty(n, dtype=np.int64)
    current = 0
    previous = None
    for pos, i in enumerate(order):
        if previous is None or values[i] != previous:
            current = pos + 1
            previous = values[i]
        ranks[pos] = current
    out_values = np.fromiter((values[i] for i in order), dtype=np.int64, count=n)
    return RankedList([terms[i] for i in order], out_values, ranks)


def ranked_by(table: TermStatsTable, by: str = "tc") -> RankedList:
    """Rank a stats table's terms by its tc or df column."""
    if by not in ("tc", "df"):
        raise ValidationError(f"by must be 'tc' or 'df', got {by!r}")
    column = 0 if by == "tc" else 1
    return sports_rank((term, pair[column]) for term, pair in table.entries.items())


def ranking_overlap(
    list_a: RankedList,
    list_b: RankedList,
    from_rank: int = 1,
    to_rank: int | None = None,
) -> OverlapCounts:
    """Union and intersection sizes of two rank windows.

    The window [from_rank, to_rank] selects every term whose rank falls in
    the closed interval, so a tie group straddling the boundary is included
    whenever its shared rank is. Window bounds must satisfy
    1 <= from_rank <= to_rank.
    """
    if to_rank is None:
        to_rank = max(len(list_a), len(list_b))
    if not 1 <= from_rank <= to_rank:
        raise ValidationError(f"need 1 <= from_rank <= to_rank, got [{from_rank}, {to_rank}]")
    sel_a = _window_terms(list_a, from_rank, to_rank)
    sel_b = _window_terms(list_b, from_rank, to_rank)
    return OverlapCounts(len(sel_a | sel_b), len(sel_a & sel_b))


def _window_terms(ranked: RankedList, lo: int, hi: int) -> set[str]:
    inside = (ranked.ranks >= lo) & (ranked.ranks <= hi)
    return {ranked.terms[i] for i in np.flatnonzero(inside)}


@dataclass
class AlignedRanks:
    """Per-term tc-rank and df-rank for one table, positionally aligned.

    Terms are in sorted order; tc_ranks[i] and df_ranks[i] belong to
    terms[i]. This is the paired input that rank correlation consumes.
    """

    terms: list[str]
    tc_ranks: np.ndarray
    df_ranks: np.ndarray

    def __len__(self) -> int:
        return len(self.terms)


def align_ranks(table: TermStatsTable) -> AlignedRanks:
    """Rank every term by tc and by df and pair the two ranks per term.

    Both rankings are over the same term set, so no term is dropped and
    the two rank vectors have equal length. Ties are resolved by the
    competition rule independently in each column.
    """
    if len(table) == 0:
        raise ValidationError("empty table: nothing to rank")
    terms = table.terms()
    tc, df = table.count_arrays()
    return AlignedRanks(terms, rank_values(tc), rank_values(df))


def write_ranked_list(ranked: RankedList, path) -> None:
    """Export ``term<TAB>value<TAB>rank`` rows in presentation order."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for term, value, rank in ranked:
            fh.write(f"{term}\t{value}\t{rank}\n")


def write_rank_scatter(aligned: AlignedRanks, path) -> None:
    """Export ``rank_tc<TAB>rank_df`` rows, sorted by (rank_tc, rank_df).

    One row per term; terms themselves are omitted, matching what a
    scatter plot of the two rankings needs.
    """
    order = np.lexsort((aligned.df_ranks, aligned.tc_ranks))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i in order:
            fh.write(f"{aligned.tc_ranks[i]}\t{aligned.df_ranks[i]}\n")
