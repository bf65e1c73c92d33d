"""Tie-aware rank correlation: Spearman's rho and Kendall's tau.

Two independent Kendall kernels are provided on purpose. The blocked
quadratic kernel (:func:`kendall_tau_naive`) counts every pair literally
and serves as the ground truth; the merge-sort kernel
(:func:`kendall_tau_fast`) reproduces the same five pair counts in
O(n log n) style time and is the one to use beyond a few thousand pairs.
They must never be collapsed into one: each checks the other.

Pair vocabulary used throughout, for a sample of n points:

    n0 = n*(n-1)/2            all unordered pairs
    C / D                     concordant / discordant pairs
    TX / TY                   pairs tied in x only / in y only
    TXY                       pairs tied in both

with C + D + TX + TY + TXY == n0. Then

    tau_a = (C - D) / n0
    tau_b = (C - D) / sqrt((C + D + TX) * (C + D + TY))

where the tau_b denominator factors are exactly the pairs not tied in y
and not tied in x respectively.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import islice, permutations

import numpy as np
from scipy import stats as _sps

from .errors import DegenerateInputError, ValidationError

#: Reported p-values never go below this floor.
P_VALUE_FLOOR = 2.2e-16

#: Largest n for which the exact permutation null of rho is enumerated.
EXACT_P_MAX_N = 10

_NAIVE_BLOCK = 512


def _as_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional")
    if arr.dtype.kind == "f":
        if arr.size and not np.isfinite(arr).all():
            raise ValidationError(f"{name} contains non-finite values")
        return arr.astype(np.float64)
    if arr.size and arr.dtype.kind == "u" and int(arr.max()) > 2**63 - 1:
        raise ValidationError(f"{name} exceeds the int64 limit")
    if arr.dtype.kind not in "iuO":
        raise ValidationError(f"{name} must be numeric, got dtype {arr.dtype}")
    try:
        return arr.astype(np.int64)
    except (OverflowError, TypeError, ValueError):
        raise ValidationError(f"{name} must hold integers within int64 range") from None


def _as_pair_vectors(x, y, min_n: int = 2) -> tuple[np.ndarray, np.ndarray]:
    xv = _as_vector(x, "x")
    yv = _as_vector(y, "y")
    if xv.size != yv.size:
        raise ValidationError(f"length mismatch: {xv.size} x values vs {yv.size} y values")
    if xv.size < min_n:
        raise DegenerateInputError(f"need at least {min_n} pairs, got {xv.size}")
    return xv, yv


def spearman_rho(x, y) -> float:
    """Spearman's rho: the Pearson correlation of the two rank vectors.

    Computing Pearson on the ranks is the definition that stays correct
    under ties, unlike the classic 1 - 6*sum(d^2)/(n(n^2-1)) shortcut.
    Raises DegenerateInputError when either vector has zero variance
    (every rank tied), since rho is undefined there.
    """
    xv, yv = _as_pair_vectors(x, y)
    dx = xv.astype(np.float64) - xv.mean(dtype=np.float64)
    dy = yv.astype(np.float64) - yv.mean(dtype=np.float64)
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInputError("zero variance: one vector is entirely tied")
    rho = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, rho))


def spearman_rho_shortcut(x, y) -> float:
    """The 1 - 6*sum(d^2)/(n(n^2-1)) formula, kept as a diagnostic only.

    Exact for tie-free rank vectors and biased under ties; the deviation
    from :func:`spearman_rho` is a quick measure of how much the ties
    matter in a given sample. Never use this as the primary estimate.
    """
    xv, yv = _as_pair_vectors(x, y)
    n = xv.size
    d = xv.astype(np.float64) - yv.astype(np.float64)
    ssd = float(np.dot(d, d))
    return 1.0 - 6.0 * ssd / (n * (float(n) * n - 1.0))


def fractional_rank(values) -> np.ndarray:
    """Mid-rank (average) ranks, descending: each tie group gets the mean
    of the positions it occupies. Useful as an alternative re-ranking in
    front of the correlation functions; rankings elsewhere in the package
    stay competition-style.
    """
    v = _as_vector(values, "values")
    n = v.size
    if n == 0:
        return np.empty(0, dtype=np.float64)
    order = np.argsort(-v, kind="stable")
    sv = v[order]
    change = np.flatnonzero(sv[1:] != sv[:-1])
    starts = np.concatenate(([0], change + 1))
    ends = np.concatenate((change + 1, [n]))
    # mean of 1-based positions starts+1 .. ends
    group_rank = (starts + ends + 1) / 2.0
    ranks = np.empty(n, dtype=np.float64)
    ranks[order] = np.repeat(group_rank, ends - starts)
    return ranks


@dataclass(frozen=True)
class KendallCounts:
    """Complete all-pairs bookkeeping for one paired sample."""

    n: int
    concordant: int
    discordant: int
    ties_x: int
    ties_y: int
    ties_xy: int
    tau_a: float
    tau_b: float

    @property
    def total_pairs(self) -> int:
        return self.n * (self.n - 1) // 2


def _counts_to_taus(n: int, conc: int, disc: int, tx: int, ty: int, txy: int) -> KendallCounts:
    n0 = n * (n - 1) // 2
    if conc + disc + tx + ty + txy != n0:
        raise AssertionError("pair categories do not partition all pairs")
    numer = conc - disc
    tau_a = numer / n0
    not_tied_y = conc + disc + tx
    not_tied_x = conc + disc + ty
    if not_tied_x == 0 or not_tied_y == 0:
        raise DegenerateInputError("tau-b undefined: one vector is entirely tied")
    tau_b = numer / math.sqrt(not_tied_x * not_tied_y)
    tau_b = max(-1.0, min(1.0, tau_b))
    return KendallCounts(n, conc, disc, tx, ty, txy, tau_a, tau_b)


def kendall_tau_naive(x, y, block: int | None = None) -> KendallCounts:
    """Count all n(n-1)/2 pairs literally. O(n^2), the reference kernel.

    Blocked so the pair matrices stay cache-sized; usable to a few tens of
    thousands of points, after which :func:`kendall_tau_fast` (which this
    function exists to check) is the only practical option.

    The default block grows with n (within fixed bounds) so that the share
    of wasted work in the half-empty diagonal blocks stays roughly constant
    across input sizes and measured cost tracks the true pair count.
    """
    xv, yv = _as_pair_vectors(x, y)
    n = xv.size
    if block is None:
        block = min(_NAIVE_BLOCK, max(256, n // 8))
    if block < 1:
        raise ValidationError(f"block must be >= 1, got {block}")
    conc = disc = tx = ty = txy = 0
    for i0 in range(0, n, block):
        i1 = min(i0 + block, n)
        xi = xv[i0:i1, None]
        yi = yv[i0:i1, None]
        for j0 in range(i0, n, block):
            j1 = min(j0 + block, n)
            sx = np.sign(xi - xv[None, j0:j1])
            sy = np.sign(yi - yv[None, j0:j1])
            if j0 == i0:
                keep = np.triu(np.ones((i1 - i0, j1 - j0), dtype=bool), k=1)
            else:
                keep = None
            prod = sx * sy
            x_tied = sx == 0
            y_tied = sy == 0
            if keep is None:
                conc += int((prod > 0).sum())
                disc += int((prod < 0).sum())
                tx += int((x_tied & ~y_tied).sum())
                ty += int((~x_tied & y_tied).sum())
                txy += int((x_tied & y_tied).sum())
            else:
                conc += int(((prod > 0) & keep).sum())
                disc += int(((prod < 0) & keep).sum())
                tx += int((x_tied & ~y_tied & keep).sum())
                ty += int((~x_tied & y_tied & keep).sum())
                txy += int((x_tied & y_tied & keep).sum())
    return _counts_to_taus(n, conc, disc, tx, ty, txy)


def kendall_tau_fast(x, y) -> KendallCounts:
    """Merge-sort pair counting, near O(n log n); handles tens of millions.

    Sorts by (x, y), derives the tie counts from run lengths, and counts
    discordant pairs as strict inversions of the y sequence. Produces
    exactly the same KendallCounts as :func:`kendall_tau_naive`.
    """
    xv, yv = _as_pair_vectors(x, y)
    n = xv.size
    order = np.lexsort((yv, xv))
    xs = xv[order]
    ys = yv[order]
    n0 = n * (n - 1) // 2
    tie_x_all = _tied_pairs(xs)
    tie_y_all = _tied_pairs(np.sort(yv, kind="stable"))
    tie_xy = _tied_pairs_joint(xs, ys)
    disc = _count_strict_inversions(_dense_codes(ys))
    conc = n0 - tie_x_all - tie_y_all + tie_xy - disc
    return _counts_to_taus(
        n, int(conc), int(disc), int(tie_x_all - tie_xy), int(tie_y_all - tie_xy), int(tie_xy)
    )


def _tied_pairs(sorted_vals: np.ndarray) -> int:
    """Sum of L*(L-1)/2 over runs of equal values (input must be sorted)."""
    n = sorted_vals.size
    change = np.flatnonzero(sorted_vals[1:] != sorted_vals[:-1])
    bounds = np.concatenate(([0], change + 1, [n]))
    lengths = np.diff(bounds)
    return int((lengths * (lengths - 1) // 2).sum())


def _tied_pairs_joint(xs: np.ndarray, ys: np.ndarray) -> int:
    n = xs.size
    change = np.flatnonzero((xs[1:] != xs[:-1]) | (ys[1:] != ys[:-1]))
    bounds = np.concatenate(([0], change + 1, [n]))
    lengths = np.diff(bounds)
    return int((lengths * (lengths - 1) // 2).sum())


def _dense_codes(values: np.ndarray) -> np.ndarray:
    _, codes = np.unique(values, return_inverse=True)
    return codes.astype(np.int64)


def _count_strict_inversions(codes: np.ndarray) -> int:
    """Number of index pairs i < j with codes[i] > codes[j].

    Bottom-up merge passes, fully vectorized: at each pass every pair of
    adjacent width-blocks is counted at once. The codes of different rows
    are pushed into disjoint value ranges (row * span) so one flat
    searchsorted call resolves every block pair simultaneously; a stable
    row-wise sort then merges the blocks for the next pass.
    """
    n = codes.size
    if n < 2:
        return 0
    arr = codes.astype(np.int64, copy=True)
    span = n  # dense codes live in [0, n), so row offsets never collide
    total = 0
    width = 1
    while width < n:
        two = width * 2
        npairs = n // two
        m = npairs * two
        if npairs:
            mat = arr[:m].reshape(npairs, two)
            left = mat[:, :width]
            right = mat[:, width:]
            row = np.arange(npairs, dtype=np.int64)
            flat_left = (left + row[:, None] * span).ravel()
            flat_right = (right + row[:, None] * span).ravel()
            pos = np.searchsorted(flat_left, flat_right, side="right")
            # pos counts left-elements <= each right-element across the
            # whole flat array; subtract each row's start to localize.
            within = pos - np.repeat(row * width, width)
            total += npairs * width * width - int(within.sum(dtype=np.int64))
            mat.sort(axis=1, kind="stable")
        remainder = n - m
        if remainder > width:
            left_tail = arr[m : m + width]
            right_tail = arr[m + width :]
            pos = np.searchsorted(left_tail, right_tail, side="right")
            total += width * right_tail.size - int(pos.sum(dtype=np.int64))
            arr[m:] = np.sort(arr[m:], kind="stable")
        width = two
    return total


def tau_to_rho(tau: float) -> float:
    """Estimate Spearman's rho from Kendall's tau-b.

    Uses the odd cubic rho_est = (3*tau - tau^3) / 2: exact at -1, 0, +1,
    strictly monotone on [-1, 1], and |rho_est| >= |tau| everywhere, which
    matches the empirical regularity that rho runs above tau in magnitude
    on real rank data (0.8 maps to 0.944).
    """
    if isinstance(tau, bool) or not isinstance(tau, (int, float, np.floating, np.integer)):
        raise ValidationError(f"tau must be a number, got {type(tau).__name__}")
    t = float(tau)
    if math.isnan(t) or not -1.0 <= t <= 1.0:
        raise ValidationError(f"tau must lie in [-1, 1], got {tau!r}")
    return (3.0 * t - t**3) / 2.0


@lru_cache(maxsize=None)
def _exact_rho_null(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Distribution of |rho| over all n! tie-free rank permutations.

    Returns (sorted unique |rho| values, permutation counts). Data
    independent for a given n because every tie-free ranking of n items is
    a permutation of 1..n. Enumerated in chunks so n = 10 (3.6M
    permutations) stays within a few hundred MB.
    """
    base = np.arange(1, n + 1, dtype=np.int64)
    max_ssd = (n**3 - n) // 3
    ssd_hist = np.zeros(max_ssd + 1, dtype=np.int64)
    perm_iter = permutations(range(1, n + 1))
    chunk_size = 100_000
    while True:
        chunk = list(islice(perm_iter, chunk_size))
        if not chunk:
            break
        mat = np.asarray(chunk, dtype=np.int64)
        d = mat - base
        ssd = np.einsum("ij,ij->i", d, d)
        ssd_hist += np.bincount(ssd, minlength=max_ssd + 1)
    ssd_values = np.flatnonzero(ssd_hist)
    counts = ssd_hist[ssd_values]
    rho = 1.0 - 6.0 * ssd_values / (n * (n * n - 1.0))
    abs_rho = np.abs(rho)
    order = np.argsort(abs_rho, kind="stable")
    return abs_rho[order], counts[order]


def rho_significance(rho: float, n: int, method: str = "auto") -> float:
    """Two-sided p-value for an observed Spearman rho over n pairs.

    method="exact" enumerates the permutation null of tie-free rankings
    (only for n <= 10; above that the factorial blows up). method="approx"
    uses the t statistic rho*sqrt((n-2)/(1-rho^2)) against Student's t
    with n-2 degrees of freedom. method="auto" picks exact when n <= 10.
    The returned value is floored at 2.2e-16 because tinier tail claims
    are numerically meaningless here.
    """
    if isinstance(rho, bool) or not isinstance(rho, (int, float, np.floating, np.integer)):
        raise ValidationError(f"rho must be a number, got {type(rho).__name__}")
    r = float(rho)
    if math.isnan(r) or not -1.0 <= r <= 1.0:
        raise ValidationError(f"rho must lie in [-1, 1], got {rho!r}")
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValidationError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 2:
        raise DegenerateInputError(f"need n >= 2 pairs, got {n}")
    if method == "auto":
        method = "exact" if n <= EXACT_P_MAX_N else "approx"
    if method == "exact":
        if n > EXACT_P_MAX_N:
            raise ValidationError(f"exact method supports n <= {EXACT_P_MAX_N}, got {n}")
        abs_rho, counts = _exact_rho_null(n)
        # two-sided: mass at |rho_perm| >= |observed|, tolerant of float fuzz
        threshold = abs(r) - 1e-12
        p = float(counts[abs_rho >= threshold].sum()) / float(counts.sum())
    elif method == "approx":
        if n < 4:
            raise DegenerateInputError(f"t approximation needs n >= 4, got {n}")
        denom = 1.0 - r * r
        if denom <= 0.0:
            p = 0.0
        else:
            t = r * math.sqrt((n - 2) / denom)
            p = 2.0 * float(_sps.t.sf(abs(t), n - 2))
    else:
        raise ValidationError(f"method must be 'auto', 'exact', or 'approx', got {method!r}")
    return max(min(p, 1.0), P_VALUE_FLOOR)


@dataclass(frozen=True)
class CurvePoint:
    checkpoint: int
    rho: float
    tau_b: float


def prefix_correlation_curve(x, y, checkpoints) -> list[CurvePoint]:
    """Correlations over the first k pairs for each checkpoint k.

    The pairs must already be ordered by the primary ranking (ascending x
    rank), so each prefix is "the top k". Checkpoints must be strictly
    ascending and at most n; a checkpoint whose prefix is degenerate
    (fewer than 2 pairs, or zero variance) is skipped with a warning
    instead of failing the whole curve.
    """
    xv, yv = _as_pair_vectors(x, y, min_n=0)
    n = xv.size
    cps = [int(k) for k in checkpoints]
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValidationError("checkpoints must be strictly ascending")
    if cps and cps[-1] > n:
        raise ValidationError(f"checkpoint {cps[-1]} exceeds the {n} available pairs")
    points: list[CurvePoint] = []
    for k in cps:
        if k < 2:
            warnings.warn(f"checkpoint {k} skipped: needs at least 2 pairs")
            continue
        try:
            rho = spearman_rho(xv[:k], yv[:k])
            tau_b = kendall_tau_fast(xv[:k], yv[:k]).tau_b
        except DegenerateInputError as exc:
            warnings.warn(f"checkpoint {k} skipped: {exc}")
            continue
        points.append(CurvePoint(k, rho, tau_b))
    return points


@dataclass(frozen=True)
class CorrelationReport:
    """Everything the correlate pipeline reports for one paired sample."""

    n: int
    spearman_rho: float
    kendall_tau_a: float
    kendall_tau_b: float
    rho_estimated_from_tau: float
    p_value_rho: float
    concordant: int
    discordant: int
    ties_x: int
    ties_y: int
    ties_xy: int
    spearman_rho_shortcut: float | None = None


def correlation_report(x, y, diagnostic_shortcut: bool = False) -> CorrelationReport:
    """Bundle rho, tau-a/b, the tau-derived rho estimate, significance,
    and the raw pair counts for one paired rank sample."""
    counts = kendall_tau_fast(x, y)
    rho = spearman_rho(x, y)
    shortcut = spearman_rho_shortcut(x, y) if diagnostic_shortcut else None
    return CorrelationReport(
        n=counts.n,
        spearman_rho=rho,
        kendall_tau_a=counts.tau_a,
        kendall_tau_b=counts.tau_b,
        rho_estimated_from_tau=tau_to_rho(counts.tau_b),
        p_value_rho=rho_significance(rho, counts.n),
        concordant=counts.concordant,
        discordant=counts.discordant,
        ties_x=counts.ties_x,
        ties_y=counts.ties_y,
        ties_xy=counts.ties_xy,
        spearman_rho_shortcut=shortcut,
    )


def write_curve(points: list[CurvePoint], path) -> None:
    """Export ``checkpoint<TAB>rho<TAB>tau_b`` rows."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in points:
            fh.write(f"{p.checkpoint}\t{p.rho!r}\t{p.tau_b!r}\n")
