"""Bin censused graphs by user count, fit a baseline null model, and score.

The baseline corpus's per-bin count distributions act as the null model;
each focus-corpus class count is standardized against it. Per bin b and
class i, with m_k the count in the k-th of N focus graphs:

    Z_i = (1/N) * sum_k (m_k - mu_null) / sigma_null
        = (mean_focus - mu_null) / sigma_null

Standard deviations are population ones (divisor M, no Bessel correction)
so results are reproducible bit for bit. Cells with an empty bin on either
side, or zero baseline variance, carry an explicit reason instead of a Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .motif_census import MotifCensus

DEFAULT_BIN_RANGES = (
    (1, 5), (6, 10), (11, 15), (16, 20), (21, 25), (26, 30), (31, 35), (36, 40),
)
DEFAULT_RARITY_THRESHOLD = 10.0

REASON_EMPTY_BASELINE = "empty baseline bin"
REASON_EMPTY_FOCUS = "empty focus bin"
REASON_ZERO_VARIANCE = "zero baseline variance"


@dataclass(frozen=True)
class BinSpec:
    """Ordered, disjoint, inclusive node-count ranges; larger graphs are unbinned."""

    ranges: tuple[tuple[int, int], ...] = DEFAULT_BIN_RANGES

    def __post_init__(self):
        if not self.ranges:
            raise ValueError("bin spec needs at least one range")
        prev_hi = None
        for lo, hi in self.ranges:
            if lo > hi:
                raise ValueError(f"bin range {lo}-{hi} is inverted")
            if prev_hi is not None and lo <= prev_hi:
                raise ValueError("bin ranges must be disjoint and ascending")
            prev_hi = hi

    @classmethod
    def parse(cls, text: str) -> "BinSpec":
        """Parse a spec like "1-5,6-10,11-15"."""
        ranges = []
        for part in text.split(","):
            lo, sep, hi = part.strip().partition("-")
            if not sep:
                raise ValueError(f"bad bin range {part!r}, expected lo-hi")
            try:
                ranges.append((int(lo), int(hi)))
            except ValueError as err:
                raise ValueError(f"bad bin range {part!r}: {err}") from None
        return cls(tuple(ranges))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(f"{lo}-{hi}" for lo, hi in self.ranges)

    def bin_of(self, n_users: int) -> int | None:
        for i, (lo, hi) in enumerate(self.ranges):
            if lo <= n_users <= hi:
                return i
        return None


@dataclass(frozen=True)
class BinnedCensuses:
    """Censuses grouped by bin; graphs beyond the last range sit in unbinned."""

    spec: BinSpec
    groups: tuple[tuple[MotifCensus, ...], ...]
    unbinned: tuple[MotifCensus, ...]


def assign_bins(censuses: Iterable[MotifCensus], spec: BinSpec) -> BinnedCensuses:
    """Place each census into the unique range containing its user count."""
    groups: list[list[MotifCensus]] = [[] for _ in spec.ranges]
    unbinned: list[MotifCensus] = []
    for census in censuses:
        i = spec.bin_of(census.n_users)
        if i is None:
            unbinned.append(census)
        else:
            groups[i].append(census)
    return BinnedCensuses(spec, tuple(tuple(g) for g in groups), tuple(unbinned))


@dataclass(frozen=True)
class NullModel:
    """Per-bin, per-class baseline mean and population standard deviation."""

    spec: BinSpec
    sizes: tuple[int, ...]  # baseline graphs per bin
    mu: tuple[np.ndarray | None, ...]  # None marks an empty bin
    sigma: tuple[np.ndarray | None, ...]


def fit_null_model(baseline: BinnedCensuses) -> NullModel:
    """Mean and population sigma of every class count, per bin."""
    sizes, mus, sigmas = [], [], []
    for group in baseline.groups:
        sizes.append(len(group))
        if not group:
            mus.append(None)
            sigmas.append(None)
            continue
        counts = np.array([c.counts for c in group], dtype=float)
        mus.append(counts.mean(axis=0))
        sigmas.append(counts.std(axis=0))  # ddof=0: population sigma
    return NullModel(baseline.spec, tuple(sizes), tuple(mus), tuple(sigmas))


@dataclass(frozen=True)
class ZCell:
    """Null-model comparison of one class in one bin."""

    bin_index: int
    bin_label: str
    class_name: str
    m_baseline: int
    mu_null: float | None
    sigma_null: float | None
    se_null: float | None
    n_focus: int
    mean_focus: float | None
    sigma_focus: float | None
    se_focus: float | None
    z: float | None
    reason: str | None  # set exactly when z is None


@dataclass(frozen=True)
class ZReport:
    """All cells for the bins populated in either corpus, in bin/class order."""

    spec: BinSpec
    class_names: tuple[str, ...]
    cells: tuple[ZCell, ...]


def z_scores(
    focus: BinnedCensuses, null: NullModel, class_names: Sequence[str]
) -> ZReport:
    """Standardize focus-corpus mean counts against the null model."""
    if focus.spec != null.spec:
        raise ValueError("focus binning and null model use different bin specs")
    spec = focus.spec
    cells = []
    for b, label in enumerate(spec.labels):
        group = focus.groups[b]
        n = len(group)
        m = null.sizes[b]
        if n == 0 and m == 0:
            continue  # bin empty in both corpora: nothing to report
        mu = null.mu[b]
        sigma = null.sigma[b]
        se_null = None if mu is None else sigma / np.sqrt(m)
        if n:
            focus_counts = np.array([c.counts for c in group], dtype=float)
            mean_f = focus_counts.mean(axis=0)
            sigma_f = focus_counts.std(axis=0)
            se_f = sigma_f / np.sqrt(n)
        else:
            mean_f = sigma_f = se_f = None
        for i, name in enumerate(class_names):
            z = reason = None
            if m == 0:
                reason = REASON_EMPTY_BASELINE
            elif n == 0:
                reason = REASON_EMPTY_FOCUS
            elif sigma[i] == 0.0:
                reason = REASON_ZERO_VARIANCE
            else:
                z = float((mean_f[i] - mu[i]) / sigma[i])
            cells.append(
                ZCell(
                    bin_index=b,
                    bin_label=label,
                    class_name=name,
                    m_baseline=m,
                    mu_null=None if mu is None else float(mu[i]),
                    sigma_null=None if sigma is None else float(sigma[i]),
                    se_null=None if se_null is None else float(se_null[i]),
                    n_focus=n,
                    mean_focus=None if mean_f is None else float(mean_f[i]),
                    sigma_focus=None if sigma_f is None else float(sigma_f[i]),
                    se_focus=None if se_f is None else float(se_f[i]),
                    z=z,
                    reason=reason,
                )
            )
    return ZReport(spec, tuple(class_names), tuple(cells))


LABEL_RARE = "rare"
LABEL_OVER = "over"
LABEL_UNDER = "under"
LABEL_EQUAL = "equal"


@dataclass(frozen=True)
class ExpressionReport:
    """Z-report plus per-cell labels and a per-class summary.

    A class is rare when no bin's mean count (in either corpus) clears the
    rarity threshold; its cells are all labeled rare. Otherwise each defined
    cell is over (Z > 1), under (Z < -1), or equal, and the class summary is
    the set of over/under labels seen in any bin, or {equal} if none.
    Undefined non-rare cells carry an empty label.
    """

    report: ZReport
    rarity_threshold: float
    cell_labels: tuple[str, ...]  # parallel to report.cells
    class_labels: Mapping[str, frozenset[str]]


def classify_expression(
    report: ZReport, rarity_threshold: float = DEFAULT_RARITY_THRESHOLD
) -> ExpressionReport:
    """Apply the rarity and |Z| > 1 rules to a computed Z-report."""
    populated: set[str] = set()
    for cell in report.cells:
        for mean in (cell.mu_null, cell.mean_focus):
            if mean is not None and mean > rarity_threshold:
                populated.add(cell.class_name)
    class_labels: dict[str, set[str]] = {name: set() for name in report.class_names}
    cell_labels = []
    for cell in report.cells:
        if cell.class_name not in populated:
            cell_labels.append(LABEL_RARE)
            continue
        if cell.z is None:
            cell_labels.append("")
        elif cell.z > 1.0:
            cell_labels.append(LABEL_OVER)
            class_labels[cell.class_name].add(LABEL_OVER)
        elif cell.z < -1.0:
            cell_labels.append(LABEL_UNDER)
            class_labels[cell.class_name].add(LABEL_UNDER)
        else:
            cell_labels.append(LABEL_EQUAL)
    summary = {}
    for name in report.class_names:
        if name not in populated:
            summary[name] = frozenset({LABEL_RARE})
        elif class_labels[name]:
            summary[name] = frozenset(class_labels[name])
        else:
            summary[name] = frozenset({LABEL_EQUAL})
    return ExpressionReport(report, rarity_threshold, tuple(cell_labels), summary)
