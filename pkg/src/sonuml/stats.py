"""Preference/relevance response ingestion and the reproduction of the
catalogue study's analysis: frequency counts, descriptive statistics,
chi-square goodness-of-fit against equal expected frequencies, and the
Holm-Bonferroni step-down correction.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

#: Canonical question ids, in presentation order.
ELEMENTS = (
    "Class",
    "Attribute",
    "Operation",
    "Association",
    "Inheritance",
    "Realization",
    "Dependency",
    "Aggregation",
    "Composition",
    "AssociationClass",
    "Package",
)
PRINCIPLES = (
    "SemioticClarity",
    "PerceptualDiscriminability",
    "SemanticTransparency",
    "ComplexityManagement",
    "CognitiveIntegration",
    "AuditoryExpressiveness",
    "DualCoding",
    "GraphicEconomy",
    "CognitiveFit",
)

PREF_CHOICES = ("proposed", "baseline", "none")

#: Expected count below which a chi-square row gets a small-sample caveat.
LOW_EXPECTED = 5.0


class ResponseFormatError(Exception):
    """Raised for malformed response CSV input."""


@dataclass
class StudyDataset:
    """Validated survey responses.

    ``preference_counts`` maps element -> (proposed, baseline, none) counts;
    ``relevance_ratings`` maps principle -> list of 1..5 ratings;
    ``free_text`` keeps every suggestion, including unsolicited ones that are
    excluded from the counts.
    """

    respondents: int
    preference_counts: dict[str, tuple[int, int, int]]
    relevance_ratings: dict[str, list[int]]
    free_text: list[tuple[int, str, str]] = field(default_factory=list)


def load_responses(csv_text: str) -> StudyDataset:
    """Parse the response CSV (columns pref_<Element>, relevance_<Principle>,
    suggest_<Element>); one row per respondent."""
    reader = csv.DictReader(io.StringIO(csv_text))
    if reader.fieldnames is None:
        raise ResponseFormatError("missing header row")
    header = set(reader.fieldnames)

    elements = [e for e in ELEMENTS if f"pref_{e}" in header]
    principles = [p for p in PRINCIPLES if f"relevance_{p}" in header]
    for name in header:
        if name.startswith("pref_") and name[5:] not in ELEMENTS:
            raise ResponseFormatError(f"unknown element column {name!r}")
        if name.startswith("relevance_") and name[10:] not in PRINCIPLES:
            raise ResponseFormatError(f"unknown principle column {name!r}")

    counts = {e: [0, 0, 0] for e in elements}
    ratings: dict[str, list[int]] = {p: [] for p in principles}
    free_text: list[tuple[int, str, str]] = []
    n = 0
    for line_no, row in enumerate(reader, start=2):
        n += 1
        for e in elements:
            value = (row.get(f"pref_{e}") or "").strip().lower()
            if not value:
                continue
            if value not in PREF_CHOICES:
                raise ResponseFormatError(
                    f"line {line_no}: pref_{e} must be one of {PREF_CHOICES}, got {value!r}"
                )
            counts[e][PREF_CHOICES.index(value)] += 1
        for p in principles:
            value = (row.get(f"relevance_{p}") or "").strip()
            if not value:
                continue
            try:
                rating = int(value)
            except ValueError:
                raise ResponseFormatError(
                    f"line {line_no}: relevance_{p} must be an integer, got {value!r}"
                ) from None
            if not 1 <= rating <= 5:
                raise ResponseFormatError(
                    f"line {line_no}: relevance_{p} must be within 1..5, got {rating}"
                )
            ratings[p].append(rating)
        for e in ELEMENTS:
            text = (row.get(f"suggest_{e}") or "").strip()
            if text:
                free_text.append((line_no - 2, e, text))

    return StudyDataset(
        respondents=n,
        preference_counts={e: tuple(c) for e, c in counts.items()},
        relevance_ratings=ratings,
        free_text=free_text,
    )


def descriptive_stats(ratings) -> tuple[int, float, float | None, float, float]:
    """(n, mean, sample stddev, min, max); stddev is None for n == 1."""
    values = [float(r) for r in ratings]
    n = len(values)
    if n == 0:
        raise ValueError("descriptive_stats requires at least one rating")
    mean = sum(values) / n
    if n == 1:
        return (1, mean, None, values[0], values[0])
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return (n, mean, math.sqrt(var), min(values), max(values))


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    df: int
    p: float
    expected: tuple[float, ...]
    observed: tuple[int, ...]

    @property
    def low_expected(self) -> bool:
        return any(e < LOW_EXPECTED for e in self.expected)


def chi_square_gof(observed) -> ChiSquareResult:
    """Goodness of fit against equal expected frequencies E_i = N/k."""
    obs = tuple(int(o) for o in observed)
    if len(obs) < 2:
        raise ValueError("need at least 2 categories")
    if any(o < 0 for o in obs):
        raise ValueError("observed counts must be non-negative")
    n = sum(obs)
    if n == 0:
        raise ValueError("total count must be positive")
    k = len(obs)
    e = n / k
    stat = sum((o - e) ** 2 / e for o in obs)
    df = k - 1
    return ChiSquareResult(stat, df, chi_square_p(stat, df), (e,) * k, obs)


def _gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x), series / continued fraction."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 1.0
    log_prefix = -x + a * math.log(x) - math.lgamma(a)
    if x < a + 1.0:
        # P(a, x) by series, then complement.
        term = 1.0 / a
        total = term
        denom = a
        for _ in range(1000):
            denom += 1.0
            term *= x / denom
            total += term
            if abs(term) < abs(total) * 1e-17:
                break
        return 1.0 - total * math.exp(log_prefix)
    # Q(a, x) by Lentz's continued fraction.
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 1000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    return math.exp(log_prefix) * h


def chi_square_p(x: float, df: int) -> float:
    """Upper-tail chi-square probability Q(df/2, x/2)."""
    if x < 0:
        raise ValueError("statistic must be non-negative")
    if df < 1:
        raise ValueError("df must be >= 1")
    return min(1.0, max(0.0, _gamma_q(df / 2.0, x / 2.0)))


@dataclass(frozen=True)
class HolmEntry:
    index: int
    p: float
    rank: int
    threshold: float
    significant: bool


@dataclass(frozen=True)
class CorrectionOutcome:
    alpha: float
    m: int
    entries: tuple[HolmEntry, ...]  # in the input order

    @property
    def significant_count(self) -> int:
        return sum(1 for e in self.entries if e.significant)


def holm_bonferroni(pvals, alpha: float = 0.05) -> CorrectionOutcome:
    """Step-down Holm correction: rank i is rejected iff every rank j <= i
    satisfies p_(j) <= alpha / (m - j + 1)."""
    ps = [float(p) for p in pvals]
    if any(not 0.0 <= p <= 1.0 for p in ps):
        raise ValueError("p-values must lie in [0, 1]")
    m = len(ps)
    order = sorted(range(m), key=lambda i: ps[i])
    entries: list[HolmEntry | None] = [None] * m
    rejecting = True
    for rank, idx in enumerate(order, start=1):
        threshold = alpha / (m - rank + 1)
        if rejecting and ps[idx] > threshold:
            rejecting = False
        entries[idx] = HolmEntry(idx, ps[idx], rank, threshold, rejecting)
    return CorrectionOutcome(alpha, m, tuple(entries))


@dataclass(frozen=True)
class PreferenceRow:
    element: str
    counts: tuple[int, int, int]  # proposed, baseline, none
    fractions: tuple[float, float, float]
    chi2: ChiSquareResult
    holm: HolmEntry


@dataclass(frozen=True)
class RelevanceRow:
    principle: str
    n: int
    mean: float
    stddev: float | None
    minimum: float
    maximum: float
    chi2: ChiSquareResult
    holm: HolmEntry


@dataclass(frozen=True)
class StudyReport:
    respondents: int
    alpha: float
    preferences: tuple[PreferenceRow, ...]
    relevance: tuple[RelevanceRow, ...]
    free_text: tuple[tuple[int, str, str], ...]

    def transparency_evidence(self) -> dict[str, float]:
        """Per-element fraction of respondents preferring the proposed sound."""
        return {row.element: row.fractions[0] for row in self.preferences}

    def to_json(self) -> str:
        doc = {
            "respondents": self.respondents,
            "alpha": self.alpha,
            "preferences": [
                {
                    "element": r.element,
                    "counts": dict(zip(PREF_CHOICES, r.counts)),
                    "fractions": dict(zip(PREF_CHOICES, r.fractions)),
                    "chi_square": r.chi2.statistic,
                    "df": r.chi2.df,
                    "p": r.chi2.p,
                    "low_expected": r.chi2.low_expected,
                    "holm_rank": r.holm.rank,
                    "holm_threshold": r.holm.threshold,
                    "significant": r.holm.significant,
                }
                for r in self.preferences
            ],
            "relevance": [
                {
                    "principle": r.principle,
                    "n": r.n,
                    "mean": r.mean,
                    "stddev": r.stddev,
                    "min": r.minimum,
                    "max": r.maximum,
                    "chi_square": r.chi2.statistic,
                    "df": r.chi2.df,
                    "p": r.chi2.p,
                    "low_expected": r.chi2.low_expected,
                    "holm_rank": r.holm.rank,
                    "holm_threshold": r.holm.threshold,
                    "significant": r.holm.significant,
                }
                for r in self.relevance
            ],
            "suggestions": [
                {"respondent": i, "element": e, "text": t} for i, e, t in self.free_text
            ],
        }
        return json.dumps(doc, indent=2)

    def to_text(self) -> str:
        lines = [f"respondents: {self.respondents}    alpha: {self.alpha}"]
        if self.preferences:
            lines.append("")
            lines.append("sound preference (proposed / baseline / none)")
            lines.append(
                f"{'element':<18}{'prop':>5}{'base':>5}{'none':>5}"
                f"{'chi2':>9}{'df':>4}{'p':>7}  holm"
            )
            for r in self.preferences:
                mark = "significant" if r.holm.significant else "ns"
                caveat = " low-N" if r.chi2.low_expected else ""
                lines.append(
                    f"{r.element:<18}{r.counts[0]:>5}{r.counts[1]:>5}{r.counts[2]:>5}"
                    f"{r.chi2.statistic:>9.3f}{r.chi2.df:>4}{r.chi2.p:>7.3f}  {mark}{caveat}"
                )
        if self.relevance:
            lines.append("")
            lines.append("perceived relevance of the principles")
            lines.append(
                f"{'principle':<28}{'n':>4}{'mean':>8}{'stddev':>8}{'min':>5}{'max':>5}"
                f"{'chi2':>9}{'df':>4}{'p':>7}  holm"
            )
            for r in self.relevance:
                mark = "significant" if r.holm.significant else "ns"
                caveat = " low-N" if r.chi2.low_expected else ""
                sd = f"{r.stddev:>8.4f}" if r.stddev is not None else f"{'-':>8}"
                lines.append(
                    f"{r.principle:<28}{r.n:>4}{r.mean:>8.4f}{sd}"
                    f"{r.minimum:>5.0f}{r.maximum:>5.0f}"
                    f"{r.chi2.statistic:>9.3f}{r.chi2.df:>4}{r.chi2.p:>7.3f}  {mark}{caveat}"
                )
        return "\n".join(lines)


def study_report(dataset: StudyDataset, alpha: float = 0.05) -> StudyReport:
    """Full analysis: frequencies, descriptives, chi-square rows, Holm outcomes."""
    pref_elements = [e for e in ELEMENTS if e in dataset.preference_counts]
    pref_chi = []
    for e in pref_elements:
        counts = dataset.preference_counts[e]
        pref_chi.append(chi_square_gof(counts))
    pref_holm = holm_bonferroni([c.p for c in pref_chi], alpha)

    relevance_principles = [p for p in PRINCIPLES if dataset.relevance_ratings.get(p)]
    rel_chi = []
    rel_desc = []
    for p in relevance_principles:
        ratings = dataset.relevance_ratings[p]
        counts = [sum(1 for r in ratings if r == level) for level in range(1, 6)]
        rel_chi.append(chi_square_gof(counts))
        rel_desc.append(descriptive_stats(ratings))
    rel_holm = holm_bonferroni([c.p for c in rel_chi], alpha)

    preferences = tuple(
        PreferenceRow(
            element=e,
            counts=dataset.preference_counts[e],
            fractions=tuple(
                c / dataset.respondents if dataset.respondents else 0.0
                for c in dataset.preference_counts[e]
            ),
            chi2=chi,
            holm=pref_holm.entries[i],
        )
        for i, (e, chi) in enumerate(zip(pref_elements, pref_chi))
    )
    relevance = tuple(
        RelevanceRow(
            principle=p,
            n=desc[0],
            mean=desc[1],
            stddev=desc[2],
            minimum=desc[3],
            maximum=desc[4],
            chi2=chi,
            holm=rel_holm.entries[i],
        )
        for i, (p, chi, desc) in enumerate(zip(relevance_principles, rel_chi, rel_desc))
    )
    return StudyReport(
        respondents=dataset.respondents,
        alpha=alpha,
        preferences=preferences,
        relevance=relevance,
        free_text=tuple(dataset.free_text),
    )
