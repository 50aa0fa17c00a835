"""Reconstruct the study fixture counts from the published summary statistics.

Enumerates candidate count vectors (N=31) and keeps those that reproduce the
published chi-square statistics, and for the rating questions also the
published mean / sample stddev / min / max. The surviving vectors are frozen
into fixtures/study.csv and asserted in tests; run this script to re-derive
them from scratch.
"""

from __future__ import annotations

import math

N = 31

# Published per-element chi-square statistics (3 preference categories).
PREFERENCE_CHI2 = {
    "Class": 16.516,
    "Attribute": 40.323,
    "Operation": 40.516,
    "Association": 45.742,
    "Inheritance": 12.645,
    "Realization": 11.097,
    "Dependency": 45.355,
    "Aggregation": 19.806,
    "Composition": 2.387,
    "AssociationClass": 8.581,
    "Package": 40.323,
}

# Published relevance statistics: (mean, stddev, min, max, chi2) per principle,
# ratings on a 1..5 scale.
RELEVANCE_STATS = {
    "SemioticClarity": (4.5161, 0.67680, 3, 5, 41.742),
    "PerceptualDiscriminability": (4.0000, 1.00000, 2, 5, 17.871),
    "SemanticTransparency": (4.1935, 0.94585, 1, 5, 24.323),
    "ComplexityManagement": (3.1613, 1.34404, 1, 5, 3.032),
    "CognitiveIntegration": (3.1613, 1.03591, 1, 5, 12.710),
    "AuditoryExpressiveness": (3.4516, 1.33763, 1, 5, 3.355),
    "DualCoding": (3.6774, 1.10716, 1, 5, 15.290),
    "GraphicEconomy": (3.9355, 0.96386, 2, 5, 15.613),
    "CognitiveFit": (3.7097, 1.03902, 2, 5, 11.097),
}


def chi2_equal_expected(observed):
    n = sum(observed)
    e = n / len(observed)
    return sum((o - e) ** 2 / e for o in observed)


def preference_candidates(target, tol=0.0005):
    """All (proposed, baseline, none) triples summing to N with matching chi2."""
    out = []
    for p in range(N + 1):
        for b in range(N + 1 - p):
            triple = (p, b, N - p - b)
            if abs(chi2_equal_expected(triple) - target) <= tol:
                out.append(triple)
    return out


def relevance_candidates(mean, sd, lo, hi, chi2, tol_chi=0.0005):
    """All rating-count 5-tuples matching every published statistic."""
    out = []
    for n1 in range(N + 1):
        for n2 in range(N + 1 - n1):
            for n3 in range(N + 1 - n1 - n2):
                for n4 in range(N + 1 - n1 - n2 - n3):
                    n5 = N - n1 - n2 - n3 - n4
                    counts = (n1, n2, n3, n4, n5)
                    present = [i + 1 for i, c in enumerate(counts) if c > 0]
                    if not present or present[0] != lo or present[-1] != hi:
                        continue
                    m = sum((i + 1) * c for i, c in enumerate(counts)) / N
                    if abs(m - mean) > 5e-5:
                        continue
                    var = sum(c * (i + 1 - m) ** 2 for i, c in enumerate(counts)) / (N - 1)
                    if abs(math.sqrt(var) - sd) > 5e-5:
                        continue
                    if abs(chi2_equal_expected(counts) - chi2) > tol_chi:
                        continue
                    out.append(counts)
    return out


def main():
    print("preference counts (proposed, baseline, none):")
    pref = {}
    for element, target in PREFERENCE_CHI2.items():
        cands = preference_candidates(target)
        print(f"  {element:18s} chi2={target:7.3f}  candidates={cands}")
        pref[element] = cands

    print("\nrelevance counts (ratings 1..5):")
    for principle, (mean, sd, lo, hi, chi2) in RELEVANCE_STATS.items():
        cands = relevance_candidates(mean, sd, lo, hi, chi2)
        print(f"  {principle:26s} chi2={chi2:7.3f}  candidates={cands}")


if __name__ == "__main__":
    main()
