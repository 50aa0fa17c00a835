"""Write fixtures/study.csv from the reconstructed count vectors.

The counts come from tools/derive_study_counts.py: they are the unique (or,
where several exist, a documented choice among the) count vectors that
reproduce the published chi-square / mean / stddev / min / max values. Row
assignment is deterministic: respondent i takes the choice whose cumulative
count bracket contains i.
"""

from __future__ import annotations

import csv
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from sonuml.stats import ELEMENTS, PRINCIPLES  # noqa: E402

N = 31

# (proposed, baseline, none) per element.
PREFERENCE_COUNTS = {
    "Class": (21, 5, 5),
    "Attribute": (27, 2, 2),
    "Operation": (27, 3, 1),
    "Association": (28, 3, 0),
    "Inheritance": (19, 3, 9),
    "Realization": (19, 5, 7),
    "Dependency": (28, 2, 1),
    "Aggregation": (22, 4, 5),
    "Composition": (14, 10, 7),
    "AssociationClass": (12, 16, 3),
    "Package": (27, 2, 2),
}

# Counts for ratings 1..5 per principle.
RELEVANCE_COUNTS = {
    "SemioticClarity": (0, 0, 3, 9, 19),
    "PerceptualDiscriminability": (0, 2, 9, 7, 13),
    "SemanticTransparency": (1, 0, 5, 11, 14),
    "ComplexityManagement": (3, 9, 6, 6, 7),
    "CognitiveIntegration": (2, 5, 13, 8, 3),
    "AuditoryExpressiveness": (3, 5, 7, 7, 9),
    "DualCoding": (1, 5, 4, 14, 7),
    "GraphicEconomy": (0, 3, 6, 12, 10),
    "CognitiveFit": (0, 4, 10, 8, 9),
}

# Free-text suggestions: (respondent index, element, text). The last two rows
# chose "none" for Inheritance / Composition and suggested alternatives; the
# first entry is an unsolicited note from a respondent who did pick a sound
# and must therefore not affect any count.
SUGGESTIONS = [
    (0, "Class", "make the chime a touch louder"),
    (29, "Inheritance", "sound of a baby"),
    (30, "Inheritance", "sound of a baby"),
    (30, "Composition", "an orchestra tuning together"),
]


def choice_for(respondent: int, counts: tuple[int, ...], labels: tuple[str, ...]) -> str:
    cumulative = 0
    for count, label in zip(counts, labels):
        cumulative += count
        if respondent < cumulative:
            return label
    raise AssertionError("counts must sum to the respondent total")


def build_rows():
    rows = []
    for i in range(N):
        row = {"respondent": f"r{i + 1:02d}"}
        for element in ELEMENTS:
            row[f"pref_{element}"] = choice_for(
                i, PREFERENCE_COUNTS[element], ("proposed", "baseline", "none")
            )
        for principle in PRINCIPLES:
            row[f"relevance_{principle}"] = choice_for(
                i, RELEVANCE_COUNTS[principle], ("1", "2", "3", "4", "5")
            )
        for element in ELEMENTS:
            row[f"suggest_{element}"] = ""
        rows.append(row)
    for respondent, element, text in SUGGESTIONS:
        rows[respondent][f"suggest_{element}"] = text
    return rows


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "study.csv"
    rows = build_rows()
    fieldnames = (
        ["respondent"]
        + [f"pref_{e}" for e in ELEMENTS]
        + [f"relevance_{p}" for p in PRINCIPLES]
        + [f"suggest_{e}" for e in ELEMENTS]
    )
    with open(out, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {out} ({len(rows)} respondents)")


if __name__ == "__main__":
    main()
