"""Print the pairwise earcon distance matrices for both built-in catalogues.

Used to calibrate the stand-in synth parameters: every proposed pair must sit
comfortably above the default threshold (1.0), while the baseline's two
same-family pairs (the waters, the winds) must sit comfortably below it, and
all other baseline pairs above it. Frozen margins are asserted in the tests.
"""

from __future__ import annotations

import warnings

import numpy as np

from sonuml.acoustics import discriminability_matrix
from sonuml.catalogue import EarconDurationWarning, builtin_baseline, builtin_proposed, realize_earcon


def report(cat, tau=1.0):
    print(f"== {cat.name} ==")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EarconDurationWarning)
        sounds = [realize_earcon(b.recipe, cat) for b in cat.bindings]
    names = [b.concept_id for b in cat.bindings]
    matrix, norm = discriminability_matrix(sounds)
    if norm.dropped:
        print(f"dropped dims: {norm.dropped}")
    pairs = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            pairs.append((matrix[i, j], names[i], names[j]))
    pairs.sort()
    for d, a, b in pairs:
        marker = "  <-- below tau" if d < tau else ""
        print(f"  {d:7.3f}  {a:16s} {b:16s}{marker}")
    below = [(a, b, d) for d, a, b in pairs if d < tau]
    print(f"pairs below tau={tau}: {[(a, b, round(d, 3)) for a, b, d in below]}")
    print(f"smallest above-tau margin: {min((d for d, _, _ in pairs if d >= tau), default=None)}")
    print()


if __name__ == "__main__":
    report(builtin_proposed())
    report(builtin_baseline())
