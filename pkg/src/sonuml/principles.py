"""Executable checks for the nine auditory-notation principles.

A catalogue is validated structurally (clarity, economy, captions), acoustically
(discriminability over realized earcons, duration), against human-subject
evidence when supplied (semantic transparency), and against a rendering
profile when supplied (complexity management, cognitive integration,
cognitive fit). Every report accounts for all nine principles, as checked or
as unchecked-with-reason.
"""

from __future__ import annotations

import enum
import json
import warnings
from dataclasses import dataclass

import numpy as np

from .acoustics import discriminability_matrix
from .catalogue import (
    EarconDurationWarning,
    SoundCatalogue,
    realize_earcon,
)


class PrincipleId(enum.Enum):
    SEMIOTIC_CLARITY = "SemioticClarity"
    PERCEPTUAL_DISCRIMINABILITY = "PerceptualDiscriminability"
    SEMANTIC_TRANSPARENCY = "SemanticTransparency"
    COMPLEXITY_MANAGEMENT = "ComplexityManagement"
    COGNITIVE_INTEGRATION = "CognitiveIntegration"
    AUDITORY_EXPRESSIVENESS = "AuditoryExpressiveness"
    DUAL_CODING = "DualCoding"
    AUDITORY_ECONOMY = "AuditoryEconomy"
    COGNITIVE_FIT = "CognitiveFit"


SEVERITIES = ("error", "warning", "info")

#: Principles that demand non-empty violation subjects.
_SUBJECT_REQUIRED = {
    PrincipleId.SEMIOTIC_CLARITY,
    PrincipleId.PERCEPTUAL_DISCRIMINABILITY,
    PrincipleId.AUDITORY_ECONOMY,
}


@dataclass(frozen=True)
class Violation:
    principle: PrincipleId
    severity: str
    subjects: tuple[str, ...]
    detail: str
    measured: float | None = None

    def __post_init__(self):
        if self.severity not in SEVERITIES:
            raise ValueError(f"severity must be one of {SEVERITIES}")
        if self.principle in _SUBJECT_REQUIRED and not self.subjects:
            raise ValueError(f"{self.principle.value} findings need subjects")


@dataclass(frozen=True)
class LintConfig:
    discriminability_threshold: float = 1.0
    max_earcons: int = 12
    max_components_per_earcon: int = 4
    max_earcon_s: float = 3.0
    transparency_majority: float = 0.5

    def __post_init__(self):
        for name in (
            "discriminability_threshold",
            "max_earcons",
            "max_components_per_earcon",
            "max_earcon_s",
            "transparency_majority",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class ValidationReport:
    catalogue_name: str
    catalogue_version: str
    checked: frozenset[PrincipleId]
    unchecked: dict[PrincipleId, str]
    violations: tuple[Violation, ...]
    discriminability: np.ndarray | None = None
    discriminability_concepts: tuple[str, ...] = ()
    threshold: float | None = None
    dropped_dimensions: tuple[str, ...] = ()

    def __post_init__(self):
        overlap = self.checked & set(self.unchecked)
        if overlap:
            raise ValueError(f"principles both checked and unchecked: {overlap}")
        if self.checked | set(self.unchecked) != set(PrincipleId):
            raise ValueError("report must account for all nine principles")

    def errors(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity == "error")

    def by_principle(self, principle: PrincipleId) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.principle == principle)

    def to_json(self) -> str:
        doc = {
            "catalogue": {"name": self.catalogue_name, "version": self.catalogue_version},
            "checked": sorted(p.value for p in self.checked),
            "unchecked": {p.value: reason for p, reason in sorted(
                self.unchecked.items(), key=lambda kv: kv[0].value)},
            "violations": [
                {
                    "principle": v.principle.value,
                    "severity": v.severity,
                    "subjects": list(v.subjects),
                    "detail": v.detail,
                    "measured": v.measured,
                }
                for v in self.violations
            ],
            "threshold": self.threshold,
            "dropped_dimensions": list(self.dropped_dimensions),
        }
        if self.discriminability is not None:
            doc["discriminability"] = {
                "concepts": list(self.discriminability_concepts),
                "matrix": [[round(float(x), 4) for x in row] for row in self.discriminability],
            }
        return json.dumps(doc, indent=2)

    def to_text(self) -> str:
        lines = [f"catalogue {self.catalogue_name!r} version {self.catalogue_version}"]
        counts = {s: sum(1 for v in self.violations if v.severity == s) for s in SEVERITIES}
        lines.append(
            f"{counts['error']} error(s), {counts['warning']} warning(s), {counts['info']} info"
        )
        for v in self.violations:
            measured = f" [{v.measured:.3f}]" if v.measured is not None else ""
            subjects = ", ".join(v.subjects) if v.subjects else "-"
            lines.append(f"  {v.severity:7s} {v.principle.value:27s} {subjects}: {v.detail}{measured}")
        for p, reason in sorted(self.unchecked.items(), key=lambda kv: kv[0].value):
            lines.append(f"  unchecked {p.value}: {reason}")
        return "\n".join(lines)


def _variables_signature(v) -> tuple:
    return (
        round(v.loudness_db, 3),
        round(v.pitch_semitones, 3),
        round(v.pan, 3),
        round(v.duration_scale, 3),
        round(v.attack_s, 3),
        round(v.decay_s, 3),
        v.reverb_depth,
        round(v.start_offset_s, 3),
    )


def recipe_signature(recipe) -> tuple:
    """Normalized component list: asset ids plus rounded variables plus mode."""
    return (
        recipe.mode,
        tuple((asset_id, _variables_signature(v)) for asset_id, v in recipe.components),
    )


def check_semiotic_clarity(
    cat: SoundCatalogue,
    near_identical_pairs: tuple[tuple[str, str, float], ...] = (),
) -> list[Violation]:
    """Overload, redundancy, deficit, and excess findings.

    Structural overload compares recipe signatures. ``near_identical_pairs``
    lets a caller report measured same-symbol pairs (sounds so close they act
    as one symbol) that the signature comparison cannot see; validate() feeds
    it from the discriminability matrix.
    """
    out: list[Violation] = []
    declared = set(cat.concept_ids())

    by_signature: dict[tuple, list[str]] = {}
    for b in cat.bindings:
        by_signature.setdefault(recipe_signature(b.recipe), []).append(b.concept_id)
    for concepts in by_signature.values():
        unique = sorted(set(concepts))
        if len(unique) >= 2:
            out.append(
                Violation(
                    PrincipleId.SEMIOTIC_CLARITY,
                    "error",
                    tuple(unique),
                    "symbol overload: one earcon is bound to several concepts",
                )
            )
    reported = {tuple(sorted(set(c))) for c in by_signature.values() if len(set(c)) >= 2}
    for a, b, distance in near_identical_pairs:
        key = tuple(sorted((a, b)))
        if key in reported:
            continue
        reported.add(key)
        out.append(
            Violation(
                PrincipleId.SEMIOTIC_CLARITY,
                "error",
                key,
                "symbol overload: two bindings are audibly the same symbol",
                measured=distance,
            )
        )

    bound_counts: dict[str, int] = {}
    for b in cat.bindings:
        bound_counts[b.concept_id] = bound_counts.get(b.concept_id, 0) + 1
    for concept_id, count in sorted(bound_counts.items()):
        if count >= 2:
            out.append(
                Violation(
                    PrincipleId.SEMIOTIC_CLARITY,
                    "error",
                    (concept_id,),
                    f"symbol redundancy: concept bound {count} times",
                    measured=float(count),
                )
            )
        if concept_id not in declared:
            out.append(
                Violation(
                    PrincipleId.SEMIOTIC_CLARITY,
                    "error",
                    (concept_id,),
                    "symbol excess: binding for an undeclared concept",
                )
            )
    for concept_id in sorted(declared - set(bound_counts)):
        out.append(
            Violation(
                PrincipleId.SEMIOTIC_CLARITY,
                "error",
                (concept_id,),
                "symbol deficit: declared concept has no binding",
            )
        )
    return out


def _realize_all(cat: SoundCatalogue, config: LintConfig):
    """Realize every binding once; returns (concepts, buffers)."""
    concepts, buffers = [], []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EarconDurationWarning)
        for b in cat.bindings:
            concepts.append(b.concept_id)
            buffers.append(realize_earcon(b.recipe, cat, max_earcon_s=config.max_earcon_s))
    return concepts, buffers


def check_discriminability(cat: SoundCatalogue, config: LintConfig = LintConfig()):
    """Realize every earcon and flag pairs closer than the threshold.

    Returns (violations, matrix, concept order, dropped feature dims).
    """
    concepts, buffers = _realize_all(cat, config)
    matrix, norm = discriminability_matrix(buffers)
    out = []
    tau = config.discriminability_threshold
    for i in range(len(concepts)):
        for j in range(i + 1, len(concepts)):
            d = float(matrix[i, j])
            if d < tau:
                pair = tuple(sorted((concepts[i], concepts[j])))
                out.append(
                    Violation(
                        PrincipleId.PERCEPTUAL_DISCRIMINABILITY,
                        "error",
                        pair,
                        f"earcons are not distinguishable (distance below {tau})",
                        measured=d,
                    )
                )
    return out, matrix, tuple(concepts), norm.dropped


def check_economy(cat: SoundCatalogue, config: LintConfig = LintConfig()) -> list[Violation]:
    out = []
    signatures = {recipe_signature(b.recipe) for b in cat.bindings}
    if len(signatures) > config.max_earcons:
        out.append(
            Violation(
                PrincipleId.AUDITORY_ECONOMY,
                "error",
                tuple(sorted({b.concept_id for b in cat.bindings})),
                f"{len(signatures)} distinct earcons exceed the manageable "
                f"limit of {config.max_earcons}",
                measured=float(len(signatures)),
            )
        )
    for b in cat.bindings:
        n = len(b.recipe.components)
        if n > config.max_components_per_earcon:
            out.append(
                Violation(
                    PrincipleId.AUDITORY_ECONOMY,
                    "error",
                    (b.concept_id,),
                    f"{n} components exceed the per-earcon limit of "
                    f"{config.max_components_per_earcon}",
                    measured=float(n),
                )
            )
    return out


def check_duration(cat: SoundCatalogue, config: LintConfig = LintConfig()) -> list[Violation]:
    """Realized running time against the earcon bound (closed: exactly the
    bound is fine). Reported under auditory economy: an overlong cue stops
    being a manageable symbol."""
    out = []
    concepts, buffers = _realize_all(cat, config)
    for concept_id, buf in zip(concepts, buffers):
        if buf.duration_s > config.max_earcon_s:
            out.append(
                Violation(
                    PrincipleId.AUDITORY_ECONOMY,
                    "error",
                    (concept_id,),
                    f"realized duration {buf.duration_s:.2f} s exceeds the "
                    f"{config.max_earcon_s:.2f} s bound",
                    measured=buf.duration_s,
                )
            )
    return out


def check_dual_coding(cat: SoundCatalogue) -> list[Violation]:
    out = []
    for b in cat.bindings:
        if not b.recipe.caption.strip():
            out.append(
                Violation(
                    PrincipleId.DUAL_CODING,
                    "warning",
                    (b.concept_id,),
                    "binding has no caption for the text channel",
                )
            )
    return out


class EvidenceMismatchError(Exception):
    """Raised when study evidence names concepts the catalogue lacks."""


def check_semantic_transparency(
    cat: SoundCatalogue,
    evidence=None,
    config: LintConfig = LintConfig(),
) -> tuple[list[Violation], str | None]:
    """Transparency cannot be computed from the signal. Without evidence the
    principle is unchecked; with evidence (a StudyReport or a concept->fraction
    mapping) concepts preferred by less than the majority fraction are flagged.

    Returns (violations, unchecked_reason or None).
    """
    if evidence is None:
        return [], "requires human-subject evidence"
    fractions = (
        evidence.transparency_evidence()
        if hasattr(evidence, "transparency_evidence")
        else dict(evidence)
    )
    unknown = sorted(set(fractions) - set(cat.concept_ids()))
    if unknown:
        raise EvidenceMismatchError(f"evidence names unknown concepts: {unknown}")
    out = []
    for concept_id, fraction in sorted(fractions.items()):
        if fraction < config.transparency_majority:
            out.append(
                Violation(
                    PrincipleId.SEMANTIC_TRANSPARENCY,
                    "warning",
                    (concept_id,),
                    f"only {fraction:.1%} of respondents preferred this sound "
                    f"(majority bar {config.transparency_majority:.0%})",
                    measured=fraction,
                )
            )
    return out, None


def check_profile_principles(profile) -> list[Violation]:
    """Rendering-profile checks: depth reverb (complexity management), motif
    plus captions (cognitive integration), and at least two audience levels
    (cognitive fit). Absent features are info findings, not errors."""
    out = []
    if not profile.reverb_from_depth:
        out.append(
            Violation(
                PrincipleId.COMPLEXITY_MANAGEMENT,
                "info",
                (),
                "depth-to-reverb mapping is disabled; nesting will not be audible",
            )
        )
    if not profile.motif_enabled:
        out.append(
            Violation(
                PrincipleId.COGNITIVE_INTEGRATION,
                "info",
                (),
                "diagram motif is disabled; renders lose their context cue",
            )
        )
    if len(profile.audiences) < 2:
        out.append(
            Violation(
                PrincipleId.COGNITIVE_FIT,
                "info",
                (),
                "profile defines a single audience level",
            )
        )
    return out


def _expressiveness_info(cat: SoundCatalogue) -> Violation:
    from .audio import AuditoryVariables

    defaults = AuditoryVariables()
    names = (
        "loudness_db",
        "pitch_semitones",
        "pan",
        "duration_scale",
        "attack_s",
        "decay_s",
        "reverb_depth",
        "start_offset_s",
    )
    used = set()
    for b in cat.bindings:
        for _, v in b.recipe.components:
            for name in names:
                if getattr(v, name) != getattr(defaults, name):
                    used.add(name)
    timbres = {
        asset_id for b in cat.bindings for asset_id, _ in b.recipe.components
    }
    return Violation(
        PrincipleId.AUDITORY_EXPRESSIVENESS,
        "info",
        (),
        f"catalogue exercises {len(used)} of {len(names)} auditory variables "
        f"({', '.join(sorted(used)) or 'none'}) across {len(timbres)} timbres",
        measured=float(len(used)),
    )


_PRINCIPLE_ORDER = {p: i for i, p in enumerate(PrincipleId)}


def validate(
    cat: SoundCatalogue,
    config: LintConfig = LintConfig(),
    evidence=None,
    profile=None,
) -> ValidationReport:
    """Run every check and aggregate deterministically (principle order, then
    subjects). Check failures become unchecked entries, not crashes."""
    violations: list[Violation] = []
    checked: set[PrincipleId] = set()
    unchecked: dict[PrincipleId, str] = {}

    matrix = None
    concepts: tuple[str, ...] = ()
    dropped: tuple[str, ...] = ()
    near_pairs: tuple[tuple[str, str, float], ...] = ()
    try:
        disc, matrix, concepts, dropped = check_discriminability(cat, config)
        violations.extend(disc)
        checked.add(PrincipleId.PERCEPTUAL_DISCRIMINABILITY)
        near_pairs = tuple((v.subjects[0], v.subjects[1], v.measured) for v in disc)
    except Exception as exc:  # realization/extraction failure
        unchecked[PrincipleId.PERCEPTUAL_DISCRIMINABILITY] = f"realization failed: {exc}"

    violations.extend(check_semiotic_clarity(cat, near_identical_pairs=near_pairs))
    checked.add(PrincipleId.SEMIOTIC_CLARITY)

    violations.extend(check_economy(cat, config))
    try:
        violations.extend(check_duration(cat, config))
    except Exception as exc:
        unchecked[PrincipleId.AUDITORY_ECONOMY] = f"duration check failed: {exc}"
    if PrincipleId.AUDITORY_ECONOMY not in unchecked:
        checked.add(PrincipleId.AUDITORY_ECONOMY)

    violations.extend(check_dual_coding(cat))
    checked.add(PrincipleId.DUAL_CODING)

    transparency, reason = check_semantic_transparency(cat, evidence, config)
    if reason is None:
        violations.extend(transparency)
        checked.add(PrincipleId.SEMANTIC_TRANSPARENCY)
    else:
        unchecked[PrincipleId.SEMANTIC_TRANSPARENCY] = reason

    if profile is not None:
        violations.extend(check_profile_principles(profile))
        checked.update(
            (
                PrincipleId.COMPLEXITY_MANAGEMENT,
                PrincipleId.COGNITIVE_INTEGRATION,
                PrincipleId.COGNITIVE_FIT,
            )
        )
    else:
        for p in (
            PrincipleId.COMPLEXITY_MANAGEMENT,
            PrincipleId.COGNITIVE_INTEGRATION,
            PrincipleId.COGNITIVE_FIT,
        ):
            unchecked[p] = "requires a rendering profile"

    violations.append(_expressiveness_info(cat))
    checked.add(PrincipleId.AUDITORY_EXPRESSIVENESS)

    violations.sort(key=lambda v: (_PRINCIPLE_ORDER[v.principle], v.subjects, v.detail))
    return ValidationReport(
        catalogue_name=cat.name,
        catalogue_version=cat.version,
        checked=frozenset(checked),
        unchecked=unchecked,
        violations=tuple(violations),
        discriminability=matrix,
        discriminability_concepts=concepts,
        threshold=config.discriminability_threshold,
        dropped_dimensions=dropped,
    )
