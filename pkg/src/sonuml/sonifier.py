"""Turns a class model plus a sound catalogue into a timed, spatialized audio
walkthrough with a synchronized caption track, and renders single-element
cues for interactive navigation.

Layout x maps to stereo pan, layout y to a mild loudness tilt (pitch stays
reserved for the inheritance register contrast), and package nesting depth
maps to reverb. Every model element yields exactly one cue.
"""

from __future__ import annotations

import hashlib
import shlex
import subprocess
import warnings
from dataclasses import dataclass

import numpy as np

from .audio import (
    AudioBuffer,
    AuditoryVariables,
    SynthSpec,
    apply_variables,
    loudness_normalize,
    mix,
    normalize,
    read_wav_bytes,
    synth,
)
from .catalogue import EarconDurationWarning, SoundCatalogue, realize_earcon
from .uml import ClassModel, Position, assign_layout

AUDIENCES = ("novice", "expert")

#: Reference ids use a "kind:qualifier" scheme, e.g. class Book ->
#: "classifier:Book", its title attribute -> "attr:Book.title", the third
#: declared relationship -> "rel:2", package core.items -> "package:core.items".
MOTIF_CONCEPT = "_motif"

#: Per-cue loudness reference; every cue is levelled here before the y tilt.
TARGET_RMS_DB = -18.0
#: Hard per-cue peak ceiling, under the -1 dBFS final-mix budget.
CUE_PEAK_CEILING_DB = -1.5

PENTATONIC_HZ = (523.25, 587.33, 659.25, 783.99, 880.00)


class UnboundConceptError(Exception):
    """Raised when the model uses a concept the catalogue does not bind."""


class ElementNotFoundError(Exception):
    """Raised for unknown element references."""


class RenderError(Exception):
    """Raised when a timeline event cannot be rendered."""


@dataclass(frozen=True)
class RenderProfile:
    audience: str = "expert"
    motif_enabled: bool = True
    tts_hook: str | None = None
    pan_from_x: bool = True
    reverb_from_depth: bool = True
    inter_cue_gap_s: float = 0.35
    loudness_window_db: float = 1.0
    target_rms_db: float = TARGET_RMS_DB
    audiences: tuple[str, ...] = AUDIENCES

    def __post_init__(self):
        if self.audience not in self.audiences:
            raise ValueError(f"audience must be one of {self.audiences}")
        if self.inter_cue_gap_s < 0:
            raise ValueError("inter_cue_gap_s must be non-negative")
        if self.loudness_window_db <= 0:
            raise ValueError("loudness_window_db must be positive")


@dataclass(frozen=True)
class ModelElement:
    """One addressable diagram element with its spatial anchor."""

    ref: str
    concept_id: str
    caption: str
    position: Position
    depth: int
    children: tuple["ModelElement", ...] = ()


@dataclass(frozen=True)
class TimelineEvent:
    start_s: float
    concept_id: str
    element_ref: str
    variables: AuditoryVariables
    caption: str
    duration_s: float


@dataclass(frozen=True)
class SonicTimeline:
    events: tuple[TimelineEvent, ...]

    def __post_init__(self):
        starts = [e.start_s for e in self.events]
        if any(b < a for a, b in zip(starts, starts[1:])):
            raise ValueError("event starts must be non-decreasing")


@dataclass(frozen=True)
class CaptionCue:
    start_s: float
    end_s: float
    text: str


@dataclass(frozen=True)
class CaptionTrack:
    cues: tuple[CaptionCue, ...]


def spatialize(pos: Position, depth: int, bounds: tuple[float, float] = (100.0, 100.0)) -> AuditoryVariables:
    """Map a layout position and nesting depth to auditory variables.

    pan sweeps -1..+1 across x; y adds a +-1 dB tilt (upper elements sit
    marginally brighter in level); depth becomes reverb depth.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    bx, by = bounds
    if not (0.0 <= pos.x <= bx and 0.0 <= pos.y <= by):
        raise ValueError(f"position ({pos.x}, {pos.y}) outside bounds {bounds}")
    return AuditoryVariables(
        pan=2.0 * (pos.x / bx) - 1.0,
        loudness_db=-2.0 * (pos.y / by - 0.5),
        reverb_depth=depth,
    )


def diagram_motif(name: str, sample_rate: int = 44100) -> AudioBuffer:
    """Deterministic three-note pentatonic motif keyed by a stable hash of
    the diagram name; always at most 1.5 s."""
    if not name:
        raise ValueError("motif needs a non-empty name")
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    notes = [PENTATONIC_HZ[b % len(PENTATONIC_HZ)] for b in digest[:3]]
    parts = []
    cursor = 0.0
    for freq in notes:
        tone = synth(SynthSpec("sine", freq), 0.28, sample_rate)
        tone = apply_variables(tone, AuditoryVariables(attack_s=0.01, decay_s=0.22))
        parts.append((tone, cursor))
        cursor += 0.30
    return normalize(mix(parts), -3.0)


def motif_notes(name: str) -> tuple[float, ...]:
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    return tuple(PENTATONIC_HZ[b % len(PENTATONIC_HZ)] for b in digest[:3])


# --- element enumeration --------------------------------------------------------


def _relationship_caption(r) -> str:
    label = f" ({r.label})" if r.label else ""
    wording = {
        "association": f"Association from {r.source} to {r.target}",
        "inheritance": f"Inheritance: {r.source} specialises {r.target}",
        "realization": f"Realization: {r.source} implements {r.target}",
        "dependency": f"Dependency: {r.source} depends on {r.target}",
        "aggregation": f"Aggregation: {r.source} gathers {r.target}",
        "composition": f"Composition: {r.source} owns {r.target}",
        "association_class": (
            f"Association class {r.assoc_class} links {r.source} and {r.target}"
        ),
    }[r.kind]
    return wording + label


def element_tree(model: ClassModel) -> tuple[ModelElement, ...]:
    """Containment tree (packages -> classifiers -> members) in declaration
    order. The model must already have layout positions (see assign_layout);
    package anchors sit at the centroid of their classifiers."""

    def classifier_position(c) -> Position:
        if c.position is None:
            raise ValueError("element_tree requires a fully laid-out model")
        return c.position

    def package_position(path) -> Position:
        inside = [
            classifier_position(c)
            for c in model.classifiers
            if c.package_path[: len(path)] == path
        ]
        if not inside:
            return Position(50.0, 50.0)
        return Position(
            x=sum(p.x for p in inside) / len(inside),
            y=sum(p.y for p in inside) / len(inside),
        )

    def classifier_node(c) -> ModelElement:
        pos = classifier_position(c)
        depth = len(c.package_path)
        children = tuple(
            ModelElement(
                ref=f"attr:{c.name}.{a.name}",
                concept_id="Attribute",
                caption=f"Attribute {a.name} of {c.name}",
                position=pos,
                depth=depth,
            )
            for a in c.attributes
        ) + tuple(
            ModelElement(
                ref=f"op:{c.name}.{o.name}",
                concept_id="Operation",
                caption=f"Operation {o.name} of {c.name}",
                position=pos,
                depth=depth,
            )
            for o in c.operations
        )
        kind_word = "Interface" if c.kind == "interface" else "Class"
        return ModelElement(
            ref=f"classifier:{c.name}",
            concept_id="Class",
            caption=f"{kind_word} {c.name}",
            position=pos,
            depth=depth,
            children=children,
        )

    def scope_nodes(path: tuple[str, ...]) -> tuple[ModelElement, ...]:
        entries = []
        for p in model.packages:
            if p.path[:-1] == path and len(p.path) == len(path) + 1:
                entries.append((p.decl_index, "package", p))
        for c in model.classifiers:
            if c.package_path == path:
                entries.append((c.decl_index, "classifier", c))
        nodes = []
        for _, what, obj in sorted(entries):
            if what == "package":
                nodes.append(
                    ModelElement(
                        ref=f"package:{'.'.join(obj.path)}",
                        concept_id="Package",
                        caption=f"Package {'.'.join(obj.path)}",
                        position=package_position(obj.path),
                        depth=len(obj.path) - 1,
                        children=scope_nodes(obj.path),
                    )
                )
            else:
                nodes.append(classifier_node(obj))
        return tuple(nodes)

    return scope_nodes(())


def relationship_elements(model: ClassModel) -> tuple[ModelElement, ...]:
    """Relationship cues anchored at the midpoint of their endpoints."""
    out = []
    for r in sorted(model.relationships, key=lambda r: r.decl_index):
        src = model.classifier(r.source)
        tgt = model.classifier(r.target)
        if src.position is None or tgt.position is None:
            raise ValueError("relationship_elements requires a fully laid-out model")
        pos = Position(
            x=(src.position.x + tgt.position.x) / 2.0,
            y=(src.position.y + tgt.position.y) / 2.0,
        )
        depth = min(len(src.package_path), len(tgt.package_path))
        out.append(
            ModelElement(
                ref=f"rel:{r.decl_index}",
                concept_id=r.concept_id,
                caption=_relationship_caption(r),
                position=pos,
                depth=depth,
            )
        )
    return tuple(out)


def _flatten(nodes) -> list[ModelElement]:
    out = []
    for node in nodes:
        out.append(node)
        out.extend(_flatten(node.children))
    return out


def all_elements(model: ClassModel) -> tuple[ModelElement, ...]:
    """Walkthrough order: containment tree preorder, then relationships."""
    return tuple(_flatten(element_tree(model))) + relationship_elements(model)


def find_element(model: ClassModel, ref: str) -> ModelElement:
    for el in all_elements(model):
        if el.ref == ref:
            return el
    raise ElementNotFoundError(f"no element {ref!r} in the model")


def profile_variables(element: ModelElement, profile: RenderProfile) -> AuditoryVariables:
    """Spatial variables for an element, gated by the profile: novices hear
    pan only; loudness tilt and depth reverb are expert-audience cues."""
    v = spatialize(element.position, element.depth)
    pan = v.pan if profile.pan_from_x else 0.0
    if profile.audience == "novice":
        return AuditoryVariables(pan=pan)
    return AuditoryVariables(
        pan=pan,
        loudness_db=v.loudness_db,
        reverb_depth=v.reverb_depth if profile.reverb_from_depth else 0,
    )


def _event_caption(element: ModelElement, catalogue: SoundCatalogue, profile: RenderProfile) -> str:
    if profile.audience != "novice":
        return element.caption
    bindings = catalogue.bindings_for(element.concept_id)
    hint = bindings[0].recipe.caption if bindings else ""
    return f"{element.caption} — {hint}" if hint else element.caption


def render_cue(
    concept_id: str,
    variables: AuditoryVariables,
    catalogue: SoundCatalogue,
    profile: RenderProfile,
    motif_name: str | None = None,
) -> AudioBuffer:
    """Shared cue pipeline: realize, level to the profile RMS target, apply
    the loudness tilt last so levelling cannot cancel it, cap the peak."""
    if concept_id == MOTIF_CONCEPT:
        if not motif_name:
            raise RenderError("motif events need the diagram name")
        buf = diagram_motif(motif_name)
    else:
        bindings = catalogue.bindings_for(concept_id)
        if not bindings:
            raise UnboundConceptError(f"catalogue binds no earcon for {concept_id!r}")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EarconDurationWarning)
            buf = realize_earcon(
                bindings[0].recipe,
                catalogue,
                extra=variables.but(loudness_db=0.0),
            )
    return level_cue(buf, profile, tilt_db=variables.loudness_db)


def level_cue(buf: AudioBuffer, profile: RenderProfile, tilt_db: float = 0.0) -> AudioBuffer:
    """Level a cue to the profile's gated-loudness target, apply the y-axis
    tilt afterwards so levelling cannot cancel it, and cap the peak."""
    buf = loudness_normalize(buf, profile.target_rms_db)
    if tilt_db:
        buf = buf.scaled(10.0 ** (tilt_db / 20.0))
    ceiling = 10.0 ** (CUE_PEAK_CEILING_DB / 20.0)
    peak = buf.peak()
    if peak > ceiling:
        buf = buf.scaled(ceiling / peak)
    return buf


def _used_concepts(model: ClassModel) -> set[str]:
    used = set()
    if model.packages:
        used.add("Package")
    if model.classifiers:
        used.add("Class")
    if any(c.attributes for c in model.classifiers):
        used.add("Attribute")
    if any(c.operations for c in model.classifiers):
        used.add("Operation")
    for r in model.relationships:
        used.add(r.concept_id)
    return used


def plan_walkthrough(
    model: ClassModel, catalogue: SoundCatalogue, profile: RenderProfile = RenderProfile()
) -> SonicTimeline:
    """Deterministic timeline: optional motif, containment preorder, then
    relationships; one event per model element, starts spaced by the
    realized cue durations plus the inter-cue gap."""
    model = assign_layout(model)
    missing = sorted(
        concept for concept in _used_concepts(model) if not catalogue.bindings_for(concept)
    )
    if missing:
        raise UnboundConceptError(
            f"catalogue {catalogue.name!r} binds no earcon for: {', '.join(missing)}"
        )

    events = []
    cursor = 0.0
    if profile.motif_enabled:
        motif = render_cue(MOTIF_CONCEPT, AuditoryVariables(), catalogue, profile, model.name)
        events.append(
            TimelineEvent(
                start_s=0.0,
                concept_id=MOTIF_CONCEPT,
                element_ref=f"diagram:{model.name}",
                variables=AuditoryVariables(),
                caption=f"Diagram {model.name}",
                duration_s=motif.duration_s,
            )
        )
        cursor = motif.duration_s + profile.inter_cue_gap_s

    for element in all_elements(model):
        variables = profile_variables(element, profile)
        cue = render_cue(element.concept_id, variables, catalogue, profile)
        events.append(
            TimelineEvent(
                start_s=cursor,
                concept_id=element.concept_id,
                element_ref=element.ref,
                variables=variables,
                caption=_event_caption(element, catalogue, profile),
                duration_s=cue.duration_s,
            )
        )
        cursor += cue.duration_s + profile.inter_cue_gap_s
    return SonicTimeline(tuple(events))


def _run_tts_hook(template: str, text: str, sample_rate: int) -> AudioBuffer | None:
    """Run the external TTS command; any failure degrades to captions only."""
    try:
        argv = [part.replace("{text}", text) for part in shlex.split(template)]
        proc = subprocess.run(argv, capture_output=True, timeout=30, check=True)
        spoken = read_wav_bytes(proc.stdout)
    except Exception as exc:
        warnings.warn(f"tts hook failed ({exc}); caption stays text-only", stacklevel=2)
        return None
    if spoken.sample_rate != sample_rate:
        ratio = spoken.sample_rate / sample_rate
        resampled = np.stack(
            [
                np.interp(
                    np.arange(round(spoken.frames / ratio)) * ratio,
                    np.arange(spoken.frames),
                    ch,
                )
                for ch in spoken.samples
            ]
        )
        spoken = AudioBuffer(resampled, sample_rate)
    return spoken


def render_timeline(
    timeline: SonicTimeline,
    catalogue: SoundCatalogue,
    profile: RenderProfile = RenderProfile(),
    model_name: str | None = None,
) -> tuple[AudioBuffer, CaptionTrack]:
    """Mix every event at its start; captions align to event starts. With a
    TTS hook configured, spoken captions ride 6 dB under their earcon."""
    if not timeline.events:
        raise RenderError("timeline has no events")
    sample_rate = 44100
    parts: list[tuple[AudioBuffer, float]] = []
    captions = []
    for index, event in enumerate(timeline.events):
        try:
            name = model_name or event.element_ref.split(":", 1)[-1]
            cue = render_cue(event.concept_id, event.variables, catalogue, profile, name)
        except Exception as exc:
            raise RenderError(f"event {index} ({event.element_ref}): {exc}") from exc
        parts.append((cue, event.start_s))
        captions.append(
            CaptionCue(event.start_s, event.start_s + cue.duration_s, event.caption)
        )
        if profile.tts_hook:
            spoken = _run_tts_hook(profile.tts_hook, event.caption, sample_rate)
            if spoken is not None:
                spoken = loudness_normalize(spoken, profile.target_rms_db - 6.0)
                parts.append((spoken, event.start_s))
    out = mix(parts)
    budget = 10.0 ** (-1.0 / 20.0)
    peak = out.peak()
    if peak > budget:
        out = out.scaled(budget / peak)
    return out, CaptionTrack(tuple(captions))


def element_cue(
    model: ClassModel,
    element_ref: str,
    catalogue: SoundCatalogue,
    profile: RenderProfile = RenderProfile(),
) -> tuple[AudioBuffer, str]:
    """Single spatialized cue plus caption, identical to the element's
    walkthrough rendering."""
    model = assign_layout(model)
    element = find_element(model, element_ref)
    variables = profile_variables(element, profile)
    cue = render_cue(element.concept_id, variables, catalogue, profile)
    return cue, _event_caption(element, catalogue, profile)


def _vtt_timestamp(seconds: float) -> str:
    total_ms = round(seconds * 1000.0)
    h, rem = divmod(total_ms, 3_600_000)
    m, rem = divmod(rem, 60_000)
    s, ms = divmod(rem, 1000)
    return f"{h:02d}:{m:02d}:{s:02d}.{ms:03d}"


def captions_to_vtt(track: CaptionTrack) -> str:
    lines = ["WEBVTT", ""]
    for i, cue in enumerate(track.cues, start=1):
        lines.append(str(i))
        lines.append(f"{_vtt_timestamp(cue.start_s)} --> {_vtt_timestamp(cue.end_s)}")
        lines.append(cue.text)
        lines.append("")
    return "\n".join(lines)
