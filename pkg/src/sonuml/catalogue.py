"""Sound-catalogue document model: concept->earcon bindings with semiotic
metadata, JSON manifest parsing, earcon realization, and the two built-in
catalogues (the principled proposal and the bad-practices baseline).
"""

from __future__ import annotations

import json
import os
import warnings
from dataclasses import dataclass, field, replace

from .audio import (
    AudioBuffer,
    AuditoryVariables,
    SynthSpec,
    apply_variables,
    mix,
    normalize,
    read_wav,
    synth,
)

#: The eleven class-diagram concepts a catalogue can bind.
UML_CONCEPTS = (
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

SIGN_MODES = ("icon", "index", "symbol")
RECIPE_MODES = ("sequence", "overlay", "mixed")

#: Default upper bound on a realized earcon, seconds.
MAX_EARCON_S = 3.0

EARCON_PEAK_DB = -3.0


class CatalogueError(Exception):
    """Raised for manifest syntax or referential errors."""


class AssetIOError(Exception):
    """Raised when a file-backed asset cannot be loaded."""


class EarconDurationWarning(UserWarning):
    """Emitted when a realized earcon exceeds the duration bound."""


@dataclass(frozen=True)
class Concept:
    id: str
    description: str = ""


@dataclass(frozen=True)
class SoundAsset:
    """A named sound source: either a synth recipe or a WAV file path."""

    id: str
    source: SynthSpec | str
    nominal_duration_s: float = 1.0

    def __post_init__(self):
        if self.nominal_duration_s <= 0:
            raise ValueError("nominal_duration_s must be positive")


@dataclass(frozen=True)
class EarconRecipe:
    """Ordered components (asset id + per-component variables) plus a caption.

    ``mode`` controls placement: sequence = back to back, overlay = all at
    offset zero, mixed = per-component start offsets.
    """

    components: tuple[tuple[str, AuditoryVariables], ...]
    caption: str = ""
    mode: str = "sequence"

    def __post_init__(self):
        if not self.components:
            raise ValueError("a recipe needs at least one component")
        if self.mode not in RECIPE_MODES:
            raise ValueError(f"mode must be one of {RECIPE_MODES}")


@dataclass(frozen=True)
class ConceptBinding:
    concept_id: str
    recipe: EarconRecipe
    sign_mode: str
    rationale: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sign_mode not in SIGN_MODES:
            raise ValueError(f"sign_mode must be one of {SIGN_MODES}")


@dataclass(frozen=True)
class SoundCatalogue:
    name: str
    version: str
    concepts: tuple[Concept, ...]
    assets: tuple[SoundAsset, ...]
    bindings: tuple[ConceptBinding, ...]

    def asset(self, asset_id: str) -> SoundAsset:
        for a in self.assets:
            if a.id == asset_id:
                return a
        raise KeyError(asset_id)

    def concept_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.concepts)

    def bindings_for(self, concept_id: str) -> tuple[ConceptBinding, ...]:
        return tuple(b for b in self.bindings if b.concept_id == concept_id)


NEUTRAL = AuditoryVariables()


def compose_variables(base: AuditoryVariables, extra: AuditoryVariables) -> AuditoryVariables:
    """Stack variables: gains and semitones add, pans clamp after summing,
    reverb depths add, duration scales multiply, envelope times take the max,
    start offsets add."""
    return AuditoryVariables(
        loudness_db=base.loudness_db + extra.loudness_db,
        pitch_semitones=base.pitch_semitones + extra.pitch_semitones,
        pan=max(-1.0, min(1.0, base.pan + extra.pan)),
        duration_scale=base.duration_scale * extra.duration_scale,
        attack_s=max(base.attack_s, extra.attack_s),
        decay_s=max(base.decay_s, extra.decay_s),
        reverb_depth=base.reverb_depth + extra.reverb_depth,
        start_offset_s=base.start_offset_s + extra.start_offset_s,
    )


# --- manifest ----------------------------------------------------------------


def _variables_to_doc(v: AuditoryVariables) -> dict:
    doc = {}
    defaults = AuditoryVariables()
    for name in (
        "loudness_db",
        "pitch_semitones",
        "pan",
        "duration_scale",
        "attack_s",
        "decay_s",
        "reverb_depth",
        "start_offset_s",
    ):
        value = getattr(v, name)
        if value != getattr(defaults, name):
            doc[name] = value
    return doc


def _variables_from_doc(doc: dict) -> AuditoryVariables:
    try:
        return AuditoryVariables(**doc)
    except TypeError as exc:
        raise CatalogueError(f"bad auditory variables: {exc}") from None


def parse_manifest(text: str) -> SoundCatalogue:
    """Load a JSON manifest; performs referential checks only (overbinding
    and other principle-level defects are the linter's concern)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogueError(f"line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise CatalogueError("manifest must be a JSON object")
    for key in ("name", "concepts", "assets", "bindings"):
        if key not in doc:
            raise CatalogueError(f"manifest missing key {key!r}")

    concepts = []
    seen = set()
    for c in doc["concepts"]:
        cid = c["id"] if isinstance(c, dict) else str(c)
        if cid in seen:
            raise CatalogueError(f"duplicate concept id {cid!r}")
        seen.add(cid)
        concepts.append(Concept(cid, c.get("description", "") if isinstance(c, dict) else ""))

    assets = []
    asset_ids = set()
    for a in doc["assets"]:
        if a["id"] in asset_ids:
            raise CatalogueError(f"duplicate asset id {a['id']!r}")
        asset_ids.add(a["id"])
        if "synth" in a:
            s = a["synth"]
            try:
                source = SynthSpec(
                    generator=s["generator"],
                    base_freq_hz=s.get("base_freq_hz", 440.0),
                    params=s.get("params", {}),
                )
            except (KeyError, ValueError) as exc:
                raise CatalogueError(f"asset {a['id']!r}: {exc}") from None
        elif "file" in a:
            source = a["file"]
        else:
            raise CatalogueError(f"asset {a['id']!r} needs a 'synth' or 'file' source")
        assets.append(SoundAsset(a["id"], source, a.get("nominal_duration_s", 1.0)))

    bindings = []
    for b in doc["bindings"]:
        recipe_doc = b["recipe"]
        components = []
        for comp in recipe_doc["components"]:
            asset_id = comp["asset"]
            if asset_id not in asset_ids:
                raise CatalogueError(
                    f"binding {b['concept']!r} references undeclared asset {asset_id!r}"
                )
            components.append((asset_id, _variables_from_doc(comp.get("variables", {}))))
        recipe = EarconRecipe(
            components=tuple(components),
            caption=recipe_doc.get("caption", ""),
            mode=recipe_doc.get("mode", "sequence"),
        )
        bindings.append(
            ConceptBinding(
                concept_id=b["concept"],
                recipe=recipe,
                sign_mode=b.get("sign_mode", "symbol"),
                rationale=b.get("rationale", ""),
                metadata=b.get("metadata", {}),
            )
        )

    return SoundCatalogue(
        name=doc["name"],
        version=str(doc.get("version", "0")),
        concepts=tuple(concepts),
        assets=tuple(assets),
        bindings=tuple(bindings),
    )


def serialize_manifest(cat: SoundCatalogue) -> str:
    doc = {
        "name": cat.name,
        "version": cat.version,
        "concepts": [{"id": c.id, "description": c.description} for c in cat.concepts],
        "assets": [],
        "bindings": [],
    }
    for a in cat.assets:
        entry: dict = {"id": a.id, "nominal_duration_s": a.nominal_duration_s}
        if isinstance(a.source, SynthSpec):
            entry["synth"] = {
                "generator": a.source.generator,
                "base_freq_hz": a.source.base_freq_hz,
                "params": a.source.params,
            }
        else:
            entry["file"] = a.source
        doc["assets"].append(entry)
    for b in cat.bindings:
        doc["bindings"].append(
            {
                "concept": b.concept_id,
                "sign_mode": b.sign_mode,
                "rationale": b.rationale,
                "metadata": b.metadata,
                "recipe": {
                    "mode": b.recipe.mode,
                    "caption": b.recipe.caption,
                    "components": [
                        {"asset": asset_id, "variables": _variables_to_doc(v)}
                        for asset_id, v in b.recipe.components
                    ],
                },
            }
        )
    return json.dumps(doc, indent=2)


def load_manifest(path) -> SoundCatalogue:
    with open(path, encoding="utf-8") as f:
        cat = parse_manifest(f.read())
    base = os.path.dirname(os.path.abspath(path))
    assets = tuple(
        replace(a, source=os.path.join(base, a.source))
        if isinstance(a.source, str) and not os.path.isabs(a.source)
        else a
        for a in cat.assets
    )
    return replace(cat, assets=assets)


# --- realization --------------------------------------------------------------


def _asset_buffer(asset: SoundAsset, sample_rate: int) -> AudioBuffer:
    if isinstance(asset.source, SynthSpec):
        return synth(asset.source, asset.nominal_duration_s, sample_rate)
    try:
        return read_wav(asset.source)
    except OSError as exc:
        raise AssetIOError(f"asset {asset.id!r}: {exc}") from exc


def realize_earcon(
    recipe: EarconRecipe,
    catalogue: SoundCatalogue,
    extra: AuditoryVariables = NEUTRAL,
    sample_rate: int = 44100,
    max_earcon_s: float = MAX_EARCON_S,
) -> AudioBuffer:
    """Render a recipe to a -3 dBFS-peak stereo buffer.

    ``extra`` composes onto every component (see compose_variables). A
    realized duration beyond ``max_earcon_s`` emits EarconDurationWarning
    rather than failing, so the linter can observe the overrun.
    """
    parts: list[tuple[AudioBuffer, float]] = []
    cursor = 0.0
    for asset_id, base_vars in recipe.components:
        v = compose_variables(base_vars, extra)
        buf = apply_variables(_asset_buffer(catalogue.asset(asset_id), sample_rate), v)
        if recipe.mode == "sequence":
            offset = cursor
            cursor += buf.duration_s
        elif recipe.mode == "overlay":
            offset = 0.0
        else:
            offset = v.start_offset_s
        parts.append((buf, offset))
    out = normalize(mix(parts), EARCON_PEAK_DB)
    if out.duration_s > max_earcon_s:
        warnings.warn(
            f"earcon runs {out.duration_s:.2f} s, over the {max_earcon_s:.2f} s bound",
            EarconDurationWarning,
            stacklevel=2,
        )
    return out


def realized_duration_s(
    recipe: EarconRecipe,
    catalogue: SoundCatalogue,
    extra: AuditoryVariables = NEUTRAL,
    sample_rate: int = 44100,
) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EarconDurationWarning)
        return realize_earcon(recipe, catalogue, extra, sample_rate).duration_s


# --- built-in catalogues -------------------------------------------------------


def _synth_asset(asset_id, generator, freq, duration, **params):
    return SoundAsset(
        id=asset_id,
        source=SynthSpec(generator=generator, base_freq_hz=freq, params=params),
        nominal_duration_s=duration,
    )


def _component(asset_id, **vars_kwargs):
    return (asset_id, AuditoryVariables(**vars_kwargs))


_CONCEPT_DESCRIPTIONS = {
    "Class": "a classifier with attributes and operations",
    "Attribute": "a named property of a class",
    "Operation": "a callable behaviour of a class",
    "Association": "a structural link between classes",
    "Inheritance": "a child class specialising a parent",
    "Realization": "a class implementing an interface",
    "Dependency": "a class relying on another",
    "Aggregation": "a whole grouping independent parts",
    "Composition": "a whole owning parts that die with it",
    "AssociationClass": "an association carrying its own class",
    "Package": "a namespace grouping model elements",
}


def _concepts():
    return tuple(Concept(cid, _CONCEPT_DESCRIPTIONS[cid]) for cid in UML_CONCEPTS)


def builtin_proposed() -> SoundCatalogue:
    """The principled catalogue: eleven earcons, distinct timbres, shared
    motifs reused deliberately (book-opening register pair for inheritance),
    every component brief enough to keep earcons at or under three seconds."""
    assets = (
        _synth_asset("book_opening", "chirp", 320.0, 0.45, end_freq_hz=1500.0),
        _synth_asset("chime_confirm", "sine", 1318.5, 0.30),
        _synth_asset("bricks_tumble", "pluck", 150.0, 0.50, seed=11),
        _synth_asset("alert_beeps", "square", 1760.0, 0.30, am_hz=11.0, am_depth=1.0),
        _synth_asset(
            "key_typing", "filtered_noise", 0.0, 0.80, cutoff_hz=5200.0, highpass_hz=1500.0,
            am_hz=9.0, am_depth=0.95, seed=21,
        ),
        _synth_asset("arrow_release", "chirp", 1900.0, 0.35, end_freq_hz=260.0),
        _synth_asset("coin_shower", "pluck", 1150.0, 0.55, seed=31),
        _synth_asset("site_rumble", "filtered_noise", 0.0, 1.10, cutoff_hz=420.0, seed=41),
        _synth_asset("hammer_knock", "sine", 82.0, 0.30, am_hz=6.0, am_depth=0.4),
        _synth_asset(
            "infant_wail", "sine", 540.0, 1.20, fm_hz=3.5, fm_semitones=4.0,
            am_hz=5.5, am_depth=0.35,
        ),
        _synth_asset("crowd_roar", "filtered_noise", 0.0, 1.40, cutoff_hz=2300.0,
                     am_hz=1.6, am_depth=0.3, seed=51),
        _synth_asset(
            "flame_crackle", "filtered_noise", 0.0, 1.00, cutoff_hz=9500.0,
            highpass_hz=3800.0, am_hz=13.0, am_depth=0.75, seed=61,
        ),
        _synth_asset(
            "page_riffle", "filtered_noise", 0.0, 0.50, cutoff_hz=4200.0,
            highpass_hz=900.0, am_hz=7.0, am_depth=0.6, seed=71,
        ),
        _synth_asset(
            "envelope_tear", "filtered_noise", 0.0, 0.40, cutoff_hz=2800.0,
            highpass_hz=350.0, seed=81,
        ),
        _synth_asset("zip_pull", "chirp", 650.0, 0.35, end_freq_hz=2600.0),
    )
    fade = {"attack_s": 0.01, "decay_s": 0.12}
    bindings = (
        ConceptBinding(
            "Class",
            EarconRecipe(
                components=(
                    _component("book_opening", **fade),
                    _component("chime_confirm", attack_s=0.005, decay_s=0.25),
                ),
                caption="Class: a book opens, then a bright confirmation chime",
            ),
            sign_mode="symbol",
            rationale="opening a cover announces that members are about to be read out",
        ),
        ConceptBinding(
            "Attribute",
            EarconRecipe(
                components=(
                    _component("bricks_tumble", **fade),
                    _component("alert_beeps", attack_s=0.005, decay_s=0.1),
                ),
                caption="Attribute: building blocks tumble, then notification beeps",
            ),
            sign_mode="symbol",
            rationale="blocks stand for the data a class is built from",
        ),
        ConceptBinding(
            "Operation",
            EarconRecipe(
                components=(_component("key_typing", **fade),),
                caption="Operation: rapid keyboard typing",
            ),
            sign_mode="index",
            rationale="typing points at the act of programming behaviour",
        ),
        ConceptBinding(
            "Association",
            EarconRecipe(
                components=(_component("arrow_release", attack_s=0.004, decay_s=0.15),),
                caption="Association: an arrow is loosed between two classes",
            ),
            sign_mode="icon",
            rationale="the arrow is the same metaphor the visual notation draws",
        ),
        ConceptBinding(
            "Inheritance",
            EarconRecipe(
                components=(
                    _component("book_opening", pitch_semitones=-5.0, **fade),
                    _component("coin_shower", **fade),
                    _component("book_opening", pitch_semitones=5.0, **fade),
                ),
                caption="Inheritance: a low class motif hands coins up to a high one",
            ),
            sign_mode="symbol",
            rationale="the class motif in two registers frames wealth passing parent to child",
        ),
        ConceptBinding(
            "Realization",
            EarconRecipe(
                components=(
                    _component("site_rumble", attack_s=0.05, decay_s=0.3),
                    _component("hammer_knock", attack_s=0.004, decay_s=0.2),
                ),
                caption="Realization: hammer blows stand out over a construction site",
                mode="overlay",
            ),
            sign_mode="index",
            rationale="building noise points at an implementation being erected",
        ),
        ConceptBinding(
            "Dependency",
            EarconRecipe(
                components=(_component("infant_wail", attack_s=0.03, decay_s=0.3),),
                caption="Dependency: an infant cries for its caregiver",
            ),
            sign_mode="index",
            rationale="a cry signals needing someone else, which is what the arrow says",
        ),
        ConceptBinding(
            "Aggregation",
            EarconRecipe(
                components=(_component("crowd_roar", attack_s=0.05, decay_s=0.35),),
                caption="Aggregation: a sports crowd gathered into one whole",
            ),
            sign_mode="icon",
            rationale="a crowd is a whole whose members survive its disbanding",
        ),
        ConceptBinding(
            "Composition",
            EarconRecipe(
                components=(
                    _component("crowd_roar", attack_s=0.05, decay_s=0.3),
                    _component("flame_crackle", attack_s=0.02, decay_s=0.3),
                ),
                caption="Composition: the crowd's parts burn away with the whole",
            ),
            sign_mode="icon",
            rationale="fire conveys that destroying the whole destroys the parts",
        ),
        ConceptBinding(
            "AssociationClass",
            EarconRecipe(
                components=(
                    _component("arrow_release", attack_s=0.004, decay_s=0.15),
                    _component("book_opening", **fade),
                    _component("page_riffle", **fade),
                ),
                caption="AssociationClass: the association arrow meets the class book, pages riffle",
            ),
            sign_mode="symbol",
            rationale="reuses the arrow and book motifs so the combined meaning is recognisable",
        ),
        ConceptBinding(
            "Package",
            EarconRecipe(
                components=(
                    _component("envelope_tear", **fade),
                    _component("zip_pull", attack_s=0.005, decay_s=0.1),
                ),
                caption="Package: an envelope tears open, a zip runs",
            ),
            sign_mode="symbol",
            rationale="mail imagery for a container that delivers grouped content",
        ),
    )
    return SoundCatalogue(
        name="proposed",
        version="1",
        concepts=_concepts(),
        assets=assets,
        bindings=bindings,
    )


def builtin_baseline() -> SoundCatalogue:
    """The bad-practices catalogue: one engine sound reused verbatim for two
    concepts, two near-identical waters and two near-identical winds, a
    six-component overlay that overruns the duration bound, and arbitrary
    choices elsewhere."""
    assets = (
        _synth_asset("car_engine", "square", 52.0, 1.30, am_hz=13.0, am_depth=0.5),
        _synth_asset(
            "water_flow_a", "filtered_noise", 0.0, 1.00, cutoff_hz=1800.0,
            am_hz=2.5, am_depth=0.25, seed=101,
        ),
        _synth_asset(
            "water_flow_b", "filtered_noise", 0.0, 1.00, cutoff_hz=1890.0,
            am_hz=2.5, am_depth=0.25, seed=102,
        ),
        _synth_asset(
            "wind_gust_a", "filtered_noise", 0.0, 1.20, cutoff_hz=480.0,
            am_hz=0.8, am_depth=0.4, seed=103,
        ),
        _synth_asset(
            "wind_gust_b", "filtered_noise", 0.0, 1.20, cutoff_hz=504.0,
            am_hz=0.8, am_depth=0.4, seed=104,
        ),
        _synth_asset("farm_animals", "sine", 170.0, 3.40, fm_hz=1.5, fm_semitones=7.0),
        _synth_asset("piano_notes", "pluck", 523.0, 0.80, seed=111),
        _synth_asset("window_squeak", "chirp", 1200.0, 0.70, end_freq_hz=1850.0),
        _synth_asset("tyre_screech", "chirp", 2900.0, 0.90, end_freq_hz=2300.0),
        _synth_asset(
            "bottle_crunch", "filtered_noise", 0.0, 0.40, cutoff_hz=7000.0,
            highpass_hz=1400.0, am_hz=17.0, am_depth=0.8, seed=121,
        ),
        _synth_asset("car_engine_b", "square", 57.0, 1.30, am_hz=13.0, am_depth=0.5),
        _synth_asset("elephant_trumpet", "square", 310.0, 1.00, fm_hz=2.5, fm_semitones=8.0),
        _synth_asset("cartoon_scamper", "pluck", 340.0, 0.90, am_hz=10.0, am_depth=0.9, seed=131),
        _synth_asset("doorbell_chime", "sine", 740.0, 0.90, am_hz=1.2, am_depth=0.3),
        _synth_asset("blast_boom", "noise", 0.0, 0.85, seed=141),
    )
    soft = {"attack_s": 0.02, "decay_s": 0.2}

    def single(concept, asset_id, caption):
        return ConceptBinding(
            concept,
            EarconRecipe(components=(_component(asset_id, **soft),), caption=caption),
            sign_mode="symbol",
            rationale="arbitrary pick",
        )

    bindings = (
        single("Class", "car_engine", "Class: a car engine idles"),
        single("Attribute", "car_engine", "Attribute: a car engine idles"),
        single("Operation", "water_flow_a", "Operation: water runs"),
        single("Association", "water_flow_b", "Association: water runs"),
        ConceptBinding(
            "Inheritance",
            EarconRecipe(
                components=(
                    _component("farm_animals", **soft),
                    _component("piano_notes", **soft),
                    _component("window_squeak", **soft),
                    _component("tyre_screech", **soft),
                    _component("bottle_crunch", **soft),
                    _component("car_engine_b", **soft),
                ),
                caption="Inheritance: farm animals, piano, squeaks, screeches, crunches and an engine at once",
                mode="overlay",
            ),
            sign_mode="symbol",
            rationale="everything at once",
        ),
        single("Realization", "wind_gust_a", "Realization: wind blows"),
        single("Dependency", "wind_gust_b", "Dependency: wind blows"),
        single("Aggregation", "elephant_trumpet", "Aggregation: an elephant trumpets"),
        single("Composition", "cartoon_scamper", "Composition: cartoon feet scamper"),
        single("AssociationClass", "doorbell_chime", "AssociationClass: a doorbell rings"),
        single("Package", "blast_boom", "Package: an explosion"),
    )
    return SoundCatalogue(
        name="baseline",
        version="1",
        concepts=_concepts(),
        assets=assets,
        bindings=bindings,
    )


def builtin_catalogue(name: str) -> SoundCatalogue:
    if name == "proposed":
        return builtin_proposed()
    if name == "baseline":
        return builtin_baseline()
    raise KeyError(f"no builtin catalogue named {name!r}")
