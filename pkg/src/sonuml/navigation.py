"""Interactive navigation sessions over a class model.

A session has a focus somewhere in the containment tree (packages ->
classifiers -> members); moves walk siblings, descend, ascend, follow
relationships, repeat, or ask for orientation. Every move answers with
audio: legal moves play the new focus cue, boundary bumps play a reserved
click that lives outside the concept namespace so it cannot collide with a
catalogue sound.
"""

from __future__ import annotations

import hashlib
import threading
import time
import uuid
from dataclasses import dataclass, field

from .audio import AudioBuffer, AuditoryVariables, SynthSpec, apply_variables, synth
from .catalogue import SoundCatalogue
from .sonifier import (
    ElementNotFoundError,
    ModelElement,
    RenderProfile,
    element_tree,
    plan_walkthrough,
    profile_variables,
    relationship_elements,
    render_cue,
)
from .uml import ClassModel, assign_layout

MOVES = (
    "next_sibling",
    "prev_sibling",
    "into",
    "out",
    "follow_relationship",
    "repeat_cue",
    "where_am_i",
)

#: Moves a novice session accepts; experts get relationship jumps on top.
NOVICE_MOVES = frozenset(
    ("next_sibling", "prev_sibling", "into", "out", "repeat_cue", "where_am_i")
)

BOUNDARY_REF = "_boundary"


class IllegalMoveError(Exception):
    """Raised for moves outside a session's audience vocabulary."""


class UnknownMoveError(Exception):
    """Raised for move names outside the vocabulary entirely."""


def boundary_click(sample_rate: int = 44100) -> AudioBuffer:
    """Short low click for edge bumps; a reserved non-catalogue sound."""
    tone = synth(SynthSpec("sine", 150.0), 0.06, sample_rate)
    return apply_variables(tone, AuditoryVariables(attack_s=0.002, decay_s=0.05))


@dataclass(frozen=True)
class NavEvent:
    focus: str
    caption: str
    breadcrumb: str
    cue_id: str
    audio: AudioBuffer
    moved: bool
    boundary: bool = False


@dataclass
class NavSession:
    id: str
    model: ClassModel
    catalogue: SoundCatalogue
    profile: RenderProfile
    focus: str
    history: list[str] = field(default_factory=list)
    last_access: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class _Tree:
    """Index of the containment tree plus per-classifier relationship lists."""

    def __init__(self, model: ClassModel):
        self.model = model
        self.roots = element_tree(model)
        self.parent: dict[str, str | None] = {}
        self.children: dict[str, tuple[str, ...]] = {}
        self.elements: dict[str, ModelElement] = {}

        def walk(node: ModelElement, parent_ref: str | None):
            self.elements[node.ref] = node
            self.parent[node.ref] = parent_ref
            self.children[node.ref] = tuple(child.ref for child in node.children)
            for child in node.children:
                walk(child, node.ref)

        for root in self.roots:
            walk(root, None)
        for rel in relationship_elements(model):
            self.elements[rel.ref] = rel
        self.root_refs = tuple(r.ref for r in self.roots)
        self.outgoing: dict[str, tuple[str, ...]] = {}
        for c in model.classifiers:
            refs = tuple(
                f"rel:{r.decl_index}"
                for r in sorted(model.relationships, key=lambda r: r.decl_index)
                if r.source == c.name
            )
            self.outgoing[f"classifier:{c.name}"] = refs

    def siblings(self, ref: str) -> tuple[str, ...]:
        parent = self.parent.get(ref)
        if parent is None:
            return self.root_refs
        return self.children[parent]


def _tree(model: ClassModel) -> _Tree:
    return _Tree(assign_layout(model))


def cue_id(model: ClassModel, catalogue: SoundCatalogue, profile: RenderProfile, ref: str) -> str:
    key = "|".join(
        (model.name, catalogue.name, catalogue.version, profile.audience, ref)
    )
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]


class Navigator:
    """Move engine shared by the CLI and the HTTP service; caches rendered
    cues per (element, audience) so interactive moves stay snappy."""

    def __init__(self, model: ClassModel, catalogue: SoundCatalogue):
        self.model = assign_layout(model)
        self.catalogue = catalogue
        self.tree = _Tree(self.model)
        self._cue_cache: dict[str, AudioBuffer] = {}
        self._cache_lock = threading.Lock()
        # Fail fast if the catalogue cannot voice this model.
        plan_walkthrough(self.model, catalogue, RenderProfile(motif_enabled=False))

    # cue rendering -------------------------------------------------------------

    def _cue_for(self, ref: str, profile: RenderProfile) -> tuple[str, AudioBuffer]:
        cid = cue_id(self.model, self.catalogue, profile, ref)
        with self._cache_lock:
            cached = self._cue_cache.get(cid)
        if cached is not None:
            return cid, cached
        if ref == BOUNDARY_REF:
            from .sonifier import level_cue

            audio = level_cue(boundary_click(), profile)
        elif ref.startswith("follow:"):
            rel_ref = ref.split(":", 2)[1] + ":" + ref.split(":", 2)[2]
            audio = self._follow_audio(rel_ref, profile)
        else:
            element = self.tree.elements[ref]
            variables = profile_variables(element, profile)
            audio = render_cue(element.concept_id, variables, self.catalogue, profile)
        with self._cache_lock:
            self._cue_cache.setdefault(cid, audio)
        return cid, audio

    def _follow_audio(self, rel_ref: str, profile: RenderProfile) -> AudioBuffer:
        """Relationship earcon followed by the target classifier's cue."""
        from .audio import mix

        rel = self.tree.elements[rel_ref]
        rel_cue = render_cue(
            rel.concept_id, profile_variables(rel, profile), self.catalogue, profile
        )
        rel_index = int(rel_ref.split(":")[1])
        relationship = next(
            r for r in self.model.relationships if r.decl_index == rel_index
        )
        target = self.tree.elements[f"classifier:{relationship.target}"]
        target_cue = render_cue(
            target.concept_id, profile_variables(target, profile), self.catalogue, profile
        )
        return mix([(rel_cue, 0.0), (target_cue, rel_cue.duration_s + 0.1)])

    def cached_audio(self, cid: str) -> AudioBuffer | None:
        with self._cache_lock:
            return self._cue_cache.get(cid)

    # session operations ---------------------------------------------------------

    def create_session(self, profile: RenderProfile) -> NavSession:
        if not self.tree.root_refs:
            raise ElementNotFoundError("model has no elements to focus")
        first_package = next(
            (ref for ref in self.tree.root_refs if ref.startswith("package:")), None
        )
        focus = first_package or self.tree.root_refs[0]
        return NavSession(
            id=uuid.uuid4().hex,
            model=self.model,
            catalogue=self.catalogue,
            profile=profile,
            focus=focus,
        )

    def breadcrumb(self, ref: str) -> str:
        parts = []
        cursor: str | None = ref
        while cursor is not None:
            element = self.tree.elements[cursor]
            parts.append(element.caption)
            cursor = self.tree.parent.get(cursor)
        parts.append(f"Diagram {self.model.name}")
        return " > ".join(reversed(parts))

    def _where_caption(self, session: NavSession) -> str:
        crumb = self.breadcrumb(session.focus)
        if session.profile.audience == "novice":
            return crumb
        element = self.tree.elements[session.focus]
        details = [f"{len(self.tree.children.get(session.focus, ()))} members"]
        if session.focus.startswith("classifier:"):
            outgoing = self.tree.outgoing.get(session.focus, ())
            details.append(f"{len(outgoing)} outgoing relationships")
        details.append(f"visited {len(session.history)} elements")
        return f"{crumb} ({', '.join(details)})"

    def _focus_event(self, session: NavSession, moved: bool) -> NavEvent:
        cid, audio = self._cue_for(session.focus, session.profile)
        element = self.tree.elements[session.focus]
        return NavEvent(
            focus=session.focus,
            caption=element.caption,
            breadcrumb=self.breadcrumb(session.focus),
            cue_id=cid,
            audio=audio,
            moved=moved,
        )

    def _boundary_event(self, session: NavSession, reason: str) -> NavEvent:
        cid, audio = self._cue_for(BOUNDARY_REF, session.profile)
        element = self.tree.elements[session.focus]
        scope = self.tree.parent.get(session.focus)
        scope_name = (
            self.tree.elements[scope].caption if scope else f"Diagram {self.model.name}"
        )
        return NavEvent(
            focus=session.focus,
            caption=f"Edge of {scope_name}: {reason}; staying on {element.caption}",
            breadcrumb=self.breadcrumb(session.focus),
            cue_id=cid,
            audio=audio,
            moved=False,
            boundary=True,
        )

    def navigate(self, session: NavSession, move: str, index: int = 0) -> NavEvent:
        if move not in MOVES:
            raise UnknownMoveError(f"unknown move {move!r}")
        if session.profile.audience == "novice" and move not in NOVICE_MOVES:
            raise IllegalMoveError(f"{move} is an expert-only move")
        with session.lock:
            session.last_access = time.monotonic()
            event = self._navigate_locked(session, move, index)
            if event.moved:
                session.history.append(session.focus)
            return event

    def _navigate_locked(self, session: NavSession, move: str, index: int) -> NavEvent:
        focus = session.focus
        if move == "repeat_cue":
            return self._focus_event(session, moved=False)
        if move == "where_am_i":
            event = self._focus_event(session, moved=False)
            return NavEvent(
                focus=event.focus,
                caption=self._where_caption(session),
                breadcrumb=event.breadcrumb,
                cue_id=event.cue_id,
                audio=event.audio,
                moved=False,
            )
        if move in ("next_sibling", "prev_sibling"):
            siblings = self.tree.siblings(focus)
            i = siblings.index(focus)
            j = i + 1 if move == "next_sibling" else i - 1
            if j < 0 or j >= len(siblings):
                return self._boundary_event(session, f"no {move.replace('_', ' ')}")
            session.focus = siblings[j]
            return self._focus_event(session, moved=True)
        if move == "into":
            children = self.tree.children.get(focus, ())
            if not children:
                return self._boundary_event(session, "nothing inside")
            session.focus = children[0]
            return self._focus_event(session, moved=True)
        if move == "out":
            parent = self.tree.parent.get(focus)
            if parent is None:
                return self._boundary_event(session, "already at the top")
            session.focus = parent
            return self._focus_event(session, moved=True)
        if move == "follow_relationship":
            outgoing = self.tree.outgoing.get(focus, ())
            if not outgoing or not 0 <= index < len(outgoing):
                return self._boundary_event(session, "no such relationship to follow")
            rel_ref = outgoing[index]
            relationship = next(
                r
                for r in self.model.relationships
                if r.decl_index == int(rel_ref.split(":")[1])
            )
            session.focus = f"classifier:{relationship.target}"
            cid, audio = self._cue_for(f"follow:{rel_ref}", session.profile)
            rel_element = self.tree.elements[rel_ref]
            target_element = self.tree.elements[session.focus]
            return NavEvent(
                focus=session.focus,
                caption=f"{rel_element.caption}; now on {target_element.caption}",
                breadcrumb=self.breadcrumb(session.focus),
                cue_id=cid,
                audio=audio,
                moved=True,
            )
        raise UnknownMoveError(move)  # pragma: no cover
