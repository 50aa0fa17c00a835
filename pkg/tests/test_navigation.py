from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest

from sonuml.navigation import (
    IllegalMoveError,
    Navigator,
    UnknownMoveError,
    boundary_click,
)
from sonuml.sonifier import RenderProfile, UnboundConceptError
from sonuml.uml import parse_diagram


@pytest.fixture(scope="module")
def navigator(library_model, proposed):
    return Navigator(library_model, proposed)


def fresh(navigator, audience="expert"):
    return navigator.create_session(RenderProfile(audience=audience))


class TestSessions:
    def test_initial_focus_is_first_package(self, navigator):
        assert fresh(navigator).focus == "package:core"

    def test_sessions_are_independent(self, navigator):
        a, b = fresh(navigator), fresh(navigator)
        assert a.id != b.id
        navigator.navigate(a, "into")
        assert a.focus != b.focus

    def test_unbound_catalogue_rejected_at_construction(self, library_model, proposed):
        without_package = replace(
            proposed,
            bindings=tuple(b for b in proposed.bindings if b.concept_id != "Package"),
        )
        with pytest.raises(UnboundConceptError):
            Navigator(library_model, without_package)

    def test_model_without_packages_focuses_first_classifier(self, proposed):
        nav = Navigator(parse_diagram("class A; class B"), proposed)
        assert fresh(nav).focus == "classifier:A"


class TestMoves:
    def test_into_descends_to_first_member(self, navigator):
        s = fresh(navigator)
        navigator.navigate(s, "into")  # package:core -> Searchable
        navigator.navigate(s, "next_sibling")  # Library
        event = navigator.navigate(s, "into")
        assert event.focus == "attr:Library.name"

    def test_next_at_last_sibling_is_boundary(self, navigator):
        s = fresh(navigator)
        navigator.navigate(s, "next_sibling")  # people
        navigator.navigate(s, "next_sibling")  # Loan
        event = navigator.navigate(s, "next_sibling")
        assert event.boundary and not event.moved
        assert event.focus == "classifier:Loan"
        assert "Edge of" in event.caption

    def test_out_at_root_is_boundary(self, navigator):
        s = fresh(navigator)
        event = navigator.navigate(s, "out")
        assert event.boundary and event.focus == "package:core"

    def test_into_leaf_is_boundary(self, navigator):
        s = fresh(navigator)
        navigator.navigate(s, "into")  # Searchable (no members)
        event = navigator.navigate(s, "into")
        assert event.boundary

    def test_into_then_out_restores_focus_everywhere(self, navigator):
        refs = list(navigator.tree.elements)
        for ref in refs:
            if ref.startswith("rel:"):
                continue
            s = fresh(navigator)
            s.focus = ref
            before = s.focus
            moved_in = navigator.navigate(s, "into")
            if moved_in.moved:
                back = navigator.navigate(s, "out")
                assert back.focus == before

    def test_follow_relationship_lands_on_target(self, navigator):
        # Librarian's outgoing edges in declaration order: inheritance to
        # Member, then the dependency on Book.
        s = fresh(navigator)
        s.focus = "classifier:Librarian"
        event = navigator.navigate(s, "follow_relationship", index=0)
        assert event.focus == "classifier:Member"
        s.focus = "classifier:Librarian"
        event = navigator.navigate(s, "follow_relationship", index=1)
        assert event.focus == "classifier:Book"
        assert "Dependency" in event.caption and "Book" in event.caption

    def test_follow_cue_is_relationship_then_target(self, navigator, proposed):
        s = fresh(navigator)
        s.focus = "classifier:Librarian"
        follow = navigator.navigate(s, "follow_relationship", index=1)
        s2 = fresh(navigator)
        s2.focus = "classifier:Book"
        target_only = navigator.navigate(s2, "repeat_cue")
        assert follow.audio.duration_s > target_only.audio.duration_s

    def test_follow_out_of_range_is_boundary(self, navigator):
        s = fresh(navigator)
        s.focus = "classifier:Librarian"
        event = navigator.navigate(s, "follow_relationship", index=5)
        assert event.boundary

    def test_repeat_cue_does_not_move(self, navigator):
        s = fresh(navigator)
        event = navigator.navigate(s, "repeat_cue")
        assert not event.moved and event.focus == s.focus

    def test_where_am_i_breadcrumb(self, navigator):
        s = fresh(navigator)
        navigator.navigate(s, "into")
        event = navigator.navigate(s, "where_am_i")
        assert event.breadcrumb == "Diagram library > Package core > Interface Searchable"
        assert not event.moved

    def test_expert_where_am_i_carries_detail(self, navigator):
        expert = fresh(navigator, "expert")
        novice = fresh(navigator, "novice")
        e = navigator.navigate(expert, "where_am_i")
        n = navigator.navigate(novice, "where_am_i")
        assert "members" in e.caption
        assert "members" not in n.caption

    def test_novice_cannot_follow_relationships(self, navigator):
        s = fresh(navigator, "novice")
        with pytest.raises(IllegalMoveError):
            navigator.navigate(s, "follow_relationship", index=0)

    def test_unknown_move_rejected(self, navigator):
        with pytest.raises(UnknownMoveError):
            navigator.navigate(fresh(navigator), "teleport")

    def test_every_event_carries_audio(self, navigator):
        s = fresh(navigator)
        for move in ("repeat_cue", "out", "into", "next_sibling", "where_am_i"):
            event = navigator.navigate(s, move)
            assert event.audio.frames > 0
            assert event.cue_id

    def test_history_appends_moves_only(self, navigator):
        s = fresh(navigator)
        navigator.navigate(s, "repeat_cue")
        assert s.history == []
        navigator.navigate(s, "into")
        navigator.navigate(s, "out")
        assert s.history == ["classifier:Searchable", "package:core"]


class TestDeterminism:
    MOVES = [
        "into", "next_sibling", "into", "out", "next_sibling", "next_sibling",
        "into", "into", "next_sibling", "out", "out", "next_sibling",
        "into", "next_sibling", "prev_sibling", "out", "next_sibling",
        "repeat_cue", "where_am_i", "prev_sibling",
    ]

    def run_path(self, navigator):
        s = fresh(navigator)
        path = []
        for move in self.MOVES:
            event = navigator.navigate(s, move)
            path.append((event.focus, event.cue_id, event.boundary))
        return path

    def test_scripted_moves_reproducible(self, library_model, proposed):
        nav_a = Navigator(library_model, proposed)
        nav_b = Navigator(library_model, proposed)
        assert self.run_path(nav_a) == self.run_path(nav_b)

    def test_same_navigator_replays_identically(self, navigator):
        assert self.run_path(navigator) == self.run_path(navigator)


class TestBoundaryCue:
    def test_reserved_click_outside_concept_namespace(self, navigator):
        s = fresh(navigator)
        event = navigator.navigate(s, "out")  # boundary at root
        assert event.boundary
        # Cue cache key ties to the reserved ref, not any concept.
        assert event.cue_id != navigator.navigate(s, "repeat_cue").cue_id

    def test_click_is_short_and_low(self):
        click = boundary_click()
        assert click.duration_s <= 0.1
        assert click.peak() > 0.0
