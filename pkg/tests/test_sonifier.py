from __future__ import annotations

import re
import sys
from dataclasses import replace

import numpy as np
import pytest

from sonuml.audio import AuditoryVariables, SynthSpec, gated_loudness_db
from sonuml.catalogue import Concept, ConceptBinding, EarconRecipe, SoundAsset, SoundCatalogue
from sonuml.sonifier import (
    MOTIF_CONCEPT,
    RenderProfile,
    UnboundConceptError,
    all_elements,
    captions_to_vtt,
    diagram_motif,
    element_cue,
    find_element,
    motif_notes,
    plan_walkthrough,
    profile_variables,
    render_timeline,
    spatialize,
)
from sonuml.uml import Position, parse_diagram


class TestSpatialize:
    def test_center_is_neutral(self):
        v = spatialize(Position(50.0, 50.0), 0)
        assert v.pan == 0.0
        assert v.loudness_db == 0.0
        assert v.reverb_depth == 0

    def test_left_edge(self):
        assert spatialize(Position(0.0, 50.0), 0).pan == -1.0

    def test_upper_right_with_depth(self):
        v = spatialize(Position(75.0, 25.0), 2)
        assert v.pan == pytest.approx(0.5)
        assert v.loudness_db == pytest.approx(0.5)
        assert v.reverb_depth == 2

    def test_out_of_bounds_rejected(self):
        with pytest.raises(ValueError):
            spatialize(Position(50.0, 50.0), 0, bounds=(40.0, 100.0))
        with pytest.raises(ValueError):
            spatialize(Position(50.0, 50.0), -1)

    def test_pan_strictly_increasing_in_x(self):
        pans = [spatialize(Position(x, 50.0), 0).pan for x in (0, 20, 40, 60, 80, 100)]
        assert all(b > a for a, b in zip(pans, pans[1:]))


class TestMotif:
    def test_deterministic(self):
        a, b = diagram_motif("library"), diagram_motif("library")
        assert np.array_equal(a.samples, b.samples)

    def test_fixture_names_differ(self):
        assert motif_notes("A") != motif_notes("B")
        assert not np.array_equal(diagram_motif("A").samples, diagram_motif("B").samples)

    @pytest.mark.parametrize("name", ["A", "library", "a really long diagram name", "x" * 100])
    def test_duration_bounded(self, name):
        assert diagram_motif(name).duration_s <= 1.5

    def test_empty_name_rejected(self):
        with pytest.raises(ValueError):
            diagram_motif("")


class TestPlanWalkthrough:
    def test_empty_model_is_motif_only(self, proposed):
        timeline = plan_walkthrough(parse_diagram(""), proposed, RenderProfile())
        assert len(timeline.events) == 1
        assert timeline.events[0].concept_id == MOTIF_CONCEPT

    def test_fixture_event_count(self, library_model, proposed):
        timeline = plan_walkthrough(library_model, proposed, RenderProfile())
        assert len(timeline.events) == 27 + 1  # every element plus the motif

    def test_every_element_has_exactly_one_event(self, library_model, proposed):
        timeline = plan_walkthrough(library_model, proposed, RenderProfile())
        refs = [e.element_ref for e in timeline.events if e.concept_id != MOTIF_CONCEPT]
        assert sorted(refs) == sorted(el.ref for el in all_elements(library_model))

    def test_dependency_event_present(self, proposed):
        model = parse_diagram("class A; class B; A ..> B")
        timeline = plan_walkthrough(model, proposed, RenderProfile(motif_enabled=False))
        dependency_events = [e for e in timeline.events if e.concept_id == "Dependency"]
        assert len(dependency_events) == 1

    def test_unbound_concept_named(self, proposed, library_model):
        without_package = replace(
            proposed,
            bindings=tuple(b for b in proposed.bindings if b.concept_id != "Package"),
        )
        with pytest.raises(UnboundConceptError, match="Package"):
            plan_walkthrough(library_model, without_package, RenderProfile())

    def test_starts_non_decreasing_and_gapped(self, library_model, proposed):
        profile = RenderProfile()
        timeline = plan_walkthrough(library_model, proposed, profile)
        for a, b in zip(timeline.events, timeline.events[1:]):
            assert b.start_s == pytest.approx(a.start_s + a.duration_s + profile.inter_cue_gap_s)

    def test_novice_and_expert_share_event_set(self, library_model, proposed):
        expert = plan_walkthrough(library_model, proposed, RenderProfile(audience="expert"))
        novice = plan_walkthrough(library_model, proposed, RenderProfile(audience="novice"))
        assert [e.element_ref for e in expert.events] == [e.element_ref for e in novice.events]
        novice_vars = [e.variables for e in novice.events]
        assert all(v.reverb_depth == 0 and v.loudness_db == 0.0 for v in novice_vars)

    def test_determinism(self, library_model, proposed):
        a = plan_walkthrough(library_model, proposed, RenderProfile())
        b = plan_walkthrough(library_model, proposed, RenderProfile())
        assert a == b


def one_second_catalogue():
    """Catalogue whose Class cue lasts exactly one second."""
    return SoundCatalogue(
        name="onesec",
        version="1",
        concepts=(Concept("Class"),),
        assets=(SoundAsset("beep", SynthSpec("sine", 660.0), 1.0),),
        bindings=(
            ConceptBinding(
                "Class",
                EarconRecipe(components=(("beep", AuditoryVariables()),), caption="Class: beep"),
                sign_mode="symbol",
            ),
        ),
    )


class TestRenderTimeline:
    def test_two_one_second_events_total(self):
        model = parse_diagram("class A @ (50, 50); class B @ (50, 50)")
        profile = RenderProfile(motif_enabled=False)
        timeline = plan_walkthrough(model, one_second_catalogue(), profile)
        assert len(timeline.events) == 2
        buf, track = render_timeline(timeline, one_second_catalogue(), profile)
        assert buf.duration_s == pytest.approx(2.35, abs=0.02)

    def test_caption_count_equals_event_count(self, library_model, proposed):
        profile = RenderProfile()
        timeline = plan_walkthrough(library_model, proposed, profile)
        _, track = render_timeline(timeline, proposed, profile, library_model.name)
        assert len(track.cues) == len(timeline.events)

    def test_caption_aligned_to_event_starts(self, library_model, proposed):
        profile = RenderProfile()
        timeline = plan_walkthrough(library_model, proposed, profile)
        _, track = render_timeline(timeline, proposed, profile, library_model.name)
        for event, cue in zip(timeline.events, track.cues):
            assert abs(cue.start_s - event.start_s) < 1 / 44100

    def test_captions_do_not_overlap(self, library_model, proposed):
        profile = RenderProfile()
        timeline = plan_walkthrough(library_model, proposed, profile)
        _, track = render_timeline(timeline, proposed, profile, library_model.name)
        for a, b in zip(track.cues, track.cues[1:]):
            assert b.start_s >= a.end_s - 1e-9

    def test_peak_under_budget(self, library_model, proposed):
        profile = RenderProfile()
        timeline = plan_walkthrough(library_model, proposed, profile)
        buf, _ = render_timeline(timeline, proposed, profile, library_model.name)
        assert buf.peak() <= 10 ** (-1.0 / 20.0) + 1e-9

    def test_tts_hook_mixes_speech(self, tmp_path):
        import pathlib

        import sonuml

        src_dir = str(pathlib.Path(next(iter(sonuml.__path__))).parent)
        script = tmp_path / "tts.py"
        script.write_text(
            f"import sys\n"
            f"sys.path.insert(0, {src_dir!r})\n"
            "from sonuml.audio import SynthSpec, synth, wav_bytes\n"
            "buf = synth(SynthSpec('sine', 200.0), 0.2)\n"
            "sys.stdout.buffer.write(wav_bytes(buf))\n"
        )
        model = parse_diagram("class A @ (50, 50)")
        cat = one_second_catalogue()
        base_profile = RenderProfile(motif_enabled=False)
        timeline = plan_walkthrough(model, cat, base_profile)
        dry, _ = render_timeline(timeline, cat, base_profile)
        hook = f"{sys.executable} {script} {{text}}"
        wet, _ = render_timeline(
            timeline, cat, RenderProfile(motif_enabled=False, tts_hook=hook)
        )
        assert not np.array_equal(dry.samples, wet.samples)

    def test_tts_hook_failure_degrades_to_text(self):
        model = parse_diagram("class A @ (50, 50)")
        cat = one_second_catalogue()
        profile = RenderProfile(motif_enabled=False, tts_hook="/no/such/binary {text}")
        timeline = plan_walkthrough(model, cat, profile)
        with pytest.warns(UserWarning, match="tts hook failed"):
            buf, track = render_timeline(timeline, cat, profile)
        assert len(track.cues) == 1


class TestElementCue:
    def test_left_edge_class_is_left_panned(self, proposed):
        model = parse_diagram("class A @ (0, 50)")
        buf, caption = element_cue(model, "classifier:A", proposed)
        assert caption == "Class A"
        # Fully left: the right channel is (numerically) silent.
        assert np.max(np.abs(buf.samples[1])) < 1e-9
        assert np.max(np.abs(buf.samples[0])) > 0.01

    def test_novice_cue_has_no_reverb(self, library_model, proposed):
        el = find_element(library_model, "classifier:Book")
        novice = profile_variables(el, RenderProfile(audience="novice"))
        expert = profile_variables(el, RenderProfile(audience="expert"))
        assert novice.reverb_depth == 0
        assert expert.reverb_depth == 2  # Book sits two packages deep

    def test_cue_matches_walkthrough_segment(self, library_model, proposed):
        profile = RenderProfile()
        timeline = plan_walkthrough(library_model, proposed, profile)
        buf, _ = render_timeline(timeline, proposed, profile, library_model.name)
        event = next(e for e in timeline.events if e.element_ref == "classifier:Book")
        cue, _ = element_cue(library_model, "classifier:Book", proposed, profile)
        start = round(event.start_s * 44100)
        segment = buf.samples[:, start : start + cue.frames]
        assert np.max(np.abs(segment - cue.samples)) < 1e-6

    def test_unknown_element(self, library_model, proposed):
        from sonuml.sonifier import ElementNotFoundError

        with pytest.raises(ElementNotFoundError):
            element_cue(library_model, "classifier:Ghost", proposed)


class TestLoudnessWindow:
    def test_cue_loudness_within_window(self, library_model, proposed):
        profile = RenderProfile()
        timeline = plan_walkthrough(library_model, proposed, profile)
        buf, track = render_timeline(timeline, proposed, profile, library_model.name)
        loudness = []
        for cue in track.cues:
            a, b = round(cue.start_s * 44100), round(cue.end_s * 44100)
            from sonuml.audio import AudioBuffer

            loudness.append(gated_loudness_db(AudioBuffer(buf.samples[:, a:b], 44100)))
        spread = max(loudness) - min(loudness)
        assert spread <= 2 * profile.loudness_window_db


class TestVtt:
    def test_vtt_shape(self, library_model, proposed):
        profile = RenderProfile()
        timeline = plan_walkthrough(library_model, proposed, profile)
        _, track = render_timeline(timeline, proposed, profile, library_model.name)
        vtt = captions_to_vtt(track)
        assert vtt.startswith("WEBVTT")
        stamps = re.findall(
            r"^\d{2}:\d{2}:\d{2}\.\d{3} --> \d{2}:\d{2}:\d{2}\.\d{3}$", vtt, re.M
        )
        assert len(stamps) == len(track.cues)
