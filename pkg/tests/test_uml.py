from __future__ import annotations

import pytest

from sonuml.uml import (
    DiagramParseError,
    Position,
    assign_layout,
    model_stats,
    parse_diagram,
    serialize_diagram,
)


class TestParse:
    def test_class_with_members(self):
        model = parse_diagram("class A { attr x; op f() }")
        assert len(model.classifiers) == 1
        c = model.classifiers[0]
        assert [a.name for a in c.attributes] == ["x"]
        assert [o.name for o in c.operations] == ["f"]

    def test_inheritance_arrow_convention(self):
        model = parse_diagram("class A; class B; A <|-- B")
        r = model.relationships[0]
        assert r.kind == "inheritance"
        assert r.source == "B"
        assert r.target == "A"

    def test_dangling_endpoint_named(self):
        with pytest.raises(DiagramParseError, match="Missing"):
            parse_diagram("class A\nA --> Missing")

    def test_diagram_name(self):
        assert parse_diagram("diagram shop\nclass A").name == "shop"
        assert parse_diagram("class A").name == "untitled"

    def test_packages_nest(self):
        model = parse_diagram("package a { package b { class C } }")
        assert [p.path for p in model.packages] == [("a",), ("a", "b")]
        assert model.classifiers[0].package_path == ("a", "b")

    def test_position_parsed(self):
        model = parse_diagram("class A @ (25, 75.5)")
        assert model.classifiers[0].position == Position(25.0, 75.5)

    def test_position_out_of_bounds(self):
        with pytest.raises(DiagramParseError, match="bounds"):
            parse_diagram("class A @ (120, 10)")

    def test_duplicate_classifier_in_package(self):
        with pytest.raises(DiagramParseError, match="duplicate"):
            parse_diagram("class A; class A")

    def test_same_name_in_distinct_packages_allowed(self):
        model = parse_diagram("package p { class A }\npackage q { class A }")
        assert len(model.classifiers) == 2

    def test_ambiguous_endpoint_rejected(self):
        with pytest.raises(DiagramParseError, match="ambiguous"):
            parse_diagram("package p { class A }\npackage q { class A }\nclass B\nB --> A")

    def test_realization_requires_interface(self):
        with pytest.raises(DiagramParseError, match="interface"):
            parse_diagram("class A; class B; A <|.. B")
        model = parse_diagram("interface I; class B; I <|.. B")
        r = model.relationships[0]
        assert r.kind == "realization" and r.source == "B" and r.target == "I"

    def test_association_class(self):
        model = parse_diagram("class A; class B; class L; (A, B) .. L")
        r = model.relationships[0]
        assert r.kind == "association_class"
        assert (r.source, r.target, r.assoc_class) == ("A", "B", "L")

    def test_association_class_requires_assoc(self):
        with pytest.raises(DiagramParseError):
            parse_diagram("class A; class B; (A, B) .. Nope")

    def test_label(self):
        model = parse_diagram("class A; class B; A --> B : writes books")
        assert model.relationships[0].label == "writes books"

    def test_error_carries_location(self):
        with pytest.raises(DiagramParseError) as err:
            parse_diagram("class A\nclass {")
        assert err.value.line == 2

    def test_comments_ignored(self):
        model = parse_diagram("// header\nclass A // trailing\n")
        assert len(model.classifiers) == 1

    def test_every_concept_expressible(self):
        text = """
        diagram coverage
        package pkg { class InPkg { attr field; op act() } }
        interface Surface
        class Alpha; class Beta; class Glue
        Alpha --> Beta
        Alpha <|-- Beta
        Surface <|.. Alpha
        Alpha ..> Beta
        Alpha o-- Beta
        Alpha *-- Beta
        (Alpha, Beta) .. Glue
        """
        model = parse_diagram(text)
        stats = model_stats(model)
        for kind in (
            "association",
            "inheritance",
            "realization",
            "dependency",
            "aggregation",
            "composition",
            "association_class",
        ):
            assert stats[kind] == 1
        assert stats["packages"] == 1
        assert stats["attributes"] == 1
        assert stats["operations"] == 1


class TestSerialize:
    def test_round_trip_preserves_model(self, library_model):
        text = serialize_diagram(library_model)
        again = parse_diagram(text)
        assert again == library_model

    def test_round_trip_stats(self):
        model = parse_diagram("diagram d\npackage p { class A { attr x } }\nclass B\nA --> B")
        again = parse_diagram(serialize_diagram(model))
        assert model_stats(again) == model_stats(model)


class TestLayout:
    def test_single_classifier_centered(self):
        model = assign_layout(parse_diagram("class A"))
        assert model.classifiers[0].position == Position(50.0, 50.0)

    def test_four_classifiers_grid(self):
        model = assign_layout(parse_diagram("class A; class B; class C; class D"))
        positions = [(c.position.x, c.position.y) for c in model.classifiers]
        assert positions == [(25.0, 25.0), (75.0, 25.0), (25.0, 75.0), (75.0, 75.0)]

    def test_fully_positioned_unchanged(self, library_model):
        assert assign_layout(library_model) is library_model

    def test_idempotent(self):
        model = assign_layout(parse_diagram("class A; class B; class C"))
        assert assign_layout(model) == model

    def test_positions_in_bounds(self):
        names = "; ".join(f"class C{i}" for i in range(17))
        model = assign_layout(parse_diagram(names))
        for c in model.classifiers:
            assert 0.0 <= c.position.x <= 100.0
            assert 0.0 <= c.position.y <= 100.0

    def test_mixed_leaves_explicit_alone(self):
        model = assign_layout(parse_diagram("class A @ (10, 10); class B"))
        assert model.classifier("A").position == Position(10.0, 10.0)
        assert model.classifier("B").position == Position(50.0, 50.0)


class TestModelStats:
    def test_empty_model(self):
        stats = model_stats(parse_diagram(""))
        assert all(v == 0 for v in stats.values())

    def test_library_fixture(self, library_model):
        stats = model_stats(library_model)
        assert stats["packages"] == 3
        assert stats["max_package_depth"] == 2
        assert stats["classes"] == 6
        assert stats["interfaces"] == 1
        for kind in (
            "association",
            "inheritance",
            "realization",
            "dependency",
            "aggregation",
            "composition",
            "association_class",
        ):
            assert stats[kind] == 1
