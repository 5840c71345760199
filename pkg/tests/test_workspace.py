import pytest

from rclkit.errors import InputError
from rclkit.workspace import parse, serialize


def test_parse_fixture_counts(fixture_dir):
    text = (fixture_dir / "fix_a2.rcl").read_text()
    ws = parse(text)
    assert len(ws.categories) == 3
    assert len(ws.functors) == 6
    assert len(ws.adjunctions) == 4
    assert len(ws.recollements) == 1


def test_round_trip_idempotent(fixture_dir):
    for name in ("fix_a2.rcl", "fix_stab3.rcl", "fix_prod.rcl"):
        text = (fixture_dir / name).read_text()
        ws = parse(text)
        out = serialize(ws)
        assert out == serialize(parse(out)), name


def test_serialization_matches_builder(ws_a2, fixture_dir):
    assert serialize(ws_a2) == (fixture_dir / "fix_a2.rcl").read_text()


def test_digest_stable(fixture_dir):
    text = (fixture_dir / "fix_stab3.rcl").read_text()
    assert parse(text).digest() == parse(text).digest()


def test_empty_workspace_valid():
    ws = parse("rclkit workspace 1\n")
    assert ws.categories == {}
    assert serialize(ws).startswith("rclkit workspace 1")


def test_declaration_order_irrelevant():
    """A functor may be declared before the categories it references."""
    text = """rclkit workspace 1
functor f { source A target A object G -> G map (G G e) -> { (0 0) { e 1 } } }
category A { object G hom G G { basis e } identity G { e 1 } compose (G G e) (G G e) { e 1 } }
field { kind rationals }
"""
    ws = parse(text)
    assert ws.functors["f"].object_map["G"].summands == ("G",)


def test_unknown_category_reference():
    text = """rclkit workspace 1
field { kind rationals }
functor f { source Nowhere target Nowhere }
"""
    with pytest.raises(InputError) as exc:
        parse(text)
    assert any("unknown category" in str(d) for d in exc.value.diagnostics)
    assert any(d.line == 3 for d in exc.value.diagnostics)


def test_syntax_error_position():
    with pytest.raises(InputError) as exc:
        parse("rclkit workspace 1\nfield { kind rationals\n")
    d = exc.value.diagnostics[0]
    assert d.line >= 2


def test_duplicate_names_rejected():
    text = """rclkit workspace 1
field { kind rationals }
category A { object G hom G G { basis e } identity G { e 1 } compose (G G e) (G G e) { e 1 } }
category A { object G hom G G { basis e } identity G { e 1 } compose (G G e) (G G e) { e 1 } }
"""
    with pytest.raises(InputError) as exc:
        parse(text)
    assert any("duplicate" in str(d) for d in exc.value.diagnostics)


def test_unknown_basis_element():
    text = """rclkit workspace 1
field { kind rationals }
category A { object G hom G G { basis e } identity G { nope 1 } }
"""
    with pytest.raises(InputError) as exc:
        parse(text)
    assert any("unknown basis element" in str(d) for d in exc.value.diagnostics)


def test_prime_field_workspace():
    text = """rclkit workspace 1
field { kind prime 101 }
category A { object G hom G G { basis e } identity G { e 1 } compose (G G e) (G G e) { e 1 } }
"""
    ws = parse(text)
    assert ws.field.characteristic == 101
    assert serialize(ws) == serialize(parse(serialize(ws)))


def test_mutation_declaration_round_trip(fixture_dir):
    text = (fixture_dir / "fix_prod.rcl").read_text()
    ws = parse(text)
    m = ws.mutations["MU"]
    assert set(m.fixed) == {"C1.M1", "C1.M2", "C2.M1", "C2.M2"}
    assert m.d.members == ("C1.M2",)
