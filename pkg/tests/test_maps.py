import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ym2.groups import SU2, U1, SU2Element, U1Element
from ym2.maps import (
    CombinatorialMap,
    MapError,
    build_map,
    fundamental_map,
    gauge_transform,
    holonomy,
    inverse_symbol,
    parse_map_text,
    reduce_word,
    remove_edge,
    word,
)

SQUARE = [word("a", "b", "a^-1", "b^-1")]
SPLIT_TORUS = [word("a", "b", "e^-1"), word("e", "a^-1", "b^-1")]
# genus-1 two-face map: a disc face d and its complement in the torus
TWO_FACE = [word("d"), word("d^-1", "c^-1", "a", "b", "a^-1", "b^-1", "c")]


def three_face_torus():
    """Genus-1 map with 4 vertices, 7 edges, 3 faces, built from TWO_FACE by
    splitting edges a and b and cutting the big face with a chord f."""
    big = word(
        "d^-1", "c^-1", "a1", "a2", "b1", "b2", "a2^-1", "a1^-1", "b2^-1", "b1^-1", "c"
    )
    f1 = big[:5] + word("f^-1")
    f2 = word("f") + big[5:]
    return build_map([word("d"), f1, f2])


class TestBuild:
    def test_square_torus(self):
        m = build_map(SQUARE)
        assert (m.vertex_count, m.edge_count, m.face_count, m.genus) == (1, 2, 1, 1)

    def test_fundamental_maps(self):
        for g in (1, 2, 3):
            m = fundamental_map(g)
            assert (m.vertex_count, m.edge_count, m.face_count) == (1, 2 * g, 1)
            assert m.genus == g
            assert m.euler_characteristic == 2 - 2 * g

    def test_two_face_torus(self):
        m = build_map(TWO_FACE)
        assert (m.vertex_count, m.edge_count, m.face_count, m.genus) == (2, 4, 2, 1)

    def test_four_vertex_torus(self):
        m = three_face_torus()
        assert (m.vertex_count, m.edge_count, m.face_count) == (4, 7, 3)
        assert m.genus == 1

    def test_sphere_from_two_disks(self):
        m = build_map([word("a"), word("a^-1")])
        assert m.genus == 0
        assert (m.vertex_count, m.edge_count, m.face_count) == (1, 1, 2)

    def test_split_torus(self):
        m = build_map(SPLIT_TORUS)
        assert (m.vertex_count, m.edge_count, m.face_count, m.genus) == (1, 3, 2, 1)

    def test_rejects_reused_symbol(self):
        with pytest.raises(MapError, match="used twice"):
            build_map([word("a", "a", "a^-1", "a^-1")])

    def test_rejects_missing_orientation(self):
        with pytest.raises(MapError, match="missing"):
            build_map([word("a", "a^-1", "b")])

    def test_rejects_disconnected(self):
        with pytest.raises(MapError, match="not connected"):
            build_map([word("a", "a^-1"), word("b", "b^-1")])


class TestRemoveEdge:
    def test_diagonal_split_square(self):
        m = build_map(SPLIT_TORUS)
        merged = remove_edge(m, "e")
        assert merged.face_count == 1
        assert merged.edge_count == 2
        assert merged.genus == 1

    def test_genus_preserved_on_all_removable_edges(self):
        maps = [build_map(TWO_FACE), build_map(SPLIT_TORUS), three_face_torus()]
        for m in maps:
            for label in m.edge_labels:
                f1 = m.face_of((label, 1))
                f2 = m.face_of((label, -1))
                if f1 == f2:
                    with pytest.raises(MapError):
                        remove_edge(m, label)
                else:
                    out = remove_edge(m, label)
                    assert out.genus == m.genus
                    assert out.vertex_count == m.vertex_count
                    assert out.edge_count == m.edge_count - 1
                    assert out.face_count == m.face_count - 1

    def test_one_face_maps_have_no_removable_edges(self):
        for g in (1, 2, 3):
            m = fundamental_map(g)
            for label in m.edge_labels:
                with pytest.raises(MapError):
                    remove_edge(m, label)

    def test_boundary_word_merge_rule(self):
        m = build_map(SPLIT_TORUS)
        merged = remove_edge(m, "e")
        # f1 = e . alpha with alpha = (a^-1 b^-1), f2 = beta . e^-1 with
        # beta = (a b); the merged face is beta . alpha
        assert merged.faces[0] == word("a", "b", "a^-1", "b^-1")

    def test_cannot_remove_last_edge(self):
        m = build_map([word("a"), word("a^-1")])
        with pytest.raises(MapError, match="only edge"):
            remove_edge(m, "a")


symbols = st.tuples(st.sampled_from(["a", "b", "c"]), st.sampled_from([1, -1]))
words = st.lists(symbols, max_size=14).map(tuple)


class TestReduceWord:
    def test_examples(self):
        assert reduce_word(word("e", "e^-1")) == ()
        assert reduce_word(word("a", "b", "b^-1", "a^-1", "c", "c^-1")) == ()
        already = word("a", "b", "c")
        assert reduce_word(already) == already

    def test_cyclic_vs_based(self):
        w = word("a", "b", "a^-1")
        assert reduce_word(w, cyclic=False) == w
        assert reduce_word(w, cyclic=True) == word("b")

    @given(words)
    def test_idempotent_and_shorter(self, w):
        r = reduce_word(w)
        assert len(r) <= len(w)
        assert reduce_word(r) == r

    @given(words)
    def test_no_adjacent_inverses_remain(self, w):
        r = reduce_word(w)
        if len(r) < 2:
            return
        for i in range(len(r)):
            assert r[i] != inverse_symbol(r[(i + 1) % len(r)])


class TestHolonomy:
    def test_empty_needs_identity(self):
        assert holonomy((), {}, identity=U1Element(0.0)) == U1Element(0.0)
        with pytest.raises(ValueError):
            holonomy((), {})

    def test_u1_telescoping(self):
        assign = {"a": U1Element(0.4), "b": U1Element(-1.1)}
        h = holonomy(word("a", "b", "a^-1", "b^-1"), assign)
        assert abs(h.angle) < 1e-12

    def test_missing_assignment(self):
        with pytest.raises(KeyError):
            holonomy(word("a"), {})

    @settings(max_examples=20, deadline=None)
    @given(words, st.integers(0, 2**32 - 1))
    def test_reduction_invariance_su2(self, w, seed):
        gen = np.random.Generator(np.random.Philox(key=seed))
        assign = {lab: SU2.haar(gen) for lab in ("a", "b", "c")}
        ident = SU2Element.identity()
        h1 = holonomy(w, assign, identity=ident)
        # basepointed reduction preserves the holonomy exactly; cyclic
        # reduction preserves it up to conjugation, so compare class angles
        h2 = holonomy(reduce_word(w, cyclic=False), assign, identity=ident)
        assert np.allclose(
            [h1.w, h1.x, h1.y, h1.z], [h2.w, h2.x, h2.y, h2.z], atol=1e-9
        )
        h3 = holonomy(reduce_word(w, cyclic=True), assign, identity=ident)
        # compare traces: arccos amplifies rounding near the identity
        assert abs(h1.w - h3.w) < 1e-9

    def test_gauge_conjugation(self):
        m = build_map(TWO_FACE)
        gen = np.random.Generator(np.random.Philox(key=7))
        assign = {lab: SU2.haar(gen) for lab in m.edge_labels}
        gauge = {v: SU2.haar(gen) for v in range(m.vertex_count)}
        new_assign = gauge_transform(m, assign, gauge)
        for face in m.faces:
            base = m.vertex_at_tail(face[0])
            h = holonomy(face, assign)
            h_new = holonomy(face, new_assign)
            j = gauge[base]
            conj = j.inverse() * h * j
            assert np.allclose(
                [h_new.w, h_new.x, h_new.y, h_new.z],
                [conj.w, conj.x, conj.y, conj.z],
                atol=1e-9,
            )

    def test_closed_loop_detection(self):
        m = build_map(TWO_FACE)
        assert m.is_closed_loop(word("d"))
        assert m.is_closed_loop(word("a", "b", "a^-1", "b^-1"))
        assert not m.is_closed_loop(word("c"))  # open path between the vertices


class TestParser:
    def test_round_trip(self):
        text = "a b a^-1 b^-1\n"
        m = parse_map_text(text)
        assert m.genus == 1

    def test_comments_and_blanks(self):
        m = parse_map_text("# torus\n\na b a^-1 b^-1\n")
        assert m.genus == 1

    def test_line_precise_duplicate(self):
        with pytest.raises(MapError, match="line 3"):
            parse_map_text("a b\n\nb a^-1\n")

    def test_line_precise_bad_token(self):
        with pytest.raises(MapError, match="line 2"):
            parse_map_text("a a^-1\nb^2\n")

    def test_missing_inverse_rejected(self):
        with pytest.raises(MapError, match="missing"):
            parse_map_text("a b a^-1 b^-1 c\n")

    def test_empty_rejected(self):
        with pytest.raises(MapError, match="no faces"):
            parse_map_text("# nothing\n")
