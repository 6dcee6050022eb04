import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszulkit.bar_homology import betti_table, compose_is_zero
from koszulkit.errors import (
    MapError,
    TruncationError,
    WeightSequenceError,
)
from koszulkit.exact_linalg import FieldSpec, rank
from koszulkit.graded_algebra import (
    Presentation,
    augmentation_map,
    from_presentation,
    quotient_by_degree_one,
)
from koszulkit.model_complex import (
    build_model,
    check_weights,
    delta_cokernel,
    lemma31_bounds_check,
    middle_homology,
    model_window_check,
    _weight_sequences,
)

GF101 = FieldSpec.gf(101)

X3 = (((1, (3,)),),)  # the relation x^3


def _ring(gens, rels=(), j_max=6, field=GF101):
    return from_presentation(Presentation(gens=gens, relations=rels), field, j_max)


def _aug(r):
    return augmentation_map(r)[1]


def _line_quotient(j_max=8, field=GF101):
    # k[x,y] ->> k[x], the workhorse map with S != k
    r = _ring(("x", "y"), j_max=j_max, field=field)
    s, phi = quotient_by_degree_one(r, [[0, 1]])
    return r, phi


# --- weight sequence validation -------------------------------------------


def test_check_weights_accepts_and_normalizes():
    assert check_weights([0, 1, 2]) == (0, 1, 2)
    assert check_weights((3,)) == (3,)


@pytest.mark.parametrize(
    "bad",
    [(), (-1, 1), (0, 0), (0, 1, 0), (1, -2), (0, True), ("1", 1)],
)
def test_check_weights_rejects(bad):
    with pytest.raises(WeightSequenceError):
        check_weights(bad)


def test_weight_sequence_enumeration_is_lex():
    assert _weight_sequences(2, 3) == [
        (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (2, 1),
    ]
    assert _weight_sequences(3, 3) == [(0, 1, 1), (0, 1, 2), (0, 2, 1), (1, 1, 1)]
    assert _weight_sequences(4, 3) == [(0, 1, 1, 1)]
    assert _weight_sequences(5, 3) == []


# --- build_model: spaces --------------------------------------------------


def test_polynomial_011_spaces():
    r = _ring(("x", "y"))
    kc = build_model(r, _aug(r), (0, 1, 1))
    assert kc.n == 1
    assert kc.top_dim == 4  # R_1 (x) R_1
    # single contractions: S_1 (x) R_1 vanishes over S = k, S_0 (x) R_2 stays
    assert [(i, w, d) for i, w, d, _ in kc.middle] == [
        (0, (1, 1), 0),
        (1, (0, 2), 3),
    ]
    # the only pair is overlapping and merges all three factors into S_2 = 0
    assert [(lab, w, d) for lab, w, d, _ in kc.bottom] == [((0, 1), (2,), 0)]
    assert middle_homology(kc) == 0


def test_base_case_is_multiplication():
    r, phi = _line_quotient()
    kc = build_model(r, phi, (0, 1))
    assert kc.n == 0
    assert kc.top_dim == 2  # S_0 (x) R_1
    assert kc.middle_dim == 1  # S_1
    assert kc.bottom_dim == 0
    # d_1 is the structure map in degree 1: x -> x, y -> 0
    assert kc.d_top.entries == ((0, 0, 1),)
    assert middle_homology(kc) == 0


def test_positive_leading_weight_kills_top_over_k():
    r = _ring(("x", "y"))
    kc = build_model(r, _aug(r), (2, 1, 1))
    assert kc.top_dim == 0  # S_2 = 0 over S = k
    assert middle_homology(kc) == 0


def test_cubic_hypersurface_0111():
    r = _ring(("x",), X3)
    kc = build_model(r, _aug(r), (0, 1, 1, 1))
    assert kc.top_dim == 1
    assert kc.middle_dim == 2
    assert kc.bottom_dim == 0
    assert rank(kc.d_top) == 1
    assert middle_homology(kc) == 1


def test_weight_bookkeeping_and_dd_zero():
    r, phi = _line_quotient()
    for alpha in [(1, 1, 1), (1, 1, 1, 1), (0, 1, 1, 1, 1), (2, 1, 2, 1)]:
        kc = build_model(r, phi, alpha)
        for i, w, _, _ in kc.middle:
            assert len(w) == len(alpha) - 1
            assert sum(w) == sum(alpha)
        for _, w, _, _ in kc.bottom:
            assert len(w) == len(alpha) - 2
            assert sum(w) == sum(alpha)
        assert compose_is_zero(kc.d_middle, kc.d_top)
        assert kc.bottom_dim > 0  # the composition check is not vacuous here
        assert middle_homology(kc) == 0


def test_build_model_guards():
    r, phi = _line_quotient(j_max=4)
    other = _ring(("z",))
    with pytest.raises(WeightSequenceError):
        build_model(r, phi, (2,))
    with pytest.raises(TruncationError):
        build_model(r, phi, (0, 3, 2))
    with pytest.raises(MapError):
        build_model(other, phi, (0, 1, 1))


# --- delta cokernel -------------------------------------------------------


def test_delta_polynomial_011_is_zero():
    r = _ring(("x", "y"))
    # domain condition is vacuous (the i = 0 target vanishes); delta is the
    # surjective multiplication R_1 (x) R_1 -> R_2
    assert delta_cokernel(r, _aug(r), (0, 1, 1)) == 0


def test_delta_zero_top_and_zero_target():
    r = _ring(("x",), X3)
    # A = S_1 (x) R_1 (x) R_1 = 0 and B = S_1 (x) R_2 = 0 over S = k
    assert delta_cokernel(r, _aug(r), (1, 1, 1)) == 0


def test_delta_cubic_0111_is_one():
    r = _ring(("x",), X3)
    assert delta_cokernel(r, _aug(r), (0, 1, 1, 1)) == 1


def test_delta_needs_three_weights():
    r = _ring(("x", "y"))
    with pytest.raises(WeightSequenceError):
        delta_cokernel(r, _aug(r), (0, 1))


# --- lemma 3.1 sandwich ---------------------------------------------------


def test_bounds_equality_at_degree_zero():
    r, phi = _line_quotient()
    for alpha in [(0, 1), (0, 2), (1, 1), (2, 3)]:
        assert lemma31_bounds_check(r, phi, alpha)
    r3 = _ring(("x",), X3)
    for alpha in [(0, 1), (0, 2), (0, 3)]:
        assert lemma31_bounds_check(r3, _aug(r3), alpha)


def test_bounds_polynomial_0111_all_zero():
    r = _ring(("x", "y"))
    aug = _aug(r)
    assert middle_homology(build_model(r, aug, (0, 1, 1, 1))) == 0
    assert delta_cokernel(r, aug, (0, 1, 1, 1)) == 0
    assert lemma31_bounds_check(r, aug, (0, 1, 1, 1))


def test_bounds_cubic_0111_sandwich_is_tight():
    r = _ring(("x",), X3)
    aug = _aug(r)
    # 1 <= 1 <= 1 + H_0(K(0, (0,1))) * dim R_1 with the H_0 term zero
    assert delta_cokernel(r, aug, (0, 1, 1, 1)) == 1
    assert middle_homology(build_model(r, aug, (0, 1, 1, 1))) == 1
    assert middle_homology(build_model(r, aug, (0, 1, 1))) == 0
    assert lemma31_bounds_check(r, aug, (0, 1, 1, 1))


def test_bounds_hold_across_small_corpus():
    cases = []
    r1 = _ring(("x", "y"))
    cases.append((r1, _aug(r1)))
    r2 = _ring(("x",), X3)
    cases.append((r2, _aug(r2)))
    cases.append(_line_quotient(j_max=6))
    xy = _ring(("x", "y"), (((1, (1, 1)),),))
    cases.append((xy, _aug(xy)))
    for r, phi in cases:
        for alpha in _weight_sequences(2, 4) + _weight_sequences(3, 4):
            assert lemma31_bounds_check(r, phi, alpha), (r.gens, alpha)


# --- window check ---------------------------------------------------------


def test_window_polynomial_ring_all_acyclic():
    r = _ring(("x", "y"))
    v = model_window_check(r, _aug(r), 3, 4)
    assert v.passed and v.witness is None
    assert v.kind == "model-window"
    assert v.window == (3, 4)


def test_window_cubic_witness():
    r = _ring(("x",), X3)
    v = model_window_check(r, _aug(r), 2, 3)
    assert not v.passed
    assert v.witness == (0, 1, 1, 1)


def test_window_degree_zero_row_passes_for_degree_one_generated():
    for r, phi in [
        (lambda r: (r, _aug(r)))(_ring(("x",), X3)),
        _line_quotient(j_max=4),
    ]:
        v = model_window_check(r, phi, 0, 4)
        assert v.passed


def test_window_respects_truncation():
    r, phi = _line_quotient(j_max=4)
    with pytest.raises(TruncationError):
        model_window_check(r, phi, 2, 5)


# --- theorem-level consistency --------------------------------------------


def test_acyclic_window_forces_diagonal_betti():
    # the central implication: model acyclicity on a window gives a diagonal
    # Tor table on that window
    r, phi = _line_quotient(j_max=6)
    assert model_window_check(r, phi, 3, 4).passed
    ok, _ = betti_table(r, phi, 3, 4).is_diagonal()
    assert ok

    r3 = _ring(("x",), X3)
    aug3 = _aug(r3)
    assert not model_window_check(r3, aug3, 2, 3).passed
    ok3, witness = betti_table(r3, aug3, 2, 3).is_diagonal()
    assert not ok3 and witness == (2, 3)


def test_gf_and_qq_agree_on_middle_homology():
    for field in (GF101, FieldSpec.qq()):
        r = _ring(("x",), X3, field=field)
        assert middle_homology(build_model(r, _aug(r), (0, 1, 1, 1))) == 1
        assert delta_cokernel(r, _aug(r), (0, 1, 1, 1)) == 1


# --- properties -----------------------------------------------------------


@st.composite
def small_weights(draw):
    length = draw(st.integers(min_value=2, max_value=4))
    a0 = draw(st.integers(min_value=0, max_value=2))
    rest = draw(
        st.lists(
            st.integers(min_value=1, max_value=3),
            min_size=length - 1,
            max_size=length - 1,
        )
    )
    alpha = (a0,) + tuple(rest)
    return alpha if sum(alpha) <= 6 else (0,) + (1,) * (length - 1)


@settings(max_examples=25, deadline=None)
@given(alpha=small_weights())
def test_property_sandwich_on_line_quotient(alpha):
    r, phi = _line_quotient(j_max=6)
    kc = build_model(r, phi, alpha)
    assert compose_is_zero(kc.d_middle, kc.d_top)
    assert lemma31_bounds_check(r, phi, alpha)
