import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_interleaved_word, random_word
from rhochart.numerics import is_unitary, max_abs_diff
from rhochart.words import (
    FormError,
    PhaseAtom,
    RotationAtom,
    UnreachableFormError,
    Word,
    WordForm,
    classify_form,
    count_phases,
    evaluate,
    make_opor_chart,
    make_phase_adjoint_chart,
    matches_form,
    normalize,
    phase_matrix,
    range_reduce,
    rewrite_merge_phases,
    rewrite_pass_through,
    rotation_matrix,
    word_from_json,
    word_to_json,
)

TWO_PI = 2 * math.pi
OPOR = WordForm.ONE_PHASE_ONE_ROTATION


# evaluation

def test_empty_word_is_identity():
    assert max_abs_diff(evaluate(Word(n=3, atoms=())), np.eye(3)) == 0.0


def test_single_quarter_rotation():
    w = Word(n=2, atoms=(RotationAtom(1, 2, math.pi / 2),))
    expected = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
    assert max_abs_diff(evaluate(w), expected) < 1e-16


def test_full_chart_evaluates_to_unitary():
    rng = np.random.default_rng(0)
    w = make_opor_chart(3, rng.uniform(0, TWO_PI, 9))
    assert is_unitary(evaluate(w), 1e-12)


# chart constructors

def chart_slot_count(word):
    """Angles plus phase entries actually stored in the word's atoms."""
    slots = 0
    for atom in word.atoms:
        slots += 1 if isinstance(atom, RotationAtom) else len(atom.deltas)
    return slots


def test_opor_chart_param_counts():
    rng = np.random.default_rng(1)
    for n in range(2, 9):
        params = rng.uniform(0, 1, n * n)
        w = make_opor_chart(n, params)
        assert len(w.rotation_pairs()) == n * (n - 1) // 2
        assert chart_slot_count(w) == n * n
        with pytest.raises(ValueError):
            make_opor_chart(n, params[:-1])


def test_opor_chart_zero_params_identity():
    w = make_opor_chart(2, [0.0, 0.0, 0.0, 0.0])
    assert max_abs_diff(evaluate(w), np.eye(2)) == 0.0


def test_opor_chart_n3_block_order():
    w = make_opor_chart(3, range(9))
    assert w.rotation_pairs() == [(1, 3), (2, 3), (1, 2)]
    # block phases sit on 3, 2, 1: the oriented labels (3,1), (2,3), (1,2)
    phase_indices = [next(iter(a.deltas)) for a in w.atoms[:-1][::2]]
    assert phase_indices == [3, 2, 1]


def test_phase_adjoint_chart_phase_count():
    # each block stores one conjugation phase (the +/- pair is one parameter),
    # the trailing diagonal n more: n(n+1)/2 phases in total, 6 for n = 3
    for n in (2, 3, 5):
        w = make_phase_adjoint_chart(n, np.zeros(n * n))
        blocks = len(w.rotation_pairs())
        trailing = len(w.atoms[-1].deltas)
        assert blocks + trailing == n * (n + 1) // 2
    assert 3 + 3 == 6


def test_phase_adjoint_all_phases_zero_is_pure_rotation_product():
    rng = np.random.default_rng(2)
    n = 3
    params = np.zeros(9)
    params[1::2][:3] = rng.uniform(0, math.pi / 2, 3)  # only the angles
    w = make_phase_adjoint_chart(n, params)
    u = evaluate(w)
    assert max_abs_diff(u, u.conj()) < 1e-15  # real matrix


def test_phase_adjoint_matches_explicit_eight_factor_product():
    rng = np.random.default_rng(3)
    for _ in range(20):
        d1, d2, d3 = rng.uniform(0, TWO_PI, 3)
        t12, t23, t31 = rng.uniform(0, math.pi / 2, 3)
        e1, e2, e3 = rng.uniform(0, TWO_PI, 3)
        w = make_phase_adjoint_chart(3, [d3, t31, d2, t23, d1, t12, e1, e2, e3])
        explicit = (
            phase_matrix(3, {3: d3})
            @ rotation_matrix(3, 1, 3, t31)
            @ phase_matrix(3, {2: d2, 3: -d3})
            @ rotation_matrix(3, 2, 3, t23)
            @ phase_matrix(3, {1: d1, 2: -d2})
            @ rotation_matrix(3, 1, 2, t12)
            @ phase_matrix(3, {1: -d1})
            @ phase_matrix(3, {1: e1, 2: e2, 3: e3})
        )
        assert max_abs_diff(evaluate(w), explicit) < 1e-13


# local rewrites

def test_merge_adjacent_phases():
    w = Word(n=2, atoms=(PhaseAtom({1: 1.0}), PhaseAtom({1: 2.0})))
    merged = rewrite_merge_phases(w)
    assert merged.atoms == (PhaseAtom({1: 3.0}),)
    assert max_abs_diff(evaluate(w), evaluate(merged)) < 1e-15


def test_merge_commutes_disjoint_phase_past_rotation():
    w = Word(n=3, atoms=(PhaseAtom({3: 0.9}), RotationAtom(1, 2, 0.4)))
    out = rewrite_merge_phases(w)
    assert isinstance(out.atoms[0], RotationAtom)
    assert out.atoms[1] == PhaseAtom({3: 0.9})
    assert max_abs_diff(evaluate(w), evaluate(out)) < 1e-15


def test_merge_cancels_opposite_phases():
    w = Word(n=2, atoms=(PhaseAtom({1: 1.0}), PhaseAtom({1: TWO_PI - 1.0})))
    assert rewrite_merge_phases(w).atoms == ()


def test_pass_through_common_phase_commutes():
    delta = 1.3
    w = Word(n=2, atoms=(PhaseAtom({1: delta, 2: delta}), RotationAtom(1, 2, 0.7)))
    out = rewrite_pass_through(w, 0, "right")
    assert isinstance(out.atoms[0], RotationAtom)
    assert out.atoms[1] == PhaseAtom({1: delta, 2: delta})
    assert max_abs_diff(evaluate(w), evaluate(out)) < 1e-15


def test_pass_through_residual_oracle():
    a, b, theta = 0.7, 0.3, 0.5
    w = Word(n=2, atoms=(PhaseAtom({1: a, 2: b}), RotationAtom(1, 2, theta)))
    out = rewrite_pass_through(w, 0, "right")
    assert out.atoms[0] == PhaseAtom({1: a - b})
    assert isinstance(out.atoms[1], RotationAtom)
    assert out.atoms[2] == PhaseAtom({1: b, 2: b})
    direct = phase_matrix(2, {1: a, 2: b}) @ rotation_matrix(2, 1, 2, theta)
    assert max_abs_diff(evaluate(out), direct) < 1e-15


def test_pass_through_left_direction():
    rng = np.random.default_rng(4)
    a, b, theta = rng.uniform(0, TWO_PI, 3)
    w = Word(n=2, atoms=(RotationAtom(1, 2, theta), PhaseAtom({1: a, 2: b})))
    out = rewrite_pass_through(w, 1, "left")
    assert isinstance(out.atoms[-1], PhaseAtom) or isinstance(out.atoms[0], PhaseAtom)
    assert max_abs_diff(evaluate(w), evaluate(out)) < 1e-14


def test_four_phase_sandwich_reduces_to_three():
    rng = np.random.default_rng(5)
    di, dj, ei, ej = rng.uniform(0.1, TWO_PI - 0.1, 4)
    theta = 0.9
    w = Word(
        n=2,
        atoms=(PhaseAtom({1: di, 2: dj}), RotationAtom(1, 2, theta), PhaseAtom({1: ei, 2: ej})),
    )
    out = rewrite_merge_phases(rewrite_pass_through(w, 0, "right"))
    # one single phase on the left, the rotation, one diagonal on the right
    values = [v for atom in out.atoms if isinstance(atom, PhaseAtom) for v in atom.deltas.values()]
    assert len(values) == 3
    assert max_abs_diff(evaluate(w), evaluate(out)) < 1e-14


def test_pass_through_position_errors():
    w = Word(n=2, atoms=(RotationAtom(1, 2, 0.1), PhaseAtom({1: 0.2})))
    with pytest.raises(ValueError):
        rewrite_pass_through(w, 0, "right")
    with pytest.raises(ValueError):
        rewrite_pass_through(w, 1, "right")
    with pytest.raises(ValueError):
        rewrite_pass_through(w, 1, "up")


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_rewrites_preserve_evaluation(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    w = random_word(n, rng, max_atoms=12)
    u = evaluate(w)
    assert max_abs_diff(u, evaluate(rewrite_merge_phases(w))) < 1e-12
    for at, atom in enumerate(w.atoms[:-1]):
        if isinstance(atom, PhaseAtom) and isinstance(w.atoms[at + 1], RotationAtom):
            assert max_abs_diff(u, evaluate(rewrite_pass_through(w, at, "right"))) < 1e-12
            break


# normalization

def test_normalize_opor_from_phase_adjoint_reproduces_known_phase_map():
    rng = np.random.default_rng(6)
    d1, d2, d3 = rng.uniform(0, 1.5, 3)
    t12, t23, t31 = rng.uniform(0, math.pi / 2, 3)
    e1, e2, e3 = rng.uniform(0, 1.0, 3)
    adj = make_phase_adjoint_chart(3, [d3, t31, d2, t23, d1, t12, e1, e2, e3])
    out = normalize(adj, OPOR)
    assert matches_form(out, OPOR)
    assert max_abs_diff(evaluate(adj), evaluate(out)) < 1e-13
    block_phases = [next(iter(a.deltas.values())) for a in out.atoms[:-1][::2]]
    expected = [d3 % TWO_PI, (d2 + d3) % TWO_PI, (d1 + d2 + d3) % TWO_PI]
    assert np.allclose(block_phases, expected, atol=1e-12)


def test_normalize_opor_idempotent():
    rng = np.random.default_rng(7)
    w = random_word(4, rng, max_atoms=10)
    once = normalize(w, OPOR)
    twice = normalize(once, OPOR)
    assert once == twice


def test_normalize_general_is_identity():
    rng = np.random.default_rng(8)
    w = random_word(3, rng)
    assert normalize(w, WordForm.GENERAL) == w


def test_normalize_empty_word():
    w = Word(n=3, atoms=())
    assert normalize(w, OPOR) == w
    assert normalize(w, WordForm.KM) == w


def test_normalize_rejects_repeated_pairs():
    w = Word(n=2, atoms=(RotationAtom(1, 2, 0.3), RotationAtom(1, 2, 0.4)))
    with pytest.raises(UnreachableFormError):
        normalize(w, OPOR)
    with pytest.raises(UnreachableFormError):
        normalize(w, WordForm.KM)


def test_normalize_km_internal_phase_counts():
    rng = np.random.default_rng(9)
    for n in range(3, 7):
        w = random_interleaved_word(n, rng)
        out = normalize(w, WordForm.KM)
        assert max_abs_diff(evaluate(w), evaluate(out)) < 1e-12
        internal, external = count_phases(out)
        assert internal == (n - 1) * (n - 2) // 2
        assert external == 2 * n - 1


def test_normalize_phase_adjoint_round_trip():
    rng = np.random.default_rng(10)
    w = random_word(4, rng, max_atoms=10)
    out = normalize(w, WordForm.PHASE_ADJOINT)
    assert max_abs_diff(evaluate(w), evaluate(out)) < 1e-12
    rotations = len(w.rotation_pairs())
    if rotations:
        assert classify_form(out) in (WordForm.PHASE_ADJOINT, OPOR)


# range reduction

def test_range_reduce_negative_angle():
    w = make_opor_chart(2, [0.0, -0.3, 0.0, 0.0])
    out = range_reduce(w)
    rot = [a for a in out.atoms if isinstance(a, RotationAtom)][0]
    assert abs(rot.theta - 0.3) < 1e-15
    assert max_abs_diff(evaluate(w), evaluate(out)) < 1e-13


def test_range_reduce_oversized_angle():
    w = make_opor_chart(2, [0.0, 2.0, 0.0, 0.0])
    out = range_reduce(w)
    rot = [a for a in out.atoms if isinstance(a, RotationAtom)][0]
    assert abs(rot.theta - (math.pi - 2.0)) < 1e-15
    assert 0.0 <= rot.theta <= math.pi / 2
    assert max_abs_diff(evaluate(w), evaluate(out)) < 1e-13


def test_range_reduce_in_range_word_unchanged():
    rng = np.random.default_rng(11)
    params = []
    for _ in range(3):
        params.extend([rng.uniform(0.1, TWO_PI - 0.1), rng.uniform(0.1, math.pi / 2 - 0.1)])
    params.extend(rng.uniform(0.1, TWO_PI - 0.1, 3))
    w = make_opor_chart(3, params)
    assert range_reduce(w) == w


def test_range_reduce_idempotent_and_in_range():
    rng = np.random.default_rng(12)
    for _ in range(30):
        n = int(rng.integers(2, 6))
        params = rng.uniform(-10, 10, n * n)
        w = make_opor_chart(n, params)
        out = range_reduce(w)
        assert max_abs_diff(evaluate(w), evaluate(out)) < 1e-13
        assert range_reduce(out) == out
        for atom in out.atoms:
            if isinstance(atom, RotationAtom):
                assert 0.0 <= atom.theta <= math.pi / 2
            else:
                assert all(0.0 <= v < TWO_PI for v in atom.deltas.values())


def test_range_reduce_requires_opor():
    w = Word(n=2, atoms=(RotationAtom(1, 2, 0.3), PhaseAtom({1: 0.1}), PhaseAtom({2: 0.2})))
    with pytest.raises(FormError):
        range_reduce(w)


# form recognition and phase counting

def test_count_phases_km_golden():
    rng = np.random.default_rng(13)
    w = normalize(random_interleaved_word(3, rng), WordForm.KM)
    assert count_phases(w) == (1, 5)


def test_count_phases_opor_total():
    rng = np.random.default_rng(14)
    w = make_opor_chart(4, rng.uniform(0, 1, 16))
    internal, external = count_phases(w)
    assert internal + external == 10  # n(n+1)/2 for n = 4


def test_count_phases_pure_rotation():
    w = Word(n=3, atoms=(RotationAtom(1, 2, 0.4), RotationAtom(2, 3, 0.5)))
    assert count_phases(w) == (0, 0)


def test_count_phases_unrecognized():
    w = Word(n=3, atoms=(PhaseAtom({1: 0.3}), PhaseAtom({2: 0.1}), RotationAtom(1, 2, 0.2), PhaseAtom({1: 0.1, 2: 0.2}), RotationAtom(1, 2, 0.9)))
    with pytest.raises(FormError):
        count_phases(w)


def test_classify_forms():
    rng = np.random.default_rng(15)
    opor = make_opor_chart(3, rng.uniform(0, 1, 9))
    adj = make_phase_adjoint_chart(3, rng.uniform(0.1, 1, 9))
    assert classify_form(opor) is OPOR
    assert classify_form(adj) is WordForm.PHASE_ADJOINT
    km = normalize(random_interleaved_word(4, rng), WordForm.KM)
    assert classify_form(km) is WordForm.KM
    assert classify_form(random_interleaved_word(3, rng)) is WordForm.GENERAL


# serialization

def test_word_json_round_trip():
    rng = np.random.default_rng(16)
    w = random_word(4, rng, max_atoms=10)
    again = word_from_json(word_to_json(w))
    assert again == w
    assert max_abs_diff(evaluate(w), evaluate(again)) == 0.0


def test_word_json_accepts_reversed_pair_labels():
    w = word_from_json({"n": 3, "atoms": [{"rot": [3, 1], "theta": 0.4}, {"phase": {"3": 1.2}}]})
    assert w.atoms[0] == RotationAtom(1, 3, 0.4)
    with pytest.raises(ValueError):
        word_from_json({"n": 3, "atoms": [{"rot": [2, 2], "theta": 0.4}]})


def test_atom_validation():
    with pytest.raises(ValueError):
        RotationAtom(2, 2, 0.1)
    with pytest.raises(ValueError):
        RotationAtom(1, 2, math.inf)
    with pytest.raises(ValueError):
        PhaseAtom({0: 0.1})
    with pytest.raises(ValueError):
        Word(n=2, atoms=(RotationAtom(1, 3, 0.1),))
