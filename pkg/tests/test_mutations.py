import pytest

from exseq.mutations import (
    banana_left,
    banana_right,
    helex,
    helix_left,
    helix_right,
    is_orlov_type,
    lex_operator,
    mutually_orthogonal,
    reduce_to_orlov,
    swap_orthogonal,
)
from exseq.toric_mes import build_mes, enumerate_mes
from exseq.varieties import cotangent, sigma, sub, toric
from exseq.x2 import FIXED_TEMPLATES, class_i_sequence, classify

X2 = cotangent(2)
T431 = toric(4, 3, (0, -1, -1))


def test_helix_inverse():
    for seq in (FIXED_TEMPLATES["ii"][0], FIXED_TEMPLATES["v"][2]):
        assert helix_left(X2, helix_right(X2, seq)) == tuple(seq)
        assert helix_right(X2, helix_left(X2, seq)) == tuple(seq)


def test_helix_class_ii_chain():
    out = helix_right(X2, FIXED_TEMPLATES["ii"][0])
    assert tuple(sub(p, (0, 1)) for p in out) == (
        (0, 0), (1, 0), (0, 1), (1, 1), (1, 2), (2, 1),
    )


def test_swap():
    seq = tuple(sigma(p) for p in FIXED_TEMPLATES["iii"][3])
    pos = seq.index((1, -1))
    assert seq[pos + 1] == (0, 2)
    assert mutually_orthogonal(X2, (1, -1), (0, 2))
    swapped = swap_orthogonal(X2, seq, pos)
    assert swap_orthogonal(X2, swapped, pos) == seq
    with pytest.raises(ValueError):
        swap_orthogonal(X2, ((0, 0), (1, 0)), 0)   # (1,0) is effective


def test_lex_operator():
    sorted_seq = ((0, 0), (1, 0), (2, 0), (1, 1), (2, 1), (3, 1))
    assert lex_operator(X2, sorted_seq) == sorted_seq
    scrambled = ((0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (3, 1))
    assert lex_operator(X2, scrambled) == sorted_seq
    mes = build_mes(T431, frozenset({(2, 4)}), {1: 1, 2: 0, 3: -2})
    seq = mes.certificate
    shuffled = seq[:3] + (seq[4], seq[3]) + seq[5:]
    # toric MES can always be restored to vertical-lex order
    try:
        restored = lex_operator(T431, shuffled)
        assert restored == seq
    except ValueError:
        pytest.fail("adjacent out-of-order pair was not swappable")


def test_lex_on_enumerated_toric():
    spec = toric(2, 1, (0, -1))
    for mes in enumerate_mes(spec, 2):
        seq = mes.certificate
        rotated = helix_right(spec, seq)
        assert lex_operator(spec, rotated)  # never raises
        helexed = helex(spec, seq)
        assert len(helexed) == len(seq)


def test_orlov_detection():
    assert is_orlov_type(X2, ((0, 0), (1, 0), (2, 0), (1, 1), (2, 1), (3, 1)))
    assert is_orlov_type(X2, ((0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (3, 1)))
    assert not is_orlov_type(X2, FIXED_TEMPLATES["iv"][3])
    assert not is_orlov_type(X2, ((0, 0), (1, 0), (2, 0)))
    assert is_orlov_type(X2, class_i_sequence(0, -4))
    orlov = build_mes(T431, frozenset(), {k: 2 * k for k in range(4)})
    assert is_orlov_type(T431, orlov.certificate)
    nontrivial = build_mes(T431, FIG3 := frozenset({(2, 4)}), {k: 0 for k in (1, 2, 3)})
    assert not is_orlov_type(T431, nontrivial.certificate)


def test_banana_patterns():
    assert banana_right(X2, ((-2, 1), (-1, -1), (-1, 0)), 0) == (
        (-1, -1), (-1, 0), (0, 0),
    )
    assert banana_right(X2, ((0, 0), (1, 0), (1, 1)), 0) == (
        (1, 0), (1, 1), (2, -1),
    )
    for triple in (((-2, 1), (-1, -1), (-1, 0)), ((0, 0), (1, 0), (1, 1))):
        assert banana_left(X2, banana_right(X2, triple, 0), 0) == triple
    # twisted instance inside a longer sequence
    seq = FIXED_TEMPLATES["iv"][3]
    out = banana_right(X2, seq, 2)
    assert out == ((0, 0), (1, 0), (2, 0), (2, 1), (3, 1), (4, 1))
    with pytest.raises(ValueError):
        banana_right(X2, ((0, 0), (5, 5), (1, 0)), 0)


def test_reduce_representatives():
    for cls, seqs in FIXED_TEMPLATES.items():
        for seq in seqs:
            for variant in (seq, tuple(sigma(p) for p in seq)):
                trace = reduce_to_orlov(X2, variant)
                assert is_orlov_type(X2, trace.final)
                assert trace.replay() == trace.final
    for fam in range(3):
        for a in (-5, 0, 1, 2, 6):
            trace = reduce_to_orlov(X2, class_i_sequence(fam, a))
            assert is_orlov_type(X2, trace.final)


def test_reduce_scripts_match_proof():
    trace = reduce_to_orlov(X2, FIXED_TEMPLATES["iv"][3])
    assert any(s.op == "banana_right" for s in trace.steps)
    trace = reduce_to_orlov(X2, FIXED_TEMPLATES["v"][3])
    assert any(s.op == "banana_left" for s in trace.steps)
    trace = reduce_to_orlov(X2, FIXED_TEMPLATES["ii"][3])
    assert {s.op for s in trace.steps} <= {"lex", "swap"}
    trace = reduce_to_orlov(X2, class_i_sequence(0, 3))
    assert is_orlov_type(X2, trace.start)   # already Orlov, empty-ish trace
    primed = reduce_to_orlov(X2, tuple(sigma(p) for p in FIXED_TEMPLATES["iii"][0]))
    assert primed.steps[0].op == "sigma"


def test_reduce_rejects_non_mes():
    with pytest.raises(ValueError):
        reduce_to_orlov(X2, ((0, 0), (1, 0), (2, 0), (5, 0), (0, 1), (1, 1)))


def test_helex_orbit_returns_to_orlov():
    # one helex of an Orlov sequence breaks the chain footprint (the rotated
    # bundle moves up a full stack of rows); rank-many helexes amount to a
    # global anticanonical twist and land on an Orlov sequence again
    spec = toric(2, 1, (0, -1))
    orlov = build_mes(spec, frozenset(), {0: 0, 1: 2}).certificate
    assert is_orlov_type(spec, orlov)
    seq = helex(spec, orlov)
    assert not is_orlov_type(spec, seq)
    for _ in range(len(orlov) - 1):
        seq = helex(spec, seq)
    assert is_orlov_type(spec, seq)
    k = (spec.beta - spec.ell - 1, -spec.v - 1)
    assert set(seq) == {sub(p, k) for p in orlov}


def test_reduce_orlov_input_needs_no_mutations():
    trace = reduce_to_orlov(X2, class_i_sequence(0, 3))
    assert {s.op for s in trace.steps} <= {"lex"}
