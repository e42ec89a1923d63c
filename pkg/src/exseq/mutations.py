"""Sequence operators: helixing, orthogonal swaps, Lex, and the two
certified three-term rewrites on X2 ("bananas"), plus the reduction of any
X2 maximal exceptional sequence to Orlov type with a replayable trace.

All operators re-verify exceptionality of their output; a failure indicates
a bug upstream, not bad user input, and raises AssertionError.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import cohomology as coh
from .posets import is_exceptional_sequence
from .varieties import (
    LB,
    VarietySpec,
    add,
    canonical_bundle,
    fiber_dim,
    neg,
    rank_k0,
    sigma,
    sub,
    vlex_key,
)


def _check(spec, seq, op):
    if not is_exceptional_sequence(spec, seq):
        raise AssertionError(f"{op} produced a non-exceptional sequence {seq}")
    return tuple(seq)


def helix_right(spec: VarietySpec, seq) -> tuple[LB, ...]:
    """(E1, ..., En) -> (E2, ..., En, E1 - K)."""
    seq = tuple(seq)
    out = seq[1:] + (sub(seq[0], canonical_bundle(spec)),)
    return _check(spec, out, "helix_right")


def helix_left(spec: VarietySpec, seq) -> tuple[LB, ...]:
    """(E1, ..., En) -> (En + K, E1, ..., E(n-1))."""
    seq = tuple(seq)
    out = (add(seq[-1], canonical_bundle(spec)),) + seq[:-1]
    return _check(spec, out, "helix_left")


def mutually_orthogonal(spec: VarietySpec, a: LB, b: LB) -> bool:
    d = sub(a, b)
    return coh.is_immaculate(spec, d) and coh.is_immaculate(spec, neg(d))


def swap_orthogonal(spec: VarietySpec, seq, pos: int) -> tuple[LB, ...]:
    """Exchange the mutually orthogonal neighbours at positions pos, pos+1."""
    seq = list(seq)
    a, b = seq[pos], seq[pos + 1]
    if not mutually_orthogonal(spec, a, b):
        raise ValueError(f"pair {(a, b)} at {pos} is not mutually orthogonal")
    seq[pos], seq[pos + 1] = b, a
    return _check(spec, seq, "swap_orthogonal")


def lex_operator(spec: VarietySpec, seq) -> tuple[LB, ...]:
    """Sort into vertical-lex order by adjacent orthogonal swaps.

    Raises ValueError when an out-of-order adjacent pair is not swappable;
    on the toric family this never happens for maximal exceptional sets.
    """
    seq = list(seq)
    n = len(seq)
    for _ in range(n * n):
        for k in range(n - 1):
            if vlex_key(seq[k]) > vlex_key(seq[k + 1]):
                seq = list(swap_orthogonal(spec, seq, k))
                break
        else:
            return tuple(seq)
    raise AssertionError("lex_operator failed to terminate")  # pragma: no cover


def reorder_to(spec: VarietySpec, seq, target) -> list:
    """Bubble a sequence into a prescribed order of the same set, recording
    the swap positions; both orders must be exceptional."""
    seq = list(seq)
    target = list(target)
    if sorted(seq) != sorted(target):
        raise ValueError("target order is over a different set")
    swaps = []
    for k in range(len(target)):
        pos = seq.index(target[k])
        while pos > k:
            seq = list(swap_orthogonal(spec, seq, pos - 1))
            swaps.append(pos - 1)
            pos -= 1
    return swaps


def helex(spec: VarietySpec, seq) -> tuple[LB, ...]:
    """helix_right after Lex; preserves fullness on the toric family."""
    return helix_right(spec, lex_operator(spec, seq))


def is_orlov_type(spec: VarietySpec, seq) -> bool:
    """True iff the sequence is, up to reordering mutually orthogonal
    neighbours, a stack of fiber-count horizontal chains of ell+1
    consecutive bundles on consecutive H-levels."""
    seq = tuple(seq)
    if len(seq) != rank_k0(spec):
        return False
    rows: dict[int, list[int]] = {}
    for i, j in seq:
        rows.setdefault(j, []).append(i)
    levels = sorted(rows)
    if levels != list(range(levels[0], levels[0] + fiber_dim(spec) + 1)):
        return False
    for xs in rows.values():
        xs.sort()
        if len(xs) != spec.ell + 1 or xs[-1] - xs[0] != spec.ell:
            return False
    # row-major order must be reachable by orthogonal swaps
    target = sorted(seq, key=vlex_key)
    try:
        reorder_to(spec, seq, target)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------------------
# the two certified rewrites of X2
#
# pattern A:  (t+(-2,1), t+(-1,-1), t+(-1,0))  ->  (t+(-1,-1), t+(-1,0), t)
# pattern B:  (t, t+(1,0), t+(1,1))            ->  (t+(1,0), t+(1,1), t+(2,-1))
#
# Rightward moves apply A or B forward, leftward moves invert them.

_A_IN = ((-2, 1), (-1, -1), (-1, 0))
_A_OUT = ((-1, -1), (-1, 0), (0, 0))
_B_IN = ((0, 0), (1, 0), (1, 1))
_B_OUT = ((1, 0), (1, 1), (2, -1))


def _match_pattern(triple, pattern):
    t = sub(triple[0], pattern[0])
    if all(sub(p, q) == t for p, q in zip(triple, pattern)):
        return t
    return None


def _rewrite(spec, seq, pos, pats):
    seq = list(seq)
    triple = tuple(seq[pos:pos + 3])
    if len(triple) < 3:
        raise ValueError("pattern needs three consecutive positions")
    for pin, pout in pats:
        t = _match_pattern(triple, pin)
        if t is not None:
            seq[pos:pos + 3] = [add(p, t) for p in pout]
            return _check(spec, seq, "banana")
    raise ValueError(f"no certified pattern matches {triple}")


def banana_right(spec: VarietySpec, seq, pos: int) -> tuple[LB, ...]:
    """Mutate the bundle at ``pos`` rightward across the next two."""
    assert spec.kind == "cotangent" and spec.ell == 2
    return _rewrite(spec, seq, pos, [(_A_IN, _A_OUT), (_B_IN, _B_OUT)])


def banana_left(spec: VarietySpec, seq, pos: int) -> tuple[LB, ...]:
    """Mutate the bundle at ``pos + 2`` leftward across the previous two."""
    assert spec.kind == "cotangent" and spec.ell == 2
    return _rewrite(spec, seq, pos, [(_A_OUT, _A_IN), (_B_OUT, _B_IN)])


# ---------------------------------------------------------------------------
# reduction to Orlov type


@dataclass(frozen=True)
class Step:
    op: str
    arg: object
    before: tuple
    after: tuple


@dataclass(frozen=True)
class DerivationTrace:
    """A verified list of rewriting steps; replay reproduces ``final``."""

    spec: VarietySpec
    start: tuple
    steps: tuple[Step, ...]

    @property
    def final(self):
        return self.steps[-1].after if self.steps else self.start

    def replay(self):
        cur = self.start
        for s in self.steps:
            assert s.before == cur
            cur = _apply_step(self.spec, s)
            assert cur == s.after
        return cur


def _apply_step(spec, step):
    ops = {
        "helix_right": lambda sq, a: helix_right(spec, sq),
        "helix_left": lambda sq, a: helix_left(spec, sq),
        "swap": lambda sq, a: swap_orthogonal(spec, sq, a),
        "lex": lambda sq, a: lex_operator(spec, sq),
        "banana_left": lambda sq, a: banana_left(spec, sq, a),
        "banana_right": lambda sq, a: banana_right(spec, sq, a),
        "twist": lambda sq, a: tuple(add(p, a) for p in sq),
        "sigma": lambda sq, a: tuple(sigma(p) for p in sq),
    }
    return ops[step.op](step.before, step.arg)


class _Tracer:
    def __init__(self, spec, seq):
        self.spec = spec
        self.seq = tuple(seq)
        self.steps = []

    def do(self, op, arg=None):
        before = self.seq
        self.seq = _apply_step(self.spec, Step(op, arg, before, None))
        self.steps.append(Step(op, arg, before, self.seq))


# per-class finishing scripts: rotate to the display entry below, then sort /
# rewrite as indicated.  Class i is already of Orlov type in shape 0.
_SCRIPT = {
    "i": (0, "lex"),
    "ii": (3, "lex"),
    "iii": (3, "lex"),
    "iv": (3, "banana_right", 2),
    "v": (3, "banana_left", 1),
}


def reduce_to_orlov(spec: VarietySpec, seq) -> DerivationTrace:
    """Mutate a six-element X2 MES to Orlov type, returning the full trace.

    Deterministic: classify, undo sigma if needed, rotate by helixing to the
    scripted representative of the class, reorder, and apply the designated
    certified rewrite.  Every step re-verifies exceptionality.
    """
    from .x2 import classify

    seq = tuple(seq)
    if not is_exceptional_sequence(spec, seq):
        raise ValueError("input is not an exceptional sequence")
    label = classify(seq)
    if label.cls == "unclassified":
        raise ValueError("input does not belong to any known class")
    tr = _Tracer(spec, seq)
    if label.sigma_applied:
        tr.do("sigma")
    base = label.cls.rstrip("'")
    script = _SCRIPT[base]
    target_idx = script[0]
    if base == "i":
        rotations = (3 - label.helix_index) % 3
    else:
        rotations = (target_idx - label.helix_index) % 6
    for _ in range(rotations):
        # align with the display order of the current orbit position first,
        # so the helix rotates out the correct bundle
        cur_label = classify(tr.seq)
        _align(tr, cur_label)
        tr.do("helix_right")
    final_label = classify(tr.seq)
    _align(tr, final_label)
    if script[1] == "lex":
        tr.do("lex")
    else:
        tr.do(script[1], script[2])
        tr.do("lex")
    trace = DerivationTrace(spec, seq, tuple(tr.steps))
    assert is_orlov_type(spec, trace.final)
    trace.replay()
    return trace


def _align(tr, label):
    """Reorder the tracer's sequence into the display order of the
    classified orbit position, one recorded orthogonal swap at a time."""
    target = label.sequence()
    if tuple(sorted(tr.seq)) != tuple(sorted(target)):
        raise AssertionError("classification does not match the live sequence")
    for pos in reorder_to(tr.spec, tr.seq, target):
        tr.do("swap", pos)
