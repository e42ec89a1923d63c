"""Maximal exceptional sets on X(ell, V; c) via admissible sets and layers.

Every maximal exceptional set (MES) on the toric family is, after twisting,
of the shape Z u X: an *admissible set* X in the triangle above the fiber
band, completed row by row into horizontal chains whose new points Y drop
down by (beta, -V-1) to form Z.  Rows of Z whose partner X-row is empty are
*free* horizontal chains; their positions are unconstrained, which is what
the enumeration windows.

Strongness and effectivity of a MES are decided purely combinatorially from
the left/right endpoints of its layers (displaced / bad layers); the test
suite checks these against the cohomological criteria on an exhaustive grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import cohomology as coh
from .posets import ExceptionalSet, exceptional_set, is_exceptional_sequence
from .varieties import (
    TORIC,
    LB,
    VarietySpec,
    add,
    leq_eff,
    leq_nef,
    sub,
    vlex_key,
)

NEG_INF = float("-inf")
POS_INF = float("inf")


def delta_up_row_bounds(spec: VarietySpec, k: int) -> tuple[int, int]:
    """Inclusive i-range of the admissibility triangle in row k."""
    lo = -spec.beta + 1
    hi = spec.ell - spec.beta + spec.alpha * (spec.v + 1 - k)
    return lo, hi


def admissible_rows(spec: VarietySpec):
    return range(spec.v + 1, 2 * spec.v + 2)


def validate_admissible(spec: VarietySpec, points) -> None:
    """Raise ValueError unless the point set satisfies (Ai)-(Aiii)."""
    assert spec.kind == TORIC
    pts = set(points)
    rows: dict[int, set[int]] = {}
    for i, j in pts:
        rows.setdefault(j, set()).add(i)
    for k, xs in rows.items():
        if k not in admissible_rows(spec):
            raise ValueError(f"(Ai): row {k} outside the admissible band")
        lo, hi = delta_up_row_bounds(spec, k)
        for i in xs:
            if not lo <= i <= hi:
                raise ValueError(f"point ({i},{k}) outside the triangle")
        # a gap inside a row would clash with its own completion point (the
        # dropped-down filler differs from the right neighbour by a class in
        # the fiberwise maculate cone), so rows must be intervals
        if max(xs) - min(xs) + 1 != len(xs):
            raise ValueError(f"row {k} has a gap; layers must be intervals")
    anchor = (spec.ell - spec.beta, spec.v + 1)
    if pts and anchor not in pts:
        raise ValueError(f"(Aii): nonempty set must contain {anchor}")
    for i, k in pts:
        if k == spec.v + 1:
            continue
        for step in range(spec.alpha + 1):
            if (i + step, k - 1) not in pts:
                raise ValueError(
                    f"(Aiii): ({i},{k}) needs ({i + step},{k - 1}) below it"
                )


def enumerate_admissible(spec: VarietySpec):
    """All admissible sets, bottom row up; the empty set comes first.

    Each layer is an interval; the bottom layer ends at the normalisation
    anchor, and a layer above [m, M] may be any subinterval of
    [m, M - alpha] within the triangle bounds (possibly empty, which caps
    the stack).
    """
    assert spec.kind == TORIC
    a, v = spec.alpha, spec.v
    anchor_i = spec.ell - spec.beta
    out = [frozenset()]

    def rec(current, lo_below, hi_below, k):
        if k > 2 * v + 1:
            return
        blo, bhi = delta_up_row_bounds(spec, k)
        lo_max = max(blo, lo_below)
        hi_max = min(bhi, hi_below - a)
        for m in range(lo_max, hi_max + 1):
            for mm in range(m, hi_max + 1):
                nxt = current | {(i, k) for i in range(m, mm + 1)}
                out.append(frozenset(nxt))
                rec(nxt, m, mm, k + 1)

    blo, _ = delta_up_row_bounds(spec, v + 1)
    for m in range(blo, anchor_i + 1):
        bottom = frozenset((i, v + 1) for i in range(m, anchor_i + 1))
        out.append(bottom)
        rec(bottom, m, anchor_i, v + 2)
    for s in out:
        validate_admissible(spec, s)
    return out


@dataclass(frozen=True)
class LayerDecomposition:
    """The X/Y/Z data of a MES together with layer endpoints.

    ``layers`` lists the labels of L_sigma in increasing order; -inf stands
    for the residual part of Z, +inf for X.  ``left``/``right`` map labels to
    the endpoints sigma(k)^L / sigma(k)^R (the infinite layers carry one
    synthetic endpoint each, displaced by (ell, 0)).
    """

    spec: VarietySpec
    x_points: frozenset
    y_points: frozenset
    z_points: frozenset
    free: tuple[int, ...]
    layers: tuple
    left: dict
    right: dict

    @property
    def z_free(self) -> frozenset:
        return frozenset(
            p for p in self.z_points if p[1] in self.free
        )

    @property
    def z_residual(self) -> frozenset:
        return self.z_points - self.z_free


def _chain(left: int, ell: int, row: int):
    return {(left + t, row) for t in range(ell + 1)}


def build_mes(spec: VarietySpec, admissible, free_chain_offsets) -> ExceptionalSet:
    """Assemble the MES Z u X from an admissible set and free-chain offsets.

    ``free_chain_offsets`` maps each free layer k (a Z-row in 0..V whose
    partner X-row is empty) to the offset of its chain's left endpoint
    relative to the chain one row below (row -1 meaning the anchor at 0).
    Offsets must be given exactly for the free layers.
    """
    assert spec.kind == TORIC
    validate_admissible(spec, admissible)
    ell, v = spec.ell, spec.v
    shift = (spec.beta, -v - 1)
    rows: dict[int, set[int]] = {}
    for i, j in admissible:
        rows.setdefault(j, set()).add(i)
    free = tuple(k for k in range(v + 1) if (k + v + 1) not in rows)
    if set(free_chain_offsets) != set(free):
        raise ValueError(f"offsets must be given exactly for free layers {free}")
    y_points: set[LB] = set()
    chain_left: dict[int, int] = {}
    for k in range(v + 1):
        xrow = rows.get(k + v + 1)
        if xrow is not None:
            left = max(xrow) - ell
            y_points |= {
                (i, k + v + 1) for i in range(left, left + ell + 1) if i not in xrow
            }
        else:
            below = chain_left.get(k - 1, 0) if k else 0
            left = below + free_chain_offsets[k]
            y_points |= _chain(left, ell, k + v + 1)
        chain_left[k] = left
    z_points = {add(p, shift) for p in y_points}
    points = z_points | set(admissible)
    cert = tuple(sorted(points, key=vlex_key))
    if not is_exceptional_sequence(spec, cert):
        raise AssertionError("constructed set is not exceptional (internal bug)")
    return exceptional_set(spec, points, certificate=cert)


def enumerate_mes(spec: VarietySpec, offset_window: int = 3):
    """All MES built from admissible sets with free offsets in [-W, W]."""
    assert offset_window >= 0
    out = []
    for adm in enumerate_admissible(spec):
        rows = {j for _, j in adm}
        free = [k for k in range(spec.v + 1) if (k + spec.v + 1) not in rows]
        span = range(-offset_window, offset_window + 1)
        for combo in product(span, repeat=len(free)):
            offsets = dict(zip(free, combo))
            out.append(build_mes(spec, adm, offsets))
    return out


def decompose_layers(spec: VarietySpec, mes) -> LayerDecomposition:
    """Recognise the Z u X shape of a MES and extract its layer data.

    Works in the coordinates of the input (the decomposition is equivariant
    under twists); raises ValueError when the set is not of the expected
    shape.
    """
    assert spec.kind == TORIC
    pts = frozenset(mes.bundles if isinstance(mes, ExceptionalSet) else mes)
    ell, v = spec.ell, spec.v
    shift = (spec.beta, -v - 1)
    rows: dict[int, set[int]] = {}
    for i, j in pts:
        rows.setdefault(j, set()).add(i)
    jmin = min(rows)
    z_rows = {k: rows.get(jmin + k, set()) for k in range(v + 1)}
    x_rows = {k: rows.get(jmin + k + v + 1, set()) for k in range(v + 1)}
    if sum(map(len, z_rows.values())) + sum(map(len, x_rows.values())) != len(pts):
        raise ValueError("rows spread beyond the 2V+2 band; not of Z u X shape")
    x_points, y_points, z_points = set(), set(), set()
    free = []
    for k in range(v + 1):
        zr, xr = z_rows[k], x_rows[k]
        if not zr:
            raise ValueError(f"Z-row {k} is empty")
        lifted = {i - shift[0] for i in zr}  # where Y sits in the X-row
        combined = set(xr) | lifted
        width = max(combined) - min(combined)
        if width != ell or len(combined) != ell + 1:
            raise ValueError(f"row {k} does not complete to a chain")
        if set(xr) & lifted:
            raise ValueError(f"row {k}: X and lifted Z overlap")
        if xr and max(combined) not in xr:
            raise ValueError(f"row {k}: X does not contain the chain's right end")
        if not xr:
            free.append(k)
        x_points |= {(i, jmin + k + v + 1) for i in xr}
        y_points |= {(i, jmin + k + v + 1) for i in lifted}
        z_points |= {(i, jmin + k) for i in zr}
    # the admissibility axioms must hold after undoing the twist
    if x_points:
        if not x_rows[0]:
            raise ValueError("X nonempty but its bottom row is empty")
        twist = (max(x_rows[0]) - (spec.ell - spec.beta), jmin)
        validate_admissible(spec, {sub(p, twist) for p in x_points})
    layers: list = [NEG_INF] if x_points else []
    layers += free
    if x_points:
        layers.append(POS_INF)
    left, right = {}, {}
    for k in free:
        row = sorted(z_rows[k])
        left[k] = (row[0], jmin + k)
        right[k] = (row[-1], jmin + k)
    if x_points:
        bottom_x = sorted(x_rows[0])
        left[POS_INF] = (min(bottom_x), jmin + v + 1)
        right[POS_INF] = add(left[POS_INF], (ell, 0))
        k0 = max(k for k in range(v + 1) if k not in free)
        res_row = sorted(z_rows[k0])
        right[NEG_INF] = (res_row[-1], jmin + k0)
        left[NEG_INF] = sub(right[NEG_INF], (ell, 0))
    return LayerDecomposition(
        spec,
        frozenset(x_points),
        frozenset(y_points),
        frozenset(z_points),
        tuple(free),
        tuple(layers),
        left,
        right,
    )


def displaced_layers(spec: VarietySpec, dec: LayerDecomposition):
    out = []
    for pos, k in enumerate(dec.layers):
        for kp in dec.layers[:pos]:
            if not leq_nef(dec.left[kp], dec.left[k]):
                out.append(k)
                break
    return out


def bad_layers(spec: VarietySpec, dec: LayerDecomposition):
    out = []
    for pos, k in enumerate(dec.layers):
        for kp in dec.layers[:pos]:
            if not leq_nef(dec.left[kp], dec.left[k]) and not leq_eff(
                spec, dec.right[kp], dec.left[k]
            ):
                out.append(k)
                break
    return out


def has_displaced_layer(spec: VarietySpec, mes) -> bool:
    dec = mes if isinstance(mes, LayerDecomposition) else decompose_layers(spec, mes)
    return bool(displaced_layers(spec, dec))


def has_bad_layer(spec: VarietySpec, mes) -> bool:
    dec = mes if isinstance(mes, LayerDecomposition) else decompose_layers(spec, mes)
    return bool(bad_layers(spec, dec))


def strongness_by_layers(spec: VarietySpec, mes) -> bool:
    """A MES is strongly exceptional iff no layer is displaced."""
    return not has_displaced_layer(spec, mes)


def effectiveness_by_layers(spec: VarietySpec, mes) -> bool:
    """A MES is effective iff no layer is bad."""
    return not has_bad_layer(spec, mes)


def acyclicity_threshold(spec: VarietySpec) -> bool:
    """Eff(X) n -Imm(X) lies in the acyclic locus iff ell >= alpha*V.

    Both the closed form and an exhaustive window scan are evaluated; they
    must agree.
    """
    assert spec.kind == TORIC
    closed = spec.ell >= spec.alpha * spec.v
    w = 2 * (spec.ell + spec.alpha * spec.v + spec.v + 2)
    scan = True
    for i in range(-w, w + 1):
        for j in range(0, w + 1):
            p = (i, j)
            if (
                coh.is_effective(spec, p)
                and coh.is_immaculate(spec, (-i, -j))
                and not coh.is_acyclic(spec, p)
            ):
                scan = False
                break
        if not scan:
            break
    assert closed == scan, "threshold formula disagrees with the window scan"
    return closed


# sequence-level reorderings


def vertical_lex(seq):
    return tuple(sorted(seq, key=vlex_key))


def horizontal_lex(seq):
    return tuple(sorted(seq, key=lambda p: (p[0], p[1])))


def sigma_involution(seq):
    return tuple((j, i) for i, j in seq)
