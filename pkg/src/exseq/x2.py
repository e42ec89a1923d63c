"""Classification machinery for X2 = P(Omega_{P^2}(-1)).

Maximal exceptional sets have six elements here.  Reduction modulo the
admissible lattice (3Z)^2 colours the possible difference classes (blue for
the anti-diagonal, red for the horizontal and green for the vertical strip),
constrains images of exceptional sets (one gap per shifted diagonal) and
drives the pruned search that reproduces the classification into the helix
classes i-v and the sigma-images i', iii'.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from . import cohomology as coh
from .posets import (
    AntisymmetryError,
    ExceptionalSet,
    associated_poset,
    compute_F,
    eff_relation,
    exceptional_set,
    is_strongly_exceptional,
)
from .varieties import (
    COTANGENT,
    LB,
    VarietySpec,
    add,
    cotangent,
    sigma,
    sub,
    vlex_key,
)

X2 = cotangent(2)

BLUE, GREEN, RED, MIXED, NON_IMMACULATE = "blue", "green", "red", "mixed", "non_immaculate"

_COLOR_TABLE = {
    (2, 0): BLUE, (0, 2): BLUE,
    (0, 1): RED, (2, 1): RED,
    (1, 0): GREEN, (1, 2): GREEN,
    (1, 1): MIXED,
    (0, 0): NON_IMMACULATE, (2, 2): NON_IMMACULATE,
}


def color_of(spec: VarietySpec, p: LB) -> str:
    """Colour of the residue class of p in (Z/3)^2 (X2 only)."""
    assert spec.kind == COTANGENT and spec.ell == 2
    return _COLOR_TABLE[(p[0] % 3, p[1] % 3)]


def _residue(p: LB, n: int) -> tuple[int, int]:
    return (p[0] % n, p[1] % n)


def gap_points(spec: VarietySpec, points) -> dict:
    """The unique missing residue of each shifted diagonal of a MES image.

    For an ell(ell+1)-element MES on X_ell the image in (Z/(ell+1))^2 has one
    gap on each of the ell+1 shifted diagonals; a diagonal carrying more than
    ell image points would contradict exceptionality, so that is enforced.
    """
    n = spec.ell + 1
    pts = list(points.bundles if isinstance(points, ExceptionalSet) else points)
    residues = [_residue(p, n) for p in pts]
    if len(set(residues)) != len(residues):
        raise ValueError("image in Pic/Lambda is not injective; not exceptional")
    diagonals: dict[int, set] = {d: set() for d in range(n)}
    for r in residues:
        diagonals[(r[1] - r[0]) % n].add(r)
    gaps = {}
    for d, hit in diagonals.items():
        if len(hit) > spec.ell:
            raise ValueError(f"shifted diagonal {d} carries {len(hit)} > ell points")
        missing = [(a, (a + d) % n) for a in range(n) if (a, (a + d) % n) not in hit]
        if len(pts) == spec.ell * n:
            assert len(missing) == 1
            gaps[d] = missing[0]
        else:
            gaps[d] = tuple(missing)
    return gaps


# ---------------------------------------------------------------------------
# class templates


def _load_fixed_templates():
    data = json.loads(
        resources.files("exseq.data").joinpath("x2_classes.json").read_text()
    )
    return {
        cls: [tuple(map(tuple, seq)) for seq in data[cls]]
        for cls in ("ii", "iii", "iv", "v")
    }


FIXED_TEMPLATES = _load_fixed_templates()


def class_i_sequence(family: int, a: int) -> tuple[LB, ...]:
    """The three parametric orbit shapes of class i; the fourth point is
    (a, 1) by definition and the free row slides with a."""
    if family == 0:
        return ((0, 0), (1, 0), (2, 0), (a, 1), (a + 1, 1), (a + 2, 1))
    if family == 1:
        return ((0, 0), (1, 0), (a - 1, 1), (a, 1), (a + 1, 1), (1, 2))
    if family == 2:
        return ((0, 0), (a - 2, 1), (a - 1, 1), (a, 1), (0, 2), (1, 2))
    raise ValueError("class i has three orbit shapes, numbered 0..2")


def normalize_set(points) -> tuple[tuple[LB, ...], LB]:
    """Twist a set so its vertical-lex minimum is the origin.

    Returns (canonical sorted tuple, twist), with point = canonical + twist.
    """
    pts = sorted(points, key=vlex_key)
    t = pts[0]
    return tuple(sub(p, t) for p in pts), t


@dataclass(frozen=True)
class MesClassLabel:
    cls: str                 # "i".."v", "i'", "iii'" or "unclassified"
    helix_index: int         # position in the display orbit of the class
    sigma_applied: bool
    twist: LB
    parameter: int | None = None    # class i only

    def sequence(self) -> tuple[LB, ...]:
        """Reconstruct the canonical sequence carrying this label."""
        base = self.cls.rstrip("'")
        if base == "i":
            seq = class_i_sequence(self.helix_index, self.parameter)
        else:
            seq = FIXED_TEMPLATES[base][self.helix_index]
        seq = tuple(add(p, self.twist) for p in seq)
        if self.sigma_applied:
            seq = tuple(sigma(p) for p in seq)
        return seq


def _match_class_i(norm: tuple[LB, ...]):
    """Match a normalised set against the three class-i shapes."""
    rows: dict[int, list[int]] = {}
    for i, j in norm:
        rows.setdefault(j, []).append(i)
    for xs in rows.values():
        xs.sort()
    keys = sorted(rows)
    if keys == [0, 1] and len(rows[0]) == 3 and len(rows[1]) == 3:
        if rows[0] == [0, 1, 2] and rows[1] == list(range(rows[1][0], rows[1][0] + 3)):
            return 0, rows[1][0]
    if keys == [0, 1, 2] and [len(rows[k]) for k in keys] == [2, 3, 1]:
        if rows[0] == [0, 1] and rows[2] == [1] and rows[1][2] - rows[1][0] == 2:
            return 1, rows[1][1]
    if keys == [0, 1, 2] and [len(rows[k]) for k in keys] == [1, 3, 2]:
        if rows[0] == [0] and rows[2] == [0, 1] and rows[1][2] - rows[1][0] == 2:
            return 2, rows[1][2]
    return None


_FIXED_SETS = {
    (cls, idx): normalize_set(seq)
    for cls, seqs in FIXED_TEMPLATES.items()
    for idx, seq in enumerate(seqs)
}


def classify(points) -> MesClassLabel:
    """Classify a six-element MES set on X2.

    The label records (class, position in the display orbit, sigma flag,
    twist, class-i parameter) and reconstructs the input set exactly.  Fixed
    classes take priority over the parametric class i on the overlaps (the
    strongly cyclic instances at a = 1 belong to both).
    """
    pts = frozenset(points.bundles if isinstance(points, ExceptionalSet) else points)
    if len(pts) != 6:
        raise ValueError("classification needs a six-element set")
    for use_sigma in (False, True):
        cur = frozenset(sigma(p) for p in pts) if use_sigma else pts
        norm, base_twist = normalize_set(cur)
        for (cls, idx), (canon, tmpl_twist) in _FIXED_SETS.items():
            if norm == canon:
                return MesClassLabel(
                    cls + ("'" if use_sigma else ""),
                    idx,
                    use_sigma,
                    sub(base_twist, tmpl_twist),
                )
        hit = _match_class_i(norm)
        if hit is not None:
            fam, a = hit
            return MesClassLabel(
                "i" + ("'" if use_sigma else ""), fam, use_sigma, base_twist, parameter=a
            )
    return MesClassLabel("unclassified", -1, False, (0, 0))


def reconstruct(label: MesClassLabel) -> frozenset:
    return frozenset(label.sequence())


def pf0_pairs(spec: VarietySpec, seq) -> frozenset:
    """F minus the effective pairs, as 0-based index pairs of the sequence."""
    f = compute_F(spec, tuple(seq))
    e = eff_relation(spec, tuple(seq))
    return frozenset(f.off_diagonal() - e.off_diagonal())


def helix_rotations(spec: VarietySpec, seq):
    """All rank-many right-helix rotations of a sequence."""
    from .mutations import helix_right

    out = [tuple(seq)]
    for _ in range(len(seq) - 1):
        out.append(helix_right(spec, out[-1]))
    return out


def strongly_cyclic(spec: VarietySpec, seq) -> bool:
    """Strong exceptionality of every helix rotation of the sequence."""
    return all(
        is_strongly_exceptional(spec, rot) for rot in helix_rotations(spec, seq)
    )


# ---------------------------------------------------------------------------
# exhaustive enumeration


def enumerate_mes_x2(window: int = 8, spec: VarietySpec | None = None):
    """All maximal exceptional sets within [-window, window]^2, one canonical
    representative per twist class (vertical-lex minimum at the origin).

    Pruned depth-first search: candidate points must differ immaculately
    from every chosen point in at least one direction, map to distinct
    residues modulo the admissible lattice, respect the shifted-diagonal
    bound, and the forced-pair relation must stay acyclic.
    """
    spec = spec or X2
    return enumerate_mes_sets(spec, window)


def enumerate_mes_sets(spec: VarietySpec, window: int):
    """Generic window enumeration of maximal exceptional sets for any family
    whose canonical sublattice is diagonal (used for X2 and as a brute-force
    cross-check for small toric specs)."""
    from .varieties import rank_k0

    size = rank_k0(spec)
    n_mod = None
    if spec.kind == COTANGENT:
        n_mod = spec.ell + 1
    elif spec.kind == "toric":
        pass  # residues handled generically below when the lattice is diagonal

    origin = (0, 0)
    cands = [
        (i, j)
        for j in range(0, window + 1)
        for i in range(-window, window + 1)
        if (j, i) > (0, 0)
        and (coh.is_immaculate(spec, (i, j)) or coh.is_immaculate(spec, (-i, -j)))
    ]
    cands.sort(key=vlex_key)
    compat = [
        [
            coh.is_immaculate(spec, sub(p, q)) or coh.is_immaculate(spec, sub(q, p))
            for q in cands
        ]
        for p in cands
    ]
    results = []
    chosen: list[int] = []

    def residues_ok(sel):
        if n_mod is None:
            return True
        res = [_residue(p, n_mod) for p in sel]
        if len(set(res)) != len(res):
            return False
        per_diag: dict[int, int] = {}
        for r in res:
            d = (r[1] - r[0]) % n_mod
            per_diag[d] = per_diag.get(d, 0) + 1
            if per_diag[d] > spec.ell:
                return False
        return True

    def valid_full(sel):
        try:
            associated_poset(spec, sel)
        except AntisymmetryError:
            return False
        return True

    def rec(start):
        sel = [origin] + [cands[k] for k in chosen]
        if len(sel) == size:
            if valid_full(sel):
                results.append(exceptional_set(spec, sel))
            return
        for k in range(start, len(cands)):
            if all(compat[k][m] for m in chosen):
                trial = sel + [cands[k]]
                if not residues_ok(trial):
                    continue
                chosen.append(k)
                rec(k + 1)
                chosen.pop()

    rec(0)
    return results
