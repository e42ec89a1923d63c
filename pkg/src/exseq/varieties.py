"""Variety specifications and the rank-2 Picard lattice.

Three families are supported, all projective bundles over P^ell:

* ``toric``        -- P(O + O(c^1) + ... + O(c^V)) with 0 >= c^1 >= ... >= c^V,
* ``cotangent``    -- the projectivised (twisted) cotangent bundle of P^ell,
* ``tangent_dual`` -- the projectivised (twisted) tangent bundle of P^ell.

Line bundles are integer pairs (i, j) in nef coordinates: i is the
coefficient of the pulled-back hyperplane class h, j the coefficient of the
relative hyperplane class H.  For all three families the natural coordinates
are nef, so no coordinate conversion is ever performed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd, inf

LB = tuple[int, int]


def add(a: LB, b: LB) -> LB:
    return (a[0] + b[0], a[1] + b[1])


def sub(a: LB, b: LB) -> LB:
    return (a[0] - b[0], a[1] - b[1])


def neg(a: LB) -> LB:
    return (-a[0], -a[1])


def vlex_key(p: LB):
    """Sort key for the vertical lexicographic order (rows first)."""
    return (p[1], p[0])


def sigma(p: LB) -> LB:
    """The Picard involution (i, j) -> (j, i)."""
    return (p[1], p[0])


TORIC = "toric"
COTANGENT = "cotangent"
TANGENT_DUAL = "tangent_dual"


@dataclass(frozen=True)
class VarietySpec:
    """Which bundle family a computation runs on, with numeric parameters.

    For ``toric``, ``v`` is the fiber dimension and ``c`` the twist vector
    (c^1, ..., c^V); the trivial summand c^0 = 0 is normalised away.  For the
    two (co)tangent families only ``ell`` is meaningful.
    """

    kind: str
    ell: int
    v: int = 0
    c: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in (TORIC, COTANGENT, TANGENT_DUAL):
            raise ValueError(f"unknown variety kind {self.kind!r}")
        if self.kind == TORIC:
            if self.ell < 1 or self.v < 1:
                raise ValueError("toric spec needs ell >= 1 and v >= 1")
            if len(self.c) != self.v:
                raise ValueError(f"twist vector must have {self.v} entries")
            if any(x > 0 for x in self.c):
                raise ValueError("twists must be <= 0 (normalise c^0 = 0 away)")
            if any(self.c[k] < self.c[k + 1] for k in range(self.v - 1)):
                raise ValueError("twists must be weakly decreasing")
            if self.beta > self.alpha * self.v:
                raise ValueError("effective inequality beta <= alpha*V violated")
        else:
            if self.ell < 2:
                raise ValueError(f"{self.kind} spec needs ell >= 2")
            if self.v or self.c:
                raise ValueError(f"{self.kind} spec takes only ell")

    @property
    def alpha(self) -> int:
        return -self.c[-1]

    @property
    def beta(self) -> int:
        return -sum(self.c)

    def to_json(self) -> dict:
        if self.kind == TORIC:
            return {"kind": TORIC, "ell": self.ell, "v": self.v, "c": list(self.c)}
        return {"kind": self.kind, "ell": self.ell}


def toric(ell: int, v: int, c) -> VarietySpec:
    """Toric spec X(ell, V; c).

    ``c`` may have V entries (c^1..c^V) or V+1 entries with a leading 0,
    matching the two conventions in circulation; the leading 0 is dropped.
    """
    c = tuple(int(x) for x in c)
    if len(c) == v + 1 and c[0] == 0:
        c = c[1:]
    return VarietySpec(TORIC, ell, v, c)


def cotangent(ell: int) -> VarietySpec:
    return VarietySpec(COTANGENT, ell)


def tangent_dual(ell: int) -> VarietySpec:
    return VarietySpec(TANGENT_DUAL, ell)


def spec_from_json(data) -> VarietySpec:
    if isinstance(data, str):
        data = json.loads(data)
    kind = data.get("kind")
    if kind == TORIC:
        return toric(data["ell"], data["v"], data["c"])
    if kind == COTANGENT:
        return cotangent(data["ell"])
    if kind == TANGENT_DUAL:
        return tangent_dual(data["ell"])
    raise ValueError(f"unknown variety kind {kind!r}")


def dim_variety(spec: VarietySpec) -> int:
    """ell + V for the toric family, 2*ell - 1 for the flag-type families."""
    if spec.kind == TORIC:
        return spec.ell + spec.v
    return 2 * spec.ell - 1


def fiber_dim(spec: VarietySpec) -> int:
    """Dimension of the projective-bundle fibers."""
    if spec.kind == TORIC:
        return spec.v
    return spec.ell - 1


def rank_k0(spec: VarietySpec) -> int:
    """Rank of the Grothendieck group, i.e. the length of any maximal
    exceptional sequence."""
    if spec.kind == TORIC:
        return (spec.ell + 1) * (spec.v + 1)
    return spec.ell * (spec.ell + 1)


def canonical_bundle(spec: VarietySpec) -> LB:
    if spec.kind == TORIC:
        return (spec.beta - spec.ell - 1, -spec.v - 1)
    if spec.kind == COTANGENT:
        return (-spec.ell, -spec.ell)
    return (-2, -spec.ell)


@dataclass(frozen=True)
class Cone2:
    """A rational cone in Pic(X) spanned by two primitive generators."""

    gen1: LB
    gen2: LB

    def contains(self, p: LB) -> bool:
        # p = s*gen1 + t*gen2 with s, t >= 0, decided by the two determinants
        d = self.gen1[0] * self.gen2[1] - self.gen1[1] * self.gen2[0]
        s = p[0] * self.gen2[1] - p[1] * self.gen2[0]
        t = self.gen1[0] * p[1] - self.gen1[1] * p[0]
        if d < 0:
            d, s, t = -d, -s, -t
        return s >= 0 and t >= 0


def effective_cone(spec: VarietySpec) -> Cone2:
    if spec.kind == TORIC:
        return Cone2((1, 0), (-spec.alpha, 1))
    return Cone2((1, 0), (0, 1))


def nef_cone(spec: VarietySpec) -> Cone2:
    return Cone2((1, 0), (0, 1))


def leq_nef(a: LB, b: LB) -> bool:
    """Componentwise order induced by the nef cone."""
    return a[0] <= b[0] and a[1] <= b[1]


def leq_eff(spec: VarietySpec, a: LB, b: LB) -> bool:
    return effective_cone(spec).contains(sub(b, a))


# ---------------------------------------------------------------------------
# sublattices and quotients


@dataclass(frozen=True)
class Sublattice:
    """Full-rank sublattice of Pic(X) = Z^2, given by two generators."""

    gen1: LB
    gen2: LB

    def __post_init__(self):
        if self.det == 0:
            raise ValueError("sublattice generators must be independent")

    @property
    def det(self) -> int:
        return self.gen1[0] * self.gen2[1] - self.gen1[1] * self.gen2[0]

    def contains(self, p: LB) -> bool:
        d = self.det
        s = p[0] * self.gen2[1] - p[1] * self.gen2[0]
        t = self.gen1[0] * p[1] - self.gen1[1] * p[0]
        return s % d == 0 and t % d == 0


def _egcd(a, b):
    """Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def smith_normal_form(m11, m12, m21, m22):
    """Smith normal form of a 2x2 integer matrix M (columns = generators).

    Returns (U, (d1, d2)) with U unimodular, 0 < d1 | d2 and U*M*V
    diagonal for a suitable unimodular V.  Only the row transform U is
    needed downstream (it computes residues in Z/d1 x Z/d2).
    """
    m = [[m11, m12], [m21, m22]]
    u = [[1, 0], [0, 1]]

    def rowstep():
        if m[0][0] == 0 and m[1][0] != 0:
            m[0], m[1] = m[1], m[0]
            u[0], u[1] = u[1], u[0]
        if m[1][0] == 0:
            return
        if m[1][0] % m[0][0] == 0:
            q = m[1][0] // m[0][0]
            m[1] = [a - q * b for a, b in zip(m[1], m[0])]
            u[1] = [a - q * b for a, b in zip(u[1], u[0])]
        else:
            g, x, y = _egcd(m[0][0], m[1][0])
            p, q = -m[1][0] // g, m[0][0] // g
            m[0], m[1] = (
                [x * m[0][0] + y * m[1][0], x * m[0][1] + y * m[1][1]],
                [p * m[0][0] + q * m[1][0], p * m[0][1] + q * m[1][1]],
            )
            u[0], u[1] = (
                [x * u[0][0] + y * u[1][0], x * u[0][1] + y * u[1][1]],
                [p * u[0][0] + q * u[1][0], p * u[0][1] + q * u[1][1]],
            )

    def colstep():
        if m[0][0] == 0 and m[0][1] != 0:
            for row in m:
                row[0], row[1] = row[1], row[0]
        if m[0][1] == 0:
            return
        if m[0][1] % m[0][0] == 0:
            q = m[0][1] // m[0][0]
            for row in m:
                row[1] -= q * row[0]
        else:
            g, x, y = _egcd(m[0][0], m[0][1])
            p, q = -m[0][1] // g, m[0][0] // g
            for row in m:
                row[0], row[1] = x * row[0] + y * row[1], p * row[0] + q * row[1]

    for _ in range(64):
        rowstep()
        colstep()
        if m[1][0] == 0 and m[0][1] == 0:
            if m[0][0] and m[1][1] % m[0][0] == 0:
                break
            # expose the divisibility defect to the next gcd round
            m[0][0] += m[1][0]
            m[0][1] += m[1][1]
            u[0][0] += u[1][0]
            u[0][1] += u[1][1]
    else:  # pragma: no cover
        raise ArithmeticError("Smith normal form did not converge")
    if m[1][1] < 0:
        m[1][1] = -m[1][1]
        u[1][0], u[1][1] = -u[1][0], -u[1][1]
    if m[0][0] < 0:
        m[0][0] = -m[0][0]
        u[0][0], u[0][1] = -u[0][0], -u[0][1]
    return (tuple(u[0]), tuple(u[1])), (m[0][0], m[1][1])


@dataclass(frozen=True)
class QuotientClass:
    """A residue class in Pic(X)/Lambda, stored in Smith normal form."""

    residues: tuple[int, int]
    orders: tuple[int, int]

    def __post_init__(self):
        r, d = self.residues, self.orders
        if not (0 <= r[0] < d[0] and 0 <= r[1] < d[1]):
            raise ValueError("residues not reduced")


class QuotientMap:
    """The projection Pic(X) -> Pic(X)/Lambda for a full-rank sublattice."""

    def __init__(self, lam: Sublattice):
        self.lattice = lam
        g1, g2 = lam.gen1, lam.gen2
        if g1[1] == 0 and g2[0] == 0 or g1[0] == 0 and g2[1] == 0:
            # diagonal lattice: keep the natural mod reduction when possible
            if g1[0] == 0:
                g1, g2 = g2, g1
            a, b = abs(g1[0]), abs(g2[1])
            if b % a == 0:
                self._u, self.orders = ((1, 0), (0, 1)), (a, b)
                return
            if a % b == 0:
                self._u, self.orders = ((0, 1), (1, 0)), (b, a)
                return
        u, orders = smith_normal_form(g1[0], g2[0], g1[1], g2[1])
        self._u = u
        self.orders = orders

    @property
    def group_order(self) -> int:
        return self.orders[0] * self.orders[1]

    def __call__(self, p: LB) -> QuotientClass:
        (a, b), (c, e) = self._u
        return QuotientClass(
            ((a * p[0] + b * p[1]) % self.orders[0],
             (c * p[0] + e * p[1]) % self.orders[1]),
            self.orders,
        )


def quotient_project(lam: Sublattice, p: LB) -> QuotientClass:
    return QuotientMap(lam)(p)


def canonical_sublattice(spec: VarietySpec) -> Sublattice:
    """The admissible sublattice used throughout for each family."""
    if spec.kind == TORIC:
        return Sublattice(canonical_bundle(spec), (-spec.ell - 1, 0))
    n = spec.ell + 1
    return Sublattice((-n, 0), (0, -n))


# ---------------------------------------------------------------------------
# exact admissibility test
#
# The immaculate locus of every supported family is a finite union of
# "pieces": either a strip (one integral linear form bounded, the transverse
# direction free) or an explicitly finite set of lattice points.  A sublattice
# is admissible iff it meets no piece in a nonzero point, which is decidable
# by solving one linear Diophantine equation per bounded value.


@dataclass(frozen=True)
class StripPiece:
    form: LB          # the bounded linear form (a, b) -> a*i + b*j
    lo: int
    hi: int


@dataclass(frozen=True)
class FinitePiece:
    points: tuple[LB, ...]


def immaculate_pieces(spec: VarietySpec):
    """Decompose Imm(X) into strips and finite point sets."""
    ell = spec.ell
    if spec.kind == COTANGENT:
        return [
            StripPiece((1, 0), -ell + 1, -1),
            StripPiece((0, 1), -ell + 1, -1),
            StripPiece((1, 1), -ell, -ell),
        ]
    if spec.kind == TANGENT_DUAL:
        return [
            StripPiece((1, 0), -1, -1),
            StripPiece((0, 1), -ell + 1, -1),
            StripPiece((1, 1), -ell, -2),
        ]
    a, b, v = spec.alpha, spec.beta, spec.v
    pieces = [StripPiece((0, 1), -v, -1)]
    if a == 0:
        pieces.append(StripPiece((1, 0), -ell, -1))
        return pieces
    up, down = [], []
    k = canonical_bundle(spec)
    j = 0
    while a * j <= ell - 1:
        for i in range(-ell, -a * j):
            up.append((i, j))
            down.append(sub(k, (i, j)))
        j += 1
    pieces.append(FinitePiece(tuple(up)))
    pieces.append(FinitePiece(tuple(down)))
    return pieces


def _strip_meets_lattice(lam: Sublattice, piece: StripPiece) -> bool:
    """Does the strip contain a nonzero lattice point?  Exact, no windows."""
    f = piece.form
    a = f[0] * lam.gen1[0] + f[1] * lam.gen1[1]
    b = f[0] * lam.gen2[0] + f[1] * lam.gen2[1]
    if a == 0 and b == 0:
        # the form vanishes on the whole lattice
        return piece.lo <= 0 <= piece.hi
    g = gcd(a, b)
    return any(val % g == 0 for val in range(piece.lo, piece.hi + 1))


def is_admissible(spec: VarietySpec, lam: Sublattice) -> bool:
    """True iff no nonzero point of the sublattice is (anti-)immaculate.

    Since -Lambda = Lambda it suffices to intersect with Imm(X) itself.
    """
    for piece in immaculate_pieces(spec):
        if isinstance(piece, StripPiece):
            if _strip_meets_lattice(lam, piece):
                return False
        else:
            for p in piece.points:
                if p != (0, 0) and lam.contains(p):
                    return False
    return True


def serre_dual(spec: VarietySpec, p: LB) -> LB:
    return sub(canonical_bundle(spec), p)


INF = inf
