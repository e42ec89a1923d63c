"""Minimal intersection arithmetic on A(P(E)) for a bundle E over P^ell.

The ring is Z[h, H'] / (h^(ell+1), H'^r + c_1(E) H'^(r-1) + ... + c_r(E)),
with the Chern classes c_i(E) entering through their coefficient against
h^i.  This is exactly enough to certify the kernel computation behind the
certified three-term rewrites: total Chern classes multiply along short
exact sequences and divide via geometric series.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ChowElement:
    """Integer coefficients of the monomials h^a H'^b, reduced."""

    ring: "ChowRing"
    coeffs: tuple  # coeffs[a][b]

    def __add__(self, other):
        self._compat(other)
        return ChowElement(
            self.ring,
            tuple(
                tuple(x + y for x, y in zip(ra, rb))
                for ra, rb in zip(self.coeffs, other.coeffs)
            ),
        )

    def __sub__(self, other):
        self._compat(other)
        return ChowElement(
            self.ring,
            tuple(
                tuple(x - y for x, y in zip(ra, rb))
                for ra, rb in zip(self.coeffs, other.coeffs)
            ),
        )

    def __mul__(self, other):
        if isinstance(other, int):
            return ChowElement(
                self.ring, tuple(tuple(x * other for x in row) for row in self.coeffs)
            )
        self._compat(other)
        return self.ring._multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, ChowElement)
            and self.ring is other.ring
            and self.coeffs == other.coeffs
        )

    def _compat(self, other):
        if self.ring is not other.ring:
            raise ValueError("elements of different Chow rings")

    def coefficient(self, a: int, b: int) -> int:
        return self.coeffs[a][b]

    def is_unit_normalised(self) -> bool:
        return self.coeffs[0][0] in (1, -1)

    def __repr__(self):
        terms = []
        for a, row in enumerate(self.coeffs):
            for b, x in enumerate(row):
                if x:
                    mon = "".join(
                        [f"h^{a}" if a > 1 else "h" * a, f"H'^{b}" if b > 1 else "H'" * b]
                    )
                    terms.append(f"{x}{mon}" if mon else str(x))
        return " + ".join(terms) if terms else "0"


class ChowRing:
    """A(P(E)) for E of rank = len(chern) on P^ell; chern = (c_1, ..., c_r)
    as integers against powers of h."""

    def __init__(self, ell: int, chern):
        self.ell = ell
        self.chern = tuple(int(x) for x in chern)
        self.rank = len(self.chern)
        if self.rank < 1:
            raise ValueError("rank must be at least 1")

    def zero(self) -> ChowElement:
        return ChowElement(
            self, tuple(tuple(0 for _ in range(self.rank)) for _ in range(self.ell + 1))
        )

    def element(self, monomials: dict) -> ChowElement:
        rows = [[0] * self.rank for _ in range(self.ell + 1)]
        for (a, b), x in monomials.items():
            rows[a][b] += x
        return ChowElement(self, tuple(map(tuple, rows)))

    def one(self) -> ChowElement:
        return self.element({(0, 0): 1})

    def line_class(self, i: int, j: int) -> ChowElement:
        """The total Chern class 1 + i*h + j*H' of O(i*h + j*H')."""
        out = {(0, 0): 1}
        if self.ell >= 1:
            out[(1, 0)] = i
        if self.rank >= 2:
            out[(0, 1)] = j
        return self.element(out)

    def _reduce_hp(self, b: int) -> dict:
        """Rewrite H'^b, b >= rank, into the monomial basis."""
        if b < self.rank:
            return {(0, b): 1}
        lower = {}
        # H'^rank = - sum_i c_i h^i H'^(rank - i)
        for i, c in enumerate(self.chern, start=1):
            if c == 0:
                continue
            for (a2, b2), x in self._reduce_hp(b - i).items():
                a = a2 + i
                if a <= self.ell:
                    lower[(a, b2)] = lower.get((a, b2), 0) - c * x
        return lower

    def _multiply(self, x: ChowElement, y: ChowElement) -> ChowElement:
        acc: dict = {}
        for a1, row1 in enumerate(x.coeffs):
            for b1, c1 in enumerate(row1):
                if not c1:
                    continue
                for a2, row2 in enumerate(y.coeffs):
                    if a1 + a2 > self.ell:
                        break
                    for b2, c2 in enumerate(row2):
                        if not c2:
                            continue
                        for (ra, rb), rx in self._reduce_hp(b1 + b2).items():
                            a = a1 + a2 + ra
                            if a <= self.ell:
                                key = (a, rb)
                                acc[key] = acc.get(key, 0) + c1 * c2 * rx
        return self.element(acc)

    def invert_unit(self, x: ChowElement) -> ChowElement:
        """Inverse of an element with constant term +-1, via geometric series
        (the augmentation-positive part is nilpotent)."""
        u = x.coefficient(0, 0)
        if u not in (1, -1):
            raise ValueError("constant term must be a unit")
        n = x - self.element({(0, 0): u})  # nilpotent part
        out = self.one()
        term = self.one()
        for _ in range(self.ell + self.rank):
            term = term * n * (-u)
            out = out + term
        return out * u

    def divide(self, numerator: ChowElement, denominator: ChowElement) -> ChowElement:
        return numerator * self.invert_unit(denominator)


def chow_ring(ell: int, chern) -> ChowRing:
    return ChowRing(ell, chern)


def divide_total_chern(numerator: ChowElement, denominator: ChowElement) -> ChowElement:
    return numerator.ring.divide(numerator, denominator)


def tangent_chern(ell: int):
    """c(T_P^ell) = (1+h)^(ell+1) truncated: coefficients c_1..c_ell."""
    from .cohomology import binom

    return tuple(binom(ell + 1, k) for k in range(1, ell + 1))


def verify_banana_ses(ell: int = 2) -> bool:
    """Certify the short exact sequence behind the certified rewrites.

    In A(P(T_P^2)) = Z[h,H']/(h^3, H'^2 + 3hH' + 3h^2) the kernel of the
    tautological map pi^* Omega -> O(H') has total Chern class
    (1 - 3h + 3h^2)/(1 + H') = 1 - 3h - H', i.e. the kernel is O(-3h - H');
    rewriting through H = 2h + H' this is the sequence
    0 -> O(-h-H) -> pi^* Omega -> O(-2h+H) -> 0 in nef coordinates.
    """
    if ell != 2:
        raise ValueError("only the ell = 2 instance is certified")
    ring = chow_ring(2, tangent_chern(2))
    c_omega = ring.element({(0, 0): 1, (1, 0): -3, (2, 0): 3})
    kernel = ring.divide(c_omega, ring.line_class(0, 1))
    if kernel != ring.line_class(-3, -1):
        return False
    if kernel * ring.line_class(0, 1) != c_omega:
        return False
    # coordinate change H = 2h + H': (i, j) nef = (i + 2j) h + j H'
    def to_primed(i, j):
        return (i + 2 * j, j)

    def to_nef(a, b):
        return (a - 2 * b, b)

    for p in [(-1, -1), (-2, 1), (5, -3), (0, 0)]:
        if to_nef(*to_primed(*p)) != p:
            return False
    if to_primed(-1, -1) != (-3, -1) or to_primed(-2, 1) != (0, 1):
        return False
    return True
