"""Smooth mod-p characters of F^x and genuine characters of the covering
torus.

A smooth character of F^x with values in roots of unity of order prime to
p kills 1 + pi*O, so it is determined by its restriction to the residue
units (an exponent mod q - 1 through a fixed generator) and its value at
the uniformizer.  Values live in a fixed finite cyclic group Z/N written
additively; N must be even so the +-1-valued Hilbert characters embed.

A genuine character of the covering torus is stored as the pair
(xi, psi_class) realizing the twist bijection xi -> xi (x) chi_psi: xi is
an n-tuple of smooth characters along the lambda_i = e_i coordinates and
psi_class records which square class of additive character was used.
chi_psi is trivial on the images of the short coroots, so restriction to
a short coroot is an honest character and never sees psi; the long coroot
section is not a homomorphism and is deliberately not represented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cover import LocalFieldDescriptor, SquareClass, hilbert, PI_CLASS


class CharacterError(ValueError):
    pass


def _prime_of(q: int) -> int:
    """The prime p with q = p^f."""
    d = 2
    while d * d <= q:
        if q % d == 0:
            while q % d == 0:
                q //= d
            if q != 1:
                raise CharacterError("q is not a prime power")
            return d
        d += 1
    return q


@dataclass(frozen=True)
class SmoothCharacterFx:
    """Smooth character of F^x: unit-part exponent mod q - 1 and value at
    the uniformizer, an element of Z/N (additively)."""

    q: int
    N: int
    unit_exp: int
    pi_exp: int

    def __post_init__(self):
        if self.N % 2 != 0:
            raise CharacterError("value group order N must be even")
        if (self.q - 1) % 2 != 0 or self.q < 3:
            raise CharacterError("q must be an odd prime power >= 3")
        if math.gcd(self.N, _prime_of(self.q)) != 1:
            raise CharacterError("N must be coprime to the residue characteristic")
        object.__setattr__(self, "unit_exp", self.unit_exp % (self.q - 1))
        object.__setattr__(self, "pi_exp", self.pi_exp % self.N)

    def _check(self, other: "SmoothCharacterFx"):
        if (self.q, self.N) != (other.q, other.N):
            raise CharacterError("characters live over different (q, N)")

    def __mul__(self, other: "SmoothCharacterFx") -> "SmoothCharacterFx":
        self._check(other)
        return SmoothCharacterFx(
            self.q, self.N, self.unit_exp + other.unit_exp, self.pi_exp + other.pi_exp
        )

    def inverse(self) -> "SmoothCharacterFx":
        return SmoothCharacterFx(self.q, self.N, -self.unit_exp, -self.pi_exp)

    @property
    def is_trivial(self) -> bool:
        return self.unit_exp == 0 and self.pi_exp == 0

    @staticmethod
    def trivial(q: int, N: int) -> "SmoothCharacterFx":
        return SmoothCharacterFx(q, N, 0, 0)


def default_value_group_order(q: int) -> int:
    """lcm(q - 1, 2): big enough for residue duals and Hilbert characters."""
    return math.lcm(q - 1, 2)


def hilbert_smooth_character(
    c: SquareClass, F: LocalFieldDescriptor, N: int
) -> SmoothCharacterFx:
    """The character x -> (x, c)_F of F^x inside the (q, N) model.

    On units it is the quadratic character of the residue field when c has
    odd valuation (exponent (q-1)/2) and trivial otherwise; the value at
    the uniformizer is the symbol (pi, c)_F.
    """
    q = F.q
    unit_exp = ((q - 1) // 2) * c.pi_parity
    pi_exp = 0 if hilbert(PI_CLASS, c, F) == 1 else N // 2
    return SmoothCharacterFx(q, N, unit_exp, pi_exp)


@dataclass(frozen=True)
class GenuineTorusCharacter:
    """Genuine character of the covering torus: xi (x) chi_{psi_a}."""

    xi: tuple[SmoothCharacterFx, ...]
    psi_class: SquareClass

    def __post_init__(self):
        if not self.xi:
            raise CharacterError("rank must be >= 1")
        q, N = self.xi[0].q, self.xi[0].N
        if any((x.q, x.N) != (q, N) for x in self.xi):
            raise CharacterError("mixed (q, N) inside one torus character")
        object.__setattr__(self, "xi", tuple(self.xi))

    @property
    def rank(self) -> int:
        return len(self.xi)

    @staticmethod
    def unramified_trivial(n: int, q: int, N: int, psi_class=None):
        from .cover import ONE_CLASS

        return GenuineTorusCharacter(
            tuple(SmoothCharacterFx.trivial(q, N) for _ in range(n)),
            ONE_CLASS if psi_class is None else psi_class,
        )


def restrict_short_coroot(sigma: GenuineTorusCharacter, i: int) -> SmoothCharacterFx:
    """The character x -> sigma(lift of alpha_i^vee(x)) for a short simple
    root, which is xi_i * xi_{i+1}^{-1} since chi_psi drops out.

    The long coroot is rejected: its lift is not a homomorphism, so no
    honest character exists there.
    """
    n = sigma.rank
    if not 1 <= i <= n - 1:
        raise CharacterError(
            f"short coroot index must satisfy 1 <= i <= {n - 1}, got {i}"
        )
    return sigma.xi[i - 1] * sigma.xi[i].inverse()


def genuine_equal(
    sigma: GenuineTorusCharacter, sigma2: GenuineTorusCharacter, F: LocalFieldDescriptor
) -> bool:
    """Equality of xi (x) chi_{psi_a} and xi' (x) chi_{psi_a'}.

    Changing the additive character by the class c = a a'^{-1} twists every
    coordinate by the Hilbert character ( . , c)_F, so equality means
    xi'_i = xi_i * ( . , c)_F for all i.
    """
    if sigma.rank != sigma2.rank:
        raise CharacterError("rank mismatch")
    c = sigma.psi_class * sigma2.psi_class
    twist = hilbert_smooth_character(c, F, sigma.xi[0].N)
    return all(x2 == x * twist for x, x2 in zip(sigma.xi, sigma2.xi))


def supersingular_flags_from_character(sigma: GenuineTorusCharacter) -> dict[int, bool]:
    """Triviality flags on the short simple roots: flag[i] says whether the
    short-coroot restriction at i is trivial.  The long root never flags
    (genuineness forbids it) and is therefore omitted here; datum builders
    add the forced False entry when the long root is eligible."""
    n = sigma.rank
    return {i: restrict_short_coroot(sigma, i).is_trivial for i in range(1, n)}
