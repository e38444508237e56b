"""Arithmetic of the twofold cover of Sp_2n(F), p odd.

The cover is classified by the quadratic form

    Q(sum a_i lambda_i) = sum_{i<=n} (a_i^2 + a_i a_{n+1})

on the cocharacter lattice of the ambient similitude torus; B is the
associated bilinear form.  Commutators of lifted torus points are Hilbert
symbols raised to B, and the cocycle restricted to the Siegel Levi sees an
element only through the square class of its GL_n determinant.  For odd
residue characteristic the quadratic Hilbert symbol factors through
F^x / (F^x)^2 = {1, u, pi, u*pi} and is computed by the tame formula; an
independent solvability oracle cross-checks it in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rootdata import Cocharacter


class CoverError(ValueError):
    pass


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class SquareClass:
    """Class in F^x / (F^x)^2 for p odd: (valuation mod 2, unit class).

    `pi_parity` is the valuation mod 2 and `unit_nonsquare` says whether
    the unit part reduces to a nonsquare of the residue field.  The four
    classes multiply by componentwise XOR.
    """

    pi_parity: int
    unit_nonsquare: bool

    def __post_init__(self):
        if self.pi_parity not in (0, 1):
            raise CoverError("pi_parity must be 0 or 1")

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return SquareClass(
            (self.pi_parity + other.pi_parity) % 2,
            self.unit_nonsquare != other.unit_nonsquare,
        )

    def inverse(self) -> "SquareClass":
        return self

    def is_square(self) -> bool:
        return self.pi_parity == 0 and not self.unit_nonsquare

    @property
    def name(self) -> str:
        return {(0, False): "1", (0, True): "u", (1, False): "pi", (1, True): "upi"}[
            (self.pi_parity, self.unit_nonsquare)
        ]

    @staticmethod
    def from_name(name: str) -> "SquareClass":
        try:
            return {
                "1": ONE_CLASS,
                "u": UNIT_CLASS,
                "pi": PI_CLASS,
                "upi": UPI_CLASS,
            }[name]
        except KeyError:
            raise CoverError(f"unknown square class {name!r}; use 1|u|pi|upi")

    def __repr__(self):
        return f"SquareClass({self.name})"


ONE_CLASS = SquareClass(0, False)
UNIT_CLASS = SquareClass(0, True)
PI_CLASS = SquareClass(1, False)
UPI_CLASS = SquareClass(1, True)
ALL_CLASSES = (ONE_CLASS, UNIT_CLASS, PI_CLASS, UPI_CLASS)


@dataclass(frozen=True)
class LocalFieldDescriptor:
    """A nonarchimedean local field with odd residue characteristic p and
    residue field of size q = p^f, together with a marked uniformizer and
    a marked nonsquare unit class.

    For f = 1 the nonsquare unit is realized by `nonsquare_unit`, the
    smallest positive quadratic nonresidue mod p (any choice gives
    isomorphic data; the symbol only sees the class).
    """

    p: int
    f: int = 1

    def __post_init__(self):
        if not _is_prime(self.p) or self.p == 2:
            raise CoverError(f"p must be an odd prime, got {self.p}")
        if self.f < 1:
            raise CoverError("f must be >= 1")

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def nonsquare_unit(self) -> int:
        if self.f != 1:
            raise CoverError("explicit nonsquare unit only realized for f = 1")
        for u in range(2, self.p):
            if pow(u, (self.p - 1) // 2, self.p) == self.p - 1:
                return u
        raise CoverError("no nonresidue found")  # unreachable for odd p

    def residue_char_minus_one(self) -> int:
        """Quadratic character of -1: +1 iff q = 1 mod 4."""
        return 1 if self.q % 4 == 1 else -1

    def square_class_of(self, x: int, val: int = 0) -> SquareClass:
        """Class of x * pi^val for a nonzero integer x prime to p (f = 1)."""
        if self.f != 1:
            raise CoverError("integer reduction only available for f = 1")
        if x % self.p == 0:
            raise CoverError("unit part must be prime to p")
        nonsq = pow(x, (self.p - 1) // 2, self.p) == self.p - 1
        return SquareClass(val % 2, nonsq)


@dataclass(frozen=True)
class QuadraticFormQ:
    """The cover-classifying quadratic form on the similitude cocharacters."""

    n: int

    def __call__(self, lam: Cocharacter) -> int:
        return eval_Q(lam)


def eval_Q(lam: Cocharacter) -> int:
    """Q(sum a_i lambda_i + a_{n+1} lambda_{n+1}) = sum (a_i^2 + a_i a_{n+1})."""
    return sum(a * a + a * lam.gsp for a in lam.coords)


def eval_B(lam: Cocharacter, lam2: Cocharacter) -> int:
    """The bilinear form Q(x + y) - Q(x) - Q(y)."""
    return eval_Q(lam + lam2) - eval_Q(lam) - eval_Q(lam2)


def hilbert(x: SquareClass, y: SquareClass, F: LocalFieldDescriptor) -> int:
    """The quadratic Hilbert symbol (x, y)_F by the tame formula.

    For x = pi^a u_x and y = pi^b u_y the symbol is the quadratic residue
    character of (-1)^{ab} u_x^b u_y^a; valid exactly because p is odd.
    """
    a, b = x.pi_parity, y.pi_parity
    sign = 1
    if a and b and F.residue_char_minus_one() == -1:
        sign = -sign
    if b and x.unit_nonsquare:
        sign = -sign
    if a and y.unit_nonsquare:
        sign = -sign
    return sign


def commutator_sign(
    lam: Cocharacter, x: SquareClass, lam2: Cocharacter, y: SquareClass, F
) -> int:
    """Commutator of lifts of lam(x) and lam2(y): (x, y)_F ** B(lam, lam2)."""
    return hilbert(x, y, F) if eval_B(lam, lam2) % 2 else 1


def splits_over_Mprime(i: int, n: int) -> bool:
    """Whether the cover splits over the rank-one subgroup of alpha_i.

    True exactly for the short simple roots, equivalently when
    Q(alpha_i^vee) is even.
    """
    if not 1 <= i <= n:
        raise CoverError(f"index {i} out of range 1..{n}")
    return i != n


def rao_siegel_product(
    d: SquareClass, zeta: int, d2: SquareClass, zeta2: int, F
) -> tuple[SquareClass, int]:
    """Product in the Siegel-Levi cover, elements seen through
    (determinant square class, mu_2 part):

        (m, zeta) (m', zeta') = (m m', (det m, det m')_F zeta zeta').
    """
    if zeta not in (1, -1) or zeta2 not in (1, -1):
        raise CoverError("mu_2 components must be +1 or -1")
    return d * d2, hilbert(d, d2, F) * zeta * zeta2


@dataclass(frozen=True)
class HilbertCharacter:
    """The character x -> (x, a)_F of F^x, the multiplier by which a change
    of additive character acts on torus data through the square class a.

    Trivial exactly when a is a square.
    """

    a: SquareClass
    F: LocalFieldDescriptor

    def __call__(self, x: SquareClass) -> int:
        return hilbert(x, self.a, self.F)

    @property
    def is_trivial(self) -> bool:
        return self.a.is_square()


def psi_ratio_character(a: SquareClass, F: LocalFieldDescriptor) -> HilbertCharacter:
    """Ratio of the genuine characters attached to psi_a and psi."""
    return HilbertCharacter(a, F)


def hilbert_solvable(x: SquareClass, y: SquareClass, F: LocalFieldDescriptor) -> int:
    """Independent oracle for the symbol: (x, y)_F = 1 iff
    z^2 = x X^2 + y Y^2 has a nontrivial solution over F.

    Realized by exhausting primitive triples over Z/p^4 (f = 1): a
    primitive solution mod p^4 Hensel-lifts since some gradient coordinate
    has valuation <= 1, and conversely a field solution scales to a
    primitive integral one.  Intended for tests and --verify, not hot paths.
    """
    import numpy as np

    if F.f != 1:
        raise CoverError("solvability oracle runs over Q_p only (f = 1)")
    p = F.p
    mod = p**4
    xv = pow(p, x.pi_parity) * (F.nonsquare_unit if x.unit_nonsquare else 1)
    yv = pow(p, y.pi_parity) * (F.nonsquare_unit if y.unit_nonsquare else 1)
    squares = np.zeros(mod, dtype=bool)
    z = np.arange(mod, dtype=np.int64)
    squares[(z * z) % mod] = True
    X = np.arange(mod, dtype=np.int64)
    x_sq = (xv * X * X) % mod
    y_sq = (yv * X * X) % mod
    primitive = (X % p) != 0
    # split by which of X, Y is a unit so the pair stays primitive
    for a_vals, b_vals in ((x_sq[primitive], y_sq), (x_sq[~primitive], y_sq[primitive])):
        if a_vals.size == 0:
            continue
        sums = (np.unique(a_vals)[:, None] + np.unique(b_vals)[None, :]) % mod
        if squares[sums].any():
            return 1
    return -1
