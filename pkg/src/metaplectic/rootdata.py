"""Exact combinatorics of the type C_n root datum.

Conventions.  Everything is written in the orthonormal realization: the
character lattice X^*(T) has basis eps_1, ..., eps_n and the cocharacter
lattice X_*(T) has the dual basis e_1, ..., e_n, so the perfect pairing is
the dot product.  Simple roots are

    alpha_i = eps_i - eps_{i+1}   (1 <= i < n,  short),
    alpha_n = 2 eps_n             (long),

with coroots alpha_i^vee = e_i - e_{i+1} and alpha_n^vee = e_n.  Unwinding
the recursive bases 2*chi_n = alpha_n, chi_i = alpha_i + chi_{i+1} and
lambda_n = alpha_n^vee, lambda_i = alpha_i^vee + lambda_{i+1} gives
chi_i = eps_i and lambda_i = e_i, so "coordinates in the chi/lambda basis"
coincide with the eps/e coordinates.  (The recursion for lambda_i is read
with alpha_i^vee, forced by types; see the ledger.)

The Weyl group is the group of signed permutations of the coordinates.
A cocharacter is antidominant when its coordinates are ascending and the
last one is <= 0.

A Cocharacter may carry one extra integer `gsp`, the coefficient of the
similitude cocharacter lambda_{n+1} of the ambient similitude group; the
root datum operations here ignore it (it pairs to zero with X^*(T)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction


class RootDatumError(ValueError):
    pass


@dataclass(frozen=True)
class Character:
    """Element of X^*(T) in eps coordinates (equivalently the chi_i basis)."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __add__(self, other: "Character") -> "Character":
        _check_rank(self, other)
        return Character(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Character") -> "Character":
        _check_rank(self, other)
        return Character(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Character":
        return Character(tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> "Character":
        return Character(tuple(k * a for a in self.coords))

    __rmul__ = __mul__


@dataclass(frozen=True)
class Cocharacter:
    """Element of X_*(T) in e coordinates (equivalently the lambda_i basis).

    `gsp` is the optional coefficient of the similitude cocharacter
    lambda_{n+1}; it is 0 for honest cocharacters of the symplectic torus.
    """

    coords: tuple[int, ...]
    gsp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __add__(self, other: "Cocharacter") -> "Cocharacter":
        _check_rank(self, other)
        return Cocharacter(
            tuple(a + b for a, b in zip(self.coords, other.coords)),
            self.gsp + other.gsp,
        )

    def __sub__(self, other: "Cocharacter") -> "Cocharacter":
        _check_rank(self, other)
        return Cocharacter(
            tuple(a - b for a, b in zip(self.coords, other.coords)),
            self.gsp - other.gsp,
        )

    def __neg__(self) -> "Cocharacter":
        return Cocharacter(tuple(-a for a in self.coords), -self.gsp)

    def __mul__(self, k: int) -> "Cocharacter":
        return Cocharacter(tuple(k * a for a in self.coords), k * self.gsp)

    __rmul__ = __mul__

    def coroot_coordinates(self) -> tuple[int, ...]:
        """Coordinates in the coroot basis (exists and is unique since
        X_*(T) = sum Z alpha_i^vee for the simply connected group).

        With alpha_i^vee = e_i - e_{i+1} and alpha_n^vee = e_n these are
        the prefix sums of the e coordinates.
        """
        if self.gsp != 0:
            raise RootDatumError("similitude part has no coroot coordinates")
        acc, out = 0, []
        for c in self.coords:
            acc += c
            out.append(acc)
        return tuple(out)

    @staticmethod
    def from_coroot_coordinates(cs) -> "Cocharacter":
        cs = tuple(int(c) for c in cs)
        prev = 0
        coords = []
        for c in cs:
            coords.append(c - prev)
            prev = c
        return Cocharacter(tuple(coords))


def _check_rank(a, b):
    if a.rank != b.rank:
        raise RootDatumError(f"rank mismatch: {a.rank} != {b.rank}")


@dataclass(frozen=True)
class ParabolicSubset:
    """Subset of {1, ..., n} indexing simple roots of a standard parabolic."""

    n: int
    roots: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        roots = frozenset(int(i) for i in self.roots)
        if not all(1 <= i <= self.n for i in roots):
            raise RootDatumError(f"indices out of range 1..{self.n}: {sorted(roots)}")
        object.__setattr__(self, "roots", roots)

    @staticmethod
    def full(n: int) -> "ParabolicSubset":
        return ParabolicSubset(n, frozenset(range(1, n + 1)))

    @staticmethod
    def empty(n: int) -> "ParabolicSubset":
        return ParabolicSubset(n, frozenset())

    @staticmethod
    def siegel(n: int) -> "ParabolicSubset":
        """The Siegel subset {alpha_1, ..., alpha_{n-1}} (Levi GL_n)."""
        return ParabolicSubset(n, frozenset(range(1, n)))

    def __contains__(self, i: int) -> bool:
        return i in self.roots

    def __iter__(self):
        return iter(sorted(self.roots))

    def __len__(self) -> int:
        return len(self.roots)

    def issubset(self, other: "ParabolicSubset") -> bool:
        return self.n == other.n and self.roots <= other.roots

    def union(self, other: "ParabolicSubset") -> "ParabolicSubset":
        if self.n != other.n:
            raise RootDatumError("rank mismatch")
        return ParabolicSubset(self.n, self.roots | other.roots)

    def is_full(self) -> bool:
        return len(self.roots) == self.n


def _as_indices(J, n: int) -> frozenset[int]:
    if J is None:
        return frozenset(range(1, n + 1))
    if isinstance(J, ParabolicSubset):
        if J.n != n:
            raise RootDatumError("parabolic subset rank mismatch")
        return J.roots
    return frozenset(int(i) for i in J)


def simple_root(i: int, n: int) -> Character:
    """alpha_i in eps coordinates; alpha_n = 2 eps_n is the long one."""
    if not 1 <= i <= n:
        raise RootDatumError(f"simple root index {i} out of range 1..{n}")
    coords = [0] * n
    if i < n:
        coords[i - 1], coords[i] = 1, -1
    else:
        coords[n - 1] = 2
    return Character(tuple(coords))


def coroot(i: int, n: int) -> Cocharacter:
    """alpha_i^vee = e_i - e_{i+1} for i < n, alpha_n^vee = e_n."""
    if not 1 <= i <= n:
        raise RootDatumError(f"coroot index {i} out of range 1..{n}")
    coords = [0] * n
    if i < n:
        coords[i - 1], coords[i] = 1, -1
    else:
        coords[n - 1] = 1
    return Cocharacter(tuple(coords))


def fundamental_weight(i: int, n: int) -> Character:
    """omega_{alpha_i} = eps_1 + ... + eps_i, dual to the coroot basis."""
    if not 1 <= i <= n:
        raise RootDatumError(f"index {i} out of range 1..{n}")
    return Character(tuple(1 if j < i else 0 for j in range(n)))


def pairing(chi: Character, lam: Cocharacter) -> int:
    """The perfect pairing <chi, lam>, a dot product in these coordinates."""
    _check_rank(chi, lam)
    return sum(a * b for a, b in zip(chi.coords, lam.coords))


def cartan_matrix(n: int) -> list[list[int]]:
    """C[j][k] = <alpha_j, alpha_k^vee> (0-indexed rows/cols for roots 1..n)."""
    return [
        [pairing(simple_root(j, n), coroot(k, n)) for k in range(1, n + 1)]
        for j in range(1, n + 1)
    ]


def _invert_fraction_matrix(rows):
    """Gauss-Jordan inverse over Fraction; raises on singular input."""
    m = len(rows)
    aug = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(m)]
        for i, row in enumerate(rows)
    ]
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if piv is None:
            raise RootDatumError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1, 1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[m:] for row in aug]


def cartan_inverse(n: int, J=None) -> list[list[Fraction]]:
    """Inverse of the Cartan matrix restricted to the subset J (default all).

    All entries are nonnegative rationals; this is what makes the
    enumeration bounds below finite.
    """
    idx = sorted(_as_indices(J, n))
    rows = [[pairing(simple_root(j, n), coroot(k, n)) for k in idx] for j in idx]
    return _invert_fraction_matrix(rows)


def leq(lam: Cocharacter, mu: Cocharacter, J=None) -> bool:
    """mu - lam a nonnegative integer combination of {alpha_j^vee : j in J}.

    The coroot-basis coordinates of mu - lam are unique, so membership in
    the J-span is just support containment plus nonnegativity.
    """
    _check_rank(lam, mu)
    n = lam.rank
    idx = _as_indices(J, n)
    cs = (mu - lam).coroot_coordinates()
    return all((k + 1) in idx or c == 0 for k, c in enumerate(cs)) and all(
        c >= 0 for c in cs
    )


def is_antidominant(lam: Cocharacter, J=None) -> bool:
    """<alpha_j, lam> <= 0 for all j in J."""
    n = lam.rank
    return all(pairing(simple_root(j, n), lam) <= 0 for j in _as_indices(n=n, J=J))


def antidominant_above(lam: Cocharacter, J=None) -> set[Cocharacter]:
    """The finite set {mu J-antidominant : mu >=_J lam}.

    Writing mu = lam + sum_{j in J} a_j alpha_j^vee, antidominance reads
    C_J a <= b with b_j = <alpha_j, -lam>; since every entry of C_J^{-1}
    is nonnegative this forces a <= C_J^{-1} b componentwise, so the
    search box is finite.
    """
    n = lam.rank
    idx = sorted(_as_indices(J, n))
    if not is_antidominant(lam, idx):
        raise RootDatumError("base point must be antidominant for J")
    if not idx:
        return {lam}
    b = [pairing(simple_root(j, n), -1 * lam) for j in idx]
    cinv = cartan_inverse(n, idx)
    bounds = []
    for row in cinv:
        v = sum(f * bb for f, bb in zip(row, b))
        bounds.append(int(v) if v.denominator == 1 else int(v) + 1)
    out = set()
    cors = [coroot(j, n) for j in idx]
    for a in itertools.product(*(range(bb + 1) for bb in bounds)):
        mu = lam
        for ak, cv in zip(a, cors):
            mu = mu + ak * cv
        if is_antidominant(mu, idx):
            out.add(mu)
    return out


def parabolic_from_cochar(lam: Cocharacter) -> ParabolicSubset:
    """The subset {alpha in Pi : <alpha, lam> = 0} of an antidominant lam."""
    n = lam.rank
    if not is_antidominant(lam):
        raise RootDatumError("cocharacter is not antidominant")
    return ParabolicSubset(
        n, frozenset(j for j in range(1, n + 1) if pairing(simple_root(j, n), lam) == 0)
    )


def antidominant_rep(lam: Cocharacter) -> Cocharacter:
    """The unique antidominant element of the signed-permutation orbit.

    Sort absolute values descending and negate: coordinates come out
    ascending with the last one <= 0.
    """
    return Cocharacter(tuple(sorted((-abs(c) for c in lam.coords))))


def positive_roots(n: int) -> list[Character]:
    """eps_i - eps_j and eps_i + eps_j for i < j, and 2 eps_i."""
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            short_minus = [0] * n
            short_minus[i], short_minus[j] = 1, -1
            out.append(Character(tuple(short_minus)))
            short_plus = [0] * n
            short_plus[i], short_plus[j] = 1, 1
            out.append(Character(tuple(short_plus)))
    for i in range(n):
        long = [0] * n
        long[i] = 2
        out.append(Character(tuple(long)))
    return out


def all_roots(n: int) -> set[Character]:
    pos = positive_roots(n)
    return set(pos) | {-r for r in pos}


def is_root(chi: Character) -> bool:
    return chi in all_roots(chi.rank)


def is_positive_root(chi: Character) -> bool:
    return chi in set(positive_roots(chi.rank))


def is_siegel_root(chi: Character) -> bool:
    """Member of the A_{n-1} subsystem generated by the short simple roots."""
    nz = [c for c in chi.coords if c != 0]
    return sorted(nz) == [-1, 1]


@dataclass(frozen=True)
class RootStringData:
    """beta-string data through -gamma, as used by the support analysis.

    `exists` records whether beta - gamma is a root.  When it is, `ell`
    counts the j >= 1 with j*beta - gamma a root, and `magnitudes` are the
    structure-constant magnitudes |c_{beta,-gamma;j,1}| for j = 1..ell.
    Signs are deliberately not computed: they depend on a Chevalley basis
    choice that nothing downstream consumes.
    """

    exists: bool
    ell: int
    magnitudes: tuple[int, ...]


def root_string_data(beta: Character, gamma: Character) -> RootStringData:
    """Classify the beta-string through -gamma for beta a positive root of
    the Siegel subsystem and gamma a positive root.

    The three string shapes are {-gamma, beta-gamma},
    {-gamma, beta-gamma, 2beta-gamma} and {-beta-gamma, -gamma, beta-gamma};
    the magnitude is 2 exactly in the last shape, where the string starts
    one step below -gamma.
    """
    _check_rank(beta, gamma)
    if not (is_positive_root(beta) and is_siegel_root(beta)):
        raise RootDatumError(f"{beta.coords} is not a positive Siegel-subsystem root")
    if not is_positive_root(gamma):
        raise RootDatumError(f"{gamma.coords} is not a positive root")
    roots = all_roots(beta.rank)
    if (beta - gamma) not in roots:
        return RootStringData(exists=False, ell=0, magnitudes=())
    ell = sum(1 for j in (1, 2) if (j * beta - gamma) in roots)
    down = 1 + max(k for k in (0, 1, 2) if k == 0 or (-1 * (k * beta) - gamma) in roots)
    magnitudes = [down] + [1] * (ell - 1)
    return RootStringData(exists=True, ell=ell, magnitudes=tuple(magnitudes))


@dataclass(frozen=True)
class RootDatumCn:
    """The rank-n root datum of the symplectic group, bundling the
    module's operations behind one handle."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise RootDatumError("rank must be positive")

    def simple_root(self, i: int) -> Character:
        return simple_root(i, self.n)

    def coroot(self, i: int) -> Cocharacter:
        return coroot(i, self.n)

    def fundamental_weight(self, i: int) -> Character:
        return fundamental_weight(i, self.n)

    def cartan_matrix(self) -> list[list[int]]:
        return cartan_matrix(self.n)

    def cartan_inverse(self, J=None):
        return cartan_inverse(self.n, J)

    def positive_roots(self) -> list[Character]:
        return positive_roots(self.n)

    def full_subset(self) -> ParabolicSubset:
        return ParabolicSubset.full(self.n)

    def siegel_subset(self) -> ParabolicSubset:
        return ParabolicSubset.siegel(self.n)


def signed_permutations(n: int):
    """The Weyl group of C_n as (permutation, signs) pairs, for tests."""
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            yield perm, signs


def apply_signed_permutation(w, lam: Cocharacter) -> Cocharacter:
    perm, signs = w
    return Cocharacter(tuple(signs[i] * lam.coords[perm[i]] for i in range(lam.rank)))
