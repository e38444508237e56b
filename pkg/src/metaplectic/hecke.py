"""Torus-level Hecke elements and the identities the Satake map satisfies.

A torus Hecke element is a finitely supported sum  sum_mu c(mu) tau_mu
with coefficients mod p, where tau_mu is the double-coset function at the
uniformizer point of the cocharacter mu.  The section mu -> lift of
mu(pi) is a homomorphism, so convolution is just tau_lam * tau_mu =
tau_{lam + mu} extended bilinearly.

The module records the two computed Satake values

    S(T_{2 lam_i}) = tau_{2 lam} - tau_{2 lam + alpha_i^vee}   (i short)
                   = tau_{2 lam}                               (i long),

with lam = -(e_1 + ... + e_i), the parity support filter (coefficients
die when the lambda-basis coefficient sum of mu + base is odd), the
A-set combinatorics behind the short-root case, and the change-of-weight
decision procedure for Hecke-algebra characters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .rootdata import (
    Cocharacter,
    ParabolicSubset,
    cartan_matrix,
    cartan_inverse,
    coroot,
    is_antidominant,
    pairing,
    simple_root,
)


class HeckeError(ValueError):
    pass


@dataclass(frozen=True)
class TorusHeckeElement:
    """Finitely supported map from cocharacters (e-coordinate tuples) to
    coefficients mod p; zero coefficients are pruned."""

    p: int
    coeffs: dict

    def __post_init__(self):
        clean = {}
        for mu, c in self.coeffs.items():
            key = tuple(int(x) for x in (mu.coords if isinstance(mu, Cocharacter) else mu))
            cv = int(c) % self.p
            if cv:
                clean[key] = (clean.get(key, 0) + cv) % self.p
        object.__setattr__(
            self, "coeffs", {k: v for k, v in clean.items() if v}
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TorusHeckeElement)
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.p, tuple(sorted(self.coeffs.items()))))

    def __add__(self, other: "TorusHeckeElement") -> "TorusHeckeElement":
        if self.p != other.p:
            raise HeckeError("mixed moduli")
        merged = dict(self.coeffs)
        for k, v in other.coeffs.items():
            merged[k] = (merged.get(k, 0) + v) % self.p
        return TorusHeckeElement(self.p, merged)

    def __neg__(self) -> "TorusHeckeElement":
        return TorusHeckeElement(self.p, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "TorusHeckeElement") -> "TorusHeckeElement":
        return self + (-other)

    def support(self) -> set[tuple[int, ...]]:
        return set(self.coeffs)

    def coefficient(self, mu) -> int:
        key = tuple(mu.coords) if isinstance(mu, Cocharacter) else tuple(mu)
        return self.coeffs.get(key, 0)

    @staticmethod
    def tau(mu, p: int, c: int = 1) -> "TorusHeckeElement":
        return TorusHeckeElement(p, {mu if not isinstance(mu, Cocharacter) else mu.coords: c})

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Sorted (mu, c) pairs with c the symmetric residue, for display."""
        out = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            if c > self.p // 2:
                c -= self.p
            out.append((k, c))
        return out


def tau_convolve(h: TorusHeckeElement, h2: TorusHeckeElement) -> TorusHeckeElement:
    """Bilinear extension of tau_lam * tau_mu = tau_{lam + mu}."""
    if h.p != h2.p:
        raise HeckeError("mixed moduli")
    out: dict = {}
    for a, ca in h.coeffs.items():
        for b, cb in h2.coeffs.items():
            key = tuple(x + y for x, y in zip(a, b))
            out[key] = (out.get(key, 0) + ca * cb) % h.p
    return TorusHeckeElement(h.p, out)


def t2lambda_base(i: int, n: int) -> Cocharacter:
    """lam = -(e_1 + ... + e_i), the antidominant base point used by the
    change-of-weight computation; 2*lam indexes the Satake source cell."""
    if not 1 <= i <= n:
        raise HeckeError(f"index {i} out of range 1..{n}")
    return Cocharacter(tuple(-1 if j < i else 0 for j in range(n)))


def metaplectic_satake_T2lambda(i: int, n: int, p: int) -> TorusHeckeElement:
    """The metaplectic Satake value of T_{2 lam} at the torus:
    tau_{2 lam} - tau_{2 lam + alpha_i^vee} for short i, tau_{2 lam} for
    i = n."""
    lam = t2lambda_base(i, n)
    two = 2 * lam
    if i == n:
        return TorusHeckeElement.tau(two.coords, p)
    shifted = two + coroot(i, n)
    return TorusHeckeElement(p, {two.coords: 1, shifted.coords: -1})


def parity_filter(h: TorusHeckeElement, base: Cocharacter) -> TorusHeckeElement:
    """Zero every coefficient c(mu) for which the lambda-basis coefficients
    of mu + base sum to an odd number.

    `base` is the cocharacter indexing the Satake source cell (for the
    identities above that cell is 2*lam, whose coordinate sum is even, so
    the filter kills exactly the odd-coordinate-sum mu).
    """
    kept = {
        mu: c
        for mu, c in h.coeffs.items()
        if (sum(mu) + sum(base.coords)) % 2 == 0
    }
    return TorusHeckeElement(h.p, kept)


@dataclass(frozen=True)
class ASet:
    """Exponent vectors a >= 0 with  C a <= 2 <alpha_j, -lam>  for all j;
    equivalently mu = 2 lam + a . alpha^vee ranges over the antidominant
    cocharacters >= 2 lam."""

    base: Cocharacter
    elements: frozenset

    @property
    def n(self) -> int:
        return self.base.rank

    def mu_of(self, a) -> Cocharacter:
        mu = 2 * self.base
        for k, ak in enumerate(a):
            mu = mu + int(ak) * coroot(k + 1, self.n)
        return mu

    def sorted_elements(self) -> list[tuple[int, ...]]:
        return sorted(self.elements)


def enumerate_A(lam: Cocharacter) -> ASet:
    """Full enumeration of the A-set under the componentwise bound
    a <= C^{-1} b, b_j = 2 <alpha_j, -lam>, valid since C^{-1} >= 0."""
    n = lam.rank
    if not is_antidominant(lam):
        raise HeckeError("base point must be antidominant")
    C = cartan_matrix(n)
    b = [2 * pairing(simple_root(j, n), -1 * lam) for j in range(1, n + 1)]
    cinv = cartan_inverse(n)
    bounds = []
    for row in cinv:
        v = sum(f * bb for f, bb in zip(row, b))
        bounds.append(int(v) if v.denominator == 1 else int(v) + 1)
    elems = set()
    for a in itertools.product(*(range(bb + 1) for bb in bounds)):
        if all(
            sum(C[j][k] * a[k] for k in range(n)) <= b[j] for j in range(n)
        ):
            elems.add(a)
    return ASet(lam, frozenset(elems))


@dataclass(frozen=True)
class FiberResult:
    """Raw fiber of the A-set through a with the i-th coordinate freed,
    together with whether it matches the dichotomy {0, e_i} / {a}.

    The dichotomy is guaranteed only for short i; for i = n the raw
    fiber can be strictly larger, so `conforms` is advisory there.
    """

    vectors: frozenset
    conforms: bool


def A_fiber(A: ASet, a, i: int) -> FiberResult:
    """{b in A : b_j = a_j for all j != i}, reported raw."""
    a = tuple(int(x) for x in a)
    if a not in A.elements:
        raise HeckeError(f"{a} is not in the A-set")
    if not 1 <= i <= A.n:
        raise HeckeError(f"index {i} out of range 1..{A.n}")
    fiber = frozenset(
        b for b in A.elements if all(b[j] == a[j] for j in range(A.n) if j != i - 1)
    )
    if all(a[j] == 0 for j in range(A.n) if j != i - 1):
        predicted = {
            tuple(0 for _ in range(A.n)),
            tuple(1 if j == i - 1 else 0 for j in range(A.n)),
        }
    else:
        predicted = {a}
    return FiberResult(fiber, fiber == frozenset(predicted))


def distinct_fibers(A: ASet, i: int) -> list[frozenset]:
    """The partition of the A-set into fibers with the i-th entry freed."""
    seen = {}
    for a in sorted(A.elements):
        key = tuple(v for j, v in enumerate(a) if j != i - 1)
        seen.setdefault(key, set()).add(a)
    return [frozenset(v) for _, v in sorted(seen.items())]


def vanishing_sum_check(coeffs: dict, A: ASet, i: int) -> bool:
    """Whether every fiber sum of Satake coefficients vanishes mod p.

    `coeffs` maps the cocharacters {2 lam + b . alpha^vee : b in A} (as
    coordinate tuples) to integers mod p.  With the normalization
    c(2 lam) = 1 this accepts exactly the family of
    tau_{2 lam} - tau_{2 lam + alpha_i^vee}.  Only stated for short i.
    """
    if not 1 <= i <= A.n - 1:
        raise HeckeError("fiber sums are only meaningful for short indices")
    if isinstance(coeffs, TorusHeckeElement):
        # the element is total: pruned keys mean coefficient 0
        p, lookup = coeffs.p, coeffs.coefficient
    else:
        table = {tuple(k): v for k, v in dict(coeffs).items()}
        p = None

        def lookup(mu):
            if mu not in table:
                raise HeckeError(f"missing coefficient at {mu}")
            return table[mu]

    for fiber in distinct_fibers(A, i):
        total = sum(lookup(A.mu_of(b).coords) for b in fiber)
        if (total % p != 0) if p is not None else (total != 0):
            return False
    return True


@dataclass(frozen=True)
class GroupValue:
    """Element of the character value group Z/N extended by an absorbing
    zero (the image of 0 in the coefficient field)."""

    N: int
    exp: Optional[int]  # None encodes the absorbing zero

    def __post_init__(self):
        if self.exp is not None:
            object.__setattr__(self, "exp", self.exp % self.N)

    @property
    def is_zero(self) -> bool:
        return self.exp is None

    @property
    def is_one(self) -> bool:
        return self.exp == 0

    def __mul__(self, other: "GroupValue") -> "GroupValue":
        if self.N != other.N:
            raise HeckeError("mixed value groups")
        if self.is_zero or other.is_zero:
            return GroupValue(self.N, None)
        return GroupValue(self.N, self.exp + other.exp)

    @staticmethod
    def one(N: int) -> "GroupValue":
        return GroupValue(N, 0)

    @staticmethod
    def zero(N: int) -> "GroupValue":
        return GroupValue(N, None)


@dataclass
class HeckeCharacter:
    """A character of the spherical Hecke algebra, seen through the torus:
    the data of its values on the tau_mu it can reach.

    Stored extensionally in `values` (coordinate tuple -> GroupValue).
    Characters synthesized by `from_face` follow the support law of an
    algebra character of the antidominant monoid: the value at mu is zero
    unless mu pairs to zero with every root in the intended vanishing set
    J = Pi(chi), and on that face it is the homomorphism with the given
    exponents.  Multiplicativity then holds wherever defined, and the
    change-of-weight dichotomy falls out of the face structure.
    """

    n: int
    N: int
    values: dict = field(default_factory=dict)
    face: Optional[frozenset] = None
    exponents: Optional[tuple] = None

    def __post_init__(self):
        self.values = {
            tuple(int(x) for x in k): v for k, v in self.values.items()
        }

    @staticmethod
    def from_face(J, exponents, n: int, N: int) -> "HeckeCharacter":
        J = frozenset(J.roots if isinstance(J, ParabolicSubset) else (int(j) for j in J))
        exps = tuple(int(e) % N for e in exponents)
        if len(exps) != n:
            raise HeckeError("need one exponent per coordinate")
        return HeckeCharacter(n=n, N=N, values={}, face=J, exponents=exps)

    def value_at(self, mu) -> GroupValue:
        key = tuple(mu.coords) if isinstance(mu, Cocharacter) else tuple(mu)
        if key in self.values:
            return self.values[key]
        if self.face is None:
            raise HeckeError(f"character undefined at {key}")
        lam = Cocharacter(key)
        if any(pairing(simple_root(j, self.n), lam) != 0 for j in self.face):
            val = GroupValue.zero(self.N)
        else:
            val = GroupValue(self.N, sum(c * e for c, e in zip(key, self.exponents)))
        self.values[key] = val
        return val


def lambda_alpha(i: int, n: int) -> Cocharacter:
    """The marker cocharacter for alpha_i: strictly negative against
    alpha_i, zero against the other simple roots."""
    return t2lambda_base(i, n)


def pi_chi(chi: HeckeCharacter) -> ParabolicSubset:
    """Pi(chi) = {alpha : chi(tau_{lambda_alpha}) = 0}; independent of the
    choice of marker (doubling it preserves vanishing)."""
    n = chi.n
    zero = frozenset(
        i for i in range(1, n + 1) if chi.value_at(lambda_alpha(i, n)).is_zero
    )
    return ParabolicSubset(n, zero)


@dataclass(frozen=True)
class ChangeOfWeightDecision:
    """Outcome of the change-of-weight criterion at a simple root.

    The constant is chi(tau_{2 lam}) - chi(tau_{2 lam + alpha_i^vee}) for
    short i and chi(tau_{2 lam}) for i = n, represented formally by its
    two terms; `applicable` says it is nonzero.
    """

    applicable: bool
    minuend: GroupValue
    subtrahend: GroupValue

    @property
    def constant_is_zero(self) -> bool:
        return not self.applicable


def change_of_weight_decision(i: int, chi: HeckeCharacter) -> ChangeOfWeightDecision:
    """Decide whether the weight can be changed at alpha_i.

    Requires alpha_i outside Pi(chi).  The long-root branch is always
    applicable (the constant is the nonzero chi(tau_{2 lam})); a short
    root fails exactly when tau_{2 lam} and tau_{2 lam + alpha_i^vee}
    carry the same value, which in the factored picture means
    <Pi(chi), alpha_i^vee> = 0 and chi'(tau_{alpha_i^vee}) = 1.
    """
    n = chi.n
    if not 1 <= i <= n:
        raise HeckeError(f"index {i} out of range 1..{n}")
    if i in pi_chi(chi).roots:
        raise HeckeError(f"alpha_{i} lies in Pi(chi); precondition violated")
    lam = t2lambda_base(i, n)
    a = chi.value_at(2 * lam)
    if i == n:
        b = GroupValue.zero(chi.N)
        return ChangeOfWeightDecision(not a.is_zero, a, b)
    b = chi.value_at(2 * lam + coroot(i, n))
    return ChangeOfWeightDecision(a != b, a, b)
