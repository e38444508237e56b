"""Supersingular data, triples, and the classification bookkeeping.

An irreducible admissible genuine representation is parametrized by a
triple (P, sigma, Q): a standard parabolic subset P, a supersingular
datum sigma on its Levi, and a parabolic subset Q with
P <= Q <= P + Pi(sigma).  The artifact never builds representation
spaces; sigma is carried as its Levi subset together with triviality
flags for the rank-one subgroups attached to the simple roots orthogonal
to the Levi ("the torus part of the root subgroup acts trivially").  In
the genuine world the long simple root can never flag, so Pi(sigma) stays
inside the short roots.

For the torus Levi the flags are computed from a genuine torus character;
for bigger Levis they are user-supplied facts about an abstract
supercuspidal, identified only by an opaque label.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .characters import (
    GenuineTorusCharacter,
    restrict_short_coroot,
    supersingular_flags_from_character,
)
from .cover import LocalFieldDescriptor
from .rootdata import ParabolicSubset, coroot, pairing, simple_root


class ClassifyError(ValueError):
    pass


def eligible_flag_roots(levi: ParabolicSubset) -> frozenset[int]:
    """Simple roots orthogonal to the Levi: {alpha : <Pi_M, alpha^vee> = 0}."""
    n = levi.n
    out = set()
    for i in range(1, n + 1):
        cv = coroot(i, n)
        if all(pairing(simple_root(j, n), cv) == 0 for j in levi):
            out.add(i)
    return frozenset(out)


@dataclass(frozen=True)
class SupersingularDatum:
    """A supersingular representation of the Levi indexed by `levi`, seen
    through its triviality flags on the eligible simple roots.

    `genuine` is always True here; it forces the long-root flag to False
    whenever the long root is eligible.  A torus datum (empty Levi) may
    carry the underlying genuine torus character, in which case the flags
    must agree with the character's short-coroot restrictions.
    """

    levi: ParabolicSubset
    flags: dict
    label: str = "sigma"
    torus_character: Optional[GenuineTorusCharacter] = None
    genuine: bool = True

    def __post_init__(self):
        n = self.levi.n
        flags = {int(k): bool(v) for k, v in self.flags.items()}
        object.__setattr__(self, "flags", flags)
        if not self.genuine:
            raise ClassifyError("only genuine data occur in this artifact")
        eligible = eligible_flag_roots(self.levi)
        if set(flags) != set(eligible):
            raise ClassifyError(
                f"flags must be given exactly on the eligible roots {sorted(eligible)},"
                f" got {sorted(flags)}"
            )
        if n in eligible and flags[n]:
            raise ClassifyError(
                "genuineness forbids a triviality flag at the long simple root"
            )
        if self.torus_character is not None:
            if len(self.levi) != 0:
                raise ClassifyError("torus characters only parametrize empty-Levi data")
            if self.torus_character.rank != n:
                raise ClassifyError("torus character rank mismatch")
            expected = supersingular_flags_from_character(self.torus_character)
            for i, want in expected.items():
                if flags.get(i) != want:
                    raise ClassifyError(
                        f"flag at alpha_{i} contradicts the torus character"
                    )

    def __hash__(self):
        return hash(
            (self.levi, tuple(sorted(self.flags.items())), self.label)
        )

    def __eq__(self, other):
        return (
            isinstance(other, SupersingularDatum)
            and self.levi == other.levi
            and self.flags == other.flags
            and self.label == other.label
            and self.torus_character == other.torus_character
        )

    @property
    def n(self) -> int:
        return self.levi.n


def torus_datum(sigma: GenuineTorusCharacter, label: str = "xi") -> SupersingularDatum:
    """The empty-Levi datum of a genuine torus character."""
    n = sigma.rank
    flags = dict(supersingular_flags_from_character(sigma))
    flags[n] = False
    return SupersingularDatum(
        levi=ParabolicSubset.empty(n),
        flags=flags,
        label=label,
        torus_character=sigma,
    )


def sigma_equal(
    a: SupersingularDatum, b: SupersingularDatum, F: Optional[LocalFieldDescriptor] = None
) -> bool:
    """Isomorphism of data: genuine_equal for torus characters, opaque
    label equality otherwise."""
    if a.levi != b.levi:
        return False
    if a.torus_character is not None and b.torus_character is not None:
        if F is None:
            raise ClassifyError("comparing torus characters needs the local field")
        from .characters import genuine_equal

        return genuine_equal(a.torus_character, b.torus_character, F)
    return a.flags == b.flags and a.label == b.label


def pi_sigma(sigma: SupersingularDatum) -> ParabolicSubset:
    """The flagged eligible roots; never contains the long simple root."""
    n = sigma.n
    return ParabolicSubset(
        n, frozenset(i for i, v in sigma.flags.items() if v)
    )


def p_sigma(sigma: SupersingularDatum) -> ParabolicSubset:
    """The parabolic subset Pi_M + Pi(sigma) (a disjoint union)."""
    return sigma.levi.union(pi_sigma(sigma))


@dataclass(frozen=True)
class SupersingularTriple:
    P: ParabolicSubset
    sigma: SupersingularDatum
    Q: ParabolicSubset

    def __post_init__(self):
        if self.P != self.sigma.levi:
            raise ClassifyError("P must be the Levi subset of sigma")
        top = p_sigma(self.sigma)
        if not (self.P.issubset(self.Q) and self.Q.issubset(top)):
            raise ClassifyError(
                f"need P <= Q <= P + Pi(sigma); got P={sorted(self.P.roots)},"
                f" Q={sorted(self.Q.roots)}, top={sorted(top.roots)}"
            )


def composition_factors(sigma: SupersingularDatum) -> list[SupersingularTriple]:
    """The factors of parabolic induction from sigma's parabolic: one
    triple for every subset of Pi(sigma), so 2^{|Pi(sigma)|} in all."""
    pis = sorted(pi_sigma(sigma).roots)
    out = []
    for r in range(len(pis) + 1):
        for S in itertools.combinations(pis, r):
            Q = ParabolicSubset(sigma.n, sigma.levi.roots | set(S))
            out.append(SupersingularTriple(sigma.levi, sigma, Q))
    return out


def triples_equivalent(
    t: SupersingularTriple,
    t2: SupersingularTriple,
    F: Optional[LocalFieldDescriptor] = None,
) -> bool:
    """Componentwise equality of P and Q plus sigma-isomorphism."""
    return t.P == t2.P and t.Q == t2.Q and sigma_equal(t.sigma, t2.sigma, F)


def ps_length(sigma: GenuineTorusCharacter) -> int:
    """Length of the principal series attached to sigma:
    2^(number of trivial short-coroot restrictions), at most 2^(n-1)."""
    n = sigma.rank
    trivial = sum(
        1 for i in range(1, n) if restrict_short_coroot(sigma, i).is_trivial
    )
    return 2**trivial


def ps_irreducible(sigma: GenuineTorusCharacter) -> bool:
    """Irreducible exactly when every short-coroot restriction is
    somewhere nontrivial (length one)."""
    return ps_length(sigma) == 1


def ps_equivalent(
    sigma: GenuineTorusCharacter,
    sigma2: GenuineTorusCharacter,
    F: LocalFieldDescriptor,
) -> bool:
    """Principal series agree exactly when the inducing characters do."""
    from .characters import genuine_equal

    return genuine_equal(sigma, sigma2, F)


@dataclass(frozen=True)
class LeviShape:
    """Block shape GL_{n_1} x ... x GL_{n_r} x Sp_{2m} of a standard Levi;
    size-1 GL blocks are listed explicitly so the shape is lossless."""

    gl_blocks: tuple[int, ...]
    sp_rank: int

    def total(self) -> int:
        return sum(self.gl_blocks) + self.sp_rank


def levi_shape(J: ParabolicSubset) -> LeviShape:
    """Decompose J into consecutive runs: a run containing the long root
    contributes the symplectic factor, a run of k short roots a GL_{k+1}
    block, and every untouched coordinate slot a GL_1 block."""
    n = J.n
    idx = sorted(J.roots)
    runs = []
    for i in idx:
        if runs and runs[-1][-1] == i - 1:
            runs[-1].append(i)
        else:
            runs.append([i])
    used = [False] * (n + 1)  # coordinate slots 1..n
    gl = []
    sp_rank = 0
    for run in runs:
        if run[-1] == n:
            sp_rank = len(run)
            for s in range(run[0], n + 1):
                used[s] = True
        else:
            gl.append((run[0], len(run) + 1))
            for s in range(run[0], run[-1] + 2):
                used[s] = True
    for s in range(1, n + 1):
        if not used[s]:
            gl.append((s, 1))
    gl.sort()
    return LeviShape(tuple(size for _, size in gl), sp_rank)


def siegel_lift(
    P: ParabolicSubset,
    rho_flags: dict,
    Q: ParabolicSubset,
    n: int,
    label: str = "rho",
    torus_character: Optional[GenuineTorusCharacter] = None,
) -> SupersingularTriple:
    """Lift a reductive GL_n triple (P, rho, Q) on the Siegel Levi to the
    metaplectic triple of the twisted representation.

    P and Q are subsets of the Siegel subset; rho's triviality flags live
    on the short roots orthogonal to P inside the GL_n root datum, and
    they transport unchanged (the short-root pairings agree between the
    two data).  The long root never flags on the lift, so the lifted
    vanishing set equals the reductive one and the lifted triple is valid
    exactly when the input triple was.
    """
    siegel = ParabolicSubset.siegel(n)
    if not (P.issubset(siegel) and Q.issubset(siegel)):
        raise ClassifyError("a Siegel-Levi triple has P, Q inside the short roots")
    rho_flags = {int(k): bool(v) for k, v in rho_flags.items()}
    eligible_in_gl = frozenset(
        i
        for i in range(1, n)
        if all(pairing(simple_root(j, n), coroot(i, n)) == 0 for j in P)
    )
    if set(rho_flags) != set(eligible_in_gl):
        raise ClassifyError(
            f"reductive flags must sit exactly on {sorted(eligible_in_gl)}"
        )
    pi_rho = frozenset(i for i, v in rho_flags.items() if v)
    if not (P.roots <= Q.roots <= (P.roots | pi_rho)):
        raise ClassifyError("invalid reductive triple: need P <= Q <= P + Pi(rho)")
    flags = dict(rho_flags)
    eligible_meta = eligible_flag_roots(P)
    if n in eligible_meta:
        flags[n] = False
    datum = SupersingularDatum(
        levi=P,
        flags=flags,
        label=label,
        torus_character=torus_character,
    )
    return SupersingularTriple(P, datum, Q)


def is_supercuspidal_class(t: SupersingularTriple) -> bool:
    """The triple of a supercuspidal: the full-group triple (G, sigma, G)."""
    return t.P.is_full()


@dataclass
class ClassificationReport:
    triples: list = field(default_factory=list)
    merged: list = field(default_factory=list)  # (kept_index, dropped_index)
    collisions: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.collisions


def enumerate_classification(
    n: int,
    menu: list[SupersingularDatum],
    F: Optional[LocalFieldDescriptor] = None,
) -> ClassificationReport:
    """All triples over a menu of supersingular data, with a data-level
    injectivity report: distinct (datum, Q) sources must give inequivalent
    triples.  Duplicate menu entries are merged first."""
    report = ClassificationReport()
    kept: list[SupersingularDatum] = []
    for idx, datum in enumerate(menu):
        if datum.n != n:
            raise ClassifyError("menu rank mismatch")
        dup = None
        for kidx, other in enumerate(kept):
            if datum.levi == other.levi and sigma_equal(datum, other, F):
                dup = kidx
                break
        if dup is None:
            kept.append(datum)
        else:
            report.merged.append((dup, idx))
    sources = []
    for datum in kept:
        for t in composition_factors(datum):
            sources.append(t)
    report.triples = sources
    for a in range(len(sources)):
        for b in range(a + 1, len(sources)):
            if triples_equivalent(sources[a], sources[b], F):
                report.collisions.append((a, b))
    return report
