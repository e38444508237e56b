import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from metaplectic.cover import (
    ALL_CLASSES,
    CoverError,
    LocalFieldDescriptor,
    ONE_CLASS,
    PI_CLASS,
    SquareClass,
    UNIT_CLASS,
    UPI_CLASS,
    commutator_sign,
    eval_B,
    eval_Q,
    hilbert,
    hilbert_solvable,
    psi_ratio_character,
    rao_siegel_product,
    splits_over_Mprime,
)
from metaplectic.rootdata import Cocharacter, coroot


def test_eval_Q_on_coroots():
    for n in range(1, 9):
        for i in range(1, n):
            assert eval_Q(coroot(i, n)) == 2
        assert eval_Q(coroot(n, n)) == 1


def test_eval_Q_similitude_alone():
    for n in (1, 2, 4):
        assert eval_Q(Cocharacter(tuple(0 for _ in range(n)), gsp=1)) == 0


def test_eval_Q_signed_permutation_invariance_sp_part():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randint(1, 6)
        coords = [rng.randint(-4, 4) for _ in range(n)]
        q0 = eval_Q(Cocharacter(tuple(coords)))
        rng.shuffle(coords)
        signed = [c * rng.choice((1, -1)) for c in coords]
        assert eval_Q(Cocharacter(tuple(signed))) == q0


def test_eval_B_examples():
    # both arguments in the Sp part: B = sum 2 a_i a'_i, always even
    a = Cocharacter((1, 2, -1))
    b = Cocharacter((0, 3, 5))
    assert eval_B(a, b) == 2 * (0 + 6 - 5)
    # against the similitude cocharacter: B = sum a_i
    sim = Cocharacter((0, 0, 0), gsp=1)
    assert eval_B(a, sim) == 1 + 2 - 1
    zero = Cocharacter((0, 0, 0))
    assert eval_B(zero, zero) == 0


@given(st.integers(1, 6), st.data())
@settings(max_examples=80, deadline=None)
def test_eval_B_even_on_sp_part(n, data):
    a = Cocharacter(tuple(data.draw(st.integers(-5, 5)) for _ in range(n)))
    b = Cocharacter(tuple(data.draw(st.integers(-5, 5)) for _ in range(n)))
    assert eval_B(a, b) % 2 == 0


def test_local_field_descriptor():
    with pytest.raises(CoverError):
        LocalFieldDescriptor(2)
    with pytest.raises(CoverError):
        LocalFieldDescriptor(9)
    assert LocalFieldDescriptor(3).nonsquare_unit == 2
    assert LocalFieldDescriptor(7).q == 7
    assert LocalFieldDescriptor(3, 2).q == 9
    assert LocalFieldDescriptor(3).residue_char_minus_one() == -1
    assert LocalFieldDescriptor(5).residue_char_minus_one() == 1
    assert LocalFieldDescriptor(3, 2).residue_char_minus_one() == 1  # q = 9


def test_square_class_group():
    assert PI_CLASS * PI_CLASS == ONE_CLASS
    assert UNIT_CLASS * PI_CLASS == UPI_CLASS
    for c in ALL_CLASSES:
        assert c * c == ONE_CLASS
        assert c.inverse() == c
    assert SquareClass.from_name("upi") == UPI_CLASS
    with pytest.raises(CoverError):
        SquareClass.from_name("2")


def test_hilbert_examples():
    F3, F5 = LocalFieldDescriptor(3), LocalFieldDescriptor(5)
    assert hilbert(ONE_CLASS, PI_CLASS, F3) == 1
    assert hilbert(UNIT_CLASS, UNIT_CLASS, F3) == 1  # two units, p odd
    assert hilbert(PI_CLASS, PI_CLASS, F3) == -1
    assert hilbert(PI_CLASS, PI_CLASS, F5) == 1
    # u = 2 over Q_3: (2, pi) = Legendre(2 mod 3) = -1
    assert F3.nonsquare_unit == 2
    assert hilbert(UNIT_CLASS, PI_CLASS, F3) == -1


def test_hilbert_structure_exhaustive():
    for p in (3, 5, 7, 11):
        F = LocalFieldDescriptor(p)
        minus_one = F.square_class_of(-1)
        for x, y in itertools.product(ALL_CLASSES, repeat=2):
            assert hilbert(x, y, F) == hilbert(y, x, F)
            assert hilbert(x, minus_one * x, F) == 1
        for x, y, z in itertools.product(ALL_CLASSES, repeat=3):
            assert hilbert(x * y, z, F) == hilbert(x, z, F) * hilbert(y, z, F)


def test_hilbert_against_solvability_oracle_p3():
    F = LocalFieldDescriptor(3)
    for x, y in itertools.product(ALL_CLASSES, repeat=2):
        assert hilbert(x, y, F) == hilbert_solvable(x, y, F)


def test_commutator_sign():
    F = LocalFieldDescriptor(3)
    rng = random.Random(7)
    # Sp-part pairs commute in the cover
    for _ in range(500):
        n = rng.randint(1, 6)
        a = Cocharacter(tuple(rng.randint(-3, 3) for _ in range(n)))
        b = Cocharacter(tuple(rng.randint(-3, 3) for _ in range(n)))
        x, y = rng.choice(ALL_CLASSES), rng.choice(ALL_CLASSES)
        assert commutator_sign(a, x, b, y, F) == 1
    # sum of lambda_i against the similitude: exponent n
    for n in (1, 3, 5):
        lam = Cocharacter(tuple(1 for _ in range(n)))
        sim = Cocharacter(tuple(0 for _ in range(n)), gsp=1)
        assert commutator_sign(lam, PI_CLASS, sim, UNIT_CLASS, F) == hilbert(
            PI_CLASS, UNIT_CLASS, F
        )
    # a square class commutes with everything
    lam = Cocharacter((1, 0), gsp=0)
    sim = Cocharacter((0, 0), gsp=1)
    assert commutator_sign(lam, ONE_CLASS, sim, PI_CLASS, F) == 1


def test_commutator_sign_skew_symmetry():
    F = LocalFieldDescriptor(3)
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 4)
        a = Cocharacter(tuple(rng.randint(-2, 2) for _ in range(n)), gsp=rng.randint(-1, 1))
        b = Cocharacter(tuple(rng.randint(-2, 2) for _ in range(n)), gsp=rng.randint(-1, 1))
        for x, y in itertools.product(ALL_CLASSES, repeat=2):
            s = commutator_sign(a, x, b, y, F)
            t = commutator_sign(b, y, a, x, F)
            assert s == t  # values are +-1, so inverse equals equal


def test_splits_over_Mprime():
    for n in range(1, 9):
        for i in range(1, n + 1):
            assert splits_over_Mprime(i, n) == (i != n)
            assert splits_over_Mprime(i, n) == (eval_Q(coroot(i, n)) % 2 == 0)
    with pytest.raises(CoverError):
        splits_over_Mprime(0, 2)


def test_rao_siegel_product():
    F = LocalFieldDescriptor(3)
    # identity element
    for d in ALL_CLASSES:
        for z in (1, -1):
            assert rao_siegel_product(ONE_CLASS, 1, d, z, F) == (d, z)
    # (pi, 1) squared picks up (pi, pi)_{Q_3} = -1
    assert rao_siegel_product(PI_CLASS, 1, PI_CLASS, 1, F) == (ONE_CLASS, -1)
    # group law: associativity and inverses, exhaustively
    elements = [(d, z) for d in ALL_CLASSES for z in (1, -1)]
    for (a, za), (b, zb), (c, zc) in itertools.product(elements, repeat=3):
        left = rao_siegel_product(*rao_siegel_product(a, za, b, zb, F), c, zc, F)
        right = rao_siegel_product(a, za, *rao_siegel_product(b, zb, c, zc, F), F)
        assert left == right
    for d, z in elements:
        inv = (d, hilbert(d, d, F) * z)
        assert rao_siegel_product(d, z, *inv, F) == (ONE_CLASS, 1)


def test_psi_ratio_character():
    F = LocalFieldDescriptor(3)
    assert psi_ratio_character(ONE_CLASS, F).is_trivial
    chi = psi_ratio_character(PI_CLASS, F)
    assert not chi.is_trivial
    assert chi(PI_CLASS) == -1
    for a in ALL_CLASSES:
        assert psi_ratio_character(a, F).is_trivial == a.is_square()
