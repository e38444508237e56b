import itertools
import random
from fractions import Fraction

import pytest

from metaplectic.hecke import TorusHeckeElement, t2lambda_base
from metaplectic.oracle import (
    ChevalleyRealization,
    OracleError,
    PadicApprox,
    PadicMatrix,
    PrecisionError,
    StabilizationError,
    cartan_invariant_of_entries,
    count_cosets,
    matrix_product,
    oracle_rows,
    reductive_satake_row,
    smith_valuations,
    verify_metaplectic_pipeline,
)
from metaplectic.rootdata import Cocharacter, antidominant_rep, pairing

P, REL = 3, 8


def pa(num, den_exp=0, p=P, rel=REL):
    return PadicApprox.from_rational(num, den_exp, p, rel)


# ---------------------------------------------------------------------
# p-adic approximations


def test_padic_from_rational():
    x = pa(18)  # 2 * 3^2
    assert x.valuation() == 2 and x.unit % 3 == 2
    y = pa(5, 3)  # 5 / 27
    assert y.valuation() == -3
    assert pa(0).is_exact_zero


def test_padic_mul_div():
    x, y = pa(6), pa(2)
    assert (x * y).valuation() == 1
    assert (x / y).valuation() == 1
    z = x / y
    assert (z * y - x).is_zero_to_precision()
    with pytest.raises(ZeroDivisionError):
        x / pa(0)


def test_padic_add_cancellation():
    x = pa(7)
    s = x - x
    assert s.is_indeterminate
    with pytest.raises(PrecisionError):
        s.valuation()
    # partial cancellation: 1 + 2 = 3 gains a valuation
    assert (pa(1) + pa(2)).valuation() == 1
    assert (pa(1) + pa(0)).valuation() == 0


def test_padic_add_with_big_o():
    x = pa(1)
    o = PadicApprox.big_o(P, 5)
    s = x + o
    assert s.valuation() == 0 and s.rel == 5
    swallowed = pa(3**6) + o
    assert swallowed.is_indeterminate and swallowed.obound == 5


def test_padic_shift():
    assert pa(1).shift(-2).valuation() == -2
    assert pa(0).shift(3).is_exact_zero


# ---------------------------------------------------------------------
# matrix realizations

SL2 = ChevalleyRealization("sl2")
SP4 = ChevalleyRealization("sp4")


def _symplectic_defect(entries, realization, p=P, rel=REL):
    J = realization.form_matrix()
    jm = [
        [
            PadicApprox.from_rational(J[i][j], 0, p, rel)
            if J[i][j]
            else PadicApprox.zero(p)
            for j in range(4)
        ]
        for i in range(4)
    ]
    gt = [[entries[j][i] for j in range(4)] for i in range(4)]
    prod = matrix_product(matrix_product(gt, jm), entries)
    return [
        [prod[i][j] - jm[i][j] for j in range(4)] for i in range(4)
    ]


def test_generators_preserve_form():
    x = pa(5, 1)
    for label in SP4.pos_units:
        m = SP4.u_pos(label, x, REL)
        defect = _symplectic_defect(m, SP4)
        assert all(e.is_zero_to_precision() for row in defect for e in row)
    for k in range(4):
        m = SP4.u_neg(k, x, REL)
        defect = _symplectic_defect(m, SP4)
        assert all(e.is_zero_to_precision() for row in defect for e in row)
    t = SP4.torus_matrix(Cocharacter((-2, 1)), P, REL)
    defect = _symplectic_defect(t, SP4)
    assert all(e.is_zero_to_precision() for row in defect for e in row)


def test_padic_matrix_membership_check():
    good = SP4.torus_matrix(Cocharacter((-1, 0)), P, REL)
    PadicMatrix(good, SP4, P)  # passes
    bad = SP4.identity(P, REL)
    bad[0][0] = pa(2)
    with pytest.raises(OracleError):
        PadicMatrix(bad, SP4, P)
    good2 = SL2.torus_matrix(Cocharacter((-3,)), P, REL)
    PadicMatrix(good2, SL2, P)
    bad2 = SL2.identity(P, REL)
    bad2[0][0] = pa(3)
    with pytest.raises(OracleError):
        PadicMatrix(bad2, SL2, P)


def test_torus_conjugation_scales_root_coordinates():
    # t u_{-beta}(x) t^{-1} = u_{-beta}(pi^{-<beta, mu>} x) at the bare entry
    from metaplectic.rootdata import Character

    positive_betas = {0: (1, -1), 1: (0, 2), 2: (1, 1), 3: (2, 0)}
    for mu in (Cocharacter((1, -2)), Cocharacter((0, 3))):
        t = SP4.torus_matrix(mu, P, REL)
        tinv = SP4.torus_matrix(-1 * mu, P, REL)
        for k, gen in enumerate(SP4.neg):
            x = pa(2, 1)
            u = SP4.u_neg(k, x, REL)
            conj = matrix_product(matrix_product(t, u), tinv)
            i, j = gen.entry
            drop = pairing(Character(positive_betas[k]), mu)
            assert conj[i][j].valuation() == x.valuation() - drop


def test_unipotent_direct_entry_property():
    # every enumerated coordinate appears bare at its designated entry
    rng = random.Random(4)
    for _ in range(40):
        pairs = [(rng.randrange(1, 27), rng.randint(0, 2)) for _ in range(4)]
        u = SP4.unipotent_from_entries(pairs, P, REL)
        for gen, (num, den) in zip(SP4.neg, pairs):
            i, j = gen.entry
            want = PadicApprox.from_rational(num, den, P, REL)
            assert (u[i][j] - want).is_zero_to_precision()


# ---------------------------------------------------------------------
# exact coset reduction: the parametrization is a bijection


def _frac_identity(size):
    return [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]


def _frac_apply_right(m, units, x):
    for (a, b), sign in units:
        for i in range(len(m)):
            m[i][b] += sign * x * m[i][a]


def _frac_apply_left(units, x, m):
    for (a, b), sign in units:
        for j in range(len(m)):
            m[a][j] += sign * x * m[b][j]


def _frac_unipotent(realization, entry_coords):
    """Unipotent element with the given canonical entry coordinates,
    over exact rationals."""
    m = _frac_identity(realization.size)
    for gen, x in zip(realization.neg, entry_coords):
        coord = x
        for sign, k1, k2 in gen.correction:
            coord += sign * entry_coords[k1] * entry_coords[k2]
        _frac_apply_right(m, gen.units, coord)
    return m


def _canonical_fraction(x: Fraction, p: int) -> Fraction:
    den = x.denominator
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    assert den == 1, "denominator must be a p power"
    pk = p**k
    num = x.numerator % pk
    return Fraction(num, pk)


def _frac_coset_reduce(realization, m, p):
    """Greedy left reduction by integral root elements; returns canonical
    coordinates of the coset (U^- cap K) m."""
    m = [row[:] for row in m]
    out = []
    for gen in realization.neg:
        i, j = gen.entry
        x = m[i][j]
        canon = _canonical_fraction(x, p)
        w = canon - x
        assert w.denominator == 1  # the correction is integral
        _frac_apply_left(gen.units, w, m)
        assert m[i][j] == canon
        out.append(canon)
    return tuple(out)


def _depth_tuples(realization, depth, p):
    reps = [Fraction(a, p**depth) for a in range(p**depth)]
    return itertools.product(reps, repeat=len(realization.neg))


def test_coset_parametrization_bijective_sp4_depth1():
    for coords in _depth_tuples(SP4, 1, P):
        u = _frac_unipotent(SP4, coords)
        assert _frac_coset_reduce(SP4, u, P) == coords


def test_coset_reduction_invariant_under_integral_left_multiplication():
    rng = random.Random(8)
    for _ in range(60):
        coords = tuple(Fraction(rng.randrange(9), 9) for _ in range(4))
        u = _frac_unipotent(SP4, coords)
        w = [row[:] for row in u]
        for _ in range(4):
            gen = SP4.neg[rng.randrange(4)]
            _frac_apply_left(gen.units, Fraction(rng.randint(-5, 5)), w)
        assert _frac_coset_reduce(SP4, w, P) == _frac_coset_reduce(SP4, u, P)
        assert _frac_coset_reduce(SP4, u, P) == coords


def test_coset_parametrization_bijective_sl2():
    for depth in (1, 2):
        for coords in _depth_tuples(SL2, depth, P):
            u = _frac_unipotent(SL2, coords)
            assert _frac_coset_reduce(SL2, u, P) == coords


# ---------------------------------------------------------------------
# Cartan invariants


def test_cartan_invariant_of_torus_points():
    for mu in ((-2,), (0,), (-5,)):
        t = SL2.torus_matrix(Cocharacter(mu), P, REL)
        assert cartan_invariant_of_entries(t, SL2).coords == antidominant_rep(
            Cocharacter(mu)
        ).coords
    for mu in ((-2, -1), (0, 0), (-3, -3), (2, -1)):
        t = SP4.torus_matrix(Cocharacter(mu), P, REL)
        assert (
            cartan_invariant_of_entries(t, SP4)
            == antidominant_rep(Cocharacter(mu))
        )


def test_cartan_invariant_sl2_example():
    # [[1,0],[p^{-1},1]] diag(p^{-1}, p): divisors (p^{-2}, p^2)
    g = [
        [pa(1, 1), PadicApprox.zero(P)],
        [pa(1, 2), pa(1, -1)],
    ]
    assert cartan_invariant_of_entries(g, SL2).coords == (-2,)


def test_cartan_invariant_identity():
    assert cartan_invariant_of_entries(SL2.identity(P, REL), SL2).coords == (0,)
    assert cartan_invariant_of_entries(SP4.identity(P, REL), SP4).coords == (0, 0)


def _random_integral_element(realization, rng, p, rel):
    m = realization.identity(p, rel)
    labels = list(realization.pos_units)
    for _ in range(6):
        if rng.random() < 0.5:
            x = pa(rng.randrange(1, p**2), 0, p, rel)
            realization.right_multiply_generator(
                m, realization.pos_units[rng.choice(labels)], x
            )
        else:
            x = pa(rng.randrange(1, p**2), 0, p, rel)
            gen = realization.neg[rng.randrange(len(realization.neg))]
            realization.right_multiply_generator(m, gen.units, x)
    return m


def test_cartan_invariant_bi_K_invariance():
    rng = random.Random(13)
    for realization, mu in ((SL2, (-2,)), (SP4, (-2, -1)), (SP4, (-1, 0))):
        t = realization.torus_matrix(Cocharacter(mu), P, REL)
        lam = antidominant_rep(Cocharacter(mu))
        for _ in range(8):
            k1 = _random_integral_element(realization, rng, P, REL)
            k2 = _random_integral_element(realization, rng, P, REL)
            g = matrix_product(matrix_product(k1, t), k2)
            assert cartan_invariant_of_entries(g, realization) == lam


def test_cartan_invariant_of_inverse_on_diagonals():
    for mu in itertools.product(range(-2, 3), repeat=2):
        lam = cartan_invariant_of_entries(
            SP4.torus_matrix(Cocharacter(mu), P, REL), SP4
        )
        inv = cartan_invariant_of_entries(
            SP4.torus_matrix(-1 * Cocharacter(mu), P, REL), SP4
        )
        assert inv == antidominant_rep(-1 * lam)


def test_smith_precision_error_on_contested_pivot():
    entries = [
        [PadicApprox.big_o(P, 0), pa(1)],
        [pa(1), pa(1)],
    ]
    with pytest.raises(PrecisionError):
        smith_valuations(entries, 2)


def test_smith_rejects_unpaired_divisors():
    g = [
        [pa(1, 1), PadicApprox.zero(P)],
        [PadicApprox.zero(P), pa(1, 1)],
    ]
    with pytest.raises(OracleError):
        cartan_invariant_of_entries(g, SL2)


# ---------------------------------------------------------------------
# coset counts


def test_sl2_counts_exact():
    lam2 = Cocharacter((-2,))
    for p in (3, 5, 7):
        assert count_cosets(lam2, lam2, 3, "sl2", p).raw_count == 1
        r1 = count_cosets(Cocharacter((-1,)), lam2, 3, "sl2", p)
        assert r1.raw_count == p - 1 and r1.count_mod_p == p - 1
        r2 = count_cosets(Cocharacter((0,)), lam2, 3, "sl2", p)
        assert r2.raw_count == p * p - p and r2.count_mod_p == 0
        assert r1.stabilized and r2.stabilized and r1.depth_used == 3


def test_count_cosets_validation():
    lam2 = Cocharacter((-2,))
    with pytest.raises(OracleError):
        count_cosets(Cocharacter((1,)), lam2, 2, "sl2", 3)  # mu not above lam
    with pytest.raises(OracleError):
        count_cosets(lam2, Cocharacter((1,)), 2, "sl2", 3)  # lam not antidominant
    with pytest.raises(OracleError):
        count_cosets(lam2, lam2, 0, "sl2", 3)


def test_sp4_shifted_cell_count_hand_value():
    # only the -a2 coordinate has a window: v(b) = -1 exactly, p - 1 choices
    lam = Cocharacter((-2, -2))
    res = count_cosets(Cocharacter((-2, -1)), lam, 3, "sp4", 3)
    assert res.raw_count == 2
    res5 = count_cosets(Cocharacter((-2, -1)), lam, 3, "sp4", 5)
    assert res5.raw_count == 4


def test_sp4_row_regression_p3():
    # raw counts frozen from a lossless full-box run (see the pruning
    # test); the mod-p zeros away from 2 lam and 2 lam + alpha_2^vee are
    # the theory-forced values
    rows = oracle_rows(Cocharacter((-2, -2)), 4, "sp4", 3)
    table = {r.mu.coords: (r.raw_count, r.count_mod_p) for r in rows}
    assert table == {
        (-2, -2): (1, 1),
        (-2, -1): (2, 2),
        (-2, 0): (6, 0),
        (-1, -1): (30, 0),
        (-1, 0): (72, 0),
        (0, 0): (1188, 0),
    }
    assert all(r.stabilized for r in rows)


def test_pruning_is_lossless_sp4_small_depth():
    # brute force with fully open windows agrees with the pruned count
    lam = Cocharacter((-1, -1))
    for mu_coords in ((-1, -1), (-1, 0), (0, 0)):
        mu = Cocharacter(mu_coords)
        pruned = count_cosets(mu, lam, 2, "sp4", 3, check_stabilization=False)
        exps = SP4.torus_exponents(mu)
        expect = sorted(lam.coords)
        count = 0
        for nums in itertools.product(range(9), repeat=4):
            u = SP4.unipotent_from_entries([(a, 2) for a in nums], 3, 8)
            for i in range(4):
                for j in range(4):
                    u[i][j] = u[i][j].shift(exps[j])
            if smith_valuations(u, 4, stop_after=2, expect=expect) is not None:
                count += 1
        assert pruned.raw_count == count


def test_stabilization_reported_when_depth_too_small():
    lam2 = Cocharacter((-2,))
    res = count_cosets(Cocharacter((0,)), lam2, 1, "sl2", 3)
    assert res.raw_count == 0  # the depth-1 box misses all valuation -2 points
    assert not res.stabilized
    with pytest.raises(StabilizationError):
        reductive_satake_row(lam2, 1, "sl2", 3)


def test_reductive_satake_row_sl2():
    row = reductive_satake_row(Cocharacter((-2,)), 4, "sl2", 3)
    assert row == TorusHeckeElement(3, {(-2,): 1, (-1,): -1})
    row5 = reductive_satake_row(Cocharacter((-2,)), 4, "sl2", 5)
    assert row5 == TorusHeckeElement(5, {(-2,): 1, (-1,): -1})


def test_reductive_satake_row_sp4_p3():
    for i in (1, 2):
        lam = 2 * t2lambda_base(i, 2)
        row = reductive_satake_row(lam, 4, "sp4", 3)
        shifted = lam + Cocharacter((1, -1) if i == 1 else (0, 1))
        assert row == TorusHeckeElement(3, {lam.coords: 1, shifted.coords: -1})


def test_pipeline_p3():
    assert verify_metaplectic_pipeline(1, 1, 3)
    assert verify_metaplectic_pipeline(1, 2, 3)
    assert verify_metaplectic_pipeline(2, 2, 3)


def test_pipeline_rejects_large_rank():
    with pytest.raises(OracleError):
        verify_metaplectic_pipeline(1, 3, 3)


def test_determinism():
    lam = Cocharacter((-2, -2))
    a = count_cosets(Cocharacter((-1, -1)), lam, 3, "sp4", 3)
    b = count_cosets(Cocharacter((-1, -1)), lam, 3, "sp4", 3)
    assert a == b
