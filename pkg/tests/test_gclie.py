"""Orthogonal/symplectic generators, invariance, probes, equivariance."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from confalg.cend import AntiInvSpec, CendElem, lie_bracket, modvec
from confalg.gclie import (
    ConfBilinearForm,
    anti_fixed_part,
    bracket_closure_check,
    check_anti_fixed,
    fixed_part,
    invariance_check,
    irreducibility_probe,
    make_oc_spc_generators,
    phi_equivariance_spotcheck,
    sigma_star,
)
from confalg.poly import MPoly, UPoly
from confalg.polymat import PolyMat
from confalg.sampling import random_cend

D = MPoly.var("d")
X = MPoly.var("x")
L = MPoly.var("l")

ONE = UPoly.const(1)
XX = UPoly.variable()
P_1 = PolyMat.identity(1)
P_X = PolyMat([[XX]])
J2 = PolyMat([[UPoly.zero(), ONE], [-ONE, UPoly.zero()]])


def scalar(p: MPoly) -> CendElem:
    return CendElem.scalar(p)


def spec_for(p_mat: PolyMat, epsilon: int) -> AntiInvSpec:
    return AntiInvSpec(p_mat, PolyMat.identity(p_mat.n), epsilon, Fraction(0))


class TestGenerators:
    def test_scalar_degree_one(self):
        gens = make_oc_spc_generators(1, P_1, 1, 1)
        assert [g.n for g in gens] == [1]
        assert gens[0].a_part == scalar(X * 2 + D)

    def test_degree_zero_cancels_in_oc(self):
        gens = make_oc_spc_generators(1, P_1, 1, 0)
        assert gens == []

    def test_degree_zero_survives_in_spc(self):
        gens = make_oc_spc_generators(1, P_X, -1, 0)
        assert len(gens) == 1
        assert gens[0].a_part == scalar(MPoly.const(2))
        assert gens[0].element == scalar(X * 2)

    def test_symplectic_generators_are_anti_fixed(self):
        gens = make_oc_spc_generators(2, J2, -1, 2)
        spec = spec_for(J2, -1)
        assert gens
        for g in gens:
            assert check_anti_fixed(g.a_part, spec)

    def test_orthogonal_generators_are_anti_fixed(self):
        gens = make_oc_spc_generators(2, PolyMat.identity(2), 1, 2)
        spec = spec_for(PolyMat.identity(2), 1)
        for g in gens:
            assert check_anti_fixed(g.a_part, spec)

    def test_symmetry_claim_enforced(self):
        with pytest.raises(ValueError):
            make_oc_spc_generators(1, P_X, 1, 1)  # x is skew, not hermitian


class TestAntiFixed:
    def test_positive(self):
        assert check_anti_fixed(scalar(X * 2 + D), spec_for(P_1, 1))

    def test_sigma_fixed_rejected(self):
        assert not check_anti_fixed(scalar(-D), spec_for(P_1, 1))

    def test_zero(self):
        assert check_anti_fixed(CendElem.zero(1), spec_for(P_1, 1))

    def test_splitting_identity(self):
        rng = random.Random(71)
        for _ in range(6):
            a = random_cend(rng, 2, 2)
            minus = anti_fixed_part(a)
            plus = fixed_part(a)
            assert minus + plus == a
            assert sigma_star(minus) == -minus
            assert sigma_star(plus) == plus


class TestInvariance:
    def test_oc_scalar_generators_pass(self):
        form = ConfBilinearForm(P_1, 1)
        for g in make_oc_spc_generators(1, P_1, 1, 3):
            report = invariance_check(form, g.element, degree_cap=3)
            assert report.ok, (g.n, report.failures)

    def test_x_fails(self):
        form = ConfBilinearForm(P_1, 1)
        report = invariance_check(form, scalar(X), degree_cap=1)
        assert not report.ok

    def test_zero_passes(self):
        form = ConfBilinearForm(P_1, 1)
        assert invariance_check(form, CendElem.zero(1), degree_cap=1).ok

    def test_degenerate_rejected(self):
        form = ConfBilinearForm(PolyMat([[UPoly.zero()]]), 1)
        with pytest.raises(ValueError):
            invariance_check(form, scalar(X))


class TestBracketClosure:
    def test_oc1_closed(self):
        spec = spec_for(P_1, 1)
        gens = [g.a_part for g in make_oc_spc_generators(1, P_1, 1, 2)]
        report = bracket_closure_check(
            gens, P_1, lambda c: check_anti_fixed(c, spec)
        )
        assert report.ok, report.failures

    def test_degree_one_self_bracket_value(self):
        y1 = scalar(X * 2 + D)
        series = lie_bracket(y1, y1)
        expected = (L * 2 + D) * (X * 2 + D) * 2
        assert series.to_raw() == ((expected,),)
        assert check_anti_fixed(series.coeff(0), spec_for(P_1, 1))
        assert check_anti_fixed(series.coeff(1), spec_for(P_1, 1))

    def test_mixing_fixed_part_is_flagged(self):
        spec = spec_for(P_1, 1)
        y1 = scalar(X * 2 + D)  # anti-fixed
        w0 = scalar(MPoly.const(2))  # fixed
        report = bracket_closure_check(
            [y1, w0], P_1, lambda c: check_anti_fixed(c, spec)
        )
        assert not report.ok


class TestIrreducibilityProbe:
    def test_defining_matrix_x(self):
        gens = [scalar(MPoly.const(1)), scalar(X), scalar(D)]
        outcome = irreducibility_probe(gens, P_X, 0, modvec([1]), degree_cap=4)
        assert outcome.outcome == "irreducible"

    def test_proper_invariant_line(self):
        gens = [CendElem.matrix_unit(2, 0, 0)]
        outcome = irreducibility_probe(
            gens, PolyMat.identity(2), 0, modvec([1, 0]), degree_cap=4
        )
        assert outcome.outcome == "proper_invariant_detected"
        assert outcome.rank == 1

    def test_oc_over_x(self):
        gens = [g.a_part for g in make_oc_spc_generators(1, P_X, -1, 2)]
        outcome = irreducibility_probe(gens, P_X, 0, modvec([1]), degree_cap=4)
        assert outcome.outcome == "irreducible"

    def test_zero_start_rejected(self):
        with pytest.raises(ValueError):
            irreducibility_probe([scalar(X)], P_X, 0, modvec([0]))


class TestPhiEquivariance:
    def test_constant_generator_reduces_to_commutator(self):
        gen = CendElem.matrix_unit(2, 0, 1) - CendElem.matrix_unit(2, 1, 0)
        report = phi_equivariance_spotcheck(
            2, [(UPoly.const(1, "d"), UPoly.const(1, "d"), 0, 1, gen)]
        )
        assert report.ok, report.failures

    def test_scalar_degree_one_generator(self):
        gen = scalar(X * 2 + D)
        samples = [
            (UPoly((0, 1), "d"), UPoly.const(1, "d"), 0, 0, gen),
            (UPoly.const(1, "d"), UPoly((0, 1), "d"), 0, 0, gen),
            (UPoly((0, 0, 1), "d"), UPoly((1, 1), "d"), 0, 0, gen),
        ]
        report = phi_equivariance_spotcheck(1, samples)
        assert report.ok, report.failures

    def test_zero_tensor(self):
        gen = scalar(X * 2 + D)
        report = phi_equivariance_spotcheck(
            1, [(UPoly.zero("d"), UPoly.zero("d"), 0, 0, gen)]
        )
        assert report.ok

    def test_matrix_generators(self):
        rng = random.Random(72)
        gens = make_oc_spc_generators(2, PolyMat.identity(2), 1, 2)
        samples = []
        for _ in range(4):
            g = rng.choice(gens)
            samples.append(
                (
                    UPoly([rng.randint(-2, 2) for _ in range(2)], "d"),
                    UPoly([rng.randint(-2, 2) for _ in range(2)], "d"),
                    rng.randrange(2),
                    rng.randrange(2),
                    g.a_part,
                )
            )
        report = phi_equivariance_spotcheck(2, samples)
        assert report.ok, report.failures


class TestVirasoro:
    def test_half_shifted_element_is_orthogonal(self):
        vira = scalar(X + D.scale(Fraction(1, 2)))
        assert check_anti_fixed(vira, spec_for(P_1, 1))

    def test_bracket_relation(self):
        vira = scalar(X + D.scale(Fraction(1, 2)))
        series = lie_bracket(vira, vira)
        expected = (D + L * 2) * (X + D.scale(Fraction(1, 2)))
        assert series.to_raw() == ((expected,),)


class TestFamilyConjugacy:
    def test_congruent_forms_accepted(self):
        from confalg.gclie import family_conjugacy_verify
        from confalg.polymat import congruence_verify

        witness = PolyMat([[ONE, XX], [UPoly.zero(), ONE]])
        p = PolyMat.identity(2)
        q = congruence_verify(p, witness, 0)
        assert family_conjugacy_verify(p, q, witness, 1)

    def test_scaled_form(self):
        from confalg.gclie import family_conjugacy_verify

        assert family_conjugacy_verify(
            J2, J2.scale(3), PolyMat.identity(2), -1, Fraction(1, 3)
        )

    def test_sign_mismatch_rejected(self):
        from confalg.gclie import family_conjugacy_verify

        assert not family_conjugacy_verify(
            PolyMat.identity(2), J2, PolyMat.identity(2), 1
        )

    def test_wrong_witness_rejected(self):
        from confalg.gclie import family_conjugacy_verify

        p = PolyMat.identity(2)
        q = PolyMat.diagonal([ONE, UPoly.const(4)])
        bad = PolyMat([[ONE, XX], [UPoly.zero(), ONE]])
        assert not family_conjugacy_verify(p, q, bad, 1)
