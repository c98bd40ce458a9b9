"""Closure and classification of scalar subalgebras."""

from __future__ import annotations

import pytest

from confalg.cend1 import (
    CPARTIAL,
    FULL,
    PQ,
    P_ONLY,
    Q_ONLY,
    classify,
    closure,
    irreducible_on_standard,
)
from confalg.poly import MPoly, UPoly, bipoly_gcd

D = MPoly.var("d")
X = MPoly.var("x")


class TestClosure:
    def test_constants_stay_derivation_only(self):
        state = closure([MPoly.const(1)])
        assert state.status == "stabilized"
        assert state.gcd_witness == MPoly.const(1)
        assert all(not b.uses("x") for b in state.basis)

    def test_x_squared(self):
        state = closure([X**2])
        assert state.status == "stabilized"
        assert state.gcd_witness == X**2

    def test_x_and_d_generate_everything(self):
        state = closure([X, D])
        assert state.status == "stabilized"
        assert state.gcd_witness == MPoly.const(1)
        assert any(b.uses("x") for b in state.basis)

    def test_pure_p_witness_matches_generator(self):
        for p in (X, X**2 + 1, X**3 - X):
            state = closure([p])
            assert state.status == "stabilized"
            assert state.gcd_witness == bipoly_gcd(p, MPoly.zero())

    def test_monotone_in_generators(self):
        base = closure([X**2 * (D + X)])
        bigger = closure([X**2 * (D + X), X**2])
        quotient = bipoly_gcd(base.gcd_witness, bigger.gcd_witness)
        assert quotient == bigger.gcd_witness  # new witness divides the old

    def test_rejects_foreign_variables(self):
        with pytest.raises(ValueError):
            closure([MPoly.var("l")])

    def test_budget_exhaustion_reported(self):
        state = closure([X, D], rounds=0)
        assert state.status == "budget_exhausted"
        with pytest.raises(ValueError):
            classify(state)


class TestClassify:
    def test_cpartial(self):
        assert classify(closure([MPoly.const(1)])).type_tag == CPARTIAL
        assert classify(closure([D**2 + D])).type_tag == CPARTIAL

    def test_p_only(self):
        desc = classify(closure([X**2]))
        assert desc.type_tag == P_ONLY
        assert desc.p == UPoly((0, 0, 1), "x")

    def test_q_only(self):
        desc = classify(closure([(D + X) ** 3]))
        assert desc.type_tag == Q_ONLY
        assert desc.q == UPoly((0, 0, 0, 1), "z")

    def test_pq(self):
        desc = classify(closure([X * (D + X)]))
        assert desc.type_tag == PQ
        assert desc.p == UPoly((0, 1), "x")
        assert desc.q == UPoly((0, 1), "z")

    def test_full(self):
        desc = classify(closure([X, D]))
        assert desc.type_tag == FULL

    def test_idempotence_across_types(self):
        fixtures = [
            ([X**3 + X], P_ONLY),
            ([(D + X) ** 2 + (D + X)], Q_ONLY),
            ([(X**2 + 1) * (D + X)], PQ),
            ([D**3], CPARTIAL),
        ]
        for gens, tag in fixtures:
            first = classify(closure(gens))
            assert first.type_tag == tag
            # rebuild generators of the classified algebra and re-classify
            if tag == CPARTIAL:
                regen = [D]
            else:
                p_m = first.p.to_mpoly("x") if first.p else MPoly.const(1)
                q_m = (
                    first.q.retag("x").to_mpoly().substitute({"x": D + X})
                    if first.q
                    else MPoly.const(1)
                )
                core = p_m * q_m
                regen = [core, core * X, core * D]
            second = classify(closure(regen))
            assert second.type_tag == tag
            assert second.p == first.p
            assert second.q == first.q

    def test_split_reconstructs_witness(self):
        for gens in ([X * (D + X) ** 2], [(X**2 - 1) * (D + X)]):
            state = closure(gens)
            desc = classify(state)
            p_m = desc.p.to_mpoly("x") if desc.p else MPoly.const(1)
            q_m = (
                desc.q.retag("x").to_mpoly().substitute({"x": D + X})
                if desc.q
                else MPoly.const(1)
            )
            assert p_m * q_m == state.gcd_witness


class TestIrreducibility:
    def test_flags(self):
        assert irreducible_on_standard(classify(closure([X])))
        assert irreducible_on_standard(classify(closure([MPoly.const(1)])))
        assert irreducible_on_standard(classify(closure([X, D])))
        assert not irreducible_on_standard(classify(closure([D + X])))
        assert not irreducible_on_standard(classify(closure([X * (D + X)])))
