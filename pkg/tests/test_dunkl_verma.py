import random

import pytest

from cmcells.cyclotomic_numerics import QQ, canonical_scalar, zeta
from cmcells.characters import irr_characters, irr_representations
from cmcells.dunkl_verma import (
    BracketReport,
    OperatorOnSlice,
    VermaSlice,
    c_from_k_formula,
    c_from_trace,
    check_bracket,
    dunkl_act,
    euler_on_verma,
    regular_representation,
    w_operator,
    x_operator,
    y_operator,
)
from cmcells.characters import ClassFunction
from cmcells.reflection_groups import (
    build_cyclic,
    build_dihedral,
    build_weyl_b2,
    kappa,
    param_c,
    param_c_zero,
)

SMALL_BUILTINS = [
    build_cyclic(2), build_cyclic(3), build_cyclic(4),
    build_weyl_b2(), build_dihedral(3),
]


def _ids(groups):
    return [W.name for W in groups]


def _random_params(W, rng):
    return param_c(W, [QQ(rng.randint(-9, 9), rng.randint(1, 6))
                       for _ in W.classes])


def _basis_covectors(W):
    return [tuple(QQ(1) if j == i else QQ(0) for j in range(W.dim))
            for i in range(W.dim)]


# ---------------------------------------------------------------------------
# the defining relations, checked exactly


@pytest.mark.parametrize("W", SMALL_BUILTINS, ids=_ids(SMALL_BUILTINS))
class TestBracket:
    def test_relations_hold(self, W):
        rng = random.Random(f"bracket:{W.name}")
        for _ in range(3):
            rep = check_bracket(W, _random_params(W, rng), N=5)
            assert rep.status == "ok"
            assert rep.witnesses == ()
            n = W.dim
            assert rep.pairs_checked == n * n + n * (n - 1)

    def test_zero_parameters(self, W):
        # c = 0 degenerates y to a plain derivative; relations still hold
        rep = check_bracket(W, param_c_zero(W), N=4)
        assert rep.status == "ok"

    def test_report_fields(self, W):
        rep = check_bracket(W, param_c_zero(W), N=3)
        assert isinstance(rep, BracketReport)
        assert rep.group == W.name
        assert rep.N == 3


def test_bracket_larger_truncation():
    W = build_weyl_b2()
    c = param_c(W, [QQ(1, 2), QQ(-3)])
    assert check_bracket(W, c, N=8).status == "ok"


# ---------------------------------------------------------------------------
# lowering action in closed form, rank 1


class TestRankOneAction:
    def test_lowering_on_monomials(self):
        # for W = Z/2: y.(x^m ox e) = -2c x^(m-1) ox s.e when m is odd,
        # and 0 when m is even
        W = build_cyclic(2)
        c = param_c(W, [QQ(5, 3)])
        E = regular_representation(W)
        sl = VermaSlice(W, c, E, 5)
        s = W.reflections[0].element
        for m in range(6):
            for k in range(2):
                vec = {sl.basis_index((m,), k): QQ(1)}
                got = dunkl_act(sl, (QQ(1),), vec)
                if m % 2 == 0:
                    assert got == {}
                else:
                    target = sl.basis_index((m - 1,), 1 - k)
                    assert got == {target: QQ(-10, 3)}
        # the action is W-equivariant in the representation slot through s
        assert E.matrices[s][1][0] == 1

    def test_commutator_is_group_term(self):
        W = build_cyclic(2)
        cval = QQ(7, 4)
        c = param_c(W, [cval])
        E = regular_representation(W)
        sl = VermaSlice(W, c, E, 4)
        y = y_operator(sl, (QQ(1),))
        x = x_operator(sl, (QQ(1),))
        lhs = y.compose(x).sub(x.compose(y))
        s_op = w_operator(sl, W.reflections[0].element)
        expect = s_op.scale(QQ(-2) * cval)
        diff = lhs.sub(expect)
        assert diff.is_zero()


# ---------------------------------------------------------------------------
# Euler scalars


class TestEulerScalarsB2:
    CASES = [
        (QQ(1), QQ(2)),
        (QQ(1), QQ(1)),
        (QQ(1), QQ(-1)),
        (QQ(0), QQ(3)),
        (QQ(-2, 3), QQ(5, 7)),
    ]

    @pytest.mark.parametrize("a,b", CASES)
    def test_closed_forms(self, a, b):
        W = build_weyl_b2()
        c = param_c(W, {"a": a, "b": b})
        want = {
            "1": -2 * (a + b),
            "eps": 2 * (a + b),
            "eps_s": 2 * a - 2 * b,
            "eps_t": 2 * b - 2 * a,
            "chi": QQ(0),
        }
        for E in irr_representations(W):
            assert euler_on_verma(W, c, E) == want[E.name]


class TestEulerScalarAgreement:
    @pytest.mark.parametrize("W", SMALL_BUILTINS, ids=_ids(SMALL_BUILTINS))
    def test_three_forms_agree(self, W):
        rng = random.Random(f"euler:{W.name}")
        chars = irr_characters(W)
        reps = irr_representations(W)
        for _ in range(5):
            c = _random_params(W, rng)
            k = kappa(c, W)
            for chi, E in zip(chars, reps):
                v1 = euler_on_verma(W, c, E)
                v2 = c_from_trace(W, chi, c)
                v3 = c_from_k_formula(W, chi, k)
                assert v1 == v2 == v3

    @pytest.mark.parametrize("d", [2, 3, 5, 6])
    def test_cyclic_oracle(self, d):
        # the det^r module must see the scalar d * k_{-r mod d}
        W = build_cyclic(d)
        rng = random.Random(f"cyclic-euler:{d}")
        for _ in range(5):
            c = _random_params(W, rng)
            kd = kappa(c, W).as_dict()
            for r, chi in enumerate(irr_characters(W)):
                want = canonical_scalar(d * kd[(0, (-r) % d)])
                assert c_from_trace(W, chi, c) == want


class TestEulerOperatorIdentity:
    @pytest.mark.parametrize("W", [build_weyl_b2(), build_cyclic(3)],
                             ids=["b2", "cyclic(3)"])
    def test_scalar_on_full_slice(self, W):
        # sum_i x_i y_i + sum_s det(s) c_s s acts by the Euler scalar on
        # every degree of the slice, not only the lowest one
        rng = random.Random(f"euler-op:{W.name}")
        c = _random_params(W, rng)
        cd = c.as_dict()
        for E in irr_representations(W):
            sl = VermaSlice(W, c, E, 4)
            ops_y = [y_operator(sl, b) for b in _basis_covectors(W)]
            ops_x = [x_operator(sl, b) for b in _basis_covectors(W)]
            total = None
            for x, y in zip(ops_x, ops_y):
                term = x.compose(y)
                total = term if total is None else total.add(term)
            for r in W.reflections:
                term = w_operator(sl, r.element).scale(
                    canonical_scalar(r.det * cd[r.class_id]))
                total = total.add(term)
            scalar = euler_on_verma(W, c, E)
            ident = OperatorOnSlice(sl, {
                idx: {idx: scalar} for idx in total.columns})
            assert total.sub(ident).is_zero()


# ---------------------------------------------------------------------------
# guards


class TestGuards:
    def test_wrong_group_rejected(self):
        W = build_weyl_b2()
        other = build_cyclic(3)
        E = irr_representations(other)[0]
        with pytest.raises(ValueError):
            euler_on_verma(W, param_c_zero(W), E)
        with pytest.raises(ValueError):
            VermaSlice(W, param_c_zero(W), E, 3)

    def test_k_formula_rejects_non_character(self):
        W = build_cyclic(3)
        k = kappa(param_c(W, [QQ(1), QQ(2)]), W)
        fake = ClassFunction(W.name, "bogus", (QQ(1), QQ(1, 2), QQ(0)))
        with pytest.raises(AssertionError):
            c_from_k_formula(W, fake, k)

    def test_operator_undefined_off_domain(self):
        W = build_cyclic(2)
        sl = VermaSlice(W, param_c_zero(W), regular_representation(W), 2)
        x = x_operator(sl, (QQ(1),))
        top = sl.basis_index((2,), 0)
        with pytest.raises(KeyError):
            x.apply({top: QQ(1)})

    def test_slice_needs_positive_degree(self):
        W = build_cyclic(2)
        with pytest.raises(ValueError):
            VermaSlice(W, param_c_zero(W), regular_representation(W), 0)


# ---------------------------------------------------------------------------
# operator plumbing


class TestOperators:
    def test_group_action_is_homomorphism(self):
        W = build_weyl_b2()
        sl = VermaSlice(W, param_c_zero(W), regular_representation(W), 3)
        for g in (1, 2, 5):
            for h in (1, 3, 7):
                lhs = w_operator(sl, g).compose(w_operator(sl, h))
                rhs = w_operator(sl, W.product(g, h))
                assert lhs.sub(rhs).is_zero()

    def test_division_tables_cached(self):
        W = build_dihedral(3)
        c = param_c(W, [QQ(1)])
        E = regular_representation(W)
        VermaSlice(W, c, E, 4)
        y_operator(VermaSlice(W, c, E, 4), (QQ(1), QQ(0)))
        assert ("dunkl_division", 4) in W.cache

    def test_regular_representation_permutes(self):
        W = build_cyclic(4)
        E = regular_representation(W)
        assert E.dim == 4
        for g in range(W.order):
            mat = E.matrices[g]
            for col in range(4):
                ones = [row for row in range(4) if mat[row][col] != 0]
                assert len(ones) == 1
                assert mat[ones[0]][col] == 1
                assert ones[0] == W.product(g, col)
