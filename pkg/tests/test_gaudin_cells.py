import cmath

import numpy as np
import pytest

from cmcells.characters import b_invariant, irr_characters
from cmcells.cyclotomic_numerics import QQ, embed_complex
from cmcells.gaudin_cells import (
    PathSpec,
    cellular_characters,
    euler_minpoly_check,
    gaudin_matrices,
    gaudin_point,
    left_cells,
    right_cells,
    track_spectrum,
    two_sided_candidate,
)
from cmcells.reflection_groups import (
    build_cyclic,
    build_dihedral,
    build_weyl_b2,
    kappa_inverse,
    param_c,
    param_c_zero,
    param_k,
    regular_vector,
)

B2 = build_weyl_b2()
C2 = build_cyclic(2)
C3 = build_cyclic(3)
C4 = build_cyclic(4)


def c_b2(a, b):
    return param_c(B2, {"a": a, "b": b})


def k_cyclic(W, kvals):
    return kappa_inverse(param_k(W, kvals), W)


def block_sets(partition):
    return sorted(sorted(b.elements) for b in partition.blocks)


def char_multiset(chars):
    out = []
    for ch in chars:
        out.append(tuple(sorted((n, m) for n, m in ch.mults if m)))
    return sorted(out)


# ---------------------------------------------------------------------------
# operator entry structure


class TestGaudinMatrices:
    def test_a1_closed_form(self):
        c = param_c(C2, [QQ(3, 2)])
        point = gaudin_point(C2, c, v=(QQ(2),), vstar=(QQ(5),))
        ops = gaudin_matrices(C2, point)
        m, g = 5.0, 1.5 * 1.0 / 2.0
        want = np.array([[m, -g], [-g, -m]])
        assert np.allclose(ops.matrices[0], want, atol=1e-12)

    def test_vstar_zero_kills_diagonal(self):
        point = gaudin_point(B2, c_b2(1, 2),
                             v=regular_vector(B2, "entries:v"),
                             vstar=(0, 0))
        ops = gaudin_matrices(B2, point)
        for mat in ops.matrices:
            assert np.allclose(np.diag(mat), 0.0)

    def test_c_zero_is_diagonal(self):
        vstar = regular_vector(B2, "entries:vs", dual=True)
        point = gaudin_point(B2, param_c_zero(B2),
                             v=regular_vector(B2, "entries:v"),
                             vstar=vstar)
        ops = gaudin_matrices(B2, point)
        cov = {w: np.array([[complex(embed_complex(x)) for x in row]
                            for row in B2.elements[B2.inverse[w]]]).T
               for w in range(B2.order)}
        vs = np.array([complex(embed_complex(x)) for x in vstar])
        for i, mat in enumerate(ops.matrices):
            assert np.allclose(mat, np.diag(np.diag(mat)))
            for w in range(B2.order):
                assert mat[w, w] == pytest.approx((cov[w] @ vs)[i])

    @pytest.mark.parametrize("W,c", [
        (B2, c_b2(QQ(1, 3), QQ(-7, 2))),
        (C4, k_cyclic(C4, [3, 1, 1, -5])),
        (build_dihedral(5), None),
    ], ids=["b2", "cyclic4", "dihedral5"])
    def test_commutation(self, W, c):
        if c is None:
            c = param_c(W, [QQ(2) for _ in W.classes])
        point = gaudin_point(W, c,
                             v=regular_vector(W, "comm:v"),
                             vstar=regular_vector(W, "comm:vs", dual=True))
        ops = gaudin_matrices(W, point)
        assert ops.commutation_residual <= 1e-9

    def test_non_regular_anchor_rejected(self):
        c = c_b2(1, 2)
        with pytest.raises(ValueError, match="not regular"):
            gaudin_matrices(B2, gaudin_point(B2, c, v=(1, 0), vstar=(0, 0)))


# ---------------------------------------------------------------------------
# path tracking


class TestTrackSpectrum:
    def test_a1_closed_form_path(self):
        c = param_c(C2, [QQ(1)])
        v = regular_vector(C2, "a1:v")
        vstar = regular_vector(C2, "a1:vs", dual=True)
        paths = track_spectrum(C2, PathSpec(c=c, v=v, vstar=vstar), seed=1)
        m = complex(embed_complex(vstar[0]))
        g = 1.0 / complex(embed_complex(v[0]))
        assert len(paths) == 2
        for path in paths:
            for t, joint in path.samples:
                want = abs(cmath.sqrt((1 - t) ** 2 * m ** 2 + t ** 2 * g ** 2))
                assert abs(joint[0]) == pytest.approx(want, abs=1e-10)

    def test_c_zero_paths_decay_linearly(self):
        v = regular_vector(B2, "zero:v")
        vstar = regular_vector(B2, "zero:vs", dual=True)
        paths = track_spectrum(
            B2, PathSpec(c=param_c_zero(B2), v=v, vstar=vstar), seed=0)
        assert len(paths) == B2.order
        for path in paths:
            start = np.array(path.samples[0][1])
            for t, joint in path.samples:
                assert np.allclose(np.array(joint), (1 - t) * start,
                                   atol=1e-10)
            assert max(abs(x) for x in path.terminal) < 1e-10

    def test_b2_terminal_count(self):
        v = regular_vector(B2, "count:v")
        vstar = regular_vector(B2, "count:vs", dual=True)
        paths = track_spectrum(B2, PathSpec(c=c_b2(1, 2), v=v, vstar=vstar),
                               seed=3)
        assert len(paths) == 8
        rounded = {tuple(np.round(np.array(p.terminal), 6)) for p in paths}
        assert len(rounded) == 6

    def test_deterministic_given_seed(self):
        v = regular_vector(B2, "det:v")
        vstar = regular_vector(B2, "det:vs", dual=True)
        spec = PathSpec(c=c_b2(1, 2), v=v, vstar=vstar)
        first = track_spectrum(B2, spec, seed=9)
        second = track_spectrum(B2, spec, seed=9)
        assert [p.samples for p in first] == [p.samples for p in second]


# ---------------------------------------------------------------------------
# left cells


class TestLeftCells:
    def test_b2_generic_blocks(self):
        part = left_cells(B2, c_b2(1, 2), seed=0)
        got = {frozenset(b.elements) for b in part.blocks}
        assert got == {frozenset({"1"}), frozenset({"s"}),
                       frozenset({"tst"}), frozenset({"stst"}),
                       frozenset({"t", "st"}), frozenset({"ts", "sts"})}

    def test_b2_equal_parameters(self):
        part = left_cells(B2, c_b2(1, 1), seed=0)
        got = {frozenset(b.elements) for b in part.blocks}
        assert got == {frozenset({"1"}), frozenset({"stst"}),
                       frozenset({"s", "ts", "sts"}),
                       frozenset({"t", "st", "tst"})}

    def test_cyclic_fibers(self):
        part = left_cells(C3, k_cyclic(C3, [1, 1, -2]), seed=0)
        got = {frozenset(b.elements) for b in part.blocks}
        assert got == {frozenset({"1", "s"}), frozenset({"ss"})}

    def test_c_zero_single_block(self):
        part = left_cells(B2, param_c_zero(B2), seed=0)
        assert block_sets(part) == [sorted(B2.words)]
        assert part.blocks[0].euler_limit == 0

    def test_euler_limits_pin_blocks(self):
        part = left_cells(B2, c_b2(1, 2), seed=0)
        by_set = {frozenset(b.elements): b.euler_limit for b in part.blocks}
        assert by_set[frozenset({"1"})] == pytest.approx(-6)
        assert by_set[frozenset({"s"})] == pytest.approx(-2)
        assert by_set[frozenset({"tst"})] == pytest.approx(2)
        assert by_set[frozenset({"stst"})] == pytest.approx(6)
        assert by_set[frozenset({"t", "st"})] == pytest.approx(0)

    def test_diagnostics_record_run(self):
        part = left_cells(B2, c_b2(1, 2), seed=4)
        diag = part.diagnostics
        assert diag["side"] == "left"
        assert diag["regime"] == "generic"
        assert "Euler limit" in diag["convention"]
        raw = [w for blk in diag["raw_blocks"] for w in blk]
        assert sorted(raw) == sorted(B2.words)
        assert sorted(len(b) for b in diag["raw_blocks"]) == [1, 1, 1, 1, 2, 2]


# ---------------------------------------------------------------------------
# right cells


class TestRightCells:
    def test_cyclic_right_equals_left(self):
        c = k_cyclic(C4, [3, 1, 1, -5])
        left = left_cells(C4, c, seed=2)
        right = right_cells(C4, c, seed=2)
        assert left.sets() == right.sets()
        assert block_sets(right) == [["1"], ["s", "ss"], ["sss"]]

    def test_b2_right_blocks_are_inverses(self):
        part = right_cells(B2, c_b2(1, 2), seed=0)
        got = {frozenset(b.elements) for b in part.blocks}
        assert got == {frozenset({"1"}), frozenset({"s"}),
                       frozenset({"tst"}), frozenset({"stst"}),
                       frozenset({"t", "ts"}), frozenset({"st", "sts"})}
        assert sorted(len(b.elements) for b in part.blocks) == [1, 1, 1, 1,
                                                                2, 2]

    def test_b2_equal_parameters(self):
        part = right_cells(B2, c_b2(2, 2), seed=1)
        got = {frozenset(b.elements) for b in part.blocks}
        assert got == {frozenset({"1"}), frozenset({"stst"}),
                       frozenset({"s", "st", "sts"}),
                       frozenset({"t", "ts", "tst"})}

    def test_c_zero_single_block(self):
        part = right_cells(B2, param_c_zero(B2), seed=0)
        assert block_sets(part) == [sorted(B2.words)]

    def test_kind_field(self):
        part = right_cells(C3, k_cyclic(C3, [1, 1, -2]), seed=0)
        assert part.kind == "right"
        assert part.diagnostics["side"] == "right"


# ---------------------------------------------------------------------------
# two-sided candidates


class TestTwoSided:
    def test_b2_equal_parameters(self):
        part = two_sided_candidate(B2, c_b2(1, 1), seed=0)
        got = {frozenset(b.elements) for b in part.blocks}
        assert got == {frozenset({"1"}), frozenset({"stst"}),
                       frozenset(set(B2.words) - {"1", "stst"})}
        assert sorted(len(b.elements) for b in part.blocks) == [1, 1, 6]
        assert part.exact is True

    def test_b2_generic_families(self):
        part = two_sided_candidate(B2, c_b2(1, 2), seed=0)
        got = {frozenset(b.elements) for b in part.blocks}
        assert got == {frozenset({"1"}), frozenset({"s"}),
                       frozenset({"tst"}), frozenset({"stst"}),
                       frozenset({"t", "st", "ts", "sts"})}

    def test_b2_opposite_parameters(self):
        part = two_sided_candidate(B2, c_b2(1, -1), seed=0)
        sizes = sorted(len(b.elements) for b in part.blocks)
        assert sizes == [1, 1, 6]
        by_size = {len(b.elements): b for b in part.blocks}
        assert by_size[1].euler_limit in (pytest.approx(4),
                                          pytest.approx(-4))

    def test_cyclic_fibers(self):
        c = k_cyclic(C4, [3, 1, 1, -5])
        part = two_sided_candidate(C4, c, seed=0)
        assert block_sets(part) == [["1"], ["s", "ss"], ["sss"]]
        assert part.exact is True

    def test_coarsens_left_cells(self):
        for c in (c_b2(1, 2), c_b2(1, 1)):
            left = left_cells(B2, c, seed=0)
            two = two_sided_candidate(B2, c, seed=0)
            for block in left.blocks:
                members = set(block.elements)
                assert any(members <= set(b.elements) for b in two.blocks)

    def test_block_sizes_match_family_dims(self):
        from cmcells.euler_families import cm_families
        for c in (c_b2(1, 2), c_b2(3, 3), c_b2(1, -1)):
            part = two_sided_candidate(B2, c, seed=0)
            fam = cm_families(B2, c)
            assert sorted(len(b.elements) for b in part.blocks) == \
                sorted(b.sum_dim_sq for b in fam.blocks)


# ---------------------------------------------------------------------------
# cellular characters


class TestCellularCharacters:
    def test_b2_generic_multiset(self):
        chars = cellular_characters(B2, c_b2(1, 2), seed=0)
        assert char_multiset(chars) == sorted([
            (("1", 1),), (("eps", 1),), (("eps_s", 1),), (("eps_t", 1),),
            (("chi", 1),), (("chi", 1),),
        ])

    def test_b2_equal_multiset(self):
        chars = cellular_characters(B2, c_b2(1, 1), seed=0)
        assert char_multiset(chars) == sorted([
            (("1", 1),), (("eps", 1),),
            (("chi", 1), ("eps_s", 1)), (("chi", 1), ("eps_t", 1)),
        ])

    def test_cyclic_fiber_characters(self):
        chars = cellular_characters(C3, k_cyclic(C3, [1, 1, -2]), seed=0)
        assert char_multiset(chars) == sorted([
            (("1", 1), ("det^2", 1)), (("det", 1),),
        ])

    def test_blocks_align_with_left_cells(self):
        c = c_b2(1, 2)
        left = left_cells(B2, c, seed=0)
        chars = cellular_characters(B2, c, seed=0)
        assert [ch.elements for ch in chars] == \
            [b.elements for b in left.blocks]
        for ch in chars:
            assert ch.dim == len(ch.elements)

    @pytest.mark.parametrize("W,c", [
        (B2, c_b2(1, 2)),
        (B2, c_b2(2, 2)),
        (B2, param_c_zero(B2)),
        (C3, k_cyclic(C3, [1, 1, -2])),
        (C4, k_cyclic(C4, [3, 1, 1, -5])),
    ], ids=["b2-generic", "b2-equal", "b2-zero", "cyclic3", "cyclic4"])
    def test_sum_rules(self, W, c):
        chars = cellular_characters(W, c, seed=0)
        dims = {chi.name: int(chi.dim) for chi in irr_characters(W)}
        totals = {name: 0 for name in dims}
        for ch in chars:
            mults = dict(ch.mults)
            assert sum(m * dims[n] for n, m in mults.items()) == \
                len(ch.elements)
            for name, mult in mults.items():
                assert mult >= 0
                totals[name] += mult
        assert totals == dims

    @pytest.mark.parametrize("W,c", [
        (B2, c_b2(1, 2)),
        (B2, c_b2(1, 1)),
        (C4, k_cyclic(C4, [3, 1, 1, -5])),
    ], ids=["b2-generic", "b2-equal", "cyclic4"])
    def test_unique_minimal_b_constituent(self, W, c):
        chars = cellular_characters(W, c, seed=0)
        b_of = {chi.name: b_invariant(W, chi) for chi in irr_characters(W)}
        for ch in chars:
            present = [n for n, m in ch.mults if m]
            least = min(b_of[n] for n in present)
            assert sum(1 for n in present if b_of[n] == least) == 1

    def test_generic_two_dim_cells_are_irreducible(self):
        chars = cellular_characters(B2, c_b2(1, 2), seed=0)
        for ch in chars:
            present = {n: m for n, m in ch.mults if m}
            if "chi" in present:
                assert present == {"chi": 1}
                assert len(ch.elements) == 2


# ---------------------------------------------------------------------------
# determinism and partition invariants


class TestDeterminism:
    @pytest.mark.parametrize("W,c", [
        (B2, c_b2(1, 2)),
        (C4, k_cyclic(C4, [3, 1, 1, -5])),
    ], ids=["b2", "cyclic4"])
    def test_ten_seeds_agree(self, W, c):
        outputs = set()
        for seed in range(10):
            left = left_cells(W, c, seed=seed)
            right = right_cells(W, c, seed=seed)
            chars = cellular_characters(W, c, seed=seed)
            outputs.add((
                tuple(b.elements for b in left.blocks),
                tuple(b.elements for b in right.blocks),
                tuple((ch.elements, ch.mults) for ch in chars),
            ))
        assert len(outputs) == 1

    def test_partition_property(self):
        for part in (left_cells(B2, c_b2(5, 3), seed=6),
                     right_cells(B2, c_b2(5, 3), seed=6),
                     two_sided_candidate(B2, c_b2(5, 3), seed=6)):
            elements = [w for b in part.blocks for w in b.elements]
            assert sorted(elements) == sorted(B2.words)
            assert sum(len(b.elements) for b in part.blocks) == B2.order


# ---------------------------------------------------------------------------
# unsupported regimes and groups


class TestUnsupported:
    @pytest.mark.parametrize("fn", [left_cells, right_cells,
                                    cellular_characters],
                             ids=["left", "right", "cellular"])
    def test_b2_opposite_refused(self, fn):
        with pytest.raises(ValueError, match="opposite"):
            fn(B2, c_b2(1, -1), seed=0)

    @pytest.mark.parametrize("fn", [left_cells, right_cells,
                                    cellular_characters],
                             ids=["left", "right", "cellular"])
    def test_b2_axis_refused(self, fn):
        with pytest.raises(ValueError, match="axis"):
            fn(B2, c_b2(0, 2), seed=0)

    def test_dihedral_has_no_model(self):
        W = build_dihedral(5)
        c = param_c(W, [QQ(1) for _ in W.classes])
        with pytest.raises(ValueError, match="exact cell model"):
            left_cells(W, c, seed=0)
        with pytest.raises(ValueError, match="exact cell model"):
            two_sided_candidate(W, c, seed=0)


# ---------------------------------------------------------------------------
# Euler minimal polynomial oracle


class TestMinpoly:
    def test_b2(self):
        report = euler_minpoly_check(B2, c_b2(1, 2), samples=8, seed=0)
        assert report.status == "ok"
        assert report.worst_rel_err <= 1e-8

    def test_b2_c_zero(self):
        report = euler_minpoly_check(B2, param_c_zero(B2), samples=4, seed=0)
        assert report.status == "ok"

    @pytest.mark.parametrize("d,kvals", [
        (2, [1, -1]), (3, [1, 1, -2]), (5, [2, -3, 2, -3, 2]),
    ], ids=["d2", "d3", "d5"])
    def test_cyclic(self, d, kvals):
        W = build_cyclic(d)
        report = euler_minpoly_check(W, k_cyclic(W, kvals), samples=8, seed=1)
        assert report.status == "ok"
        assert report.worst_rel_err <= 1e-8

    def test_dihedral_rejected(self):
        W = build_dihedral(6)
        with pytest.raises(ValueError, match="minimal polynomial"):
            euler_minpoly_check(W, param_c(W, [QQ(1), QQ(2)]), samples=1)
