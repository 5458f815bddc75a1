"""Tests for truncated operator matrices and their structure verifiers."""

import math

import pytest

from bernspec.exact import BernoulliParams, QuarterInt, reduce_argument
from bernspec.matrixlab import (
    TruncatedMatrix,
    analyze_w0_sparsity,
    scale_minus,
    u_entry,
    verify_block_diagonal,
    verify_block_equality,
    verify_commutation_even,
    verify_multiplication_identity,
    verify_odd_twisted_relations,
)
from bernspec.spectrum import TILDE_ONE_POINT, enumerate_spectrum, word_value

N2P5 = BernoulliParams(2, 5)
N3P3 = BernoulliParams(3, 3)


class TestEntries:
    def test_diagonal_below_zero_point_is_exact_zero(self):
        # 5*1 - 1 = 4 lies in the zero set
        entry = u_entry((1,), (1,), N2P5)
        assert entry.value.exact_zero

    def test_zero_point_diagonal_is_one(self):
        entry = u_entry((), (), N2P5)
        assert entry.value.value == 1.0
        assert entry.value.error_bound == 0.0

    def test_known_nonzero_entry(self):
        # 5*5 - 1 = 24
        entry = u_entry((1,), (1, 1), N2P5)
        assert not entry.value.exact_zero
        assert entry.value.sign == 1
        assert math.isclose(
            entry.value.value, 0.5811539214293868, abs_tol=1e-12)

    def test_scale_minus_matches_values(self):
        arg = scale_minus((1,), (1, 1), N2P5)
        assert arg == QuarterInt.from_int(24)

    def test_requires_scaling_factor(self):
        with pytest.raises(ValueError):
            u_entry((), (), BernoulliParams(2))


class TestTruncatedMatrix:
    def test_build_size(self):
        m = TruncatedMatrix.build(N2P5, 3)
        assert len(m.words) == 8
        assert len(m.entries) == 8
        assert all(len(row) == 8 for row in m.entries)

    def test_strata_order_blocks_in_mask(self):
        from bernspec.spectrum import stratum_index

        m = TruncatedMatrix.build(N2P5, 4)
        mask = m.zero_mask()
        for i, row in enumerate(m.words):
            for j, col in enumerate(m.words):
                if stratum_index(row) != stratum_index(col):
                    assert mask[i][j]

    def test_csv_header_and_size(self):
        m = TruncatedMatrix.build(N2P5, 2)
        lines = m.to_csv_text().splitlines()
        assert lines[0] == "row_word,col_word,exact_zero,sign,magnitude,error_bound"
        assert len(lines) == 1 + 4 * 4

    def test_csv_exact_zero_row_shape(self):
        m = TruncatedMatrix.build(N2P5, 2)
        zero_rows = [
            line for line in m.to_csv_text().splitlines()[1:]
            if line.split(",")[2] == "1"
        ]
        assert zero_rows
        for line in zero_rows:
            _, _, _, sign, magnitude, bound = line.split(",")
            assert sign == "0"
            assert magnitude == "0.0"
            assert bound == "0.0"

    def test_json_blocks_respect_strata(self):
        obj = TruncatedMatrix.build(N2P5, 4).to_json_obj()
        assert obj["size"] == 16
        assert obj["strata"]["zero-point"] == 1
        off_diagonal = [
            b for b in obj["blocks"] if b["row_stratum"] != b["col_stratum"]
        ]
        assert off_diagonal
        assert all(b["nonzero"] == 0 for b in off_diagonal)

    def test_pgm_layout(self):
        m = TruncatedMatrix.build(N2P5, 3)
        data = m.to_pgm_bytes()
        assert data.startswith(b"P5\n8 8\n255\n")
        assert len(data) == len(b"P5\n8 8\n255\n") + 64
        assert set(data[len(b"P5\n8 8\n255\n"):]) <= {0, 255}

    def test_svg_has_stratum_separators(self):
        svg = TruncatedMatrix.build(N2P5, 3).to_svg_text()
        # boundaries after the zero point and after stratum 0 (indices 1, 5, 7)
        assert svg.count("<line ") == 6
        assert '<line x1="12"' in svg
        assert '<line x1="60"' in svg

    def test_exports_deterministic(self):
        a = TruncatedMatrix.build(N2P5, 3)
        b = TruncatedMatrix.build(N2P5, 3)
        assert a.to_csv_text() == b.to_csv_text()
        assert a.to_json_obj() == b.to_json_obj()
        assert a.to_pgm_bytes() == b.to_pgm_bytes()
        assert a.to_svg_text() == b.to_svg_text()

    def test_write_round_trip(self, tmp_path):
        m = TruncatedMatrix.build(N2P5, 2)
        m.write_csv(tmp_path / "m.csv")
        m.write_json(tmp_path / "m.json")
        m.write_pgm(tmp_path / "m.pgm")
        m.write_svg(tmp_path / "m.svg")
        assert (tmp_path / "m.csv").read_text() == m.to_csv_text()
        assert (tmp_path / "m.pgm").read_bytes() == m.to_pgm_bytes()
        assert (tmp_path / "m.svg").read_text() == m.to_svg_text()


class TestBlockStructure:
    @pytest.mark.parametrize("params,digits", [
        (N2P5, 5),
        (BernoulliParams(2, 3), 4),
        (N3P3, 4),
        (BernoulliParams(4, 7), 3),
    ])
    def test_block_diagonal(self, params, digits):
        report = verify_block_diagonal(params, digits)
        assert report.passed
        assert report.checked > 0

    @pytest.mark.parametrize("params,digits,k_max", [
        (N2P5, 5, 3),
        (N3P3, 4, 2),
        (BernoulliParams(4, 3), 4, 2),
    ])
    def test_block_equality(self, params, digits, k_max):
        report = verify_block_equality(params, digits, k_max)
        assert report.passed
        assert report.checked > 0

    def test_block_equality_check_count(self):
        # k = 1, 2, 3 share 8, 4, 2 stratum-0 words of a depth-5 truncation
        report = verify_block_equality(N2P5, 5, 3)
        assert report.checked == 8 * 8 + 4 * 4 + 2 * 2


class TestCommutationEven:
    @pytest.mark.parametrize("params,digits", [
        (N2P5, 5),
        (BernoulliParams(2, 3), 4),
        (BernoulliParams(4, 3), 3),
    ])
    def test_passes_for_even_n(self, params, digits):
        report = verify_commutation_even(params, digits)
        assert report.passed
        assert report.checked > 0

    def test_check_count(self):
        report = verify_commutation_even(N2P5, 5)
        assert report.checked == 16 * 16 + 16 * 16

    def test_rejects_odd_n(self):
        with pytest.raises(ValueError):
            verify_commutation_even(N3P3, 3)

    def test_bit_one_isometry_does_not_commute(self):
        # control: the matched-coefficient probe is not vacuous; the same
        # probe applied to the bit-1 isometry finds genuine mismatches
        params = N2P5
        base, half, p = params.base, params.half_n, params.require_p()
        mismatches = 0
        words = enumerate_spectrum(params, 3)
        for g in words:
            gv = word_value(g, params)
            for x in words:
                xv = word_value(x, params)
                swapped = p * (half + base * gv) - (half + base * xv)
                plain = p * gv - xv
                if reduce_argument(swapped, params) != \
                        reduce_argument(plain, params):
                    mismatches += 1
        assert mismatches > 0


class TestOddTwistedRelations:
    @pytest.mark.parametrize("params,digits", [
        (N3P3, 3),
        (BernoulliParams(3, 5), 3),
        (BernoulliParams(5, 3), 2),
    ])
    def test_passes_for_odd_n(self, params, digits):
        report = verify_odd_twisted_relations(params, digits)
        assert report.passed
        assert report.checked > 0

    def test_rejects_even_n(self):
        with pytest.raises(ValueError):
            verify_odd_twisted_relations(N2P5, 3)

    def test_swapped_branch_signs_fail(self):
        # control: applying the sign pattern of the wrong branch breaks;
        # the even-range coefficients of words starting 0 do not flip
        params = BernoulliParams(3, 5)
        base, p = params.base, params.require_p()
        mismatches = 0
        for g in enumerate_spectrum(params, 3):
            gv = word_value(g, params)
            if g and g[0] == 1:
                continue
            for x in enumerate_spectrum(params, 3):
                xv = word_value(x, params)
                even = reduce_argument(p * gv - base * xv, params)
                even_shift = reduce_argument(
                    base * p * gv - base * (base * xv), params)
                if even_shift != (-even[0], even[1]):
                    mismatches += 1
        assert mismatches > 0


class TestMultiplicationIdentity:
    def test_passes(self):
        report = verify_multiplication_identity(6)
        assert report.passed
        assert report.checked == 32 * 32

    def test_minimal_depth(self):
        report = verify_multiplication_identity(1)
        assert report.passed
        assert report.checked == 1

    def test_rejects_empty_truncation(self):
        with pytest.raises(ValueError):
            verify_multiplication_identity(0)


class TestSparsity:
    def test_mask_holds_at_depth_six(self):
        report = analyze_w0_sparsity(6)
        assert report.passed
        sizes = {
            (b.row_class, b.col_class): (b.rows, b.cols) for b in report.blocks
        }
        assert sizes[(TILDE_ONE_POINT, TILDE_ONE_POINT)] == (1, 1)
        assert sizes[(0, 0)] == (16, 16)
        assert sizes[(4, 4)] == (1, 1)

    def test_star_rule(self):
        report = analyze_w0_sparsity(5)
        for b in report.blocks:
            one_sided = (b.row_class == 0) != (b.col_class == 0)
            assert b.expected_zero == (not one_sided)

    def test_class_zero_rows_against_one_point_has_single_nonzero(self):
        # the only nonzero entry with column the point 1 sits at row 5
        report = analyze_w0_sparsity(6)
        block = next(
            b for b in report.blocks
            if b.row_class == 0 and b.col_class == TILDE_ONE_POINT)
        assert block.nonzero_count == 1
        assert block.witness == ((1, 1), (1,))
        assert block.exact_one == ((1, 1), (1,))

    def test_higher_class_rows_against_class_zero_all_nonzero(self):
        report = analyze_w0_sparsity(6)
        for b in report.blocks:
            if isinstance(b.row_class, int) and b.row_class >= 1 \
                    and b.col_class == 0:
                assert b.nonzero_count == b.rows * b.cols

    def test_exact_one_in_class_zero_star_blocks(self):
        report = analyze_w0_sparsity(7, tilde_max=4)
        for k in (1, 2, 3, 4):
            block = next(
                b for b in report.blocks
                if b.row_class == 0 and b.col_class == k)
            assert block.exact_one is not None
            row, col = block.exact_one
            assert scale_minus(row, col, N2P5).numerator == 0

    def test_truncation_starves_deep_star_block(self):
        # at depth 6 the class (0, 4) star block has no representable
        # nonzero entry yet; one digit more and a witness appears
        shallow = analyze_w0_sparsity(6)
        block = next(
            b for b in shallow.blocks
            if b.row_class == 0 and b.col_class == 4)
        assert not block.expected_zero
        assert block.nonzero_count == 0
        assert not shallow.all_star_blocks_witnessed

        deep = analyze_w0_sparsity(7, tilde_max=4)
        assert deep.all_star_blocks_witnessed

    def test_tilde_max_drops_classes(self):
        report = analyze_w0_sparsity(6, tilde_max=2)
        labels = {b.row_class for b in report.blocks}
        assert labels == {TILDE_ONE_POINT, 0, 1, 2}

    def test_json_shape(self):
        report = analyze_w0_sparsity(4)
        obj = report.blocks[0].to_json_obj()
        assert set(obj) == {
            "row_class", "col_class", "expected_zero", "rows", "cols",
            "nonzero_count", "witness", "exact_one",
        }
