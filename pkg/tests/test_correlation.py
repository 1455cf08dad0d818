import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumassess.correlation import (
    CorrelationReport,
    ScoreMatrix,
    all_examples,
    average_ranks,
    correlate_level,
    filter_systems,
    matrix_from_grades,
    pearson,
    rmse,
    spearman,
    summary_level,
    system_level,
)
from sumassess.corpus import load_corpus
from sumassess.errors import AlignmentError, UndefinedCorrelationError

from oracles import pearson_oracle, ranks_oracle, rmse_oracle, spearman_oracle

# Two-decimal scores in a realistic range: plenty of ties, no subnormal
# pathologies where squared deviations underflow.
finite = st.integers(min_value=-10000, max_value=10000).map(lambda n: n / 100.0)
vector_st = st.lists(finite, min_size=2, max_size=10)
# integer-valued vectors produce plenty of ties
tied_vector_st = st.lists(st.integers(min_value=0, max_value=4).map(float), min_size=2, max_size=10)


def _non_constant(v):
    return len(set(v)) > 1


class TestPearson:
    def test_positive_affine(self):
        xs = [1.0, 2.0, 5.0, 9.0]
        ys = [2 * x + 1 for x in xs]
        assert pearson(xs, ys) == pytest.approx(1.0)

    def test_negative(self):
        assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_hand_computation(self):
        assert pearson([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)

    def test_length_mismatch(self):
        with pytest.raises(AlignmentError):
            pearson([1, 2], [1, 2, 3])

    def test_constant_is_undefined_not_zero(self):
        with pytest.raises(UndefinedCorrelationError):
            pearson([1, 1, 1], [1, 2, 3])

    def test_too_short(self):
        with pytest.raises(UndefinedCorrelationError):
            pearson([1.0], [2.0])

    @given(vector_st.filter(_non_constant), st.data())
    @settings(max_examples=300)
    def test_matches_covariance_oracle(self, xs, data):
        ys = data.draw(st.lists(finite, min_size=len(xs), max_size=len(xs)).filter(_non_constant))
        assert pearson(xs, ys) == pytest.approx(pearson_oracle(xs, ys), abs=1e-12)

    @given(vector_st.filter(_non_constant), st.data())
    @settings(max_examples=100)
    def test_affine_invariance(self, xs, data):
        ys = data.draw(st.lists(finite, min_size=len(xs), max_size=len(xs)).filter(_non_constant))
        base = pearson(xs, ys)
        shifted = [3.5 * x + 2.0 for x in xs]
        assert pearson(shifted, ys) == pytest.approx(base, abs=1e-9)
        flipped = [-2.0 * x for x in xs]
        assert pearson(flipped, ys) == pytest.approx(-base, abs=1e-9)


class TestSpearman:
    def test_monotone_is_one(self):
        assert spearman([1, 5, 9], [2, 3, 100]) == pytest.approx(1.0)

    def test_reversed_is_minus_one(self):
        assert spearman([1, 2, 3], [9, 4, 1]) == pytest.approx(-1.0)

    def test_hand_ties(self):
        assert spearman([1, 1, 2], [1, 2, 3]) == pytest.approx(math.sqrt(3) / 2)

    def test_average_ranks(self):
        assert average_ranks([10.0, 10.0, 30.0]).tolist() == [1.5, 1.5, 3.0]
        assert average_ranks([3.0, 1.0, 2.0]).tolist() == [3.0, 1.0, 2.0]

    @given(tied_vector_st)
    @settings(max_examples=300)
    def test_ranks_match_counting_oracle(self, values):
        assert average_ranks(values).tolist() == pytest.approx(ranks_oracle(values), abs=1e-12)

    @given(tied_vector_st.filter(_non_constant), st.data())
    @settings(max_examples=300)
    def test_matches_rank_oracle_with_ties(self, xs, data):
        ys = data.draw(
            st.lists(st.integers(min_value=0, max_value=4).map(float), min_size=len(xs), max_size=len(xs)).filter(
                _non_constant
            )
        )
        assert spearman(xs, ys) == pytest.approx(spearman_oracle(xs, ys), abs=1e-12)

    @given(vector_st.filter(_non_constant), st.data())
    @settings(max_examples=100)
    def test_invariant_under_increasing_transform(self, xs, data):
        ys = data.draw(st.lists(finite, min_size=len(xs), max_size=len(xs)).filter(_non_constant))
        base = spearman(xs, ys)
        transformed = [math.exp(x / 50.0) for x in xs]  # strictly increasing
        assert spearman(transformed, ys) == pytest.approx(base, abs=1e-9)


class TestRmse:
    def test_zero_when_equal(self):
        assert rmse([1, 2, 3], [1, 2, 3]) == 0.0

    def test_constant_offset(self):
        assert rmse([0, 0], [3, 3]) == pytest.approx(3.0)

    def test_hand_computation(self):
        assert rmse([1, 2], [2, 4]) == pytest.approx(math.sqrt(5 / 2))

    def test_errors(self):
        with pytest.raises(AlignmentError):
            rmse([1], [1, 2])
        with pytest.raises(AlignmentError):
            rmse([], [])

    @given(st.lists(finite, min_size=1, max_size=10), st.data())
    @settings(max_examples=100)
    def test_matches_oracle(self, preds, data):
        targets = data.draw(st.lists(finite, min_size=len(preds), max_size=len(preds)))
        assert rmse(preds, targets) == pytest.approx(rmse_oracle(preds, targets), abs=1e-12)


def matrix(system_ids, episode_ids, rows):
    return ScoreMatrix(tuple(system_ids), tuple(episode_ids), np.array(rows, dtype=float))


X22 = matrix(["s1", "s2"], ["e1", "e2"], [[1.0, 3.0], [2.0, 4.0]])


class TestScoreMatrix:
    def test_shape_checked(self):
        with pytest.raises(AlignmentError):
            matrix(["s1"], ["e1", "e2"], [[1.0, 2.0], [3.0, 4.0]])

    def test_duplicate_ids_rejected(self):
        with pytest.raises(AlignmentError):
            matrix(["s1", "s1"], ["e1", "e2"], [[1.0, 2.0], [3.0, 4.0]])

    def test_from_entries_and_missing_cells(self):
        m = ScoreMatrix.from_entries([("s1", "e1", 1.0), ("s2", "e1", 2.0), ("s1", "e2", 3.0)])
        assert m.system_ids == ("s1", "s2")
        assert not m.is_complete()
        with pytest.raises(AlignmentError, match="duplicate cell"):
            ScoreMatrix.from_entries([("s1", "e1", 1.0), ("s1", "e1", 2.0)])

    def test_values_read_only(self):
        with pytest.raises(ValueError):
            X22.values[0, 0] = 9.0

    def test_reindex(self):
        m = X22.reindex(["s2"], ["e2", "e1"])
        assert m.values.tolist() == [[4.0, 2.0]]
        with pytest.raises(AlignmentError):
            X22.reindex(["nope"], ["e1"])


class TestLevels:
    def test_self_correlation_is_one_everywhere(self):
        for level in ("system", "summary", "all_examples"):
            for coefficient in ("pearson", "spearman"):
                report = correlate_level(X22, X22, level, coefficient)
                assert report.value == pytest.approx(1.0)

    def test_system_level_hand_example(self):
        y = matrix(["s1", "s2"], ["e1", "e2"], [[0.0, 0.0], [5.0, 5.0]])
        report = system_level(X22, y, "spearman")
        # row means (2, 3) vs (0, 5)
        assert report.value == pytest.approx(1.0)
        assert report.n_used == 2

    def test_summary_level_averages_documents(self):
        x = matrix(["s1", "s2", "s3"], ["e1", "e2"], [[1, 1], [2, 3], [3, 2]])
        y = matrix(["s1", "s2", "s3"], ["e1", "e2"], [[1, 1], [2, 3], [3, 2]])
        # per-document spearman: e1 -> 1.0, e2 -> 1.0
        assert summary_level(x, y).value == pytest.approx(1.0)
        y_flip = matrix(["s1", "s2", "s3"], ["e1", "e2"], [[1, 2], [2, 3], [3, 1]])
        # e1 -> +1, e2: x column (1,3,2) vs y column (2,3,1): spearman -> +0.5... compute via oracle
        expected = (
            spearman_oracle([1, 2, 3], [1, 2, 3]) + spearman_oracle([1, 3, 2], [2, 3, 1])
        ) / 2
        assert summary_level(x, y_flip).value == pytest.approx(expected)

    def test_summary_level_plus_minus_average_zero(self):
        x = matrix(["s1", "s2"], ["e1", "e2"], [[1, 1], [2, 2]])
        y = matrix(["s1", "s2"], ["e1", "e2"], [[1, 2], [2, 1]])
        report = summary_level(x, y, "spearman")
        assert report.value == pytest.approx(0.0)
        assert report.n_used == 2
        assert report.n_skipped == 0

    def test_summary_level_skips_constant_columns(self):
        x = matrix(["s1", "s2"], ["e1", "e2", "e3"], [[1, 1, 5], [2, 1, 6]])
        y = matrix(["s1", "s2"], ["e1", "e2", "e3"], [[1, 2, 1], [2, 3, 2]])
        report = summary_level(x, y)
        assert report.n_used == 2
        assert report.n_skipped == 1
        assert report.n_used + report.n_skipped == x.n_episodes

    def test_summary_level_all_skipped_raises(self):
        x = matrix(["s1", "s2"], ["e1"], [[1], [1]])
        y = matrix(["s1", "s2"], ["e1"], [[1], [2]])
        with pytest.raises(UndefinedCorrelationError):
            summary_level(x, y)

    def test_all_examples_hand_example(self):
        x = matrix(["s1", "s2"], ["e1", "e2"], [[0, 1], [2, 3]])
        y = matrix(["s1", "s2"], ["e1", "e2"], [[3, 2], [1, 0]])
        assert all_examples(x, y, "spearman").value == pytest.approx(-1.0)

    def test_alignment_required(self):
        other = matrix(["s1", "sX"], ["e1", "e2"], [[1, 2], [3, 4]])
        with pytest.raises(AlignmentError):
            system_level(X22, other)

    def test_complete_required(self):
        holey = ScoreMatrix.from_entries([("s1", "e1", 1.0), ("s2", "e2", 2.0)])
        with pytest.raises(AlignmentError):
            system_level(holey, holey)

    def test_permutation_invariance_of_episode_axis(self):
        rng = np.random.default_rng(3)
        x = matrix(["a", "b", "c"], ["e1", "e2", "e3", "e4"], rng.normal(size=(3, 4)))
        y = matrix(["a", "b", "c"], ["e1", "e2", "e3", "e4"], rng.normal(size=(3, 4)))
        perm = ["e3", "e1", "e4", "e2"]
        xp = x.reindex(x.system_ids, perm)
        yp = y.reindex(y.system_ids, perm)
        for level in ("system", "summary", "all_examples"):
            assert correlate_level(x, y, level).value == pytest.approx(
                correlate_level(xp, yp, level).value, abs=1e-12
            )


class TestFilterSystems:
    def test_keep_all_is_identity(self):
        m = filter_systems(X22, {"s1", "s2"})
        assert m == X22

    def test_subset_preserves_episode_axis(self):
        m = matrix(["a", "b", "c"], ["e1", "e2"], [[1, 2], [3, 4], [5, 6]])
        out = filter_systems(m, {"a", "c"})
        assert out.system_ids == ("a", "c")
        assert out.episode_ids == ("e1", "e2")
        assert out.values.tolist() == [[1, 2], [5, 6]]

    def test_unknown_system_rejected(self):
        with pytest.raises(AlignmentError, match="unknown"):
            filter_systems(X22, {"s1", "zz"})

    def test_too_few_retained(self):
        with pytest.raises(AlignmentError, match="at least 2"):
            filter_systems(X22, {"s1"})


class TestMatrixFromGrades:
    def test_grades_to_matrix(self, tiny_corpus_dir):
        corpus = load_corpus(tiny_corpus_dir)
        m = matrix_from_grades(corpus)
        assert m.system_ids == ("R1", "E1", "A1")
        assert m.episode_ids == ("ep1", "ep2")
        # tiny fixture grades: R1 G/E, E1 F/G, A1 E/B
        assert m.values.tolist() == [[2.0, 3.0], [1.0, 2.0], [3.0, 0.0]]

    def test_report_round_trip(self):
        report = CorrelationReport("system", "spearman", 0.5, 19, 0, "inc", "rouge")
        assert CorrelationReport.from_json_dict(report.to_json_dict()) == report
