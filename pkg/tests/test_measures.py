import pytest

from core.errors import DegenerateMeasureError, InvalidStateError, ParameterError
from core.exact_ring import ONE, ZERO, Qr2, pqrs_decompose
from core.measures import (
    SojournMeasure,
    central_positions,
    classical_arcsine,
    classical_equidistribution,
    compare_central_terms,
    corollary_uniform_check,
    direct_weight,
    enumerate_classical_bridges,
    enumerate_classical_walks,
    general_weight_A,
    general_weight_B,
    sojourn_measure_A,
    sojourn_measure_B,
    symmetric_state_grid,
    symmetric_weight_A,
    symmetric_weight_B,
)
from core.walk_paths import QubitState, sojourn_table
from shared.types import MeasureKind


def q(text: str) -> Qr2:
    return Qr2(text)


class TestQuantumMeasures:
    def test_a_measure_at_four(self):
        measure = sojourn_measure_A(4)
        assert measure.weights == {0: q("5/8"), 2: q("2/8"), 4: q("5/8")}
        assert measure.total == q("3/2")
        assert measure.normalized == {0: q("5/12"), 2: q("1/6"), 4: q("5/12")}

    @pytest.mark.parametrize(
        "n,expected",
        [
            (6, ["10/26", "3/26", "3/26", "10/26"]),
            (8, ["73/196", "24/196", "2/196", "24/196", "73/196"]),
        ],
    )
    def test_a_measure_probabilities(self, n, expected):
        measure = sojourn_measure_A(n)
        assert [measure.probability(k) for k in range(0, n + 1, 2)] == [q(x) for x in expected]

    def test_b_measure_small_times(self):
        assert sojourn_measure_B(2).weights == {0: q("1/4"), 2: q("1/4")}
        assert sojourn_measure_B(6).weights == {k: q("1/64") for k in (0, 2, 4, 6)}

    def test_b_measure_at_four_sits_in_the_middle(self):
        measure = sojourn_measure_B(4)
        assert measure.support == [2]
        assert measure.probability(2) == ONE

    def test_b_measure_at_ten(self):
        measure = sojourn_measure_B(10)
        expected = ["2/10", "2/10", "1/10", "1/10", "2/10", "2/10"]
        assert [measure.probability(k) for k in range(0, 11, 2)] == [q(x) for x in expected]

    @pytest.mark.parametrize("n", [2, 6, 10, 14])
    def test_symmetric_in_k(self, n):
        assert sojourn_measure_A(n).is_symmetric
        assert sojourn_measure_B(n).is_symmetric

    def test_odd_time_rejected(self):
        with pytest.raises(ParameterError):
            sojourn_measure_A(5)

    def test_non_unit_state_rejected(self):
        with pytest.raises(InvalidStateError):
            sojourn_measure_B(4, QubitState.parse("1,0,1,0"))

    def test_zero_total_is_degenerate(self):
        measure = SojournMeasure(n=2, weights={0: ZERO, 2: ZERO}, kind=MeasureKind.B)
        with pytest.raises(DegenerateMeasureError):
            measure.normalized

    def test_cross_term_shifts_the_a_measure(self):
        tilted = sojourn_measure_A(4, QubitState.parse("3/5,0,4/5,0"))
        assert tilted.weights[0] == q("49/40")


class TestWeightFormulas:
    def test_symmetric_states_reduce_to_symmetric_formulas(self):
        table = sojourn_table(0, 10)
        for n in range(2, 11, 2):
            for k in range(0, n + 1, 2):
                coeffs = pqrs_decompose(table.psi(n, k))
                gamma = table.operator(n, 0, k)
                for phi in symmetric_state_grid():
                    assert general_weight_A(coeffs, phi) == symmetric_weight_A(coeffs)
                    assert general_weight_B(gamma, phi) == symmetric_weight_B(gamma)

    @pytest.mark.parametrize("state", ["1,0,0,0", "0,0,0,1", "3/5,0,0,4/5", "3/5,0,-4/5,0", "0,3/5,4/5,0"])
    def test_general_formulas_match_direct_norm(self, state):
        phi = QubitState.parse(state)
        table = sojourn_table(0, 8)
        for n in (2, 4, 8):
            for k in range(n + 1):
                psi = table.psi(n, k)
                gamma = table.operator(n, 0, k)
                assert general_weight_A(pqrs_decompose(psi), phi) == direct_weight(psi, phi)
                assert general_weight_B(gamma, phi) == direct_weight(gamma, phi)

    def test_grid_states_are_symmetric(self):
        grid = symmetric_state_grid()
        assert len(grid) == 8
        assert all(phi.is_unit and phi.is_symmetric for phi in grid)


class TestClassicalBaselines:
    def test_arcsine_values(self):
        assert classical_arcsine(4).weights == {0: q("3/8"), 2: q("1/4"), 4: q("3/8")}
        assert classical_arcsine(6).weights[2] == q("3/16")

    def test_arcsine_matches_enumeration(self):
        for n in range(2, 11, 2):
            assert enumerate_classical_walks(n).weights == classical_arcsine(n).weights

    def test_equidistribution_matches_enumeration(self):
        for n in range(2, 11, 2):
            bridges = enumerate_classical_bridges(n)
            assert bridges.weights == classical_equidistribution(n).weights
            assert bridges.metadata["paths"] == {2: 2, 4: 6, 6: 20, 8: 70, 10: 252}[n]

    def test_arcsine_is_normalized(self):
        assert classical_arcsine(12).total == ONE
        assert classical_arcsine(0).weights == {0: ONE}

    def test_equidistribution_needs_positive_time(self):
        with pytest.raises(ParameterError):
            classical_equidistribution(0)


class TestBridgeUniformity:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_uniform_at_multiples_of_four(self, n):
        report = corollary_uniform_check(n)
        assert report.passed, report.first_mismatch.describe()
        assert report.checked == 2 * n + 1

    def test_rejects_nonpositive(self):
        with pytest.raises(ParameterError):
            corollary_uniform_check(0)


class TestCentralTerms:
    @pytest.mark.parametrize("n,positions", [(4, [2]), (6, [2, 4]), (8, [4]), (10, [4, 6])])
    def test_positions(self, n, positions):
        assert central_positions(n) == positions

    def test_quantum_central_term_is_smaller(self):
        for n in (4, 6, 8):
            assert compare_central_terms(n).quantum_smaller

    def test_known_values(self):
        comparison = compare_central_terms(4)
        assert comparison.quantum == {2: q("1/6")}
        assert comparison.classical == {2: q("1/4")}
        six = compare_central_terms(6)
        assert six.quantum == {2: q("3/26"), 4: q("3/26")}
        assert six.classical[2] == q("3/16")

    def test_needs_n_at_least_four(self):
        with pytest.raises(ParameterError):
            compare_central_terms(2)
