"""
Tests for elliptic-curve trace statistics.
"""

from fractions import Fraction

import pytest

from rmcubic.ecstats import (
    TorsionShape,
    class_weights_bruteforce,
    moment_polynomial,
    moments,
    torsion33_distribution_formula,
    torsion_restricted_moments,
    trace_distribution_bruteforce,
    trace_distribution_formula,
)
from rmcubic.exceptions import BudgetExceededError, InvalidArgumentError, OutOfScopeError


class TestTraceDistributionFormula:
    """Tests for the closed-form trace distribution."""

    def test_q5_masses(self):
        """Test every mass over F_5."""
        dist = trace_distribution_formula(5)

        assert dist.masses == {
            -4: Fraction(1, 20),
            -3: Fraction(1, 10),
            -2: Fraction(3, 20),
            -1: Fraction(1, 10),
            0: Fraction(1, 5),
            1: Fraction(1, 10),
            2: Fraction(3, 20),
            3: Fraction(1, 10),
            4: Fraction(1, 20),
        }

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49])
    def test_masses_sum_to_one(self, q):
        """Test the distribution is normalised in every characteristic."""
        assert trace_distribution_formula(q).total() == 1

    @pytest.mark.parametrize("q", [5, 7, 9, 16, 25])
    def test_odd_moments_vanish(self, q):
        """Test the distribution is symmetric under t -> -t."""
        dist = trace_distribution_formula(q)

        assert dist.moment(1) == 0
        assert dist.moment(3) == 0

    def test_supersingular_square_trace(self):
        """Test the mass at t = 2 sqrt(q) for q = 25."""
        dist = trace_distribution_formula(25)

        assert dist.mass(10) == Fraction(1, 150)
        assert dist.mass(11) == 0

    def test_document(self):
        """Test masses render as exact rational strings."""
        document = trace_distribution_formula(5).to_document()

        assert document["q"] == "5"
        assert document["masses"]["0"] == "1/5"
        assert "full_torsion" not in document


class TestTorsionFormula:
    """Tests for full 3-torsion masses."""

    @pytest.mark.parametrize(
        "q, expected",
        [
            (5, {}),
            (7, {-1: Fraction(1, 42)}),
            (13, {-4: Fraction(1, 52), 5: Fraction(1, 78)}),
        ],
    )
    def test_masses(self, q, expected):
        """Test the full-torsion masses for small primes."""
        assert torsion33_distribution_formula(q) == expected

    def test_full_torsion_traces_are_congruent(self):
        """Test full 3-torsion forces 9 | q + 1 - t."""
        for q in (7, 13, 19, 31, 37):
            for t in torsion33_distribution_formula(q):
                assert (q + 1 - t) % 9 == 0


class TestTraceDistributionBruteforce:
    """Tests for the Weierstrass-model census."""

    @pytest.mark.parametrize("q", [5, 7, 11, 13, 25])
    def test_matches_formula(self, q):
        """Test brute-force masses equal the closed form."""
        brute = trace_distribution_bruteforce(q)

        assert brute.masses == trace_distribution_formula(q).masses

    @pytest.mark.parametrize("q", [7, 13, 19, 25])
    def test_full_torsion_matches_formula(self, q):
        """Test the full 3-torsion split equals the closed form."""
        brute = trace_distribution_bruteforce(q, threads=2)

        assert brute.full_torsion == torsion33_distribution_formula(q)

    def test_cyclic_torsion_completes_z3_classes(self):
        """Test classes with 3 | #E split into cyclic and full torsion."""
        q = 13
        brute = trace_distribution_bruteforce(q)

        for t, mass in brute.masses.items():
            split = brute.cyclic_torsion.get(t, 0) + brute.full_torsion.get(t, 0)
            if (q + 1 - t) % 3 == 0:
                assert split == mass
            else:
                assert split == 0

    @pytest.mark.parametrize("q", [4, 8, 9, 27])
    def test_small_characteristic_out_of_scope(self, q):
        """Test characteristic 2 and 3 are refused with a reason tag."""
        with pytest.raises(OutOfScopeError) as exc_info:
            trace_distribution_bruteforce(q)

        assert exc_info.value.reason == "char-below-5"

    def test_budget(self):
        """Test orders above the brute-force bound are refused."""
        with pytest.raises(BudgetExceededError):
            trace_distribution_bruteforce(211)


class TestClassWeights:
    """Tests for the per-class Weierstrass weights."""

    @pytest.mark.parametrize("q", [5, 7, 11, 25])
    def test_each_j_has_unit_mass(self, q):
        """Test the classes sharing a j-invariant weigh 1 in total."""
        weights = class_weights_bruteforce(q)

        per_j: dict[int, Fraction] = {}
        for (j, _, _), weight in weights.items():
            per_j[j] = per_j.get(j, Fraction(0)) + weight

        assert per_j == {j: 1 for j in range(q)}

    @pytest.mark.parametrize("q", [5, 7, 13])
    def test_traces_match_distribution(self, q):
        """Test summing over j and 3-torsion gives q P_q(t)."""
        per_trace: dict[int, Fraction] = {}
        for (_, t, _), weight in class_weights_bruteforce(q).items():
            per_trace[t] = per_trace.get(t, Fraction(0)) + weight

        expected = {t: q * m for t, m in trace_distribution_formula(q).masses.items()}
        assert per_trace == expected

    def test_torsion_sizes(self):
        """Test #E[3] is 1, 3 or 9 and agrees with 3 | q + 1 - t."""
        q = 13
        for _, t, n3 in class_weights_bruteforce(q):
            assert n3 in (1, 3, 9)
            assert (n3 == 1) == ((q + 1 - t) % 3 != 0)

    def test_j_zero_at_q7(self):
        """Test the six twists of j = 0 over F_7 each have six automorphisms."""
        weights = class_weights_bruteforce(7)

        zero = {(t, n3): w for (j, t, n3), w in weights.items() if j == 0}
        assert len(zero) == 6
        assert set(zero.values()) == {Fraction(1, 6)}

    def test_small_characteristic_out_of_scope(self):
        """Test characteristic 3 is refused."""
        with pytest.raises(OutOfScopeError):
            class_weights_bruteforce(9)


class TestMoments:
    """Tests for trace moments."""

    def test_second_moment_q5(self):
        """Test 5 E(t^2) = 24."""
        assert 5 * moments(5, 1) == 24

    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    @pytest.mark.parametrize("r", range(6))
    def test_moments_match_polynomials(self, p, r):
        """Test p E_p(t^2r) equals the moment polynomial, including the tau term."""
        assert p * moments(p, r) == moment_polynomial(p, r)

    def test_fifth_moment_value(self):
        """Test the r = 5 polynomial at p = 5."""
        assert moment_polynomial(5, 5) == 584874

    @pytest.mark.parametrize("r", [-1, 6])
    def test_moment_order_out_of_range(self, r):
        """Test only 0 <= 2r <= 10 is provided."""
        with pytest.raises(InvalidArgumentError):
            moments(5, r)

    def test_moment_polynomial_out_of_range(self):
        """Test r = 6 has no polynomial."""
        with pytest.raises(InvalidArgumentError):
            moment_polynomial(5, 6)

    def test_moments_use_supplied_distribution(self):
        """Test a supplied distribution is used instead of the formula."""
        brute = trace_distribution_bruteforce(7)

        assert moments(7, 2, brute) == moments(7, 2)


class TestTorsionRestrictedMoments:
    """Tests for moments restricted by 3-torsion."""

    def test_z3_q5(self):
        """Test the zeroth Z3 moment over F_5."""
        assert torsion_restricted_moments(5, 0, TorsionShape.Z3) == 2

    def test_full_torsion_q7(self):
        """Test the first full-torsion moment over F_7."""
        assert torsion_restricted_moments(7, 1, TorsionShape.Z3XZ3) == Fraction(-1, 6)

    def test_full_torsion_from_brute_distribution(self):
        """Test the brute-force full-torsion masses give the same moment."""
        brute = trace_distribution_bruteforce(13)

        assert torsion_restricted_moments(
            13, 2, TorsionShape.Z3XZ3, brute
        ) == torsion_restricted_moments(13, 2, TorsionShape.Z3XZ3)

    def test_trivial_shape_raises(self):
        """Test the trivial shape is not a restriction."""
        with pytest.raises(InvalidArgumentError):
            torsion_restricted_moments(5, 0, TorsionShape.TRIVIAL)

    def test_negative_order_raises(self):
        """Test negative moment orders are rejected."""
        with pytest.raises(InvalidArgumentError):
            torsion_restricted_moments(5, -1, TorsionShape.Z3)
