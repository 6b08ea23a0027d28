"""
Tests for finite field arithmetic.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmcubic.exceptions import FieldError, FieldZeroDivisionError
from rmcubic.ff import (
    ArithOp,
    FieldElement,
    arith,
    embed,
    field_embedding,
    field_for_order,
    graded_lex_elements,
    make_field,
)

SMALL_ORDERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49]


@st.composite
def field_triples(draw):
    """A field together with three of its element codes."""
    q = draw(st.sampled_from(SMALL_ORDERS + [121, 343, 1024]))
    f = field_for_order(q)
    codes = st.integers(min_value=0, max_value=q - 1)
    return f, draw(codes), draw(codes), draw(codes)


class TestMakeField:
    """Tests for field construction."""

    def test_prime_field_has_no_modulus(self):
        """Test prime fields carry an empty modulus."""
        f = make_field(7)

        assert f.q == 7
        assert f.is_prime
        assert f.modulus == ()

    @pytest.mark.parametrize(
        "p, v, modulus",
        [(2, 2, (1, 1, 1)), (2, 3, (1, 1, 0, 1)), (3, 2, (1, 0, 1)), (5, 2, (2, 0, 1))],
    )
    def test_smallest_irreducible_modulus(self, p, v, modulus):
        """Test the modulus is the irreducible with the smallest lower-coefficient code."""
        assert make_field(p, v).modulus == modulus

    def test_fields_are_cached(self):
        """Test repeated construction returns the same object."""
        assert make_field(5, 2) is make_field(5, 2)

    @pytest.mark.parametrize("p, v", [(4, 1), (6, 2), (5, 0), (2, 21)])
    def test_invalid_parameters_raise(self, p, v):
        """Test non-prime characteristic, zero degree and oversized orders."""
        with pytest.raises(FieldError):
            make_field(p, v)

    @pytest.mark.parametrize("q, expected", [(9, (3, 2)), (32, (2, 5)), (11, (11, 1))])
    def test_field_for_order(self, q, expected):
        """Test construction from the order."""
        f = field_for_order(q)

        assert (f.p, f.v) == expected

    @pytest.mark.parametrize("q", [1, 6, 12, 0])
    def test_field_for_order_rejects_non_prime_powers(self, q):
        """Test orders that are not prime powers."""
        with pytest.raises(FieldError):
            field_for_order(q)

    def test_code_dtype(self):
        """Test the numpy dtype grows with the order."""
        assert make_field(5).code_dtype is np.uint8
        assert make_field(2, 10).code_dtype is np.uint16
        assert make_field(2, 20).code_dtype is np.uint32


class TestScalarArithmetic:
    """Tests for arithmetic on element codes."""

    def test_prime_subfield_is_codes_below_p(self):
        """Test integers below p keep their meaning in an extension."""
        f = make_field(5, 2)

        assert f.add(2, 4) == 1
        assert f.mul(2, 3) == 1
        assert f.neg(1) == 4

    def test_generator_squares_to_modulus_residue(self):
        """Test x * x reduces by the modulus x^2 + 2."""
        f = make_field(5, 2)

        assert f.mul(5, 5) == 3

    def test_gf4_multiplication(self):
        """Test F_4 with x^2 = x + 1."""
        f = make_field(2, 2)

        assert f.mul(2, 2) == 3
        assert f.mul(2, 3) == 1
        assert f.inv(3) == 2

    def test_digits_round_trip(self):
        """Test code digits match base-p expansion."""
        f = make_field(3, 3)

        assert f.digits(14) == [2, 1, 1]
        assert f.from_digits([2, 1, 1]) == 14

    def test_inverse_of_zero_raises(self):
        """Test that zero has no inverse."""
        with pytest.raises(FieldZeroDivisionError):
            make_field(7).inv(0)
        with pytest.raises(ZeroDivisionError):
            make_field(2, 3).div(1, 0)

    def test_check_rejects_out_of_range(self):
        """Test codes outside 0..q-1."""
        with pytest.raises(FieldError):
            make_field(5).check(5)

    def test_negative_power(self):
        """Test negative exponents invert first."""
        f = make_field(7)

        assert f.pow(3, -1) == 5
        assert f.pow(3, 6) == 1

    def test_large_field_uses_polynomial_multiplication(self):
        """Test arithmetic above the table bound agrees with Fermat."""
        f = make_field(2, 13)
        a = 1234

        assert f.mul(a, f.inv(a)) == 1
        assert f.pow(a, f.q - 1) == 1


class TestFieldAxioms:
    """Property-based tests of the field axioms."""

    @given(field_triples())
    @settings(max_examples=200, deadline=None)
    def test_ring_axioms(self, triple):
        """Test associativity, commutativity and distributivity."""
        f, a, b, c = triple

        assert f.add(a, b) == f.add(b, a)
        assert f.mul(a, b) == f.mul(b, a)
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.add(a, f.neg(a)) == 0
        assert f.sub(f.add(a, b), b) == a

    @given(field_triples())
    @settings(max_examples=200, deadline=None)
    def test_nonzero_elements_are_invertible(self, triple):
        """Test a * a^-1 = 1 and a^(q-1) = 1 for a != 0."""
        f, a, _, _ = triple
        if a == 0:
            return

        assert f.mul(a, f.inv(a)) == 1
        assert f.pow(a, f.q - 1) == 1

    @given(field_triples())
    @settings(max_examples=100, deadline=None)
    def test_frobenius_is_additive(self, triple):
        """Test (a + b)^p = a^p + b^p."""
        f, a, b, _ = triple

        assert f.pow(f.add(a, b), f.p) == f.add(f.pow(a, f.p), f.pow(b, f.p))


class TestArrayArithmetic:
    """Tests for the vectorised tables."""

    @pytest.mark.parametrize("q", SMALL_ORDERS)
    def test_tables_match_scalar_operations(self, q):
        """Test the add, mul and neg tables agree with scalar arithmetic."""
        f = field_for_order(q)
        codes = np.arange(q)
        a = np.repeat(codes, q)
        b = np.tile(codes, q)

        added = f.add_arrays(a, b)
        multiplied = f.mul_arrays(a, b)

        for x, y, s, m in zip(a.tolist(), b.tolist(), added.tolist(), multiplied.tolist()):
            assert s == f.add(x, y)
            assert m == f.mul(x, y)
        assert f.neg_array(codes).tolist() == [f.neg(x) for x in range(q)]

    @pytest.mark.parametrize("q", SMALL_ORDERS)
    def test_inverse_table(self, q):
        """Test inv_array inverts every non-zero code and keeps zero."""
        f = field_for_order(q)
        inverses = f.inv_array(np.arange(q))

        assert inverses[0] == 0
        for a in range(1, q):
            assert f.mul(a, int(inverses[a])) == 1

    def test_quadratic_character_of_f5(self):
        """Test chi over F_5."""
        assert make_field(5).quadratic_character.tolist() == [0, 1, -1, -1, 1]

    @pytest.mark.parametrize("q", [9, 25, 27])
    def test_quadratic_character_is_balanced(self, q):
        """Test half of the non-zero elements are squares in odd order."""
        chi = field_for_order(q).quadratic_character

        assert int(chi.sum()) == 0
        assert int((chi == 1).sum()) == (q - 1) // 2

    def test_tables_not_built_for_large_fields(self):
        """Test array tables are refused above the table bound."""
        f = make_field(2, 13)

        with pytest.raises(FieldError):
            f.add_arrays(np.array([1]), np.array([2]))


class TestFieldElement:
    """Tests for the FieldElement wrapper."""

    def setup_method(self):
        """Set up test fixtures."""
        self.f = make_field(5, 2)
        self.x = self.f.element(5)

    def test_operators(self):
        """Test operator overloads."""
        one = self.f.element(1)

        assert self.x * self.x == self.f.element(3)
        assert (self.x + one) - one == self.x
        assert (self.x / self.x) == one
        assert -one == self.f.element(4)
        assert self.x**24 == one

    def test_int_operands_are_prime_subfield_multiples(self):
        """Test ints are reduced mod p."""
        assert self.x + 7 == self.x + 2
        assert 3 * self.x == self.x * 3
        assert 1 - self.f.element(1) == self.f.element(0)

    def test_mixed_fields_raise(self):
        """Test combining elements of different fields."""
        with pytest.raises(FieldError):
            self.x + make_field(5).element(1)

    def test_division_by_zero(self):
        """Test division by the zero element."""
        with pytest.raises(ZeroDivisionError):
            self.x / self.f.element(0)

    def test_invalid_code(self):
        """Test construction rejects codes out of range."""
        with pytest.raises(FieldError):
            FieldElement(self.f, 25)

    def test_repr_and_int(self):
        """Test representation helpers."""
        assert repr(self.x) == "F25(5)"
        assert int(self.x) == 5
        assert self.f.element(0).is_zero()


class TestArith:
    """Tests for the arith dispatcher."""

    def setup_method(self):
        """Set up test fixtures."""
        self.f = make_field(7)
        self.a = self.f.element(3)
        self.b = self.f.element(5)

    @pytest.mark.parametrize(
        "op, expected",
        [
            (ArithOp.ADD, 1),
            (ArithOp.SUB, 5),
            (ArithOp.MUL, 1),
            (ArithOp.DIV, 2),
        ],
    )
    def test_binary_operations(self, op, expected):
        """Test binary operations over F_7."""
        assert arith(self.a, self.b, op).value == expected

    def test_unary_operations(self):
        """Test negation and inversion ignore the second operand."""
        assert arith(self.a, None, ArithOp.NEG).value == 4
        assert arith(self.a, None, ArithOp.INV).value == 5

    def test_pow(self):
        """Test integer exponents, including negative ones."""
        assert arith(self.a, 2, ArithOp.POW).value == 2
        assert arith(self.a, -1, ArithOp.POW).value == 5

    def test_missing_operand_raises(self):
        """Test binary operations require a second operand."""
        with pytest.raises(FieldError):
            arith(self.a, None, ArithOp.ADD)

    def test_element_exponent_raises(self):
        """Test exponents must be integers."""
        with pytest.raises(FieldError):
            arith(self.a, self.b, ArithOp.POW)

    def test_inverse_of_zero(self):
        """Test inverting zero raises the zero-division error."""
        with pytest.raises(FieldZeroDivisionError):
            arith(self.f.element(0), None, ArithOp.INV)


class TestFieldEmbedding:
    """Tests for subfield embeddings."""

    def test_prime_field_embeds_identically(self):
        """Test prime subfield codes are fixed."""
        assert embed(make_field(5).element(2), 2) == make_field(5, 2).element(2)

    @pytest.mark.parametrize("q, k", [(4, 2), (4, 3), (9, 2), (8, 2), (25, 2)])
    def test_embedding_is_a_ring_homomorphism(self, q, k):
        """Test the embedding is injective and preserves + and *."""
        source = field_for_order(q)
        emb = field_embedding(source, k)
        target = emb.target

        assert target.q == q**k
        assert len(set(emb.image)) == q
        for a in source.elements():
            for b in source.elements():
                assert emb(source.add(a, b)) == target.add(emb(a), emb(b))
                assert emb(source.mul(a, b)) == target.mul(emb(a), emb(b))

    def test_map_array(self):
        """Test array mapping uses the image table."""
        emb = field_embedding(make_field(2, 2), 2)
        codes = np.array([0, 1, 2, 3])

        assert emb.map_array(codes).tolist() == list(emb.image)

    def test_degree_below_one_raises(self):
        """Test k must be positive."""
        with pytest.raises(FieldError):
            field_embedding(make_field(3), 0)


class TestGradedLexElements:
    """Tests for the graded lexicographic element listing."""

    @pytest.mark.parametrize("q", [2, 5, 7])
    def test_prime_field_is_code_order(self, q):
        """Test a prime field lists 0, 1, ..., p - 1."""
        assert graded_lex_elements(field_for_order(q)) == list(range(q))

    def test_f9_order(self):
        """Test F_9 lists constants, then degree-1 elements by (c0, c1)."""
        f = make_field(3, 2)

        order = graded_lex_elements(f)

        assert order == [0, 1, 2, 3, 6, 4, 7, 5, 8]
        assert [f.digits(a) for a in order[3:5]] == [[0, 1], [0, 2]]

    @pytest.mark.parametrize("q", [4, 8, 25, 27])
    def test_is_permutation_graded_by_degree(self, q):
        """Test every element appears once and degrees never decrease."""
        f = field_for_order(q)

        order = graded_lex_elements(f)
        degrees = [max((i for i, d in enumerate(f.digits(a)) if d), default=0) for a in order]

        assert sorted(order) == list(range(q))
        assert degrees == sorted(degrees)

    def test_listing_is_a_copy(self):
        """Test callers cannot disturb the cached order."""
        f = make_field(2, 3)

        graded_lex_elements(f).reverse()

        assert graded_lex_elements(f)[:2] == [0, 1]
