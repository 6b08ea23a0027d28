"""
Finite fields F_q for prime powers q = p^v.

Elements are integer codes 0..q-1. The element c_0 + c_1 x + ... +
c_{v-1} x^{v-1} of F_p[x]/(m(x)) has code sum(c_i * p^i), so the prime
subfield is exactly the codes 0..p-1 and ordering by code is ordering by
coefficient tuple read from the top coefficient down.

The modulus m(x) is the monic irreducible polynomial of degree v with the
smallest code among its lower coefficients, which pins every element code
and makes all downstream enumeration orders reproducible.

Listings that need the graded lexicographic order on coefficient tuples
use ``graded_lex_elements``.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Optional, Union

import numpy as np
import structlog
from sympy import Poly, factorint, isprime, symbols

from rmcubic.exceptions import FieldError, FieldZeroDivisionError

logger = structlog.get_logger(__name__)

MAX_FIELD_ORDER = 2**20
# Above this order log/exp and addition tables are not built
TABLE_FIELD_ORDER = 2**12

_X = symbols("x")


@dataclass(frozen=True)
class FieldSpec:
    """
    A finite field F_q with q = p^v.

    Attributes:
        p: Characteristic
        v: Degree over the prime field
        modulus: Low-to-high coefficients of the monic modulus (empty when v = 1)
    """

    p: int
    v: int
    modulus: tuple[int, ...] = ()

    @property
    def q(self) -> int:
        return self.p**self.v

    @property
    def is_prime(self) -> bool:
        return self.v == 1

    @property
    def code_dtype(self) -> type:
        """Smallest unsigned numpy dtype holding every element code."""
        if self.q <= 2**8:
            return np.uint8
        if self.q <= 2**16:
            return np.uint16
        return np.uint32

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q})"

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    def elements(self) -> range:
        return range(self.q)

    def digits(self, a: int) -> list[int]:
        """Coefficients c_0..c_{v-1} of the element with code a."""
        out = []
        for _ in range(self.v):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, digits: list[int]) -> int:
        code = 0
        for d in reversed(digits):
            code = code * self.p + d % self.p
        return code

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element code of F_{self.q}")
        return a

    # Scalar arithmetic on codes

    def add(self, a: int, b: int) -> int:
        if self.v == 1:
            return (a + b) % self.p
        p = self.p
        result = 0
        scale = 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            result += ((x + y) % p) * scale
            scale *= p
        return result

    def neg(self, a: int) -> int:
        if self.v == 1:
            return (-a) % self.p
        return self.from_digits([-d for d in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.v == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self.q <= TABLE_FIELD_ORDER:
            log, exp = self._log_exp
            return exp[(log[a] + log[b]) % (self.q - 1)]
        return self._poly_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldZeroDivisionError(f"0 has no inverse in F_{self.q}")
        if self.v == 1:
            return pow(a, self.p - 2, self.p)
        if self.q <= TABLE_FIELD_ORDER:
            log, exp = self._log_exp
            return exp[(-log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if self.v == 1:
            return pow(a, n, self.p)
        result = 1
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def _poly_mul(self, a: int, b: int) -> int:
        p, v = self.p, self.v
        x, y = self.digits(a), self.digits(b)
        prod = [0] * (2 * v - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        # Reduce by the monic modulus from the top degree down
        for k in range(2 * v - 2, v - 1, -1):
            c = prod[k] % p
            if c:
                for i, m in enumerate(self.modulus):
                    prod[k - v + i] -= c * m
        return self.from_digits(prod[:v])

    @cached_property
    def _log_exp(self) -> tuple[list[int], list[int]]:
        """Discrete log and exponential tables for a primitive element."""
        q = self.q
        for g in range(2, q):
            exp = [1]
            x = g
            while x != 1 and len(exp) < q - 1:
                exp.append(x)
                x = self._poly_mul(x, g)
            if len(exp) == q - 1 and x == 1:
                log = [0] * q
                for i, e in enumerate(exp):
                    log[e] = i
                return log, exp
        raise FieldError(f"no primitive element found in F_{q}")  # pragma: no cover

    # Vectorised arithmetic on numpy code arrays

    def _require_tables(self) -> None:
        if self.q > TABLE_FIELD_ORDER:
            raise FieldError(f"array arithmetic tables are not built for q = {self.q}")

    @cached_property
    def add_table(self) -> np.ndarray:
        self._require_tables()
        codes = np.arange(self.q)
        digits = np.stack([(codes // self.p**i) % self.p for i in range(self.v)], axis=1)
        summed = (digits[:, None, :] + digits[None, :, :]) % self.p
        weights = self.p ** np.arange(self.v)
        return (summed @ weights).astype(self.code_dtype)

    @cached_property
    def mul_table(self) -> np.ndarray:
        self._require_tables()
        q = self.q
        if self.v == 1:
            codes = np.arange(q)
            return (np.outer(codes, codes) % q).astype(self.code_dtype)
        log, exp = self._log_exp
        log_arr = np.array(log)
        exp_arr = np.array(exp)
        table = exp_arr[(log_arr[:, None] + log_arr[None, :]) % (q - 1)]
        table[0, :] = 0
        table[:, 0] = 0
        return table.astype(self.code_dtype)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(a) for a in range(self.q)], dtype=self.code_dtype)

    @cached_property
    def inv_table(self) -> np.ndarray:
        """Inverse of every code, with 0 mapped to 0."""
        self._require_tables()
        table = np.zeros(self.q, dtype=self.code_dtype)
        for a in range(1, self.q):
            table[a] = self.inv(a)
        return table

    @cached_property
    def quadratic_character(self) -> np.ndarray:
        """chi(a) for every code: 0 at zero, 1 on nonzero squares, -1 otherwise."""
        chi = np.full(self.q, -1, dtype=np.int64)
        chi[0] = 0
        for a in range(1, self.q):
            chi[self.mul(a, a)] = 1
        return chi

    def add_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.v == 1:
            return ((np.asarray(a, dtype=np.int32) + b) % self.p).astype(self.code_dtype)
        return self.add_table[a, b]

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.v == 1:
            return ((np.asarray(a, dtype=np.int64) * b) % self.p).astype(self.code_dtype)
        return self.mul_table[a, b]

    def neg_array(self, a: np.ndarray) -> np.ndarray:
        if self.v == 1:
            return ((-np.asarray(a, dtype=np.int64)) % self.p).astype(self.code_dtype)
        return self.neg_table[a]

    def inv_array(self, a: np.ndarray) -> np.ndarray:
        """Element-wise inverse; zero entries stay zero."""
        return self.inv_table[np.asarray(a, dtype=np.int64)]


def _smallest_irreducible(p: int, v: int) -> tuple[int, ...]:
    for code in range(p**v):
        low = [(code // p**i) % p for i in range(v)]
        coeffs = low + [1]
        if Poly(list(reversed(coeffs)), _X, modulus=p).is_irreducible:
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {v} over F_{p}")  # pragma: no cover


@lru_cache(maxsize=None)
def make_field(p: int, v: int = 1) -> FieldSpec:
    """
    Construct F_{p^v}.

    Args:
        p: Characteristic, a prime
        v: Degree, at least 1

    Returns:
        The cached FieldSpec for this order

    Raises:
        FieldError: If p is not prime, v < 1, or p^v exceeds 2^20

    Example:
        >>> make_field(5, 2).modulus
        (2, 0, 1)
    """
    if not isprime(p):
        raise FieldError(f"characteristic must be prime, got {p}")
    if v < 1:
        raise FieldError(f"degree must be at least 1, got {v}")
    if p**v > MAX_FIELD_ORDER:
        raise FieldError(f"field order {p}^{v} exceeds the supported bound {MAX_FIELD_ORDER}")
    modulus = () if v == 1 else _smallest_irreducible(p, v)
    logger.debug("Constructed finite field", p=p, v=v, modulus=list(modulus))
    return FieldSpec(p=p, v=v, modulus=modulus)


def field_for_order(q: int) -> FieldSpec:
    """
    Construct F_q from its order.

    Raises:
        FieldError: If q is not a prime power
    """
    factors = factorint(q) if q > 1 else {}
    if len(factors) != 1:
        raise FieldError(f"field order must be a prime power, got {q}")
    ((p, v),) = factors.items()
    return make_field(int(p), int(v))


def graded_lex_elements(field: FieldSpec) -> list[int]:
    """
    Element codes in graded lexicographic order.

    Elements are ordered by the degree of their polynomial c_0 + c_1 x + ...,
    then by the coefficient tuple (c_0, c_1, ...) read from the constant
    term up. For a prime field this is 0, 1, ..., p - 1.

    Example:
        >>> graded_lex_elements(make_field(2, 2))
        [0, 1, 2, 3]
        >>> graded_lex_elements(make_field(3, 2))[3:]
        [3, 6, 4, 7, 5, 8]
    """
    return list(_graded_lex_order(field.p, field.v))


@lru_cache(maxsize=None)
def _graded_lex_order(p: int, v: int) -> tuple[int, ...]:
    field = make_field(p, v)

    def key(code: int) -> tuple[int, list[int]]:
        digits = field.digits(code)
        degree = max((i for i, d in enumerate(digits) if d), default=0)
        return degree, digits

    return tuple(sorted(field.elements(), key=key))


Operand = Union["FieldElement", int]


@dataclass(frozen=True)
class FieldElement:
    """
    An element of a FieldSpec with operator support.

    Plain ints combine with elements as multiples of 1 (prime subfield).
    """

    field: FieldSpec
    value: int

    def __post_init__(self) -> None:
        self.field.check(self.value)

    def _coerce(self, other: Operand) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"cannot combine elements of {self.field} and {other.field}")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        raise FieldError(f"unsupported operand {other!r}")

    def _wrap(self, code: int) -> "FieldElement":
        return FieldElement(self.field, code)

    def __add__(self, other: Operand) -> "FieldElement":
        return self._wrap(self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "FieldElement":
        return self._wrap(self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other: Operand) -> "FieldElement":
        return self._wrap(self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other: Operand) -> "FieldElement":
        return self._wrap(self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "FieldElement":
        return self._wrap(self.field.div(self.value, self._coerce(other)))

    def __neg__(self) -> "FieldElement":
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, n: int) -> "FieldElement":
        return self._wrap(self.field.pow(self.value, n))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"F{self.field.q}({self.value})"


class ArithOp(Enum):
    """
    Field operations accepted by ``arith``.

    Attributes:
        ADD: a + b
        SUB: a - b
        MUL: a * b
        DIV: a / b
        POW: a ** n with integer exponent n (negative allowed for a != 0)
        NEG: -a
        INV: 1 / a
    """

    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    POW = "pow"
    NEG = "neg"
    INV = "inv"


def arith(a: FieldElement, b: Optional[Operand], op: ArithOp) -> FieldElement:
    """
    Apply one field operation.

    Raises:
        FieldZeroDivisionError: On division by or inversion of zero
        FieldError: On operands from different fields or a missing operand
    """
    if op is ArithOp.NEG:
        return -a
    if op is ArithOp.INV:
        return a.inverse()
    if b is None:
        raise FieldError(f"{op.value} needs a second operand")
    if op is ArithOp.POW:
        if isinstance(b, FieldElement):
            raise FieldError("exponent must be an integer")
        return a**b
    if op is ArithOp.ADD:
        return a + b
    if op is ArithOp.SUB:
        return a - b
    if op is ArithOp.MUL:
        return a * b
    return a / b


@dataclass(frozen=True)
class FieldEmbedding:
    """
    The inclusion F_q -> F_{q^k} as a code lookup table.

    Attributes:
        source: Field being embedded
        target: Extension field of degree k over the source
        image: Target code of every source code
    """

    source: FieldSpec
    target: FieldSpec
    image: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.image[a]

    def map_array(self, codes: np.ndarray) -> np.ndarray:
        return np.asarray(self.image, dtype=self.target.code_dtype)[codes]


def _evaluate_in(field: FieldSpec, coeffs: tuple[int, ...], x: int) -> int:
    """Evaluate a polynomial with prime-subfield coefficients at x by Horner's rule."""
    acc = 0
    for c in reversed(coeffs):
        acc = field.add(field.mul(acc, x), c)
    return acc


@lru_cache(maxsize=None)
def field_embedding(source: FieldSpec, k: int) -> FieldEmbedding:
    """
    Build the embedding of ``source`` into its degree-k extension.

    For v > 1 the generator x of the source maps to the smallest root of
    the source modulus in the target field.

    Raises:
        FieldError: If k < 1 or the extension exceeds the supported order
    """
    if k < 1:
        raise FieldError(f"extension degree must be at least 1, got {k}")
    target = make_field(source.p, source.v * k)
    if source.v == 1:
        return FieldEmbedding(source, target, tuple(range(source.p)))

    root = next(r for r in range(target.q) if _evaluate_in(target, source.modulus, r) == 0)
    powers = [1]
    for _ in range(source.v - 1):
        powers.append(target.mul(powers[-1], root))
    image = []
    for a in source.elements():
        acc = 0
        for d, power in zip(source.digits(a), powers):
            acc = target.add(acc, target.mul(d, power))
        image.append(acc)
    return FieldEmbedding(source, target, tuple(image))


def embed(a: FieldElement, k: int) -> FieldElement:
    """
    Map a into F_{q^k} through the canonical embedding.

    Example:
        >>> embed(make_field(5).element(2), 2)
        F25(2)
    """
    embedding = field_embedding(a.field, k)
    return embedding.target.element(embedding(a.value))
