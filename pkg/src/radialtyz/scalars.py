"""Scalar arithmetic with certified sign queries.

Three interchangeable backends share one operator protocol:

* RationalScalar -- exact rationals (fractions.Fraction).
* RootScalar     -- exact elements of Q(theta), theta = r**(1/d) the real
                    positive root of a d-power-free integer radicand r >= 2.
                    Sign queries are decided by interval refinement, which
                    terminates because {1, theta, ..., theta**(d-1)} is a
                    Q-basis (x**d - r is irreducible for canonical r).
* BallScalar     -- mpmath interval ("ball") arithmetic at a stated precision;
                    a sign query answers `undetermined` whenever the enclosure
                    straddles zero.

All values are immutable; mixed-backend operations coerce upward
(rational -> root -> ball). Two distinct root extensions never mix: that
raises ExactnessError and callers are expected to fall back to balls.
"""
from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from typing import Union

from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import fhalf, fzero, mpf_add, mpf_cmp, mpf_mul, mpf_sub, to_str
from sympy import factorint

DEFAULT_PRECISION_BITS = 256
PRECISION_CAP_BITS = 4096

ScalarLike = Union["Scalar", int, Fraction, str]


class Sign(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"
    UNDETERMINED = "undetermined"


class ExactnessError(ArithmeticError):
    """An operation has no exact result in the available exact backends."""


class SignUndeterminedError(ArithmeticError):
    """A sign was required but the enclosure straddles zero at this precision."""


class DomainError(ValueError):
    """An evaluation point violates a family's admissible domain."""


_CONTEXTS: dict[int, MPIntervalContext] = {}


def _ctx(precision_bits: int) -> MPIntervalContext:
    ctx = _CONTEXTS.get(precision_bits)
    if ctx is None:
        ctx = MPIntervalContext()
        ctx.prec = precision_bits
        _CONTEXTS[precision_bits] = ctx
    return ctx


def parse_rational(text: str) -> Fraction:
    """Parse the canonical "p/q" (or plain integer) text form."""
    return Fraction(text.strip())


def as_scalar(value: ScalarLike) -> "Scalar":
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Fraction)):
        return RationalScalar(Fraction(value))
    if isinstance(value, str):
        return RationalScalar(parse_rational(value))
    raise TypeError(f"cannot convert {type(value).__name__} to Scalar")


def rational(p: int | Fraction, q: int = 1) -> "RationalScalar":
    return RationalScalar(Fraction(p, q))


ZERO: "RationalScalar"
ONE: "RationalScalar"


class Scalar:
    """Common operator protocol; concrete backends implement _add/_mul/..."""

    backend = "abstract"

    # -- coercion ---------------------------------------------------------

    def _promote(self, other: ScalarLike) -> tuple["Scalar", "Scalar"]:
        other = as_scalar(other)
        a, b = self, other
        if isinstance(a, BallScalar) or isinstance(b, BallScalar):
            prec = max(
                a.precision_bits if isinstance(a, BallScalar) else 0,
                b.precision_bits if isinstance(b, BallScalar) else 0,
            )
            return a.to_ball(prec), b.to_ball(prec)
        if isinstance(a, RootScalar) or isinstance(b, RootScalar):
            if isinstance(a, RootScalar) and isinstance(b, RootScalar):
                if (a.degree, a.radicand) != (b.degree, b.radicand):
                    raise ExactnessError(
                        f"cannot mix root extensions {a.radicand}^(1/{a.degree}) "
                        f"and {b.radicand}^(1/{b.degree}); use a ball backend"
                    )
                return a, b
            if isinstance(a, RootScalar):
                return a, a._embed(b)
            return b._embed(a), b
        return a, b

    # -- operators --------------------------------------------------------

    def __add__(self, other: ScalarLike) -> "Scalar":
        a, b = self._promote(other)
        return a._add(b)

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> "Scalar":
        return self + (-as_scalar(other))

    def __rsub__(self, other: ScalarLike) -> "Scalar":
        return as_scalar(other) + (-self)

    def __mul__(self, other: ScalarLike) -> "Scalar":
        a, b = self._promote(other)
        return a._mul(b)

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "Scalar":
        a, b = self._promote(other)
        # _inverse may collapse a root element to a rational, so re-promote
        return a * b._inverse()

    def __rtruediv__(self, other: ScalarLike) -> "Scalar":
        return as_scalar(other) / self

    def __pow__(self, exponent: int) -> "Scalar":
        return int_pow(self, exponent)

    # -- queries ----------------------------------------------------------

    def sign(self) -> Sign:
        raise NotImplementedError

    def is_zero(self) -> bool:
        return self.sign() == Sign.ZERO

    def require_sign(self, what: str = "value") -> Sign:
        s = self.sign()
        if s == Sign.UNDETERMINED:
            raise SignUndeterminedError(
                f"sign of {what} undetermined at current precision; "
                "raise the precision or use an exact backend"
            )
        return s

    @property
    def exact(self) -> bool:
        return not isinstance(self, BallScalar)

    def to_ball(self, precision_bits: int = DEFAULT_PRECISION_BITS) -> "BallScalar":
        raise NotImplementedError

    def text(self) -> str:
        raise NotImplementedError


class RationalScalar(Scalar):
    backend = "rational"
    __slots__ = ("value",)

    def __init__(self, value: Fraction):
        object.__setattr__(self, "value", value)

    def __setattr__(self, *a):  # immutable
        raise AttributeError("RationalScalar is immutable")

    def __neg__(self) -> "RationalScalar":
        return RationalScalar(-self.value)

    def _add(self, other: "RationalScalar") -> "RationalScalar":
        return RationalScalar(self.value + other.value)

    def _mul(self, other: "RationalScalar") -> "RationalScalar":
        return RationalScalar(self.value * other.value)

    def _inverse(self) -> "RationalScalar":
        if self.value == 0:
            raise ZeroDivisionError("division by exact zero")
        return RationalScalar(1 / self.value)

    def sign(self) -> Sign:
        if self.value > 0:
            return Sign.POSITIVE
        if self.value < 0:
            return Sign.NEGATIVE
        return Sign.ZERO

    def to_ball(self, precision_bits: int = DEFAULT_PRECISION_BITS) -> "BallScalar":
        ctx = _ctx(precision_bits)
        iv = ctx.mpf(self.value.numerator) / ctx.mpf(self.value.denominator)
        return BallScalar(iv._mpi_, precision_bits)

    def text(self) -> str:
        return str(self.value)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalScalar) and self.value == other.value

    def __hash__(self):
        return hash(("rat", self.value))

    def __repr__(self):
        return f"RationalScalar({self.value})"


ZERO = RationalScalar(Fraction(0))
ONE = RationalScalar(Fraction(1))


def _canonical_root(fr: Fraction, n: int) -> tuple[Fraction, int, int]:
    """Write fr**(1/n), fr > 0, as scale * radicand**(1/degree).

    The returned radicand is a degree-power-free integer (>= 2) whose prime
    exponents have gcd 1 with degree, so x**degree - radicand is irreducible
    over Q; degree == 1 means the root is rational and equals scale.
    """
    if fr <= 0:
        raise ExactnessError("canonical root requires a positive radicand")
    exps: dict[int, int] = {}
    for p, e in factorint(fr.numerator).items():
        exps[int(p)] = int(e)
    for p, e in factorint(fr.denominator).items():
        exps[int(p)] = exps.get(int(p), 0) - int(e)
    g = n
    for e in exps.values():
        g = math.gcd(g, e)
    degree = n // g
    scale = Fraction(1)
    radicand = 1
    for p, e in exps.items():
        e //= g
        scale *= Fraction(p) ** (e // degree)
        radicand *= p ** (e % degree)
    if radicand == 1:
        degree = 1
    return scale, degree, radicand


class RootScalar(Scalar):
    """Element sum(coeffs[j] * theta**j) of Q(theta), theta = radicand**(1/degree)."""

    backend = "root"
    __slots__ = ("degree", "radicand", "coeffs")

    def __init__(self, degree: int, radicand: int, coeffs: tuple[Fraction, ...]):
        assert degree >= 2 and len(coeffs) == degree
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "radicand", radicand)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("RootScalar is immutable")

    @staticmethod
    def make(degree: int, radicand: int, coeffs: tuple[Fraction, ...]) -> Scalar:
        if all(c == 0 for c in coeffs[1:]):
            return RationalScalar(coeffs[0])
        return RootScalar(degree, radicand, coeffs)

    def _embed(self, other: Scalar) -> "RootScalar":
        assert isinstance(other, RationalScalar)
        coeffs = (other.value,) + (Fraction(0),) * (self.degree - 1)
        return RootScalar(self.degree, self.radicand, coeffs)

    def __neg__(self) -> "RootScalar":
        return RootScalar(self.degree, self.radicand, tuple(-c for c in self.coeffs))

    def _add(self, other: "RootScalar") -> Scalar:
        coeffs = tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        return RootScalar.make(self.degree, self.radicand, coeffs)

    def _mul(self, other: "RootScalar") -> Scalar:
        d, r = self.degree, self.radicand
        acc = [Fraction(0)] * d
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b == 0:
                    continue
                k = i + j
                if k < d:
                    acc[k] += a * b
                else:
                    acc[k - d] += a * b * r
        return RootScalar.make(d, r, tuple(acc))

    def _inverse(self) -> Scalar:
        # Solve (self * x) == 1 as a linear system over Q in the theta basis.
        d, r = self.degree, self.radicand
        cols = []
        for j in range(d):
            col = [Fraction(0)] * d
            for i, a in enumerate(self.coeffs):
                k = i + j
                if k < d:
                    col[k] += a
                else:
                    col[k - d] += a * r
            cols.append(col)
        mat = [[cols[j][i] for j in range(d)] for i in range(d)]
        rhs = [Fraction(1)] + [Fraction(0)] * (d - 1)
        for p in range(d):
            piv = next((i for i in range(p, d) if mat[i][p] != 0), None)
            if piv is None:
                raise ZeroDivisionError("non-invertible root element")
            mat[p], mat[piv] = mat[piv], mat[p]
            rhs[p], rhs[piv] = rhs[piv], rhs[p]
            inv = 1 / mat[p][p]
            mat[p] = [v * inv for v in mat[p]]
            rhs[p] *= inv
            for i in range(d):
                if i != p and mat[i][p] != 0:
                    f = mat[i][p]
                    mat[i] = [v - f * w for v, w in zip(mat[i], mat[p])]
                    rhs[i] -= f * rhs[p]
        return RootScalar.make(d, r, tuple(rhs))

    def sign(self) -> Sign:
        if all(c == 0 for c in self.coeffs):
            return Sign.ZERO  # only reachable through _embed of zero
        if all(c >= 0 for c in self.coeffs):
            return Sign.POSITIVE  # theta > 0
        if all(c <= 0 for c in self.coeffs):
            return Sign.NEGATIVE
        bits = max(c.numerator.bit_length() + c.denominator.bit_length() for c in self.coeffs)
        prec = max(64, bits + 32)
        while prec <= (1 << 22):
            iv = self._interval(prec)
            lo, hi = iv
            if mpf_cmp(lo, fzero) > 0:
                return Sign.POSITIVE
            if mpf_cmp(hi, fzero) < 0:
                return Sign.NEGATIVE
            prec *= 2
        raise SignUndeterminedError("root element sign refinement exhausted")

    def _interval(self, precision_bits: int):
        ctx = _ctx(precision_bits)
        theta = ctx.exp(ctx.log(ctx.mpf(self.radicand)) / self.degree)
        acc = ctx.mpf(0)
        for c in reversed(self.coeffs):
            term = ctx.mpf(c.numerator) / ctx.mpf(c.denominator)
            acc = acc * theta + term
        return acc._mpi_

    def to_ball(self, precision_bits: int = DEFAULT_PRECISION_BITS) -> "BallScalar":
        return BallScalar(self._interval(precision_bits), precision_bits)

    def text(self) -> str:
        parts = [f"{c}*r^{j}" if j else str(c) for j, c in enumerate(self.coeffs) if c != 0]
        return f"({' + '.join(parts)} with r={self.radicand}^(1/{self.degree}))"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RootScalar)
            and (self.degree, self.radicand) == (other.degree, other.radicand)
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(("root", self.degree, self.radicand, self.coeffs))

    def __repr__(self):
        return f"RootScalar{self.text()}"


class BallScalar(Scalar):
    backend = "ball"
    __slots__ = ("mpi", "precision_bits")

    def __init__(self, mpi, precision_bits: int):
        object.__setattr__(self, "mpi", mpi)
        object.__setattr__(self, "precision_bits", max(precision_bits, 4))

    def __setattr__(self, *a):
        raise AttributeError("BallScalar is immutable")

    def _iv(self, ctx):
        return ctx.make_mpf(self.mpi)

    def __neg__(self) -> "BallScalar":
        ctx = _ctx(self.precision_bits)
        return BallScalar((-self._iv(ctx))._mpi_, self.precision_bits)

    def _add(self, other: "BallScalar") -> "BallScalar":
        prec = max(self.precision_bits, other.precision_bits)
        ctx = _ctx(prec)
        return BallScalar((self._iv(ctx) + other._iv(ctx))._mpi_, prec)

    def _mul(self, other: "BallScalar") -> "BallScalar":
        prec = max(self.precision_bits, other.precision_bits)
        ctx = _ctx(prec)
        return BallScalar((self._iv(ctx) * other._iv(ctx))._mpi_, prec)

    def _inverse(self) -> "BallScalar":
        s = self.sign()
        if s == Sign.ZERO:
            raise ZeroDivisionError("division by exact zero ball")
        if s == Sign.UNDETERMINED:
            raise SignUndeterminedError("division by a ball whose enclosure straddles zero")
        ctx = _ctx(self.precision_bits)
        return BallScalar((ctx.mpf(1) / self._iv(ctx))._mpi_, self.precision_bits)

    def sign(self) -> Sign:
        lo, hi = self.mpi
        if mpf_cmp(lo, fzero) > 0:
            return Sign.POSITIVE
        if mpf_cmp(hi, fzero) < 0:
            return Sign.NEGATIVE
        if lo == fzero and hi == fzero:
            return Sign.ZERO
        return Sign.UNDETERMINED

    def to_ball(self, precision_bits: int = DEFAULT_PRECISION_BITS) -> "BallScalar":
        if precision_bits == self.precision_bits:
            return self
        return BallScalar(self.mpi, max(precision_bits, self.precision_bits))

    def exp(self) -> "BallScalar":
        ctx = _ctx(self.precision_bits)
        return BallScalar(ctx.exp(self._iv(ctx))._mpi_, self.precision_bits)

    def log(self) -> "BallScalar":
        if self.require_sign("log argument") != Sign.POSITIVE:
            raise DomainError("log of a non-positive ball")
        ctx = _ctx(self.precision_bits)
        return BallScalar(ctx.log(self._iv(ctx))._mpi_, self.precision_bits)

    def midpoint_str(self, dps: int | None = None) -> str:
        lo, hi = self.mpi
        mid = mpf_mul(mpf_add(lo, hi, self.precision_bits + 8), fhalf)
        if dps is None:
            dps = max(5, int(self.precision_bits * 0.30103) - 2)
        return to_str(mid, dps)

    def radius_str(self) -> str:
        lo, hi = self.mpi
        rad = mpf_mul(mpf_sub(hi, lo, 32), fhalf)
        return to_str(rad, 3)

    def text(self) -> str:
        return self.midpoint_str()

    def __eq__(self, other) -> bool:
        return isinstance(other, BallScalar) and self.mpi == other.mpi

    def __hash__(self):
        return hash(("ball", self.mpi))

    def __repr__(self):
        ctx = _ctx(self.precision_bits)
        return f"BallScalar({ctx.make_mpf(self.mpi)}, bits={self.precision_bits})"


# -- generic scalar functions ---------------------------------------------


def int_pow(value: Scalar, exponent: int) -> Scalar:
    if not isinstance(exponent, int):
        raise TypeError("use scalar_pow for fractional exponents")
    if exponent < 0:
        return int_pow(value, -exponent)._inverse()
    result: Scalar = ONE
    base = value
    e = exponent
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


def nth_root(value: Scalar, n: int) -> Scalar:
    """Principal n-th root; exact backends stay exact or extend to Q(theta)."""
    if n <= 0:
        raise ValueError("root index must be positive")
    if n == 1:
        return value
    if isinstance(value, RationalScalar):
        fr = value.value
        if fr == 0:
            return ZERO
        if fr < 0:
            if n % 2 == 1:
                return -nth_root(-value, n)
            raise DomainError("even root of a negative rational")
        scale, degree, radicand = _canonical_root(fr, n)
        if degree == 1:
            return RationalScalar(scale)
        coeffs = [Fraction(0)] * degree
        coeffs[1] = scale
        return RootScalar(degree, radicand, tuple(coeffs))
    if isinstance(value, BallScalar):
        if value.require_sign("radicand") != Sign.POSITIVE:
            raise DomainError("root of a non-positive ball")
        ctx = _ctx(value.precision_bits)
        iv = ctx.exp(ctx.log(value._iv(ctx)) / n)
        return BallScalar(iv._mpi_, value.precision_bits)
    raise ExactnessError(
        "nested radicals are not supported exactly; convert to a ball backend"
    )


def scalar_pow(value: Scalar, exponent: Fraction | int) -> Scalar:
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        return int_pow(value, exponent.numerator)
    if isinstance(value, BallScalar):
        if value.require_sign("power base") != Sign.POSITIVE:
            raise DomainError("fractional power of a non-positive ball")
        ctx = _ctx(value.precision_bits)
        e = ctx.mpf(exponent.numerator) / ctx.mpf(exponent.denominator)
        iv = ctx.exp(e * ctx.log(value._iv(ctx)))
        return BallScalar(iv._mpi_, value.precision_bits)
    return nth_root(int_pow(value, exponent.numerator), exponent.denominator)


def scalar_exp(value: Scalar) -> Scalar:
    if isinstance(value, BallScalar):
        return value.exp()
    if isinstance(value, RationalScalar) and value.value == 0:
        return ONE
    raise ExactnessError("exp of a nonzero exact scalar is transcendental")


def scalar_log(value: Scalar) -> Scalar:
    if isinstance(value, BallScalar):
        return value.log()
    if isinstance(value, RationalScalar) and value.value == 1:
        return ZERO
    if value.require_sign("log argument") != Sign.POSITIVE:
        raise DomainError("log of a non-positive scalar")
    raise ExactnessError("log of an exact scalar other than 1 is transcendental")


def scalar_eq(a: Scalar, b: Scalar) -> bool:
    """Exact-backend equality; for balls, certified equality only when both
    enclosures are the identical point interval."""
    diff = a - b
    return diff.sign() == Sign.ZERO


def certified_lt(a: Scalar, b: ScalarLike) -> bool:
    return (a - as_scalar(b)).sign() == Sign.NEGATIVE


def certified_gt(a: Scalar, b: ScalarLike) -> bool:
    return (a - as_scalar(b)).sign() == Sign.POSITIVE


def abs_le(a: Scalar, bound: ScalarLike) -> bool:
    """Certified |a| <= bound."""
    bound = as_scalar(bound)
    s = a.sign()
    if s == Sign.ZERO:
        return True
    if s == Sign.UNDETERMINED:
        # fall back to endpoint reasoning for balls
        if isinstance(a, BallScalar):
            return certified_lt(a, bound) and certified_gt(a, -bound)
        return False
    mag = a if s == Sign.POSITIVE else -a
    d = (bound - mag).sign()
    return d in (Sign.POSITIVE, Sign.ZERO)
