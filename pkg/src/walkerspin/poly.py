"""Exact sparse polynomials over the rationals in the coordinates u, v, x, y.

Everything downstream manipulates polynomial or rational-function data in
four fixed coordinates, so this module pins down one canonical
representation: a mapping from exponent 4-tuples to nonzero ``Fraction``
coefficients.  There are no floats anywhere and equality is exact.

``RationalFunction`` is a thin quotient wrapper.  Denominators are not
reduced by polynomial gcd; equality goes through cross-multiplication, and
the common case of a unit denominator is special-cased throughout.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

VARIABLES = ("u", "v", "x", "y")
_VAR_INDEX = {name: i for i, name in enumerate(VARIABLES)}

Exponents = tuple[int, int, int, int]
Scalar = Union[int, Fraction]


class ExprSyntaxError(ValueError):
    """Raised on malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class Poly:
    """Polynomial in u, v, x, y with Fraction coefficients, kept canonical.

    Canonical means: the term dict never stores a zero coefficient.  All
    operations return new objects; instances are treated as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exponents, Scalar] | None = None):
        clean: dict[Exponents, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != 4 or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent tuple {exps!r}")
                c = _as_fraction(coeff)
                if c:
                    key = (int(exps[0]), int(exps[1]), int(exps[2]), int(exps[3]))
                    acc = clean.get(key)
                    c = c if acc is None else acc + c
                    if c:
                        clean[key] = c
                    elif key in clean:
                        del clean[key]
        self.terms = clean

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def const(cls, value: Scalar) -> "Poly":
        return cls({(0, 0, 0, 0): _as_fraction(value)})

    @classmethod
    def variable(cls, name: str) -> "Poly":
        if name not in _VAR_INDEX:
            raise ValueError(f"unknown variable {name!r}")
        exps = [0, 0, 0, 0]
        exps[_VAR_INDEX[name]] = 1
        return cls({tuple(exps): 1})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def constant_value(self) -> Fraction | None:
        """The value as a Fraction if constant, else None."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and (0, 0, 0, 0) in self.terms:
            return self.terms[(0, 0, 0, 0)]
        return None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> "Poly":
        out = Poly()
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __add__(self, other: "Poly | Scalar") -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        elif not isinstance(other, Poly):
            return NotImplemented
        merged = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = merged.get(exps)
            total = coeff if acc is None else acc + coeff
            if total:
                merged[exps] = total
            elif exps in merged:
                del merged[exps]
        out = Poly()
        out.terms = merged
        return out

    __radd__ = __add__

    def __sub__(self, other: "Poly | Scalar") -> "Poly":
        return self + (-other if isinstance(other, Poly) else Poly.const(-_as_fraction(other)))

    def __rsub__(self, other: Scalar) -> "Poly":
        return Poly.const(other) + (-self)

    def __mul__(self, other: "Poly | Scalar") -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return Poly.zero()
            out = Poly()
            out.terms = {e: k * c for e, k in self.terms.items()}
            return out
        if not isinstance(other, Poly):
            return NotImplemented
        product: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                acc = product.get(key)
                total = c1 * c2 if acc is None else acc + c1 * c2
                if total:
                    product[key] = total
                elif key in product:
                    del product[key]
        out = Poly()
        out.terms = product
        return out

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def diff(self, var: str) -> "Poly":
        """Partial derivative with respect to one of u, v, x, y."""
        if var not in _VAR_INDEX:
            raise ValueError(f"unknown variable {var!r}")
        i = _VAR_INDEX[var]
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            lowered = list(exps)
            lowered[i] = e - 1
            out[tuple(lowered)] = coeff * e
        p = Poly()
        p.terms = out
        return p

    def eval_at(self, point: Iterable[Scalar]) -> Fraction:
        """Exact evaluation at a 4-tuple of rationals, in coordinate order."""
        pt = [_as_fraction(c) for c in point]
        if len(pt) != 4:
            raise ValueError("evaluation point must have four coordinates")
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for base, e in zip(pt, exps):
                if e:
                    term *= base ** e
            total += term
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ordered = sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e)))
        pieces: list[str] = []
        for exps in ordered:
            coeff = self.terms[exps]
            factors = []
            for name, e in zip(VARIABLES, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not pieces:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Poly({self})"

    @classmethod
    def parse(cls, text: str) -> "Poly":
        """Parse arithmetic text such as ``3*u^2*v - x + 2/3``.

        Division is only permitted between integer literals (rational
        coefficients); ``u/v`` is rejected.
        """
        return _Parser(text).run()


class _Parser:
    """Recursive descent over +, -, *, ^, parentheses and rational literals."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def run(self) -> Poly:
        value = self.expr()
        self.skip_ws()
        if self.pos < len(self.text):
            raise ExprSyntaxError(
                f"unexpected character {self.text[self.pos]!r}", self.pos
            )
        return value

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> Poly:
        value = self.term()
        while True:
            self.skip_ws()
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                value = value + self.term()
            elif ch == "-":
                self.pos += 1
                value = value - self.term()
            else:
                return value

    def term(self) -> Poly:
        value = self.factor()
        while True:
            self.skip_ws()
            if self.peek() == "*":
                self.pos += 1
                value = value * self.factor()
            elif self.peek() == "/":
                raise ExprSyntaxError(
                    "division is only allowed between integer literals", self.pos
                )
            else:
                return value

    def factor(self) -> Poly:
        self.skip_ws()
        sign = 1
        while self.peek() in ("+", "-"):
            if self.peek() == "-":
                sign = -sign
            self.pos += 1
            self.skip_ws()
        base = self.atom()
        self.skip_ws()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            exp_pos = self.pos
            digits = self.read_digits()
            if digits is None:
                raise ExprSyntaxError("exponent must be a nonnegative integer", exp_pos)
            base = base ** int(digits)
        return base if sign > 0 else -base

    def atom(self) -> Poly:
        self.skip_ws()
        start = self.pos
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self.skip_ws()
            if self.peek() != ")":
                raise ExprSyntaxError("expected ')'", self.pos)
            self.pos += 1
            return inner
        if ch.isdigit():
            numerator = int(self.read_digits())
            self.skip_ws()
            if self.peek() == "/":
                self.pos += 1
                self.skip_ws()
                den_pos = self.pos
                digits = self.read_digits()
                if digits is None:
                    raise ExprSyntaxError(
                        "expected integer denominator after '/'", den_pos
                    )
                denominator = int(digits)
                if denominator == 0:
                    raise ExprSyntaxError("denominator is zero", den_pos)
                return Poly.const(Fraction(numerator, denominator))
            return Poly.const(numerator)
        if ch.isalpha() or ch == "_":
            name = self.read_name()
            if name not in _VAR_INDEX:
                raise ExprSyntaxError(f"unknown identifier {name!r}", start)
            return Poly.variable(name)
        if ch == "":
            raise ExprSyntaxError("unexpected end of input", self.pos)
        raise ExprSyntaxError(f"unexpected character {ch!r}", self.pos)

    def read_digits(self) -> str | None:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return self.text[start:self.pos] if self.pos > start else None

    def read_name(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start:self.pos]


ZERO = Poly.zero()
ONE = Poly.const(1)

PolyLike = Union[Poly, int, Fraction]


def _as_poly(value: PolyLike) -> Poly:
    if isinstance(value, Poly):
        return value
    return Poly.const(_as_fraction(value))


class RationalFunction:
    """Quotient of two polynomials, denominator nonzero.

    The representation is normalized so the denominator's leading
    coefficient (in the canonical term order) is one; full polynomial gcd
    reduction is deliberately not attempted.  Equality is decided by
    cross-multiplication, so different representatives compare equal.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: PolyLike, den: PolyLike = ONE):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator in rational function")
        if num.is_zero:
            num, den = ZERO, ONE
        elif den != ONE:
            lead = sorted(den.terms, key=lambda e: (-sum(e), tuple(-k for k in e)))[0]
            scale = 1 / den.terms[lead]
            num = num * scale
            den = den * scale
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: PolyLike) -> "RationalFunction":
        return cls(_as_poly(p))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den == ONE

    def as_poly(self) -> Poly:
        if self.den != ONE:
            raise ValueError(f"not a polynomial: {self}")
        return self.num

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (Poly, int, Fraction)):
            other = RationalFunction(_as_poly(other))
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        # Representatives of the same quotient can differ, so hashing by
        # parts would break the hash/eq contract; polynomials hash fine.
        raise TypeError("RationalFunction is unhashable")

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __add__(self, other) -> "RationalFunction":
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "RationalFunction":
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return RationalFunction(ZERO)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        return other / self

    def diff(self, var: str) -> "RationalFunction":
        if self.den == ONE:
            return RationalFunction(self.num.diff(var))
        return RationalFunction(
            self.num.diff(var) * self.den - self.num * self.den.diff(var),
            self.den * self.den,
        )

    def eval_at(self, point: Iterable[Scalar]) -> Fraction:
        pt = tuple(point)
        bottom = self.den.eval_at(pt)
        if bottom == 0:
            raise ZeroDivisionError(f"denominator vanishes at {pt}")
        return self.num.eval_at(pt) / bottom

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def _as_rational(value) -> RationalFunction | None:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, (Poly, int, Fraction)):
        return RationalFunction(_as_poly(value))
    return None


RF_ZERO = RationalFunction(ZERO)
RF_ONE = RationalFunction(ONE)


def poly_arith(p: Poly, q: Poly, op: str) -> Poly:
    """Binary arithmetic dispatch used by the command layer."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def poly_diff(p: Poly, var: str) -> Poly:
    return p.diff(var)


def poly_eval(p: Poly, point: Iterable[Scalar]) -> Fraction:
    return p.eval_at(point)


def parse_poly(text: str) -> Poly:
    return Poly.parse(text)
