"""Exact sparse multivariate polynomials over the rationals.

Variables are y1..ym over a fixed ground set {1, ..., m}.  A polynomial is
a map from exponent tuples (one small nonnegative integer per variable) to
nonzero Fraction coefficients.  All arithmetic is exact; equality is exact
term-wise equality.  Values are immutable after construction and safe to
share across threads.

Canonical term order is graded lexicographic: higher total degree first,
ties broken by the exponent tuple in descending lexicographic order (y1
weighs heaviest).  This fixes the text serialization.

Text grammar (whitespace insignificant):

    poly  := ['+'|'-'] term (('+'|'-') term)*
    term  := coeff ('*' var)* | var ('*' var)*
    coeff := integer | integer '/' positive-integer
    var   := 'y' index          # 1-based variable index

Powers are written as repeated factors (y3*y3, never y3^2), e.g.

    1/2*y3*y7 + y4*y6 - y5*y7
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Exponents = tuple[int, ...]


class GroundSetMismatchError(ValueError):
    """Raised when combining polynomials over different ground sets."""


class PolynomialParseError(ValueError):
    """Raised when polynomial text does not match the grammar."""


def _graded_lex_key(exps: Exponents) -> tuple:
    return (-sum(exps), tuple(-e for e in exps))


class Polynomial:
    """Immutable sparse polynomial over Fraction coefficients."""

    __slots__ = ("m", "_terms", "_hash")

    def __init__(self, m: int, terms: Mapping[Exponents, Fraction | int] | None = None):
        if m < 0:
            raise ValueError("ground set size must be nonnegative")
        clean: dict[Exponents, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != m:
                    raise GroundSetMismatchError(
                        f"exponent tuple {exps} does not match ground set size {m}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = Fraction(coeff)
                if c != 0:
                    acc = clean.get(exps)
                    clean[exps] = c if acc is None else acc + c
                    if clean[exps] == 0:
                        del clean[exps]
        self.m = m
        self._terms = clean
        self._hash: int | None = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, m: int) -> Polynomial:
        return cls(m)

    @classmethod
    def constant(cls, m: int, value: Fraction | int) -> Polynomial:
        return cls(m, {(0,) * m: Fraction(value)})

    @classmethod
    def one(cls, m: int) -> Polynomial:
        return cls.constant(m, 1)

    @classmethod
    def variable(cls, m: int, v: int) -> Polynomial:
        if not 1 <= v <= m:
            raise ValueError(f"variable index {v} outside ground set 1..{m}")
        exps = [0] * m
        exps[v - 1] = 1
        return cls(m, {tuple(exps): Fraction(1)})

    @classmethod
    def from_monomials(cls, m: int, entries: Iterable[tuple[Iterable[int], Fraction | int]]) -> Polynomial:
        """Build from (variable-index iterable, coefficient) pairs.

        Repeated indices give powers: ([3, 3], 1) is y3*y3.
        """
        acc: dict[Exponents, Fraction] = {}
        for indices, coeff in entries:
            exps = [0] * m
            for v in indices:
                if not 1 <= v <= m:
                    raise ValueError(f"variable index {v} outside ground set 1..{m}")
                exps[v - 1] += 1
            key = tuple(exps)
            acc[key] = acc.get(key, Fraction(0)) + Fraction(coeff)
        return cls(m, acc)

    # -- mapping-like access -------------------------------------------

    @property
    def terms(self) -> Mapping[Exponents, Fraction]:
        return self._terms

    def coefficient(self, exps: Iterable[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def num_terms(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in canonical graded-lex order."""
        return sorted(self._terms.items(), key=lambda kv: _graded_lex_key(kv[0]))

    def __iter__(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(self.sorted_terms())

    # -- ring operations ----------------------------------------------

    def _check_m(self, other: Polynomial) -> None:
        if self.m != other.m:
            raise GroundSetMismatchError(
                f"ground set sizes differ: {self.m} vs {other.m}")

    def __add__(self, other: Polynomial) -> Polynomial:
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_m(other)
        out = dict(self._terms)
        for exps, c in other._terms.items():
            acc = out.get(exps)
            s = c if acc is None else acc + c
            if s == 0:
                out.pop(exps, None)
            else:
                out[exps] = s
        return Polynomial(self.m, out)

    def __sub__(self, other: Polynomial) -> Polynomial:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> Polynomial:
        return Polynomial(self.m, {e: -c for e, c in self._terms.items()})

    def scalar_mul(self, value: Fraction | int) -> Polynomial:
        v = Fraction(value)
        if v == 0:
            return Polynomial.zero(self.m)
        return Polynomial(self.m, {e: c * v for e, c in self._terms.items()})

    def __mul__(self, other: Polynomial | Fraction | int) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            return self.scalar_mul(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_m(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                acc = out.get(key)
                s = c1 * c2 if acc is None else acc + c1 * c2
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return Polynomial(self.m, out)

    def __rmul__(self, other: Fraction | int) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            return self.scalar_mul(other)
        return NotImplemented

    def square(self) -> Polynomial:
        return self * self

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.one(self.m)
        for _ in range(n):
            out = out * self
        return out

    # -- contraction / deletion ----------------------------------------

    def contract(self, e: int) -> Polynomial:
        """Partial derivative with respect to y_e."""
        if not 1 <= e <= self.m:
            raise ValueError(f"variable index {e} outside ground set 1..{self.m}")
        i = e - 1
        out: dict[Exponents, Fraction] = {}
        for exps, c in self._terms.items():
            k = exps[i]
            if k == 0:
                continue
            key = exps[:i] + (k - 1,) + exps[i + 1:]
            acc = out.get(key)
            s = c * k if acc is None else acc + c * k
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return Polynomial(self.m, out)

    def delete(self, e: int) -> Polynomial:
        """Substitution y_e := 0."""
        if not 1 <= e <= self.m:
            raise ValueError(f"variable index {e} outside ground set 1..{self.m}")
        i = e - 1
        return Polynomial(self.m, {exps: c for exps, c in self._terms.items()
                                   if exps[i] == 0})

    # -- evaluation -----------------------------------------------------

    def eval_rational(self, point: Sequence[Fraction | int]) -> Fraction:
        if len(point) != self.m:
            raise GroundSetMismatchError(
                f"point length {len(point)} does not match ground set size {self.m}")
        vals = [Fraction(x) for x in point]
        total = Fraction(0)
        for exps, c in self._terms.items():
            term = c
            for v, e in zip(vals, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    def eval_complex(self, point: Sequence[complex]) -> complex:
        if len(point) != self.m:
            raise GroundSetMismatchError(
                f"point length {len(point)} does not match ground set size {self.m}")
        total = 0j
        for exps, c in self._terms.items():
            term = complex(c)
            for v, e in zip(point, exps):
                if e:
                    term *= complex(v) ** e
            total += term
        return total

    # -- predicates and shape -------------------------------------------

    def is_multiaffine(self) -> bool:
        return all(e <= 1 for exps in self._terms for e in exps)

    def has_positive_coefficients(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    def total_degree(self) -> int:
        if not self._terms:
            return 0
        return max(sum(exps) for exps in self._terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(exps) for exps in self._terms}
        return len(degs) <= 1

    def degree_in(self, v: int) -> int:
        i = v - 1
        return max((exps[i] for exps in self._terms), default=0)

    def support_variables(self) -> set[int]:
        """Indices of variables that actually occur."""
        out: set[int] = set()
        for exps in self._terms:
            for i, e in enumerate(exps):
                if e:
                    out.add(i + 1)
        return out

    def coefficients_in(self, v: int) -> dict[int, Polynomial]:
        """Collect terms by the power of y_v: returns {power: coefficient poly}.

        Coefficient polynomials live on the same ground set with y_v absent.
        """
        i = v - 1
        buckets: dict[int, dict[Exponents, Fraction]] = {}
        for exps, c in self._terms.items():
            k = exps[i]
            rest = exps[:i] + (0,) + exps[i + 1:]
            buckets.setdefault(k, {})[rest] = buckets.get(k, {}).get(rest, Fraction(0)) + c
        return {k: Polynomial(self.m, d) for k, d in buckets.items()}

    # -- relabeling -------------------------------------------------------

    def permuted(self, perm: Sequence[int]) -> Polynomial:
        """Relabel variables: old index i maps to perm[i-1].

        perm must be a permutation of 1..m.
        """
        if sorted(perm) != list(range(1, self.m + 1)):
            raise ValueError("perm is not a permutation of the ground set")
        out: dict[Exponents, Fraction] = {}
        for exps, c in self._terms.items():
            new = [0] * self.m
            for i, e in enumerate(exps):
                if e:
                    new[perm[i] - 1] = e
            out[tuple(new)] = c
        return Polynomial(self.m, out)

    def padded(self, new_m: int) -> Polynomial:
        """Extend the ground set to new_m >= m; new variables are absent."""
        if new_m < self.m:
            raise GroundSetMismatchError(
                f"cannot shrink ground set from {self.m} to {new_m}")
        if new_m == self.m:
            return self
        pad = (0,) * (new_m - self.m)
        return Polynomial(new_m, {exps + pad: c for exps, c in self._terms.items()})

    # -- equality and text -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.m == other.m and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.m, tuple(self.sorted_terms())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.m}, {format_polynomial(self)!r})"


# -- text format ------------------------------------------------------------

def format_polynomial(p: Polynomial) -> str:
    """Canonical text form (graded-lex term order, repeated-factor powers)."""
    if p.is_zero():
        return "0"
    pieces: list[str] = []
    for idx, (exps, coeff) in enumerate(p.sorted_terms()):
        neg = coeff < 0
        mag = -coeff if neg else coeff
        factors: list[str] = []
        if mag != 1 or not any(exps):
            factors.append(str(mag))
        for i, e in enumerate(exps):
            factors.extend([f"y{i + 1}"] * e)
        body = "*".join(factors)
        if idx == 0:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*/":
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
        elif ch == "y":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise PolynomialParseError(f"bare 'y' without index at position {i}")
            tokens.append(text[i:j])
            i = j
        else:
            raise PolynomialParseError(f"unexpected character {ch!r} at position {i}")
    return tokens


def parse_polynomial(text: str, m: int | None = None) -> Polynomial:
    """Parse the polynomial grammar.  If m is None it is inferred as the
    largest variable index present (0 for constant polynomials)."""
    tokens = _tokenize(text)
    if not tokens:
        raise PolynomialParseError("empty polynomial text")

    terms: list[tuple[Fraction, dict[int, int]]] = []
    pos = 0

    def parse_factor() -> tuple[Fraction | None, int | None]:
        nonlocal pos
        tok = tokens[pos]
        if tok.isdigit():
            pos += 1
            num = int(tok)
            if pos < len(tokens) and tokens[pos] == "/":
                pos += 1
                if pos >= len(tokens) or not tokens[pos].isdigit():
                    raise PolynomialParseError("expected denominator after '/'")
                den = int(tokens[pos])
                pos += 1
                if den == 0:
                    raise PolynomialParseError("zero denominator")
                return Fraction(num, den), None
            return Fraction(num), None
        if tok.startswith("y"):
            pos += 1
            idx = int(tok[1:])
            if idx < 1:
                raise PolynomialParseError(f"variable index must be >= 1, got y{idx}")
            return None, idx
        raise PolynomialParseError(f"unexpected token {tok!r}")

    sign = 1
    if tokens[pos] in "+-":
        sign = -1 if tokens[pos] == "-" else 1
        pos += 1
    while True:
        coeff = Fraction(sign)
        exps: dict[int, int] = {}
        while True:
            c, v = parse_factor()
            if c is not None:
                coeff *= c
            else:
                assert v is not None
                exps[v] = exps.get(v, 0) + 1
            if pos < len(tokens) and tokens[pos] == "*":
                pos += 1
                if pos >= len(tokens):
                    raise PolynomialParseError("dangling '*'")
                continue
            break
        terms.append((coeff, exps))
        if pos >= len(tokens):
            break
        tok = tokens[pos]
        if tok not in "+-":
            raise PolynomialParseError(f"expected '+' or '-', got {tok!r}")
        sign = -1 if tok == "-" else 1
        pos += 1
        if pos >= len(tokens):
            raise PolynomialParseError(f"dangling {tok!r}")

    max_idx = max((v for _, exps in terms for v in exps), default=0)
    if m is None:
        m = max_idx
    elif max_idx > m:
        raise PolynomialParseError(
            f"variable y{max_idx} outside declared ground set 1..{m}")
    acc: dict[Exponents, Fraction] = {}
    for coeff, exps in terms:
        key = tuple(exps.get(v, 0) for v in range(1, m + 1))
        acc[key] = acc.get(key, Fraction(0)) + coeff
    return Polynomial(m, acc)
