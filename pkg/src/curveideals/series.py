"""Exact scalars and truncated Laurent series in one variable ``t``.

A :class:`TruncSeries` carries its own certified range: coefficients at
exponents below ``cap`` are exact, nothing is claimed above it.  ``cap=None``
marks an exact Laurent polynomial (every coefficient known, all others zero).
Arithmetic propagates the tightest sound cap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import CapError, FieldMismatchError, InputError, SeriesSyntaxError

MAX_PRIME = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The residue field: the rationals (``kind='Q'``) or a prime field."""

    kind: str = "Q"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise InputError("the rationals carry no characteristic")
        elif self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise InputError(f"characteristic must be prime, got {self.p}")
            if self.p >= MAX_PRIME:
                raise InputError(f"prime {self.p} too large (limit 2^31)")
        else:
            raise InputError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("Q")

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls("Fp", p)

    @property
    def characteristic(self) -> int:
        return self.p or 0

    @property
    def dtype(self):
        return np.int64 if self.p else object

    def __str__(self):
        return "Q" if self.p is None else f"F_{self.p}"

    def to_json(self) -> dict:
        return {"kind": "Q"} if self.p is None else {"kind": "Fp", "p": self.p}

    # scalars

    def scalar(self, x) -> int | Fraction:
        """Coerce an int or Fraction into this field."""
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise InputError(f"denominator {x.denominator} vanishes in F_{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def reduce(self, arr):
        if self.p is None:
            return arr
        return arr % self.p

    def zeros(self, shape) -> np.ndarray:
        if self.p is None:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.int64)

    def array(self, values) -> np.ndarray:
        if self.p is None:
            out = np.empty(len(values), dtype=object)
            for i, v in enumerate(values):
                out[i] = Fraction(v)
            return out
        return np.array([int(v) % self.p for v in values], dtype=np.int64)

    def random_scalar(self, rng, nonzero=False):
        if self.p is None:
            lo = 1 if nonzero else 0
            v = rng.randint(lo, 9)
            if rng.random() < 0.5:
                v = -v
            return Fraction(v)
        return rng.randrange(1 if nonzero else 0, self.p)

    def render_scalar(self, c) -> str:
        return str(c)


class _ZeroOrder:
    """Order of the zero series.  Refuses ordered comparison on purpose."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO_ORDER"

    def _refuse(self, other):
        raise TypeError("the zero series has no integer order")

    __lt__ = __le__ = __gt__ = __ge__ = _refuse

    def __reduce__(self):
        return (_ZeroOrder, ())


ZERO_ORDER = _ZeroOrder()


def _min_cap(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TruncSeries:
    """An element of k((t)) known exactly below ``cap``."""

    __slots__ = ("field", "coeffs", "cap")

    def __init__(self, field: FieldSpec, coeffs: Mapping[int, object] | None = None,
                 cap: int | None = None):
        clean = {}
        for k, c in (coeffs or {}).items():
            k = int(k)
            c = field.scalar(c)
            if c == 0:
                continue
            if cap is not None and k >= cap:
                raise CapError(f"exponent {k} is not below cap {cap}")
            clean[k] = c
        self.field = field
        self.coeffs = dict(sorted(clean.items()))
        self.cap = cap

    @classmethod
    def monomial(cls, field, exponent, coeff=1, cap=None):
        return cls(field, {exponent: coeff}, cap)

    @classmethod
    def from_dense(cls, field, lo, arr, cap=None):
        return cls(field, {lo + i: c for i, c in enumerate(arr) if c != 0}, cap)

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Coefficient vector on the window [lo, hi); refuses to drop terms below lo."""
        if self.cap is not None and self.cap < hi:
            raise CapError(f"cap {self.cap} below window end {hi}")
        out = self.field.zeros(hi - lo)
        for k, c in self.coeffs.items():
            if k < lo:
                raise CapError(f"term t^{k} lies below window start {lo}")
            if k < hi:
                out[k - lo] = c
        return out

    @property
    def order(self):
        if not self.coeffs:
            return ZERO_ORDER
        return next(iter(self.coeffs))

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading_coefficient(self):
        return self.coeffs[self.order] if self.coeffs else 0

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.field == other.field and self.cap == other.cap
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.cap, tuple(self.coeffs.items())))

    def __repr__(self):
        cap = "exact" if self.cap is None else f"cap={self.cap}"
        return f"TruncSeries({render_series(self)!r}, {self.field}, {cap})"

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __add__(self, other):
        return series_arith("add", self, other)

    def __sub__(self, other):
        return series_arith("sub", self, other)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return series_arith("mul", self, other)
        return series_arith("scale", self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return series_arith("scale", self, -1)

    def shift(self, n: int) -> TruncSeries:
        return series_arith("shift", self, n)

    def truncate(self, cap: int) -> TruncSeries:
        new_cap = cap if self.cap is None else min(cap, self.cap)
        return TruncSeries(self.field, {k: c for k, c in self.coeffs.items() if k < new_cap},
                           new_cap)


def series_arith(kind: str, a: TruncSeries, b) -> TruncSeries:
    """add | sub | mul | scale | shift with cap propagation."""
    f = a.field
    if kind in ("add", "sub"):
        a._check(b)
        cap = _min_cap(a.cap, b.cap)
        out = dict(a.coeffs)
        sign = 1 if kind == "add" else -1
        for k, c in b.coeffs.items():
            out[k] = out.get(k, 0) + sign * c
        if cap is not None:
            out = {k: c for k, c in out.items() if k < cap}
        return TruncSeries(f, out, cap)
    if kind == "mul":
        a._check(b)
        if (a.is_zero() and a.cap is None) or (b.is_zero() and b.cap is None):
            return TruncSeries(f, {}, None)
        # a zero series known below its cap has order at least that cap
        ord_a = a.cap if a.is_zero() else a.order
        ord_b = b.cap if b.is_zero() else b.order
        cap_ab = None if a.cap is None else a.cap + ord_b
        cap_ba = None if b.cap is None else b.cap + ord_a
        cap = _min_cap(cap_ab, cap_ba)
        out: dict[int, object] = {}
        for i, x in a.coeffs.items():
            for j, y in b.coeffs.items():
                k = i + j
                if cap is not None and k >= cap:
                    continue
                out[k] = out.get(k, 0) + x * y
        return TruncSeries(f, {k: f.scalar(c) for k, c in out.items()}, cap)
    if kind == "scale":
        c = f.scalar(b)
        return TruncSeries(f, {k: v * c for k, v in a.coeffs.items()}, a.cap)
    if kind == "shift":
        n = int(b)
        return TruncSeries(f, {k + n: v for k, v in a.coeffs.items()},
                           None if a.cap is None else a.cap + n)
    raise ValueError(f"unknown series operation {kind!r}")


def series_order(a: TruncSeries):
    return a.order


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<op>[-+*/^])|(?P<t>t))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise SeriesSyntaxError(f"unexpected character {text[start]!r}", text, start)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise SeriesSyntaxError(msg, self.text, tok[2])

    def signed_int(self):
        sign = 1
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            sign = -1
        elif self.peek()[1] == "+" and self.peek()[0] == "op":
            self.take()
        tok = self.take()
        if tok[0] != "int":
            self.fail("expected an integer", tok)
        return sign * int(tok[1])

    def mono(self):
        self.take()  # 't'
        if self.peek() == ("op", "^", self.peek()[2]):
            self.take()
            return self.signed_int()
        return 1

    def coeff(self):
        num = int(self.take()[1])
        if self.peek()[0] == "op" and self.peek()[1] == "/":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.fail("expected a denominator", tok)
            den = int(tok[1])
            if den == 0:
                self.fail("zero denominator", tok)
            return Fraction(num, den)
        return Fraction(num)

    def term(self):
        tok = self.peek()
        if tok[0] == "t":
            return Fraction(1), self.mono()
        if tok[0] != "int":
            self.fail("expected a term")
        c = self.coeff()
        if self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            if self.peek()[0] != "t":
                self.fail("expected 't' after '*'")
            return c, self.mono()
        return c, 0

    def expr(self):
        terms = []
        sign = 1
        if self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
        while True:
            c, k = self.term()
            terms.append((sign * c, k))
            tok = self.peek()
            if tok[0] == "end":
                return terms
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                sign = -1 if tok[1] == "-" else 1
                continue
            self.fail("expected '+', '-' or end of input")


def parse_series(text: str, field: FieldSpec, cap: int | None = None) -> TruncSeries:
    """Parse ``c*t^k + ...``; ``cap=None`` yields an exact Laurent polynomial."""
    if not text.strip():
        raise SeriesSyntaxError("empty expression", text, 0)
    terms = _Parser(text).expr()
    out: dict[int, object] = {}
    for c, k in terms:
        if cap is not None and k >= cap:
            raise CapError(f"exponent {k} is not below cap {cap} in {text!r}")
        out[k] = out.get(k, 0) + field.scalar(c)
    return TruncSeries(field, out, cap)


def render_series(a: TruncSeries) -> str:
    """Inverse of :func:`parse_series` (the cap is not part of the text)."""
    if a.is_zero():
        return "0"
    parts = []
    for k, c in a.coeffs.items():
        neg = a.field.p is None and c < 0
        mag = -c if neg else c
        if k == 0:
            body = str(mag)
        else:
            mono = "t" if k == 1 else f"t^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)
