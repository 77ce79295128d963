"""Sparse exact polynomials over Q or F_p, plus truncated Hilbert series."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    _mpq = Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldConfig:
    """Coefficient field: kind 'q' (rationals) or 'fp' with prime p."""

    kind: str = "q"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("q", "fp"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "fp" and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def parse(cls, text: str) -> "FieldConfig":
        text = text.strip().lower()
        if text in ("q", "qq", "rationals"):
            return cls("q")
        if text.startswith("fp:"):
            return cls("fp", int(text[3:]))
        raise ValueError(f"bad field spec {text!r}")

    def __str__(self):
        return "q" if self.kind == "q" else f"fp:{self.p}"

    @property
    def one(self):
        return _mpq(1) if self.kind == "q" else 1

    @property
    def zero(self):
        return _mpq(0) if self.kind == "q" else 0

    def coerce(self, c):
        if self.kind == "q":
            return _mpq(c)
        if isinstance(c, Fraction) or type(c).__name__ == "mpq":
            num, den = int(c.numerator), int(c.denominator)
            return num * pow(den, -1, self.p) % self.p
        return int(c) % self.p

    def norm(self, c):
        return c if self.kind == "q" else c % self.p

    def inv(self, c):
        if self.kind == "q":
            return 1 / c
        return pow(int(c), -1, self.p)

    def to_int_pair(self, c) -> tuple[int, int]:
        if self.kind == "q":
            return int(c.numerator), int(c.denominator)
        return int(c), 1


QQ = FieldConfig("q")


def _monomial_str(m, names):
    parts = []
    for e, nm in zip(m, names):
        if e == 1:
            parts.append(nm)
        elif e > 1:
            parts.append(f"{nm}^{e}")
    return "*".join(parts)


class Polynomial:
    """Immutable sparse polynomial: exponent tuple -> nonzero coefficient."""

    __slots__ = ("terms", "nvars", "field", "names", "_hash")

    def __init__(self, terms: dict, nvars: int, field: FieldConfig = QQ, names: Sequence[str] | None = None,
                 _clean: bool = False):
        if not _clean:
            clean = {}
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != nvars:
                    raise ValueError("exponent vector does not match arity")
                c = field.coerce(c)
                if c:
                    clean[m] = clean.get(m, field.zero) + c
                    clean[m] = field.norm(clean[m])
                    if not clean[m]:
                        del clean[m]
            terms = clean
        self.terms = terms
        self.nvars = nvars
        self.field = field
        self.names = tuple(names) if names is not None else tuple(f"U{i}" for i in range(nvars))
        self._hash = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars, field=QQ, names=None):
        return cls({}, nvars, field, names, _clean=True)

    @classmethod
    def const(cls, c, nvars, field=QQ, names=None):
        return cls({(0,) * nvars: c}, nvars, field, names)

    @classmethod
    def var(cls, i, nvars, field=QQ, names=None):
        m = [0] * nvars
        m[i] = 1
        return cls({tuple(m): 1}, nvars, field, names)

    @classmethod
    def monomial(cls, exps, nvars, field=QQ, names=None, coeff=1):
        return cls({tuple(exps): coeff}, nvars, field, names)

    @classmethod
    def from_linear(cls, coeffs: dict, nvars, field=QQ, names=None):
        """Linear form sum c_i U_i from {i: c_i}."""
        terms = {}
        for i, c in coeffs.items():
            m = [0] * nvars
            m[i] = 1
            terms[tuple(m)] = c
        return cls(terms, nvars, field, names)

    def _like(self, terms):
        return Polynomial(terms, self.nvars, self.field, self.names, _clean=True)

    def _check(self, other):
        if not isinstance(other, Polynomial):
            raise TypeError("expected Polynomial")
        if other.nvars != self.nvars:
            raise ValueError("arity mismatch")
        if other.field != self.field:
            raise ValueError("field mismatch")

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Polynomial):
            if other == 0:
                return self
            other = Polynomial.const(other, self.nvars, self.field, self.names)
        self._check(other)
        out = dict(self.terms)
        F = self.field
        for m, c in other.terms.items():
            v = F.norm(out.get(m, F.zero) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return self._like({m: F.norm(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.const(other, self.nvars, self.field, self.names)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        F = self.field
        c = F.coerce(c)
        if not c:
            return self._like({})
        return self._like({m: F.norm(v * c) for m, v in self.terms.items()})

    def mul_monomial(self, mono, c=None):
        F = self.field
        out = {}
        for m, v in self.terms.items():
            nm = tuple(a + b for a, b in zip(m, mono))
            out[nm] = v if c is None else F.norm(v * c)
        return self._like(out)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        F = self.field
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = F.norm(out.get(m, F.zero) + c1 * c2)
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return self._like(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = Polynomial.const(1, self.nvars, self.field, self.names)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ----------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(m) for m in self.terms}) <= 1

    def variables(self):
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return sorted(used)

    def specialize_zero(self, var: int) -> "Polynomial":
        if not 0 <= var < self.nvars:
            raise ValueError(f"unknown variable {var}")
        return self._like({m: c for m, c in self.terms.items() if m[var] == 0})

    def with_names(self, names):
        return Polynomial(self.terms, self.nvars, self.field, names, _clean=True)

    def evaluate(self, point):
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * x ** e
            total = total + v
        return total

    def term_list(self):
        """[[coefficient-as-str, exponents], ...] in a stable order."""
        return [[str(c), list(m)] for m, c in sorted(self.terms.items(), reverse=True)]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True):
            ms = _monomial_str(m, self.names)
            if ms:
                cs = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                parts.append(f"{cs}{ms}")
            else:
                parts.append(str(c))
        return " + ".join(parts).replace("+ -", "- ")


def poly_arith(op: str, f: Polynomial, g: Polynomial) -> Polynomial:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def specialize_zero(f: Polynomial, var: int) -> Polynomial:
    return f.specialize_zero(var)


# -- univariate integer polynomials in T (lists, low degree first) -----------

def upoly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return upoly_trim(out)


def upoly_add(a, b):
    n = max(len(a), len(b))
    return upoly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def one_minus_t_pow(k):
    return [(-1) ** j * comb(k, j) for j in range(k + 1)]


def series_expand(num, denom_power, D):
    """Coefficients of num/(1-T)^denom_power up to T^D."""
    out = [0] * (D + 1)
    for i, c in enumerate(num):
        if not c or i > D:
            continue
        for d in range(i, D + 1):
            out[d] += c * (comb(d - i + denom_power - 1, denom_power - 1) if denom_power > 0 else int(d == i))
    return out


def divide_one_minus_t(num):
    """Exact division by (1-T); returns None if num(1) != 0."""
    if sum(num) != 0:
        return None
    q, acc = [], 0
    for c in num[:-1]:
        acc += c
        q.append(acc)
    return upoly_trim(q)


@dataclass
class TruncatedSeries:
    """Graded dimensions d_0..d_D with an optional recognized form num/(1-T)^denom_power."""

    coeffs: list
    D: int
    num: list | None = None
    denom_power: int | None = None
    stable: bool = False

    def __post_init__(self):
        self.coeffs = [int(c) for c in self.coeffs[: self.D + 1]] + [0] * max(0, self.D + 1 - len(self.coeffs))

    def to_doc(self):
        return {"num": self.num, "denom_power": self.denom_power, "truncation": self.D, "stable": self.stable}

    def shifted(self, s: int) -> "TruncatedSeries":
        """Multiply by T^s (s >= 0), keeping the window."""
        coeffs = [0] * s + self.coeffs
        num = None if self.num is None else ([0] * s + self.num if self.num else [])
        return TruncatedSeries(coeffs[: self.D + 1], self.D, num, self.denom_power, self.stable)

    def is_zero(self):
        return not any(self.coeffs)

    def pretty(self, var="T"):
        if self.num is None:
            return f"{self.coeffs} (unrecognized)"
        if not self.num:
            return "0"
        terms = []
        for i, c in enumerate(self.num):
            if c:
                mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
                if mon:
                    cs = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                    terms.append(f"{cs}{mon}")
                else:
                    terms.append(str(c))
        numer = " + ".join(terms).replace("+ -", "- ")
        if self.denom_power == 0:
            return numer
        return f"({numer})/(1-{var})^{self.denom_power}"


def series_recognize(s: TruncatedSeries, nvars: int, window: int | None = None) -> TruncatedSeries:
    """Fit num/(1-T)^nvars and cancel (1-T) factors.

    The fit is trusted ("stable") when the last `window` numerator coefficients
    vanish; by default window = nvars.
    """
    D = s.D
    window = nvars if window is None else window
    num = upoly_mul(s.coeffs, one_minus_t_pow(nvars))[: D + 1]
    tail_lo = max(0, D - window + 1)
    stable = all(c == 0 for c in num[tail_lo: D + 1]) and tail_lo > 0 or not any(s.coeffs)
    num = upoly_trim(num[: D + 1])
    power = nvars
    if stable:
        while power > 0 and num:
            q = divide_one_minus_t(num)
            if q is None:
                break
            num, power = q, power - 1
        if not num:
            power = 0
    return TruncatedSeries(list(s.coeffs), D, num, power, stable)


def series_from_rational(num, denom_power, D) -> TruncatedSeries:
    num = upoly_trim(num)
    power = denom_power
    while power > 0 and num:
        q = divide_one_minus_t(num)
        if q is None:
            break
        num, power = q, power - 1
    if not num:
        power = 0
    return TruncatedSeries(series_expand(num, power, D), D, num, power, True)


def monomials_of_degree(nvars: int, d: int) -> Iterable[tuple]:
    if nvars == 0:
        if d == 0:
            yield ()
        return
    if nvars == 1:
        yield (d,)
        return
    for e in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - e):
            yield (e,) + rest
