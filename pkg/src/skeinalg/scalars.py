"""Exact coefficient arithmetic for the four rings the engine works over.

Every coefficient that appears anywhere in the package is a :class:`Scalar`
in one of four modes:

* ``laurent``  -- Laurent polynomials in a formal unit ``w`` over the
  rationals (the generic deformation parameter);
* ``cyclo(N)`` -- the quotient of Q[w] by the N-th cyclotomic polynomial,
  for odd N > 1, so ``w`` is a primitive N-th root of unity and the
  quotient is a field;
* ``dual``     -- dual numbers Q[h]/(h^2), where ``w`` is interpreted as
  exp(-h/4) truncated at first order;
* ``rational`` -- plain rationals (``w`` = 1).

All arithmetic is exact; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple


class ScalarError(ValueError):
    """Raised on incompatible modes, non-unit inversion and bad input."""


@dataclass(frozen=True)
class Mode:
    kind: str  # 'laurent' | 'cyclo' | 'dual' | 'rational'
    order: Optional[int] = None  # N, for 'cyclo' only

    def __str__(self):
        if self.kind == "cyclo":
            return f"cyclo:{self.order}"
        return self.kind

    def is_field(self):
        return self.kind in ("cyclo", "rational")


LAURENT = Mode("laurent")
DUAL = Mode("dual")
RATIONAL = Mode("rational")


def cyclo(n: int) -> Mode:
    if n <= 1 or n % 2 == 0:
        raise ScalarError(f"cyclotomic mode needs an odd order > 1, got {n}")
    return Mode("cyclo", n)


def parse_mode(text: str) -> Mode:
    if text == "laurent":
        return LAURENT
    if text == "dual":
        return DUAL
    if text == "rational":
        return RATIONAL
    if text.startswith("cyclo:"):
        return cyclo(int(text.split(":", 1)[1]))
    raise ScalarError(f"unknown ring {text!r} (want laurent, cyclo:N, dual or rational)")


# ---------------------------------------------------------------------------
# cyclotomic machinery
# ---------------------------------------------------------------------------

def _polydiv_int(num, den):
    """Exact division of integer polynomials (den monic), lists low-to-high."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ScalarError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, low-to-high."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _polydiv_int(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _cyclo_ctx(n: int):
    """Reduction data for Q[w]/Phi_n: degree, x^j mod Phi_n tables, w^k table."""
    phi_poly = cyclotomic_polynomial(n)
    deg = len(phi_poly) - 1
    # x^deg = -(phi_poly[0] + ... + phi_poly[deg-1] x^{deg-1})
    reducers = []
    top = [Fraction(-c) for c in phi_poly[:deg]]
    cur = list(top)
    for _ in range(deg - 1):  # x^deg .. x^{2 deg - 2}
        reducers.append(tuple(cur))
        nxt = [Fraction(0)] + cur[: deg - 1]
        lead = cur[deg - 1]
        if lead:
            nxt = [a + lead * b for a, b in zip(nxt, top)]
        cur = nxt
    reducers.append(tuple(cur))
    omega_pows = []
    vec = [Fraction(0)] * deg
    vec[0] = Fraction(1)
    omega_pows.append(tuple(vec))
    for k in range(1, n):
        if k < deg:
            vec = [Fraction(0)] * deg
            vec[k] = Fraction(1)
        else:
            vec = list(reducers[k - deg])
        omega_pows.append(tuple(vec))
    return deg, tuple(reducers), tuple(omega_pows)


def _cyclo_mul(n, a, b):
    deg, reducers, _ = _cyclo_ctx(n)
    conv = [Fraction(0)] * (2 * deg - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
    out = conv[:deg]
    for j in range(deg, 2 * deg - 1):
        cj = conv[j]
        if cj:
            red = reducers[j - deg]
            for i in range(deg):
                out[i] += cj * red[i]
    return tuple(out)


def _trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _poly_divmod(p, q):
    """Quotient and remainder of Fraction polynomials (lists, low-to-high)."""
    p = list(p)
    dq = len(q) - 1
    inv_lead = 1 / q[-1]
    quo = [Fraction(0)] * max(len(p) - dq, 0)
    for i in range(len(p) - dq - 1, -1, -1):
        c = p[i + dq] * inv_lead
        if c:
            quo[i] = c
            for j, qj in enumerate(q):
                p[i + j] -= c * qj
    return quo, _trim(p)


def _poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        if pi:
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
    return out


def _poly_sub(p, q):
    n = max(len(p), len(q))
    p = p + [Fraction(0)] * (n - len(p))
    q = q + [Fraction(0)] * (n - len(q))
    return _trim([a - b for a, b in zip(p, q)])


def _cyclo_inv(n, a):
    """Inverse in Q[w]/Phi_n by the extended Euclidean algorithm."""
    deg, _, _ = _cyclo_ctx(n)
    phi = _trim([Fraction(c) for c in cyclotomic_polynomial(n)])
    # invariant: s_i * a = r_i (mod phi)
    r0, r1 = phi, _trim(list(a))
    s0, s1 = [], [Fraction(1)]
    if not r1:
        raise ScalarError("zero is not invertible in the cyclotomic field")
    while len(r1) > 1:
        quo, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub(s0, _poly_mul(quo, s1))
        if not r1:
            raise ScalarError("element shares a factor with the modulus")
    inv = [x / r1[0] for x in s1]
    return tuple((inv + [Fraction(0)] * deg)[:deg])


# ---------------------------------------------------------------------------
# Scalar
# ---------------------------------------------------------------------------

class Scalar:
    """An exact ring element in one of the four coefficient modes.

    Payloads are canonical and immutable: laurent scalars store a sorted
    tuple of (exponent, nonzero Fraction) pairs; cyclotomic scalars a
    fully reduced coefficient vector against the power basis; dual scalars
    the pair (c0, c1) for c0 + c1*h; rational scalars a Fraction.
    """

    __slots__ = ("mode", "data")

    def __init__(self, mode: Mode, data):
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "data", data)

    def __setattr__(self, *a):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(mode: Mode) -> "Scalar":
        return Scalar.from_fraction(Fraction(0), mode)

    @staticmethod
    def one(mode: Mode) -> "Scalar":
        return Scalar.from_fraction(Fraction(1), mode)

    @staticmethod
    def from_fraction(r, mode: Mode) -> "Scalar":
        r = Fraction(r)
        if mode.kind == "laurent":
            return Scalar(mode, ((0, r),) if r else ())
        if mode.kind == "cyclo":
            deg, _, _ = _cyclo_ctx(mode.order)
            vec = [Fraction(0)] * deg
            vec[0] = r
            return Scalar(mode, tuple(vec))
        if mode.kind == "dual":
            return Scalar(mode, (r, Fraction(0)))
        if mode.kind == "rational":
            return Scalar(mode, r)
        raise ScalarError(f"unknown mode {mode}")

    @staticmethod
    def omega(k: int, mode: Mode) -> "Scalar":
        """w^k in the given mode; in dual mode this is 1 - (k/4) h."""
        if mode.kind == "laurent":
            return Scalar(mode, ((k, Fraction(1)),))
        if mode.kind == "cyclo":
            _, _, pows = _cyclo_ctx(mode.order)
            return Scalar(mode, pows[k % mode.order])
        if mode.kind == "dual":
            return Scalar(mode, (Fraction(1), Fraction(-k, 4)))
        if mode.kind == "rational":
            return Scalar(mode, Fraction(1))
        raise ScalarError(f"unknown mode {mode}")

    @staticmethod
    def hbar(mode: Mode = DUAL) -> "Scalar":
        if mode.kind != "dual":
            raise ScalarError("h lives in the dual-number mode only")
        return Scalar(mode, (Fraction(0), Fraction(1)))

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        m = self.mode.kind
        if m == "laurent":
            return not self.data
        if m == "cyclo":
            return not any(self.data)
        if m == "dual":
            return self.data == (0, 0)
        return self.data == 0

    def is_one(self) -> bool:
        return self == Scalar.one(self.mode)

    def constant_part(self) -> Fraction:
        """The image under w -> 1 (laurent), h -> 0 (dual); identity on rationals."""
        m = self.mode.kind
        if m == "laurent":
            return sum((c for _, c in self.data), Fraction(0))
        if m == "dual":
            return self.data[0]
        if m == "rational":
            return self.data
        raise ScalarError("no canonical rational part in cyclotomic mode")

    def hbar_part(self) -> Fraction:
        if self.mode.kind != "dual":
            raise ScalarError("hbar_part needs dual mode")
        return self.data[1]

    # -- ring operations -----------------------------------------------------

    def _check(self, other: "Scalar"):
        if not isinstance(other, Scalar) or self.mode != other.mode:
            raise ScalarError(
                f"incompatible scalar rings: {self.mode} vs "
                f"{getattr(other, 'mode', type(other).__name__)}")

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        m = self.mode.kind
        if m == "laurent":
            acc = dict(self.data)
            for e, c in other.data:
                v = acc.get(e, Fraction(0)) + c
                if v:
                    acc[e] = v
                else:
                    acc.pop(e, None)
            return Scalar(self.mode, tuple(sorted(acc.items())))
        if m == "cyclo":
            return Scalar(self.mode, tuple(a + b for a, b in zip(self.data, other.data)))
        if m == "dual":
            return Scalar(self.mode, (self.data[0] + other.data[0],
                                      self.data[1] + other.data[1]))
        return Scalar(self.mode, self.data + other.data)

    def __neg__(self) -> "Scalar":
        m = self.mode.kind
        if m == "laurent":
            return Scalar(self.mode, tuple((e, -c) for e, c in self.data))
        if m == "cyclo":
            return Scalar(self.mode, tuple(-a for a in self.data))
        if m == "dual":
            return Scalar(self.mode, (-self.data[0], -self.data[1]))
        return Scalar(self.mode, -self.data)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        m = self.mode.kind
        if m == "laurent":
            acc = {}
            for e1, c1 in self.data:
                for e2, c2 in other.data:
                    e = e1 + e2
                    v = acc.get(e, Fraction(0)) + c1 * c2
                    if v:
                        acc[e] = v
                    else:
                        acc.pop(e, None)
            return Scalar(self.mode, tuple(sorted(acc.items())))
        if m == "cyclo":
            return Scalar(self.mode, _cyclo_mul(self.mode.order, self.data, other.data))
        if m == "dual":
            a0, a1 = self.data
            b0, b1 = other.data
            return Scalar(self.mode, (a0 * b0, a0 * b1 + a1 * b0))
        return Scalar(self.mode, self.data * other.data)

    def inv(self) -> "Scalar":
        """Inverse of a unit; the unit condition depends on the mode."""
        m = self.mode.kind
        if m == "laurent":
            if len(self.data) != 1:
                raise ScalarError(
                    "only monomials r*w^k are units in the Laurent ring")
            e, c = self.data[0]
            return Scalar(self.mode, ((-e, 1 / c),))
        if m == "cyclo":
            if self.is_zero():
                raise ScalarError("zero is not a unit in the cyclotomic field")
            return Scalar(self.mode, _cyclo_inv(self.mode.order, self.data))
        if m == "dual":
            c0, c1 = self.data
            if not c0:
                raise ScalarError("dual numbers with zero constant term are not units")
            return Scalar(self.mode, (1 / c0, -c1 / (c0 * c0)))
        if not self.data:
            raise ScalarError("zero is not a unit")
        return Scalar(self.mode, 1 / self.data)

    def __eq__(self, other):
        return (isinstance(other, Scalar) and self.mode == other.mode
                and self.data == other.data)

    def __hash__(self):
        return hash((self.mode, self.data))

    # -- specialization ------------------------------------------------------

    def specialize(self, target: Mode) -> "Scalar":
        """Ring homomorphism from the formal Laurent ring to any other mode."""
        if self.mode.kind != "laurent":
            raise ScalarError("specialize starts from the Laurent ring")
        if target.kind == "laurent":
            raise ScalarError("specialize needs a non-Laurent target")
        acc = Scalar.zero(target)
        for e, c in self.data:
            acc = acc + Scalar.from_fraction(c, target) * Scalar.omega(e, target)
        return acc

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        m = self.mode.kind
        if m == "rational":
            return _fmt_fraction(self.data)
        if m == "dual":
            c0, c1 = self.data
            if not c1:
                return _fmt_fraction(c0)
            hterm = "h" if c1 == 1 else ("-h" if c1 == -1 else f"{_fmt_fraction(c1)}*h")
            if not c0:
                return hterm
            sign = " - " if c1 < 0 else " + "
            habs = "h" if abs(c1) == 1 else f"{_fmt_fraction(abs(c1))}*h"
            return f"{_fmt_fraction(c0)}{sign}{habs}"
        if m == "laurent":
            if not self.data:
                return "0"
            parts = []
            for e, c in sorted(self.data, reverse=True):
                parts.append(_fmt_monomial(c, e, bool(parts)))
            return "".join(parts)
        # cyclo: polynomial in w of degree < phi(N)
        if not any(self.data):
            return "0"
        parts = []
        for e in range(len(self.data) - 1, -1, -1):
            c = self.data[e]
            if c:
                parts.append(_fmt_monomial(c, e, bool(parts)))
        return "".join(parts)

    def __repr__(self):
        return f"Scalar[{self.mode}]({self.render()})"


def _fmt_fraction(r: Fraction) -> str:
    return str(r)


def _fmt_monomial(c: Fraction, e: int, with_sign: bool) -> str:
    if e == 0:
        body = _fmt_fraction(abs(c))
    else:
        w = "w" if e == 1 else f"w^{e}"
        body = w if abs(c) == 1 else f"{_fmt_fraction(abs(c))}*{w}"
    if with_sign:
        return (" - " if c < 0 else " + ") + body
    return ("-" if c < 0 else "") + body


# -- named constants ---------------------------------------------------------

def omega(k: int, mode: Mode) -> Scalar:
    return Scalar.omega(k, mode)


def q_param(mode: Mode, power: int = 1) -> Scalar:
    """q = w^-4."""
    return Scalar.omega(-4 * power, mode)


def a_param(mode: Mode, power: int = 1) -> Scalar:
    """A = w^-2."""
    return Scalar.omega(-2 * power, mode)
