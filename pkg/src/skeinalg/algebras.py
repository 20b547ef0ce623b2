"""Built-in presented algebras and their structure maps.

Provides the quantum plane, the quantum SL2 algebra on four stated-arc
generators, its GL2 variant with the quantum determinant, the triangle
algebra on twelve stated-arc generators, the commutative specializations
of the latter two at w = 1, and the coordinate algebras of SL2 and of the
triple-product variety {(Na, Nb, Ng) in SL2^3 : Ng Nb Na = 1} used as the
classical comparison targets.

All presentations are produced from one symbolic relation table over the
formal Laurent ring and completed per scalar mode; construction fails
loudly if the resulting rule set is not terminating and confluent.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .ncpoly import (AlgebraMorphism, Generator, NCPoly, Presentation,
                     PresentationError, complete_rules, diamond_check,
                     tensor_presentation, validate_presentation)
from .scalars import LAURENT, RATIONAL, Mode, Scalar

# state pairs in ascending letter precedence; this order makes the normal
# words of the four-generator algebra the two sorted families
# (-+)^a (++)^b (+-)^c and (-+)^a (--)^b (+-)^c
STATE_ORDER: Tuple[Tuple[str, str], ...] = (
    ("-", "+"), ("+", "+"), ("-", "-"), ("+", "-"))

TRIANGLE_ARCS = ("a", "b", "g")

# endpoint bookkeeping for the triangle: the first state index of an arc
# sits on its source edge, the second on its target edge
SOURCE_EDGE = {"a": "c", "b": "a", "g": "b"}
TARGET_EDGE = {"a": "b", "b": "c", "g": "a"}

GenKey = Tuple[str, Tuple[str, ...]]
SymTerms = Dict[Tuple[GenKey, ...], Scalar]  # coefficients in LAURENT mode


def _one() -> Scalar:
    return Scalar.one(LAURENT)


def _w(k: int) -> Scalar:
    return Scalar.omega(k, LAURENT)


def _frac(r) -> Scalar:
    return Scalar.from_fraction(Fraction(r), LAURENT)


def _sym_relation(lhs: Sequence[GenKey], rhs: Sequence[Tuple[Scalar, Sequence[GenKey]]]
                  ) -> SymTerms:
    """lhs - sum(rhs) as a symbolic terms dict (meaning: = 0)."""
    terms: SymTerms = {tuple(lhs): _one()}
    for coeff, word in rhs:
        key = tuple(word)
        cur = terms.get(key, Scalar.zero(LAURENT)) - coeff
        if cur.is_zero():
            terms.pop(key, None)
        else:
            terms[key] = cur
    return terms


def _quantum_su2_relations(arc: str) -> List[SymTerms]:
    """The seven relations of the stated-arc algebra on one arc symbol."""
    pp, mm, pm, mp = (arc, ("+", "+")), (arc, ("-", "-")), \
        (arc, ("+", "-")), (arc, ("-", "+"))
    q, qi = _w(-4), _w(4)
    return [
        _sym_relation([pp, pm], [(qi, [pm, pp])]),
        _sym_relation([pp, mp], [(qi, [mp, pp])]),
        _sym_relation([mm, pm], [(q, [pm, mm])]),
        _sym_relation([mm, mp], [(q, [mp, mm])]),
        _sym_relation([pp, mm], [(_one(), []), (qi, [pm, mp])]),
        _sym_relation([mm, pp], [(_one(), []), (q, [pm, mp])]),
        _sym_relation([mp, pm], [(_one(), [pm, mp])]),
    ]


def _gl2_relations() -> List[SymTerms]:
    pp, mm, pm, mp = ("a", ("+", "+")), ("a", ("-", "-")), \
        ("a", ("+", "-")), ("a", ("-", "+"))
    q, qi = _w(-4), _w(4)
    return [
        _sym_relation([pp, pm], [(qi, [pm, pp])]),
        _sym_relation([pp, mp], [(qi, [mp, pp])]),
        _sym_relation([mm, pm], [(q, [pm, mm])]),
        _sym_relation([mm, mp], [(q, [mp, mm])]),
        # [pp, mm] - [mm, pp] = (q^-1 - q) [pm, mp]
        _sym_relation([pp, mm], [(_one(), [mm, pp]), (qi - q, [pm, mp])]),
        _sym_relation([mp, pm], [(_one(), [pm, mp])]),
    ]


def _quantum_plane_relations() -> List[SymTerms]:
    x, y = ("x", ()), ("y", ())
    return [_sym_relation([y, x], [(_w(-4), [x, y])])]


def _c_constant(sub: str, sup: str) -> Scalar:
    """The boundary-arc constants: C(-,-) = C(+,+) = 0, C(+,-) = -w^5, C(-,+) = w
    where the first argument is the subscript and the second the superscript."""
    if sub == sup:
        return Scalar.zero(LAURENT)
    if sub == "+":  # sup == '-'
        return -_w(5)
    return _w(1)


def _rotate_key(key: GenKey, times: int) -> GenKey:
    arc, states = key
    i = TRIANGLE_ARCS.index(arc)
    return (TRIANGLE_ARCS[(i + times) % 3], states)


def _triangle_relations() -> List[SymTerms]:
    """The five relation families on stated arcs, all state instances,
    plus their two rotations."""
    signs = ("+", "-")
    A2 = _w(-4)
    base: List[SymTerms] = []

    def a(s1, s2): return ("a", (s1, s2))
    def b(s1, s2): return ("b", (s1, s2))
    def g(s1, s2): return ("g", (s1, s2))

    for e1 in signs:
        for e2 in signs:
            c = _c_constant(e2, e1)
            # a(-,e1) a(+,e2) = A^2 a(+,e1) a(-,e2) - w^-5 C
            base.append(_sym_relation(
                [a("-", e1), a("+", e2)],
                [(A2, [a("+", e1), a("-", e2)]), (-_w(-5) * c, [])]))
            # a(e1,-) a(e2,+) = A^2 a(e1,+) a(e2,-) - w^-5 C
            base.append(_sym_relation(
                [a(e1, "-"), a(e2, "+")],
                [(A2, [a(e1, "+"), a(e2, "-")]), (-_w(-5) * c, [])]))
            # a(-,e1) b(e2,+) = A^2 a(+,e1) b(e2,-) - w^-5 g(e1,e2)
            base.append(_sym_relation(
                [a("-", e1), b(e2, "+")],
                [(A2, [a("+", e1), b(e2, "-")]), (-_w(-5), [g(e1, e2)])]))
            # a(e1,-) g(+,e2) = A^2 a(e1,+) g(-,e2) + w b(e2,e1)
            base.append(_sym_relation(
                [a(e1, "-"), g("+", e2)],
                [(A2, [a(e1, "+"), g("-", e2)]), (_w(1), [b(e2, e1)])]))

    for m1 in signs:
        for e1 in signs:
            for m2 in signs:
                for e2 in signs:
                    # b(m1,e1) a(m2,e2) =
                    #     A a(e1,e2) b(m1,m2) - A^2 C(sub=m2, sup=e1) g(e2,m1)
                    base.append(_sym_relation(
                        [b(m1, e1), a(m2, e2)],
                        [(_w(-2), [a(e1, e2), b(m1, m2)]),
                         (-_w(-4) * _c_constant(m2, e1), [g(e2, m1)])]))

    out: List[SymTerms] = []
    for rel in base:
        for t in range(3):
            rotated: SymTerms = {}
            for word, coeff in rel.items():
                rotated[tuple(_rotate_key(k, t) for k in word)] = coeff
            out.append(rotated)
    return out


def _coords_transport(key: GenKey) -> Tuple[int, GenKey]:
    """Relabeling d(e,+) = -n(e,-)... precisely: the skein matrix M relates
    to the coordinate matrix N by N = M C, so d(e,+) -> n(e,-) and
    d(e,-) -> -n(e,+)."""
    arc, (e1, e2) = key
    if e2 == "+":
        return 1, (arc, (e1, "-"))
    return -1, (arc, (e1, "+"))


def _transport_relations(relations: List[SymTerms]) -> List[SymTerms]:
    out = []
    for rel in relations:
        new: SymTerms = {}
        for word, coeff in rel.items():
            sign = 1
            letters = []
            for k in word:
                s, nk = _coords_transport(k)
                sign *= s
                letters.append(nk)
            c = coeff if sign == 1 else -coeff
            key = tuple(letters)
            cur = new.get(key, Scalar.zero(LAURENT)) + c
            if cur.is_zero():
                new.pop(key, None)
            else:
                new[key] = cur
        out.append(new)
    return out


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

_ALPHABETS: Dict[str, List[GenKey]] = {
    "quantum_plane": [("x", ()), ("y", ())],
    "bigon": [("a", s) for s in STATE_ORDER],
    # the commutator relation of gl2 must be led by a unit coefficient, so
    # its precedence differs from the bigon's: normal words are the sorted
    # monomials (+-)^i (-+)^j (++)^k (--)^l
    "gl2": [("a", ("+", "-")), ("a", ("-", "+")),
            ("a", ("+", "+")), ("a", ("-", "-"))],
    "sl2_coords": [("x", s) for s in STATE_ORDER],
    "triangle": [(arc, s) for arc in TRIANGLE_ARCS for s in STATE_ORDER],
    "triangle_coords": [(arc, s) for arc in TRIANGLE_ARCS for s in STATE_ORDER],
}


def _symbolic_relations(name: str) -> List[SymTerms]:
    if name == "quantum_plane":
        return _quantum_plane_relations()
    if name == "bigon":
        return _quantum_su2_relations("a")
    if name == "sl2_coords":
        return _quantum_su2_relations("x")
    if name == "gl2":
        return _gl2_relations()
    if name == "triangle":
        return _triangle_relations()
    if name == "triangle_coords":
        return _transport_relations(_triangle_relations())
    raise PresentationError(f"unknown algebra {name!r}")


BUILTIN_NAMES = ("quantum_plane", "bigon", "gl2", "triangle",
                 "bigon_plus1", "triangle_plus1",
                 "sl2_coords", "triangle_coords", "trivial")


def _weights_for(base: str) -> Optional[Tuple[int, ...]]:
    """Term-order weights.  The triangle carries weight 3 on the third arc:
    its generators are expressible in the other eight (the cross relations
    solve for them with unit coefficients), and eliminating them is the
    only way the straightening system stays finite -- under plain length
    grading the basis constraints couple the two ends of sorted words and
    the completion diverges."""
    if base in ("triangle", "triangle_coords"):
        return tuple(3 if arc == "g" else 1 for arc, _ in _ALPHABETS[base])
    return None


@lru_cache(maxsize=None)
def _formal_rules(base: str):
    """Complete the symbolic relations of a base algebra over the formal ring.

    Runs once per base; other scalar modes reuse these rules with their
    coefficients specialized (the straightening coefficients live in the
    Laurent ring, so specialization is exact), which keeps every mode on
    one rule set and avoids re-running completion over non-field rings.
    """
    keys = _ALPHABETS[base]
    key_index = {k: i for i, k in enumerate(keys)}
    relations = []
    for rel in _symbolic_relations(base):
        relations.append({tuple(key_index[k] for k in word): coeff
                          for word, coeff in rel.items()})
    alphabet = [Generator(arc, states) for arc, states in keys]
    weights = _weights_for(base)
    if base in ("sl2_coords", "triangle_coords"):
        # these only exist at w = 1; complete directly over the rationals
        rat = []
        for rel in relations:
            rat.append({w: c.specialize(RATIONAL) for w, c in rel.items()
                        if not c.specialize(RATIONAL).is_zero()})
        return alphabet, complete_rules(alphabet, RATIONAL, rat,
                                        weights=weights), RATIONAL, weights
    return alphabet, complete_rules(alphabet, LAURENT, relations,
                                    weights=weights), LAURENT, weights


@lru_cache(maxsize=None)
def builtin(name: str, mode: Optional[Mode] = None) -> Presentation:
    """Build (and cache) a built-in presentation in the given scalar mode.

    The ``*_plus1`` names and the coordinate algebras are the w = 1
    specializations and only exist over the rationals.  Construction
    validates rule orientation and runs the ambiguity/confluence check,
    raising on any failure.
    """
    base = name
    if name in ("bigon_plus1", "triangle_plus1"):
        base = name[:-len("_plus1")]
        if mode is None:
            mode = RATIONAL
        if mode != RATIONAL:
            raise PresentationError(f"{name} lives over the rationals")
    if name in ("sl2_coords", "triangle_coords"):
        if mode is None:
            mode = RATIONAL
        if mode != RATIONAL:
            raise PresentationError(f"{name} lives over the rationals")
    if name == "trivial":
        if mode is None:
            raise PresentationError("trivial algebra needs a mode")
        return Presentation("trivial", [], mode, {})
    if mode is None:
        raise PresentationError(f"{name} needs an explicit scalar mode")

    alphabet, formal, formal_mode, weights = _formal_rules(base)
    if mode == formal_mode:
        rules = formal
    else:
        rules = {}
        for lhs, rhs in formal.items():
            new = {}
            for w, c in rhs.items():
                cc = c.specialize(mode)
                if not cc.is_zero():
                    new[w] = cc
            rules[lhs] = new
    pres = Presentation(name, alphabet, mode, rules, weights=weights)
    vr = validate_presentation(pres)
    if not vr.ok:
        raise PresentationError(f"{name}[{mode}] has non-decreasing rules: {vr.violations}")
    dr = diamond_check(pres)
    if not dr.ok:
        bad = dr.failures[0]
        raise PresentationError(
            f"{name}[{mode}] is not confluent; first failing overlap {bad.word}")
    return pres


@lru_cache(maxsize=None)
def tensor_power(name: str, mode: Optional[Mode], k: int) -> Presentation:
    return tensor_presentation([builtin(name, mode)] * k)


@lru_cache(maxsize=None)
def mixed_tensor(spec: Tuple[Tuple[str, Optional[Mode]], ...]) -> Presentation:
    return tensor_presentation([builtin(n, m) for n, m in spec])


# ---------------------------------------------------------------------------
# Hopf structure of the four-generator algebras
# ---------------------------------------------------------------------------

def _arc_of(pres: Presentation) -> str:
    arcs = {g.arc for g in pres.alphabet}
    if len(arcs) != 1:
        raise PresentationError(f"{pres.name} is not a single-arc algebra")
    return arcs.pop()


@lru_cache(maxsize=None)
def hopf_coproduct(name: str, mode: Optional[Mode] = None) -> AlgebraMorphism:
    """x(e,e') -> sum_m x(e,m) (x) x(m,e'), as a map into the tensor square."""
    pres = builtin(name, mode)
    target = tensor_power(name, mode, 2)
    arc = _arc_of(pres)
    images = {}
    for i, g in enumerate(pres.alphabet):
        e1, e2 = g.states
        acc = target.zero()
        for m in ("+", "-"):
            acc = acc + target.gen(arc, (e1, m), 0) * target.gen(arc, (m, e2), 1)
        images[i] = acc
    return AlgebraMorphism("coproduct", pres, target, images)


@lru_cache(maxsize=None)
def hopf_counit(name: str, mode: Optional[Mode] = None) -> AlgebraMorphism:
    """x(e,e') -> delta_{e e'}, landing in the coefficient ring."""
    pres = builtin(name, mode)
    target = builtin("trivial", pres.mode)
    images = {}
    for i, g in enumerate(pres.alphabet):
        e1, e2 = g.states
        images[i] = target.unit() if e1 == e2 else target.zero()
    return AlgebraMorphism("counit", pres, target, images)


@lru_cache(maxsize=None)
def hopf_antipode(name: str, mode: Optional[Mode] = None) -> AlgebraMorphism:
    """S(x++) = x--, S(x--) = x++, S(x+-) = -q x+-, S(x-+) = -q^-1 x-+;
    an anti-homomorphism."""
    pres = builtin(name, mode)
    arc = _arc_of(pres)
    q = Scalar.omega(-4, pres.mode)
    qi = Scalar.omega(4, pres.mode)
    table = {
        ("+", "+"): (pres.gen(arc, ("-", "-")), None),
        ("-", "-"): (pres.gen(arc, ("+", "+")), None),
        ("+", "-"): (pres.gen(arc, ("+", "-")), -q),
        ("-", "+"): (pres.gen(arc, ("-", "+")), -qi),
    }
    images = {}
    for i, g in enumerate(pres.alphabet):
        img, c = table[g.states]
        images[i] = img if c is None else img.scale(c)
    return AlgebraMorphism("antipode", pres, pres, images, anti=True)


def quantum_determinant(pres: Presentation) -> NCPoly:
    """det_q = x(+,+) x(-,-) - q^-1 x(+,-) x(-,+)."""
    arc = _arc_of(pres)
    qi = Scalar.omega(4, pres.mode)
    return (pres.gen(arc, ("+", "+")) * pres.gen(arc, ("-", "-"))
            - (pres.gen(arc, ("+", "-")) * pres.gen(arc, ("-", "+"))).scale(qi))


# ---------------------------------------------------------------------------
# triangle structure maps
# ---------------------------------------------------------------------------

def _triangle_like(pres: Presentation):
    if {g.arc for g in pres.alphabet} != set(TRIANGLE_ARCS):
        raise PresentationError(f"{pres.name} is not a triangle-type algebra")


@lru_cache(maxsize=None)
def rotation(name: str, mode: Optional[Mode] = None) -> AlgebraMorphism:
    """The order-three automorphism a -> b -> g -> a (states unchanged)."""
    pres = builtin(name, mode)
    _triangle_like(pres)
    images = {}
    for i, g in enumerate(pres.alphabet):
        nxt = TRIANGLE_ARCS[(TRIANGLE_ARCS.index(g.arc) + 1) % 3]
        images[i] = pres.gen(nxt, g.states)
    return AlgebraMorphism("rotation", pres, pres, images)


@lru_cache(maxsize=None)
def triangle_comodule(name: str, mode: Optional[Mode], side: str, edge: str
                      ) -> AlgebraMorphism:
    """Edge coactions of the four-generator algebra on the triangle.

    The left coaction at edge d splits the first state index of every arc
    sourced at d:  d(e,e') -> sum_m  b(e,m) (x) d(m,e');  arcs not sourced
    at d are sent to 1 (x) d(e,e').  The right coaction at d mirrors this
    on target-indexed ends, into triangle (x) bigon.
    """
    if edge not in ("a", "b", "c"):
        raise PresentationError(f"unknown edge {edge!r}")
    if side not in ("L", "R"):
        raise PresentationError("side must be 'L' or 'R'")
    pres = builtin(name, mode)
    _triangle_like(pres)
    bigon_name = "bigon_plus1" if pres.mode == RATIONAL and name.endswith("_plus1") \
        else "bigon"
    bmode = None if name.endswith("_plus1") else pres.mode
    if side == "L":
        target = mixed_tensor(((bigon_name, bmode), (name, mode)))
        tri_slot, big_slot = 1, 0
    else:
        target = mixed_tensor(((name, mode), (bigon_name, bmode)))
        tri_slot, big_slot = 0, 1
    images = {}
    for i, g in enumerate(pres.alphabet):
        e1, e2 = g.states
        if side == "L" and SOURCE_EDGE[g.arc] == edge:
            acc = target.zero()
            for m in ("+", "-"):
                acc = acc + (target.gen("a", (e1, m), big_slot)
                             * target.gen(g.arc, (m, e2), tri_slot))
            images[i] = acc
        elif side == "R" and TARGET_EDGE[g.arc] == edge:
            acc = target.zero()
            for m in ("+", "-"):
                acc = acc + (target.gen(g.arc, (e1, m), tri_slot)
                             * target.gen("a", (m, e2), big_slot))
            images[i] = acc
        else:
            images[i] = target.gen(g.arc, g.states, tri_slot)
    return AlgebraMorphism(f"coaction_{side}_{edge}", pres, target, images)


# ---------------------------------------------------------------------------
# 2x2 matrices over an algebra
# ---------------------------------------------------------------------------

class Matrix2:
    """A 2x2 matrix of algebra elements; entry products are left-to-right."""

    __slots__ = ("entries",)

    def __init__(self, a: NCPoly, b: NCPoly, c: NCPoly, d: NCPoly):
        self.entries = (a, b, c, d)

    @staticmethod
    def from_arc(pres: Presentation, arc: str, slot: int = 0,
                 power: int = 1) -> "Matrix2":
        def e(s1, s2):
            g = pres.gen(arc, (s1, s2), slot)
            return g ** power if power != 1 else g
        return Matrix2(e("+", "+"), e("+", "-"), e("-", "+"), e("-", "-"))

    @staticmethod
    def identity(pres: Presentation) -> "Matrix2":
        return Matrix2(pres.unit(), pres.zero(), pres.zero(), pres.unit())

    @staticmethod
    def weyl(pres: Presentation) -> "Matrix2":
        """The constant matrix [[0, 1], [-1, 0]]."""
        return Matrix2(pres.zero(), pres.unit(),
                       -pres.unit(), pres.zero())

    def __mul__(self, other: "Matrix2") -> "Matrix2":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Matrix2(a * e + b * g, a * f + b * h,
                       c * e + d * g, c * f + d * h)

    def __sub__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(*(x - y for x, y in zip(self.entries, other.entries)))

    def trace(self) -> NCPoly:
        return self.entries[0] + self.entries[3]

    def entrywise_pow(self, n: int) -> "Matrix2":
        return Matrix2(*(x ** n for x in self.entries))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries)

    def entry(self, s1: str, s2: str) -> NCPoly:
        i = 0 if s1 == "+" else 1
        j = 0 if s2 == "+" else 1
        return self.entries[2 * i + j]

    def map(self, fn) -> "Matrix2":
        return Matrix2(*(fn(x) for x in self.entries))
