"""Noncommutative polynomials over an exact scalar ring, with an oriented
rewrite engine computing normal forms and a Diamond-Lemma confluence check.

Words are tuples of letter indices into a presentation's alphabet; the
alphabet is listed in ascending precedence and the term order is graded
lexicographic (total degree first, then left-to-right letter precedence).
Tensor products of presentations carry a slot per factor; letters of
different slots commute and words are stored slot-sorted.

All rewrite rules have a two-letter left-hand side.  Relation lists are
turned into a confluent rule set by a small completion loop (orient by
leading word, resolve overlap ambiguities until none remain); the
separate :func:`diamond_check` then re-verifies confluence of the final
rules by reducing every overlap both ways.
"""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .scalars import Mode, Scalar, ScalarError

Word = Tuple[int, ...]

# word reduction recurses along strictly decreasing rewrite chains, which
# for high-degree words can exceed the default interpreter limit
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


class PresentationError(ValueError):
    """Bad alphabet, non-orientable rule, reduction budget exceeded, ..."""


@dataclass(frozen=True)
class Generator:
    """A named letter: arc symbol plus an optional state pair, in a slot."""
    arc: str
    states: Tuple[str, ...] = ()
    slot: int = 0

    def render(self, with_slot: bool = False) -> str:
        s = self.arc
        if self.states:
            s += "[" + ",".join(self.states) + "]"
        if with_slot:
            s += f"@{self.slot}"
        return s

    def at_slot(self, slot: int) -> "Generator":
        return Generator(self.arc, self.states, slot)


class Presentation:
    """An alphabet with precedence, a scalar mode and oriented rewrite rules.

    ``rules`` maps a left-hand word (length two or more; single-arc
    relations are quadratic but confluence can require longer rules) to
    its reduction, a dict {word: Scalar}.  Instances are immutable after
    construction and cache word normal forms, so they are safe to share.
    """

    def __init__(self, name: str, alphabet: Sequence[Generator], mode: Mode,
                 rules: Dict[Word, Dict[Word, Scalar]],
                 slot_sizes: Optional[Sequence[int]] = None,
                 weights: Optional[Sequence[int]] = None,
                 step_budget: int = 10 ** 6):
        self.name = name
        self.alphabet = tuple(alphabet)
        self.mode = mode
        self.rules = {k: dict(v) for k, v in rules.items()}
        self.slot_sizes = tuple(slot_sizes) if slot_sizes else (len(alphabet),)
        self.weights = tuple(weights) if weights else (1,) * len(self.alphabet)
        self.step_budget = step_budget
        self._slot_of = []
        for s, n in enumerate(self.slot_sizes):
            self._slot_of.extend([s] * n)
        if len(self._slot_of) != len(self.alphabet):
            raise PresentationError("slot sizes do not cover the alphabet")
        self._index = {(g.arc, g.states, g.slot): i
                       for i, g in enumerate(self.alphabet)}
        if len(self._index) != len(self.alphabet):
            raise PresentationError("duplicate generator in alphabet")
        self._by_first: Dict[int, List[Word]] = {}
        for lhs in self.rules:
            self._by_first.setdefault(lhs[0], []).append(lhs)
        self._nf_cache: Dict[Word, Dict[Word, Scalar]] = {}
        self._steps = 0

    # -- lookup ---------------------------------------------------------------

    @property
    def n_slots(self) -> int:
        return len(self.slot_sizes)

    def slot_of(self, letter: int) -> int:
        return self._slot_of[letter]

    def order_key(self, w: Word):
        """Weighted graded lexicographic key; all weights usually 1, but a
        generator that the rules eliminate can carry extra weight so the
        eliminating rule is order-decreasing."""
        return (sum(self.weights[x] for x in w), len(w), w)

    def gen_index(self, arc: str, states: Tuple[str, ...] = (), slot: int = 0) -> int:
        key = (arc, tuple(states), slot)
        if key not in self._index:
            raise PresentationError(
                f"unknown generator {Generator(*key).render(with_slot=self.n_slots > 1)} "
                f"in {self.name}")
        return self._index[key]

    def canonical(self, letters: Sequence[int]) -> Word:
        """Slot-sorted canonical interleaving (stable within each slot)."""
        if self.n_slots == 1:
            return tuple(letters)
        return tuple(sorted(letters, key=self._slot_of.__getitem__))

    def split_slots(self, w: Word) -> Tuple[Word, ...]:
        parts: List[List[int]] = [[] for _ in self.slot_sizes]
        for letter in w:
            parts[self._slot_of[letter]].append(letter)
        return tuple(tuple(p) for p in parts)

    # -- polynomial constructors ----------------------------------------------

    def zero(self) -> "NCPoly":
        return NCPoly(self, {})

    def unit(self, coeff: Optional[Scalar] = None) -> "NCPoly":
        c = coeff if coeff is not None else Scalar.one(self.mode)
        return NCPoly(self, {(): c} if not c.is_zero() else {})

    def gen(self, arc: str, states: Tuple[str, ...] = (), slot: int = 0) -> "NCPoly":
        return NCPoly(self, {(self.gen_index(arc, states, slot),): Scalar.one(self.mode)})

    def poly(self, terms: Dict[Word, Scalar]) -> "NCPoly":
        return NCPoly(self, {w: c for w, c in terms.items() if not c.is_zero()})

    # -- reduction --------------------------------------------------------------

    def _leftmost_redex(self, w: Word) -> Optional[Tuple[int, Word]]:
        for i in range(len(w)):
            for lhs in self._by_first.get(w[i], ()):
                if w[i:i + len(lhs)] == lhs:
                    return i, lhs
        return None

    def nf_word(self, w: Word) -> Dict[Word, Scalar]:
        """Normal form of a (canonical) word as a terms dict; memoized."""
        cached = self._nf_cache.get(w)
        if cached is not None:
            return cached
        hit = self._leftmost_redex(w)
        if hit is None:
            result = {w: Scalar.one(self.mode)}
        else:
            i, lhs = hit
            self._steps += 1
            if self._steps > self.step_budget:
                raise PresentationError(
                    f"reduction budget exceeded in {self.name}; "
                    "the rule set is probably not terminating")
            result: Dict[Word, Scalar] = {}
            for rw, rc in self.rules[lhs].items():
                sub = w[:i] + rw + w[i + len(lhs):]
                for nw, nc in self.nf_word(sub).items():
                    v = result.get(nw)
                    v = rc * nc if v is None else v + rc * nc
                    if v.is_zero():
                        result.pop(nw, None)
                    else:
                        result[nw] = v
        self._nf_cache[w] = result
        return result

    def reduce_terms(self, terms: Dict[Word, Scalar]) -> Dict[Word, Scalar]:
        self._steps = 0
        out: Dict[Word, Scalar] = {}
        for w, c in terms.items():
            if c.is_zero():
                continue
            for nw, nc in self.nf_word(w).items():
                v = out.get(nw)
                v = c * nc if v is None else v + c * nc
                if v.is_zero():
                    out.pop(nw, None)
                else:
                    out[nw] = v
        return out

    # -- enumeration -------------------------------------------------------------

    def is_normal_word(self, w: Word) -> bool:
        return self._leftmost_redex(w) is None

    def normal_words(self, degree: int) -> List[Word]:
        """All normal words of the exact given total degree.

        Works level by level: dropping the last letter of the last
        nonempty slot block of a normal word leaves a normal word, so
        every degree-d normal word extends a degree-(d-1) one.
        """
        level: List[Word] = [()]
        for _ in range(degree):
            nxt = set()
            for w in level:
                for letter in range(len(self.alphabet)):
                    cand = self.canonical(w + (letter,))
                    if self.is_normal_word(cand):
                        nxt.add(cand)
            level = sorted(nxt)
        return level

    # -- export --------------------------------------------------------------------

    def describe(self) -> str:
        return (f"{self.name} [{self.mode}]: {len(self.alphabet)} generators, "
                f"{len(self.rules)} rules")


class NCPoly:
    """A finite linear combination of words with Scalar coefficients.

    Stored reduced (no zero coefficients); arithmetic keeps results in
    normal form with respect to the owning presentation.
    """

    __slots__ = ("pres", "terms")

    def __init__(self, pres: Presentation, terms: Dict[Word, Scalar]):
        self.pres = pres
        self.terms = terms

    def _check(self, other: "NCPoly"):
        if self.pres is not other.pres:
            raise PresentationError(
                f"polynomials live in different algebras: "
                f"{self.pres.name} vs {other.pres.name}")

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "NCPoly") -> "NCPoly":
        self._check(other)
        acc = dict(self.terms)
        for w, c in other.terms.items():
            v = acc.get(w)
            v = c if v is None else v + c
            if v.is_zero():
                acc.pop(w, None)
            else:
                acc[w] = v
        return NCPoly(self.pres, acc)

    def __neg__(self) -> "NCPoly":
        return NCPoly(self.pres, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def scale(self, c: Scalar) -> "NCPoly":
        if c.is_zero():
            return self.pres.zero()
        return NCPoly(self.pres, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other: "NCPoly") -> "NCPoly":
        self._check(other)
        raw: Dict[Word, Scalar] = {}
        canonical = self.pres.canonical
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = canonical(w1 + w2) if self.pres.n_slots > 1 else w1 + w2
                c = c1 * c2
                v = raw.get(w)
                v = c if v is None else v + c
                if v.is_zero():
                    raw.pop(w, None)
                else:
                    raw[w] = v
        return NCPoly(self.pres, self.pres.reduce_terms(raw))

    def __pow__(self, n: int) -> "NCPoly":
        if n < 0:
            raise PresentationError("negative powers of algebra elements")
        out = self.pres.unit()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def normal_form(self) -> "NCPoly":
        return NCPoly(self.pres, self.pres.reduce_terms(self.terms))

    def commutator(self, other: "NCPoly") -> "NCPoly":
        return self * other - other * self

    def coefficient(self, w: Word) -> Scalar:
        return self.terms.get(w, Scalar.zero(self.pres.mode))

    def map_coefficients(self, target: Presentation,
                         fn: Callable[[Scalar], Scalar]) -> "NCPoly":
        """Transport to a presentation with the same alphabet layout."""
        out: Dict[Word, Scalar] = {}
        for w, c in self.terms.items():
            v = fn(c)
            if not v.is_zero():
                out[w] = v
        return NCPoly(target, target.reduce_terms(out))

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __eq__(self, other):
        return (isinstance(other, NCPoly) and self.pres is other.pres
                and self.terms == other.terms)

    def __hash__(self):
        return hash((id(self.pres), tuple(sorted(self.terms))))

    def __repr__(self):
        from .exprs import format_poly
        return format_poly(self)


# ---------------------------------------------------------------------------
# orientation helpers and completion
# ---------------------------------------------------------------------------

def word_key(w: Word):
    """Graded lexicographic key: degree first, then letter precedence."""
    return (len(w), w)


def leading_word(terms: Dict[Word, Scalar], key=word_key) -> Word:
    return max(terms, key=key)


def _reduce_with(terms: Dict[Word, Scalar],
                 rules: Dict[Word, Dict[Word, Scalar]],
                 canonical, key=word_key) -> Dict[Word, Scalar]:
    """Reduction used during completion, when the rule set still changes."""
    pending = dict(terms)
    out: Dict[Word, Scalar] = {}
    guard = 0
    while pending:
        guard += 1
        if guard > 10 ** 6:
            raise PresentationError("completion reduction did not terminate")
        w = max(pending, key=key)
        c = pending.pop(w)
        if c.is_zero():
            continue
        hit = None
        for i in range(len(w)):
            for lhs in rules:
                if w[i] == lhs[0] and w[i:i + len(lhs)] == lhs:
                    hit = (i, lhs)
                    break
            if hit:
                break
        if hit is None:
            v = out.get(w)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(w, None)
            else:
                out[w] = v
            continue
        i, lhs = hit
        for rw, rc in rules[lhs].items():
            sub = canonical(w[:i] + rw + w[i + len(lhs):])
            v = pending.get(sub)
            v = c * rc if v is None else v + c * rc
            if v.is_zero():
                pending.pop(sub, None)
            else:
                pending[sub] = v
    return out


def overlap_words(u: Word, v: Word) -> List[Tuple[Word, int]]:
    """Proper overlap ambiguities of two left-hand sides.

    Returns pairs (w, i) where w = u glued to v with an overlap of k
    letters and i = len(u) - k is the position at which v starts in w.
    """
    out = []
    for k in range(1, min(len(u), len(v))):
        if u[len(u) - k:] == v[:k]:
            out.append((u + v[k:], len(u) - k))
    return out


MAX_RULE_LHS = 8
MAX_RULES = 20000


def complete_rules(alphabet: Sequence[Generator], mode: Mode,
                   relations: Sequence[Dict[Word, Scalar]],
                   slot_sizes: Optional[Sequence[int]] = None,
                   weights: Optional[Sequence[int]] = None,
                   ) -> Dict[Word, Dict[Word, Scalar]]:
    """Orient a relation list into a confluent rewrite system.

    Each relation is a terms dict understood as "= 0".  Relations are
    reduced against the current rules and oriented by their leading word
    under the (weighted) graded-lex order; an empty leading word means
    the presentation collapses and is an error, a single-letter lead
    gives a substitution rule eliminating a redundant generator.
    Ambiguities between rules are resolved by enqueueing the difference
    of their two one-step reductions; rules whose left-hand side becomes
    reducible under a newly added rule are retired and requeued, so the
    final left-hand sides form an antichain under the factor order.
    """
    sizes = tuple(slot_sizes) if slot_sizes else (len(alphabet),)
    wts = tuple(weights) if weights else (1,) * len(alphabet)
    slot_of = []
    for s, n in enumerate(sizes):
        slot_of.extend([s] * n)

    def key(w: Word):
        return (sum(wts[x] for x in w), len(w), w)

    def canonical(letters):
        if len(sizes) == 1:
            return tuple(letters)
        return tuple(sorted(letters, key=slot_of.__getitem__))

    rules: Dict[Word, Dict[Word, Scalar]] = {}
    queue = deque(dict(r) for r in relations)

    def spoly(u: Word, v: Word, w: Word, i: int) -> Dict[Word, Scalar]:
        left = {canonical(rw + w[len(u):]): c for rw, c in rules[u].items()}
        diff = dict(left)
        for rw, c in rules[v].items():
            ww = canonical(w[:i] + rw)
            cur = diff.get(ww)
            cur = -c if cur is None else cur - c
            if cur.is_zero():
                diff.pop(ww, None)
            else:
                diff[ww] = cur
        return diff

    while queue:
        rel = _reduce_with(queue.popleft(), rules, canonical, key)
        if not rel:
            continue
        lead = leading_word(rel, key)
        if len(lead) < 1:
            raise PresentationError(
                "presentation collapses: the relation ideal contains a unit")
        if len(lead) > MAX_RULE_LHS:
            raise PresentationError(
                "completion produced a rule beyond the length cap; "
                "the presentation is unlikely to be finitely confluent")
        if len({slot_of[x] for x in lead}) != 1:
            raise PresentationError("rule left-hand side crosses tensor slots")
        c = rel[lead]
        try:
            cinv = c.inv()
        except ScalarError as exc:
            raise PresentationError(
                f"leading coefficient of a rule is not a unit: "
                f"{c.render()}") from exc
        rhs = {w: -(v * cinv) for w, v in rel.items() if w != lead}
        # retire any rule whose lhs now contains the new lead as a factor
        for other in [o for o in rules if len(o) > len(lead)]:
            if any(other[j:j + len(lead)] == lead
                   for j in range(len(other) - len(lead) + 1)):
                old_rhs = rules.pop(other)
                rel_back = {w: -v for w, v in old_rhs.items()}
                rel_back[other] = Scalar.one(mode)
                queue.append(rel_back)
        rules[lead] = rhs
        if len(rules) > MAX_RULES:
            raise PresentationError("completion exceeded the rule cap")
        for other in list(rules):
            for w, i in overlap_words(lead, other):
                queue.append(spoly(lead, other, w, i))
            if other != lead:
                for w, i in overlap_words(other, lead):
                    queue.append(spoly(other, lead, w, i))

    # inter-reduce right-hand sides against the final rule set
    final: Dict[Word, Dict[Word, Scalar]] = {}
    for lhs, rhs in rules.items():
        final[lhs] = _reduce_with(rhs, rules, canonical, key)
    return final


# ---------------------------------------------------------------------------
# validation and confluence reports
# ---------------------------------------------------------------------------

@dataclass
class RuleViolation:
    lhs: Word
    offending_word: Word
    reason: str


@dataclass
class ValidationReport:
    presentation: str
    violations: List[RuleViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_presentation(pres: Presentation) -> ValidationReport:
    """Check every rule is strictly order-decreasing (termination guard)."""
    report = ValidationReport(pres.name)
    for lhs, rhs in pres.rules.items():
        if len(lhs) < 1:
            report.violations.append(RuleViolation(lhs, lhs, "empty lhs"))
            continue
        for w in rhs:
            if pres.order_key(w) >= pres.order_key(lhs):
                report.violations.append(
                    RuleViolation(lhs, w, "rhs word is not smaller than lhs"))
    return report


@dataclass
class OverlapFailure:
    word: Word
    left_route: Dict[Word, Scalar]
    right_route: Dict[Word, Scalar]


@dataclass
class DiamondReport:
    presentation: str
    overlaps_checked: int = 0
    failures: List[OverlapFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def diamond_check(pres: Presentation) -> DiamondReport:
    """Reduce every ambiguity both ways and compare the results.

    Overlap ambiguities are words w = u glued to v where a suffix of the
    rule lhs u equals a prefix of the rule lhs v; inclusion ambiguities
    (one lhs a factor of another) are also handled for rule sets loaded
    from files.  Resolvability of all ambiguities gives confluence of the
    terminating system, and then the normal words are a module basis.
    """
    report = DiamondReport(pres.name)
    rules = pres.rules
    for u in rules:
        for v in rules:
            for w, i in overlap_words(u, v):
                report.overlaps_checked += 1
                left = {pres.canonical(rw + w[len(u):]): c
                        for rw, c in rules[u].items()}
                right = {pres.canonical(w[:i] + rw): c
                         for rw, c in rules[v].items()}
                left_nf = pres.reduce_terms(left)
                right_nf = pres.reduce_terms(right)
                if left_nf != right_nf:
                    report.failures.append(OverlapFailure(w, left_nf, right_nf))
            if u != v and len(v) < len(u):
                for j in range(len(u) - len(v) + 1):
                    if u[j:j + len(v)] == v:
                        report.overlaps_checked += 1
                        left = dict(rules[u])
                        right = {pres.canonical(u[:j] + rw + u[j + len(v):]): c
                                 for rw, c in rules[v].items()}
                        left_nf = pres.reduce_terms(left)
                        right_nf = pres.reduce_terms(right)
                        if left_nf != right_nf:
                            report.failures.append(
                                OverlapFailure(u, left_nf, right_nf))
    return report


# ---------------------------------------------------------------------------
# morphisms and tensor products
# ---------------------------------------------------------------------------

class AlgebraMorphism:
    """Generator-image map extended linearly and multiplicatively.

    ``anti=True`` gives an anti-homomorphism (words are reversed before
    substitution), which is how the antipode is carried.  ``coeff_map``
    transports scalars when source and target modes differ.
    """

    def __init__(self, name: str, source: Presentation, target: Presentation,
                 images: Dict[int, NCPoly], anti: bool = False,
                 coeff_map: Optional[Callable[[Scalar], Scalar]] = None):
        self.name = name
        self.source = source
        self.target = target
        self.images = images
        self.anti = anti
        self.coeff_map = coeff_map
        self._word_cache: Dict[Word, NCPoly] = {}

    def __call__(self, p: NCPoly) -> NCPoly:
        if p.pres is not self.source:
            raise PresentationError(
                f"{self.name}: expected element of {self.source.name}, "
                f"got {p.pres.name}")
        out = self.target.zero()
        for w, c in p.terms.items():
            img = self._image_of_word(w)
            cc = self.coeff_map(c) if self.coeff_map else c
            out = out + img.scale(cc)
        return out

    def _image_of_word(self, w: Word) -> NCPoly:
        cached = self._word_cache.get(w)
        if cached is not None:
            return cached
        letters = tuple(reversed(w)) if self.anti else w
        acc = self.target.unit()
        for letter in letters:
            if letter not in self.images:
                raise PresentationError(
                    f"{self.name}: no image for generator "
                    f"{self.source.alphabet[letter].render()}")
            acc = acc * self.images[letter]
        self._word_cache[w] = acc
        return acc

    def compose(self, after: "AlgebraMorphism") -> "AlgebraMorphism":
        """after o self (this map first)."""
        if self.target is not after.source:
            raise PresentationError("morphism composition mismatch")
        images = {i: after(img) for i, img in self.images.items()}
        cm = None
        if self.coeff_map or after.coeff_map:
            inner = self.coeff_map or (lambda c: c)
            outer = after.coeff_map or (lambda c: c)
            cm = lambda c: outer(inner(c))
        return AlgebraMorphism(f"{after.name}o{self.name}", self.source,
                               after.target, images,
                               anti=self.anti != after.anti, coeff_map=cm)


def identity_morphism(pres: Presentation) -> AlgebraMorphism:
    return AlgebraMorphism("id", pres, pres,
                           {i: pres.poly({(i,): Scalar.one(pres.mode)})
                            for i in range(len(pres.alphabet))})


def tensor_presentation(factors: Sequence[Presentation], name: Optional[str] = None
                        ) -> Presentation:
    """Tensor product: disjoint alphabets in slot-major order, rules lifted."""
    mode = factors[0].mode
    for f in factors:
        if f.mode != mode:
            raise PresentationError("tensor factors must share a scalar mode")
        if f.n_slots != 1:
            raise PresentationError("nest tensor products by listing all factors at once")
    alphabet: List[Generator] = []
    rules: Dict[Word, Dict[Word, Scalar]] = {}
    weights: List[int] = []
    off = 0
    for s, f in enumerate(factors):
        alphabet.extend(g.at_slot(s) for g in f.alphabet)
        weights.extend(f.weights)
        for lhs, rhs in f.rules.items():
            rules[tuple(x + off for x in lhs)] = {
                tuple(x + off for x in w): c for w, c in rhs.items()}
        off += len(f.alphabet)
    nm = name or "(x)".join(f.name for f in factors)
    return Presentation(nm, alphabet, mode, rules,
                        slot_sizes=[len(f.alphabet) for f in factors],
                        weights=weights)


def embed_in_slot(p: NCPoly, tensor: Presentation, slot: int,
                  factor: Presentation) -> NCPoly:
    """View an element of a factor inside the tensor product."""
    off = sum(tensor.slot_sizes[:slot])
    if p.pres is not factor:
        raise PresentationError("embed_in_slot: wrong source algebra")
    terms = {tuple(x + off for x in w): c for w, c in p.terms.items()}
    return NCPoly(tensor, terms)


def slot_permute(p: NCPoly, source: Presentation, target: Presentation,
                 perm: Sequence[int]) -> NCPoly:
    """Relabel slots: letter in source slot s goes to target slot perm[s].

    Source and target must have matching factor alphabets under the
    permutation.  Words are re-canonicalized; per-slot subwords keep
    their order, so normal forms are preserved.
    """
    src_off = [sum(source.slot_sizes[:s]) for s in range(source.n_slots)]
    tgt_off = [sum(target.slot_sizes[:s]) for s in range(target.n_slots)]
    out: Dict[Word, Scalar] = {}
    for w, c in p.terms.items():
        letters = []
        for letter in w:
            s = source.slot_of(letter)
            letters.append(letter - src_off[s] + tgt_off[perm[s]])
        out[target.canonical(letters)] = c
    return NCPoly(target, out)
