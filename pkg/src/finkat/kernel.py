"""Finite categories, basic morphism classes and finite (co)limits.

Two families of categories live here.  :class:`ExplicitCategory` stores an
explicit composition table and is what the DSL, semilattices and group
fragments produce.  :class:`ConcreteCategory` describes categories whose
morphisms are maps between finite carriers; composition is function
composition and hom-sets are enumerated lazily.  Every algorithm below only
talks to the small :class:`FinCategory` protocol, so both kinds behave the
same.

A :class:`Tier` pairs an ambient category with a set of *core* objects.
Quantifiers (cones, test objects for mono/epi, essential-ness) range over
the core, while apexes of pullbacks and pushouts may be any ambient object.
A plain category is the tier whose core is everything.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Iterator, NamedTuple, Optional

ObjectId = Hashable
MorphismId = Hashable


class CategoryError(ValueError):
    """Malformed input to a kernel operation (unknown ids, non-cospans...)."""


class IntegrityError(RuntimeError):
    """A tier claimed a closure property that turned out to be false."""


class Arrow(NamedTuple):
    """A morphism of a concrete category: a map ``fn`` from ``dom`` to ``cod``."""

    dom: int
    cod: int
    fn: tuple


# ---------------------------------------------------------------------------
# categories


class FinCategory:
    """Protocol for finite categories.

    Subclasses provide ``objects``, ``hom``, ``dom``, ``cod``, ``identity``,
    ``compose`` and ``contains``.  ``compose(g, f)`` is ``g`` after ``f``.
    """

    name = "C"
    objects: tuple = ()

    def hom(self, a, b) -> tuple:
        raise NotImplementedError

    def dom(self, f):
        raise NotImplementedError

    def cod(self, f):
        raise NotImplementedError

    def identity(self, a):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def contains(self, f) -> bool:
        raise NotImplementedError

    def hom_count(self, a, b) -> int:
        return len(self.hom(a, b))

    def morphisms(self) -> Iterator:
        for a in self.objects:
            for b in self.objects:
                yield from self.hom(a, b)

    def has_object(self, a) -> bool:
        return a in self._object_set

    @cached_property
    def _object_set(self) -> frozenset:
        return frozenset(self.objects)

    def show_object(self, a) -> str:
        return str(a)

    def show(self, f) -> str:
        return str(f)

    # set-level constructions a concrete category may offer; the kernel
    # always re-verifies them against the universal property
    def pullback_hint(self, f, g):
        return None

    def pushout_hint(self, f, g):
        return None

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}: {len(self.objects)} objects>"


class ExplicitCategory(FinCategory):
    """A category given by an explicit, total composition table.

    Nothing is validated on construction; :func:`validate` reports problems.
    """

    def __init__(self, objects, morphisms, identities, composition, name="C"):
        self.name = name
        self.objects = tuple(objects)
        self._mor = dict(morphisms)
        self._id = dict(identities)
        self._comp = dict(composition)
        homs: dict = {}
        for m, (a, b) in self._mor.items():
            homs.setdefault((a, b), []).append(m)
        self._homs = {k: tuple(sorted(v)) for k, v in homs.items()}

    @property
    def morphism_table(self) -> dict:
        return dict(self._mor)

    @property
    def identity_table(self) -> dict:
        return dict(self._id)

    @property
    def composition_table(self) -> dict:
        return dict(self._comp)

    def hom(self, a, b):
        return self._homs.get((a, b), ())

    def dom(self, f):
        try:
            return self._mor[f][0]
        except KeyError:
            raise CategoryError(f"unknown morphism {f!r}") from None

    def cod(self, f):
        try:
            return self._mor[f][1]
        except KeyError:
            raise CategoryError(f"unknown morphism {f!r}") from None

    def identity(self, a):
        try:
            return self._id[a]
        except KeyError:
            raise CategoryError(f"no identity for object {a!r}") from None

    def compose(self, g, f):
        try:
            return self._comp[(g, f)]
        except KeyError:
            raise CategoryError(f"no composite recorded for {g!r} . {f!r}") from None

    def contains(self, f):
        try:
            return f in self._mor
        except TypeError:
            return False

    def morphisms(self):
        return iter(sorted(self._mor))

    def __eq__(self, other):
        if not isinstance(other, ExplicitCategory):
            return NotImplemented
        return (
            set(self.objects) == set(other.objects)
            and self._mor == other._mor
            and self._id == other._id
            and self._comp == other._comp
        )

    __hash__ = object.__hash__


class ConcreteCategory(FinCategory):
    """Base class for categories of structured finite sets.

    Objects are integers; ``size(a)`` is the carrier size and morphisms are
    :class:`Arrow` values.  Subclasses implement ``_maps(a, b)`` returning the
    admissible function tuples.
    """

    def size(self, a) -> int:
        raise NotImplementedError

    def _maps(self, a, b) -> Iterable[tuple]:
        raise NotImplementedError

    @cached_property
    def _hom_cache(self) -> dict:
        return {}

    def hom(self, a, b):
        key = (a, b)
        cache = self._hom_cache
        hit = cache.get(key)
        if hit is None:
            hit = tuple(Arrow(a, b, fn) for fn in self._maps(a, b))
            cache[key] = hit
        return hit

    def dom(self, f):
        return f[0]

    def cod(self, f):
        return f[1]

    def identity(self, a):
        return Arrow(a, a, tuple(range(self.size(a))))

    def compose(self, g, f):
        if g[0] != f[1]:
            raise CategoryError(f"cannot compose {self.show(g)} after {self.show(f)}")
        gf = g[2]
        return Arrow(f[0], g[1], tuple([gf[x] for x in f[2]]))

    def contains(self, f):
        if not (isinstance(f, tuple) and len(f) == 3):
            return False
        a, b, fn = f
        if not (self.has_object(a) and self.has_object(b)):
            return False
        return Arrow(a, b, tuple(fn)) in self._hom_set(a, b)

    def _hom_set(self, a, b) -> frozenset:
        cache = self.__dict__.setdefault("_hom_sets", {})
        s = cache.get((a, b))
        if s is None:
            s = cache[(a, b)] = frozenset(self.hom(a, b))
        return s

    def show(self, f):
        return f"{self.show_object(f[0])}->{self.show_object(f[1])}{list(f[2])}"


class Opposite(FinCategory):
    def __init__(self, base: FinCategory):
        self.base = base
        self.name = f"{base.name}^op"
        self.objects = base.objects

    def hom(self, a, b):
        return self.base.hom(b, a)

    def hom_count(self, a, b):
        return self.base.hom_count(b, a)

    def dom(self, f):
        return self.base.cod(f)

    def cod(self, f):
        return self.base.dom(f)

    def identity(self, a):
        return self.base.identity(a)

    def compose(self, g, f):
        return self.base.compose(f, g)

    def contains(self, f):
        return self.base.contains(f)

    def morphisms(self):
        return self.base.morphisms()

    def show_object(self, a):
        return self.base.show_object(a)

    def show(self, f):
        return self.base.show(f) + "^op"

    def pullback_hint(self, f, g):
        return self.base.pushout_hint(f, g)

    def pushout_hint(self, f, g):
        return self.base.pullback_hint(f, g)


def opposite(C):
    """Opposite category (or opposite tier); an involution on the nose."""
    if isinstance(C, Tier):
        return C.opposite()
    if isinstance(C, Opposite):
        return C.base
    cached = C.__dict__.get("_opposite")
    if cached is None:
        cached = C.__dict__["_opposite"] = Opposite(C)
    return cached


# ---------------------------------------------------------------------------
# tiers


@dataclass(frozen=True)
class PullbackResult:
    apex: Any
    proj1: Any
    proj2: Any


@dataclass(frozen=True)
class PushoutResult:
    apex: Any
    inj1: Any
    inj2: Any


class Tier:
    """An ambient category with a designated core of objects.

    The closure flags are computed (exhaustively, on first access) rather
    than asserted by whoever built the tier.
    """

    def __init__(self, ambient: FinCategory, core: Optional[Iterable] = None, name=None):
        self.ambient = ambient
        self.core = tuple(ambient.objects if core is None else core)
        self.name = name or ambient.name
        missing = [a for a in self.core if not ambient.has_object(a)]
        if missing:
            raise CategoryError(f"core objects not in ambient: {missing!r}")
        self._core_set = frozenset(self.core)
        self._mono: dict = {}
        self._epi: dict = {}
        self._pullbacks: dict = {}
        self._op: Optional[Tier] = None

    def __repr__(self):
        return f"<Tier {self.name}: core {len(self.core)} / ambient {len(self.ambient.objects)}>"

    def in_core(self, a) -> bool:
        return a in self._core_set

    def opposite(self) -> "Tier":
        if self._op is None:
            op = Tier(opposite(self.ambient), self.core, name=f"{self.name}^op")
            op._op = self
            self._op = op
        return self._op

    def core_morphisms(self) -> list:
        """Morphisms with both ends in the core, in id order."""
        out = []
        for a in self.core:
            for b in self.core:
                out.extend(self.ambient.hom(a, b))
        return sorted(out)

    def core_codomain_morphisms(self) -> list:
        """Morphisms from any ambient object into a core object, in id order."""
        out = []
        for b in self.core:
            for a in self.ambient.objects:
                out.extend(self.ambient.hom(a, b))
        return sorted(out)

    def core_cospans(self) -> Iterator[tuple]:
        core = self.core
        cat = self.ambient
        for z in core:
            into = [m for a in core for m in cat.hom(a, z)]
            for f in into:
                for g in into:
                    yield f, g

    @cached_property
    def _in_signatures(self) -> dict:
        cat = self.ambient
        index: dict = {}
        for p in cat.objects:
            sig = tuple(cat.hom_count(w, p) for w in self.core)
            index.setdefault(sig, []).append(p)
        return index

    @cached_property
    def pullback_closed_for_core(self) -> bool:
        return self.closure_failure() is None

    @cached_property
    def pushout_closed_for_core(self) -> bool:
        return self.opposite().closure_failure() is None

    def closure_failure(self):
        """First core cospan without a pullback, or ``None``."""
        for f, g in self.core_cospans():
            if pullback(self, f, g) is None:
                return f, g
        return None


def as_tier(C) -> Tier:
    """View a plain category as the tier whose core is every object."""
    if isinstance(C, Tier):
        return C
    t = C.__dict__.get("_full_tier")
    if t is None:
        t = C.__dict__["_full_tier"] = Tier(C)
    return t


def category_of(C) -> FinCategory:
    return C.ambient if isinstance(C, Tier) else C


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    valid: bool
    violations: list = field(default_factory=list)
    checked: dict = field(default_factory=dict)

    def __bool__(self):
        return self.valid


def validate(C, limit: int = 50) -> ValidationReport:
    """Check the category axioms on the (core) full subcategory.

    Reports identity typing, missing or ill-typed composites, identity laws
    and associativity.  At most ``limit`` violations are listed.
    """
    T = as_tier(C)
    cat = T.ambient
    objs = T.core
    bad: list = []

    def note(msg):
        if len(bad) < limit:
            bad.append(msg)

    homs = {(a, b): cat.hom(a, b) for a in objs for b in objs}
    for a in objs:
        try:
            i = cat.identity(a)
        except CategoryError as exc:
            note(str(exc))
            continue
        if not cat.contains(i) or cat.dom(i) != a or cat.cod(i) != a:
            note(f"identity {cat.show(i)} of {cat.show_object(a)} is not an endomorphism of it")

    comp: dict = {}
    npairs = 0
    for (a, b), fs in homs.items():
        for c in objs:
            for g in homs[(b, c)]:
                for f in fs:
                    npairs += 1
                    try:
                        h = cat.compose(g, f)
                    except CategoryError:
                        note(f"missing composite {cat.show(g)} . {cat.show(f)}")
                        continue
                    if not cat.contains(h):
                        note(f"dangling composite {cat.show(g)} . {cat.show(f)} = {h!r}")
                        continue
                    if cat.dom(h) != a or cat.cod(h) != c:
                        note(
                            f"composite {cat.show(g)} . {cat.show(f)} = {cat.show(h)} has type "
                            f"{cat.show_object(cat.dom(h))}->{cat.show_object(cat.cod(h))}, "
                            f"expected {cat.show_object(a)}->{cat.show_object(c)}"
                        )
                        continue
                    comp[(g, f)] = h

    for (a, b), fs in homs.items():
        try:
            ia, ib = cat.identity(a), cat.identity(b)
        except CategoryError:
            continue
        for f in fs:
            if comp.get((f, ia), f) != f:
                note(f"right identity law fails for {cat.show(f)}")
            if comp.get((ib, f), f) != f:
                note(f"left identity law fails for {cat.show(f)}")

    ntriples = 0
    for (a, b), fs in homs.items():
        for c in objs:
            gs = homs[(b, c)]
            if not gs:
                continue
            for d in objs:
                ks = homs[(c, d)]
                for f in fs:
                    for g in gs:
                        gf = comp.get((g, f))
                        if gf is None:
                            continue
                        for k in ks:
                            ntriples += 1
                            kg = comp.get((k, g))
                            if kg is None:
                                continue
                            left, right = comp.get((k, gf)), comp.get((kg, f))
                            if left is not None and right is not None and left != right:
                                note(
                                    "associativity fails for "
                                    f"({cat.show(k)}, {cat.show(g)}, {cat.show(f)})"
                                )
    return ValidationReport(
        not bad, bad, {"objects": len(objs), "pairs": npairs, "triples": ntriples}
    )


# ---------------------------------------------------------------------------
# morphism classes


@dataclass(frozen=True)
class MorphismFlags:
    mono: bool
    epi: bool
    split_mono: bool
    split_epi: bool
    iso: bool

    @property
    def bimorphism(self) -> bool:
        return self.mono and self.epi


def _require(cat, f):
    if not cat.contains(f):
        raise CategoryError(f"unknown morphism {f!r}")


def is_mono(C, f) -> bool:
    """Left-cancellable against every core test object."""
    T = as_tier(C)
    hit = T._mono.get(f)
    if hit is None:
        cat = T.ambient
        a = cat.dom(f)
        hit = True
        for w in T.core:
            hs = cat.hom(w, a)
            if len(hs) > 1 and len({cat.compose(f, h) for h in hs}) != len(hs):
                hit = False
                break
        T._mono[f] = hit
    return hit


def is_epi(C, f) -> bool:
    return is_mono(as_tier(C).opposite(), f)


def retractions(C, f) -> list:
    cat = category_of(C)
    a, b = cat.dom(f), cat.cod(f)
    ida = cat.identity(a)
    return [r for r in cat.hom(b, a) if cat.compose(r, f) == ida]


def sections(C, f) -> list:
    cat = category_of(C)
    a, b = cat.dom(f), cat.cod(f)
    idb = cat.identity(b)
    return [s for s in cat.hom(b, a) if cat.compose(f, s) == idb]


def is_split_mono(C, f) -> bool:
    return bool(retractions(C, f))


def is_split_epi(C, f) -> bool:
    return bool(sections(C, f))


def inverse(C, f):
    """Two-sided inverse of ``f`` or ``None``."""
    cat = category_of(C)
    a, b = cat.dom(f), cat.cod(f)
    ida, idb = cat.identity(a), cat.identity(b)
    for r in cat.hom(b, a):
        if cat.compose(r, f) == ida and cat.compose(f, r) == idb:
            return r
    return None


def is_iso(C, f) -> bool:
    cat = category_of(C)
    if cat.hom_count(cat.cod(f), cat.dom(f)) == 0:
        return False
    return inverse(C, f) is not None


def is_bimorphism(C, f) -> bool:
    return is_mono(C, f) and is_epi(C, f)


def classify_basic(C, f) -> MorphismFlags:
    cat = category_of(C)
    _require(cat, f)
    iso = is_iso(C, f)
    if iso:
        return MorphismFlags(True, True, True, True, True)
    return MorphismFlags(
        mono=is_mono(C, f),
        epi=is_epi(C, f),
        split_mono=is_split_mono(C, f),
        split_epi=is_split_epi(C, f),
        iso=False,
    )


def isomorphism(C, a, b):
    """Some isomorphism ``a -> b`` or ``None``."""
    cat = category_of(C)
    if cat.hom_count(a, b) == 0 or cat.hom_count(b, a) == 0:
        return None
    for f in cat.hom(a, b):
        if inverse(C, f) is not None:
            return f
    return None


# ---------------------------------------------------------------------------
# terminal / initial


def terminal(C):
    """Object receiving exactly one morphism from every ambient object."""
    cat = category_of(C)
    for t in cat.objects:
        if all(cat.hom_count(w, t) == 1 for w in cat.objects):
            return t
    return None


def initial(C):
    return terminal(opposite(C))


# ---------------------------------------------------------------------------
# pullbacks and pushouts


def _check_cospan(cat, f, g):
    _require(cat, f)
    _require(cat, g)
    if cat.cod(f) != cat.cod(g):
        raise CategoryError(f"not a cospan: {cat.show(f)}, {cat.show(g)}")


def _cone_counter(cat, f, w, a):
    return Counter(cat.compose(f, h) for h in cat.hom(w, a))


def cone_count(C, f, g, w) -> int:
    """Number of commuting cones over the cospan ``(f, g)`` with apex ``w``."""
    cat = category_of(C)
    left = _cone_counter(cat, f, w, cat.dom(f))
    if not left:
        return 0
    right = _cone_counter(cat, g, w, cat.dom(g))
    return sum(n * right.get(k, 0) for k, n in left.items())


def _jointly_monic(T, p, q1, q2) -> bool:
    cat = T.ambient
    for w in T.core:
        hs = cat.hom(w, p)
        if len(hs) > 1:
            seen = {(cat.compose(q1, h), cat.compose(q2, h)) for h in hs}
            if len(seen) != len(hs):
                return False
    return True


def _projection_pairs(cat, p, f, g):
    a, b = cat.dom(f), cat.dom(g)
    fibres: dict = {}
    for q2 in cat.hom(p, b):
        fibres.setdefault(cat.compose(g, q2), []).append(q2)
    for q1 in cat.hom(p, a):
        for q2 in fibres.get(cat.compose(f, q1), ()):
            yield q1, q2


def _pullback_candidates(T, f, g):
    sig = tuple(cone_count(T, f, g, w) for w in T.core)
    return T._in_signatures.get(sig, [])


def _rival_tests(T, candidates):
    """Extra test objects: the competing candidate apexes outside the core.

    Core test objects alone can miss structure (a pointed preorder on two
    points has a single free element, so it never sees an order relation
    between two non-basepoint elements of the apex).  Every candidate that
    passes the core test must also be universal for cones out of its rivals,
    which leaves only apexes that are pairwise uniquely isomorphic.
    """
    if len(candidates) < 2:
        return ()
    core = set(T.core)
    return tuple(c for c in candidates if c not in core)


def _universal_for(T, f, g, p, q1, q2, tests) -> bool:
    cat = T.ambient
    for w in tests:
        if cat.hom_count(w, p) != cone_count(T, f, g, w):
            return False
        hs = cat.hom(w, p)
        if len(hs) > 1:
            seen = {(cat.compose(q1, h), cat.compose(q2, h)) for h in hs}
            if len(seen) != len(hs):
                return False
    return True


def _is_pullback(T, f, g, p, q1, q2, rivals) -> bool:
    return _jointly_monic(T, p, q1, q2) and _universal_for(T, f, g, p, q1, q2, rivals)


def is_pullback_square(C, f, g, p1, p2) -> bool:
    """Whether ``(p1, p2)`` is a pullback of the cospan ``(f, g)``."""
    T = as_tier(C)
    cat = T.ambient
    if cat.dom(p1) != cat.dom(p2) or cat.compose(f, p1) != cat.compose(g, p2):
        return False
    p = cat.dom(p1)
    for w in T.core:
        if cat.hom_count(w, p) != cone_count(T, f, g, w):
            return False
    rivals = _rival_tests(T, _pullback_candidates(T, f, g))
    return _is_pullback(T, f, g, p, p1, p2, rivals)


def pullback(C, f, g) -> Optional[PullbackResult]:
    """Pullback of ``f: A -> Z`` and ``g: B -> Z`` or ``None`` when absent.

    Candidates are ambient objects whose hom-counts from every core object
    match the cone counts; each is also tested against cones out of the
    other candidates.  They are tried in id order, so among isomorphic
    apexes the smallest id wins.
    """
    T = as_tier(C)
    key = (f, g)
    if key in T._pullbacks:
        return T._pullbacks[key]
    cat = T.ambient
    _check_cospan(cat, f, g)
    result = None
    candidates = _pullback_candidates(T, f, g)
    if candidates:
        rivals = _rival_tests(T, candidates)
        hint = cat.pullback_hint(f, g)
        for p in candidates:
            if hint is not None and hint[0] == p and _is_pullback(T, f, g, *hint, rivals):
                result = PullbackResult(*hint)
                break
            found = next(
                (pr for pr in _projection_pairs(cat, p, f, g) if _is_pullback(T, f, g, p, *pr, rivals)),
                None,
            )
            if found is not None:
                result = PullbackResult(p, *found)
                break
    T._pullbacks[key] = result
    return result


def all_pullbacks(C, f, g) -> list:
    """Every pullback square of the cospan with apex in the ambient."""
    T = as_tier(C)
    cat = T.ambient
    _check_cospan(cat, f, g)
    candidates = _pullback_candidates(T, f, g)
    rivals = _rival_tests(T, candidates)
    return [
        PullbackResult(p, *pr)
        for p in candidates
        for pr in _projection_pairs(cat, p, f, g)
        if _is_pullback(T, f, g, p, *pr, rivals)
    ]


def pushout(C, f, g) -> Optional[PushoutResult]:
    """Pushout of ``f: Z -> A`` and ``g: Z -> B``, computed as a pullback in the opposite."""
    T = as_tier(C)
    cat = T.ambient
    _require(cat, f)
    _require(cat, g)
    if cat.dom(f) != cat.dom(g):
        raise CategoryError(f"not a span: {cat.show(f)}, {cat.show(g)}")
    r = pullback(T.opposite(), f, g)
    return None if r is None else PushoutResult(r.apex, r.proj1, r.proj2)


def is_pushout_square(C, f, g, i1, i2) -> bool:
    return is_pullback_square(as_tier(C).opposite(), f, g, i1, i2)


def mediating_isos(C, first: PullbackResult, second: PullbackResult) -> list:
    """Isomorphisms ``second.apex -> first.apex`` compatible with both projections."""
    cat = category_of(C)
    return [
        h
        for h in cat.hom(second.apex, first.apex)
        if cat.compose(first.proj1, h) == second.proj1
        and cat.compose(first.proj2, h) == second.proj2
        and inverse(C, h) is not None
    ]


# ---------------------------------------------------------------------------
# small helpers


def terminal_category(name="1") -> ExplicitCategory:
    return ExplicitCategory(["*"], {"id*": ("*", "*")}, {"*": "id*"}, {("id*", "id*"): "id*"}, name)


def full_subcategory(C, objects, name=None) -> ExplicitCategory:
    """Materialise the full subcategory on ``objects`` as an explicit table."""
    cat = category_of(C)
    objects = tuple(objects)
    mors = {}
    for a in objects:
        for b in objects:
            for m in cat.hom(a, b):
                mors[m] = (a, b)
    comp = {}
    for g, (b, c) in mors.items():
        for f, (a, b2) in mors.items():
            if b == b2:
                comp[(g, f)] = cat.compose(g, f)
    ids = {a: cat.identity(a) for a in objects}
    return ExplicitCategory(objects, mors, ids, comp, name or f"{cat.name}|sub")


def product_maps(n_dom: int, n_cod: int) -> Iterator[tuple]:
    return itertools.product(range(n_cod), repeat=n_dom)
