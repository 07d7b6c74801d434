"""Deterministic builders for the example categories, functors and
localizations the engine is exercised on."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Optional

from .essentials import Condition, check_condition, st_mono_e, witness_is_violation
from .functors import (
    FAIL,
    PASS,
    Adjunction,
    Functor,
    LocalizationTriple,
    NaturalTransformation,
    TheoremResult,
    compose_functors,
    identity_functor,
)
from .kernel import (
    Arrow,
    ConcreteCategory,
    ExplicitCategory,
    Tier,
    as_tier,
    is_iso,
    terminal_category,
)


class CorpusError(ValueError):
    pass


# ---------------------------------------------------------------------------
# set-level helpers shared by the concrete categories


def _fibre_pairs(f, g, na, nb):
    ff, gf = f[2], g[2]
    return [(x, y) for x in range(na) for y in range(nb) if ff[x] == gf[y]]


def _amalgamate(na, nb, f_fn, g_fn):
    """Quotient of ``A + B`` by ``f(z) ~ g(z)``; classes numbered by first
    occurrence scanning ``A`` then ``B``."""
    parent = list(range(na + nb))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for x, y in zip(f_fn, g_fn):
        rx, ry = find(x), find(na + y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    label: dict = {}
    out = []
    for i in range(na + nb):
        r = find(i)
        if r not in label:
            label[r] = len(label)
        out.append(label[r])
    return tuple(out[:na]), tuple(out[na:]), len(label)


# ---------------------------------------------------------------------------
# concrete categories


class FinSetCategory(ConcreteCategory):
    """Skeleton of finite sets: object ``k`` is ``{0, ..., k-1}``."""

    def __init__(self, N: int, name=None):
        self.N = N
        self.name = name or f"FinSet<={N}"
        self.objects = tuple(range(N + 1))

    def size(self, a):
        return a

    def _maps(self, a, b):
        return itertools.product(range(b), repeat=a)

    def hom_count(self, a, b):
        return b ** a

    def pullback_hint(self, f, g):
        pairs = _fibre_pairs(f, g, f[0], g[0])
        k = len(pairs)
        if k > self.N:
            return None
        return (
            k,
            Arrow(k, f[0], tuple(x for x, _ in pairs)),
            Arrow(k, g[0], tuple(y for _, y in pairs)),
        )

    def pushout_hint(self, f, g):
        qa, qb, k = _amalgamate(f[1], g[1], f[2], g[2])
        if k > self.N:
            return None
        return k, Arrow(f[1], k, qa), Arrow(g[1], k, qb)


class PointedSetCategory(ConcreteCategory):
    """Pointed finite sets ``{0 = basepoint, ..., k-1}`` for ``1 <= k <= N``,
    optionally with a freely added initial object ``I`` (id 0)."""

    def __init__(self, N: int, with_initial=False, name=None):
        self.N = N
        self.with_initial = with_initial
        self.name = name or (f"Pointed+I<={N}" if with_initial else f"Pointed<={N}")
        self.objects = tuple(range(0 if with_initial else 1, N + 1))

    def size(self, a):
        return a

    def show_object(self, a):
        return "I" if a == 0 else f"*{a}"

    def _maps(self, a, b):
        if a == 0:
            return [()]
        if b == 0:
            return []
        return ((0,) + rest for rest in itertools.product(range(b), repeat=a - 1))

    def hom_count(self, a, b):
        if a == 0:
            return 1
        if b == 0:
            return 0
        return b ** (a - 1)

    def pullback_hint(self, f, g):
        a, b = f[0], g[0]
        if a == 0 or b == 0:
            return 0, Arrow(0, a, ()), Arrow(0, b, ())
        pairs = _fibre_pairs(f, g, a, b)
        k = len(pairs)
        if k > self.N:
            return None
        return (
            k,
            Arrow(k, a, tuple(x for x, _ in pairs)),
            Arrow(k, b, tuple(y for _, y in pairs)),
        )

    def pushout_hint(self, f, g):
        z, a, b = f[0], f[1], g[1]
        if z == 0:
            if a == 0:
                return b, Arrow(0, b, ()), self.identity(b)
            if b == 0:
                return a, self.identity(a), Arrow(0, a, ())
            qa, qb, k = _amalgamate(a, b, (0,), (0,))
        else:
            qa, qb, k = _amalgamate(a, b, f[2], g[2])
        if k > self.N:
            return None
        return k, Arrow(a, k, qa), Arrow(b, k, qb)


def _preorders(k):
    """All preorders on ``k`` labelled points as bitmasks (bit ``i*k+j``: ``i <= j``)."""
    diag = sum(1 << (i * k + i) for i in range(k))
    off = [(i, j) for i in range(k) for j in range(k) if i != j]
    out = []
    for bits in range(1 << len(off)):
        rel = {(i, i) for i in range(k)}
        rel.update(p for n, p in enumerate(off) if bits >> n & 1)
        if all((i, l) in rel for (i, j) in rel for (j2, l) in rel if j == j2):
            mask = diag
            for i, j in rel:
                mask |= 1 << (i * k + j)
            out.append(mask)
    return sorted(out)


def _closure_mask(k, rel):
    leq = [[i == j for j in range(k)] for i in range(k)]
    for i, j in rel:
        leq[i][j] = True
    for m in range(k):
        for i in range(k):
            if leq[i][m]:
                row = leq[m]
                for j in range(k):
                    if row[j]:
                        leq[i][j] = True
    return sum(1 << (i * k + j) for i in range(k) for j in range(k) if leq[i][j])


class PreorderCategory(ConcreteCategory):
    """Preorders on labelled sets ``{0, ..., k-1}``, ``k <= N``, and monotone
    maps; these are exactly the finite topological spaces with continuous maps.
    The pointed variant fixes basepoint ``0``."""

    def __init__(self, N: int, pointed=False, name=None):
        self.N = N
        self.pointed = pointed
        self.name = name or (f"Preord*<={N}" if pointed else f"Preord<={N}")
        data = []
        for k in range(1 if pointed else 0, N + 1):
            data.extend((k, m) for m in _preorders(k))
        self._data = data
        self._index = {d: i for i, d in enumerate(data)}
        self._leq = []
        self._strict = []
        for k, mask in data:
            leq = [[bool(mask >> (i * k + j) & 1) for j in range(k)] for i in range(k)]
            self._leq.append(leq)
            self._strict.append([(i, j) for i in range(k) for j in range(k) if i != j and leq[i][j]])
        self.objects = tuple(range(len(data)))

    def size(self, a):
        return self._data[a][0]

    def structure(self, a):
        return self._data[a]

    def lookup(self, k, mask):
        return self._index[(k, mask)]

    def relation(self, a):
        """Strict part of the order as a list of pairs ``(i, j)`` with ``i <= j``."""
        return list(self._strict[a])

    def indiscrete(self, k):
        return self._index[(k, (1 << (k * k)) - 1)]

    def discrete(self, k):
        return self._index[(k, sum(1 << (i * k + i) for i in range(k)))]

    def is_indiscrete(self, a):
        return a == self.indiscrete(self.size(a))

    def is_discrete(self, a):
        return a == self.discrete(self.size(a))

    def show_object(self, a):
        k = self.size(a)
        rel = ",".join(f"{i}<={j}" for i, j in self._strict[a])
        return f"P{k}{'*' if self.pointed else ''}{{{rel}}}"

    def _maps(self, a, b):
        ka, kb = self.size(a), self.size(b)
        strict = self._strict[a]
        leq = self._leq[b]
        if self.pointed:
            cands = ((0,) + r for r in itertools.product(range(kb), repeat=ka - 1))
        else:
            cands = itertools.product(range(kb), repeat=ka)
        return [fn for fn in cands if all(leq[fn[i]][fn[j]] for i, j in strict)]

    def pullback_hint(self, f, g):
        a, b = f[0], g[0]
        pairs = _fibre_pairs(f, g, self.size(a), self.size(b))
        k = len(pairs)
        if k > self.N:
            return None
        la, lb = self._leq[a], self._leq[b]
        mask = 0
        for i, (x, y) in enumerate(pairs):
            for j, (x2, y2) in enumerate(pairs):
                if la[x][x2] and lb[y][y2]:
                    mask |= 1 << (i * k + j)
        p = self._index[(k, mask)]
        return (
            p,
            Arrow(p, a, tuple(x for x, _ in pairs)),
            Arrow(p, b, tuple(y for _, y in pairs)),
        )

    def pushout_hint(self, f, g):
        a, b = f[1], g[1]
        qa, qb, k = _amalgamate(self.size(a), self.size(b), f[2], g[2])
        if k > self.N:
            return None
        rel = [(qa[i], qa[j]) for i, j in self._strict[a]]
        rel += [(qb[i], qb[j]) for i, j in self._strict[b]]
        p = self._index[(k, _closure_mask(k, rel))]
        return p, Arrow(a, p, qa), Arrow(b, p, qb)


def _group_elements(orders):
    return list(itertools.product(*[range(n) for n in orders]))


def _element_order(x, orders):
    k = 1
    while any((k * xi) % n for xi, n in zip(x, orders)):
        k += 1
    return k


_GROUP_NAME = re.compile(r"^Z/(\d+)$")


def parse_group(spec) -> tuple:
    """``"Z/2+Z/4"`` or ``(2, 4)`` -> cyclic orders; ``"0"`` is the trivial group."""
    if isinstance(spec, (tuple, list)):
        orders = tuple(int(n) for n in spec)
    else:
        text = str(spec).replace(" ", "")
        if text in ("0", ""):
            return ()
        orders = []
        for part in text.split("+"):
            if "^" in part:
                base, _, exp = part.partition("^")
                m = _GROUP_NAME.match(base)
                if not m or not exp.isdigit():
                    raise CorpusError(f"not a finite abelian group: {spec!r}")
                orders += [int(m.group(1))] * int(exp)
                continue
            m = _GROUP_NAME.match(part)
            if not m:
                raise CorpusError(f"not a finite abelian group: {spec!r}")
            orders.append(int(m.group(1)))
        orders = tuple(orders)
    if any(n < 2 for n in orders):
        raise CorpusError(f"cyclic factors must have order >= 2: {spec!r}")
    return orders


def group_name(orders) -> str:
    if not orders:
        return "0"
    if len(set(orders)) == 1 and len(orders) > 1:
        return f"Z/{orders[0]}^{len(orders)}"
    return "+".join(f"Z/{n}" for n in orders)


class AbelianFragment(ConcreteCategory):
    """Full subcategory of finite abelian groups on a chosen list of groups;
    morphisms are homomorphisms stored as maps of element indices."""

    def __init__(self, groups, name="Ab-fragment"):
        self.name = name
        self._orders = {}
        self._elements = {}
        self._index = {}
        for spec in groups:
            orders = parse_group(spec)
            g = group_name(orders)
            self._orders[g] = orders
            els = _group_elements(orders)
            self._elements[g] = els
            self._index[g] = {e: i for i, e in enumerate(els)}
        self.objects = tuple(self._orders)

    def size(self, a):
        return len(self._elements[a])

    def orders(self, a):
        return self._orders[a]

    def _maps(self, a, b):
        oa, ob = self._orders[a], self._orders[b]
        tb = self._elements[b]
        gen_choices = [
            [y for y in tb if n % _element_order(y, ob) == 0] for n in oa
        ]
        idx = self._index[b]
        out = []
        for images in itertools.product(*gen_choices):
            fn = []
            for x in self._elements[a]:
                y = tuple(
                    sum(xi * img[t] for xi, img in zip(x, images)) % ob[t] for t in range(len(ob))
                )
                fn.append(idx[y])
            out.append(tuple(fn))
        return out


# ---------------------------------------------------------------------------
# explicit small categories


def semilattice(meet_table, elements=None, name="L") -> ExplicitCategory:
    """Thin category of a finite meet-semilattice with top: ``a -> b`` iff ``a ^ b = a``.

    ``meet_table`` maps ordered pairs to their meet.
    """
    if elements is None:
        elements = sorted({x for pair in meet_table for x in pair})
    elements = list(elements)
    meet = dict(meet_table)
    for a in elements:
        for b in elements:
            if (a, b) not in meet:
                raise CorpusError(f"meet of {a!r} and {b!r} missing")
            if meet[(a, b)] not in elements:
                raise CorpusError(f"meet of {a!r} and {b!r} is not an element")
    for a in elements:
        if meet[(a, a)] != a:
            raise CorpusError(f"meet is not idempotent at {a!r}")
        for b in elements:
            if meet[(a, b)] != meet[(b, a)]:
                raise CorpusError(f"meet is not commutative at {a!r}, {b!r}")
            for c in elements:
                if meet[(meet[(a, b)], c)] != meet[(a, meet[(b, c)])]:
                    raise CorpusError(f"meet is not associative at {a!r}, {b!r}, {c!r}")
    tops = [t for t in elements if all(meet[(a, t)] == a for a in elements)]
    if not tops:
        raise CorpusError("semilattice has no largest element")
    mors = {}
    for a in elements:
        for b in elements:
            if meet[(a, b)] == a:
                mors[f"{a}<={b}"] = (a, b)
    ids = {a: f"{a}<={a}" for a in elements}
    comp = {}
    for g, (b, c) in mors.items():
        for f, (a, b2) in mors.items():
            if b == b2:
                comp[(g, f)] = f"{a}<={c}"
    return ExplicitCategory(elements, mors, ids, comp, name)


def poset_meets(elements, leq) -> dict:
    """Meet table of a finite poset given by ``leq(a, b)``; raises if a meet is missing."""
    table = {}
    for a in elements:
        for b in elements:
            lower = [c for c in elements if leq(c, a) and leq(c, b)]
            best = [c for c in lower if all(leq(d, c) for d in lower)]
            if len(best) != 1:
                raise CorpusError(f"{a!r} and {b!r} have no meet")
            table[(a, b)] = best[0]
    return table


def boolean_lattice() -> ExplicitCategory:
    """``B2 = {0, a, b, 1}`` ordered by inclusion of subsets of ``{a, b}``."""
    sets = {"0": frozenset(), "a": frozenset("a"), "b": frozenset("b"), "1": frozenset("ab")}
    els = list(sets)
    return semilattice(poset_meets(els, lambda x, y: sets[x] <= sets[y]), els, "B2")


def chain(k: int) -> ExplicitCategory:
    els = [str(i) for i in range(k)]
    return semilattice(poset_meets(els, lambda x, y: int(x) <= int(y)), els, f"chain{k}")


SEMILATTICES = {"B2": boolean_lattice, "chain2": lambda: chain(2), "chain3": lambda: chain(3)}


def top_element(L: ExplicitCategory):
    return next(t for t in L.objects if all(L.hom(a, t) for a in L.objects))


def bottom_element(L: ExplicitCategory):
    return next(t for t in L.objects if all(L.hom(t, a) for a in L.objects))


def discrete_category(names, name="D") -> ExplicitCategory:
    names = list(names)
    mors = {f"id{a}": (a, a) for a in names}
    return ExplicitCategory(
        names, mors, {a: f"id{a}" for a in names}, {(f"id{a}", f"id{a}"): f"id{a}" for a in names}, name
    )


def arrow_category(name="2") -> ExplicitCategory:
    """``a -> b`` with one non-identity morphism ``u``."""
    mors = {"ida": ("a", "a"), "idb": ("b", "b"), "u": ("a", "b")}
    comp = {("ida", "ida"): "ida", ("idb", "idb"): "idb", ("u", "ida"): "u", ("idb", "u"): "u"}
    return ExplicitCategory(["a", "b"], mors, {"a": "ida", "b": "idb"}, comp, name)


def inclusion_discrete_into_arrow() -> Functor:
    D = discrete_category(["a", "b"])
    A = arrow_category()
    return Functor(D, A, lambda x: x, lambda f: f, "incl")


def constant_functor(T, name="!") -> Functor:
    one = terminal_category()
    return Functor(T, one, lambda a: "*", lambda f: "id*", name)


# ---------------------------------------------------------------------------
# tiers


def _bounds(n, N):
    if n < 0 or N < n * n or N < n:
        raise CorpusError(f"ambient bound {N} must be at least core bound squared ({n * n})")


def finset_category(N: int) -> FinSetCategory:
    return FinSetCategory(N)


def finset_tier(n: int, N: int) -> Tier:
    _bounds(n, N)
    return Tier(FinSetCategory(N), range(n + 1), name=f"FinSet({n},{N})")


def pointed_finset_tier(n: int, N: int) -> Tier:
    _bounds(n, N)
    return Tier(PointedSetCategory(N), range(1, n + 1), name=f"Pointed({n},{N})")


def pointed_finset_with_initial(n: int, N: int) -> Tier:
    _bounds(n, N)
    return Tier(
        PointedSetCategory(N, with_initial=True), range(0, n + 1), name=f"Pointed+I({n},{N})"
    )


def finpreord_tier(n: int, N: int, pointed=False) -> Tier:
    _bounds(n, N)
    cat = PreorderCategory(N, pointed=pointed)
    core = [a for a in cat.objects if cat.size(a) <= n]
    return Tier(cat, core, name=f"{'Preord*' if pointed else 'Preord'}({n},{N})")


def ab_fragment(groups=("0", "Z/2", "Z/4", "Z/2^2", "Z/2+Z/4"), bound: int = 16) -> Tier:
    """Finite abelian groups with all homomorphisms; no closure is claimed."""
    for g in groups:
        orders = parse_group(g)
        size = 1
        for n in orders:
            size *= n
        if size > bound:
            raise CorpusError(f"group {g!r} has order {size} > bound {bound}")
    return as_tier(AbelianFragment(groups))


# ---------------------------------------------------------------------------
# localizations


def _id_fn(k):
    return tuple(range(k))


def _set_level_localization(C: Tier, X: Tier, name) -> LocalizationTriple:
    """Forgetful ``F`` from (pointed) preorders to (pointed) sets with the
    indiscrete right adjoint ``G`` and discrete left adjoint ``H``; every
    transformation is the identity on carriers."""
    P = C.ambient
    F = Functor(C, X, P.size, lambda f: Arrow(P.size(f[0]), P.size(f[1]), f[2]), "F")
    G = Functor(
        X, C, P.indiscrete, lambda f: Arrow(P.indiscrete(f[0]), P.indiscrete(f[1]), f[2]), "G"
    )
    H = Functor(X, C, P.discrete, lambda f: Arrow(P.discrete(f[0]), P.discrete(f[1]), f[2]), "H")
    one_C, one_X = identity_functor(C), identity_functor(X)
    GF, FG = compose_functors(G, F), compose_functors(F, G)
    FH, HF = compose_functors(F, H), compose_functors(H, F)
    eta = NaturalTransformation(
        one_C, GF, lambda c: Arrow(c, P.indiscrete(P.size(c)), _id_fn(P.size(c))), "eta"
    )
    theta = NaturalTransformation(
        HF, one_C, lambda c: Arrow(P.discrete(P.size(c)), c, _id_fn(P.size(c))), "theta"
    )
    eps = NaturalTransformation(FG, one_X, lambda x: Arrow(x, x, _id_fn(x)), "eps")
    zeta = NaturalTransformation(one_X, FH, lambda x: Arrow(x, x, _id_fn(x)), "zeta")
    return LocalizationTriple(F, G, H, eta, eps, zeta, theta, name)


def finpreord_localization(n: int = 2, N: int = 4) -> LocalizationTriple:
    return _set_level_localization(finpreord_tier(n, N), finset_tier(n, N), f"finpreord({n},{N})")


def pointed_finpreord_localization(n: int = 2, N: int = 4) -> LocalizationTriple:
    return _set_level_localization(
        finpreord_tier(n, N, pointed=True), pointed_finset_tier(n, N),
        f"finpreord-pointed({n},{N})",
    )


def corrupted_finpreord_localization(n: int = 2, N: int = 4) -> LocalizationTriple:
    """The preorder triple with the discrete functor put in place of ``G``."""
    L = finpreord_localization(n, N)
    P = L.C.ambient
    G = L.H
    GF = compose_functors(G, L.F)
    eta = NaturalTransformation(
        identity_functor(L.C), GF,
        lambda c: Arrow(c, P.discrete(P.size(c)), _id_fn(P.size(c))), "eta",
    )
    eps = NaturalTransformation(
        compose_functors(L.F, G), identity_functor(L.X), lambda x: Arrow(x, x, _id_fn(x)), "eps"
    )
    return LocalizationTriple(L.F, G, L.H, eta, eps, L.zeta, L.theta, f"corrupted-{L.name}")


def identity_localization(T, name=None) -> LocalizationTriple:
    T = as_tier(T)
    one = identity_functor(T)
    cat = T.ambient
    idt = NaturalTransformation(one, one, cat.identity, "id")
    return LocalizationTriple(one, one, one, idt, idt, idt, idt, name or f"identity({T.name})")


def semilattice_localization(L: Optional[ExplicitCategory] = None) -> LocalizationTriple:
    """``L -> 1`` with right adjoint picking the top and left adjoint the bottom."""
    L = L or boolean_lattice()
    T = as_tier(L)
    one = as_tier(terminal_category())
    top, bot = top_element(L), bottom_element(L)
    F = Functor(T, one, lambda a: "*", lambda f: "id*", "F")
    G = Functor(one, T, lambda x: top, lambda f: f"{top}<={top}", "G")
    H = Functor(one, T, lambda x: bot, lambda f: f"{bot}<={bot}", "H")
    eta = NaturalTransformation(identity_functor(T), compose_functors(G, F), lambda a: f"{a}<={top}", "eta")
    theta = NaturalTransformation(compose_functors(H, F), identity_functor(T), lambda a: f"{bot}<={a}", "theta")
    eps = NaturalTransformation(compose_functors(F, G), identity_functor(one), lambda x: "id*", "eps")
    zeta = NaturalTransformation(identity_functor(one), compose_functors(F, H), lambda x: "id*", "zeta")
    return LocalizationTriple(F, G, H, eta, eps, zeta, theta, f"{L.name}->1")


def free_basepoint_adjunction(n: int = 2) -> Adjunction:
    """Free algebra ``A |-> A + {c}`` (empty set to the empty algebra ``I``)
    from finite sets into pointed sets with initial object, right adjoint
    the underlying-set functor."""
    m = n + 1
    X = finset_tier(n, n * n)
    Y = pointed_finset_with_initial(m, m * m)

    def free_obj(k):
        return 0 if k == 0 else k + 1

    def free_mor(f):
        a, b, fn = f
        if a == 0:
            return Arrow(0, free_obj(b), ())
        return Arrow(a + 1, b + 1, (0,) + tuple(x + 1 for x in fn))

    F = Functor(X, Y, free_obj, free_mor, "Free")
    U = Functor(Y, X, lambda p: p, lambda f: Arrow(f[0], f[1], f[2]), "U")
    unit = NaturalTransformation(
        identity_functor(X), compose_functors(U, F),
        lambda k: Arrow(0, 0, ()) if k == 0 else Arrow(k, k + 1, tuple(x + 1 for x in range(k))),
        "unit",
    )
    counit = NaturalTransformation(
        compose_functors(F, U), identity_functor(Y),
        lambda p: Arrow(0, 0, ()) if p == 0 else Arrow(p + 1, p, (0,) + tuple(range(p))),
        "counit",
    )
    return Adjunction(F, U, unit, counit)


# ---------------------------------------------------------------------------
# named corpus


@dataclass
class CorpusEntry:
    name: str
    tier: Tier
    localization: Optional[LocalizationTriple] = None
    params: dict = field(default_factory=dict)


def _params(text, defaults):
    if not text:
        return defaults
    parts = [p for p in text.split(",") if p]
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise CorpusError(f"expected integer parameters, got {text!r}") from None
    if len(vals) != len(defaults):
        raise CorpusError(f"expected {len(defaults)} parameters, got {text!r}")
    return tuple(vals)


CORPUS_NAMES = (
    "semilattice:B2", "semilattice:chain2", "semilattice:chain3", "finset:3,9",
    "pointed-initial:2,4", "pointed-finset:2,4", "finpreord:2,4", "finpreord-unpointed:2,4",
    "finpreord-pointed:2,4", "ab", "terminal", "arrow",
)


def load_corpus(spec: str, core: Optional[int] = None, ambient: Optional[int] = None) -> CorpusEntry:
    """Resolve ``name[:params]`` (as used on the command line) to a corpus entry."""
    name, _, arg = spec.partition(":")

    def sized(defaults):
        n, N = _params(arg, defaults)
        if core is not None:
            n = core
        if ambient is not None:
            N = ambient
        return n, N

    if name == "semilattice":
        key = arg or "B2"
        if key not in SEMILATTICES:
            raise CorpusError(f"unknown semilattice {key!r}; known: {', '.join(SEMILATTICES)}")
        L = semilattice_localization(SEMILATTICES[key]())
        return CorpusEntry(f"semilattice:{key}", L.C, L)
    if name == "finset":
        n, N = sized((3, 9))
        T = finset_tier(n, N)
        return CorpusEntry(f"finset:{n},{N}", T, identity_localization(T), {"n": n, "N": N})
    if name == "pointed-initial":
        n, N = sized((2, 4))
        return CorpusEntry(f"pointed-initial:{n},{N}", pointed_finset_with_initial(n, N), None, {"n": n, "N": N})
    if name == "pointed-finset":
        n, N = sized((2, 4))
        T = pointed_finset_tier(n, N)
        return CorpusEntry(f"pointed-finset:{n},{N}", T, identity_localization(T), {"n": n, "N": N})
    if name in ("finpreord", "finpreord-unpointed"):
        n, N = sized((2, 4))
        L = finpreord_localization(n, N)
        return CorpusEntry(f"{name}:{n},{N}", L.C, L, {"n": n, "N": N})
    if name == "finpreord-pointed":
        n, N = sized((2, 4))
        L = pointed_finpreord_localization(n, N)
        return CorpusEntry(f"finpreord-pointed:{n},{N}", L.C, L, {"n": n, "N": N})
    if name == "ab":
        groups = [g for g in arg.split(",") if g] if arg else None
        T = ab_fragment(groups) if groups else ab_fragment()
        return CorpusEntry("ab" + (f":{arg}" if arg else ""), T)
    if name == "terminal":
        T = as_tier(terminal_category())
        return CorpusEntry("terminal", T, identity_localization(T))
    if name == "arrow":
        return CorpusEntry("arrow", as_tier(arrow_category()))
    raise CorpusError(f"unknown corpus {spec!r}; known: {', '.join(CORPUS_NAMES)}")


# ---------------------------------------------------------------------------
# the condition matrix


@dataclass
class CorpusSpec:
    builder: str
    params: tuple
    expected: dict  # tag -> bool
    witnesses: dict = field(default_factory=dict)  # tag -> shown witness


def expected_condition_table() -> list:
    return [
        CorpusSpec(
            "finset", (3, 9),
            {"pbse-iso": True, "balanced": True, "mono-split": False},
            {"mono-split": "0->1[]"},
        ),
        CorpusSpec(
            "pointed-initial", (2, 4),
            {"pbse-iso": True, "balanced": False, "mono-split": False},
            {"balanced": "I->*1[]", "mono-split": "I->*1[]"},
        ),
        CorpusSpec("ab", (), {"balanced": True, "essential-iso": False}),
    ]


def _build_spec_tier(spec: CorpusSpec) -> Tier:
    if spec.builder == "finset":
        return finset_tier(*spec.params)
    if spec.builder == "pointed-initial":
        return pointed_finset_with_initial(*spec.params)
    if spec.builder == "ab":
        return ab_fragment()
    raise CorpusError(spec.builder)


def verify_condition_matrix(table=None) -> TheoremResult:
    """Compare computed condition verdicts with the expected table, checking
    every witness, the split-implies-others implication, and the essential
    non-isomorphism ``Z/2 -> Z/4`` in the abelian fragment."""
    table = table or expected_condition_table()
    bad, checked, notes = [], 0, []
    for spec in table:
        T = _build_spec_tier(spec)
        cat = T.ambient
        for tag, want in spec.expected.items():
            checked += 1
            v = check_condition(T, tag)
            if v.holds != want:
                bad.append(f"{T.name}: {tag} computed {v.holds}, expected {want}")
                continue
            if not v.holds:
                if not witness_is_violation(T, v):
                    bad.append(f"{T.name}: witness for {tag} does not re-check")
                shown = cat.show(v.witness[0])
                want_w = spec.witnesses.get(tag)
                if want_w is not None and shown != want_w:
                    bad.append(f"{T.name}: {tag} witness {shown}, expected {want_w}")
                notes.append(f"{T.name}: {tag} fails at {shown}")
            if v.bounded and tag.startswith("pbse"):
                bad.append(f"{T.name}: {tag} verdict is only bounded")
        split = check_condition(T, Condition.MONO_SPLIT)
        if split.holds and not (
            check_condition(T, Condition.PBSE_ISO).holds and check_condition(T, Condition.BALANCED).holds
        ):
            bad.append(f"{T.name}: split monos without the implied conditions")
        if spec.builder == "ab":
            checked += 1
            z2z4 = [
                m for m in st_mono_e(T).essential
                if m[0] == "Z/2" and m[1] == "Z/4" and not is_iso(T, m)
            ]
            if not z2z4:
                bad.append("ab fragment: no essential non-iso Z/2 -> Z/4")
            else:
                notes.append(f"ab fragment: essential non-iso {cat.show(z2z4[0])}")
    return TheoremResult("condition-matrix", FAIL if bad else PASS, checked, bad, {}, notes)
