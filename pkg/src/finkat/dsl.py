"""Reader and writer for ``.fincat`` files.

The format is line oriented; tokens are separated by whitespace::

    # the arrow category
    category Arrow
    obj a
    obj b
    mor u : a -> b
    id a = ida
    id b = idb
    comp u . ida = u

``id A = name`` declares the identity (and the morphism itself if it was
not declared).  Composites with an identity on either side are filled in
when absent; every other composable pair needs an explicit ``comp`` line.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .kernel import ExplicitCategory, FinCategory

KEYWORDS = ("category", "obj", "mor", "id", "comp")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}{message}")


@dataclass
class FincatDocument:
    name: str
    category: ExplicitCategory
    # declaration position of each name, for diagnostics
    positions: dict = field(default_factory=dict)


def _tokens(line: str):
    out = []
    i, n = 0, len(line)
    while i < n:
        if line[i].isspace():
            i += 1
            continue
        if line[i] == "#":
            break
        j = i
        while j < n and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def _expect(toks, shape, lineno):
    """Match tokens against a shape such as ``["mor", None, ":", None, "->", None]``.

    ``None`` slots take a name; returns the names.
    """
    names = []
    for k, want in enumerate(shape):
        if k >= len(toks):
            col = toks[-1][1] + len(toks[-1][0]) if toks else 1
            raise ParseError(f"expected {want or 'a name'!r}, found end of line", lineno, col)
        text, col = toks[k]
        if want is None:
            if text in KEYWORDS or text in (":", "->", ".", "="):
                raise ParseError(f"expected a name, found {text!r}", lineno, col)
            names.append((text, col))
        elif text != want:
            raise ParseError(f"expected {want!r}, found {text!r}", lineno, col)
    if len(toks) > len(shape):
        text, col = toks[len(shape)]
        raise ParseError(f"unexpected {text!r}", lineno, col)
    return names


def parse(text: str) -> FincatDocument:
    name = "C"
    objects: list = []
    morphisms: dict = {}
    identities: dict = {}
    composition: dict = {}
    pos: dict = {}

    def need_object(o, lineno, col):
        if o not in pos or pos[o][0] != "obj":
            raise ParseError(f"unknown object {o!r}", lineno, col)

    def need_morphism(m, lineno, col):
        if m not in morphisms:
            raise ParseError(f"unknown morphism {m!r}", lineno, col)

    def declare(kind, n, lineno, col):
        if n in pos:
            raise ParseError(f"duplicate name {n!r} (first declared on line {pos[n][1]})", lineno, col)
        pos[n] = (kind, lineno)

    seen_category = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        head, hcol = toks[0]
        if head == "category":
            if seen_category:
                raise ParseError("second category header", lineno, hcol)
            ((name, _),) = _expect(toks, ["category", None], lineno)
            seen_category = True
        elif head == "obj":
            ((o, col),) = _expect(toks, ["obj", None], lineno)
            declare("obj", o, lineno, col)
            objects.append(o)
        elif head == "mor":
            (m, mc), (a, ac), (b, bc) = _expect(toks, ["mor", None, ":", None, "->", None], lineno)
            need_object(a, lineno, ac)
            need_object(b, lineno, bc)
            declare("mor", m, lineno, mc)
            morphisms[m] = (a, b)
        elif head == "id":
            (a, ac), (i, ic) = _expect(toks, ["id", None, "=", None], lineno)
            need_object(a, lineno, ac)
            if a in identities:
                raise ParseError(f"identity of {a!r} declared twice", lineno, ac)
            if i in morphisms:
                if morphisms[i] != (a, a):
                    raise ParseError(f"{i!r} is not an endomorphism of {a!r}", lineno, ic)
            else:
                declare("mor", i, lineno, ic)
                morphisms[i] = (a, a)
            identities[a] = i
        elif head == "comp":
            (g, gc), (f, fc), (h, hc) = _expect(toks, ["comp", None, ".", None, "=", None], lineno)
            for m, c in ((g, gc), (f, fc), (h, hc)):
                need_morphism(m, lineno, c)
            if morphisms[g][0] != morphisms[f][1]:
                raise ParseError(f"{g!r} and {f!r} are not composable", lineno, gc)
            if morphisms[h] != (morphisms[f][0], morphisms[g][1]):
                raise ParseError(
                    f"{h!r} does not run {morphisms[f][0]} -> {morphisms[g][1]}", lineno, hc
                )
            if (g, f) in composition and composition[(g, f)] != h:
                raise ParseError(f"conflicting composite for {g} . {f}", lineno, gc)
            composition[(g, f)] = h
        else:
            raise ParseError(f"unknown keyword {head!r}", lineno, hcol)

    for o in objects:
        if o not in identities:
            raise ParseError(f"object {o!r} has no identity", pos[o][1], 1)
    for m, (a, b) in morphisms.items():
        composition.setdefault((identities[b], m), m)
        composition.setdefault((m, identities[a]), m)
    for g, (gb, _) in morphisms.items():
        for f, (_, fc) in morphisms.items():
            if fc == gb and (g, f) not in composition:
                raise ParseError(f"missing composite for the pair {g} . {f}")
    cat = ExplicitCategory(objects, morphisms, identities, composition, name)
    return FincatDocument(name, cat, pos)


def _check_name(x) -> str:
    s = str(x)
    if not s or any(ch.isspace() for ch in s) or s.startswith("#") or s in KEYWORDS:
        raise ValueError(f"{s!r} cannot be written as a .fincat name")
    return s


def render(doc, name: Optional[str] = None) -> str:
    """Text for a document or an explicit category; ``parse`` reads it back
    to an equal category when the ids are strings."""
    if isinstance(doc, FincatDocument):
        cat, name = doc.category, name or doc.name
    else:
        cat = doc
        name = name or cat.name
    if not isinstance(cat, ExplicitCategory):
        raise TypeError("only explicit categories can be rendered")
    lines = [f"category {_check_name(name)}"]
    for o in cat.objects:
        lines.append(f"obj {_check_name(o)}")
    ids = set()
    for o in cat.objects:
        i = cat.identity(o)
        ids.add(i)
        lines.append(f"id {_check_name(o)} = {_check_name(i)}")
    for m, (a, b) in sorted(cat.morphism_table.items(), key=lambda kv: str(kv[0])):
        if m not in ids:
            lines.append(f"mor {_check_name(m)} : {_check_name(a)} -> {_check_name(b)}")
    for (g, f), h in sorted(cat.composition_table.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
        if g in ids or f in ids:
            continue
        lines.append(f"comp {_check_name(g)} . {_check_name(f)} = {_check_name(h)}")
    return "\n".join(lines) + "\n"


def to_explicit(C: FinCategory, name: Optional[str] = None) -> ExplicitCategory:
    """Tabulate any finite category (object and morphism ids become strings)."""
    objs = [C.show_object(a) for a in C.objects]
    if len(set(objs)) != len(objs):
        raise ValueError("object labels are not distinct")
    label = {a: C.show_object(a) for a in C.objects}
    mors = {}
    mname = {}
    for a in C.objects:
        for b in C.objects:
            for k, f in enumerate(C.hom(a, b)):
                n = f"{label[a]}->{label[b]}#{k}".replace(" ", "")
                mname[f] = n
                mors[n] = (label[a], label[b])
    ids = {label[a]: mname[C.identity(a)] for a in C.objects}
    comp = {}
    for g, gn in mname.items():
        for f, fn in mname.items():
            if C.cod(f) == C.dom(g):
                comp[(gn, fn)] = mname[C.compose(g, f)]
    return ExplicitCategory(objs, mors, ids, comp, name or C.name)
