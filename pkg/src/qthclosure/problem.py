"""Problem files.

A problem file is UTF-8 text; ``#`` starts a comment.  Sections come in
this order, each introduced by a keyword on its own line (or followed by
its value on the same line)::

    field 2
    vars x31 x20            # independent variables (P = F_q[vars])
    dependent y             # optional
    order local             # global | local
    weights                 # optional; columns: dependent, then vars
    9 3 2
    0 1 0
    relations               # optional; one polynomial per line
    y^2 + x20^9 + y*x31^3
    ideal
    x31*x20
    x20^3
    x31^2
    map                     # optional: x -> polynomial, for --poly input
    homogenize h            # optional: homogenize the ideal with h
    qexp 1                  # optional default exponent e (Q = q^e)
    end

Under ``order local`` every weight row is local; without ``weights`` the
single row of ones is used.  A ``map`` section lets ``--poly`` arguments
be written in the variables of an original ring; they are substituted
before any computation.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field

from .gb import RingPresentation, homogenize
from .poly import FlatRing, Polynomial, PolySyntaxError, parse_poly, validate_weights
from .qthpower import Ideal, Setting

SECTIONS = ("field", "vars", "dependent", "order", "weights", "relations",
            "ideal", "map", "homogenize", "qexp", "end")
_MULTI = {"weights", "relations", "ideal", "map"}
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class ProblemError(ValueError):
    """Malformed problem file; carries the line number."""

    def __init__(self, path: str, line: int, msg: str):
        super().__init__(f"{path}:{line}: {msg}")
        self.line = line


@dataclass
class Problem:
    path: str
    ring: FlatRing
    presentation: RingPresentation
    generators: list[Polynomial]
    order: str
    qexp: int | None = None
    map: dict[str, Polynomial] = field(default_factory=dict)
    source_ring: FlatRing | None = None
    notes: list[str] = field(default_factory=list)

    def poly(self, text: str) -> Polynomial:
        """Read a polynomial given on the command line.  With a ``map``
        section, the original variables are tried first."""
        if self.source_ring is not None:
            try:
                f = parse_poly(text, self.source_ring)
            except PolySyntaxError:
                pass
            else:
                return self.substitute(f)
        return parse_poly(text, self.ring)

    def substitute(self, f: Polynomial) -> Polynomial:
        ring = self.ring
        out = ring.zero()
        images = [self.map[v] for v in f.ring.variables]
        for m, c in f.terms.items():
            t = ring.constant(c)
            for img, e in zip(images, m):
                if e:
                    t = t * img ** e
            out = out + t
        return out

    def ideal(self, setting: Setting) -> Ideal:
        return Ideal(setting, self.generators)


def _tokens(path: str, text: str):
    """Yield (line number, keyword or None, rest) for non-blank lines."""
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head in SECTIONS:
            yield n, head, rest.strip()
        else:
            yield n, None, line


def parse_problem(text: str, path: str = "<string>") -> Problem:
    values: dict[str, tuple[int, str]] = {}
    bodies: dict[str, list[tuple[int, str]]] = {}
    current = None
    last = -1
    for n, kw, rest in _tokens(path, text):
        if kw is None:
            if current not in _MULTI:
                raise ProblemError(path, n, f"unexpected line {rest!r}")
            bodies[current].append((n, rest))
            continue
        if kw in values or kw in bodies:
            raise ProblemError(path, n, f"section {kw!r} repeated")
        if SECTIONS.index(kw) < last:
            raise ProblemError(path, n, f"section {kw!r} out of order")
        last = SECTIONS.index(kw)
        current = kw
        if kw in _MULTI:
            bodies[kw] = [(n, rest)] if rest else []
        else:
            values[kw] = (n, rest)
        if kw == "end":
            break
    for kw in ("field", "vars", "order", "ideal", "end"):
        if kw not in values and kw not in bodies:
            raise ProblemError(path, 0, f"missing section {kw!r}")

    n, v = values["field"]
    try:
        q = int(v)
    except ValueError:
        raise ProblemError(path, n, f"field size {v!r} is not an integer") from None
    indep = values["vars"][1].split()
    dep = values.get("dependent", (0, ""))[1].split()
    for name in indep + dep:
        if not _NAME.match(name):
            raise ProblemError(path, values["vars"][0], f"bad variable name {name!r}")
    n, order = values["order"]
    if order not in ("global", "local"):
        raise ProblemError(path, n, f"order must be global or local, not {order!r}")
    nv = len(dep) + len(indep)
    rows = []
    for n, line in bodies.get("weights", []):
        try:
            row = tuple(int(w) for w in line.split())
        except ValueError:
            raise ProblemError(path, n, "weights must be integers") from None
        if len(row) != nv:
            raise ProblemError(path, n, f"weight row has {len(row)} entries, expected {nv}")
        rows.append(row)
    if not rows:
        rows = [(1,) * nv]
    try:
        ring = FlatRing(q, tuple(dep), tuple(indep), rows=tuple(rows),
                        local_rows=tuple(order == "local" for _ in rows),
                        naming_rows=len(rows) if bodies.get("weights") else None)
    except ValueError as exc:
        raise ProblemError(path, values["field"][0], str(exc)) from None

    def polys(section):
        out = []
        for n, line in bodies.get(section, []):
            try:
                out.append(parse_poly(line, ring))
            except PolySyntaxError as exc:
                raise ProblemError(path, n, str(exc)) from None
        return out

    relations = polys("relations")
    gens = polys("ideal")
    if not gens:
        raise ProblemError(path, values.get("end", (0,))[0], "the ideal has no generators")

    notes = []
    if bodies.get("weights"):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for r in range(len(rows)):
                rep = validate_weights(ring, relations, row=r)
                if not rep.ok:
                    notes.append(f"weight row {r}: multiplicative={rep.is_multiplicative} "
                                 f"order-compatible={rep.is_order_compatible} "
                                 f"balanced={rep.relation_balance}")
    for note in notes:
        warnings.warn(f"{path}: {note}", stacklevel=2)

    if "homogenize" in values:
        n, h = values["homogenize"]
        try:
            gens = homogenize(gens, h)
        except ValueError as exc:
            raise ProblemError(path, n, str(exc)) from None

    qexp = None
    if "qexp" in values:
        n, v = values["qexp"]
        if not v.isdigit() or int(v) < 1:
            raise ProblemError(path, n, f"qexp must be a positive integer, not {v!r}")
        qexp = int(v)

    mapping: dict[str, Polynomial] = {}
    source = None
    if "map" in bodies:
        names = []
        for n, line in bodies["map"]:
            lhs, arrow, rhs = line.partition("->")
            lhs = lhs.strip()
            if not arrow or not _NAME.match(lhs):
                raise ProblemError(path, n, "map lines read 'name -> polynomial'")
            if lhs in ring.index:
                raise ProblemError(path, n, f"mapped name {lhs!r} clashes with a ring variable")
            try:
                mapping[lhs] = parse_poly(rhs.strip(), ring)
            except PolySyntaxError as exc:
                raise ProblemError(path, n, str(exc)) from None
            names.append(lhs)
        source = FlatRing(q, (), tuple(names))

    presentation = RingPresentation(ring, relations)
    return Problem(path, ring, presentation, gens, order, qexp, mapping, source, notes)


def load_problem(path: str) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read(), path)
