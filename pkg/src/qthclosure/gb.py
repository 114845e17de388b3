"""Gröbner bases, Mora standard bases and P-module bases.

Three regimes are distinguished for a generating set:

``global``  the ordering is a well-ordering; Buchberger's algorithm with
            full reduction.
``graded``  the ordering is not a well-ordering, but every generator is
            homogeneous for a family of gradings whose homogeneous
            components are finite.  Reductions never leave a component, so
            Buchberger still terminates and normal forms are unique.
``local``   anything else; Mora's tangent cone algorithm and weak normal
            forms (correct up to a unit).

The reduction core works on plain term dictionaries so the same code
serves polynomials and vectors of the free P-module P^d.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .linalg import Echelon, axpy
from .poly import (FlatRing, Polynomial, format_poly, mono_div, mono_divides,
                   mono_lcm, mono_mul)

log = logging.getLogger(__name__)


class ResourceLimit(RuntimeError):
    """A configured cap on basis size or reduction work was exceeded."""


class UnsupportedPresentation(ValueError):
    """The quotient ring is not a free P-module on dependent monomials."""


@dataclass
class Limits:
    max_basis: int = 20000
    max_reductions: int = 5_000_000
    max_products: int = 200000


LIMITS = Limits()


# --- monomial structures ----------------------------------------------------

class PolyMonoid:
    """Monomials of a FlatRing (exponent tuples)."""

    def __init__(self, ring: FlatRing):
        self.ring = ring
        self.key = ring.key

    @staticmethod
    def divides(a, b) -> bool:
        return all(x <= y for x, y in zip(a, b))

    @staticmethod
    def quotient(b, a):
        return tuple(y - x for x, y in zip(a, b))

    @staticmethod
    def shift(m, t):
        return tuple(x + y for x, y in zip(m, t))

    @staticmethod
    def lcm(a, b):
        return tuple(max(x, y) for x, y in zip(a, b))

    @staticmethod
    def coprime(a, b) -> bool:
        return all(x == 0 or y == 0 for x, y in zip(a, b))

    @staticmethod
    def degree(m) -> int:
        return sum(m)


class ModuleMonoid:
    """Terms ``(position, x-exponents)`` of P^d, position over term."""

    def __init__(self, pos_rank: Sequence[int], xkey: Callable):
        self.pos_rank = tuple(pos_rank)
        self.xkey = xkey
        self._cache: dict = {}

    def key(self, m):
        k = self._cache.get(m)
        if k is None:
            k = (self.pos_rank[m[0]],) + self.xkey(m[1])
            self._cache[m] = k
        return k

    @staticmethod
    def divides(a, b) -> bool:
        return a[0] == b[0] and all(x <= y for x, y in zip(a[1], b[1]))

    @staticmethod
    def quotient(b, a):
        return tuple(y - x for x, y in zip(a[1], b[1]))

    @staticmethod
    def shift(m, t):
        return (m[0], tuple(x + y for x, y in zip(m[1], t)))

    @staticmethod
    def lcm(a, b):
        if a[0] != b[0]:
            return None
        return (a[0], tuple(max(x, y) for x, y in zip(a[1], b[1])))

    @staticmethod
    def coprime(a, b) -> bool:
        return False

    @staticmethod
    def degree(m) -> int:
        return sum(m[1])


# --- term-dict helpers -------------------------------------------------------

def _lead(f: dict, key):
    return max(f, key=key)


def _monic(f: dict, key, q: int) -> dict:
    lm = _lead(f, key)
    c = f[lm]
    if c == 1:
        return f
    inv = pow(c, -1, q)
    return {m: v * inv % q for m, v in f.items()}


def _shifted(g: dict, t, coeff: int, monoid, q: int) -> dict:
    shift = monoid.shift
    return {shift(m, t): v * coeff % q for m, v in g.items()}


class _Counter:
    __slots__ = ("n", "cap")

    def __init__(self, cap):
        self.n = 0
        self.cap = cap

    def tick(self):
        self.n += 1
        if self.n > self.cap:
            raise ResourceLimit(f"more than {self.cap} reduction steps")


def reduce_full(f: dict, basis: list[tuple], monoid, q: int, counter=None,
                quotients: list | None = None) -> dict:
    """Remainder of f under full division by ``basis`` = [(lm, monic terms)].

    If ``quotients`` is a list of dicts (one per basis element) the
    multipliers are accumulated into it."""
    key = monoid.key
    divides = monoid.divides
    quotient = monoid.quotient
    shift = monoid.shift
    counter = counter or _Counter(LIMITS.max_reductions)
    f = dict(f)
    rem: dict = {}
    while f:
        lm = _lead(f, key)
        c = f[lm]
        for idx, (glm, g) in enumerate(basis):
            if divides(glm, lm):
                counter.tick()
                t = quotient(lm, glm)
                a = q - c
                for m, v in g.items():
                    mm = shift(m, t)
                    w = (f.get(mm, 0) + a * v) % q
                    if w:
                        f[mm] = w
                    else:
                        f.pop(mm, None)
                if quotients is not None:
                    qd = quotients[idx]
                    qd[t] = (qd.get(t, 0) + c) % q
                    if not qd[t]:
                        del qd[t]
                break
        else:
            rem[lm] = c
            del f[lm]
    return rem


def _spoly(f: dict, flm, g: dict, glm, monoid, q: int) -> dict:
    l = monoid.lcm(flm, glm)
    tf = monoid.quotient(l, flm)
    tg = monoid.quotient(l, glm)
    out = _shifted(f, tf, pow(f[flm], -1, q), monoid, q)
    axpy(out, q - pow(g[glm], -1, q), _shifted(g, tg, 1, monoid, q), q)
    return out


def minimal_monomials(monos: Iterable, monoid) -> list:
    """Minimal elements under divisibility, ascending order."""
    key = monoid.key
    deg = monoid.degree
    kept: list = []
    for m in sorted(set(monos), key=lambda m: (deg(m), key(m))):
        if not any(monoid.divides(k, m) for k in kept):
            kept.append(m)
    return sorted(kept, key=key)


def buchberger_terms(gens: Iterable[dict], monoid, q: int,
                     degree: Callable | None = None) -> list[dict]:
    """Reduced Gröbner basis of term dicts, ascending by leading term.

    Pairs are processed lowest lcm first (lowest ``degree`` of the lcm
    first when a positive grading is supplied, which is what makes the
    graded regime finish quickly) with Buchberger's product and chain
    criteria; the input is sorted first so the output does not depend on
    generator order."""
    key = monoid.key
    gens = [_monic(g, key, q) for g in gens if g]
    if not gens:
        return []
    if all(len(g) == 1 for g in gens):
        return [{m: 1} for m in minimal_monomials([next(iter(g)) for g in gens], monoid)]
    gens.sort(key=lambda g: key(_lead(g, key)))
    counter = _Counter(LIMITS.max_reductions)

    G: list[dict] = []
    leads: list = []
    pairs: list = []
    pending: set = set()
    tie = 0

    def push_pairs(j):
        nonlocal tie
        for i in range(j):
            if leads[i] is None:
                continue
            l = monoid.lcm(leads[i], leads[j])
            if l is None:
                continue
            if monoid.coprime(leads[i], leads[j]):
                continue
            tie += 1
            heapq.heappush(pairs, ((degree(l) if degree else 0, key(l)), i, j, l))
            pending.add((i, j))

    def chain_skip(i, j, l):
        for k in range(len(G)):
            if k in (i, j) or leads[k] is None:
                continue
            if not monoid.divides(leads[k], l):
                continue
            if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
                continue
            return True
        return False

    def basis_view():
        return [(leads[k], G[k]) for k in range(len(G)) if leads[k] is not None]

    for g in gens:
        r = reduce_full(g, basis_view(), monoid, q, counter)
        if r:
            r = _monic(r, key, q)
            G.append(r)
            leads.append(_lead(r, key))
            push_pairs(len(G) - 1)
    while pairs:
        _, i, j, l = heapq.heappop(pairs)
        pending.discard((i, j))
        if leads[i] is None or leads[j] is None:
            continue
        if chain_skip(i, j, l):
            continue
        s = _spoly(G[i], leads[i], G[j], leads[j], monoid, q)
        r = reduce_full(s, basis_view(), monoid, q, counter)
        if r:
            r = _monic(r, key, q)
            G.append(r)
            leads.append(_lead(r, key))
            if len(G) > LIMITS.max_basis:
                raise ResourceLimit(f"basis exceeds {LIMITS.max_basis} elements")
            push_pairs(len(G) - 1)
    return _reduce_basis(G, leads, monoid, q, counter)


def _reduce_basis(G, leads, monoid, q, counter) -> list[dict]:
    key = monoid.key
    items = [(l, g) for l, g in zip(leads, G) if l is not None]
    items.sort(key=lambda t: (monoid.degree(t[0]), key(t[0])))
    minimal: list = []
    for l, g in items:
        if not any(monoid.divides(l2, l) for l2, _ in minimal):
            minimal.append((l, g))
    out = []
    for idx, (l, g) in enumerate(minimal):
        others = [t for k, t in enumerate(minimal) if k != idx]
        tail = dict(g)
        c = tail.pop(l)
        r = reduce_full(tail, others, monoid, q, counter)
        r[l] = c
        out.append(_monic(r, key, q))
    out.sort(key=lambda g: key(_lead(g, key)))
    return out


# --- Mora ------------------------------------------------------------------

def _ecart(f: dict, lm) -> int:
    return max(sum(m) for m in f) - sum(lm)


def weak_nf_mora(f: dict, basis: list[tuple], monoid: PolyMonoid, q: int,
                 counter=None) -> dict:
    """Mora's weak normal form: returns h with u*f - h in <basis> for some
    unit u and LM(h) divisible by no basis lead (or h = 0)."""
    key = monoid.key
    counter = counter or _Counter(LIMITS.max_reductions)
    T = [(l, g, _ecart(g, l)) for l, g in basis]
    h = dict(f)
    while h:
        lm = _lead(h, key)
        cands = [(e, k) for k, (l, g, e) in enumerate(T) if mono_divides(l, lm)]
        if not cands:
            break
        counter.tick()
        e, k = min(cands)
        l, g, _ = T[k]
        eh = _ecart(h, lm)
        if e > eh:
            T.append((lm, dict(h), eh))
        h = _spoly(h, lm, g, l, monoid, q)
    return h


def mora_terms(gens: Iterable[dict], monoid: PolyMonoid, q: int) -> list[dict]:
    """Minimal standard basis (monic, ascending) via Mora's algorithm."""
    key = monoid.key
    one = tuple(0 for _ in monoid.ring.variables)
    S = []
    for g in gens:
        if g:
            g = _monic(g, key, q)
            S.append((_lead(g, key), g))
    S.sort(key=lambda t: key(t[0]))
    if any(l == one for l, _ in S):
        return [{one: 1}]
    counter = _Counter(LIMITS.max_reductions)
    pairs = []
    for j in range(len(S)):
        for i in range(j):
            l = mono_lcm(S[i][0], S[j][0])
            heapq.heappush(pairs, (key(l), i, j))
    while pairs:
        _, i, j = heapq.heappop(pairs)
        s = _spoly(S[i][1], S[i][0], S[j][1], S[j][0], monoid, q)
        h = weak_nf_mora(s, S, monoid, q, counter)
        if h:
            h = _monic(h, key, q)
            hl = _lead(h, key)
            if hl == one:
                return [{one: 1}]
            S.append((hl, h))
            if len(S) > LIMITS.max_basis:
                raise ResourceLimit(f"basis exceeds {LIMITS.max_basis} elements")
            j = len(S) - 1
            for i in range(j):
                heapq.heappush(pairs, (key(mono_lcm(S[i][0], hl)), i, j))
    S.sort(key=lambda t: (sum(t[0]), key(t[0])))
    minimal = []
    for l, g in S:
        if not any(mono_divides(l2, l) for l2, _ in minimal):
            minimal.append((l, g))
    minimal.sort(key=lambda t: key(t[0]))
    return [g for _, g in minimal]


# --- gradings ---------------------------------------------------------------

def _homogeneous(terms: Iterable, grading: Sequence[int]) -> bool:
    vals = {sum(w * e for w, e in zip(grading, m)) for m in terms}
    return len(vals) <= 1


def finite_components(gradings: Sequence[Sequence[int]], n: int) -> bool:
    """True iff the only e in N^n of degree zero for every grading is 0."""
    if not gradings:
        return False
    import numpy as np
    from scipy.optimize import linprog

    A = np.array(gradings, dtype=float)
    res = linprog(-np.ones(n), A_eq=A, b_eq=np.zeros(len(gradings)),
                  bounds=[(0, 1)] * n, method="highs")
    return res.status == 0 and -res.fun < 1e-9


def homogeneous_gradings(ring: FlatRing, polys: Iterable[Polynomial]) -> list[tuple[int, ...]]:
    polys = list(polys)
    cands = list(ring.rows) + list(ring.gradings)
    return [g for g in cands if all(_homogeneous(p.terms, g) for p in polys)]


def positive_grading(gradings: Sequence[Sequence[int]], n: int) -> tuple[int, ...] | None:
    """An integer combination of the gradings with every weight >= 1, if
    one exists (it does whenever the graded components are finite)."""
    if not gradings:
        return None
    import numpy as np
    from scipy.optimize import linprog

    A = np.array(gradings, dtype=float)
    m = len(gradings)
    # maximise nothing; require A^T lam >= 1
    res = linprog(np.zeros(m), A_ub=-A.T, b_ub=-np.ones(n),
                  bounds=[(None, None)] * m, method="highs")
    if res.status != 0:
        return None
    lam = [Fraction(x).limit_denominator(1000) for x in res.x]
    w = [sum(l * g[i] for l, g in zip(lam, gradings)) for i in range(n)]
    if any(x <= 0 for x in w):
        return None
    den = 1
    for x in w:
        den = den * x.denominator // gcd(den, x.denominator)
    return tuple(int(x * den) for x in w)


def _support(polys: Sequence[Polynomial], n: int) -> list[int]:
    used = [False] * n
    for p in polys:
        for m in p.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
    return [i for i in range(n) if used[i]]


def regime(ring: FlatRing, polys: Iterable[Polynomial]) -> str:
    """'global', 'graded' or 'local'.  Only the variables that occur
    matter: every S-polynomial and reduction stays inside them."""
    if ring.order_kind == "global":
        return "global"
    polys = list(polys)
    cols = _support(polys, ring.nvars)
    if not cols:
        return "graded"
    grads = [[g[i] for i in cols] for g in homogeneous_gradings(ring, polys)]
    if finite_components(grads, len(cols)):
        return "graded"
    return "local"


def _pair_degree(ring: FlatRing, polys: Sequence[Polynomial]):
    cols = _support(polys, ring.nvars)
    grads = [[g[i] for i in cols] for g in homogeneous_gradings(ring, polys)]
    w = positive_grading(grads, len(cols))
    if w is None:
        return None
    full = [0] * ring.nvars
    for i, wi in zip(cols, w):
        full[i] = wi
    return lambda m: sum(a * b for a, b in zip(full, m))


# --- polynomial bases --------------------------------------------------------

@dataclass
class Basis:
    ring: FlatRing
    generators: list[Polynomial]
    reduced: bool
    kind: str  # global | graded | local

    def __post_init__(self):
        self._view = [(g.lm(), g.terms) for g in self.generators]

    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [l for l, _ in self._view]

    def is_unit_ideal(self) -> bool:
        return any(sum(l) == 0 for l in self.leading_monomials())

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __str__(self):
        return "\n".join(format_poly(g) for g in self.generators)


def _to_polys(ring, dicts) -> list[Polynomial]:
    return [Polynomial(ring, d, _clean=True) for d in dicts]


def _common_ring(gens: Sequence[Polynomial], ring: FlatRing | None) -> FlatRing:
    if ring is None:
        if not gens:
            raise ValueError("empty generator list needs an explicit ring")
        ring = gens[0].ring
    for g in gens:
        if g.ring is not ring:
            raise ValueError("generators from different rings")
    return ring


def buchberger(gens: Sequence[Polynomial], ring: FlatRing | None = None) -> Basis:
    """Reduced Gröbner basis.  Requires a global ordering or homogeneous
    input with finite graded components."""
    ring = _common_ring(gens, ring)
    kind = regime(ring, gens)
    if kind == "local":
        raise ValueError("ordering is not global and input is not graded; use standard_basis")
    degree = _pair_degree(ring, gens) if kind == "graded" else None
    out = buchberger_terms([g.terms for g in gens], PolyMonoid(ring), ring.q, degree)
    return Basis(ring, _to_polys(ring, out), True, kind)


def standard_basis(gens: Sequence[Polynomial], ring: FlatRing | None = None) -> Basis:
    """Standard basis by Mora's tangent cone algorithm (any ordering)."""
    ring = _common_ring(gens, ring)
    out = mora_terms([g.terms for g in gens], PolyMonoid(ring), ring.q)
    return Basis(ring, _to_polys(ring, out), False, "local")


def basis(gens: Sequence[Polynomial], ring: FlatRing | None = None) -> Basis:
    """Buchberger where it is valid, Mora otherwise."""
    ring = _common_ring(gens, ring)
    if regime(ring, gens) == "local":
        return standard_basis(gens, ring)
    return buchberger(gens, ring)


@dataclass
class Reduction:
    """Outcome of a normal-form computation.

    ``quotients`` (global/graded only) satisfy f = sum q_i*b_i + remainder;
    ``weak`` marks a Mora result, valid up to a unit factor."""

    remainder: Polynomial
    quotients: list[Polynomial] | None
    weak: bool

    def replay(self, B: Basis) -> Polynomial:
        total = self.remainder
        for qi, g in zip(self.quotients or [], B.generators):
            total = total + qi * g
        return total


def reduce(f: Polynomial, B: Basis) -> Reduction:
    ring = B.ring
    if f.ring is not ring:
        raise ValueError("polynomial and basis from different rings")
    monoid = PolyMonoid(ring)
    if B.kind == "local":
        h = weak_nf_mora(f.terms, B._view, monoid, ring.q)
        return Reduction(Polynomial(ring, h, _clean=True), None, True)
    quots = [dict() for _ in B.generators]
    r = reduce_full(f.terms, B._view, monoid, ring.q, quotients=quots)
    return Reduction(Polynomial(ring, r, _clean=True),
                     [Polynomial(ring, qd, _clean=True) for qd in quots], False)


def normal_form(f: Polynomial, B: Basis) -> Polynomial:
    return reduce(f, B).remainder


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    monoid = PolyMonoid(f.ring)
    return Polynomial(f.ring, _spoly(f.terms, f.lm(), g.terms, g.lm(), monoid, f.ring.q),
                      _clean=True)


def unreduced_pairs(B: Basis) -> list[tuple[int, int]]:
    """Index pairs whose S-polynomial does not reduce to zero; empty for
    a Gröbner (or standard) basis."""
    gens = B.generators
    bad = []
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if normal_form(s_polynomial(gens[i], gens[j]), B):
                bad.append((i, j))
    return bad


def truncated_normal_form(f: Polynomial, B: Basis, bound: int,
                          degree: Callable[[tuple], int]) -> Polynomial:
    """Full reduction that discards every term of ``degree >= bound``.

    For a local ordering this is the normal form in the completion taken
    modulo the bound; it is F_q-linear in f."""
    ring = f.ring
    q = ring.q
    key = ring.key
    view = B._view
    counter = _Counter(LIMITS.max_reductions)
    todo = {m: c for m, c in f.terms.items() if degree(m) < bound}
    rem: dict = {}
    while todo:
        lm = max(todo, key=key)
        c = todo.pop(lm)
        for glm, g in view:
            if mono_divides(glm, lm):
                counter.tick()
                t = mono_div(lm, glm)
                a = (q - c) * pow(g[glm], -1, q) % q
                for m, v in g.items():
                    if m == glm:
                        continue
                    mm = mono_mul(m, t)
                    if degree(mm) >= bound:
                        continue
                    w = (todo.get(mm, 0) + a * v) % q
                    if w:
                        todo[mm] = w
                    else:
                        todo.pop(mm, None)
                break
        else:
            rem[lm] = c
    return Polynomial(ring, rem, _clean=True)


def homogenize(gens: Sequence[Polynomial], h: str) -> list[Polynomial]:
    """Homogenize to the first-row weight degree with powers of ``h``."""
    if not gens:
        return []
    ring = gens[0].ring
    if h not in ring.index:
        raise ValueError(f"{h} is not a ring variable")
    hi = ring.index[h]
    row = ring.rows[0]
    if row[hi] != 1:
        raise ValueError(f"{h} must have weight 1 in the first row")
    out = []
    for g in gens:
        if any(m[hi] for m in g.terms):
            raise ValueError(f"{h} is not fresh: it occurs in {format_poly(g)}")
        if g.is_zero():
            out.append(g)
            continue
        ws = {m: sum(w * e for w, e in zip(row, m)) for m in g.terms}
        top = max(ws.values())
        terms = {}
        for m, c in g.terms.items():
            mm = list(m)
            mm[hi] += top - ws[m]
            terms[tuple(mm)] = c
        out.append(Polynomial(ring, terms, _clean=True))
    return out


# --- presentations and P-modules ------------------------------------------

class RingPresentation:
    """Ā = F_q[y; x]/J, free over P = F_q[x] on the standard monomials Y."""

    def __init__(self, ring: FlatRing, relations: Sequence[Polynomial] = ()):
        self.ring = ring
        self.relations = [r for r in relations if not r.is_zero()]
        self.J = basis(self.relations, ring) if self.relations else Basis(ring, [], True, "global")
        ndep = len(ring.dependent_vars)
        for l in self.J.leading_monomials():
            if any(l[ndep:]) or not any(l[:ndep]):
                raise UnsupportedPresentation(
                    f"leading monomial {l} of J is not a pure dependent monomial")
        self.Y = self._standard_monomials()
        self.d = len(self.Y)
        self.pos = {y: i for i, y in enumerate(self.Y)}
        nind = len(ring.independent_vars)
        self._yzero = (0,) * ndep
        self._azero = (0,) * len(ring.aux_vars)
        self.module_monoid = ModuleMonoid(range(self.d), self._xkey)
        self._ndep, self._nind = ndep, nind

    def _standard_monomials(self) -> list[tuple]:
        ring = self.ring
        ndep = len(ring.dependent_vars)
        leads = [l[:ndep] for l in self.J.leading_monomials()]
        bound = []
        for i in range(ndep):
            pure = [l[i] for l in leads if all(e == 0 for k, e in enumerate(l) if k != i)]
            if not pure:
                raise UnsupportedPresentation(
                    f"dependent variable {ring.dependent_vars[i]} is not integral over P")
            bound.append(min(pure))
        import itertools
        Y = []
        for e in itertools.product(*[range(b) for b in bound]):
            if not any(mono_divides(l, e) for l in leads):
                Y.append(e)
        full = [e + (0,) * (ring.nvars - ndep) for e in Y]
        full.sort(key=ring.key)
        return [e[:ndep] for e in full]

    def _xkey(self, x):
        return self.ring.key(self._yzero + x + self._azero)

    @property
    def kind(self) -> str:
        return self.J.kind

    def nf(self, f: Polynomial, bound: int | None = None) -> Polynomial:
        if bound is not None:
            return truncated_normal_form(f, self.J, bound, self.local_degree)
        if self.J.kind == "local" and len(self.J):
            raise ValueError("exact normal forms need a global or graded presentation")
        return normal_form(f, self.J)

    def local_degree(self, m) -> int:
        return sum(m[self._ndep:self._ndep + self._nind])

    def to_vector(self, f: Polynomial) -> dict:
        ndep, nind = self._ndep, self._nind
        out = {}
        for m, c in f.terms.items():
            if any(m[ndep + nind:]):
                raise UnsupportedPresentation("auxiliary variable in an element of Ā")
            p = self.pos.get(m[:ndep])
            if p is None:
                raise UnsupportedPresentation(
                    f"term {m} is not supported on the standard monomials")
            out[(p, m[ndep:ndep + nind])] = c
        return out

    def from_vector(self, v: dict) -> Polynomial:
        return Polynomial(self.ring,
                          {self.Y[p] + x + self._azero: c for (p, x), c in v.items()},
                          _clean=True)

    def is_graded_with(self, polys: Iterable[Polynomial]) -> bool:
        if self.ring.order_kind == "global":
            return True
        allp = list(self.relations) + list(polys)
        return finite_components(homogeneous_gradings(self.ring, allp), self.ring.nvars)


class PModule:
    """P-span of finitely many elements of Ā.

    ``bound=None`` is the exact mode (module Gröbner basis, position over
    term).  With an integer ``bound`` the module is represented modulo
    the bound-th power of the maximal ideal of P, as an F_q-subspace."""

    def __init__(self, presentation: RingPresentation, generators: Iterable[Polynomial],
                 bound: int | None = None):
        self.presentation = presentation
        self.bound = bound
        seen = set()
        gens = []
        for g in generators:
            g = presentation.nf(g, bound)
            if g.is_zero() or g in seen:
                continue
            seen.add(g)
            gens.append(g)
        self.generators = gens
        self._gb: list[dict] | None = None
        self._ech: Echelon | None = None

    # exact mode
    def gb_vectors(self) -> list[dict]:
        if self._gb is None:
            pr = self.presentation
            vecs = [pr.to_vector(g) for g in self.generators]
            self._gb = buchberger_terms(vecs, pr.module_monoid, pr.ring.q)
        return self._gb

    # truncated mode
    def echelon(self) -> Echelon:
        if self._ech is None:
            pr = self.presentation
            mon = pr.module_monoid
            ech = Echelon(pr.ring.q, mon.key)
            nind = pr._nind
            for g in self.generators:
                v = pr.to_vector(g)
                low = min(sum(x) for _, x in v)
                for t in _monomials_below(nind, self.bound - low):
                    w = {(p, mono_mul(x, t)): c for (p, x), c in v.items()
                         if sum(x) + sum(t) < self.bound}
                    if w:
                        ech.add(w)
            self._ech = ech
        return self._ech

    def basis_vectors(self) -> list[dict]:
        if self.bound is None:
            return self.gb_vectors()
        return self.echelon().basis()

    def basis_elements(self) -> list[Polynomial]:
        pr = self.presentation
        return [pr.from_vector(v) for v in self.basis_vectors()]

    def leading_terms(self) -> list:
        key = self.presentation.module_monoid.key
        return [_lead(v, key) for v in self.basis_vectors()]

    def reduce_vector(self, v: dict, quotients=None) -> dict:
        pr = self.presentation
        if self.bound is None:
            key = pr.module_monoid.key
            view = [(_lead(g, key), g) for g in self.gb_vectors()]
            return reduce_full(v, view, pr.module_monoid, pr.ring.q, quotients=quotients)
        v = {k: c for k, c in v.items() if sum(k[1]) < self.bound}
        return self.echelon().reduce(v)[0]

    def contains(self, f: Polynomial) -> bool:
        f = self.presentation.nf(f, self.bound)
        return not self.reduce_vector(self.presentation.to_vector(f))

    def contains_module(self, other: "PModule") -> bool:
        return all(self.contains(g) for g in other.generators)

    def __eq__(self, other):
        if not isinstance(other, PModule):
            return NotImplemented
        return self.contains_module(other) and other.contains_module(self)

    __hash__ = None

    def __len__(self):
        return len(self.generators)


def _monomials_below(n: int, bound: int):
    """Exponent vectors of length n with total degree < bound."""
    if bound <= 0:
        return
    if n == 0:
        yield ()
        return
    for e in range(bound):
        for rest in _monomials_below(n - 1, bound - e):
            yield (e,) + rest


def module_gb(M: PModule) -> PModule:
    """Same module, generators replaced by its (reduced) basis."""
    out = PModule(M.presentation, [], M.bound)
    out.generators = M.basis_elements()
    out._gb, out._ech = M._gb, M._ech
    return out


def module_member(f: Polynomial, M: PModule) -> tuple[bool, list[Polynomial] | None]:
    """Decide f in M; on success return coefficients c with
    f = sum c_i * b_i over the basis elements b_i of M (in the truncated
    mode the coefficients are scalars and equality holds modulo the bound)."""
    pr = M.presentation
    ring = pr.ring
    f = pr.nf(f, M.bound)
    v = pr.to_vector(f)
    if M.bound is None:
        gbv = M.gb_vectors()
        quots = [dict() for _ in gbv]
        r = M.reduce_vector(v, quotients=quots)
        if r:
            return False, None
        zero_y = pr._yzero
        coeffs = [Polynomial(ring, {zero_y + t + pr._azero: c for t, c in qd.items()}, _clean=True)
                  for qd in quots]
        return True, coeffs
    ech = M.echelon()
    v = {k: c for k, c in v.items() if sum(k[1]) < M.bound}
    r, _ = ech.reduce(v)
    if r:
        return False, None
    basis = ech.basis()
    key = pr.module_monoid.key
    # recover scalars: with a reduced echelon form, the coefficient of a
    # row is the entry of v at that row's pivot
    coeffs = [ring.constant(v.get(_lead(row, key), 0)) for row in basis]
    return True, coeffs
