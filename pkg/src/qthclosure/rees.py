"""Non-homogeneous Rees presentations and the membership test.

The ring Ā is extended by one variable G per registered generator g and by
``s``, which stands in for t^(-1).  A generator of level k contributes the
relation g - G*s^k.  Every relation is homogeneous for the t-grading
(G of level k has degree k, s has degree -1, Ā has degree 0), so the
computation runs with s set to 1 and a local first weight row that gives
each G its level; s is put back on each term as s^(level-weighted
G-degree).  This is the s-saturated presentation: no relation carries a
spurious power of s as a factor.

The normal form of an element f of Ā then exhibits the highest power of I
whose closure contains f as the power of s dividing it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .gb import Basis, RingPresentation, basis, normal_form, reduce, regime
from .poly import FlatRing, Polynomial, format_poly
from .qthpower import Ideal, minimalize

S_NAME = "s"

# Tie-break on the G block, applied after the level row and the weight
# rows.
G_ORDERS = ("count", "count-local", "none")


@dataclass(frozen=True)
class GVar:
    name: str
    level: int
    source: Polynomial  # element of the base ring


def _weights(f: Polynomial, row: Sequence[int], nb: int) -> int:
    return min(sum(w * e for w, e in zip(row, m[:nb])) for m in f.terms)


def _extend_ring(base: FlatRing, gvars: Sequence[GVar], g_order: str) -> FlatRing:
    if base.aux_vars:
        raise ValueError("base ring already has auxiliary variables")
    if g_order not in G_ORDERS:
        raise ValueError(f"unknown G order {g_order!r}; choose from {G_ORDERS}")
    nb = base.nvars
    ng = len(gvars)

    def row(base_part, g_part, s_part=0):
        return tuple(base_part) + tuple(g_part) + (s_part,)

    rows = [row([0] * nb, [g.level for g in gvars])]
    local = [True]
    for r, loc in zip(base.rows, base.local_rows):
        rows.append(row(r, [_weights(g.source, r, nb) for g in gvars]))
        local.append(loc)
    # at equal total weight, prefer the term whose weight sits in G
    for r, loc in zip(base.rows, base.local_rows):
        rows.append(row(r, [0] * ng))
        local.append(loc)
    if g_order != "none":
        rows.append(row([0] * nb, [1] * ng))
        local.append(g_order == "count-local")

    grads = [row([0] * nb, [0] * ng, 1)]
    for r in list(base.rows) + list(base.gradings):
        if all(_homogeneous_source(g.source, r, nb) for g in gvars):
            grads.append(row(r, [_weights(g.source, r, nb) for g in gvars]))
    return FlatRing(base.q, base.dependent_vars, base.independent_vars,
                    tuple(g.name for g in gvars) + (S_NAME,),
                    rows=tuple(rows), local_rows=tuple(local), gradings=tuple(grads),
                    naming_rows=base.naming_rows)


def _homogeneous_source(f: Polynomial, r, nb) -> bool:
    return len({sum(w * e for w, e in zip(r, m[:nb])) for m in f.terms}) == 1


def embed(f: Polynomial, ring: FlatRing) -> Polynomial:
    """Copy an element of the base ring into an extension ring."""
    pad = ring.nvars - f.ring.nvars
    if f.ring.variables != ring.variables[:f.ring.nvars]:
        raise ValueError("not an element of the base ring")
    return Polynomial(ring, {m + (0,) * pad: c for m, c in f.terms.items()}, _clean=True)


def canonical(f: Polynomial) -> frozenset:
    """Ring-independent identity of a polynomial: its terms keyed by
    variable names."""
    names = f.ring.variables
    return frozenset((tuple((v, e) for v, e in zip(names, m) if e), c)
                     for m, c in f.terms.items())


@dataclass
class ReesPresentation:
    """``relations`` is the reduced basis computed with s = 1; the
    methods ending in ``_with_s`` restore the powers of s."""

    base: RingPresentation
    ring: FlatRing
    levels: list[tuple[int, list[GVar]]]
    relations: Basis
    g_order: str = "count"
    complete: bool = False
    history: list[list[Polynomial]] = field(default_factory=list)

    @property
    def gvars(self) -> list[GVar]:
        return [g for _, gs in self.levels for g in gs]

    @property
    def level_weight(self) -> dict[str, int]:
        return {g.name: g.level for g in self.gvars}

    def embed(self, f: Polynomial) -> Polynomial:
        return embed(f, self.ring)

    def t_weight(self, m: Sequence[int]) -> int:
        """Level-weighted G-degree of a monomial."""
        nb = self.base.ring.nvars
        return sum(g.level * e for g, e in zip(self.gvars, m[nb:]))

    def with_s(self, f: Polynomial) -> Polynomial:
        """Attach s^(level-weighted G-degree) to every term of an s-free f."""
        si = self.ring.index[S_NAME]
        out = {}
        for m, c in f.terms.items():
            if m[si]:
                raise ValueError("element already carries s")
            out[m[:si] + (self.t_weight(m),) + m[si + 1:]] = c
        return Polynomial(self.ring, out, _clean=True)

    def lift(self, f: Polynomial) -> Polynomial:
        """Move a relation of an earlier level's ring into this ring."""
        if f.ring is self.ring:
            return f
        idx = [self.ring.index[v] for v in f.ring.variables]
        out = {}
        for m, c in f.terms.items():
            e = [0] * self.ring.nvars
            for i, a in zip(idx, m):
                e[i] = a
            out[tuple(e)] = c
        return Polynomial(self.ring, out, _clean=True)

    def without_s(self, f: Polynomial) -> Polynomial:
        si = self.ring.index[S_NAME]
        out: dict = {}
        q = self.ring.q
        for m, c in f.terms.items():
            m2 = m[:si] + (0,) + m[si + 1:]
            out[m2] = (out.get(m2, 0) + c) % q
        return Polynomial(self.ring, out)

    def defining_relations(self) -> list[Polynomial]:
        return [self.embed(g.source) - self.ring.gen(g.name) for g in self.gvars]

    def relation_with_s(self, r: Polynomial) -> Polynomial:
        """A relation of t-degree d gets s^(weight - d) on each term, d
        the least weight among its terms, so s does not divide it."""
        r = self.lift(r)
        f = self.with_s(r)
        si = self.ring.index[S_NAME]
        low = min((m[si] for m in f.terms), default=0)
        return Polynomial(self.ring, {m[:si] + (m[si] - low,) + m[si + 1:]: c
                                      for m, c in f.terms.items()}, _clean=True)

    def relations_with_s(self) -> list[Polynomial]:
        return [self.relation_with_s(r) for r in self.relations]

    def evaluate(self, f: Polynomial) -> Polynomial:
        """Substitute s -> 1 and G -> its source; the result lies in Ā's
        ambient polynomial ring."""
        br = self.base.ring
        nb = br.nvars
        subs = [g.source for g in self.gvars]
        out = br.zero()
        for m, c in f.terms.items():
            t = Polynomial(br, {m[:nb]: c}, _clean=True)
            for e, src in zip(m[nb:nb + len(subs)], subs):
                if e:
                    t = t * src ** e
            out = out + t
        return out

    def is_sound(self) -> bool:
        """Every relation evaluates into J."""
        J = self.base.J
        for r in self.relations:
            v = self.evaluate(r)
            if v and (not len(J) or normal_form(v, J)):
                return False
        return True

    def level_lists(self) -> list[list[Polynomial]]:
        """Relations (s = 1) new at each level; level 0 is rees(I)."""
        out, prev = [], set()
        for snap in self.history:
            out.append([r for r in snap if canonical(r) not in prev])
            prev = {canonical(r) for r in snap}
        return out

    def report(self, suppress_s: bool = True) -> str:
        lines = []
        for k, new in enumerate(self.level_lists()):
            lines.append(f"relations level {k}")
            for r in new:
                lines.append("  " + format_poly(r if suppress_s else self.relation_with_s(r)))
        lines.append(f"complete: {'yes' if self.complete else 'no (lower bounds only)'}")
        return "\n".join(lines)


def _name(f: Polynomial, level: int, idx: int, base: FlatRing, taken: set) -> str:
    nrows = base.naming_rows if base.naming_rows is not None else 0
    nb = base.nvars
    if nrows:
        ws = [_weights(f.monic(), base.rows[i], nb) for i in range(min(nrows, len(base.rows)))]
        name = "G" + "_".join(["", *map(str, ws)])
    else:
        name = f"G_{level}_{idx}"
    if name in taken or name in base.variables or name == S_NAME:
        j = 1
        while f"{name}_{j}" in taken:
            j += 1
        name = f"{name}_{j}"
    taken.add(name)
    return name


def _relation_basis(base: RingPresentation, ring: FlatRing,
                    defining: list[Polynomial]) -> Basis:
    # A unit generator: 1 - G (that is 1 - G*s) alone is a standard basis
    # under the local level row; Mora would rescale it to 1 and lose G.
    nb = base.ring.nvars
    for d in defining:
        if all(not any(m[:nb]) for m in d.terms):
            return Basis(ring, [d], True, "local")
    rels_J = [embed(r, ring) for r in base.J.generators]
    allp = rels_J + defining
    if regime(ring, allp) != "local" or not rels_J:
        return basis(allp, ring)
    # When no defining relation involves a variable of J's leading
    # monomials, every S-pair between the two parts has coprime leading
    # monomials, so the union of the two bases is a standard basis.
    lead_vars = {i for g in rels_J for i, e in enumerate(g.lm()) if e}
    split = all(not m[i] for d in defining for m in d.terms for i in lead_vars)
    if split and regime(ring, defining) != "local":
        rest = basis(defining, ring)
        return Basis(ring, rels_J + rest.generators, False, "local")
    return basis(allp, ring)


def _rebuild(base: RingPresentation, levels, g_order: str, history, complete=False):
    gvars = [g for _, gs in levels for g in gs]
    ring = _extend_ring(base.ring, gvars, g_order)
    B = _relation_basis(base, ring, [embed(g.source, ring) - ring.gen(g.name) for g in gvars])
    rp = ReesPresentation(base, ring, levels, B, g_order, complete, list(history))
    rp.history.append(sorted(B.generators, key=lambda f: ring.key(f.lm())))
    return rp


def _register(base: RingPresentation, gens: Iterable[Polynomial], level: int, taken: set):
    out = []
    for i, g in enumerate(gens):
        g = g.monic()
        out.append(GVar(_name(g, level, i, base.ring, taken), level, g))
    return out


def build_rees(I: Ideal, g_order: str = "count") -> ReesPresentation:
    """rees(I): one G per minimal generator of I, at level 1."""
    base = I.presentation
    gens = minimalize(I).generators
    taken: set = set()
    levels = [(1, _register(base, gens, 1, taken))]
    return _rebuild(base, levels, g_order, [])


def extend_rees(rp: ReesPresentation, I: Ideal, closures: Sequence[Ideal],
                complete: bool = False) -> ReesPresentation:
    """Add, level by level, generators of C(I^k) outside C(I^(k-1))·C(I)
    (for k = 1: outside I).  ``closures[k-1]`` is C(I^k)."""
    taken = {g.name for g in rp.gvars}
    levels = [(k, list(gs)) for k, gs in rp.levels]
    history = list(rp.history)
    for k, Ck in enumerate(closures, 1):
        below = I if k == 1 else closures[k - 2] * closures[0]
        new = [g for g in minimalize(Ck).generators if not below.contains(g)]
        if not new:
            continue
        fresh = _register(rp.base, new, k, taken)
        for j, (lev, gs) in enumerate(levels):
            if lev == k:
                levels[j] = (lev, gs + fresh)
                break
        else:
            levels.append((k, fresh))
        rp = _rebuild(rp.base, levels, rp.g_order, history)
        history = rp.history
    rp.complete = complete
    return rp


@dataclass
class MembershipAnswer:
    k_attained: int | None  # None for f = 0 (in every power)
    normal_form: Polynomial
    witness: str
    lower_bound_only: bool
    unit: Polynomial | None = None  # local case: normal_form = witness * unit

    def member(self, k: int) -> bool:
        return self.k_attained is None or self.k_attained >= k


def nf_rees(f: Polynomial, rp: ReesPresentation) -> Polynomial:
    """Normal form against the relations, with the powers of s restored.
    Input may be an element of Ā or of the extended ring (any s is
    dropped first, which is harmless as every relation is t-homogeneous)."""
    if f.ring is rp.base.ring:
        f = rp.embed(f)
    elif f.ring is not rp.ring:
        raise ValueError("element is neither in the base ring nor in the Rees ring")
    f = rp.without_s(f)
    return rp.with_s(reduce(f, rp.relations).remainder)


def split_unit(f: Polynomial) -> tuple[Polynomial, Polynomial] | None:
    """Write f = m*u with m a monomial and u a unit of the local ring, if
    possible.  Weak normal forms are only defined up to such a u."""
    ring = f.ring
    exps = list(f.terms)
    g = tuple(min(col) for col in zip(*exps))
    one = (0,) * ring.nvars
    u = {tuple(a - b for a, b in zip(m, g)): c for m, c in f.terms.items()}
    if one not in u:
        return None
    if any(m != one and ring.key(m) > ring.key(one) for m in u):
        return None
    c = u[one]
    inv = pow(c, -1, ring.q)
    unit = Polynomial(ring, {m: v * inv % ring.q for m, v in u.items()}, _clean=True)
    return Polynomial(ring, {g: c}, _clean=True), unit


def member(f: Polynomial, k: int, rp: ReesPresentation) -> tuple[bool, MembershipAnswer]:
    """Is f in C(I^k)?  True iff s^k divides the normal form."""
    if f.ring is not rp.base.ring:
        raise ValueError("element is not in the base ring")
    nf = nf_rees(f, rp)
    si = rp.ring.index[S_NAME]
    if nf.is_zero():
        ans = MembershipAnswer(None, nf, "0", not rp.complete)
    else:
        kat = min(m[si] for m in nf.terms)
        shown, unit = nf, None
        if rp.relations.kind == "local" and len(nf.terms) > 1:
            parts = split_unit(nf)
            if parts is not None:
                shown, unit = parts
        ans = MembershipAnswer(kat, nf, format_poly(shown, (S_NAME,)), not rp.complete, unit)
    return ans.member(k), ans
