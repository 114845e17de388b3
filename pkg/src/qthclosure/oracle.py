"""Brute-force checks that share no code path with the Qth-power chain.

For monomial ideals, x^a is integral over I = <x^c : c in C> exactly when
some k and some k generators c_1..c_k satisfy c_1 + ... + c_k <= k*a
componentwise; then T^k - x^(c_1+...+c_k) * x^(k*a - sum) is an
I-polynomial.  The search below enumerates multisets, smallest k first.
When it runs out, a separating hyperplane of the Newton polyhedron,
checked in exact integer arithmetic, turns the outcome into a definite
"no"; without one the answer stays "unknown".

For general ideals ``certify_integral`` looks for the coefficients of a
monic I-polynomial by linear algebra over F_q in a bounded degree box.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from .gb import LIMITS, ResourceLimit, UnsupportedPresentation
from .linalg import Echelon
from .poly import Polynomial
from .qthpower import Ideal

DEFAULT_KBOUND = 24


def _divides(c, a) -> bool:
    return all(x <= y for x, y in zip(c, a))


@dataclass(frozen=True)
class ExponentCone:
    """Exponent vectors of the generators of a monomial ideal, minimal
    under divisibility and sorted."""

    generators: tuple[tuple[int, ...], ...]
    unknown: tuple[tuple[int, ...], ...] = ()  # undecided points (np_closure)

    @classmethod
    def of(cls, vectors: Iterable[Sequence[int]]) -> "ExponentCone":
        vs = sorted({tuple(int(e) for e in v) for v in vectors})
        if not vs:
            raise ValueError("empty cone")
        n = len(vs[0])
        for v in vs:
            if len(v) != n or min(v, default=0) < 0:
                raise ValueError(f"bad exponent vector {v}")
        keep = [v for v in vs if not any(w != v and _divides(w, v) for w in vs)]
        return cls(tuple(keep))

    @property
    def nvars(self) -> int:
        return len(self.generators[0])

    def top(self) -> tuple[int, ...]:
        return tuple(max(col) for col in zip(*self.generators))


@dataclass(frozen=True)
class NPMembership:
    status: str  # "true" | "false" | "unknown"
    k: int | None = None
    multiset: tuple[tuple[int, ...], ...] = ()
    kbound: int = DEFAULT_KBOUND

    def __bool__(self) -> bool:
        return self.status == "true"

    def __str__(self):
        if self.status == "true":
            return f"true at k={self.k}"
        if self.status == "unknown":
            return f"unknown (k <= {self.kbound} exhausted)"
        return "false"


def _search(a, gens, k):
    """A multiset of k generators with sum <= k*a, or None."""
    n = len(a)
    cap = [k * x for x in a]
    low = [min(g[i] for g in gens) for i in range(n)]
    pick: list[int] = []

    def go(start, left, acc):
        if left == 0:
            return True
        for i in range(start, len(gens)):
            g = gens[i]
            nxt = [s + e for s, e in zip(acc, g)]
            # the remaining picks add at least `low` each
            if all(nxt[j] + (left - 1) * low[j] <= cap[j] for j in range(n)):
                pick.append(i)
                if go(i, left - 1, nxt):
                    return True
                pick.pop()
        return False

    if go(0, k, [0] * n):
        return tuple(gens[i] for i in pick)
    return None


def separated(a: Sequence[int], C: ExponentCone) -> bool:
    """Exact proof that a lies outside the Newton polyhedron of C: an
    integer w >= 0 with w.a < min_c w.c."""
    gens = np.array(C.generators, dtype=float)
    n = gens.shape[1]
    a = np.asarray(a, dtype=float)
    # maximize b - w.a subject to w.c >= b for all c, 0 <= w <= 1
    cost = np.concatenate([a, [-1.0]])
    A_ub = np.hstack([-gens, np.ones((len(gens), 1))])
    res = linprog(cost, A_ub=A_ub, b_ub=np.zeros(len(gens)),
                  bounds=[(0, 1)] * n + [(None, None)], method="highs")
    if res.status != 0 or -res.fun <= 1e-9:
        return False
    fr = [Fraction(x).limit_denominator(1000) for x in res.x[:n]]
    den = 1
    for x in fr:
        den = den * x.denominator // np.gcd(den, x.denominator)
    w = [max(0, int(x * den)) for x in fr]
    wa = sum(x * y for x, y in zip(w, a.astype(int)))
    return all(sum(x * y for x, y in zip(w, c)) > wa for c in C.generators)


def np_member(a: Sequence[int], C: ExponentCone, kbound: int = DEFAULT_KBOUND) -> NPMembership:
    """Smallest k <= kbound with k generators summing to at most k*a."""
    if kbound < 1:
        raise ValueError("kbound must be at least 1")
    a = tuple(int(x) for x in a)
    if len(a) != C.nvars:
        raise ValueError("dimension mismatch")
    gens = list(C.generators)
    for k in range(1, kbound + 1):
        ms = _search(a, gens, k)
        if ms is not None:
            return NPMembership("true", k, ms, kbound)
    if separated(a, C):
        return NPMembership("false", kbound=kbound)
    return NPMembership("unknown", kbound=kbound)


def np_closure(C: ExponentCone, kbound: int = DEFAULT_KBOUND) -> ExponentCone:
    """Minimal exponents of the integral closure.  They lie in the box up
    to the componentwise maximum of C, since clipping a point of the
    Newton polyhedron to that box stays inside it."""
    top = C.top()
    members, unknown = [], []
    for a in product(*[range(t + 1) for t in top]):
        if any(_divides(m, a) for m in members):
            continue
        r = np_member(a, C, kbound)
        if r.status == "true":
            members.append(a)
        elif r.status == "unknown":
            unknown.append(a)
    out = ExponentCone.of(members)
    return ExponentCone(out.generators, tuple(unknown))


# --- general ideals ----------------------------------------------------------

@dataclass
class IntegralityCertificate:
    """f^k + a_1 f^(k-1) + ... + a_k = 0 with a_j in I^j.

    ``combos[j-1]`` lists pairs (c, idx): c is an element of Ā and idx a
    tuple of generator indices, so that a_j = sum c * prod(gens[idx])."""

    f: Polynomial
    k: int
    coefficients: list[Polynomial]
    combos: list[list[tuple[Polynomial, tuple[int, ...]]]]
    generators: list[Polynomial] = field(repr=False)

    def replay(self, presentation) -> bool:
        """Recheck both identities from scratch."""
        ring = presentation.ring
        for j, (aj, combo) in enumerate(zip(self.coefficients, self.combos), 1):
            total = ring.zero()
            for c, idx in combo:
                if len(idx) != j:
                    return False
                t = c
                for i in idx:
                    t = t * self.generators[i]
                total = total + t
            if presentation.nf(total - aj):
                return False
        val = self.f ** self.k
        for j, aj in enumerate(self.coefficients, 1):
            val = val + aj * self.f ** (self.k - j)
        return presentation.nf(val).is_zero()


def certify_integral(f: Polynomial, I: Ideal, kmax: int) -> IntegralityCertificate | None:
    """Search k = 1..kmax for a monic I-polynomial of f.  Coefficients
    are P-combinations of y*m*f^(k-j) (m a product of j generators,
    y a standard monomial) with x-multipliers inside the exponent box of
    f^k's normal form."""
    setting = I.setting
    pr = setting.presentation
    if setting.bound is not None:
        raise UnsupportedPresentation("certificates need an exact (global or graded) setting")
    ring = pr.ring
    gens = list(I.generators)
    f = pr.nf(f)
    sl = ring.indep_slice
    nind = len(ring.independent_vars)
    ys = [Polynomial(ring, {y + (0,) * (ring.nvars - len(y)): 1}, _clean=True) for y in pr.Y]
    mon = pr.module_monoid
    powers = [ring.constant(1)]
    for k in range(1, kmax + 1):
        powers.append(pr.nf(powers[-1] * f))
        target = powers[k]
        if target.is_zero():
            return IntegralityCertificate(f, k, [ring.zero()] * k, [[] for _ in range(k)], gens)
        box = [max(m[sl][i] for m in target.terms) for i in range(nind)]
        ech = Echelon(ring.q, mon.key, track=True)
        labels = {}
        count = 0
        for j in range(1, k + 1):
            for idx in combinations_with_replacement(range(len(gens)), j):
                m = ring.constant(1)
                for i in idx:
                    m = m * gens[i]
                for yi, y in enumerate(ys):
                    c = pr.nf(y * m * powers[k - j])
                    if c.is_zero():
                        continue
                    low = [min(t[sl][i] for t in c.terms) for i in range(nind)]
                    for t in product(*[range(max(b - l, 0) + 1) for b, l in zip(box, low)]):
                        count += 1
                        if count > LIMITS.max_products:
                            raise ResourceLimit("certificate search exceeds the product cap")
                        xt = Polynomial(ring, {(0,) * sl.start + t + (0,) * (ring.nvars - sl.stop): 1},
                                        _clean=True)
                        label = len(labels)
                        labels[label] = (j, idx, xt * y)
                        ech.add(pr.to_vector(pr.nf(xt * c)), label=label)
        r, combo = ech.reduce(pr.to_vector(target), {})
        if r:
            continue
        coeffs = [ring.zero() for _ in range(k)]
        combos: list[list] = [[] for _ in range(k)]
        for label, c in sorted(combo.items()):
            j, idx, mult = labels[label]
            cm = mult * c
            combos[j - 1].append((cm, idx))
            m = ring.constant(1)
            for i in idx:
                m = m * gens[i]
            coeffs[j - 1] = pr.nf(coeffs[j - 1] + cm * m)
        cert = IntegralityCertificate(f, k, coeffs, combos, gens)
        if not cert.replay(pr):  # pragma: no cover - would be an internal error
            raise AssertionError("certificate failed to replay")
        return cert
    return None
