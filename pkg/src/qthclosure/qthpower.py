"""The Qth-power algorithm for integral closures of ideals.

For an ideal I of Ā and Q = q^e the chain of P-modules

    M_0 ⊇ M_1 ⊇ ...,   M_{i+1} = {g in M_i : g^Q in M_i^(Q-1) I}

stabilises at φ_Q(I).  Because Frobenius is additive and fixes F_q, the
condition is F_q-linear in g: writing a candidate as a combination of a
finite spanning set of M_i (truncated to the exponent box of the leading
monomials of I), g^Q is the same combination of the Q-th powers, and the
members of M_{i+1} form the kernel of a linear map into Ā/(M_i^(Q-1) I).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .gb import (LIMITS, PModule, ResourceLimit, RingPresentation,
                 homogeneous_gradings)
from .linalg import Echelon, left_kernel
from .poly import Polynomial, format_poly, frobenius_power

log = logging.getLogger(__name__)


@dataclass
class Setting:
    """Where the arithmetic happens: exact (``bound is None``) or modulo
    the ``bound``-th power of the maximal ideal of P."""

    presentation: RingPresentation
    bound: int | None = None
    gradings: tuple = ()

    def nf(self, f: Polynomial) -> Polynomial:
        return self.presentation.nf(f, self.bound)

    def module(self, gens: Iterable[Polynomial]) -> PModule:
        return PModule(self.presentation, gens, self.bound)


class Ideal:
    """Ideal of Ā given by generators (normal forms, deduplicated)."""

    def __init__(self, setting: Setting, generators: Iterable[Polynomial]):
        self.setting = setting
        seen = set()
        gens = []
        for g in generators:
            g = setting.nf(g)
            if g and g not in seen:
                seen.add(g)
                gens.append(g)
        self.generators = gens
        self._module: PModule | None = None

    @property
    def presentation(self) -> RingPresentation:
        return self.setting.presentation

    def module(self) -> PModule:
        """The ideal as a P-module: P-span of y*g for y in Y."""
        if self._module is None:
            pr = self.presentation
            ys = [Polynomial(pr.ring, {y + (0,) * (pr.ring.nvars - len(y)): 1}, _clean=True)
                  for y in pr.Y]
            self._module = self.setting.module(y * g for y in ys for g in self.generators)
        return self._module

    def contains(self, f: Polynomial) -> bool:
        return self.module().contains(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.contains_ideal(other) and other.contains_ideal(self)

    __hash__ = None

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.setting, [a * b for a in self.generators for b in other.generators])

    def power(self, k: int) -> "Ideal":
        out = Ideal(self.setting, [self.presentation.ring.constant(1)])
        for _ in range(k):
            out = out * self
            out = minimalize(out)
        return out

    def box(self) -> tuple[int, ...]:
        """Componentwise max of the x-parts of the generators' leading
        monomials; under a global ordering, of all their terms."""
        pr = self.presentation
        sl = pr.ring.indep_slice
        n = len(pr.ring.independent_vars)
        every = pr.ring.order_kind == "global"
        beta = [0] * n
        for g in self.generators:
            for m in (g.terms if every else (g.lm(),)):
                for i, e in enumerate(m[sl]):
                    beta[i] = max(beta[i], e)
        return tuple(beta)

    def __str__(self):
        return "<" + ", ".join(format_poly(g) for g in self.generators) + ">"

    def __repr__(self):
        return f"Ideal({self})"


def unit_ideal(setting: Setting) -> Ideal:
    return Ideal(setting, [setting.presentation.ring.constant(1)])


def _minimal_module_generators(M: PModule) -> list[Polynomial]:
    """Generators of a module: its reduced basis (exact mode) or, in the
    truncated mode, echelon rows that are independent modulo m*M."""
    if M.bound is None:
        return M.basis_elements()
    cached = getattr(M, "_mingens", None)
    if cached is not None:
        return list(cached)
    pr = M.presentation
    ech = M.echelon()
    rows = ech.basis()
    nind = len(pr.ring.independent_vars)
    inner = Echelon(pr.ring.q, pr.module_monoid.key)
    for row in rows:
        for i in range(nind):
            shifted = {}
            for (p, x), c in row.items():
                x2 = x[:i] + (x[i] + 1,) + x[i + 1:]
                if sum(x2) < M.bound:
                    shifted[(p, x2)] = c
            if shifted:
                inner.add(shifted)
    picked = []
    for row in rows:
        if inner.add(row) is not None:
            picked.append(pr.from_vector(row))
    M._mingens = tuple(picked)
    return picked


def minimalize(I: Ideal) -> Ideal:
    """Drop generators that lie in the ideal of the others; the survivors
    come from the module basis and are sorted ascending."""
    setting = I.setting
    ring = I.presentation.ring
    cands = _minimal_module_generators(I.module())
    cands.sort(key=lambda g: ring.key(g.lm()))
    # with Y = {1} the module is the ideal; monomial bases and Nakayama
    # generators (truncated mode) are then already minimal
    if len(I.presentation.Y) == 1 and (I.setting.bound is not None
                                       or all(len(g) == 1 for g in cands)):
        out = Ideal(setting, cands)
        out._module = I._module
        return out
    kept: list[Polynomial] = []
    for g in cands:
        if kept and Ideal(setting, kept).contains(g):
            continue
        kept.append(g)
    # a later generator may make an earlier one redundant
    changed = True
    while changed and len(kept) > 1:
        changed = False
        for g in list(kept):
            rest = [h for h in kept if h is not g]
            if Ideal(setting, rest).contains(g):
                kept = rest
                changed = True
                break
    out = Ideal(setting, kept)
    out._module = I._module
    return out


def _check_power(Q: int, q: int) -> None:
    n = Q
    while n > 1 and n % q == 0:
        n //= q
    if n != 1 or Q < q:
        raise ValueError(f"Q={Q} is not a positive power of q={q}")


def _product_module(A: PModule, B_gens: Sequence[Polynomial]) -> PModule:
    gens = A.basis_elements() if A.bound is None else _minimal_module_generators(A)
    if len(gens) * len(B_gens) > LIMITS.max_products:
        raise ResourceLimit(
            f"{len(gens)}x{len(B_gens)} products exceed the cap of {LIMITS.max_products}")
    return PModule(A.presentation, [a * b for a in gens for b in B_gens], A.bound)


def power_product(M: PModule, I: Ideal, Q: int) -> PModule:
    """The P-module M^(Q-1)·I, built one factor of M at a time."""
    _check_power(Q, I.presentation.ring.q)
    N = I.module()
    mgens = M.basis_elements() if M.bound is None else _minimal_module_generators(M)
    for _ in range(Q - 1):
        N = _product_module(N, mgens)
    return N


def _box_monomials(beta: Sequence[int]):
    return product(*[range(b + 1) for b in beta])


def _grading_key(vec_term, pr: RingPresentation, gradings) -> tuple:
    p, x = vec_term
    full = pr.Y[p] + x + (0,) * len(pr.ring.aux_vars)
    return tuple(sum(w * e for w, e in zip(g, full)) for g in gradings)


def qth_kernel_step(M: PModule, I: Ideal, Q: int, box: Sequence[int] | None = None,
                    target: PModule | None = None,
                    gradings: Sequence[Sequence[int]] = ()) -> PModule:
    """M_{i+1} = {g in M : g^Q in M^(Q-1) I}, computed by linear algebra
    over the candidates x^m * b (b a generator of M, leading x-part within
    ``box``)."""
    pr = M.presentation
    ring = pr.ring
    q = ring.q
    key = pr.module_monoid.key
    bound = M.bound
    beta = tuple(box) if box is not None else I.box()
    N = target if target is not None else power_product(M, I, Q)
    mgens = M.basis_elements() if bound is None else _minimal_module_generators(M)

    ech = Echelon(q, key)
    n_ind = len(ring.independent_vars)
    for b in mgens:
        v = pr.to_vector(b)
        lead_x = max(v, key=key)[1]
        room = [bb - e for bb, e in zip(beta, lead_x)]
        if any(r < 0 for r in room):
            continue
        for t in _box_monomials(room):
            w = {(p, tuple(a + c for a, c in zip(x, t))): c0 for (p, x), c0 in v.items()}
            if bound is not None:
                w = {k: c0 for k, c0 in w.items() if sum(k[1]) < bound}
            if w:
                ech.add(w)
    rows = ech.basis()

    groups: dict[tuple, list[int]] = {}
    for i, row in enumerate(rows):
        gk = _grading_key(max(row, key=key), pr, gradings) if gradings else ()
        groups.setdefault(gk, []).append(i)

    images = []
    for row in rows:
        g = pr.from_vector(row)
        gq = pr.nf(frobenius_power(g, Q), bound)
        images.append(N.reduce_vector(pr.to_vector(gq)))

    new_gens: list[Polynomial] = []
    for gk in sorted(groups):
        idx = groups[gk]
        sub = [images[i] for i in idx]
        for dep in left_kernel(sub, q, key):
            acc: dict = {}
            for j, c in dep.items():
                for t, v in rows[idx[j]].items():
                    w = (acc.get(t, 0) + c * v) % q
                    if w:
                        acc[t] = w
                    else:
                        acc.pop(t, None)
            if acc:
                new_gens.append(pr.from_vector(acc))
    out = PModule(pr, new_gens, bound)
    out = PModule(pr, _minimal_module_generators(out), bound)
    log.debug("kernel step: %d candidates, %d kernel generators", len(rows), len(out))
    return out


@dataclass
class ChainTrace:
    Q: int
    modules: list[list[PModule]] = field(default_factory=list)
    rounds: list[Ideal] = field(default_factory=list)
    stabilized: bool = False

    def report(self) -> str:
        lines = [f"Q = {self.Q}"]
        for r, mods in enumerate(self.modules, 1):
            lines.append(f"round {r}")
            for i, M in enumerate(mods):
                gens = ", ".join(format_poly(g) for g in M.generators)
                lines.append(f"  M_{i}: {gens}")
            if r <= len(self.rounds):
                lines.append(f"  ideal: {self.rounds[r - 1]}")
        lines.append(f"stabilized: {'yes' if self.stabilized else 'no'}")
        return "\n".join(lines)


def phi_Q(I: Ideal, Q: int, seed: PModule | None = None, box: Sequence[int] | None = None,
          trace: ChainTrace | None = None, max_steps: int = 200) -> tuple[Ideal, ChainTrace]:
    """One application of φ_Q: run the module chain from ``seed`` (default
    Ā itself) to its fixed point and return the ideal it generates."""
    setting = I.setting
    _check_power(Q, setting.presentation.ring.q)
    M = seed if seed is not None else unit_ideal(setting).module()
    chain = [M]
    for _ in range(max_steps):
        M2 = qth_kernel_step(M, I, Q, box, gradings=setting.gradings)
        chain.append(M2)
        if M2.contains_module(M):
            break
        M = M2
    else:
        raise ResourceLimit(f"module chain did not stabilise in {max_steps} steps")
    out = minimalize(Ideal(setting, M.generators))
    if trace is None:
        trace = ChainTrace(Q)
    trace.modules.append(chain)
    trace.rounds.append(out)
    return out, trace


def default_exponent(I: Ideal) -> int:
    """Smallest e with q^e >= 1 + max total degree of the generators."""
    q = I.presentation.ring.q
    sl = I.presentation.ring.indep_slice
    deg = max((sum(m[sl]) for g in I.generators for m in g.terms), default=0)
    e = 1
    while q ** e < 1 + deg:
        e += 1
    return e


def integral_closure(I: Ideal, e: int | None = None, *, seed: PModule | None = None,
                     box: Sequence[int] | None = None, max_rounds: int = 50,
                     trace: ChainTrace | None = None) -> tuple[Ideal, ChainTrace]:
    """Iterate φ_Q from I until two consecutive rounds agree.

    The answer is tagged with the Q used: only a sufficiently large Q is
    guaranteed to produce the whole closure."""
    q = I.presentation.ring.q
    if e is None:
        e = default_exponent(I)
    if e < 1:
        raise ValueError("exponent e must be at least 1")
    Q = q ** e
    trace = trace if trace is not None else ChainTrace(Q)
    cur = minimalize(I)
    for _ in range(max_rounds):
        nxt, _ = phi_Q(cur, Q, seed=seed, box=box, trace=trace)
        if cur.contains_ideal(nxt):
            trace.stabilized = True
            return cur, trace
        cur = nxt
    raise ResourceLimit(f"no stabilisation within {max_rounds} rounds")


@dataclass
class PowersResult:
    closures: list[Ideal]
    stop_index: int | None
    traces: list[ChainTrace]
    Q: int


def closure_powers(I: Ideal, kmax: int, e: int | None = None, *,
                   seed_prev_closure: bool = True, box: Sequence[int] | None = None,
                   max_rounds: int = 50) -> PowersResult:
    """C(I^k, Ā) for k = 1..kmax, stopping at the first k with
    C(I^k) = C(I^(k-1))·C(I).  For k >= 2 the module chain is seeded with
    C(I^(k-1)) (or with I^(k-1) when ``seed_prev_closure`` is false)."""
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    if e is None:
        e = default_exponent(I)
    C1, t1 = integral_closure(I, e, box=box, max_rounds=max_rounds)
    closures, traces = [C1], [t1]
    stop = None
    for k in range(2, kmax + 1):
        target = I.power(k)
        seed = (closures[-1] if seed_prev_closure else I.power(k - 1)).module()
        Ck, tk = integral_closure(target, e, seed=seed, box=box, max_rounds=max_rounds)
        closures.append(Ck)
        traces.append(tk)
        if (closures[-2] * C1).contains_ideal(Ck):
            stop = k
            break
    return PowersResult(closures, stop, traces, I.presentation.ring.q ** e)


def make_setting(presentation: RingPresentation, generators: Sequence[Polynomial],
                 Q: int, kmax: int = 1, bound: int | None = None) -> Setting:
    """Choose exact or truncated arithmetic for an ideal.

    Exact arithmetic needs a global ordering or homogeneous data with
    finite graded components.  Otherwise the computation runs modulo a
    power of the maximal ideal large enough for every Q-th power that the
    kernel step forms (for ideals up to the kmax-th power)."""
    ring = presentation.ring
    allp = list(presentation.relations) + list(generators)
    if ring.order_kind == "global":
        return Setting(presentation, None, ())
    grads = tuple(homogeneous_gradings(ring, allp))
    if presentation.J.kind != "local" and presentation.is_graded_with(generators):
        return Setting(presentation, None, grads)
    if bound is None:
        # leading x-parts only need the generators modulo a low power of m
        top = max((sum(m) for g in generators for m in g.terms), default=0)
        probe = Setting(presentation, kmax * top + 1)
        Ik = Ideal(probe, generators)
        beta = (Ik.power(kmax) if kmax > 1 else Ik).box()
        bound = Q * sum(beta) + 1
    return Setting(presentation, bound, ())
