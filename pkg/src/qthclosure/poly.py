"""Sparse multivariate polynomials over prime fields F_q.

A :class:`FlatRing` holds the variables in three blocks (dependent ``y``,
independent ``x``, auxiliary) together with a matrix monomial ordering.
Each weight row carries its own local flag: on a local row the smaller
weighted degree wins.  After the rows come the dependent degree (always
global, so dependent variables dominate 1) and a reverse-lexicographic
tie break.

Polynomials are immutable dictionaries ``{exponent tuple: coefficient}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Sequence

INT32_MAX = 2**31 - 1


class PolySyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class RingMismatch(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldScalar:
    """Residue class in F_q for prime q."""

    value: int
    q: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise ValueError(f"modulus {self.q} is not prime")
        object.__setattr__(self, "value", self.value % self.q)

    def _other(self, other) -> int:
        if isinstance(other, FieldScalar):
            if other.q != self.q:
                raise ValueError("scalars from different fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldScalar(self.value + self._other(other), self.q)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldScalar(self.value - self._other(other), self.q)

    def __rsub__(self, other):
        return FieldScalar(self._other(other) - self.value, self.q)

    def __mul__(self, other):
        return FieldScalar(self.value * self._other(other), self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldScalar(-self.value, self.q)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FieldScalar(pow(self.value, n, self.q), self.q)

    def inverse(self) -> "FieldScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_q")
        return FieldScalar(pow(self.value, -1, self.q), self.q)

    def __truediv__(self, other):
        return self * FieldScalar(self._other(other), self.q).inverse()

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.q == other.q and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.q
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.q))

    def __int__(self):
        return self.value


class Cmp(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(eq=False)
class FlatRing:
    """F_q[dependent; independent; aux] with a matrix ordering.

    ``rows`` are weight rows over all variables, most significant first;
    ``local_rows`` flags the rows whose sense is reversed.  ``gradings``
    are extra integer gradings (used for homogeneity checks only).
    """

    q: int
    dependent_vars: tuple[str, ...]
    independent_vars: tuple[str, ...]
    aux_vars: tuple[str, ...] = ()
    rows: tuple[tuple[int, ...], ...] = ()
    local_rows: tuple[bool, ...] = ()
    gradings: tuple[tuple[int, ...], ...] = ()
    naming_rows: int | None = None
    _keys: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not is_prime(self.q):
            raise ValueError(f"field size {self.q} is not prime")
        self.dependent_vars = tuple(self.dependent_vars)
        self.independent_vars = tuple(self.independent_vars)
        self.aux_vars = tuple(self.aux_vars)
        names = self.variables
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        n = len(names)
        if not self.rows:
            self.rows = (tuple([1] * n),)
            self.local_rows = (False,)
        self.rows = tuple(tuple(int(w) for w in r) for r in self.rows)
        if not self.local_rows:
            self.local_rows = tuple(False for _ in self.rows)
        self.local_rows = tuple(bool(b) for b in self.local_rows)
        if len(self.local_rows) != len(self.rows):
            raise ValueError("one local flag per weight row required")
        for r in self.rows:
            if len(r) != n:
                raise ValueError(
                    f"weight row has {len(r)} columns, ring has {n} variables")
            if any(abs(w) > INT32_MAX for w in r):
                raise ValueError("weight exceeds 32-bit range")
        for r, loc in zip(self.rows, self.local_rows):
            if not loc and any(w < 0 for w in r):
                raise ValueError("global weight rows must be nonnegative")
        self.gradings = tuple(tuple(int(w) for w in g) for g in self.gradings)
        self.index = {v: i for i, v in enumerate(names)}
        self._ndep = len(self.dependent_vars)
        # effective rows: sign flipped on local rows
        self._eff = tuple(
            tuple(-w for w in r) if loc else r
            for r, loc in zip(self.rows, self.local_rows))

    @property
    def variables(self) -> tuple[str, ...]:
        return self.dependent_vars + self.independent_vars + self.aux_vars

    @property
    def nvars(self) -> int:
        return len(self.dependent_vars) + len(self.independent_vars) + len(self.aux_vars)

    @property
    def dep_slice(self) -> slice:
        return slice(0, self._ndep)

    @property
    def indep_slice(self) -> slice:
        return slice(self._ndep, self._ndep + len(self.independent_vars))

    @property
    def order_kind(self) -> str:
        """'global' if every variable is above 1, 'local' if every variable
        is below 1, 'mixed' otherwise."""
        signs = set()
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            signs.add(self.key(tuple(e)) > self.key(tuple([0] * self.nvars)))
        if signs == {True}:
            return "global"
        if signs == {False}:
            return "local"
        return "mixed"

    def key(self, exps: tuple[int, ...]):
        """Sort key; a larger key means a larger monomial."""
        k = self._keys.get(exps)
        if k is None:
            k = tuple(sum(w * e for w, e in zip(r, exps)) for r in self._eff)
            k += (sum(exps[: self._ndep]),)
            k += tuple(-e for e in reversed(exps))
            self._keys[exps] = k
        return k

    def one(self) -> tuple[int, ...]:
        return (0,) * self.nvars

    def var_exps(self, name: str) -> tuple[int, ...]:
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return tuple(e)

    def gen(self, name: str) -> "Polynomial":
        if name not in self.index:
            raise KeyError(name)
        return Polynomial(self, {self.var_exps(name): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(v) for v in self.variables]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def constant(self, c: int) -> "Polynomial":
        return Polynomial(self, {self.one(): c})

    def __call__(self, src) -> "Polynomial":
        if isinstance(src, Polynomial):
            return src
        if isinstance(src, int):
            return self.constant(src)
        return parse_poly(src, self)

    def __repr__(self):
        return (f"FlatRing(F_{self.q}, dep={list(self.dependent_vars)}, "
                f"indep={list(self.independent_vars)}, aux={list(self.aux_vars)})")


def compare_monomials(a: Sequence[int], b: Sequence[int], ring: FlatRing) -> Cmp:
    if len(a) != ring.nvars or len(b) != ring.nvars:
        raise RingMismatch("monomial length does not match ring")
    ka, kb = ring.key(tuple(a)), ring.key(tuple(b))
    return Cmp.EQ if ka == kb else (Cmp.GT if ka > kb else Cmp.LT)


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b, a):
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to
    nonzero residues in [0, q)."""

    __slots__ = ("ring", "terms", "_sorted", "_hash")

    def __init__(self, ring: FlatRing, terms: dict | None = None, *, _clean=False):
        self.ring = ring
        if terms is None:
            terms = {}
        if not _clean:
            q = ring.q
            terms = {m: c % q for m, c in terms.items() if c % q}
        self.terms = terms
        self._sorted = None
        self._hash = None

    # --- structure -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in strictly descending order."""
        if self._sorted is None:
            key = self.ring.key
            self._sorted = sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)
        return self._sorted

    def lm(self) -> tuple[int, ...]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        if self._sorted is not None:
            return self._sorted[0][0]
        return max(self.terms, key=self.ring.key)

    def lc(self) -> int:
        return self.terms[self.lm()]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        c = self.lc()
        if c == 1:
            return self
        inv = pow(c, -1, self.ring.q)
        return self.scale(inv)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def variables_used(self) -> set[str]:
        names = self.ring.variables
        return {names[i] for m in self.terms for i, e in enumerate(m) if e}

    # --- arithmetic ----------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.ring is not self.ring:
            raise RingMismatch("polynomials live in different rings")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, FieldScalar)):
            return self.ring.constant(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        q = self.ring.q
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % q
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        q = self.ring.q
        return Polynomial(self.ring, {m: q - c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        q = self.ring.q
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = (out.get(m, 0) + c1 * c2) % q
        return Polynomial(self.ring, {m: c for m, c in out.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: int) -> "Polynomial":
        q = self.ring.q
        c %= q
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {m: v * c % q for m, v in self.terms.items()}, _clean=True)

    def mul_term(self, mono, c: int = 1) -> "Polynomial":
        q = self.ring.q
        c %= q
        if c == 0:
            return self.ring.zero()
        return Polynomial(
            self.ring,
            {tuple(x + y for x, y in zip(m, mono)): v * c % q for m, v in self.terms.items()},
            _clean=True)

    # --- comparison ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


def frobenius_power(f: Polynomial, Q: int) -> Polynomial:
    """f**Q for Q a power of q, computed term by term."""
    q = f.ring.q
    n = Q
    if n < q:
        raise ValueError(f"{Q} is not a power of {q}")
    while n % q == 0:
        n //= q
    if n != 1:
        raise ValueError(f"{Q} is not a power of {q}")
    out = {}
    for m, c in f.terms.items():
        mm = tuple(Q * e for e in m)
        if any(e > INT32_MAX for e in mm):
            raise ValueError("exponent overflow in Frobenius power")
        out[mm] = c  # c**Q == c in a prime field
    return Polynomial(f.ring, out, _clean=True)


def monomial_weight(m: Sequence[int], row: Sequence[int]) -> int:
    return sum(w * e for w, e in zip(row, m))


def wt(f: Polynomial, row: int = 0) -> int:
    """Weight of f under one weight row: the extremal dot product in the
    direction the ordering treats as leading (minimum for local rows and,
    by the ``<= min`` convention, for global rows as well)."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no weight")
    r = f.ring.rows[row]
    return min(monomial_weight(m, r) for m in f.terms)


@dataclass
class WeightReport:
    is_multiplicative: bool = True
    is_order_compatible: bool = True
    relation_balance: list[bool] = field(default_factory=list)
    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.is_multiplicative and self.is_order_compatible
                and all(self.relation_balance))


def validate_weights(ring: FlatRing, relations: Iterable[Polynomial],
                     row: int = 0, samples: int = 200) -> WeightReport:
    """Check the weight-function axioms for one weight row.

    Multiplicativity and the sum rule are sampled on a deterministic set of
    monomial pairs; every relation is checked for balance (its extremal
    weight must be attained at least twice, otherwise the weight does not
    descend to the quotient)."""
    import random

    rep = WeightReport()
    rng = random.Random(1729)
    n = ring.nvars
    r = ring.rows[row] if ring.rows else (1,) * n
    local = ring.local_rows[row] if ring.local_rows else False
    for _ in range(samples):
        a = tuple(rng.randint(0, 3) for _ in range(n))
        b = tuple(rng.randint(0, 3) for _ in range(n))
        wa, wb = monomial_weight(a, r), monomial_weight(b, r)
        if monomial_weight(mono_mul(a, b), r) != wa + wb:
            rep.is_multiplicative = False
            rep.violations.append((str(a), str(b)))
        if a != b:
            s = Polynomial(ring, {a: 1, b: 1})
            if wt(s, row) != min(wa, wb):
                rep.is_order_compatible = False
                rep.violations.append((str(a), str(b)))
        # the most significant row decides the ordering wherever it differs
        if row == 0 and wa != wb:
            a_leads = (wa < wb) if local else (wa > wb)
            if (compare_monomials(a, b, ring) == Cmp.GT) != a_leads:
                rep.is_order_compatible = False
                rep.violations.append((str(a), str(b)))
    for rel in relations:
        if rel.is_zero():
            rep.relation_balance.append(True)
            continue
        ws = [monomial_weight(m, r) for m in rel.terms]
        w0 = min(ws)
        ok = ws.count(w0) >= 2
        rep.relation_balance.append(ok)
        if not ok:
            rep.violations.append((format_poly(rel), f"unique extremal weight {w0}"))
    return rep


# --- text format ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _tokens(src: str):
    pos = 0
    line, line_start = 1, 0
    n = len(src)
    while pos < n:
        m = _TOKEN.match(src, pos)
        if m is None:  # trailing whitespace
            break
        skipped = src[pos:m.start(m.lastindex)]
        nl = skipped.count("\n")
        if nl:
            line += nl
            line_start = pos + skipped.rfind("\n") + 1
        start = m.start(m.lastindex)
        col = start - line_start + 1
        if m.group(1) is not None:
            yield ("nat", m.group(1), line, col)
        elif m.group(2) is not None:
            yield ("ident", m.group(2), line, col)
        else:
            yield ("op", m.group(3), line, col)
        pos = m.end()
    yield ("end", "", line, pos - line_start + 1)


def parse_poly(src: str, ring: FlatRing) -> Polynomial:
    """Parse ``src`` (sum of products of ``var^nat`` and naturals)."""
    toks = list(_tokens(src))
    i = 0

    def peek():
        return toks[i]

    def fail(msg, tok):
        raise PolySyntaxError(msg, tok[2], tok[3])

    if toks[0][0] == "end":
        fail("empty polynomial", toks[0])
    q = ring.q
    acc: dict = {}

    def parse_nat(tok):
        v = int(tok[1])
        if v > INT32_MAX:
            fail("number exceeds 32-bit range", tok)
        return v

    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if peek()[1] == "-" else 1
        i += 1
    while True:
        coeff = sign
        mono = [0] * ring.nvars
        expect_factor = True
        first = True
        while expect_factor:
            tok = peek()
            if tok[0] == "nat":
                coeff *= parse_nat(tok)
                i += 1
            elif tok[0] == "ident":
                if tok[1] not in ring.index:
                    fail(f"unknown variable {tok[1]!r}", tok)
                i += 1
                exp = 1
                if peek()[0] == "op" and peek()[1] == "^":
                    i += 1
                    et = peek()
                    if et[0] != "nat":
                        fail("malformed exponent", et)
                    exp = parse_nat(et)
                    i += 1
                mono[ring.index[tok[1]]] += exp
            elif tok[0] == "op" and tok[1] == "(" and first:
                fail("parentheses are not part of the grammar", tok)
            else:
                fail("expected a number or variable", tok)
            first = False
            if peek()[0] == "op" and peek()[1] == "*":
                i += 1
            else:
                expect_factor = False
        m = tuple(mono)
        acc[m] = (acc.get(m, 0) + coeff) % q
        tok = peek()
        if tok[0] == "end":
            break
        if tok[0] == "op" and tok[1] in "+-":
            sign = 1 if tok[1] == "+" else -1
            i += 1
            continue
        fail(f"unexpected {tok[1]!r}", tok)
    return Polynomial(ring, acc)


def format_monomial(m: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_poly(f: Polynomial, hide: Iterable[str] = ()) -> str:
    """Canonical text: descending terms, symmetric coefficient residues.

    Variables listed in ``hide`` are dropped from the printed monomials
    (display only; the result need not re-parse to ``f``)."""
    if f.is_zero():
        return "0"
    ring = f.ring
    names = ring.variables
    hidden = {ring.index[h] for h in hide if h in ring.index}
    q = ring.q
    out = []
    for m, c in f.sorted_terms():
        if hidden:
            m = tuple(0 if k in hidden else e for k, e in enumerate(m))
        neg = c > q // 2 and q > 2
        a = q - c if neg else c
        body = format_monomial(m, names)
        if body == "1":
            text = str(a)
        elif a == 1:
            text = body
        else:
            text = f"{a}*{body}"
        if not out:
            out.append(("-" if neg else "") + text)
        else:
            out.append((" - " if neg else " + ") + text)
    return "".join(out)
