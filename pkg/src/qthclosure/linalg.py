"""Sparse row reduction over F_q.

Vectors are dictionaries ``{column: residue}``; columns are arbitrary
hashable labels (monomials, module terms).  Pivots are chosen as the
largest column under a caller-supplied key, so a reduced echelon basis of
a space of polynomials is the unique basis whose leading monomials are
distinct and appear in no other basis element.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable


def axpy(y: dict, a: int, x: dict, q: int) -> None:
    """y += a*x in place."""
    for k, v in x.items():
        w = (y.get(k, 0) + a * v) % q
        if w:
            y[k] = w
        else:
            y.pop(k, None)


class Echelon:
    """Incrementally built reduced row echelon form.

    With ``track=True`` each row remembers the combination of inserted
    vectors (by insertion label) that produced it; a vector that reduces
    to zero then yields a dependency, which is how kernels are found.
    """

    def __init__(self, q: int, key: Callable[[Hashable], object], track: bool = False):
        self.q = q
        self.key = key
        self.track = track
        self.rows: dict[Hashable, dict] = {}      # pivot -> row (pivot coeff 1)
        self.combos: dict[Hashable, dict] = {}    # pivot -> combination
        self.kernel: list[dict] = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict, combo: dict | None = None) -> tuple[dict, dict | None]:
        q = self.q
        v = dict(v)
        for p in [c for c in v if c in self.rows]:
            a = v.get(p)
            if a:
                axpy(v, q - a, self.rows[p], q)
                if combo is not None:
                    axpy(combo, q - a, self.combos[p], q)
        return v, combo

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)[0]

    def add(self, v: dict, label: Hashable = None) -> Hashable | None:
        """Insert v; return its new pivot or None if v was dependent."""
        q = self.q
        combo = {label: 1} if self.track else None
        r, combo = self.reduce(v, combo)
        if not r:
            if self.track:
                self.kernel.append(combo)
            return None
        p = max(r, key=self.key)
        inv = pow(r[p], -1, q)
        if inv != 1:
            r = {k: c * inv % q for k, c in r.items()}
            if combo is not None:
                combo = {k: c * inv % q for k, c in combo.items()}
        for p2, row in self.rows.items():
            a = row.get(p)
            if a:
                axpy(row, q - a, r, q)
                if self.track:
                    axpy(self.combos[p2], q - a, combo, q)
        self.rows[p] = r
        if self.track:
            self.combos[p] = combo
        return p

    def extend(self, vs: Iterable[dict]) -> None:
        for v in vs:
            self.add(v)

    def basis(self) -> list[dict]:
        """Rows sorted by ascending pivot."""
        return [self.rows[p] for p in sorted(self.rows, key=self.key)]


def left_kernel(images: list[dict], q: int, key) -> list[dict]:
    """All dependencies sum_i g_i * images[i] = 0, as dicts {i: g_i}."""
    ech = Echelon(q, key, track=True)
    for i, v in enumerate(images):
        ech.add(v, label=i)
    return ech.kernel
