"""Exponent-arithmetic orbit engine for groups built on a Singer cycle.

When one generator S of a matrix group acts transitively on the nonzero
vectors of GF(2)^n, every nonzero v equals S^a applied to a base vector
for a unique exponent a < 2^n - 1, and any generator normalizing <S>
acts on exponents as an affine map a -> t*a + c (mod 2^n - 1).  A
subspace then becomes a set of exponents, the whole group action becomes
integer arithmetic on such sets, and orbit labels, lengths, and lookups
never have to walk the group.  Detection is exhaustive: the affine model
is checked on every nonzero vector, so a successful detect() is a proof
that the fast path agrees with the matrix action.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .gf2 import BitMatrix, mat_mul, popcount_u64
from .subspace import Subspace, pack_keys_bulk, subspace_from_key

MAX_ENGINE_WIDTH = 24
MAX_SLOPE_GROUP = 1 << 16


def mat_vec_bulk(m: BitMatrix, vecs: np.ndarray) -> np.ndarray:
    """Apply v -> m @ v to a uint64 array of packed vectors."""
    vecs = vecs.astype(np.uint64, copy=False)
    out = np.zeros_like(vecs)
    one = np.uint64(1)
    for i, row in enumerate(m.rows):
        bit = popcount_u64(vecs & np.uint64(row)) & one
        out |= bit << np.uint64(i)
    return out


def _power_table(s: BitMatrix) -> np.ndarray | None:
    """exptable[a] = S^a applied to e0, or None if S is not transitive."""
    n = s.ncols
    modulus = (1 << n) - 1
    table = np.zeros(modulus, dtype=np.uint64)
    table[0] = 1
    size = 1
    power = s
    while size < modulus:
        take = min(size, modulus - size)
        table[size : size + take] = mat_vec_bulk(power, table[:take])
        size += take
        if size < modulus:
            power = mat_mul(power, power)
    if np.unique(table).size != modulus or table.min() == 0:
        return None
    # wrap-around: S applied to the last entry must return to e0
    last = int(table[modulus - 1])
    first = 0
    for i, row in enumerate(s.rows):
        first |= ((row & last).bit_count() & 1) << i
    if first != 1:
        return None
    return table


@dataclass
class SingerEngine:
    """Certified exponent model of a group containing a Singer cycle."""

    n: int
    modulus: int  # 2^n - 1
    exptable: np.ndarray  # (modulus,) uint64, exponent -> vector
    dlog: np.ndarray  # (2^n,) int64, vector -> exponent
    slopes: tuple[int, ...]  # subgroup of (Z/modulus)* acting on exponents
    order: int  # modulus * len(slopes)

    @classmethod
    def detect(cls, generators: list[BitMatrix], n: int) -> "SingerEngine | None":
        """Try to certify the exponent model; None when it does not apply."""
        if n > MAX_ENGINE_WIDTH or not generators:
            return None
        modulus = (1 << n) - 1
        arange = None
        for idx, cand in enumerate(generators):
            table = _power_table(cand)
            if table is None:
                continue
            dlog = np.zeros(1 << n, dtype=np.int64)
            dlog[table] = np.arange(modulus, dtype=np.int64)
            if arange is None:
                arange = np.arange(modulus, dtype=np.int64)
            slope_gens = []
            ok = True
            for j, other in enumerate(generators):
                if j == idx:
                    continue
                imgs = dlog[mat_vec_bulk(other, table)]
                c = int(imgs[0])
                t = int((imgs[1] - c) % modulus) if modulus > 1 else 1
                if gcd(t, modulus) != 1:
                    ok = False
                    break
                if not np.array_equal(imgs, (t * arange + c) % modulus):
                    ok = False
                    break
                slope_gens.append(t)
            if not ok:
                continue
            slopes = _slope_closure(slope_gens, modulus)
            if slopes is None:
                continue
            return cls(
                n=n,
                modulus=modulus,
                exptable=table,
                dlog=dlog,
                slopes=slopes,
                order=modulus * len(slopes),
            )
        return None

    # -- conversions ------------------------------------------------------

    def rows_to_exps(self, rows: np.ndarray) -> np.ndarray:
        """(N, k) basis rows -> (N, 2^k - 1) sorted exponent sets."""
        rows = np.ascontiguousarray(rows, dtype=np.uint64)
        num, k = rows.shape
        m = (1 << k) - 1
        vecs = np.zeros((num, m), dtype=np.uint64)
        for mask in range(1, m + 1):
            acc = np.zeros(num, dtype=np.uint64)
            for i in range(k):
                if (mask >> i) & 1:
                    acc ^= rows[:, i]
            vecs[:, mask - 1] = acc
        exps = self.dlog[vecs]
        exps.sort(axis=1)
        return exps

    def exps_to_rows(self, exps: np.ndarray, k: int) -> np.ndarray:
        """(N, 2^k - 1) exponent sets -> (N, k) RREF basis rows."""
        from .gf2 import rref_bulk

        vecs = self.exptable[exps]
        red, ranks = rref_bulk(vecs)
        if not np.all(ranks == k):
            raise ValueError("exponent set does not span a k-dim subspace")
        return red[:, :k]

    def subspace_exps(self, u: Subspace) -> np.ndarray:
        return self.rows_to_exps(np.array([u.rows], dtype=np.uint64))[0]

    # -- labels -----------------------------------------------------------

    def _pack_words(self, sorted_exps: np.ndarray) -> list[np.ndarray]:
        """Pack sorted exponent rows (first entry dropped) into uint64 words."""
        m = sorted_exps.shape[1]
        per_word = max(1, 64 // max(1, self.n))
        body = sorted_exps[:, 1:].astype(np.uint64)
        words = []
        for start in range(0, max(1, m - 1), per_word):
            w = np.zeros(sorted_exps.shape[0], dtype=np.uint64)
            for sub, col in enumerate(range(start, min(m - 1, start + per_word))):
                w |= body[:, col] << np.uint64(sub * self.n)
            words.append(w)
        return words

    def labels_bulk(self, exps: np.ndarray) -> np.ndarray:
        """Canonical orbit label words, (N, W) uint64.

        The label is the lexicographic minimum of sorted(t*(D - d)) over
        slopes t and base points d in D; the minimizing set starts with
        exponent 0, which is dropped before packing.
        """
        exps = np.ascontiguousarray(exps, dtype=np.int64)
        num, m = exps.shape
        best: list[np.ndarray] | None = None
        for t in self.slopes:
            scaled = (t * exps) % self.modulus
            for di in range(m):
                shifted = (scaled - scaled[:, di : di + 1]) % self.modulus
                shifted.sort(axis=1)
                words = self._pack_words(shifted)
                if best is None:
                    best = words
                    continue
                lt = np.zeros(num, dtype=bool)
                eq = np.ones(num, dtype=bool)
                for w, b in zip(words, best):
                    lt |= eq & (w < b)
                    eq &= w == b
                if lt.any():
                    for w, b in zip(words, best):
                        b[lt] = w[lt]
        assert best is not None
        return np.stack(best, axis=1)

    def label_of(self, u: Subspace) -> tuple[int, ...]:
        words = self.labels_bulk(self.subspace_exps(u)[None, :])
        return tuple(int(x) for x in words[0])

    def orbit_size(self, u: Subspace) -> int:
        """|G| / |stabilizer|, counting affine maps that fix the exponent set."""
        d = np.sort(self.subspace_exps(u))
        m = d.shape[0]
        stab = 0
        for t in self.slopes:
            scaled = (t * d) % self.modulus
            for di in range(m):
                c = int((d[0] - scaled[di]) % self.modulus)
                if np.array_equal(np.sort((scaled + c) % self.modulus), d):
                    stab += 1
        if self.order % stab:
            raise AssertionError("stabilizer size does not divide the group order")
        return self.order // stab

    # -- orbit partition ---------------------------------------------------

    def partition(
        self, k: int, prev_reps: list[Subspace]
    ) -> tuple[list[Subspace], list[int], dict[tuple[int, ...], int]]:
        """Orbits of k-dim subspaces from the (k-1)-dim representatives.

        Every k-orbit contains the span of a (k-1)-representative and one
        extra vector, so labeling all such spans classifies every orbit.
        Returns (reps, lengths, label -> id), ids ascending in rep key.
        Representatives are key-minimal among the generated spans.
        """
        if k == 0:
            zero = Subspace(self.n, ())
            return [zero], [1], {(): 0}
        m = (1 << k) - 1
        chunks = []
        for t_rep in prev_reps:
            t_vecs = [v for v in t_rep.vectors() if v]
            universe = self.exptable  # all nonzero vectors, any order
            keep = ~np.isin(universe, np.array(t_vecs, dtype=np.uint64)) if t_vecs else np.ones(
                self.modulus, dtype=bool
            )
            v = universe[keep]
            cols = [np.full(v.shape, w, dtype=np.uint64) for w in t_vecs]
            cols += [v ^ np.uint64(w) for w in t_vecs]
            cols.append(v)
            chunks.append(np.stack(cols, axis=1))
        vecsets = np.concatenate(chunks, axis=0)
        exps = self.dlog[vecsets]
        exps.sort(axis=1)
        basis = self.exps_to_rows(exps, k)
        keys = pack_keys_bulk(basis, self.n)
        # dedupe identical subspaces before the label pass
        keys, first = np.unique(keys, return_index=True)
        exps = exps[first]
        labels = self.labels_bulk(exps)
        uniq, inverse = np.unique(labels, axis=0, return_inverse=True)
        norb = uniq.shape[0]
        minkeys = np.full(norb, np.iinfo(np.uint64).max, dtype=np.uint64)
        np.minimum.at(minkeys, inverse, keys)
        order_ids = np.argsort(minkeys, kind="stable")
        reps = []
        lengths = []
        label_to_id = {}
        for new_id, old in enumerate(order_ids):
            rep = subspace_from_key(self.n, k, int(minkeys[old]))
            reps.append(rep)
            lengths.append(self.orbit_size(rep))
            label_to_id[tuple(int(x) for x in uniq[old])] = new_id
        return reps, lengths, label_to_id

    def expand_orbit(self, u: Subspace) -> np.ndarray:
        """All distinct subspaces in the orbit of u, as (L, k) basis rows."""
        k = u.dim
        d = self.subspace_exps(u).astype(np.int64)
        shifts = np.arange(self.modulus, dtype=np.int64)
        parts = []
        for t in self.slopes:
            scaled = (t * d) % self.modulus
            block = (scaled[None, :] + shifts[:, None]) % self.modulus
            parts.append(block)
        exps = np.concatenate(parts, axis=0)
        exps.sort(axis=1)
        rows = self.exps_to_rows(exps, k)
        keys = pack_keys_bulk(rows, self.n)
        _, first = np.unique(keys, return_index=True)
        return rows[first]


def _slope_closure(gens: list[int], modulus: int) -> tuple[int, ...] | None:
    group = {1}
    frontier = [1]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = (cur * g) % modulus
            if nxt not in group:
                group.add(nxt)
                frontier.append(nxt)
                if len(group) > MAX_SLOPE_GROUP:
                    return None
    return tuple(sorted(group))
