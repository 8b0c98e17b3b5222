"""Matrix groups over GF(2) and their orbits on subspaces.

Groups act on column vectors from the left, so the image of a subspace
applies the matrix to every basis row and recanonicalizes.  Orbit
partitions come in three strategies: full enumeration walks every
subspace key in ascending order, extension seeds orbits from the
(k-1)-dim table, and both fall back to explicit breadth-first traversal;
groups built on a Singer cycle get an exponent-arithmetic fast path that
avoids traversal entirely (see singer).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .gf2 import (
    BitMatrix,
    FormatError,
    column_action,
    companion_matrix,
    format_matrix,
    frobenius_matrix,
    identity,
    mat_vec,
    parse_matrix_text,
    primitive_polynomial,
    rank,
    row_action,
    rref_rows,
)
from .singer import SingerEngine
from .subspace import (
    Subspace,
    enumerate_keys_bulk,
    gaussian_binomial,
    span,
    subspace_from_key,
)

CLOSURE_CAP = 10**7
TRAVERSAL_CAP = 2 * 10**7


class ClosureCapError(RuntimeError):
    """Group closure would exceed the element cap."""


class StrategyError(RuntimeError):
    """The requested orbit strategy is infeasible for this instance."""


@dataclass
class MatrixGroup:
    """A subgroup of GL(n, 2) given by generators.

    elements, when present, is the dense list of group elements as
    packed row tuples; order is filled by group_closure or by a
    certified structure detection.
    """

    n: int
    generators: tuple[BitMatrix, ...]
    elements: tuple[tuple[int, ...], ...] | None = None
    order: int | None = None
    _engine: SingerEngine | None = field(default=None, repr=False, compare=False)
    _engine_tried: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.generators = tuple(self.generators)
        if not self.generators:
            raise ValueError("a matrix group needs at least one generator")
        for g in self.generators:
            if g.ncols != self.n or g.nrows != self.n:
                raise ValueError("generator shape does not match the group dimension")
            if rank(g) != self.n:
                raise ValueError("generators must be invertible")

    def engine(self) -> SingerEngine | None:
        """Certified Singer-structure engine, or None; cached."""
        if not self._engine_tried:
            self._engine = SingerEngine.detect(list(self.generators), self.n)
            self._engine_tried = True
            if self._engine is not None:
                if self.order is None:
                    self.order = self._engine.order
                elif self.order != self._engine.order:
                    raise AssertionError(
                        "structure-derived group order disagrees with the stored order"
                    )
        return self._engine


def group_hash(group: MatrixGroup) -> str:
    """Stable 16-hex-digit digest of (n, generators); order-sensitive."""
    payload = f"{group.n}|" + "|".join(
        ",".join(str(r) for r in g.rows) for g in group.generators
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def group_closure(group: MatrixGroup, cap: int = CLOSURE_CAP) -> MatrixGroup:
    """Enumerate all elements by breadth-first right multiplication.

    Returns a new MatrixGroup with elements and order filled.  Raises
    ClosureCapError when more than cap elements appear.
    """
    gens = [row_action(g) for g in group.generators]
    start = identity(group.n).rows
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for rows in frontier:
            for apply_g in gens:
                img = tuple(apply_g(r) for r in rows)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
                    if len(seen) > cap:
                        raise ClosureCapError(
                            f"group closure exceeded the cap of {cap} elements"
                        )
        frontier = nxt
    if group.order is not None and group.order != len(seen):
        raise AssertionError("closure size disagrees with the recorded group order")
    return MatrixGroup(
        n=group.n,
        generators=group.generators,
        elements=tuple(sorted(seen)),
        order=len(seen),
    )


def singer_normalizer(n: int) -> MatrixGroup:
    """The normalizer of a Singer cycle in GL(n, 2).

    Generated by the companion matrix of a primitive polynomial of
    degree n (order 2^n - 1, transitive on nonzero vectors) and the
    matrix of the squaring map (order n).  The group order is
    (2^n - 1) * n.
    """
    p = primitive_polynomial(n)
    s = companion_matrix(p)
    f = frobenius_matrix(p)
    return MatrixGroup(n=n, generators=(s, f), order=(2**n - 1) * n)


def act(g: BitMatrix, u: Subspace) -> Subspace:
    """Image of a subspace under a matrix: span of g @ b over basis rows b.

    Left action: act(mat_mul(g, h), u) == act(g, act(h, u)).
    """
    if g.ncols != u.ambient:
        raise ValueError("matrix width does not match the ambient dimension")
    return span([mat_vec(g, r) for r in u.rows], u.ambient)


def orbit(group: MatrixGroup, u: Subspace, cap: int = TRAVERSAL_CAP) -> list[Subspace]:
    """All images of u under the group, sorted by key; BFS over generators."""
    if u.ambient != group.n:
        raise ValueError("subspace does not live in the group's space")
    acts = [column_action(g) for g in group.generators]
    seen = {u.rows}
    frontier = [u.rows]
    while frontier:
        nxt = []
        for rows in frontier:
            for apply_g in acts:
                red, _ = rref_rows([apply_g(r) for r in rows])
                if red not in seen:
                    seen.add(red)
                    nxt.append(red)
                    if len(seen) > cap:
                        raise StrategyError(f"orbit exceeded the traversal cap {cap}")
        frontier = nxt
    members = [Subspace(group.n, rows) for rows in seen]
    members.sort(key=lambda s: s.key)
    return members


@dataclass(eq=False)
class OrbitTable:
    """Orbit representatives of k-dim subspaces under a group.

    ids run 0..len(reps)-1 in ascending representative key order.  The
    lookup index is materialized lazily: Singer-structured groups map a
    subspace to its orbit label arithmetically, other tables fall back
    to sorted key arrays built during partition or rebuilt by traversal.
    """

    n: int
    k: int
    group: MatrixGroup | None
    reps: list[Subspace]
    lengths: list[int]
    strategy: str = "unknown"
    _label_index: dict[tuple[int, ...], int] | None = field(default=None, repr=False)
    _key_sorted: np.ndarray | None = field(default=None, repr=False)
    _key_ids: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if len(self.reps) != len(self.lengths):
            raise ValueError("reps and lengths differ in length")
        keys = [r.key for r in self.reps]
        if any(b <= a for a, b in zip(keys, keys[1:])):
            raise ValueError("representatives must be in strictly ascending key order")

    @property
    def num_orbits(self) -> int:
        return len(self.reps)

    def total_subspaces(self) -> int:
        return sum(self.lengths)

    # -- lookup -----------------------------------------------------------

    def _ensure_index(self) -> None:
        if self._label_index is not None or self._key_sorted is not None:
            return
        engine = self.group.engine() if self.group is not None else None
        if engine is not None:
            labels = {}
            for i, rep in enumerate(self.reps):
                labels[engine.label_of(rep)] = i
            self._label_index = labels
            return
        if self.group is None:
            raise StrategyError("orbit lookup needs the group to rebuild its index")
        total = self.total_subspaces()
        if total > TRAVERSAL_CAP:
            raise StrategyError(
                f"rebuilding the lookup index would traverse {total} subspaces"
            )
        keys = []
        ids = []
        for i, rep in enumerate(self.reps):
            members = orbit(self.group, rep)
            if len(members) != self.lengths[i]:
                raise AssertionError("stored orbit length disagrees with traversal")
            keys.extend(m.key for m in members)
            ids.extend([i] * len(members))
        keys = np.array(keys, dtype=np.uint64)
        ids = np.array(ids, dtype=np.int64)
        srt = np.argsort(keys)
        self._key_sorted = keys[srt]
        self._key_ids = ids[srt]

    def lookup(self, u: Subspace) -> int:
        """Orbit id of a subspace; raises for wrong shape or foreign subspace."""
        if u.ambient != self.n or u.dim != self.k:
            raise ValueError(
                f"lookup expects a {self.k}-dim subspace of GF(2)^{self.n}"
            )
        self._ensure_index()
        if self._label_index is not None:
            engine = self.group.engine()
            label = engine.label_of(u)
            if label not in self._label_index:
                raise KeyError("subspace does not belong to any tabulated orbit")
            return self._label_index[label]
        pos = int(np.searchsorted(self._key_sorted, np.uint64(u.key)))
        if pos >= self._key_sorted.size or int(self._key_sorted[pos]) != u.key:
            raise KeyError("subspace does not belong to any tabulated orbit")
        return int(self._key_ids[pos])

    def lookup_rows_bulk(self, rows: np.ndarray) -> np.ndarray:
        """Orbit ids for many subspaces given as (N, k) RREF rows."""
        self._ensure_index()
        if self._label_index is not None:
            engine = self.group.engine()
            exps = engine.rows_to_exps(rows)
            words = engine.labels_bulk(exps)
            out = np.empty(words.shape[0], dtype=np.int64)
            index = self._label_index
            for i in range(words.shape[0]):
                label = tuple(int(x) for x in words[i])
                if label not in index:
                    raise KeyError("subspace does not belong to any tabulated orbit")
                out[i] = index[label]
            return out
        from .subspace import pack_keys_bulk

        keys = pack_keys_bulk(rows, self.n)
        pos = np.searchsorted(self._key_sorted, keys)
        if (pos >= self._key_sorted.size).any() or not np.array_equal(
            self._key_sorted[pos], keys
        ):
            raise KeyError("subspace does not belong to any tabulated orbit")
        return self._key_ids[pos]

    # -- serialization ----------------------------------------------------

    def save(self, path: str) -> None:
        if self.group is None:
            raise ValueError("cannot save a table without its group")
        order = self.group.order
        if order is None:
            engine = self.group.engine()
            order = engine.order if engine is not None else None
        if order is None:
            order = group_closure(self.group).order
            self.group.order = order
        lines = [
            "# orbit table: n k group-hash group-order, then id length + basis rows",
            f"{self.n} {self.k} {group_hash(self.group)} {order}",
            "",
        ]
        for i, (rep, length) in enumerate(zip(self.reps, self.lengths)):
            lines.append(f"{i} {length}")
            lines.append(format_matrix(rep.basis_matrix()).rstrip("\n"))
            lines.append("")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines))

    @classmethod
    def load(
        cls,
        path: str,
        group: MatrixGroup | None = None,
        validate_lengths: bool | None = None,
    ) -> "OrbitTable":
        """Read a table; hash, order, and length-sum are always checked.

        Per-orbit lengths are re-derived when validate_lengths is True,
        or by default for tables of at most 2000 orbits; downstream
        double counting in the incidence build rejects bad lengths in
        any case.
        """
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
        header = None
        body_start = 0
        for lineno, line in enumerate(raw.splitlines(), start=1):
            stripped = line.split("#", 1)[0].strip()
            if stripped:
                header = stripped.split()
                body_start = lineno
                break
        if header is None or len(header) != 4:
            raise FormatError("missing or malformed orbit table header")
        n, k = int(header[0]), int(header[1])
        ghash, order = header[2], int(header[3])
        if group is not None:
            if group.n != n:
                raise FormatError("group dimension does not match the table header")
            if group_hash(group) != ghash:
                raise FormatError("group hash does not match the table header")
            if group.order is None:
                group.order = order
        body = raw.splitlines()[body_start:]
        reps: list[Subspace] = []
        lengths: list[int] = []
        i = 0
        while i < len(body):
            line = body[i].split("#", 1)[0].strip()
            if not line:
                i += 1
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"expected 'id length' at table entry {len(reps)}")
            oid, length = int(parts[0]), int(parts[1])
            if oid != len(reps):
                raise FormatError(f"orbit ids must be consecutive; got {oid}")
            rows = []
            i += 1
            for _ in range(k):
                row_text = body[i].split("#", 1)[0].strip() if i < len(body) else ""
                if len(row_text) != n or any(c not in "01" for c in row_text):
                    raise FormatError(f"orbit {oid}: expected {k} basis rows of width {n}")
                rows.append(sum(1 << j for j, c in enumerate(row_text) if c == "1"))
                i += 1
            reps.append(Subspace(n, tuple(rows)))
            lengths.append(length)
        table = cls(n=n, k=k, group=group, reps=reps, lengths=lengths, strategy="file")
        if order and group is not None and group.order != order:
            raise FormatError("group order disagrees with the table header")
        total = sum(lengths)
        expect = gaussian_binomial(n, k, 2)
        if total != expect:
            raise FormatError(
                f"orbit lengths sum to {total}, but GF(2)^{n} has {expect} "
                f"{k}-subspaces"
            )
        if validate_lengths is None:
            validate_lengths = len(reps) <= 2000
        if validate_lengths and group is not None:
            engine = group.engine()
            if engine is not None:
                for i, (rep, length) in enumerate(zip(reps, lengths)):
                    if engine.orbit_size(rep) != length:
                        raise FormatError(f"orbit {i}: recorded length {length} is wrong")
        return table


def orbit_lookup(table: OrbitTable, u: Subspace) -> int:
    return table.lookup(u)


# ---------------------------------------------------------------------------
# partition strategies


def orbit_partition(
    group: MatrixGroup,
    k: int,
    strategy: str = "auto",
    guard: int = 10**8,
    prev: OrbitTable | None = None,
) -> OrbitTable:
    """Partition all k-dim subspaces of GF(2)^n into orbits under group.

    strategy: 'auto' picks the Singer engine when the group structure
    certifies, then full enumeration under the guard, then extension;
    'full-enumeration' and 'extension' force the generic algorithms.
    """
    if not 0 <= k <= group.n:
        raise ValueError(f"k must be between 0 and {group.n}")
    if strategy == "auto":
        engine = group.engine()
        if engine is not None:
            return _partition_engine(group, k)
        if gaussian_binomial(group.n, k, 2) <= guard:
            return _partition_full(group, k, guard)
        return _partition_extension(group, k, prev)
    if strategy == "full-enumeration":
        return _partition_full(group, k, guard)
    if strategy == "extension":
        return _partition_extension(group, k, prev)
    raise ValueError(f"unknown orbit strategy: {strategy}")


def _partition_engine(group: MatrixGroup, k: int) -> OrbitTable:
    engine = group.engine()
    assert engine is not None
    prev_reps: list[Subspace] = []
    for kk in range(k + 1):
        reps, lengths, label_index = engine.partition(kk, prev_reps)
        prev_reps = reps
    total = sum(lengths)
    expect = gaussian_binomial(group.n, k, 2)
    if total != expect:
        raise AssertionError(
            f"orbit lengths sum to {total}, expected {expect}; engine bug"
        )
    return OrbitTable(
        n=group.n,
        k=k,
        group=group,
        reps=reps,
        lengths=lengths,
        strategy="singer",
        _label_index=label_index,
    )


def _partition_full(group: MatrixGroup, k: int, guard: int) -> OrbitTable:
    keys = enumerate_keys_bulk(group.n, k, guard)
    assigned = np.full(keys.size, -1, dtype=np.int64)
    acts = [column_action(g) for g in group.generators]
    reps: list[Subspace] = []
    lengths: list[int] = []
    for pos in range(keys.size):
        if assigned[pos] >= 0:
            continue
        seed = subspace_from_key(group.n, k, int(keys[pos]))
        member_keys = _orbit_member_keys(seed, acts)
        idx = np.searchsorted(keys, member_keys)
        if not np.array_equal(keys[idx], member_keys):
            raise AssertionError("orbit member key missing from the enumeration")
        assigned[idx] = len(reps)
        reps.append(seed)
        lengths.append(member_keys.size)
    if (assigned < 0).any():
        raise AssertionError("enumeration walk left unassigned subspaces")
    return OrbitTable(
        n=group.n,
        k=k,
        group=group,
        reps=reps,
        lengths=lengths,
        strategy="full-enumeration",
        _key_sorted=keys,
        _key_ids=assigned,
    )


def _orbit_member_keys(seed: Subspace, acts) -> np.ndarray:
    from .subspace import _pack_key

    n = seed.ambient
    seen = {seed.rows}
    frontier = [seed.rows]
    while frontier:
        nxt = []
        for rows in frontier:
            for apply_g in acts:
                red, _ = rref_rows([apply_g(r) for r in rows])
                if red not in seen:
                    seen.add(red)
                    nxt.append(red)
        frontier = nxt
    out = np.empty(len(seen), dtype=np.uint64)
    for i, rows in enumerate(seen):
        pivots = tuple((r & -r).bit_length() - 1 for r in rows)
        out[i] = _pack_key(n, rows, pivots)
    out.sort()
    return out


def _partition_extension(
    group: MatrixGroup, k: int, prev: OrbitTable | None
) -> OrbitTable:
    total = gaussian_binomial(group.n, k, 2)
    if total > TRAVERSAL_CAP:
        raise StrategyError(
            f"extension traversal would visit {total} subspaces; "
            "this group has no certified fast structure, so the instance "
            "is out of reach for the generic strategy"
        )
    if k == 0:
        return OrbitTable(
            n=group.n, k=0, group=group, reps=[Subspace(group.n, ())], lengths=[1],
            strategy="extension",
        )
    if prev is None:
        prev = orbit_partition(group, k - 1, strategy="extension")
    if prev.k != k - 1 or prev.n != group.n:
        raise ValueError("previous table must hold (k-1)-dim orbits of the same space")
    from .subspace import contains

    acts = [column_action(g) for g in group.generators]
    candidates: dict[int, Subspace] = {}
    for rep in prev.reps:
        for v in range(1, 1 << group.n):
            if contains(rep, v):
                continue
            cand = span(rep.rows + (v,), group.n)
            candidates.setdefault(cand.key, cand)
    pending = sorted(candidates)
    assigned: dict[int, int] = {}
    entries: list[tuple[Subspace, int, np.ndarray]] = []
    for key in pending:
        if key in assigned:
            continue
        member_keys = _orbit_member_keys(candidates[key], acts)
        rep = subspace_from_key(group.n, k, int(member_keys[0]))
        for mk in member_keys:
            if int(mk) in candidates:
                assigned[int(mk)] = len(entries)
        entries.append((rep, member_keys.size, member_keys))
    entries.sort(key=lambda e: e[0].key)
    if sum(e[1] for e in entries) != total:
        raise AssertionError("extension orbits do not cover every subspace")
    keys = np.concatenate([e[2] for e in entries])
    ids = np.concatenate(
        [np.full(e[2].size, i, dtype=np.int64) for i, e in enumerate(entries)]
    )
    srt = np.argsort(keys)
    return OrbitTable(
        n=group.n,
        k=k,
        group=group,
        reps=[e[0] for e in entries],
        lengths=[e[1] for e in entries],
        strategy="extension",
        _key_sorted=keys[srt],
        _key_ids=ids[srt],
    )


# ---------------------------------------------------------------------------
# group file output


def format_group(group: MatrixGroup) -> str:
    lines = [
        f"# group: n={group.n} generators={len(group.generators)}",
        f"n {group.n}",
        f"order {group.order if group.order is not None else 'unknown'}",
        f"hash {group_hash(group)}",
        "",
    ]
    for i, g in enumerate(group.generators):
        lines.append(f"# generator {i}")
        lines.append(format_matrix(g).rstrip("\n"))
        lines.append("")
    return "\n".join(lines)


def load_generator_file(path: str, n: int | None = None) -> MatrixGroup:
    """Read generators from a matrix text file into a MatrixGroup."""
    mats = []
    with open(path, "r", encoding="utf-8") as fh:
        mats = parse_matrix_text(fh.read())
    if not mats:
        raise FormatError(f"{path}: no matrices found")
    width = mats[0].ncols
    if n is not None and width != n:
        raise FormatError(f"{path}: generators have width {width}, expected {n}")
    return MatrixGroup(n=width, generators=tuple(mats))
