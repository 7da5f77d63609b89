"""Integer encoding of an extended category for fast exhaustive checking.

Morphisms become indices in canonical order and element sets become Python
int bitmasks over those indices.  The composition oracle is evaluated once
into a table; set-level composition ``A ; B`` is then the union of per-row
bitmasks precomputed for each right-hand set ``B``.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .model import ExtendedCategory, Morphism, mask_bits

UNDEFINED = -1


def bit_list(mask: int) -> list[int]:
    return list(mask_bits(mask))


class Engine:
    def __init__(self, ec: ExtendedCategory):
        self.ec = ec
        self.morphs: list[Morphism] = list(ec.morphisms)
        self.mid: dict[Morphism, int] = {m: i for i, m in enumerate(self.morphs)}
        self.base = len(self.morphs)
        self.objects = ec.objects
        self.oid = ec.object_index
        self.elem_masks: list[list[int]] = [[self.mask(e) for e in o.ordered] for o in self.objects]
        self.union: list[int] = []
        for masks in self.elem_masks:
            u = 0
            for m in masks:
                u |= m
            self.union.append(u)
        self._table: Optional[np.ndarray] = None
        self._extra: dict[tuple[int, int], int] = {}
        self._bits: dict[int, list[int]] = {}
        self._rows: dict[int, tuple[list[int], int]] = {}
        self._good: dict[int, int] = {}
        self._composite: dict[tuple[int, int], tuple[int, Optional[tuple[int, int]]]] = {}
        self._cands: dict[int, list[int]] = {}
        self._search: dict[tuple[int, ...], Optional[tuple[int, tuple[int, ...]]]] = {}

    def mask(self, members) -> int:
        m = 0
        for x in members:
            m |= 1 << self.mid[x]
        return m

    def members(self, mask: int) -> frozenset[Morphism]:
        return frozenset(self.morphs[i] for i in mask_bits(mask))

    def index_of(self, m: Morphism) -> int:
        i = self.mid.get(m)
        if i is None:
            i = self.mid[m] = len(self.morphs)
            self.morphs.append(m)
        return i

    def bits(self, mask: int) -> list[int]:
        b = self._bits.get(mask)
        if b is None:
            b = self._bits[mask] = bit_list(mask)
        return b

    # -- composition table ----------------------------------------------------

    @property
    def table(self) -> np.ndarray:
        """Square table over the base morphisms and their direct composites."""
        if self._table is None:
            self._table = self._build_table()
        return self._table

    def _fill(self, t: np.ndarray, rows, cols) -> None:
        compose = self.ec.compose_uncached
        morphs = self.morphs
        for i in rows:
            f = morphs[i]
            for j in cols:
                c = compose(f, morphs[j])
                if c is not None:
                    t[i, j] = self.index_of(c)

    def _build_table(self) -> np.ndarray:
        n = self.base
        t = np.full((n, n), UNDEFINED, dtype=np.int64)
        self._fill(t, range(n), range(n))
        k = len(self.morphs)
        if k > n:
            # composites that are not members of any element set get one more level
            grown = np.full((k, k), UNDEFINED, dtype=np.int64)
            grown[:n, :n] = t
            self._fill(grown, range(n, k), range(k))
            self._fill(grown, range(n), range(n, k))
            t = grown
        return t

    def comp(self, a: int, b: int) -> int:
        t = self.table
        k = t.shape[0]
        if a < k and b < k:
            return int(t[a, b])
        key = (a, b)
        r = self._extra.get(key)
        if r is None:
            c = self.ec.compose_uncached(self.morphs[a], self.morphs[b])
            r = self._extra[key] = UNDEFINED if c is None else self.index_of(c)
        return r

    # -- set-level composition ------------------------------------------------

    def rows(self, right: int) -> tuple[list[int], int]:
        """For a right-hand set (bitmask over base morphisms): per table row ``a``
        the mask of ``{a ; b : b in right}``, and the mask of rows for which
        every such composite is defined."""
        r = self._rows.get(right)
        if r is None:
            t = self.table
            cols = np.fromiter(self.bits(right), dtype=np.int64)
            sub = t[:, cols]
            defined = sub >= 0
            good = _pack_rows(defined.all(axis=1)[None, :])[0]
            width = max(len(self.morphs), int(sub.max(initial=0)) + 1)
            hit = np.zeros((t.shape[0], width), dtype=bool)
            ri, ci = np.nonzero(defined)
            hit[ri, sub[ri, ci]] = True
            r = self._rows[right] = (_pack_rows(hit), good)
        return r

    def good_left(self, right: int) -> int:
        """Mask of table rows composable with every member of ``right``."""
        g = self._good.get(right)
        if g is None:
            if right in self._rows:
                g = self._rows[right][1]
            else:
                cols = np.fromiter(self.bits(right), dtype=np.int64)
                g = _pack_rows((self.table[:, cols] >= 0).all(axis=1)[None, :])[0]
            self._good[right] = g
        return g

    def composite(self, left: int, right: int) -> tuple[int, Optional[tuple[int, int]]]:
        """Mask of ``left ; right`` and the first undefined pair, if any."""
        key = (left, right)
        r = self._composite.get(key)
        if r is None:
            rows, good = self.rows(right)
            k = len(rows)
            bad = left & ~good
            if bad:
                a = (bad & -bad).bit_length() - 1
                if a < k:
                    b = next(b for b in self.bits(right) if self.comp(a, b) < 0)
                    r = (0, (a, b))
            if r is None:
                out = 0
                for a in self.bits(left):
                    if a < k:
                        out |= rows[a]
                        continue
                    for b in self.bits(right):
                        c = self.comp(a, b)
                        if c < 0:
                            out = None
                            r = (0, (a, b))
                            break
                        out |= 1 << c
                    if out is None:
                        break
                if r is None:
                    r = (out, None)
            self._composite[key] = r
        return r

    # -- witness search -------------------------------------------------------

    def candidates(self, probe: int) -> list[int]:
        """Objects (canonical order) with some member set able to contain ``probe``."""
        c = self._cands.get(probe)
        if c is None:
            c = self._cands[probe] = [o for o, u in enumerate(self.union) if probe & ~u == 0]
        return c

    def first_superset(self, oi: int, mask: int) -> int:
        for k, em in enumerate(self.elem_masks[oi]):
            if mask & ~em == 0:
                return k
        return -1

    def search_object(self, demands: tuple[int, ...]) -> Optional[tuple[int, tuple[int, ...]]]:
        """First object that has, for each demand, an element set containing it;
        returns its index and the chosen element index per demand."""
        if demands in self._search:
            return self._search[demands]
        result = None
        if not demands:
            if self.objects:
                result = (0, ())
        else:
            probe = 0
            for d in demands:
                probe |= d
            for oi in self.candidates(probe):
                inner = []
                for d in demands:
                    k = self.first_superset(oi, d)
                    if k < 0:
                        break
                    inner.append(k)
                else:
                    result = (oi, tuple(inner))
                    break
        self._search[demands] = result
        return result

    # -- associativity ----------------------------------------------------------

    def nonassociative_triples(self, limit: int = 100_000) -> Optional[list[tuple[int, int, int, bool]]]:
        """Triples ``(a, b, c)`` of base morphisms with ``a ; b`` and ``b ; c``
        defined where a nested composite is undefined or the two differ.

        Each entry ends with True when a nested composite is undefined.
        Returns None if more than ``limit`` triples are bad.
        """
        t = self.table
        n = self.base
        if n == 0:
            return []
        bc = t[:n, :n]
        bc_def = bc >= 0
        bc_safe = np.where(bc_def, bc, 0)
        cols = np.arange(n)
        out: list[tuple[int, int, int, bool]] = []
        for a in range(n):
            ab = t[a, :n]
            ab_def = ab >= 0
            if not ab_def.any():
                continue
            live = ab_def[:, None] & bc_def
            if not live.any():
                continue
            left = t[a][bc_safe]
            right = t[np.where(ab_def, ab, 0)[:, None], cols[None, :]]
            undefined = (left < 0) | (right < 0)
            bad = live & (undefined | (left != right))
            if bad.any():
                for b, c in zip(*np.nonzero(bad)):
                    out.append((a, int(b), int(c), bool(undefined[b, c])))
                    if len(out) > limit:
                        return None
        return out


def _pack_rows(matrix: np.ndarray) -> list[int]:
    packed = np.packbits(matrix, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]
