"""Vectorized counit/unit bijectivity over many small presheaves at once.

The colimit over ``(b↓F)^op`` is computed for a whole batch of presheaves
by min-label propagation on the disjoint union of the node sets, one numpy
column per element slot.  This is the fast route for exhaustive probe
families; :class:`fincat.presheaf.KanExtension` remains the reference.
"""
from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .core import FinCat
from .enumerate import _constraints, _plan
from .presheaf import KanExtension, Presheaf

_BIG = np.iinfo(np.int32).max


class TableBatch:
    """``P`` presheaves on ``c`` with values of size at most ``width``.

    ``sizes[p, x]`` and ``action[p, k, v]`` (``-1`` past the value size).
    """

    def __init__(self, c: FinCat, tables: Iterable[tuple[Sequence[int], Sequence[Sequence[int]]]], width: int):
        self.base = c
        self.width = width
        tables = list(tables)
        P = len(tables)
        self.sizes = np.zeros((P, c.n_objects), dtype=np.int32)
        self.action = np.full((P, c.n_morphisms, max(width, 1)), -1, dtype=np.int32)
        for p, (sizes, action) in enumerate(tables):
            self.sizes[p] = sizes
            for k, fn in enumerate(action):
                if fn:
                    self.action[p, k, : len(fn)] = fn

    @classmethod
    def from_arrays(cls, c: FinCat, sizes: np.ndarray, action: np.ndarray, width: int) -> "TableBatch":
        out = cls(c, (), width)
        out.sizes, out.action = sizes, action
        return out

    def __len__(self) -> int:
        return self.sizes.shape[0]

    def table(self, p: int) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
        sizes = tuple(int(n) for n in self.sizes[p])
        action = tuple(tuple(int(v) for v in self.action[p, k, : sizes[self.base.tgt[k]]]) for k in self.base.morphisms)
        return sizes, action

    def presheaf(self, p: int) -> Presheaf:
        return Presheaf(self.base, *self.table(p))


def enumerate_batch(c: FinCat, max_size: int, *, inverting: Iterable[int] = ()) -> TableBatch:
    """Every presheaf with values of size ``<= max_size``, as one batch.

    Same family and the same order as :func:`fincat.enumerate.presheaf_tables`;
    partial assignments are extended one morphism at a time and filtered
    against the composition constraints in bulk.
    """
    inv = frozenset(inverting)
    W = max(max_size, 1)
    order, derived = _plan(c)
    cons = _constraints(c, order)
    sizes = np.array(list(product(range(max_size + 1), repeat=c.n_objects)), dtype=np.int32).reshape(-1, c.n_objects)
    for k in inv:
        sizes = sizes[sizes[:, c.src[k]] == sizes[:, c.tgt[k]]]
    P = sizes.shape[0]
    action = np.full((P, c.n_morphisms, W), -1, dtype=np.int32)
    for o in c.objects:
        i = c.identity(o)
        action[:, i, :] = np.where(np.arange(W)[None, :] < sizes[:, o : o + 1], np.arange(W)[None, :], -1)
    # padded candidate functions in lexicographic order, -1 first
    cands = np.array(list(product(range(-1, W), repeat=W)), dtype=np.int32)
    slot = np.arange(W)
    for k in order:
        nt, ns = sizes[:, c.tgt[k]], sizes[:, c.src[k]]
        if k in derived:
            g, f = derived[k]
            ag, af = action[:, g, :], action[:, f, :]
            comp = np.take_along_axis(af, np.maximum(ag, 0), axis=1)
            action[:, k, :] = np.where(ag >= 0, comp, -1)
            keep = np.ones(len(sizes), dtype=bool)
            if k in inv:
                keep &= _injective(action[:, k, :])
        else:
            live = slot[None, None, :] < nt[:, None, None]
            ok = np.where(live, (cands[None] >= 0) & (cands[None] < ns[:, None, None]), cands[None] == -1).all(axis=2)
            if k in inv:
                ok &= np.array([len(set(q[q >= 0])) == (q >= 0).sum() for q in cands])[None, :]
            rows, which = np.nonzero(ok)
            sizes, action = sizes[rows], action[rows]
            action[:, k, :] = cands[which]
            keep = np.ones(len(sizes), dtype=bool)
        for g, f, h in cons[k]:
            ag = action[:, g, :]
            comp = np.take_along_axis(action[:, f, :], np.maximum(ag, 0), axis=1)
            keep &= np.all((ag < 0) | (comp == action[:, h, :]), axis=1)
        if not keep.all():
            sizes, action = sizes[keep], action[keep]
    return TableBatch.from_arrays(c, sizes, action, max_size)


def _injective(a: np.ndarray) -> np.ndarray:
    W = a.shape[1]
    ok = np.ones(a.shape[0], dtype=bool)
    for v in range(W):
        for w in range(v + 1, W):
            ok &= (a[:, v] < 0) | (a[:, v] != a[:, w])
    return ok


def _labels(node_sizes: np.ndarray, edges: list[tuple[int, int, np.ndarray]], width: int) -> np.ndarray:
    """Component labels (minimum slot index) for every valid slot, ``_BIG`` elsewhere.

    ``node_sizes`` is ``(P, N)``; each edge ``(s, t, fn)`` identifies
    ``(t, v)`` with ``(s, fn[:, v])``.
    """
    P, N = node_sizes.shape
    W = max(width, 1)
    slot = np.arange(N * W, dtype=np.int32)
    valid = (np.arange(W)[None, None, :] < node_sizes[:, :, None]).reshape(P, N * W)
    lab = np.where(valid, slot[None, :], _BIG).astype(np.int32)
    rows = np.arange(P)
    links = []
    for s, t, fn in edges:
        for v in range(W):
            a = t * W + v
            tgt = fn[:, v]
            ok = tgt >= 0
            links.append((a, s * W + np.where(ok, tgt, 0), ok))
    changed = True
    while changed:
        changed = False
        for a, b, ok in links:
            la, lb = lab[:, a], lab[rows, b]
            m = np.minimum(la, lb)
            upd = ok & (m < la)
            if upd.any():
                lab[upd, a] = m[upd]
                changed = True
            upd = ok & (m < lb)
            if upd.any():
                lab[rows[upd], b[upd]] = m[upd]
                changed = True
    return lab


def _roots(lab: np.ndarray) -> np.ndarray:
    """Number of components per row."""
    slot = np.arange(lab.shape[1], dtype=np.int32)
    return (lab == slot[None, :]).sum(axis=1)


def counit_bijective(kan: KanExtension, ys: TableBatch) -> np.ndarray:
    """``(P, |B|)`` booleans: is the counit component at ``b`` a bijection."""
    F = kan.F
    C, B = F.domain, F.codomain
    W = max(ys.width, 1)
    P = len(ys)
    out = np.zeros((P, B.n_objects), dtype=bool)
    rows = np.arange(P)
    for b in B.objects:
        cm = kan.commas[b]
        objs = [F.obj(c) for c, _ in cm.labels]
        node_sizes = ys.sizes[:, objs]
        edges = [(i, j, ys.action[:, F(k), :]) for i, j, k in cm.arrows if not C.is_identity(k)]
        lab = _labels(node_sizes, edges, W)
        classes = _roots(lab)
        size_b = ys.sizes[:, b]
        hit = np.zeros((P, W), dtype=bool)
        for n, (_, beta) in enumerate(cm.labels):
            img = ys.action[:, beta, :]
            for v in range(W):
                ok = (v < node_sizes[:, n]) & (img[:, v] >= 0)
                hit[rows[ok], img[ok, v]] = True
        surj = np.all(hit | (np.arange(W)[None, :] >= size_b[:, None]), axis=1)
        out[:, b] = surj & (classes == size_b)
    return out


def unit_bijective(kan: KanExtension, xs: TableBatch) -> np.ndarray:
    """``(P, |C|)`` booleans: is the unit component at ``d`` a bijection."""
    F = kan.F
    C, B = F.domain, F.codomain
    W = max(xs.width, 1)
    P = len(xs)
    out = np.zeros((P, C.n_objects), dtype=bool)
    done: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for d in C.objects:
        fd = F.obj(d)
        cm = kan.commas[fd]
        if fd not in done:
            objs = [c for c, _ in cm.labels]
            edges = [(i, j, xs.action[:, k, :]) for i, j, k in cm.arrows if not C.is_identity(k)]
            lab = _labels(xs.sizes[:, objs], edges, W)
            done[fd] = (lab, _roots(lab))
        lab, classes = done[fd]
        node = cm.index((d, B.identity(fd)))
        size_d = xs.sizes[:, d]
        inj = np.ones(P, dtype=bool)
        for v in range(W):
            for w in range(v + 1, W):
                inj &= (w >= size_d) | (lab[:, node * W + v] != lab[:, node * W + w])
        out[:, d] = inj & (classes == size_d)
    return out
