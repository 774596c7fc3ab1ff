"""Shared instance families for the tests, computed once per session."""
from __future__ import annotations

from functools import lru_cache

from fincat.corpus import corpus_functors
from fincat.decision import right_fraction_subsets
from fincat.limits import has_finite_limits, preserves_finite_limits


@lru_cache(maxsize=None)
def certified():
    """Corpus functors whose domain has finite limits that they preserve."""
    out = []
    for name, F in corpus_functors():
        if has_finite_limits(F.domain).holds and preserves_finite_limits(F).holds:
            out.append((name, F))
    return tuple(out)


@lru_cache(maxsize=None)
def sigma_pairs(max_objects: int = 4):
    """Distinct ``(C, Σ)`` with certified right fractions, ``Σ ⊆ S_C`` of a corpus functor."""
    seen = set()
    out = []
    for _, F in certified():
        C = F.domain
        if C.n_objects > max_objects:
            continue
        for s in right_fraction_subsets(F, max_free=6):
            key = (C, s)
            if key not in seen:
                seen.add(key)
                out.append((C, s))
    return tuple(out)
