"""Bounded in-memory cache of ground states shared by sweep and peak workers."""

from __future__ import annotations

import threading
from collections import OrderedDict
from typing import Optional

from lmg_fidelity.models.params import LmgParams
from lmg_fidelity.services.eigensolver import GroundState, ground_state
from lmg_fidelity.settings import settings


class GroundStateCache:
    """LRU keyed by (params, tol).

    Lookups and inserts hold the lock; solves run outside it, so two workers
    may race to compute the same key and the first insert wins.
    """

    def __init__(self, maxsize: Optional[int] = None):
        self.maxsize = settings.numerics.cache_size if maxsize is None else maxsize
        self._entries: "OrderedDict[tuple, GroundState]" = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    @staticmethod
    def _key(params: LmgParams, tol: Optional[float]) -> tuple:
        return (params.n_spins, params.gamma, params.field, params.lam, tol)

    def get(self, params: LmgParams, tol: Optional[float] = None) -> GroundState:
        key = self._key(params, tol)
        with self._lock:
            cached = self._entries.get(key)
            if cached is not None:
                self._entries.move_to_end(key)
                self.hits += 1
                return cached
            self.misses += 1
        state = ground_state(params, tol)
        if self.maxsize == 0:
            return state
        with self._lock:
            existing = self._entries.setdefault(key, state)
            self._entries.move_to_end(key)
            while len(self._entries) > self.maxsize:
                self._entries.popitem(last=False)
        return existing

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()


__all__ = ["GroundStateCache"]
