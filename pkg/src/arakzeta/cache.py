from __future__ import annotations

import logging
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Hashable, List, Optional, Tuple, TypeVar

from .arakelov import LatticeInvariants, ThetaProfile, kappa_minus_gram, lattice_gram, lattice_invariants
from .classspace import ClassSpaceGrid, ClassSpacePoint
from .fielddata import NumberFieldData

LOGGER = logging.getLogger(__name__)

T = TypeVar("T")

PROFILE_KINDS = ("direct", "dual")


@dataclass(slots=True)
class CacheStatistics:
    hits: int = 0
    misses: int = 0


class GridCache:
    """Per-grid lattice data shared by the zeta, asymptotic and verification code.

    Entries are keyed by field, grid layout and tolerance; the oldest entry is
    dropped once ``max_entries`` is reached.
    """

    def __init__(self, max_entries: int = 32) -> None:
        self.max_entries = max_entries
        self._entries: "OrderedDict[Hashable, object]" = OrderedDict()
        self._lock = threading.Lock()
        self.stats = CacheStatistics()

    def _get_or_build(self, key: Hashable, builder: Callable[[], T]) -> T:
        with self._lock:
            if key in self._entries:
                self._entries.move_to_end(key)
                self.stats.hits += 1
                return self._entries[key]  # type: ignore[return-value]
            self.stats.misses += 1
        value = builder()
        with self._lock:
            existing = self._entries.setdefault(key, value)
            self._entries.move_to_end(key)
            while len(self._entries) > self.max_entries:
                evicted, _ = self._entries.popitem(last=False)
                LOGGER.debug("Grid cache eviction | Entry: %s", evicted[0])
        return existing  # type: ignore[return-value]

    @staticmethod
    def _grid_key(field: NumberFieldData, grid: ClassSpaceGrid) -> Tuple[Hashable, ...]:
        return (field, grid.points_per_dim, grid.offset)

    def theta_profiles(
        self,
        field: NumberFieldData,
        grid: ClassSpaceGrid,
        tol: float,
        kind: str = "direct",
        threads: Optional[int] = None,
    ) -> List[ThetaProfile]:
        """Relative theta profiles of every grid point.

        ``direct`` profiles serve ``k0(D + D_t)`` for ``t <= sqrt(d)``; ``dual``
        profiles serve ``k0(kappa - D - D_t)`` for ``t >= sqrt(d)``.
        """
        if kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind '{kind}'")
        exponent = -1.0 if kind == "direct" else 1.0
        min_scale = field.disc_abs ** (exponent / field.degree_n)

        def build_one(point: ClassSpacePoint) -> ThetaProfile:
            if kind == "direct":
                gram = lattice_gram(field, point.divisor)
            else:
                gram = kappa_minus_gram(field, point.divisor, route="trace_dual")
            return ThetaProfile.build(gram, tol=tol, min_scale=min_scale, relative=True)

        def builder() -> List[ThetaProfile]:
            LOGGER.debug(
                "Building theta profiles | Field: %s | Kind: %s | Points: %s | Tol: %g",
                field,
                kind,
                len(grid),
                tol,
            )
            return _map_points(grid, build_one, threads)

        key = ("profiles",) + self._grid_key(field, grid) + (tol, kind)
        return self._get_or_build(key, builder)

    def invariants(
        self,
        field: NumberFieldData,
        grid: ClassSpaceGrid,
        band: float = 1e-9,
        threads: Optional[int] = None,
    ) -> List[LatticeInvariants]:
        def build_one(point: ClassSpacePoint) -> LatticeInvariants:
            return lattice_invariants(lattice_gram(field, point.divisor), band)

        key = ("invariants",) + self._grid_key(field, grid) + (band,)
        return self._get_or_build(key, lambda: _map_points(grid, build_one, threads))

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


def _map_points(grid: ClassSpaceGrid, func: Callable[[ClassSpacePoint], T], threads: Optional[int]) -> List[T]:
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(func, grid.points))
    return [func(point) for point in grid.points]


DEFAULT_CACHE = GridCache()
