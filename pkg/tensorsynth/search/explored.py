"""Storage of explored values, organized by weight."""

from collections import defaultdict
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..registry.filters import ArgFilter, CombinationFilter
from ..values.value import Value


class SuperValue:
    """The results of one expression on the inputs of every example.

    With a single example this is a thin wrapper around one value. Two
    super-values are equivalent iff all their components are equal_exact.
    """

    __slots__ = ("values", "_key")

    def __init__(self, values: Sequence[Value]):
        """Wrap one value per example."""
        self.values: Tuple[Value, ...] = tuple(values)
        self._key: Optional[Tuple[bytes, ...]] = None

    @property
    def key(self) -> Tuple[bytes, ...]:
        """Per-example fingerprints; equal keys mean equivalent super-values."""
        if self._key is None:
            self._key = tuple(value.fingerprint for value in self.values)
        return self._key

    @property
    def first(self) -> Value:
        return self.values[0]

    @property
    def weight(self) -> int:
        return self.values[0].weight

    def passes(self, arg_filter: ArgFilter) -> bool:
        """A super-value passes an argument filter iff every component does."""
        return all(arg_filter(value) for value in self.values)

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return f"SuperValue(weight={self.weight}, {list(self.values)})"


def combination_passes(combination: Optional[CombinationFilter], args: Sequence[SuperValue]) -> bool:
    """Run a combination filter on the argument lists of every example."""
    if combination is None:
        return True
    for index in range(len(args[0].values)):
        if not combination([arg.values[index] for arg in args]):
            return False
    return True


class ExploredSet:
    """Deduplicated store of super-values with cached argument filtering.

    Values are kept per weight in discovery order. ``filtered_values`` caches,
    per (filter, weight), the stored values passing the filter; the cache is
    extended when a value of that weight is added later.
    """

    def __init__(self, disable_filters: bool = False):
        """Start empty; ``disable_filters`` makes every filter admit everything."""
        self.disable_filters = disable_filters
        self.by_weight: Dict[int, List[SuperValue]] = defaultdict(list)
        self.seen: Dict[Tuple[bytes, ...], SuperValue] = {}
        self.filter_cache: Dict[Tuple[ArgFilter, int], List[SuperValue]] = {}
        self._cached_filters: Dict[int, List[ArgFilter]] = defaultdict(list)
        self.filter_evaluations = 0

    def add(self, value: SuperValue) -> bool:
        """Store a value unless an equivalent one is already present.

        Returns:
            True if the value was new
        """
        if value.key in self.seen:
            return False
        weight = value.weight
        self.seen[value.key] = value
        self.by_weight[weight].append(value)
        for arg_filter in self._cached_filters.get(weight, ()):
            self.filter_evaluations += 1
            if value.passes(arg_filter):
                self.filter_cache[(arg_filter, weight)].append(value)
        return True

    def representative(self, value: SuperValue) -> Optional[SuperValue]:
        """The stored value equivalent to ``value``, if any."""
        return self.seen.get(value.key)

    def filtered_values(self, arg_filter: ArgFilter, weight: int) -> List[SuperValue]:
        """Stored values of ``weight`` passing ``arg_filter``, in storage order."""
        stored = self.by_weight.get(weight)
        if not stored:
            return []
        if self.disable_filters:
            return stored
        key = (arg_filter, weight)
        cached = self.filter_cache.get(key)
        if cached is None:
            self.filter_evaluations += len(stored)
            cached = [value for value in stored if value.passes(arg_filter)]
            self.filter_cache[key] = cached
            self._cached_filters[weight].append(arg_filter)
        return cached

    def count(self, weight: int) -> int:
        return len(self.by_weight.get(weight, ()))

    def weights(self) -> List[int]:
        """Weights that hold at least one value, ascending."""
        return sorted(weight for weight, values in self.by_weight.items() if values)

    @property
    def max_weight(self) -> int:
        weights = self.weights()
        return weights[-1] if weights else 0

    def __contains__(self, value: SuperValue) -> bool:
        return value.key in self.seen

    def __len__(self) -> int:
        return len(self.seen)

    def __iter__(self) -> Iterator[SuperValue]:
        for weight in self.weights():
            yield from self.by_weight[weight]


def compositions(total: int, parts: int) -> List[Tuple[int, ...]]:
    """All ordered tuples of ``parts`` positive integers summing to ``total``.

    Tuples come in lexicographic order; the list is empty when total < parts.
    """
    return list(weight_compositions(total, parts))


def weight_compositions(total: int, parts: int, available: Optional[Sequence[int]] = None) -> Iterator[Tuple[int, ...]]:
    """Lexicographic compositions, optionally restricted to ``available`` sorted part values."""
    if parts < 1 or total < parts:
        return
    if parts == 1:
        if available is None or total in available:
            yield (total,)
        return
    candidates = range(1, total - parts + 2) if available is None else available
    for first in candidates:
        if first > total - (parts - 1):
            break
        for rest in weight_compositions(total - first, parts - 1, available):
            yield (first,) + rest
