"""Binary-heap priority queue over lexicographic tuple keys with key updates."""
from __future__ import annotations

import heapq
import itertools
from typing import Any, Hashable, Iterator, Optional, Tuple

_REMOVED = object()


class LexQueue:
    """Min-queue of hashable items ordered by tuple keys.

    Each item is held at most once. Pushing an item that is already queued
    replaces its key. Removal is lazy: stale heap entries are skipped when they
    reach the top. Callers append their own tie-break components (state ids)
    to the keys, so equal keys only occur for identical items; an insertion
    counter settles anything left.
    """

    def __init__(self):
        self._heap = []
        self._entries = {}
        self._counter = itertools.count()

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __contains__(self, item: Hashable) -> bool:
        return item in self._entries

    def __iter__(self) -> Iterator[Hashable]:
        return iter(list(self._entries))

    def key(self, item: Hashable) -> Tuple:
        return self._entries[item][0]

    def push(self, item: Hashable, key: Tuple) -> None:
        entry = self._entries.get(item)
        if entry is not None:
            if entry[0] == key:
                return
            entry[2] = _REMOVED
        entry = [key, next(self._counter), item]
        self._entries[item] = entry
        heapq.heappush(self._heap, entry)
        if len(self._heap) > 64 and len(self._heap) > 4 * len(self._entries):
            self._compact()

    def remove(self, item: Hashable) -> bool:
        entry = self._entries.pop(item, None)
        if entry is None:
            return False
        entry[2] = _REMOVED
        return True

    def _prune_top(self) -> None:
        heap = self._heap
        while heap and heap[0][2] is _REMOVED:
            heapq.heappop(heap)

    def _compact(self) -> None:
        self._heap = [e for e in self._heap if e[2] is not _REMOVED]
        heapq.heapify(self._heap)

    def peek(self) -> Optional[Tuple[Any, Tuple]]:
        """(item, key) with the smallest key, or None when empty."""
        self._prune_top()
        if not self._heap:
            return None
        entry = self._heap[0]
        return entry[2], entry[0]

    def peek_key(self) -> Optional[Tuple]:
        top = self.peek()
        return None if top is None else top[1]

    def pop(self) -> Tuple[Any, Tuple]:
        self._prune_top()
        if not self._heap:
            raise IndexError("pop from an empty LexQueue")
        key, _, item = heapq.heappop(self._heap)
        del self._entries[item]
        return item, key

    def ordered(self) -> Iterator[Tuple[Any, Tuple]]:
        """Yield live (item, key) pairs in key order without modifying the queue."""
        live = sorted((e for e in self._heap if e[2] is not _REMOVED), key=lambda e: (e[0], e[1]))
        for key, _, item in live:
            yield item, key

    def clear(self) -> None:
        self._heap.clear()
        self._entries.clear()
