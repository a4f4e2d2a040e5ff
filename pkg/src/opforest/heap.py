"""Min-cost binary heap with decrease-key and tri-state node coloring.

Ids are dense integers in [0, capacity). Each id moves through three colors:
NEVER_INSERTED -> IN_HEAP -> REMOVED, and REMOVED is final: a popped id can
never be re-inserted. Equal keys pop in insertion (FIFO) order via a
monotonically increasing counter stamped at insert time, which keeps every
consumer of the heap deterministic across runs and platforms.
"""

from __future__ import annotations

from .errors import (
    EmptyHeapError,
    HeapMisuseError,
    ParameterError,
    RejectedUpdateError,
)

NEVER_INSERTED = 0
IN_HEAP = 1
REMOVED = 2


class CostHeap:
    __slots__ = ("capacity", "_key", "_seq", "_pos", "_color", "_heap", "_counter")

    def __init__(self, capacity: int):
        if capacity <= 0:
            raise ParameterError(f"heap capacity must be positive, got {capacity}")
        self.capacity = capacity
        self._key = [0.0] * capacity
        self._seq = [0] * capacity
        self._pos = [-1] * capacity
        self._color = bytearray(capacity)  # all NEVER_INSERTED
        self._heap: list[int] = []
        self._counter = 0

    def __len__(self) -> int:
        return len(self._heap)

    def color(self, id: int) -> int:
        self._check_id(id)
        return self._color[id]

    def key(self, id: int) -> float:
        """Current key of an IN_HEAP id."""
        self._check_id(id)
        if self._color[id] != IN_HEAP:
            raise HeapMisuseError(f"id {id} is not in the heap")
        return self._key[id]

    def insert(self, id: int, key: float) -> None:
        self._check_id(id)
        if self._color[id] != NEVER_INSERTED:
            state = "already in the heap" if self._color[id] == IN_HEAP else "already removed"
            raise HeapMisuseError(f"cannot insert id {id}: {state}")
        if key != key:  # NaN keys would corrupt the order silently
            raise ParameterError("heap key must not be NaN")
        self._key[id] = key
        self._seq[id] = self._counter
        self._counter += 1
        self._color[id] = IN_HEAP
        self._heap.append(id)
        self._pos[id] = len(self._heap) - 1
        self._sift_up(len(self._heap) - 1)

    def decrease_key(self, id: int, new_key: float) -> None:
        self._check_id(id)
        if self._color[id] != IN_HEAP:
            raise HeapMisuseError(f"cannot decrease id {id}: not in the heap")
        if new_key != new_key:
            raise ParameterError("heap key must not be NaN")
        if not new_key < self._key[id]:
            raise RejectedUpdateError(
                f"new key {new_key!r} is not below current key {self._key[id]!r} for id {id}"
            )
        self._key[id] = new_key
        self._sift_up(self._pos[id])

    def pop_min(self) -> tuple[int, float]:
        if not self._heap:
            raise EmptyHeapError("pop from an empty heap")
        heap = self._heap
        top = heap[0]
        last = heap.pop()
        if heap:
            heap[0] = last
            self._pos[last] = 0
            self._sift_down(0)
        self._pos[top] = -1
        self._color[top] = REMOVED
        return top, self._key[top]

    # internal ---------------------------------------------------------------

    def _check_id(self, id: int) -> None:
        if not 0 <= id < self.capacity:
            raise HeapMisuseError(f"id {id} outside capacity {self.capacity}")

    def _less(self, a: int, b: int) -> bool:
        ka, kb = self._key[a], self._key[b]
        if ka != kb:
            return ka < kb
        return self._seq[a] < self._seq[b]

    def _sift_up(self, i: int) -> None:
        heap, pos = self._heap, self._pos
        node = heap[i]
        while i > 0:
            parent = (i - 1) >> 1
            if not self._less(node, heap[parent]):
                break
            heap[i] = heap[parent]
            pos[heap[i]] = i
            i = parent
        heap[i] = node
        pos[node] = i

    def _sift_down(self, i: int) -> None:
        heap, pos = self._heap, self._pos
        n = len(heap)
        node = heap[i]
        while True:
            child = 2 * i + 1
            if child >= n:
                break
            right = child + 1
            if right < n and self._less(heap[right], heap[child]):
                child = right
            if not self._less(heap[child], node):
                break
            heap[i] = heap[child]
            pos[heap[i]] = i
            i = child
        heap[i] = node
        pos[node] = i
