"""Shift spaces given by forbidden blocks or by a sliding-window predicate.

Membership of eventually periodic points is decided exactly from their
finite window sets. Membership of finite points asks for infinitely many
one-symbol extensions that admit an infinite continuation; that is only
semi-decidable, so it is searched within a :class:`SearchBudget` and
reported as a :class:`WitnessVerdict`.

The search runs on the follower graph of a spec restricted to the symbols
``0..n-1``: nodes are the last ``reach - 1`` symbols read so far (or the
whole word while it is still shorter than that) and an edge labelled ``b``
exists when appending ``b`` keeps the word allowed. An infinite allowed
continuation with period at most ``p`` exists iff the current node reaches
a node that returns to itself within ``p`` steps.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Union

from .core import (
    EventuallyPeriodic,
    Finite,
    Point,
    Word,
    as_word,
    fmt_word,
    is_infinite,
    prefix,
    windows,
)

# -- window predicates ----------------------------------------------------------


@dataclass(frozen=True)
class FirstEqualsLast:
    """1 iff the first and last symbols of the window agree."""

    window: int

    def __post_init__(self) -> None:
        if self.window < 2:
            raise ValueError("window must be >= 2")

    def __call__(self, word: Word) -> int:
        return int(word[0] == word[-1])

    def followers(self, context: Word, n: int) -> list[int]:
        return [context[0]] if context[0] < n else []

    def max_followers(self, n: int) -> int:
        return 1

    def relabel(self, perm: Mapping[int, int]) -> "FirstEqualsLast":
        return self


@dataclass(frozen=True)
class ZeroStepExample:
    """Window-2 rule: anything may follow ``x0``; any other x only repeats."""

    x0: int
    window: int = 2

    def __post_init__(self) -> None:
        as_word((self.x0,))
        if self.window != 2:
            raise ValueError("ZeroStepExample has window 2")

    def __call__(self, word: Word) -> int:
        x, y = word
        return int(x == self.x0 or x == y)

    def followers(self, context: Word, n: int) -> list[int]:
        (x,) = context
        if x == self.x0:
            return list(range(n))
        return [x] if x < n else []

    def max_followers(self, n: int) -> int:
        return n

    def relabel(self, perm: Mapping[int, int]) -> "ZeroStepExample":
        return ZeroStepExample(perm.get(self.x0, self.x0))


@dataclass(frozen=True)
class Table:
    """Explicit values on windows over ``0..support-1``.

    Windows containing a symbol ``>= support`` (and windows missing from
    ``entries``) evaluate to ``default``.
    """

    window: int
    support: int
    entries: tuple[tuple[Word, int], ...] = ()
    default: int = 0
    _lookup: dict = field(init=False, default=None, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if self.window < 2:
            raise ValueError("window must be >= 2")
        if self.support < 0:
            raise ValueError("support must be >= 0")
        if self.default not in (0, 1):
            raise ValueError("default must be a bit")
        lookup = {}
        for word, bit in self.entries:
            word = as_word(word)
            if len(word) != self.window or any(s >= self.support for s in word):
                raise ValueError(f"table entry {word} is outside the declared support")
            if bit not in (0, 1):
                raise ValueError("table values must be bits")
            lookup[word] = int(bit)
        entries = tuple(sorted((w, b) for w, b in lookup.items() if b != self.default))
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_lookup", dict(entries))

    @classmethod
    def from_function(cls, window: int, support: int, fn, default: int = 0) -> "Table":
        words = itertools.product(range(support), repeat=window)
        return cls(window, support, tuple((w, int(fn(w))) for w in words), default)

    def __call__(self, word: Word) -> int:
        return self._lookup.get(tuple(word), self.default)

    def followers(self, context: Word, n: int) -> list[int]:
        return [b for b in range(n) if self(context + (b,))]

    def max_followers(self, n: int) -> int:
        return n

    def relabel(self, perm: Mapping[int, int]) -> "Table":
        inverse = {v: k for k, v in perm.items()}
        moved = [s for s, t in perm.items() if s != t]
        support = max([self.support] + [s + 1 for s in moved])
        pull = lambda w: tuple(inverse.get(s, s) for s in w)  # noqa: E731
        return Table.from_function(self.window, support, lambda w: self(pull(w)), self.default)


WindowPredicate = Union[FirstEqualsLast, ZeroStepExample, Table]


def induced_value(pred: WindowPredicate, x: Iterable[int]) -> int:
    """Value of the step map induced by ``pred`` on the word ``x``.

    Words shorter than the window get 1; longer words get the product of
    ``pred`` over their sliding windows.
    """
    x = tuple(x)
    w = pred.window
    if len(x) <= w - 1:
        return 1
    return int(all(pred(x[i : i + w]) for i in range(len(x) - w + 1)))


# -- specs ----------------------------------------------------------------------------


@dataclass(frozen=True)
class FullShift:
    pass


@dataclass(frozen=True)
class Forbidden:
    words: tuple[Word, ...]

    def __post_init__(self) -> None:
        words = tuple(sorted({as_word(w) for w in self.words}, key=lambda w: (len(w), w)))
        if not words or any(not w for w in words):
            raise ValueError("need a nonempty list of nonempty forbidden words")
        object.__setattr__(self, "words", words)


@dataclass(frozen=True)
class Step:
    """An (w-1)-step shift given by a window-w predicate."""

    pred: WindowPredicate


ShiftSpec = Union[FullShift, Forbidden, Step]


def reach(spec: ShiftSpec) -> int:
    if isinstance(spec, Step):
        return spec.pred.window
    if isinstance(spec, Forbidden):
        return max(len(w) for w in spec.words)
    return 1


def allowed(spec: ShiftSpec, x: Iterable[int]) -> bool:
    x = tuple(x)
    if isinstance(spec, Step):
        return induced_value(spec.pred, x) == 1
    if isinstance(spec, Forbidden):
        bad = set(spec.words)
        for size in {len(w) for w in bad}:
            if any(x[i : i + size] in bad for i in range(len(x) - size + 1)):
                return False
    return True


def in_inf(spec: ShiftSpec, p: Point) -> bool:
    """Exact membership of an infinite point."""
    if not is_infinite(p):
        raise ValueError("in_inf takes an infinite point; use in_fin or membership")
    if isinstance(spec, Step):
        return all(spec.pred(w) for w in windows(p, spec.pred.window))
    if isinstance(spec, Forbidden):
        bad = set(spec.words)
        return all(not (windows(p, size) & bad) for size in {len(w) for w in bad})
    return True


def in_inf_by_prefix(spec: ShiftSpec, p: Point, depth: int) -> bool:
    """Cross-check route for :func:`in_inf`: test the length-``depth`` prefix."""
    return allowed(spec, prefix(p, depth))


# -- budgets and verdicts -----------------------------------------------------------


@dataclass(frozen=True)
class SearchBudget:
    truncation: int = 16
    threshold: int = 8
    period_bound: int = 8
    depth: int = 64

    def __post_init__(self) -> None:
        if self.truncation < 1 or self.threshold < 2 or self.period_bound < 1 or self.depth < 1:
            raise ValueError("need truncation >= 1, threshold >= 2, period_bound >= 1, depth >= 1")

    def to_dict(self) -> dict:
        return {
            "truncation": self.truncation,
            "threshold": self.threshold,
            "period_bound": self.period_bound,
            "depth": self.depth,
        }


class Status(enum.Enum):
    VERIFIED = "verified"
    NOT_VERIFIED = "not_verified_up_to_budget"


@dataclass(frozen=True)
class WitnessVerdict:
    status: Status
    witnesses: tuple[tuple[int, EventuallyPeriodic], ...]
    counts_at: dict[int, int]

    @property
    def verified(self) -> bool:
        return self.status is Status.VERIFIED

    @property
    def count(self) -> int:
        return len(self.witnesses)

    def __bool__(self) -> bool:
        return self.verified


# -- follower graph -------------------------------------------------------------------


class _FollowerGraph:
    """Lazily explored follower graph of ``spec`` over symbols ``< n``."""

    def __init__(self, spec: ShiftSpec, n: int, period_bound: int) -> None:
        self.spec = spec
        self.n = n
        self.p = period_bound
        self.k = reach(spec) - 1
        self._edges: dict[Word, list[tuple[int, Word]]] = {}
        self._cycles: dict[Word, Optional[Word]] = {}
        self._tails: dict[Word, Optional[tuple[Word, Word]]] = {}
        self._counts: dict[Word, int] = {}
        self._reachable: dict[tuple[Word, int], bool] = {}

    def node(self, word: Word) -> Word:
        return word[len(word) - self.k :] if len(word) >= self.k else word

    def is_full(self, node: Word) -> bool:
        return len(node) == self.k

    def edges(self, node: Word) -> list[tuple[int, Word]]:
        out = self._edges.get(node)
        if out is None:
            spec, n = self.spec, self.n
            if not self.is_full(node):
                syms = [b for b in range(n) if allowed(spec, node + (b,))]
            elif isinstance(spec, Step):
                syms = spec.pred.followers(node, n)
            elif isinstance(spec, Forbidden):
                syms = [b for b in range(n) if allowed(spec, node + (b,))]
            else:
                syms = list(range(n))
            out = [(b, self.node(node + (b,))) for b in syms]
            self._edges[node] = out
        return out

    def cycle(self, node: Word) -> Optional[Word]:
        """Labels of a shortest closed walk at ``node`` of length <= p."""
        if node in self._cycles:
            return self._cycles[node]
        found = None
        if self.is_full(node):
            parent: dict[Word, tuple[Word, int]] = {}
            frontier = [node]
            for _ in range(self.p):
                nxt = []
                for u in frontier:
                    for b, v in self.edges(u):
                        if v == node:
                            labels = [b]
                            while u != node:
                                u, c = parent[u]
                                labels.append(c)
                            found = tuple(reversed(labels))
                            break
                        if v not in parent:
                            parent[v] = (u, b)
                            nxt.append(v)
                    if found:
                        break
                if found or not nxt:
                    break
                frontier = nxt
        self._cycles[node] = found
        return found

    def tail(self, node: Word) -> Optional[tuple[Word, Word]]:
        """(path, cycle) labels of an eventually periodic walk from ``node``.

        Breadth-first over everything reachable, so the search is complete
        for the given period bound.
        """
        if node in self._tails:
            return self._tails[node]
        if not self.is_full(node):
            # short prefixes form a tree; go depth-first to the first full node
            result = None
            for b, v in self.edges(node):
                t = self.tail(v)
                if t is not None:
                    result = ((b,) + t[0], t[1])
                    break
            self._tails[node] = result
            return result
        parent: dict[Word, tuple[Optional[Word], int]] = {node: (None, -1)}
        queue = deque([node])
        result = None
        while queue:
            u = queue.popleft()
            cyc = self.cycle(u)
            if cyc is not None:
                path = []
                while parent[u][0] is not None:
                    u, b = parent[u]
                    path.append(b)
                result = (tuple(reversed(path)), cyc)
                break
            for b, v in self.edges(u):
                if v not in parent:
                    parent[v] = (u, b)
                    queue.append(v)
        self._tails[node] = result
        return result

    def extensions(self, node: Word) -> list[tuple[int, EventuallyPeriodic]]:
        out = []
        for a, child in self.edges(node):
            t = self.tail(child)
            if t is not None:
                out.append((a, EventuallyPeriodic(*t)))
        return out

    def count(self, node: Word) -> int:
        if node not in self._counts:
            self._counts[node] = len(self.extensions(node))
        return self._counts[node]

    def ends_rich(self, node: Word, remaining: int, threshold: int) -> bool:
        """Whether some allowed walk of ``remaining`` steps ends at a node
        with at least ``threshold`` live extensions."""
        key = (node, remaining)
        if key in self._reachable:
            return self._reachable[key]
        if (
            len(node) + remaining >= self.k
            and isinstance(self.spec, Step)
            and self.spec.pred.max_followers(self.n) < threshold
        ):
            result = False  # every full node has too few followers
        elif remaining == 0:
            result = self.count(node) >= threshold
        else:
            result = any(self.ends_rich(v, remaining - 1, threshold) for _, v in self.edges(node))
        self._reachable[key] = result
        return result


@lru_cache(maxsize=128)
def _graph(spec: ShiftSpec, n: int, period_bound: int) -> _FollowerGraph:
    return _FollowerGraph(spec, n, period_bound)


# -- finite membership ------------------------------------------------------------------


def extension_witnesses(spec: ShiftSpec, x: Iterable[int], budget: SearchBudget) -> WitnessVerdict:
    """All symbols a < n with an eventually periodic y (symbols < n, period
    <= p) making ``x·a·y`` an infinite point of the shift.

    Each witness is ``(a, y)``. ``counts_at`` records the witness count at
    truncations ``n // 2`` and ``n``.
    """
    x = as_word(x)
    n = budget.truncation
    counts = {}
    found: list[tuple[int, EventuallyPeriodic]] = []
    for t in sorted({max(1, n // 2), n}):
        if not allowed(spec, x):
            found = []
        else:
            g = _graph(spec, t, budget.period_bound)
            found = g.extensions(g.node(x))
        counts[t] = len(found)
    status = Status.VERIFIED if len(found) >= budget.threshold else Status.NOT_VERIFIED
    return WitnessVerdict(status, tuple(found), counts)


def in_fin(spec: ShiftSpec, x: Iterable[int], budget: SearchBudget) -> WitnessVerdict:
    return extension_witnesses(spec, x, budget)


def membership(spec: ShiftSpec, p: Point, budget: SearchBudget) -> Union[bool, WitnessVerdict]:
    """Exact bool for infinite points, a budgeted verdict for finite ones."""
    if is_infinite(p):
        return in_inf(spec, p)
    return in_fin(spec, p.word if isinstance(p, Finite) else (), budget)


# -- enumeration ----------------------------------------------------------------------


def language_up_to(spec: ShiftSpec, max_len: int, budget: SearchBudget) -> list[Word]:
    """Allowed words of length <= max_len over symbols < n, shortest first."""
    out: list[Word] = []
    layer: list[Word] = [()]
    for _ in range(max_len + 1):
        out.extend(layer)
        layer = [w + (b,) for w in layer for b in range(budget.truncation) if allowed(spec, w + (b,))]
    return out


def length_spectrum(spec: ShiftSpec, max_len: int, budget: SearchBudget) -> dict[int, Optional[Word]]:
    """For each length, the lexicographically least word over symbols < n
    whose finite membership is verified, or None when none was found."""
    g = _graph(spec, budget.truncation, budget.period_bound)
    T = budget.threshold
    out: dict[int, Optional[Word]] = {}
    for size in range(max_len + 1):
        if not g.ends_rich((), size, T):
            out[size] = None
            continue
        word: Word = ()
        node: Word = ()
        for remaining in range(size, 0, -1):
            for b, v in g.edges(node):
                if g.ends_rich(v, remaining - 1, T):
                    word, node = word + (b,), v
                    break
        out[size] = word
    return out


def periodic_points(spec: ShiftSpec, q: int, budget: SearchBudget) -> list[EventuallyPeriodic]:
    """Points of the shift fixed by the q-th power of the shift map, over
    symbols < n."""
    if q < 1:
        raise ValueError("q must be >= 1")
    found = set()
    for block in itertools.product(range(budget.truncation), repeat=q):
        p = EventuallyPeriodic((), block)
        if in_inf(spec, p):
            found.add(p)
    return sorted(found, key=lambda p: prefix(p, q))


# -- relabelling ----------------------------------------------------------------------


def _check_perm(perm: Mapping[int, int]) -> dict[int, int]:
    perm = {int(k): int(v) for k, v in perm.items()}
    as_word(perm.keys())
    as_word(perm.values())
    if len(set(perm.values())) != len(perm) or set(perm.values()) != set(perm):
        raise ValueError("perm must be a bijection of a finite set of symbols onto itself")
    return perm


def permute_symbols(spec: ShiftSpec, perm: Mapping[int, int]) -> ShiftSpec:
    """Relabel every symbol of ``spec`` through ``perm`` (identity off its keys)."""
    perm = _check_perm(perm)
    if isinstance(spec, Forbidden):
        return Forbidden(tuple(tuple(perm.get(s, s) for s in w) for w in spec.words))
    if isinstance(spec, Step):
        return Step(spec.pred.relabel(perm))
    return spec


# -- JSON -------------------------------------------------------------------------------


def predicate_to_json(pred: WindowPredicate) -> dict:
    if isinstance(pred, FirstEqualsLast):
        return {"kind": "first_equals_last"}
    if isinstance(pred, ZeroStepExample):
        return {"kind": "zero_step_example", "x0": pred.x0}
    return {
        "kind": "table",
        "support": pred.support,
        "entries": [{"window": list(w), "value": b} for w, b in pred.entries],
        "default": pred.default,
    }


def spec_to_json(spec: ShiftSpec) -> dict:
    if isinstance(spec, Forbidden):
        return {"kind": "forbidden", "words": [list(w) for w in spec.words]}
    if isinstance(spec, Step):
        return {"kind": "step", "window": spec.pred.window, "predicate": predicate_to_json(spec.pred)}
    return {"kind": "full"}


def spec_from_json(data: Mapping) -> ShiftSpec:
    kind = data.get("kind")
    if kind == "full":
        return FullShift()
    if kind == "forbidden":
        return Forbidden(tuple(tuple(w) for w in data["words"]))
    if kind != "step":
        raise ValueError(f"unknown spec kind {kind!r}")
    w = int(data["window"])
    pred = data["predicate"]
    pk = pred.get("kind")
    if pk == "first_equals_last":
        return Step(FirstEqualsLast(w))
    if pk == "zero_step_example":
        return Step(ZeroStepExample(int(pred["x0"]), w))
    if pk == "table":
        entries = tuple((tuple(e["window"]), int(e["value"])) for e in pred.get("entries", ()))
        return Step(Table(w, int(pred["support"]), entries, int(pred.get("default", 0))))
    raise ValueError(f"unknown predicate kind {pk!r}")


def budget_from_json(data: Mapping) -> SearchBudget:
    return SearchBudget(**{k: int(v) for k, v in data.items()})


def describe(spec: ShiftSpec) -> str:
    if isinstance(spec, Forbidden):
        return "forbidden{" + ", ".join(fmt_word(w) for w in spec.words) + "}"
    if isinstance(spec, Step):
        pred = spec.pred
        name = type(pred).__name__
        if isinstance(pred, ZeroStepExample):
            name += f"(x0={pred.x0})"
        return f"{spec.pred.window - 1}-step[{name}, window {pred.window}]"
    return "full shift"
