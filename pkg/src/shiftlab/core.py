"""Points of the full shift over the alphabet of natural numbers.

A point is the empty sequence, a nonempty finite word, or an infinite
sequence. Only eventually periodic infinite sequences are representable;
they are stored as a (preperiod, period) lasso in canonical form so that
equality of points is structural.

Symbols are plain non-negative ints and words are tuples of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

Symbol = int
Word = tuple[int, ...]

INFINITY = math.inf


def as_word(symbols: Iterable[int]) -> Word:
    word = tuple(symbols)
    for s in word:
        if isinstance(s, bool) or not isinstance(s, int) or s < 0:
            raise ValueError(f"symbols must be non-negative ints, got {s!r}")
    return word


def fmt_word(word: Sequence[int]) -> str:
    return " ".join(map(str, word)) if word else "Ø"


def parse_word(text: str) -> Word:
    """Parse ``"0 5 7"`` (or ``""``/``"Ø"`` for the empty word)."""
    text = text.strip()
    if text in ("", "Ø"):
        return ()
    return as_word(int(tok) for tok in text.split())


def _primitive_root(period: Word) -> Word:
    q = len(period)
    for d in range(1, q + 1):
        if q % d == 0 and period[:d] * (q // d) == period:
            return period[:d]
    return period  # unreachable


@dataclass(frozen=True)
class Empty:
    """The empty sequence Ø."""

    def __str__(self) -> str:
        return "Ø"


@dataclass(frozen=True)
class Finite:
    word: Word

    def __post_init__(self) -> None:
        word = as_word(self.word)
        if not word:
            raise ValueError("Finite points need at least one symbol; use EMPTY")
        object.__setattr__(self, "word", word)

    def __str__(self) -> str:
        return fmt_word(self.word)


@dataclass(frozen=True)
class EventuallyPeriodic:
    """The infinite sequence ``pre · per · per · ...``.

    The constructor canonicalizes: the period is reduced to its primitive
    root and the preperiod is shortened while its last symbol matches the
    symbol that closes the period (rotating the period each time).
    """

    pre: Word = ()
    per: Word = field(default=())

    def __post_init__(self) -> None:
        pre, per = as_word(self.pre), as_word(self.per)
        if not per:
            raise ValueError("period must contain at least one symbol")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            per = per[-1:] + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    def __str__(self) -> str:
        head = f"{fmt_word(self.pre)} " if self.pre else ""
        return f"{head}({fmt_word(self.per)})^∞"


Point = Union[Empty, Finite, EventuallyPeriodic]

EMPTY = Empty()


def canonicalize(preperiod: Iterable[int], period: Iterable[int]) -> EventuallyPeriodic:
    return EventuallyPeriodic(tuple(preperiod), tuple(period))


def from_word(word: Iterable[int]) -> Point:
    """Finite point (or Ø) spelled by ``word``."""
    word = as_word(word)
    return Finite(word) if word else EMPTY


def is_infinite(p: Point) -> bool:
    return isinstance(p, EventuallyPeriodic)


def length(p: Point) -> float:
    if isinstance(p, Empty):
        return 0
    if isinstance(p, Finite):
        return len(p.word)
    return INFINITY


def shift(p: Point) -> Point:
    if isinstance(p, Empty):
        return EMPTY
    if isinstance(p, Finite):
        return from_word(p.word[1:])
    if p.pre:
        return EventuallyPeriodic(p.pre[1:], p.per)
    return EventuallyPeriodic((), p.per[1:] + p.per[:1])


def shift_n(p: Point, times: int) -> Point:
    for _ in range(times):
        p = shift(p)
    return p


def symbol_at(p: Point, i: int) -> Optional[int]:
    """The ``i``-th symbol (1-based), or None past the end of a finite point."""
    if i < 1:
        raise ValueError("positions start at 1")
    if isinstance(p, Empty):
        return None
    if isinstance(p, Finite):
        return p.word[i - 1] if i <= len(p.word) else None
    a = len(p.pre)
    if i <= a:
        return p.pre[i - 1]
    return p.per[(i - a - 1) % len(p.per)]


def prefix(p: Point, n: int) -> Word:
    """First ``min(n, length(p))`` symbols."""
    if isinstance(p, Empty):
        return ()
    if isinstance(p, Finite):
        return p.word[:n]
    out = list(p.pre[:n])
    while len(out) < n:
        out.extend(p.per[: n - len(out)])
    return tuple(out)


def concat(word: Iterable[int], p: Point) -> Point:
    """The point ``word · p``."""
    word = as_word(word)
    if isinstance(p, Empty):
        return from_word(word)
    if isinstance(p, Finite):
        return Finite(word + p.word)
    return EventuallyPeriodic(word + p.pre, p.per)


def windows(p: Point, size: int) -> set[Word]:
    """All distinct length-``size`` subblocks of ``p``."""
    if size < 1:
        raise ValueError("window size must be >= 1")
    if isinstance(p, EventuallyPeriodic):
        # windows starting inside the period repeat with period len(per)
        starts = len(p.pre) + len(p.per)
        text = prefix(p, starts + size - 1)
    else:
        text = p.word if isinstance(p, Finite) else ()
        starts = len(text) - size + 1
    return {text[i : i + size] for i in range(max(starts, 0))}


@dataclass(frozen=True)
class Cylinder:
    """Generalized cylinder Z(base, forbidden)."""

    base: Word = ()
    forbidden: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", as_word(self.base))
        object.__setattr__(self, "forbidden", frozenset(as_word(self.forbidden)))

    def __str__(self) -> str:
        forb = ",".join(map(str, sorted(self.forbidden)))
        return f"Z({fmt_word(self.base)}, {{{forb}}})"


def cylinder_contains(c: Cylinder, p: Point) -> bool:
    """Membership of ``p`` in Z(base, F).

    ``base`` must be a prefix of ``p``. The next symbol, if ``p`` has one,
    must avoid F; a point that ends exactly at the base satisfies that part
    vacuously, so Ø lies in every Z(Ø, F) and x in every Z(x, F).
    """
    k = len(c.base)
    if length(p) < k or prefix(p, k) != c.base:
        return False
    nxt = symbol_at(p, k + 1)
    return nxt is None or nxt not in c.forbidden


def cylinders_intersect(c1: Cylinder, c2: Cylinder) -> bool:
    """Exact nonemptiness of Z1 ∩ Z2 in the full shift over ℕ."""
    if len(c1.base) > len(c2.base):
        c1, c2 = c2, c1
    k = len(c1.base)
    if c2.base[:k] != c1.base:
        return False
    if len(c2.base) == k:
        # Z(x, F1 ∪ F2) still contains x itself
        return True
    return c2.base[k] not in c1.forbidden


def basic_neighborhood(limit: Point, m: int) -> Cylinder:
    """The m-th neighborhood of ``limit`` in the exhaustion F_m = {0..m-1}.

    Finite limits (and Ø) use Z(limit, F_m); infinite limits use the plain
    cylinder on their first m symbols.
    """
    if isinstance(limit, EventuallyPeriodic):
        return Cylinder(prefix(limit, m))
    base = limit.word if isinstance(limit, Finite) else ()
    return Cylinder(base, frozenset(range(m)))


@dataclass(frozen=True)
class ProfileRow:
    m: int
    threshold: Optional[int]  # least n0 with every member of index >= n0 inside
    escaped: Optional[int] = None  # largest violating index when the row fails

    @property
    def ok(self) -> bool:
        return self.threshold is not None


@dataclass(frozen=True)
class ConvergenceProfile:
    rows: tuple[ProfileRow, ...]
    family_size: int
    limit: Point

    @property
    def passes(self) -> bool:
        return all(row.ok for row in self.rows)

    def thresholds(self) -> list[Optional[int]]:
        return [row.threshold for row in self.rows]

    def to_dict(self) -> dict:
        return {
            "family_size": self.family_size,
            "limit": point_to_json(self.limit),
            "passes": self.passes,
            "rows": [
                {"m": r.m, "n0": r.threshold, "escaped": r.escaped} if not r.ok else {"m": r.m, "n0": r.threshold}
                for r in self.rows
            ],
        }


def convergence_profile(
    family: Mapping[int, Point], limit: Point, n: int, m_max: int
) -> ConvergenceProfile:
    """Finitary certificate that ``family[1..n]`` approaches ``limit``.

    For each m in 1..m_max, reports the least index n0 such that every
    member with index >= n0 lies in the m-th basic neighborhood of the
    limit. A row fails when even the last member lies outside.
    """
    if n < 1 or m_max < 1:
        raise ValueError("need n >= 1 and m_max >= 1")
    rows = []
    for m in range(1, m_max + 1):
        nbhd = basic_neighborhood(limit, m)
        last_bad = 0
        for j in range(1, n + 1):
            if not cylinder_contains(nbhd, family[j]):
                last_bad = j
        if last_bad == n:
            rows.append(ProfileRow(m, None, last_bad))
        else:
            rows.append(ProfileRow(m, last_bad + 1))
    return ConvergenceProfile(tuple(rows), n, limit)


@dataclass(frozen=True)
class SigmaDemo:
    family: dict[int, Point]
    shifted: dict[int, Point]
    to_empty: ConvergenceProfile
    shifted_to_empty: ConvergenceProfile

    @property
    def demonstrates_discontinuity(self) -> bool:
        return self.to_empty.passes and not self.shifted_to_empty.passes

    def to_dict(self) -> dict:
        return {
            "family": {str(j): point_to_json(p) for j, p in self.family.items()},
            "shifted": {str(j): point_to_json(p) for j, p in self.shifted.items()},
            "to_empty": self.to_empty.to_dict(),
            "shifted_to_empty": self.shifted_to_empty.to_dict(),
            "discontinuous": self.demonstrates_discontinuity,
        }


def sigma_discontinuity_demo(n: int = 16, m_max: int = 8) -> SigmaDemo:
    """Points x_j = (j-1)·0^∞ tend to Ø but their shifts are all 0^∞.

    Member j carries first symbol j-1, so the family runs through every
    symbol starting at 0.
    """
    family = {j: EventuallyPeriodic((j - 1,), (0,)) for j in range(1, n + 1)}
    shifted = {j: shift(p) for j, p in family.items()}
    return SigmaDemo(
        family,
        shifted,
        convergence_profile(family, EMPTY, n, m_max),
        convergence_profile(shifted, shift(EMPTY), n, m_max),
    )


# -- JSON ---------------------------------------------------------------------


def point_to_json(p: Point) -> dict:
    if isinstance(p, Empty):
        return {"kind": "empty"}
    if isinstance(p, Finite):
        return {"kind": "finite", "word": list(p.word)}
    return {"kind": "ep", "pre": list(p.pre), "per": list(p.per)}


def point_from_json(data: Mapping) -> Point:
    kind = data.get("kind")
    if kind == "empty":
        return EMPTY
    if kind == "finite":
        return Finite(tuple(data["word"]))
    if kind == "ep":
        return EventuallyPeriodic(tuple(data.get("pre", ())), tuple(data["per"]))
    raise ValueError(f"unknown point kind {kind!r}")


def cylinder_to_json(c: Cylinder) -> dict:
    return {"base": list(c.base), "forbidden": sorted(c.forbidden)}


def cylinder_from_json(data: Mapping) -> Cylinder:
    return Cylinder(tuple(data["base"]), frozenset(data.get("forbidden", ())))
