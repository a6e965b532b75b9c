"""Signed letters, free reduction, and admissible words.

An admissible word alternates state letters and reduced tape words,
``q_1 u_1 q_2 ... u_s q_{s+1}``.  State letters carry the index of the
hardware part they belong to; tape letters are bare names.  Signs are
+1/-1.  Equality of words is syntactic on the reduced, trimmed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple


class MalformedWord(Exception):
    """Raised when a word violates the admissibility conditions."""


class QLetter(NamedTuple):
    part: int
    name: str
    sign: int

    def inv(self) -> "QLetter":
        return QLetter(self.part, self.name, -self.sign)

    def __str__(self) -> str:
        return self.name + ("^-1" if self.sign < 0 else "")


class YLetter(NamedTuple):
    name: str
    sign: int

    def inv(self) -> "YLetter":
        return YLetter(self.name, -self.sign)

    def __str__(self) -> str:
        return self.name + ("^-1" if self.sign < 0 else "")


Word = tuple[YLetter, ...]


def y_word(*items: str | YLetter) -> Word:
    """Build a tape word from tokens like ``"a"`` / ``"a^-1"``."""
    out = []
    for it in items:
        if isinstance(it, YLetter):
            out.append(it)
        elif it.endswith("^-1"):
            out.append(YLetter(it[:-3], -1))
        else:
            out.append(YLetter(it, 1))
    return tuple(out)


def invert_word(w: Word) -> Word:
    return tuple(x.inv() for x in reversed(w))


def reduce_word(w: Iterable[YLetter]) -> Word:
    """Freely reduce: cancel adjacent x x^-1 pairs until none remain.

    The stack pass is linear and yields the unique reduced form.
    """
    stack: list[YLetter] = []
    for x in w:
        if stack and stack[-1].name == x.name and stack[-1].sign == -x.sign:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def is_reduced(w: Word) -> bool:
    return all(
        not (a.name == b.name and a.sign == -b.sign) for a, b in zip(w, w[1:])
    )


def power(w: Word, k: int) -> Word:
    if k < 0:
        return power(invert_word(w), -k)
    return reduce_word(w * k)


@dataclass(frozen=True)
class AdmissibleWord:
    """Alternating word ``q_1 u_1 q_2 ... u_s q_{s+1}``.

    ``q`` has length s+1 >= 1 and ``u`` has length s.  Validation against
    a concrete hardware lives in :mod:`smachine.machine`; this container
    only enforces the shape and local reducedness.
    """

    q: tuple[QLetter, ...]
    u: tuple[Word, ...]

    def __post_init__(self) -> None:
        if not self.q:
            raise MalformedWord("word must contain at least one state letter")
        if len(self.u) != len(self.q) - 1:
            raise MalformedWord(
                f"{len(self.q)} state letters need {len(self.q) - 1} tape words,"
                f" got {len(self.u)}"
            )
        for w in self.u:
            if not is_reduced(w):
                raise MalformedWord(f"tape word {format_word(w)} is not reduced")
        for a, b, w in zip(self.q, self.q[1:], self.u):
            if a.part == b.part and a.sign == -b.sign and not w:
                raise MalformedWord(f"unreduced pair {a}{b}")

    @property
    def base(self) -> tuple[tuple[int, int], ...]:
        """Sequence of (part, sign); projection of the word on part symbols."""
        return tuple((x.part, x.sign) for x in self.q)

    def length(self) -> int:
        return len(self.q) + sum(len(w) for w in self.u)

    def y_length(self) -> int:
        return sum(len(w) for w in self.u)

    def q_length(self) -> int:
        return len(self.q)

    def inv(self) -> "AdmissibleWord":
        return AdmissibleWord(
            tuple(x.inv() for x in reversed(self.q)),
            tuple(invert_word(w) for w in reversed(self.u)),
        )

    def letters(self) -> Iterator[QLetter | YLetter]:
        for i, x in enumerate(self.q):
            yield x
            if i < len(self.u):
                yield from self.u[i]

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.letters())


def format_word(w: Word) -> str:
    return " ".join(str(x) for x in w) if w else "1"


def admissible(q_letters: Iterable[QLetter], tape: Iterable[Word]) -> AdmissibleWord:
    return AdmissibleWord(tuple(q_letters), tuple(tape))
