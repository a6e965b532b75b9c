"""Running-state-letter machines.

``build_lr(Y)``: standard base Q1 P Q2; the middle letter sweeps left
through the left sector, replacing each letter a by its primed copy a'
deposited in the right sector, turns, and sweeps back.  ``build_rl`` is
the mirror image (content in the right sector, scratch on the left).
``build_lr_m`` repeats the sweep m times with 2m phase letters.
"""

from __future__ import annotations

from typing import Sequence

from .machine import Hardware, Rule, RulePart, SMachine
from .words import YLetter


class EmptyAlphabet(Exception):
    pass


class InvalidM(Exception):
    pass


def primed(name: str) -> str:
    return name + "'"


def _domains(left: frozenset[str], right: frozenset[str]) -> tuple[frozenset[str], frozenset[str]]:
    return (left, right)


def build_lr(alphabet: Sequence[str], name: str = "LR") -> SMachine:
    """Left-then-right sweep machine over ``alphabet``.

    Positive rules per letter a: z1_a (p1 -> a^-1 p1 a'), the turn z12
    locking the left sector, and z2_a (p2 -> a p2 a'^-1).
    """
    if not alphabet:
        raise EmptyAlphabet("running-letter machine needs a nonempty alphabet")
    ys = tuple(alphabet)
    ysp = tuple(primed(a) for a in ys)
    both = frozenset(ys) | frozenset(ysp)
    hw = Hardware(
        parts=(("q1",), ("p1", "p2"), ("q2",)),
        sector_alphabets=(both, both),
    )
    plain, prim = frozenset(ys), frozenset(ysp)
    rules = []
    for a in ys:
        rules.append(
            Rule(
                f"z1_{a}",
                (
                    RulePart("q1", (), "q1", ()),
                    RulePart("p1", (YLetter(a, -1),), "p1", (YLetter(primed(a), 1),)),
                    RulePart("q2", (), "q2", ()),
                ),
                _domains(plain, prim),
                tag="lr",
            )
        )
    rules.append(
        Rule(
            "z12",
            (
                RulePart("q1", (), "q1", ()),
                RulePart("p1", (), "p2", ()),
                RulePart("q2", (), "q2", ()),
            ),
            _domains(frozenset(), prim),
            tag="lr",
        )
    )
    for a in ys:
        rules.append(
            Rule(
                f"z2_{a}",
                (
                    RulePart("q1", (), "q1", ()),
                    RulePart("p2", (YLetter(a, 1),), "p2", (YLetter(primed(a), -1),)),
                    RulePart("q2", (), "q2", ()),
                ),
                _domains(plain, prim),
                tag="lr",
            )
        )
    return SMachine(
        hardware=hw,
        positive_rules=tuple(rules),
        start_letters=("q1", "p1", "q2"),
        end_letters=("q1", "p2", "q2"),
        input_sector=0,
        name=name,
    )


def build_rl(alphabet: Sequence[str], name: str = "RL") -> SMachine:
    """Mirror of LR: content in the right sector, run right then left."""
    if not alphabet:
        raise EmptyAlphabet("running-letter machine needs a nonempty alphabet")
    ys = tuple(alphabet)
    ysp = tuple(primed(a) for a in ys)
    both = frozenset(ys) | frozenset(ysp)
    hw = Hardware(
        parts=(("q1",), ("r1", "r2"), ("q2",)),
        sector_alphabets=(both, both),
    )
    plain, prim = frozenset(ys), frozenset(ysp)
    rules = []
    for a in ys:
        rules.append(
            Rule(
                f"x1_{a}",
                (
                    RulePart("q1", (), "q1", ()),
                    RulePart("r1", (YLetter(primed(a), 1),), "r1", (YLetter(a, -1),)),
                    RulePart("q2", (), "q2", ()),
                ),
                _domains(prim, plain),
                tag="rl",
            )
        )
    rules.append(
        Rule(
            "x12",
            (
                RulePart("q1", (), "q1", ()),
                RulePart("r1", (), "r2", ()),
                RulePart("q2", (), "q2", ()),
            ),
            _domains(prim, frozenset()),
            tag="rl",
        )
    )
    for a in ys:
        rules.append(
            Rule(
                f"x2_{a}",
                (
                    RulePart("q1", (), "q1", ()),
                    RulePart("r2", (YLetter(primed(a), -1),), "r2", (YLetter(a, 1),)),
                    RulePart("q2", (), "q2", ()),
                ),
                _domains(prim, plain),
                tag="rl",
            )
        )
    return SMachine(
        hardware=hw,
        positive_rules=tuple(rules),
        start_letters=("q1", "r1", "q2"),
        end_letters=("q1", "r2", "q2"),
        input_sector=1,
        name=name,
    )


def build_lr_m(alphabet: Sequence[str], m: int, name: str = "LRm") -> SMachine:
    """Back-and-forth sweep repeated m times; p carries phase indices 1..2m.

    Odd phases move left (consume the left sector), even phases move
    right.  Turning rules zt_i (i = 1..2m-1) bump the phase: odd turns
    lock the left sector, even turns lock the right one.
    """
    if m < 1:
        raise InvalidM(f"m must be >= 1, got {m}")
    if not alphabet:
        raise EmptyAlphabet("running-letter machine needs a nonempty alphabet")
    ys = tuple(alphabet)
    ysp = tuple(primed(a) for a in ys)
    both = frozenset(ys) | frozenset(ysp)
    p_letters = tuple(f"p{i}" for i in range(1, 2 * m + 1))
    hw = Hardware(
        parts=(("q1",), p_letters, ("q2",)),
        sector_alphabets=(both, both),
    )
    plain, prim = frozenset(ys), frozenset(ysp)
    rules = []
    for i in range(1, 2 * m + 1):
        for a in ys:
            if i % 2 == 1:
                mid = RulePart(f"p{i}", (YLetter(a, -1),), f"p{i}", (YLetter(primed(a), 1),))
            else:
                mid = RulePart(f"p{i}", (YLetter(a, 1),), f"p{i}", (YLetter(primed(a), -1),))
            rules.append(
                Rule(
                    f"zm{i}_{a}",
                    (RulePart("q1", (), "q1", ()), mid, RulePart("q2", (), "q2", ())),
                    _domains(plain, prim),
                    tag="lrm",
                )
            )
        if i < 2 * m:
            doms = _domains(frozenset(), prim) if i % 2 == 1 else _domains(plain, frozenset())
            rules.append(
                Rule(
                    f"zt{i}",
                    (
                        RulePart("q1", (), "q1", ()),
                        RulePart(f"p{i}", (), f"p{i+1}", ()),
                        RulePart("q2", (), "q2", ()),
                    ),
                    doms,
                    tag="lrm",
                )
            )
    return SMachine(
        hardware=hw,
        positive_rules=tuple(rules),
        start_letters=("q1", "p1", "q2"),
        end_letters=("q1", f"p{2*m}", "q2"),
        input_sector=0,
        name=name,
    )
