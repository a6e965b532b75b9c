"""Breadth-first enumeration of computations and level-set reachability.

``enumerate_computations`` yields every computation from a start word of
length <= depth passing the filter, exactly once, in a deterministic
order: by length, then lexicographically by the rule order of the
machine (label-sorted, positive before negative).

``reach_levels`` is the workhorse for the verification suites: a level-
synchronous sweep over (word, last rule) states that covers *all*
reduced paths without enumerating them one by one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .machine import (
    Computation,
    History,
    Rule,
    SMachine,
    apply_rule,
    is_applicable,
)
from .words import AdmissibleWord

Filter = str  # "reduced" | "eligible" | "all"


def _passes(filt: str, prev: tuple[str, int] | None, rule: Rule, eligible_label: str | None) -> bool:
    if filt == "all" or prev is None:
        return True
    lbl, sg = prev
    if lbl == rule.label and sg == -rule.sign:
        if filt == "eligible" and eligible_label is not None:
            # theta(23)·theta(23)^-1 allowed, the reversed order rejected
            return lbl == eligible_label and sg == 1 and rule.sign == -1
        return False
    return True


def enumerate_computations(
    machine: SMachine,
    start: AdmissibleWord,
    depth: int,
    filt: Filter = "reduced",
    eligible_label: str | None = None,
    rule_subset: Callable[[Rule], bool] | None = None,
) -> Iterator[Computation]:
    """Stream computations of length <= depth, breadth first."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if filt not in ("reduced", "eligible", "all"):
        raise ValueError(f"unknown filter {filt!r}")
    level: list[tuple[History, tuple[AdmissibleWord, ...]]] = [((), (start,))]
    yield Computation(start, (), (start,))
    for _ in range(depth):
        nxt: list[tuple[History, tuple[AdmissibleWord, ...]]] = []
        for hist, trace in level:
            prev = hist[-1] if hist else None
            cur = trace[-1]
            rules = machine.candidate_rules(cur.q[0])
            if rule_subset is not None:
                rules = tuple(r for r in rules if rule_subset(r))
            for r in rules:
                if not _passes(filt, prev, r, eligible_label):
                    continue
                if not is_applicable(machine, cur, r):
                    continue
                w2 = apply_rule(machine, cur, r)
                item = (hist + (r.signed_label,), trace + (w2,))
                nxt.append(item)
                yield Computation(start, item[0], item[1])
        if not nxt:
            return
        level = nxt


@dataclass
class LevelState:
    """One reachable (word, last-rule) state with provenance for witnesses."""

    word: AdmissibleWord
    last: tuple[str, int] | None
    parent: "LevelState | None" = None

    def history(self) -> History:
        out = []
        node: LevelState | None = self
        while node is not None and node.last is not None:
            out.append(node.last)
            node = node.parent
        return tuple(reversed(out))


def reach_levels(
    machine: SMachine,
    starts: Iterable[AdmissibleWord],
    depth: int,
    filt: Filter = "reduced",
    eligible_label: str | None = None,
    rule_subset: Callable[[Rule], bool] | None = None,
    state_key: Callable[[LevelState], object] | None = None,
) -> Iterator[tuple[int, list[LevelState]]]:
    """Level-synchronous reachability over (word, last rule) states.

    Yields (t, states). A state appears in level t iff some path of
    length t under the filter ends there; states deduplicate per level by
    ``state_key`` (default: word + last rule), so all paths are covered
    without per-path enumeration.
    """
    key = state_key or (lambda s: (s.word, s.last))
    level = [LevelState(w, None) for w in starts]
    seen_dedup: dict[object, LevelState] = {}
    deduped = []
    for s in level:
        k = key(s)
        if k not in seen_dedup:
            seen_dedup[k] = s
            deduped.append(s)
    level = deduped
    yield 0, level
    for t in range(1, depth + 1):
        nxt: dict[object, LevelState] = {}
        for s in level:
            rules = machine.candidate_rules(s.word.q[0])
            if rule_subset is not None:
                rules = tuple(r for r in rules if rule_subset(r))
            for r in rules:
                if not _passes(filt, s.last, r, eligible_label):
                    continue
                if not is_applicable(machine, s.word, r):
                    continue
                w2 = apply_rule(machine, s.word, r)
                ns = LevelState(w2, r.signed_label, s)
                k = key(ns)
                if k not in nxt:
                    nxt[k] = ns
        if not nxt:
            return
        level = list(nxt.values())
        yield t, level
