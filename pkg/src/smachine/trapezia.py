"""Permissible words, theta-bands, trapezia, and disk words.

A permissible word is an admissible word with superscripts that are
locally constant except at junctions with the distinguished circular
part, where they bump by one.  A trapezium is a stack of band records,
each realizing one rule application; every cell boundary is literally a
relator of the compiled presentation, which the harness verifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .machine import (
    Computation,
    History,
    Rule,
    SMachine,
    apply_rule,
    format_slabel,
    is_eligible,
)
from .main_machine import MainMachineBundle
from .presentation import GWord, RelatorFactory, factory_for
from .words import AdmissibleWord, QLetter, Word, YLetter, invert_word


class SuperscriptRequired(Exception):
    pass


class SuperscriptForbidden(Exception):
    pass


class IneligibleHistory(Exception):
    pass


class EmptyHistory(Exception):
    pass


class WitnessInvalid(Exception):
    pass


@dataclass(frozen=True)
class PermissibleWord:
    """An admissible word plus per-letter superscripts (None = plain)."""

    word: AdmissibleWord
    q_sups: tuple[int | None, ...]
    u_sups: tuple[tuple[int | None, ...], ...]

    def __post_init__(self) -> None:
        assert len(self.q_sups) == len(self.word.q)
        assert len(self.u_sups) == len(self.word.u)
        for u, s in zip(self.word.u, self.u_sups):
            assert len(u) == len(s)

    def erase(self) -> AdmissibleWord:
        return self.word

    @property
    def plain(self) -> bool:
        return all(s is None for s in self.q_sups)

    def __str__(self) -> str:
        toks = []
        for i, x in enumerate(self.word.q):
            s = self.q_sups[i]
            toks.append(str(x) if s is None else f"{x.name}^({s})" + ("^-1" if x.sign < 0 else ""))
            if i < len(self.word.u):
                for y, ys in zip(self.word.u[i], self.u_sups[i]):
                    toks.append(str(y) if ys is None else f"{y.name}^({ys})" + ("^-1" if y.sign < 0 else ""))
        return " ".join(toks)

    def to_gens(self, fac: RelatorFactory) -> GWord:
        out = []
        for i, x in enumerate(self.word.q):
            out.append((fac.q_gen(x.name, self.q_sups[i]), x.sign))
            if i < len(self.word.u):
                for y, s in zip(self.word.u[i], self.u_sups[i]):
                    out.append((fac.a_gen(y.name, s), y.sign))
        return tuple(out)


def lift_kind(rule: Rule) -> str:
    """'sup' when the lift carries superscripts, 'plain' when it must not."""
    if rule.tag in ("tr01", "set1", "tr12", "set2"):
        return "sup"
    if rule.tag == "tr23":
        return "sup" if rule.sign > 0 else "plain"
    return "plain"


def make_permissible(
    machine: SMachine,
    v: AdmissibleWord,
    rule: Rule,
    first_sup: int | None = None,
    modulus: int = 0,
) -> PermissibleWord:
    """The unique permissible lift of a rule-admissible word.

    Rules of the early sets need a superscript for the first letter; the
    later sets forbid one (the lift is the word itself).  Superscripts
    propagate unchanged except across junctions with the circular part,
    where they bump by one (mod ``modulus``).
    """
    kind = lift_kind(rule)
    if kind == "plain":
        if first_sup is not None:
            raise SuperscriptForbidden(
                f"rule {format_slabel(rule.signed_label)} admits only the plain lift"
            )
        return PermissibleWord(v, (None,) * len(v.q), tuple((None,) * len(u) for u in v.u))
    if first_sup is None:
        raise SuperscriptRequired(
            f"rule {format_slabel(rule.signed_label)} needs a first-letter superscript"
        )
    n_last = machine.hardware.n_parts - 1

    def norm(s: int) -> int:
        return (s - 1) % modulus + 1 if modulus else s

    q_sups: list[int] = [first_sup]
    for prev, nxt in zip(v.q, v.q[1:]):
        s = q_sups[-1]
        if prev.part == n_last and prev.sign > 0 and nxt.part == 0 and nxt.sign > 0:
            s += 1
        elif prev.part == 0 and prev.sign < 0 and nxt.part == n_last and nxt.sign < 0:
            s -= 1
        q_sups.append(norm(s))
    u_sups = tuple(tuple(q_sups[i] for _ in u) for i, u in enumerate(v.u))
    return PermissibleWord(v, tuple(norm(s) for s in q_sups), u_sups)


@dataclass(frozen=True)
class ThetaBandRecord:
    """One rule application as a band: trimmed bottom/top labels and cells."""

    rule_label: tuple[str, int]
    bottom: PermissibleWord
    top: PermissibleWord
    cells: tuple[GWord, ...]

    def area(self) -> int:
        return len(self.cells)


def _surviving(left: Word, u: Word, right: Word) -> tuple[int, ...]:
    """Indices of letters of ``u`` surviving reduction of left·u·right."""
    stack: list[tuple[YLetter, int | None]] = []
    for item in [(y, None) for y in left] + [(y, i) for i, y in enumerate(u)] + [
        (y, None) for y in right
    ]:
        if stack and stack[-1][0].name == item[0].name and stack[-1][0].sign == -item[0].sign:
            stack.pop()
        else:
            stack.append(item)
    return tuple(i for _, i in stack if i is not None)


def make_band(
    machine: SMachine,
    fac: RelatorFactory,
    bottom: PermissibleWord,
    rule: Rule,
    top_sup: int | None = None,
) -> ThetaBandRecord:
    """Apply a rule to a permissible bottom, producing band and cells.

    ``top_sup`` picks the lift level when the rule enters the
    superscripted phase (the inverse of the 2-to-3 transition).
    """
    w = bottom.word
    w2 = apply_rule(machine, w, rule)
    pos = rule if rule.sign > 0 else rule.inv()
    fam = fac.families[pos.label]

    # instance superscript per position: the superscripted side's level
    if fam == "sup":
        inst_q = list(bottom.q_sups)
    elif fam == "mixed":
        if rule.sign > 0:
            inst_q = list(bottom.q_sups)
        else:
            if top_sup is None:
                raise SuperscriptRequired(
                    f"{format_slabel(rule.signed_label)} needs a lift level for its top"
                )
            tmp = make_permissible(machine, w2, pos, top_sup, modulus=fac.L)
            inst_q = list(tmp.q_sups)
    else:
        inst_q = [None] * len(w.q)

    cells: list[GWord] = []
    for i, x in enumerate(w.q):
        cells.append(fac.theta_q_relator(pos, x.part, inst_q[i]).word)
    hw = machine.hardware
    for i, x in enumerate(w.q[:-1]):
        u = w.u[i]
        if not u:
            continue
        sec = hw.right_sector(x)
        assert sec is not None
        p_left = rule.parts[x.part]
        left = p_left.b if x.sign > 0 else invert_word(p_left.a)
        y = w.q[i + 1]
        p_right = rule.parts[y.part]
        right = p_right.a if y.sign > 0 else invert_word(p_right.b)
        for j in _surviving(left, u, right):
            sup = inst_q[i] if fam != "mixed" else (
                bottom.u_sups[i][j] if rule.sign > 0 else inst_q[i]
            )
            cells.append(fac.theta_a_relator(pos, sec, u[j].name, sup).word)

    # the top lift: level is preserved along the band, erased at the mixed rule
    if fam == "sup":
        top = make_permissible(machine, w2, pos, bottom.q_sups[0], modulus=fac.L)
    elif fam == "mixed" and rule.sign > 0:
        top = PermissibleWord(w2, (None,) * len(w2.q), tuple((None,) * len(u) for u in w2.u))
    elif fam == "mixed":
        top = make_permissible(machine, w2, pos, top_sup, modulus=fac.L)
    else:
        top = PermissibleWord(w2, (None,) * len(w2.q), tuple((None,) * len(u) for u in w2.u))
    return ThetaBandRecord(rule.signed_label, bottom, top, tuple(cells))


@dataclass(frozen=True)
class Trapezium:
    bands: tuple[ThetaBandRecord, ...]

    def __post_init__(self) -> None:
        for a, b in zip(self.bands, self.bands[1:]):
            if a.top != b.bottom:
                raise WitnessInvalid("band labels do not stack")

    @property
    def height(self) -> int:
        return len(self.bands)

    @property
    def history(self) -> History:
        return tuple(b.rule_label for b in self.bands)

    @property
    def bottom(self) -> PermissibleWord:
        return self.bands[0].bottom

    @property
    def top(self) -> PermissibleWord:
        return self.bands[-1].top

    def dump(self) -> str:
        lines = []
        for b in self.bands:
            lines.append(
                f"band {format_slabel(b.rule_label)} | bottom: {b.bottom} | top: {b.top}"
            )
        return "\n".join(lines) + "\n"


def trapezium_area(t: Trapezium) -> int:
    return sum(b.area() for b in t.bands)


def computation_to_trapezium(
    bundle: MainMachineBundle,
    comp: Computation,
    first_sup: int | None = None,
    reentry_sups: Sequence[int] = (),
) -> Trapezium:
    """Realize an eligible computation as a stack of theta-bands.

    ``first_sup`` lifts the bottom when the first rule is in the
    superscripted family; each inverse 2-to-3 transition consumes one
    level from ``reentry_sups`` (defaulting to the previous level plus
    one, which keeps adjacent mirror bands distinct).
    """
    machine = bundle.machine
    fac = factory_for(bundle)
    if not comp.history:
        raise EmptyHistory("a trapezium needs at least one band")
    if not is_eligible(comp.history, allowed=bundle.theta23_label):
        raise IneligibleHistory(" ".join(format_slabel(s) for s in comp.history))
    first_rule = machine.rule(comp.history[0])
    bottom = make_permissible(machine, comp.start, first_rule, first_sup, modulus=bundle.L)
    bands: list[ThetaBandRecord] = []
    reentry = list(reentry_sups)
    level = first_sup
    for sl in comp.history:
        rule = machine.rule(sl)
        top_sup = None
        if fac.families.get(rule.label) == "mixed" and rule.sign < 0:
            if reentry:
                top_sup = reentry.pop(0)
            else:
                top_sup = (level % bundle.L) + 1 if level is not None else 1
            level = top_sup
        band = make_band(machine, fac, bottom, rule, top_sup=top_sup)
        if bands and bands[-1].rule_label == (sl[0], -sl[1]):
            if bands[-1].bottom == band.top:
                raise WitnessInvalid(
                    f"mirror bands at {format_slabel(sl)}: pick a different lift level"
                )
        bands.append(band)
        bottom = band.top
        if bottom.q_sups[0] is not None:
            level = bottom.q_sups[0]
    return Trapezium(tuple(bands))


# --------------------------------------------------------------------------
# disk words


@dataclass(frozen=True)
class DiskVerdict:
    verdict: str  # "yes" | "no" | "unknown"
    witness: History | None = None
    direction: str | None = None  # "accepting" | "from-start"
    budget_exhausted: bool = False


def _bounded_reach(
    machine: SMachine,
    start: AdmissibleWord,
    targets: set[AdmissibleWord],
    budget: int,
) -> tuple[History | None, bool]:
    """Word-graph BFS to any target under a rule-application budget.

    Returns (witness history, budget_exhausted); witness None with the
    flag unset means the reachable set was exhausted: a definite no.
    """
    from collections import deque

    from .machine import apply_rule as _apply, is_applicable as _ok

    if start in targets:
        return (), False
    parent: dict[AdmissibleWord, tuple[AdmissibleWord, tuple[str, int]] | None] = {start: None}
    queue = deque([start])
    spent = 0
    while queue:
        w = queue.popleft()
        for r in machine.candidate_rules(w.q[0]):
            if not _ok(machine, w, r):
                continue
            spent += 1
            if spent > budget:
                return None, True
            w2 = _apply(machine, w, r)
            if w2 in parent:
                continue
            parent[w2] = (w, r.signed_label)
            if w2 in targets:
                hist: list[tuple[str, int]] = []
                cur = w2
                while parent[cur] is not None:
                    prev, sl = parent[cur]  # type: ignore[misc]
                    hist.append(sl)
                    cur = prev
                return tuple(reversed(hist)), False
            queue.append(w2)
    return None, False


def is_disk_word(
    v: PermissibleWord, bundle: MainMachineBundle, budget: int = 10_000
) -> DiskVerdict:
    """Does the erasure factor as the L-th power of an accessible word?

    The power test is exact; accessibility is certified by a bounded
    bidirectional search, so "unknown" is a possible verdict.
    """
    w = v.erase()
    L = bundle.L
    if len(w.q) % L != 0:
        return DiskVerdict("no")
    n = len(w.q) // L
    blocks_q = [w.q[i * n : (i + 1) * n] for i in range(L)]
    if any(b != blocks_q[0] for b in blocks_q):
        return DiskVerdict("no")
    us = [w.u[i * n : (i + 1) * n - 1] for i in range(L)]
    joins = [w.u[(i + 1) * n - 1] for i in range(L - 1)]
    if any(u != us[0] for u in us) or any(j != () for j in joins):
        return DiskVerdict("no")
    base = AdmissibleWord(blocks_q[0], tuple(us[0]))
    if base.base != bundle.w_st.base:
        return DiskVerdict("no")
    machine = bundle.machine
    wit, exhausted1 = _bounded_reach(machine, base, {bundle.w_ac}, budget)
    if wit is not None:
        return DiskVerdict("yes", wit, "accepting")
    wit, exhausted2 = _bounded_reach(machine, bundle.s1(), {base}, budget)
    if wit is not None:
        return DiskVerdict("yes", wit, "from-start")
    if exhausted1 or exhausted2:
        return DiskVerdict("unknown", budget_exhausted=True)
    return DiskVerdict("no")


def power_word(w: AdmissibleWord, L: int) -> AdmissibleWord:
    """W^L for a configuration (used to build disk boundaries)."""
    qs: list[QLetter] = []
    us: list[Word] = []
    for i in range(L):
        qs.extend(w.q)
        us.extend(w.u)
        if i < L - 1:
            us.append(())
    return AdmissibleWord(tuple(qs), tuple(us))


def disk_diagram_cells(
    w: AdmissibleWord, comp: Computation, bundle: MainMachineBundle
) -> int:
    """Cells of the disk with boundary W^L: one hub plus L trapezia."""
    if comp.start != w and comp.end != w:
        raise WitnessInvalid("computation does not involve the given word")
    is_accepting = comp.start == w and comp.end == bundle.w_ac
    is_access = comp.end == w and comp.start in (bundle.s1(), bundle.w_st)
    if not (is_accepting or is_access):
        raise WitnessInvalid("computation is not an accessibility witness")
    if len(comp) == 0:
        return 1
    trap = computation_to_trapezium(bundle, comp, first_sup=_needs_sup(bundle, comp))
    return 1 + bundle.L * trapezium_area(trap)


def _needs_sup(bundle: MainMachineBundle, comp: Computation) -> int | None:
    rule = bundle.machine.rule(comp.history[0])
    return 1 if lift_kind(rule) == "sup" else None
