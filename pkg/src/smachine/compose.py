"""Machine compositions: history sectors, control letters, the 4m+1
stage concatenation, the mirror double, and the circular closure.

Letter naming is systematic so printed machines are diffable:
``_l``/``_r`` for the left/right copies made when history sectors are
added, ``cp{j}``/``cr{j}`` for control letters, ``_s{k}`` for stage
copies, ``_m`` for mirror copies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .machine import Hardware, Rule, RulePart, SMachine
from .words import AdmissibleWord, Word, YLetter


class NoInputSector(Exception):
    pass


class StageMismatch(Exception):
    pass


# --------------------------------------------------------------------------
# history sectors


@dataclass(frozen=True)
class HistorySector:
    """One history sector: its flat index and the per-rule letter copies."""

    sector: int
    left_copy: Mapping[str, str]  # rule label -> X_{i,l} letter
    right_copy: Mapping[str, str]

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(self.left_copy.values()) | frozenset(self.right_copy.values())

    @property
    def left_alphabet(self) -> frozenset[str]:
        return frozenset(self.left_copy.values())

    @property
    def right_alphabet(self) -> frozenset[str]:
        return frozenset(self.right_copy.values())


@dataclass(frozen=True)
class M2Build:
    machine: SMachine
    input_sector: int
    history: tuple[HistorySector, ...]
    rule_labels: tuple[str, ...]  # base machine positive labels, in order


def add_history_sectors(m1: SMachine, name: str = "M2") -> M2Build:
    """Split every interior part boundary of ``m1`` by a history sector.

    Part Q_i becomes Q_{i,l} Q_{i,r} (the outermost halves are dropped);
    each positive rule theta acquires, per history sector, an inverse
    left copy deposited by the left letter and a right copy deposited by
    the right one, so a run of the machine scans a prewritten history.
    A rule locking an old working sector locks its image.
    """
    if m1.hardware.circular:
        raise NoInputSector("history sectors need a non-circular machine")
    if m1.input_sector is None:
        raise NoInputSector(f"machine {m1.name} has no input sector")
    hw = m1.hardware
    n = hw.n_parts - 1
    if n < 2:
        raise NoInputSector("need at least three parts so a history sector exists")

    parts: list[tuple[str, ...]] = []
    flat_of_m1_part: dict[tuple[int, str], int] = {}  # (m1 part, "l"/"r") -> flat
    for i in range(hw.n_parts):
        if i > 0:
            flat_of_m1_part[(i, "l")] = len(parts)
            parts.append(tuple(f"{q}_l" for q in hw.parts[i]))
        if i < n:
            flat_of_m1_part[(i, "r")] = len(parts)
            parts.append(tuple(f"{q}_r" for q in hw.parts[i]))

    labels = tuple(r.label for r in sorted(m1.positive_rules, key=lambda r: r.label))
    hist_sectors: list[HistorySector] = []
    alphabets: list[frozenset[str]] = []
    sector_of_m1 = {}
    for i in range(n):  # m1 sector i -> between Q_{i,r} and Q_{i+1,l}
        sector_of_m1[i] = len(alphabets)
        alphabets.append(hw.sector_alphabets[i])
        if i + 1 <= n - 1:  # history sector inside part i+1
            hs = HistorySector(
                sector=len(alphabets),
                left_copy={lbl: f"{lbl}_l{i+1}" for lbl in labels},
                right_copy={lbl: f"{lbl}_r{i+1}" for lbl in labels},
            )
            hist_sectors.append(hs)
            alphabets.append(hs.alphabet)

    new_rules: list[Rule] = []
    for rule in m1.positive_rules:
        rps: list[RulePart] = []
        doms: list[frozenset[str]] = [frozenset()] * len(alphabets)
        for i in range(n + 1):
            p = rule.parts[i]
            if i > 0:
                hs = hist_sectors[i - 1] if i - 1 < len(hist_sectors) else None
                b_l: Word = (YLetter(hs.left_copy[rule.label], -1),) if hs else ()
                rps.append(RulePart(f"{p.src}_l", p.a, f"{p.dst}_l", b_l))
            if i < n:
                hs = hist_sectors[i - 1] if 1 <= i <= len(hist_sectors) else None
                a_r: Word = (YLetter(hs.right_copy[rule.label], 1),) if hs else ()
                rps.append(RulePart(f"{p.src}_r", a_r, f"{p.dst}_r", p.b))
        for i in range(n):
            doms[sector_of_m1[i]] = rule.domains[i]
        for hs in hist_sectors:
            doms[hs.sector] = hs.alphabet
        new_rules.append(Rule(rule.label, tuple(rps), tuple(doms), tag=rule.tag))

    machine = SMachine(
        hardware=Hardware(tuple(parts), tuple(alphabets)),
        positive_rules=tuple(new_rules),
        start_letters=tuple(
            f"{q}_{side}"
            for i, q in enumerate(m1.start_letters)
            for side in (("r",) if i == 0 else ("l",) if i == n else ("l", "r"))
        ),
        end_letters=tuple(
            f"{q}_{side}"
            for i, q in enumerate(m1.end_letters)
            for side in (("r",) if i == 0 else ("l",) if i == n else ("l", "r"))
        ),
        input_sector=sector_of_m1[m1.input_sector],
        name=name,
    )
    return M2Build(machine, machine.input_sector, tuple(hist_sectors), labels)


def start_configuration_m2(b: M2Build, k: int, hist: Sequence[str], letter: str = "a") -> AdmissibleWord:
    """I2(a^k, H): input content plus a left-alphabet copy of H per history sector."""
    tape: dict[int, Word] = {
        b.input_sector: tuple(YLetter(letter, 1 if k >= 0 else -1) for _ in range(abs(k)))
    }
    for hs in b.history:
        tape[hs.sector] = tuple(YLetter(hs.left_copy[lbl], 1) for lbl in hist)
    return b.machine.standard_base_word(b.machine.start_letters, tape)


def end_configuration_m2(b: M2Build, hist: Sequence[str]) -> AdmissibleWord:
    """A2(H): end letters, right-alphabet copy of H per history sector."""
    tape: dict[int, Word] = {}
    for hs in b.history:
        tape[hs.sector] = tuple(YLetter(hs.right_copy[lbl], 1) for lbl in hist)
    return b.machine.standard_base_word(b.machine.end_letters, tape)


# --------------------------------------------------------------------------
# control letters


@dataclass(frozen=True)
class ControlledHistorySector:
    sector: int  # flat sector index in the controlled machine
    r_part: int  # the R part on its left (running letters of the right-left sweeps)
    p_part: int  # the P part on its right (running letters of the left-right sweeps)
    rl_scratch: int  # QR sector left of r_part
    lr_scratch: int  # PQ sector right of p_part
    left_copy: Mapping[str, str]
    right_copy: Mapping[str, str]

    @property
    def left_alphabet(self) -> frozenset[str]:
        return frozenset(self.left_copy.values())

    @property
    def right_alphabet(self) -> frozenset[str]:
        return frozenset(self.right_copy.values())


@dataclass(frozen=True)
class M2BarBuild:
    machine: SMachine
    m2: M2Build
    input_sector: int
    history: tuple[ControlledHistorySector, ...]
    part_tags: tuple[str, ...]
    rule_labels: tuple[str, ...]


def add_control_letters(b: M2Build, name: str = "M2bar") -> M2BarBuild:
    """Replace every part Q_i by the triple P_i Q_i R_i.

    The new sectors P_iQ_i and Q_iR_i are locked by every rule; the old
    sector between Q_i and Q_{i+1} moves between R_i and P_{i+1}.
    """
    m2 = b.machine
    hw = m2.hardware
    s1 = hw.n_parts  # s+1 parts
    parts: list[tuple[str, ...]] = []
    tags: list[str] = []
    for j in range(s1):
        parts.append((f"cp{j}",))
        tags.append(f"p{j}")
        parts.append(hw.parts[j])
        tags.append(f"q{j}")
        parts.append((f"cr{j}",))
        tags.append(f"r{j}")
    # sectors of 3(s+1) parts: P_jQ_j at 3j, Q_jR_j at 3j+1, R_jP_{j+1} at 3j+2
    alphabets: list[frozenset[str]] = []
    for j in range(s1):
        alphabets.append(frozenset())
        alphabets.append(frozenset())
        if j < s1 - 1:
            alphabets.append(hw.sector_alphabets[j])
    # RL/LR scratch alphabets around each history sector
    hist: list[ControlledHistorySector] = []
    for hs in b.history:
        j = hs.sector  # m2 sector index = left part index in m2
        new_sector = 3 * j + 2
        r_part = 3 * j + 2
        p_part = 3 * (j + 1)
        rl_scratch = 3 * j + 1
        lr_scratch = 3 * (j + 1)  # P_{j+1}Q_{j+1} sector
        hist.append(
            ControlledHistorySector(
                sector=new_sector,
                r_part=r_part,
                p_part=p_part,
                rl_scratch=rl_scratch,
                lr_scratch=lr_scratch,
                left_copy=hs.left_copy,
                right_copy=hs.right_copy,
            )
        )
        alphabets[rl_scratch] = hs.right_alphabet
        alphabets[lr_scratch] = hs.left_alphabet

    rules: list[Rule] = []
    for rule in m2.positive_rules:
        rps: list[RulePart] = []
        doms = [frozenset()] * len(alphabets)
        for j in range(s1):
            p = rule.parts[j]
            rps.append(RulePart(f"cp{j}", p.a, f"cp{j}", ()))
            rps.append(RulePart(p.src, (), p.dst, ()))
            rps.append(RulePart(f"cr{j}", (), f"cr{j}", p.b))
        for j in range(s1 - 1):
            doms[3 * j + 2] = rule.domains[j]
        rules.append(Rule(rule.label, tuple(rps), tuple(doms), tag=rule.tag))

    def lift(letters: Sequence[str]) -> tuple[str, ...]:
        out = []
        for j, q in enumerate(letters):
            out.extend((f"cp{j}", q, f"cr{j}"))
        return tuple(out)

    machine = SMachine(
        hardware=Hardware(tuple(parts), tuple(alphabets)),
        positive_rules=tuple(rules),
        start_letters=lift(m2.start_letters),
        end_letters=lift(m2.end_letters),
        input_sector=3 * m2.input_sector + 2,
        name=name,
    )
    return M2BarBuild(machine, b, machine.input_sector, tuple(hist), tuple(tags), b.rule_labels)


# --------------------------------------------------------------------------
# the 4m+1 stage concatenation


@dataclass(frozen=True)
class Stage:
    index: int  # 1-based
    kind: str  # "rl" | "fwd" | "lr" | "bwd"
    start_letters: tuple[str, ...]
    end_letters: tuple[str, ...]
    rule_labels: tuple[str, ...]


@dataclass(frozen=True)
class M3Build:
    machine: SMachine
    m2bar: M2BarBuild
    m: int
    stages: tuple[Stage, ...]
    chi_labels: tuple[str, ...]
    part_tags: tuple[str, ...]

    @property
    def history(self) -> tuple[ControlledHistorySector, ...]:
        return self.m2bar.history

    @property
    def input_sector(self) -> int:
        return self.m2bar.input_sector


def _stage_kind(sigma: int) -> str:
    r = sigma % 4
    return {1: "rl", 2: "fwd", 3: "lr", 0: "bwd"}[r]


def compose_m3(m2bar: M2BarBuild, m: int, name: str = "M3") -> M3Build:
    """Concatenate 4m+1 stage machines over the controlled hardware.

    Odd stages sweep the history sectors (right-left on the R letters,
    left-right on the P letters, alternating), even stages run the
    scanning machine forwards/backwards; chi rules connect consecutive
    stages with the alphabet-purity domains that make each crossing
    one-shot.
    """
    if m < 1:
        raise StageMismatch(f"m must be >= 1, got {m}")
    base = m2bar.machine
    hw = base.hardware
    hist = m2bar.history
    if not hist:
        raise StageMismatch("controlled machine has no history sectors")
    labels = m2bar.rule_labels
    running_r = {h.r_part for h in hist}
    running_p = {h.p_part for h in hist}
    n_stages = 4 * m + 1

    start_copy = {base.start_letters[i]: i for i in range(hw.n_parts)}
    part_start = {i: base.start_letters[i] for i in range(hw.n_parts)}
    part_end = {i: base.end_letters[i] for i in range(hw.n_parts)}

    def stage_parts(sigma: int) -> list[tuple[str, ...]]:
        kind = _stage_kind(sigma)
        out = []
        for i in range(hw.n_parts):
            if kind in ("rl", "lr"):
                frozen = part_start[i] if kind == "rl" else part_end[i]
                if kind == "rl" and i in running_r:
                    out.append((f"{frozen}a_s{sigma}", f"{frozen}b_s{sigma}"))
                elif kind == "lr" and i in running_p:
                    out.append((f"{frozen}a_s{sigma}", f"{frozen}b_s{sigma}"))
                else:
                    out.append((f"{frozen}_s{sigma}",))
            else:
                out.append(tuple(f"{x}_s{sigma}" for x in hw.parts[i]))
        return out

    def stage_start(sigma: int) -> tuple[str, ...]:
        kind = _stage_kind(sigma)
        out = []
        for i in range(hw.n_parts):
            if kind == "rl":
                base_l = part_start[i]
                out.append(f"{base_l}a_s{sigma}" if i in running_r else f"{base_l}_s{sigma}")
            elif kind == "lr":
                base_l = part_end[i]
                out.append(f"{base_l}a_s{sigma}" if i in running_p else f"{base_l}_s{sigma}")
            elif kind == "fwd":
                out.append(f"{part_start[i]}_s{sigma}")
            else:
                out.append(f"{part_end[i]}_s{sigma}")
        return tuple(out)

    def stage_end(sigma: int) -> tuple[str, ...]:
        kind = _stage_kind(sigma)
        out = []
        for i in range(hw.n_parts):
            if kind == "rl":
                base_l = part_start[i]
                out.append(f"{base_l}b_s{sigma}" if i in running_r else f"{base_l}_s{sigma}")
            elif kind == "lr":
                base_l = part_end[i]
                out.append(f"{base_l}b_s{sigma}" if i in running_p else f"{base_l}_s{sigma}")
            elif kind == "fwd":
                out.append(f"{part_end[i]}_s{sigma}")
            else:
                out.append(f"{part_start[i]}_s{sigma}")
        return tuple(out)

    parts: list[list[str]] = [[] for _ in range(hw.n_parts)]
    for sigma in range(1, n_stages + 1):
        for i, ps in enumerate(stage_parts(sigma)):
            parts[i].extend(ps)

    n_sec = hw.n_sectors
    empty_doms = [frozenset()] * n_sec

    def doms_with(entries: Mapping[int, frozenset[str]]) -> tuple[frozenset[str], ...]:
        d = list(empty_doms)
        for k, v in entries.items():
            d[k] = v
        return tuple(d)

    input_dom = hw.sector_alphabets[m2bar.input_sector]

    stages: list[Stage] = []
    rules: list[Rule] = []
    chi_labels: list[str] = []
    for sigma in range(1, n_stages + 1):
        kind = _stage_kind(sigma)
        sparts = stage_parts(sigma)
        stage_rules: list[str] = []

        def ident(i: int) -> RulePart:
            x = sparts[i][0]
            return RulePart(x, (), x, ())

        if kind == "rl":
            # run right: consume a left-copy on the right, deposit the right copy left
            for lbl in labels:
                rps = []
                for i in range(hw.n_parts):
                    if i in running_r:
                        h = next(h for h in hist if h.r_part == i)
                        x = sparts[i][0]
                        rps.append(
                            RulePart(x, (YLetter(h.right_copy[lbl], 1),), x, (YLetter(h.left_copy[lbl], -1),))
                        )
                    else:
                        rps.append(ident(i))
                dom = {h.sector: h.left_alphabet for h in hist}
                dom.update({h.rl_scratch: h.right_alphabet for h in hist})
                dom[m2bar.input_sector] = input_dom
                rules.append(Rule(f"s{sigma}_r1_{lbl}", tuple(rps), doms_with(dom), tag="m3"))
                stage_rules.append(f"s{sigma}_r1_{lbl}")
            rps = []
            for i in range(hw.n_parts):
                if i in running_r:
                    rps.append(RulePart(sparts[i][0], (), sparts[i][1], ()))
                else:
                    rps.append(ident(i))
            dom = {h.rl_scratch: h.right_alphabet for h in hist}
            dom[m2bar.input_sector] = input_dom
            rules.append(Rule(f"s{sigma}_rt", tuple(rps), doms_with(dom), tag="m3"))
            stage_rules.append(f"s{sigma}_rt")
            for lbl in labels:
                rps = []
                for i in range(hw.n_parts):
                    if i in running_r:
                        h = next(h for h in hist if h.r_part == i)
                        x = sparts[i][1]
                        rps.append(
                            RulePart(x, (YLetter(h.right_copy[lbl], -1),), x, (YLetter(h.left_copy[lbl], 1),))
                        )
                    else:
                        rps.append(ident(i))
                dom = {h.sector: h.left_alphabet for h in hist}
                dom.update({h.rl_scratch: h.right_alphabet for h in hist})
                dom[m2bar.input_sector] = input_dom
                rules.append(Rule(f"s{sigma}_r2_{lbl}", tuple(rps), doms_with(dom), tag="m3"))
                stage_rules.append(f"s{sigma}_r2_{lbl}")
        elif kind == "lr":
            for lbl in labels:
                rps = []
                for i in range(hw.n_parts):
                    if i in running_p:
                        h = next(h for h in hist if h.p_part == i)
                        x = sparts[i][0]
                        rps.append(
                            RulePart(x, (YLetter(h.right_copy[lbl], -1),), x, (YLetter(h.left_copy[lbl], 1),))
                        )
                    else:
                        rps.append(ident(i))
                dom = {h.sector: h.right_alphabet for h in hist}
                dom.update({h.lr_scratch: h.left_alphabet for h in hist})
                rules.append(Rule(f"s{sigma}_l1_{lbl}", tuple(rps), doms_with(dom), tag="m3"))
                stage_rules.append(f"s{sigma}_l1_{lbl}")
            rps = []
            for i in range(hw.n_parts):
                if i in running_p:
                    rps.append(RulePart(sparts[i][0], (), sparts[i][1], ()))
                else:
                    rps.append(ident(i))
            dom = {h.lr_scratch: h.left_alphabet for h in hist}
            rules.append(Rule(f"s{sigma}_lt", tuple(rps), doms_with(dom), tag="m3"))
            stage_rules.append(f"s{sigma}_lt")
            for lbl in labels:
                rps = []
                for i in range(hw.n_parts):
                    if i in running_p:
                        h = next(h for h in hist if h.p_part == i)
                        x = sparts[i][1]
                        rps.append(
                            RulePart(x, (YLetter(h.right_copy[lbl], 1),), x, (YLetter(h.left_copy[lbl], -1),))
                        )
                    else:
                        rps.append(ident(i))
                dom = {h.sector: h.right_alphabet for h in hist}
                dom.update({h.lr_scratch: h.left_alphabet for h in hist})
                rules.append(Rule(f"s{sigma}_l2_{lbl}", tuple(rps), doms_with(dom), tag="m3"))
                stage_rules.append(f"s{sigma}_l2_{lbl}")
        else:
            for rule in base.positive_rules:
                src_rule = rule if kind == "fwd" else rule.inv()
                suffix = "" if kind == "fwd" else "_b"
                rps = []
                for i in range(hw.n_parts):
                    p = src_rule.parts[i]
                    rps.append(RulePart(f"{p.src}_s{sigma}", p.a, f"{p.dst}_s{sigma}", p.b))
                dom = {j: rule.domains[j] for j in range(n_sec) if rule.domains[j]}
                rules.append(
                    Rule(f"s{sigma}_{rule.label}{suffix}", tuple(rps), doms_with(dom), tag="m3")
                )
                stage_rules.append(f"s{sigma}_{rule.label}{suffix}")

        stages.append(Stage(sigma, kind, stage_start(sigma), stage_end(sigma), tuple(stage_rules)))

    for sigma in range(1, n_stages):
        frm, to = stages[sigma - 1], stages[sigma]
        rps = [RulePart(frm.end_letters[i], (), to.start_letters[i], ()) for i in range(hw.n_parts)]
        kind = _stage_kind(sigma)
        if kind == "rl":  # chi(1,2)-type: left alphabets plus the input sector
            dom = {h.sector: h.left_alphabet for h in hist}
            dom[m2bar.input_sector] = input_dom
        elif kind == "fwd":  # chi(2,3)-type: right alphabets only
            dom = {h.sector: h.right_alphabet for h in hist}
        elif kind == "lr":  # chi(3,4)-type
            dom = {h.sector: h.right_alphabet for h in hist}
        else:  # chi(4,5)-type
            dom = {h.sector: h.left_alphabet for h in hist}
            dom[m2bar.input_sector] = input_dom
        lbl = f"chi_{sigma}_{sigma+1}"
        rules.append(Rule(lbl, tuple(rps), doms_with(dom), tag="m3"))
        chi_labels.append(lbl)

    machine = SMachine(
        hardware=Hardware(tuple(tuple(p) for p in parts), hw.sector_alphabets),
        positive_rules=tuple(rules),
        start_letters=stages[0].start_letters,
        end_letters=stages[-1].end_letters,
        input_sector=m2bar.input_sector,
        name=name,
    )
    return M3Build(machine, m2bar, m, tuple(stages), tuple(chi_labels), m2bar.part_tags)


def start_configuration_m3(b: M3Build, k: int, hist: Sequence[str], letter: str = "a") -> AdmissibleWord:
    tape: dict[int, Word] = {
        b.input_sector: tuple(YLetter(letter, 1 if k >= 0 else -1) for _ in range(abs(k)))
    }
    for hs in b.history:
        tape[hs.sector] = tuple(YLetter(hs.left_copy[lbl], 1) for lbl in hist)
    return b.machine.standard_base_word(b.machine.start_letters, tape)


def stage_sweep_history(b: M3Build, hist: Sequence[str]) -> tuple[tuple[str, int], ...]:
    """The straight-line run of all 4m+1 stages on history content ``hist``."""
    out: list[tuple[str, int]] = []
    t = list(hist)
    for st in b.stages:
        sigma = st.index
        if st.kind == "rl":
            out += [(f"s{sigma}_r1_{lbl}", 1) for lbl in t]
            out.append((f"s{sigma}_rt", 1))
            out += [(f"s{sigma}_r2_{lbl}", 1) for lbl in reversed(t)]
        elif st.kind == "lr":
            out += [(f"s{sigma}_l1_{lbl}", 1) for lbl in reversed(t)]
            out.append((f"s{sigma}_lt", 1))
            out += [(f"s{sigma}_l2_{lbl}", 1) for lbl in t]
        elif st.kind == "fwd":
            out += [(f"s{sigma}_{lbl}", 1) for lbl in t]
        else:
            out += [(f"s{sigma}_{lbl}_b", 1) for lbl in reversed(t)]
        if sigma < len(b.stages):
            out.append((f"chi_{sigma}_{sigma+1}", 1))
    return tuple(out)


# --------------------------------------------------------------------------
# mirror double and circular closure


MIRROR_SUFFIX = "_m"


def mirror_name(x: str) -> str:
    return x + MIRROR_SUFFIX


def mirror_word(w: Word) -> Word:
    """Mirror image of an insert: primed copy, inverted and reversed."""
    return tuple(YLetter(mirror_name(y.name), -y.sign) for y in reversed(w))


@dataclass(frozen=True)
class M4Build:
    machine: SMachine
    m3: M3Build
    mirror_part: Mapping[int, int]
    mirror_sector: Mapping[int, int]
    junction_sector: int
    part_tags: tuple[str, ...]


def mirror_m4(m3: M3Build, name: str = "M4") -> M4Build:
    """Double the machine with a mirror copy; every rule acts on both halves.

    Mirror state letters stand for the inverses of the primed copies, so
    the standard base stays a positive word while mirror tape content
    shows up inverted.  The junction sector is locked by every rule.
    """
    base = m3.machine
    hw = base.hardware
    K = hw.n_parts
    parts = list(hw.parts) + [
        tuple(mirror_name(x) for x in hw.parts[K - 1 - k]) for k in range(K)
    ]
    mirror_part = {j: 2 * K - 1 - j for j in range(K)}
    alphabets = list(hw.sector_alphabets)
    junction = len(alphabets)
    alphabets.append(frozenset())
    mirror_sector = {}
    for k in range(K - 1):
        src = K - 2 - k
        mirror_sector[src] = len(alphabets)
        alphabets.append(frozenset(mirror_name(y) for y in hw.sector_alphabets[src]))

    rules = []
    for rule in base.positive_rules:
        rps = list(rule.parts)
        for k in range(K):
            p = rule.parts[K - 1 - k]
            rps.append(
                RulePart(
                    mirror_name(p.src),
                    mirror_word(p.b),
                    mirror_name(p.dst),
                    mirror_word(p.a),
                )
            )
        doms = list(rule.domains) + [frozenset()]
        mdoms = [frozenset()] * (K - 1)
        for j in range(K - 1):
            mdoms[mirror_sector[j] - K] = frozenset(mirror_name(y) for y in rule.domains[j])
        rules.append(Rule(rule.label, tuple(rps), tuple(doms + mdoms), tag=rule.tag))

    def dub(letters: tuple[str, ...]) -> tuple[str, ...]:
        return letters + tuple(mirror_name(x) for x in reversed(letters))

    machine = SMachine(
        hardware=Hardware(tuple(parts), tuple(alphabets)),
        positive_rules=tuple(rules),
        start_letters=dub(base.start_letters),
        end_letters=dub(base.end_letters),
        input_sector=base.input_sector,
        name=name,
    )
    tags = list(m3.part_tags) + [m3.part_tags[K - 1 - k] + "m" for k in range(K)]
    return M4Build(machine, m3, mirror_part, mirror_sector, junction, tuple(tags))


@dataclass(frozen=True)
class M5Build:
    machine: SMachine
    m4: M4Build
    part_tags: tuple[str, ...]

    @property
    def offset(self) -> int:
        return 1  # every m4 part/sector index shifts by one


def circularize_m5(m4: M4Build, name: str = "M5") -> M5Build:
    """Prepend the one-letter part {t} and close the base into a circle.

    Both sectors touching t are locked by every rule.
    """
    base = m4.machine
    hw = base.hardware
    parts = (("t",),) + hw.parts
    alphabets = (frozenset(),) + hw.sector_alphabets + (frozenset(),)
    rules = []
    for rule in base.positive_rules:
        rps = (RulePart("t", (), "t", ()),) + rule.parts
        doms = (frozenset(),) + rule.domains + (frozenset(),)
        rules.append(Rule(rule.label, rps, doms, tag=rule.tag))
    machine = SMachine(
        hardware=Hardware(parts, alphabets, circular=True),
        positive_rules=tuple(rules),
        start_letters=("t",) + base.start_letters,
        end_letters=("t",) + base.end_letters,
        input_sector=(base.input_sector + 1) if base.input_sector is not None else None,
        name=name,
    )
    return M5Build(machine, m4, ("t",) + m4.part_tags)
