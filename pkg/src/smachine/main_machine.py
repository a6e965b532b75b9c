"""The main circular machine and its distinguished words.

Five rule sets over one circular hardware: insert input letters, sweep
the input back and forth 2m times, insert a scan history, run the full
stage tower on both halves, erase the content sectors, accept.  State
letters are disjoint per set, so transition rules move between phases.

``W_st`` (one special start letter per part), ``W_ac`` (the unique
accept word), and the two-parameter family ``W(k, k')`` of words in the
domain of the inverse of the phase-2-to-3 transition are all exposed,
along with straight-line witness histories used by tests and harnesses.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Mapping

from .compose import (
    M5Build,
    add_control_letters,
    add_history_sectors,
    circularize_m5,
    compose_m3,
    mirror_m4,
    mirror_name,
    mirror_word,
    stage_sweep_history,
)
from .machine import Hardware, History, Rule, RulePart, SMachine
from .toy import ToyRecognizer
from .words import AdmissibleWord, Word, YLetter


class BadParameters(Exception):
    pass


TRANSITION_TAGS = ("tr01", "tr12", "tr23", "tr34", "tr45", "tr50")
SUP_FAMILY_TAGS = ("tr01", "set1", "tr12", "set2")
MIXED_TAG = "tr23"
PLAIN_FAMILY_TAGS = ("set3", "tr34", "set4", "tr45", "set5", "tr50")


@dataclass(frozen=True)
class ContentSectorPair:
    """A content-holding sector and its mirror, with flanking R parts."""

    sector: int
    mirror_sector: int
    r_part: int
    mirror_r_part: int
    alphabet_left: frozenset[str]  # letters inserted/erased here
    mirror_alphabet_left: frozenset[str]
    left_copy: Mapping[str, str] | None = None  # rule label -> letter (history only)


@dataclass(frozen=True)
class MainMachineBundle:
    machine: SMachine
    toy: ToyRecognizer
    m: int
    L: int
    N: int
    part_tags: tuple[str, ...]
    t_part: int
    input_pair: ContentSectorPair
    history_pairs: tuple[ContentSectorPair, ...]
    lrm_part: int
    lrm_scratch: int
    mirror_lrm_part: int
    mirror_lrm_scratch: int
    m5: M5Build
    theta23_label: str = "tr_23"

    # -- distinguished words -------------------------------------------

    def _phase_config(self, suffix: str, tape: Mapping[int, Word] | None = None) -> AdmissibleWord:
        letters = [f"{g}_{suffix}" for g in self.part_tags]
        return self.machine.standard_base_word(letters, tape)

    @property
    def w_st(self) -> AdmissibleWord:
        return self._phase_config("st")

    @property
    def w_ac(self) -> AdmissibleWord:
        return self._phase_config("ac")

    def s1(self) -> AdmissibleWord:
        """Start configuration: all state letters the first-set start letters."""
        return self._phase_config("w1")

    def w_word(self, k: int, k2: int) -> AdmissibleWord:
        """W(k,k') = w1 a^k w2 (a')^{-k'} w3 over the third-phase letters."""
        a = self.toy.input_letter
        tape = {
            self.input_pair.sector: tuple(
                YLetter(a, 1 if k >= 0 else -1) for _ in range(abs(k))
            ),
            self.input_pair.mirror_sector: tuple(
                YLetter(mirror_name(a), -1 if k2 >= 0 else 1) for _ in range(abs(k2))
            ),
        }
        return self._phase_config("w3", tape)

    # -- rule families ---------------------------------------------------

    def labels_with_tags(self, tags: tuple[str, ...]) -> tuple[str, ...]:
        want = set(tags)
        return tuple(r.label for r in self.machine.positive_rules if r.tag in want)

    @property
    def sup_family(self) -> tuple[str, ...]:
        return self.labels_with_tags(SUP_FAMILY_TAGS)

    @property
    def mixed_family(self) -> tuple[str, ...]:
        return self.labels_with_tags((MIXED_TAG,))

    @property
    def plain_family(self) -> tuple[str, ...]:
        return self.labels_with_tags(PLAIN_FAMILY_TAGS)

    # -- witness histories ----------------------------------------------

    def witness_wst_to_wkk(self, k: int) -> History:
        if k < 0:
            raise BadParameters("only nonnegative inputs can be inserted")
        a = self.toy.input_letter
        hist: list[tuple[str, int]] = [("tr_st1", 1)]
        hist += [(f"w1_ins_{a}", 1)] * k
        hist.append(("tr_12", 1))
        for i in range(1, 2 * self.m + 1):
            hist += [(f"w2_zm{i}_{a}", 1)] * k
            if i < 2 * self.m:
                hist.append((f"w2_zt{i}", 1))
        hist.append(("tr_23", 1))
        return tuple(hist)

    def witness_wkk_to_wac(self, k: int) -> History:
        """Accepting run from W(k,k) using no first- or second-set rules."""
        toy_hist = [lbl for lbl, _ in self.toy.accepting_history(k)]
        a = self.toy.input_letter
        hist: list[tuple[str, int]] = []
        hist += [(f"w3_ins_{lbl}", 1) for lbl in reversed(toy_hist)]
        hist.append(("tr_34", 1))
        hist += list(stage_sweep_history(self.m5.m4.m3, toy_hist))
        hist.append(("tr_45", 1))
        hist += [(f"w5_er_{lbl}", 1) for lbl in toy_hist]
        hist += [(f"w5_er_inp_{a}", 1)] * k
        hist.append(("tr_50", 1))
        return tuple(hist)

    def witness_wst_to_wac(self, k: int) -> History:
        return self.witness_wst_to_wkk(k) + self.witness_wkk_to_wac(k)


def _mirrored_rule(
    label: str,
    tag: str,
    n_parts: int,
    n_sectors: int,
    mirror_part: Mapping[int, int],
    mirror_sector: Mapping[int, int],
    letters: Mapping[int, tuple[str, str]],
    inserts: Mapping[int, tuple[Word, Word]],
    doms: Mapping[int, frozenset[str]],
) -> Rule:
    """Build a rule acting symmetrically on both halves.

    ``letters`` gives (src, dst) for every part (mirror parts carry their
    own phase letters); ``inserts`` gives (a, b) for first-half parts and
    is transported to the mirror by swap-invert-prime; ``doms`` lists
    first-half sector domains and is primed onto the mirror sectors.
    """
    parts = []
    for i in range(n_parts):
        src, dst = letters[i]
        a: Word = ()
        b: Word = ()
        if i in inserts:
            a, b = inserts[i]
        else:
            for j, mj in mirror_part.items():
                if mj == i and j in inserts:
                    oa, ob = inserts[j]
                    a, b = mirror_word(ob), mirror_word(oa)
                    break
        parts.append(RulePart(src, a, dst, b))
    domains = [frozenset()] * n_sectors
    for s, alpha in doms.items():
        domains[s] = alpha
        ms = mirror_sector.get(s)
        if ms is not None:
            domains[ms] = frozenset(mirror_name(y) for y in alpha)
    return Rule(label, tuple(parts), tuple(domains), tag=tag)


def build_main_machine(toy: ToyRecognizer, m: int = 2, L: int = 12) -> MainMachineBundle:
    """Assemble the main machine over a pluggable recognizer.

    ``m`` is the number of sweep repetitions, ``L`` the number of letter
    copies used later by the group compiler (recorded here; execution
    ignores it).
    """
    if m < 1 or L < 8:
        raise BadParameters(f"need m >= 1 and L >= 8, got m={m}, L={L}")
    m2 = add_history_sectors(toy.machine)
    m2bar = add_control_letters(m2)
    m3 = compose_m3(m2bar, m)
    m4 = mirror_m4(m3)
    m5 = circularize_m5(m4)

    base = m5.machine
    K = m3.machine.hardware.n_parts
    N = base.hardware.n_parts
    tags = m5.part_tags
    a = toy.input_letter
    a_c = f"{a}_c"

    # index maps, all shifted by one for the prepended t part
    def sec(j: int) -> int:
        return j + 1

    def prt(j: int) -> int:
        return j + 1

    mirror_part_m = {prt(j): prt(m4.mirror_part[j]) for j in range(K)}
    mirror_sector_m = {sec(j): sec(m4.mirror_sector[j]) for j in range(K - 1)}

    input_sector = sec(m3.input_sector)
    mirror_input = mirror_sector_m[input_sector]
    input_r_part = input_sector  # R part flat index equals its sector index here
    lrm_part = input_sector + 1
    lrm_scratch = input_sector + 1  # the PQ sector right of the sweep part
    mirror_lrm_part = mirror_part_m[lrm_part]
    mirror_lrm_scratch = mirror_sector_m[lrm_scratch]

    input_pair = ContentSectorPair(
        sector=input_sector,
        mirror_sector=mirror_input,
        r_part=input_r_part,
        mirror_r_part=mirror_part_m[input_r_part],
        alphabet_left=frozenset({a}),
        mirror_alphabet_left=frozenset({mirror_name(a)}),
    )
    history_pairs = tuple(
        ContentSectorPair(
            sector=sec(h.sector),
            mirror_sector=mirror_sector_m[sec(h.sector)],
            r_part=prt(h.r_part),
            mirror_r_part=mirror_part_m[prt(h.r_part)],
            alphabet_left=h.left_alphabet,
            mirror_alphabet_left=frozenset(mirror_name(y) for y in h.left_alphabet),
            left_copy=dict(h.left_copy),
        )
        for h in m3.history
    )

    # hardware: extend the circular base with phase letters and sweep copies
    phases = ("st", "w1", "w2", "w3", "w5", "ac")
    parts = []
    for i in range(N):
        extra = [f"{tags[i]}_{ph}" for ph in phases]
        if i in (lrm_part, mirror_lrm_part):
            extra.remove(f"{tags[i]}_w2")
            extra += [f"{tags[i]}_z{j}" for j in range(1, 2 * m + 1)]
        parts.append(base.hardware.parts[i] + tuple(extra))
    alphabets = list(base.hardware.sector_alphabets)
    alphabets[lrm_scratch] = alphabets[lrm_scratch] | {a_c}
    alphabets[mirror_lrm_scratch] = alphabets[mirror_lrm_scratch] | {mirror_name(a_c)}
    hardware = Hardware(tuple(parts), tuple(alphabets), circular=True)

    n_sec = hardware.n_sectors

    def phase_letters(frm: str, to: str | None = None) -> dict[int, tuple[str, str]]:
        """(src, dst) per part within a phase (or between two phases)."""
        to = to or frm
        out = {}
        for i in range(N):
            out[i] = (f"{tags[i]}_{frm}", f"{tags[i]}_{to}")
        return out

    def fix_lrm(letters: dict[int, tuple[str, str]], src: str, dst: str) -> dict[int, tuple[str, str]]:
        for i in (lrm_part, mirror_lrm_part):
            out = (f"{tags[i]}_{src}", f"{tags[i]}_{dst}")
            letters[i] = out
        return letters

    def mk(label, tag, letters, inserts, doms) -> Rule:
        return _mirrored_rule(
            label, tag, N, n_sec, mirror_part_m, mirror_sector_m, letters, inserts, doms
        )

    rules: list[Rule] = []

    # start rule: special start letters -> first-set letters, everything locked
    rules.append(mk("tr_st1", "tr01", phase_letters("st", "w1"), {}, {}))

    # set 1: one positive rule inserting the input letter on both halves
    rules.append(
        mk(
            f"w1_ins_{a}",
            "set1",
            phase_letters("w1"),
            {lrm_part: ((YLetter(a, 1),), ())},
            {input_sector: frozenset({a})},
        )
    )

    rules.append(
        mk(
            "tr_12",
            "tr12",
            fix_lrm(phase_letters("w1", "w2"), "w1", "z1"),
            {},
            {input_sector: frozenset({a})},
        )
    )

    # set 2: the 2m-phase sweep of the input sector and its mirror
    for i in range(1, 2 * m + 1):
        letters = fix_lrm(phase_letters("w2"), f"z{i}", f"z{i}")
        if i % 2 == 1:
            ins = {lrm_part: ((YLetter(a, -1),), (YLetter(a_c, 1),))}
        else:
            ins = {lrm_part: ((YLetter(a, 1),), (YLetter(a_c, -1),))}
        rules.append(
            mk(
                f"w2_zm{i}_{a}",
                "set2",
                letters,
                ins,
                {input_sector: frozenset({a}), lrm_scratch: frozenset({a_c})},
            )
        )
        if i < 2 * m:
            doms = (
                {lrm_scratch: frozenset({a_c})}
                if i % 2 == 1
                else {input_sector: frozenset({a})}
            )
            rules.append(
                mk(
                    f"w2_zt{i}",
                    "set2",
                    fix_lrm(phase_letters("w2"), f"z{i}", f"z{i+1}"),
                    {},
                    doms,
                )
            )

    rules.append(
        mk(
            "tr_23",
            "tr23",
            fix_lrm(phase_letters("w2", "w3"), f"z{2*m}", "w3"),
            {},
            {input_sector: frozenset({a})},
        )
    )

    # set 3: insert a history letter in every history sector, next to the R letter
    content_doms = {input_sector: frozenset({a})}
    for hp in history_pairs:
        content_doms[hp.sector] = hp.alphabet_left
    for lbl in m2.rule_labels:
        ins = {}
        for hp in history_pairs:
            assert hp.left_copy is not None
            ins[hp.r_part] = ((), (YLetter(hp.left_copy[lbl], 1),))
        rules.append(mk(f"w3_ins_{lbl}", "set3", phase_letters("w3"), ins, dict(content_doms)))

    stage1_start = {i: base.start_letters[i] for i in range(N)}
    rules.append(
        mk(
            "tr_34",
            "tr34",
            {i: (f"{tags[i]}_w3", stage1_start[i]) for i in range(N)},
            {},
            dict(content_doms),
        )
    )

    # set 4: the full stage tower, re-tagged
    for rule in base.positive_rules:
        rules.append(dataclasses.replace(rule, tag="set4"))

    stage_end = {i: base.end_letters[i] for i in range(N)}
    rules.append(
        mk(
            "tr_45",
            "tr45",
            {i: (stage_end[i], f"{tags[i]}_w5") for i in range(N)},
            {},
            dict(content_doms),
        )
    )

    # set 5: erase content sectors letter by letter, from the R-letter side
    for lbl in m2.rule_labels:
        ins = {}
        for hp in history_pairs:
            assert hp.left_copy is not None
            ins[hp.r_part] = ((), (YLetter(hp.left_copy[lbl], -1),))
        rules.append(mk(f"w5_er_{lbl}", "set5", phase_letters("w5"), ins, dict(content_doms)))
    rules.append(
        mk(
            f"w5_er_inp_{a}",
            "set5",
            phase_letters("w5"),
            {input_pair.r_part: ((), (YLetter(a, -1),))},
            dict(content_doms),
        )
    )

    rules.append(mk("tr_50", "tr50", phase_letters("w5", "ac"), {}, {}))

    machine = SMachine(
        hardware=hardware,
        positive_rules=tuple(rules),
        start_letters=tuple(f"{g}_st" for g in tags),
        end_letters=tuple(f"{g}_ac" for g in tags),
        input_sector=input_sector,
        name="M",
    )
    return MainMachineBundle(
        machine=machine,
        toy=toy,
        m=m,
        L=L,
        N=N,
        part_tags=tags,
        t_part=0,
        input_pair=input_pair,
        history_pairs=history_pairs,
        lrm_part=lrm_part,
        lrm_scratch=lrm_scratch,
        mirror_lrm_part=mirror_lrm_part,
        mirror_lrm_scratch=mirror_lrm_scratch,
        m5=m5,
    )


def build_trimmed_machine(bundle: MainMachineBundle) -> SMachine:
    """Drop the first two rule sets and the 2-to-3 transition.

    State letters occurring only in removed rules go too; the W(k,k')
    words become the start configurations.
    """
    keep_tags = set(PLAIN_FAMILY_TAGS)
    kept = tuple(r for r in bundle.machine.positive_rules if r.tag in keep_tags)
    used: set[str] = set()
    for r in kept:
        for p in r.parts:
            used.add(p.src)
            used.add(p.dst)
    hw = bundle.machine.hardware
    parts = tuple(tuple(x for x in part if x in used) for part in hw.parts)
    return SMachine(
        hardware=Hardware(parts, hw.sector_alphabets, circular=True),
        positive_rules=kept,
        start_letters=tuple(f"{g}_w3" for g in bundle.part_tags),
        end_letters=bundle.machine.end_letters,
        input_sector=bundle.machine.input_sector,
        name="Mbar",
    )
