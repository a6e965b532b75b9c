"""S-machine hardware, rules, rule application, computations, histories.

A rule is a tuple of per-part substitutions ``q_i -> a_i q_i' b_i``
together with one domain alphabet per sector; an empty domain locks the
sector.  Every rule stores only its positive form; the machine exposes
the symmetric closure.  Applying a rule substitutes per part, freely
reduces, and trims tape letters at the word ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .words import AdmissibleWord, MalformedWord, QLetter, Word, YLetter, invert_word


class NotApplicable(Exception):
    """The word is outside the rule's domain."""


class NotApplicableAt(Exception):
    """A history failed at step ``index`` (0-based)."""

    def __init__(self, index: int, label: str, message: str = ""):
        self.index = index
        self.label = label
        super().__init__(f"rule {label} not applicable at step {index}" + (f": {message}" if message else ""))


class UntaggedRule(Exception):
    """step_history needs every rule to carry a set tag."""


class UnknownRule(Exception):
    pass


# A signed rule label; histories are sequences of these.
SignedLabel = tuple[str, int]


def slabel(token: str) -> SignedLabel:
    if token.endswith("^-1"):
        return (token[:-3], -1)
    return (token, 1)


def format_slabel(s: SignedLabel) -> str:
    return s[0] + ("^-1" if s[1] < 0 else "")


History = tuple[SignedLabel, ...]


def history(*tokens: str) -> History:
    return tuple(slabel(t) for t in tokens)


def invert_history(h: History) -> History:
    return tuple((lbl, -sg) for lbl, sg in reversed(h))


def is_reduced_history(h: History) -> bool:
    return all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(h, h[1:]))


def is_eligible(h: History, allowed: str | None = None) -> bool:
    """True iff no adjacent inverse pair, except ``allowed``·``allowed``^-1.

    Only the positive-then-negative order of the special label passes;
    the reversed order is rejected.
    """
    for a, b in zip(h, h[1:]):
        if a[0] == b[0] and a[1] == -b[1]:
            if allowed is not None and a == (allowed, 1) and b == (allowed, -1):
                continue
            return False
    return True


@dataclass(frozen=True)
class Hardware:
    """Ordered parts of state letters plus per-sector tape alphabets.

    For a machine with P parts there are P-1 sectors (P when circular);
    sector i sits between part i and part i+1 (mod P when circular).
    """

    parts: tuple[tuple[str, ...], ...]
    sector_alphabets: tuple[frozenset[str], ...]
    circular: bool = False

    def __post_init__(self) -> None:
        expect = len(self.parts) if self.circular else len(self.parts) - 1
        if len(self.sector_alphabets) != expect:
            raise ValueError(
                f"{len(self.parts)} parts need {expect} sectors, got {len(self.sector_alphabets)}"
            )
        seen: set[str] = set()
        for p in self.parts:
            for name in p:
                if name in seen:
                    raise ValueError(f"state letter {name} appears in two parts")
                seen.add(name)

    @property
    def n_parts(self) -> int:
        return len(self.parts)

    @property
    def n_sectors(self) -> int:
        return len(self.sector_alphabets)

    def part_of(self, name: str) -> int:
        return self._part_index()[name]

    def _part_index(self) -> dict[str, int]:
        # frozen dataclass: cache on the instance dict via object.__setattr__
        cache = self.__dict__.get("_pidx")
        if cache is None:
            cache = {n: i for i, p in enumerate(self.parts) for n in p}
            object.__setattr__(self, "_pidx", cache)
        return cache

    def q(self, name: str, sign: int = 1) -> QLetter:
        return QLetter(self.part_of(name), name, sign)

    def right_sector(self, x: QLetter) -> int | None:
        """Sector index to the right of a signed state letter, None at a word end."""
        j = x.part if x.sign > 0 else x.part - 1
        if self.circular:
            return j % self.n_parts
        return j if 0 <= j < self.n_sectors else None

    def left_sector(self, x: QLetter) -> int | None:
        j = x.part - 1 if x.sign > 0 else x.part
        if self.circular:
            return j % self.n_parts
        return j if 0 <= j < self.n_sectors else None

    def validate(self, w: AdmissibleWord) -> None:
        """Check the two adjacency conditions and sector alphabets."""
        for x in w.q:
            if not 0 <= x.part < self.n_parts:
                raise MalformedWord(f"part {x.part} out of range")
            if x.name not in self.parts[x.part]:
                raise MalformedWord(f"{x.name} is not a letter of part {x.part}")
        for a, b, u in zip(w.q, w.q[1:], w.u):
            if a.part == b.part:
                # only x followed by its own inverse is allowed within a part
                if not (a.name == b.name and a.sign == -b.sign):
                    raise MalformedWord(f"illegal adjacency {a} {b}")
            else:
                rs, ls = self.right_sector(a), self.left_sector(b)
                if rs is None or rs != ls:
                    raise MalformedWord(f"illegal adjacency {a} {b}")
            sec = self.right_sector(a)
            assert sec is not None
            alpha = self.sector_alphabets[sec]
            for y in u:
                if y.name not in alpha:
                    raise MalformedWord(
                        f"tape letter {y.name} not in alphabet of sector {sec}"
                    )

    def word(self, tokens: Sequence[str | QLetter | YLetter | Word]) -> AdmissibleWord:
        """Assemble an admissible word from mixed tokens (validated)."""
        qs: list[QLetter] = []
        us: list[list[YLetter]] = []
        pidx = self._part_index()
        for t in tokens:
            items: list[QLetter | YLetter]
            if isinstance(t, QLetter) or isinstance(t, YLetter):
                items = [t]
            elif isinstance(t, tuple):
                items = list(t)
            else:
                name, sign = (t[:-3], -1) if t.endswith("^-1") else (t, 1)
                if name in pidx:
                    items = [QLetter(pidx[name], name, sign)]
                else:
                    items = [YLetter(name, sign)]
            for it in items:
                if isinstance(it, QLetter):
                    qs.append(it)
                    us.append([])
                else:
                    if not qs:
                        raise MalformedWord("word must start with a state letter")
                    us[-1].append(it)
        if us and us[-1]:
            raise MalformedWord("word must end with a state letter")
        w = AdmissibleWord(tuple(qs), tuple(tuple(u) for u in us[:-1]))
        self.validate(w)
        return w


@dataclass(frozen=True)
class RulePart:
    src: str
    a: Word
    dst: str
    b: Word


@dataclass(frozen=True)
class Rule:
    """One substitution per part plus per-sector domain alphabets.

    ``sign=+1`` for positive rules; the inverse shares label and domains.
    ``tag`` names the rule family (machine set or transition).
    """

    label: str
    parts: tuple[RulePart, ...]
    domains: tuple[frozenset[str], ...]
    tag: str = ""
    sign: int = 1

    def part_for(self, part_index: int) -> RulePart:
        return self.parts[part_index]

    @property
    def signed_label(self) -> SignedLabel:
        return (self.label, self.sign)

    def locks(self, sector: int) -> bool:
        return not self.domains[sector]

    def inv(self) -> "Rule":
        """theta^-1 = [q' -> a^-1 q b^-1, ...] with the same domains."""
        return Rule(
            self.label,
            tuple(
                RulePart(p.dst, invert_word(p.a), p.src, invert_word(p.b))
                for p in self.parts
            ),
            self.domains,
            self.tag,
            -self.sign,
        )

    def growth(self) -> int:
        """Max letters a single application can add: sum of |a_i|+|b_i|."""
        return sum(len(p.a) + len(p.b) for p in self.parts)


def invert_rule(rule: Rule) -> Rule:
    return rule.inv()


@dataclass(frozen=True)
class SMachine:
    """Hardware plus a rule set closed under inversion.

    Only positive rules are stored; ``rules`` iterates the closure in the
    deterministic order (label lexicographic, positive before negative).
    """

    hardware: Hardware
    positive_rules: tuple[Rule, ...]
    start_letters: tuple[str, ...] = ()
    end_letters: tuple[str, ...] = ()
    input_sector: int | None = None
    name: str = ""

    def __post_init__(self) -> None:
        hw = self.hardware
        seen: set[str] = set()
        for r in self.positive_rules:
            if r.sign != 1:
                raise ValueError(f"rule {r.label} stored with negative sign")
            if r.label in seen:
                raise ValueError(f"duplicate rule label {r.label}")
            seen.add(r.label)
            if len(r.parts) != hw.n_parts:
                raise ValueError(f"rule {r.label} has {len(r.parts)} parts, hardware has {hw.n_parts}")
            if len(r.domains) != hw.n_sectors:
                raise ValueError(f"rule {r.label} has {len(r.domains)} domains, hardware has {hw.n_sectors}")
            for i, p in enumerate(r.parts):
                if p.src not in hw.parts[i] or p.dst not in hw.parts[i]:
                    raise ValueError(f"rule {r.label} part {i}: {p.src}->{p.dst} not in part")
                left = i - 1 if not hw.circular else (i - 1) % hw.n_parts
                if 0 <= left < hw.n_sectors:
                    bad = [y.name for y in p.a if y.name not in r.domains[left]]
                    if bad:
                        raise ValueError(f"rule {r.label} part {i}: a-word letters {bad} outside domain")
                elif p.a:
                    raise ValueError(f"rule {r.label} part {i}: a-word beside no sector")
                right = i if (hw.circular or i < hw.n_sectors) else None
                if right is not None:
                    bad = [y.name for y in p.b if y.name not in r.domains[right]]
                    if bad:
                        raise ValueError(f"rule {r.label} part {i}: b-word letters {bad} outside domain")
                elif p.b:
                    raise ValueError(f"rule {r.label} part {i}: b-word beside no sector")
            for i, dom in enumerate(r.domains):
                if not dom.issubset(hw.sector_alphabets[i]):
                    raise ValueError(f"rule {r.label}: domain {i} not within sector alphabet")
                if not dom:
                    # lock convention: b_i and a_{i+1} must be empty
                    lp = r.parts[i]
                    rp = r.parts[(i + 1) % hw.n_parts] if (hw.circular or i + 1 < hw.n_parts) else None
                    if lp.b or (rp is not None and rp.a):
                        raise ValueError(f"rule {r.label}: locked sector {i} flanked by nonempty a/b")

    @property
    def rules(self) -> tuple[Rule, ...]:
        cache = self.__dict__.get("_rules")
        if cache is None:
            pos = sorted(self.positive_rules, key=lambda r: r.label)
            cache = tuple([r for r in pos] + [r.inv() for r in pos])
            object.__setattr__(self, "_rules", cache)
        return cache

    @property
    def rules_in_order(self) -> tuple[Rule, ...]:
        """Deterministic enumeration order: by label, positive first."""
        cache = self.__dict__.get("_rules_ord")
        if cache is None:
            cache = tuple(
                sorted(self.rules, key=lambda r: (r.label, -r.sign))
            )
            object.__setattr__(self, "_rules_ord", cache)
        return cache

    def candidate_rules(self, x: QLetter) -> tuple[Rule, ...]:
        """Rules whose source letter at x's part matches x; sound prefilter."""
        cache = self.__dict__.get("_cands")
        if cache is None:
            cache = {}
            object.__setattr__(self, "_cands", cache)
        key = (x.part, x.name)
        hit = cache.get(key)
        if hit is None:
            hit = tuple(
                r for r in self.rules_in_order if r.parts[x.part].src == x.name
            )
            cache[key] = hit
        return hit

    def rule(self, token: str | SignedLabel) -> Rule:
        if isinstance(token, str):
            token = slabel(token)
        lbl, sg = token
        cache = self.__dict__.get("_by_label")
        if cache is None:
            cache = {(r.label, r.sign): r for r in self.rules}
            object.__setattr__(self, "_by_label", cache)
        try:
            return cache[(lbl, sg)]
        except KeyError:
            raise UnknownRule(f"no rule {format_slabel((lbl, sg))} in machine {self.name}")

    def tags(self) -> dict[str, str]:
        return {r.label: r.tag for r in self.positive_rules}

    # -- configurations -------------------------------------------------

    def standard_base_word(self, letters: Mapping[int, str] | Sequence[str], tape: Mapping[int, Word] | None = None) -> AdmissibleWord:
        """Configuration with one positive letter per part, in part order."""
        hw = self.hardware
        if not isinstance(letters, Mapping):
            letters = dict(enumerate(letters))
        qs = [QLetter(i, letters[i], 1) for i in range(hw.n_parts)]
        us: list[Word] = []
        tape = tape or {}
        for i in range(hw.n_parts - 1):
            us.append(tuple(tape.get(i, ())))
        w = AdmissibleWord(tuple(qs), tuple(us))
        hw.validate(w)
        return w

    def start_configuration(self) -> AdmissibleWord:
        return self.standard_base_word(self.start_letters)

    def end_configuration(self) -> AdmissibleWord:
        return self.standard_base_word(self.end_letters)


# --------------------------------------------------------------------------
# rule application


def is_applicable(machine: SMachine, w: AdmissibleWord, rule: Rule) -> bool:
    try:
        _check(machine, w, rule)
        return True
    except NotApplicable:
        return False


def _check(machine: SMachine, w: AdmissibleWord, rule: Rule) -> None:
    hw = machine.hardware
    for x in w.q:
        if rule.parts[x.part].src != x.name:
            raise NotApplicable(f"state letter {x} does not match rule {rule.label}")
    for a, u in zip(w.q, w.u):
        sec = hw.right_sector(a)
        assert sec is not None
        dom = rule.domains[sec]
        for y in u:
            if y.name not in dom:
                raise NotApplicable(
                    f"letter {y.name} in sector {sec} outside domain of {rule.label}"
                )


def apply_rule(machine: SMachine, w: AdmissibleWord, rule: Rule) -> AdmissibleWord:
    """W·theta: substitute per part, reduce, trim first/last tape letters."""
    _check(machine, w, rule)
    flat: list[QLetter | YLetter] = []
    for i, x in enumerate(w.q):
        p = rule.parts[x.part]
        if x.sign > 0:
            flat.extend(p.a)
            flat.append(QLetter(x.part, p.dst, 1))
            flat.extend(p.b)
        else:
            flat.extend(invert_word(p.b))
            flat.append(QLetter(x.part, p.dst, -1))
            flat.extend(invert_word(p.a))
        if i < len(w.u):
            flat.extend(w.u[i])
    # free reduction over the mixed letter sequence; state letters never
    # cancel (a q-letter cancelling would need its whole block cancelled,
    # impossible against a reduced neighbour word)
    stack: list[QLetter | YLetter] = []
    for item in flat:
        if (
            stack
            and isinstance(item, YLetter)
            and isinstance(stack[-1], YLetter)
            and stack[-1].name == item.name
            and stack[-1].sign == -item.sign
        ):
            stack.pop()
        else:
            stack.append(item)
    # trim tape letters at both ends
    lo, hi = 0, len(stack)
    while lo < hi and isinstance(stack[lo], YLetter):
        lo += 1
    while hi > lo and isinstance(stack[hi - 1], YLetter):
        hi -= 1
    trimmed = stack[lo:hi]
    if not trimmed:
        raise MalformedWord("rule application produced an empty word")
    qs: list[QLetter] = []
    us: list[list[YLetter]] = []
    for item in trimmed:
        if isinstance(item, QLetter):
            qs.append(item)
            us.append([])
        else:
            us[-1].append(item)
    return AdmissibleWord(tuple(qs), tuple(tuple(u) for u in us[:-1]))


@dataclass(frozen=True)
class Computation:
    """trace[k+1] = trace[k]·theta_{k+1}; trace[0] = start."""

    start: AdmissibleWord
    history: History
    trace: tuple[AdmissibleWord, ...]

    def __post_init__(self) -> None:
        if len(self.trace) != len(self.history) + 1 or self.trace[0] != self.start:
            raise ValueError("trace does not fit history")

    @property
    def end(self) -> AdmissibleWord:
        return self.trace[-1]

    def __len__(self) -> int:
        return len(self.history)


def run_history(machine: SMachine, w: AdmissibleWord, h: History | Iterable[str]) -> Computation:
    """Run a history; raises NotApplicableAt(k) at the first failure."""
    hist: History = tuple(slabel(t) if isinstance(t, str) else t for t in h)
    trace = [w]
    cur = w
    for k, sl in enumerate(hist):
        rule = machine.rule(sl)
        try:
            cur = apply_rule(machine, cur, rule)
        except NotApplicable as e:
            raise NotApplicableAt(k, format_slabel(sl), str(e)) from e
        trace.append(cur)
    return Computation(w, hist, tuple(trace))


def base_of(w: AdmissibleWord) -> tuple[tuple[int, int], ...]:
    return w.base


def step_history(h: History, machine: SMachine) -> tuple[str, ...]:
    """Collapse maximal same-set runs; transitions become two-digit symbols.

    Rules tagged ``setK`` collapse to ``(K)``; a rule tagged ``trXY``
    yields ``(XY)`` when positive and ``(YX)`` when negative.
    """
    tags = machine.tags()
    out: list[str] = []
    for lbl, sg in h:
        if lbl not in tags:
            raise UnknownRule(lbl)
        tag = tags[lbl]
        if not tag:
            raise UntaggedRule(lbl)
        if tag.startswith("tr"):
            code = tag[2:]
            sym = f"({code})" if sg > 0 else f"({code[::-1]})"
            out.append(sym)
        elif tag.startswith("set"):
            sym = f"({tag[3:]})"
            if not out or out[-1] != sym:
                out.append(sym)
        else:
            raise UntaggedRule(f"{lbl}: unrecognized tag {tag}")
    return tuple(out)
