"""Compile machines into group presentations.

Generator inventory: state letters occurring in the first two rule sets
(and the sources of the 2-to-3 transition) exist in L superscripted
copies; all other state letters are plain.  Every tape letter exists
plain and in L copies.  Each positive rule theta contributes N relation
letters theta_1..theta_N (superscripted L-fold for the early sets), with
the aliasing theta_0^(i) = theta_N^(i-1) closing the cycle at the t
part, so exactly the (theta,t)-relators bridge superscript levels.

Relators are stored cyclically reduced in their lexicographically least
rotation.  Compiling twice yields identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .machine import Rule, SMachine
from .main_machine import MainMachineBundle, build_trimmed_machine
from .words import AdmissibleWord, Word


class SuperscriptMismatch(Exception):
    pass


class UnknownGenerator(Exception):
    pass


class QLetterPresent(Exception):
    pass


class Generator(NamedTuple):
    """kind 'q' | 'a' | 'th' | 'x'; idx is the 1..N relation-letter index."""

    kind: str
    name: str
    idx: int | None = None
    sup: int | None = None

    def display(self) -> str:
        base = self.name if self.idx is None else f"{self.name}_t{self.idx}"
        return base + (f"^({self.sup})" if self.sup is not None else "")


GLetter = tuple[Generator, int]
GWord = tuple[GLetter, ...]


def g_inv(w: GWord) -> GWord:
    return tuple((g, -s) for g, s in reversed(w))


def g_reduce(w: Iterable[GLetter]) -> GWord:
    stack: list[GLetter] = []
    for x in w:
        if stack and stack[-1][0] == x[0] and stack[-1][1] == -x[1]:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def canonical_rotation(w: GWord) -> GWord:
    """Cyclically reduce, then pick the lexicographically least rotation."""
    w = g_reduce(w)
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    if not w:
        return w
    key = lambda v: tuple((g.kind, g.name, g.idx or 0, g.sup or 0, s) for g, s in v)
    return min((w[i:] + w[:i] for i in range(len(w))), key=key)


@dataclass(frozen=True)
class Relator:
    word: GWord
    tag: str  # theta-q | theta-a | hub | hnn
    rule: str | None = None
    part: int | None = None
    sector: int | None = None
    sup: int | None = None

    def __len__(self) -> int:
        return len(self.word)


@dataclass(frozen=True)
class Presentation:
    name: str
    L: int
    N: int
    generators: frozenset[Generator]
    relators: tuple[Relator, ...]
    t_letters: frozenset[str]

    def __post_init__(self) -> None:
        for r in self.relators:
            for g, _ in r.word:
                if g not in self.generators:
                    raise UnknownGenerator(f"{g.display()} in relator but not declared")

    def relator_set(self) -> frozenset[GWord]:
        cache = self.__dict__.get("_rset")
        if cache is None:
            cache = frozenset(r.word for r in self.relators)
            object.__setattr__(self, "_rset", cache)
        return cache

    def has_relator(self, word: GWord) -> bool:
        """Membership up to rotation, inversion, and free/cyclic reduction."""
        rs = self.relator_set()
        return canonical_rotation(word) in rs or canonical_rotation(g_inv(word)) in rs

    def with_relators(self, extra: Iterable[Relator], name: str | None = None) -> "Presentation":
        extra = tuple(extra)
        gens = set(self.generators)
        for r in extra:
            for g, _ in r.word:
                gens.add(g)
        return Presentation(
            name or self.name,
            self.L,
            self.N,
            frozenset(gens),
            self.relators + extra,
            self.t_letters,
        )


# --------------------------------------------------------------------------
# the compiler


@dataclass(frozen=True)
class RelatorFactory:
    """Builds single relator instances; shared by the compiler and trapezia."""

    N: int
    L: int
    supped: frozenset[str]  # state letters owning L superscripted copies
    families: dict[str, str]  # rule label -> "sup" | "mixed" | "plain"

    def family(self, rule: Rule) -> str:
        return self.families[rule.label]

    def q_gen(self, name: str, sup: int | None) -> Generator:
        if (sup is not None) != (name in self.supped):
            raise SuperscriptMismatch(
                f"state letter {name} {'lacks' if name in self.supped else 'has no'} superscript copies"
            )
        return Generator("q", name, None, sup)

    def a_gen(self, name: str, sup: int | None) -> Generator:
        return Generator("a", name, None, sup)

    def theta(self, rule: Rule, idx: int, sup: int | None) -> Generator:
        return Generator("th", rule.label, idx, sup)

    def _left_theta(self, rule: Rule, j: int, sup: int | None) -> Generator:
        if j == 0:
            prev = None if sup is None else (sup - 2) % self.L + 1
            return self.theta(rule, self.N, prev)
        return self.theta(rule, j, sup)

    def _word_gens(self, w: Word, sup: int | None) -> GWord:
        return tuple((self.a_gen(y.name, sup), y.sign) for y in w)

    def theta_q_relator(self, rule: Rule, j: int, sup: int | None) -> Relator:
        """U_j theta_{j+1} V_j^-1 theta_j^-1 with the t-part aliasing."""
        fam = self.family(rule)
        if (sup is None) != (fam == "plain"):
            raise SuperscriptMismatch(f"rule {rule.label} is {fam}, sup={sup}")
        p = rule.parts[j]
        u_sup = sup
        v_sup = None if fam == "mixed" else sup
        u: GWord = ((self.q_gen(p.src, u_sup), 1),)
        v: GWord = (
            self._word_gens(p.a, v_sup)
            + ((self.q_gen(p.dst, v_sup), 1),)
            + self._word_gens(p.b, v_sup)
        )
        right = (self.theta(rule, j + 1, sup), 1)
        left = (self._left_theta(rule, j, sup), -1)
        word = canonical_rotation(u + (right,) + g_inv(v) + (left,))
        return Relator(word, "theta-q", rule.label, part=j, sup=sup)

    def theta_a_relator(self, rule: Rule, sector: int, letter: str, sup: int | None) -> Relator:
        """Commutation of theta_{sector+1} with a domain letter of that sector."""
        fam = self.family(rule)
        if (sup is None) != (fam == "plain"):
            raise SuperscriptMismatch(f"rule {rule.label} is {fam}, sup={sup}")
        th = self.theta(rule, sector + 1, sup)
        if fam == "mixed":
            # a^(i) theta^(i) = theta^(i) a : superscripts erased on the right
            word: GWord = (
                ((self.a_gen(letter, sup), 1), (th, 1), (self.a_gen(letter, None), -1), (th, -1))
            )
        else:
            word = (
                ((th, 1), (self.a_gen(letter, sup), 1), (th, -1), (self.a_gen(letter, sup), -1))
            )
        return Relator(canonical_rotation(word), "theta-a", rule.label, sector=sector, sup=sup)


def _classify(bundle: MainMachineBundle) -> dict[str, str]:
    fams: dict[str, str] = {}
    sup_tags = {"tr01", "set1", "tr12", "set2"}
    for r in bundle.machine.positive_rules:
        if r.tag in sup_tags:
            fams[r.label] = "sup"
        elif r.tag == "tr23":
            fams[r.label] = "mixed"
        else:
            fams[r.label] = "plain"
    return fams


def _supped_letters(bundle: MainMachineBundle) -> frozenset[str]:
    out: set[str] = set()
    fams = _classify(bundle)
    for r in bundle.machine.positive_rules:
        fam = fams[r.label]
        if fam == "sup":
            for p in r.parts:
                out.add(p.src)
                out.add(p.dst)
        elif fam == "mixed":
            for p in r.parts:
                out.add(p.src)
    return frozenset(out)


def factory_for(bundle: MainMachineBundle) -> RelatorFactory:
    return RelatorFactory(
        N=bundle.N,
        L=bundle.L,
        supped=_supped_letters(bundle),
        families=_classify(bundle),
    )


def _tape_letters(machine: SMachine) -> tuple[str, ...]:
    seen: set[str] = set()
    for alpha in machine.hardware.sector_alphabets:
        seen.update(alpha)
    return tuple(sorted(seen))


def compile_group_M(bundle: MainMachineBundle) -> Presentation:
    """All rule relations of the main machine (no hubs)."""
    fac = factory_for(bundle)
    machine = bundle.machine
    gens: set[Generator] = set()
    for i, part in enumerate(machine.hardware.parts):
        for q in part:
            if q in fac.supped:
                gens.update(Generator("q", q, None, i2) for i2 in range(1, bundle.L + 1))
            else:
                gens.add(Generator("q", q, None, None))
    for a in _tape_letters(machine):
        gens.add(Generator("a", a, None, None))
        gens.update(Generator("a", a, None, i) for i in range(1, bundle.L + 1))
    relators: list[Relator] = []
    for rule in machine.positive_rules:
        fam = fac.families[rule.label]
        sups: tuple[int | None, ...] = (None,) if fam == "plain" else tuple(range(1, bundle.L + 1))
        for idx in range(1, bundle.N + 1):
            gens.update(Generator("th", rule.label, idx, s) for s in sups)
        for sup in sups:
            for j in range(bundle.N):
                relators.append(fac.theta_q_relator(rule, j, sup))
            for sector in range(machine.hardware.n_sectors):
                for letter in sorted(rule.domains[sector]):
                    relators.append(fac.theta_a_relator(rule, sector, letter, sup))
    return Presentation(
        name="M",
        L=bundle.L,
        N=bundle.N,
        generators=frozenset(gens),
        relators=tuple(relators),
        t_letters=frozenset(bundle.machine.hardware.parts[bundle.t_part]),
    )


def word_to_gens(fac: RelatorFactory, w: AdmissibleWord, sup: int | None = None) -> GWord:
    """An admissible word as a generator word; ``sup`` lifts every letter."""
    out: list[GLetter] = []
    for i, x in enumerate(w.q):
        out.append((fac.q_gen(x.name, sup if x.name in fac.supped else None), x.sign))
        if i < len(w.u):
            for y in w.u[i]:
                out.append((fac.a_gen(y.name, sup), y.sign))
    return tuple(out)


def hub_relators(bundle: MainMachineBundle) -> tuple[Relator, Relator]:
    """W_st^(1)...W_st^(L) = 1 and W_ac^L = 1."""
    fac = factory_for(bundle)
    w_st, w_ac = bundle.w_st, bundle.w_ac
    for x in w_st.q:
        if x.name not in fac.supped:
            raise SuperscriptMismatch(f"start letter {x.name} has no superscript copies")
    hub1: list[GLetter] = []
    for i in range(1, bundle.L + 1):
        hub1.extend(word_to_gens(fac, w_st, sup=i))
    hub2: list[GLetter] = []
    for _ in range(bundle.L):
        hub2.extend(word_to_gens(fac, w_ac))
    return (
        Relator(canonical_rotation(tuple(hub1)), "hub", rule="hub-start"),
        Relator(canonical_rotation(tuple(hub2)), "hub", rule="hub-accept"),
    )


def add_hub_relations(pres: Presentation, bundle: MainMachineBundle) -> Presentation:
    return pres.with_relators(hub_relators(bundle), name="G")


def compile_group_G(bundle: MainMachineBundle) -> Presentation:
    return add_hub_relations(compile_group_M(bundle), bundle)


def compile_trimmed(bundle: MainMachineBundle) -> tuple[Presentation, Presentation]:
    """Presentations of the trimmed machine group and its one-hub quotient."""
    mbar = build_trimmed_machine(bundle)
    fac = RelatorFactory(
        N=bundle.N,
        L=bundle.L,
        supped=frozenset(),
        families={r.label: "plain" for r in mbar.positive_rules},
    )
    gens: set[Generator] = set()
    for part in mbar.hardware.parts:
        gens.update(Generator("q", q, None, None) for q in part)
    for a in _tape_letters(mbar):
        gens.add(Generator("a", a, None, None))
    relators: list[Relator] = []
    for rule in mbar.positive_rules:
        gens.update(Generator("th", rule.label, idx, None) for idx in range(1, bundle.N + 1))
        for j in range(bundle.N):
            relators.append(fac.theta_q_relator(rule, j, None))
        for sector in range(mbar.hardware.n_sectors):
            for letter in sorted(rule.domains[sector]):
                relators.append(fac.theta_a_relator(rule, sector, letter, None))
    p_mbar = Presentation(
        name="Mbar",
        L=bundle.L,
        N=bundle.N,
        generators=frozenset(gens),
        relators=tuple(relators),
        t_letters=frozenset(mbar.hardware.parts[0]),
    )
    hub2: list[GLetter] = []
    for _ in range(bundle.L):
        hub2.extend(word_to_gens(fac, bundle.w_ac))
    p_gbar = p_mbar.with_relators(
        [Relator(canonical_rotation(tuple(hub2)), "hub", rule="hub-accept")], name="Gbar"
    )
    return p_mbar, p_gbar


def hnn_Gk(pres: Presentation, bundle: MainMachineBundle, k: int) -> Presentation:
    """Add a stable letter x and the relation x W(k,k) x^-1 = W_ac."""
    fac = factory_for(bundle)
    x = Generator("x", "x")
    w = word_to_gens(fac, bundle.w_word(k, k))
    wac = word_to_gens(fac, bundle.w_ac)
    word = ((x, 1),) + w + ((x, -1),) + g_inv(wac)
    rel = Relator(canonical_rotation(word), "hnn", rule=f"hnn-x-{k}")
    return pres.with_relators([rel], name=f"G_{k}")


def hnn_Gbar(pres: Presentation, bundle: MainMachineBundle) -> Presentation:
    """Add a stable letter y commuting with W_ac."""
    fac = factory_for(bundle)
    y = Generator("x", "y")
    wac = word_to_gens(fac, bundle.w_ac)
    word = ((y, 1),) + wac + ((y, -1),) + g_inv(wac)
    rel = Relator(canonical_rotation(word), "hnn", rule="hnn-y")
    return pres.with_relators([rel], name="Gbar-hnn")


# --------------------------------------------------------------------------
# homomorphisms


def mu(pres: Presentation, word: GWord) -> int:
    """Signed count of t-letters, mod L."""
    total = 0
    for g, s in word:
        if g not in pres.generators:
            raise UnknownGenerator(g.display())
        if g.kind == "q" and g.name in pres.t_letters:
            total += s
    return total % pres.L


def nu(word: GWord) -> GWord:
    """Delete tape letters, keep relation letters, freely reduce."""
    for g, _ in word:
        if g.kind == "q":
            raise QLetterPresent(g.display())
    return g_reduce(x for x in word if x[0].kind != "a")


# --------------------------------------------------------------------------
# export / parse


def _fmt_glet(x: GLetter) -> str:
    g, s = x
    return g.display() + ("^-1" if s < 0 else "")


def _gen_line(g: Generator) -> str:
    return f"{g.kind} {g.display()}"


def _sort_key(g: Generator):
    return (g.kind, g.name, g.idx or 0, g.sup or 0)


def export(pres: Presentation, fmt: str = "plain") -> str:
    if fmt == "plain":
        return _export_plain(pres)
    if fmt == "gap-style":
        return _export_gap(pres)
    raise ValueError(f"unknown format {fmt!r}")


def _export_plain(pres: Presentation) -> str:
    out = [f"PRESENTATION {pres.name}"]
    out.append(f"param L {pres.L}")
    out.append(f"param N {pres.N}")
    out.append("tletters " + (" ".join(sorted(pres.t_letters)) or "-"))
    out.append("GENERATORS")
    for g in sorted(pres.generators, key=_sort_key):
        out.append(_gen_line(g))
    out.append("RELATORS")
    for r in pres.relators:
        out.append(f"{r.tag} : " + ".".join(_fmt_glet(x) for x in r.word))
    return "\n".join(out) + "\n"


def _parse_gen(kind: str, text: str) -> Generator:
    sup = None
    if text.endswith(")") and "^(" in text:
        text, _, sup_s = text.rpartition("^(")
        sup = int(sup_s[:-1])
    if kind == "th":
        name, _, idx_s = text.rpartition("_t")
        return Generator("th", name, int(idx_s), sup)
    return Generator(kind, text, None, sup)


def parse_presentation(text: str, kinds: dict[str, str] | None = None) -> Presentation:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    it = iter(lines)
    name = next(it).split(None, 1)[1]
    L = int(next(it).split()[2])
    N = int(next(it).split()[2])
    t_body = next(it).split(None, 1)[1]
    t_letters = frozenset() if t_body == "-" else frozenset(t_body.split())
    assert next(it) == "GENERATORS"
    gens: dict[str, Generator] = {}
    relators: list[Relator] = []
    state = "gens"
    for ln in it:
        if ln == "RELATORS":
            state = "rels"
            continue
        if state == "gens":
            kind, disp = ln.split(None, 1)
            g = _parse_gen(kind, disp)
            gens[g.display()] = g
        else:
            tag, _, body = ln.partition(" : ")
            word: list[GLetter] = []
            if body:
                for tok in body.split("."):
                    sign = 1
                    if tok.endswith("^-1"):
                        sign, tok = -1, tok[:-3]
                    if tok not in gens:
                        raise UnknownGenerator(tok)
                    word.append((gens[tok], sign))
            relators.append(Relator(tuple(word), tag))
    return Presentation(name, L, N, frozenset(gens.values()), tuple(relators), t_letters)


def _gap_name(g: Generator) -> str:
    s = g.display()
    for a, b in (("^(", "_c"), (")", ""), ("'", "p"), ("-", "_")):
        s = s.replace(a, b)
    return s


def _export_gap(pres: Presentation) -> str:
    gens = sorted(pres.generators, key=_sort_key)
    names = [_gap_name(g) for g in gens]
    if len(set(names)) != len(names):
        raise ValueError("generator name collision after sanitization")
    by_gen = dict(zip(gens, names))
    out = ["# free presentation, consumable by GAP-style systems"]
    quoted = ", ".join(f'"{n}"' for n in names)
    out.append(f"F := FreeGroup({quoted});;")
    for i, n in enumerate(names):
        out.append(f"{n} := F.{i+1};;")
    rel_strs = []
    for r in pres.relators:
        if not r.word:
            continue
        rel_strs.append("*".join(by_gen[g] + ("^-1" if s < 0 else "") for g, s in r.word))
    out.append("rels := [")
    for rs in rel_strs:
        out.append(f"  {rs},")
    out.append("];;")
    out.append("G := F / rels;;")
    return "\n".join(out) + "\n"
