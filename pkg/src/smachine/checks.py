"""Falsification harnesses for the computation-level length and
occurrence bounds, the accepted-language experiment, and the
presentation audits.

Each suite returns a :class:`CheckReport`; a failing suite carries a
minimal reproduction (start word plus history) replayable through
``run_history``.  Reports serialize deterministically: no timestamps,
sorted keys, explicit seeds.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .compose import M3Build, start_configuration_m3
from .enumerate import enumerate_computations
from .lr import build_lr
from .machine import (
    History,
    Rule,
    SMachine,
    apply_rule,
    format_slabel,
    is_applicable,
    run_history,
)
from .main_machine import MainMachineBundle
from .presentation import Presentation, mu, nu
from .words import AdmissibleWord, QLetter, YLetter


class CounterexampleFound(Exception):
    pass


class Disagreement(Exception):
    pass


class AuditFailure(Exception):
    pass


@dataclass
class CheckReport:
    suite: str
    status: str  # "pass" | "fail" | "skip"
    params: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    counterexample: dict | None = None
    depth_exhausted: bool = False
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "status": self.status,
            "params": self.params,
            "counts": self.counts,
            "stats": self.stats,
            "counterexample": self.counterexample,
            "depth_exhausted": self.depth_exhausted,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def raise_on_fail(self) -> "CheckReport":
        if self.status == "fail":
            kind = {
                "accepted-language": Disagreement,
                "presentation-audit": AuditFailure,
            }.get(self.suite, CounterexampleFound)
            raise kind(self.to_json())
        return self


def _repro(start: AdmissibleWord, history: History) -> dict:
    return {
        "start": str(start),
        "history": [format_slabel(s) for s in history],
    }


# --------------------------------------------------------------------------
# reduced-path reachability with per-state provenance (all paths covered)


@dataclass
class _Node:
    word: AdmissibleWord
    last: tuple[str, int] | None
    start: AdmissibleWord
    start_len: int
    parent: "_Node | None"
    extra: tuple = ()

    def history(self) -> History:
        out = []
        node = self
        while node.parent is not None:
            out.append(node.last)
            node = node.parent
        return tuple(reversed(out))


def check_lr_bound(max_tape: int = 4, alphabet: Sequence[str] = ("a",)) -> CheckReport:
    """Sweep-machine length bound: t <= |W0| + |Wt| - 2.

    Exhaustive over reduced standard-base computations whose words stay
    within the tape budget; any such computation longer than the largest
    possible bound is reported outright.
    """
    lr = build_lr(list(alphabet))
    hw = lr.hardware
    letters = sorted(hw.sector_alphabets[0])
    region_words = []
    contents = _reduced_words(letters, max_tape)
    by_len: dict[int, list] = {}
    for u in contents:
        by_len.setdefault(len(u), []).append(u)
    for p_state in ("p1", "p2"):
        for n0 in range(max_tape + 1):
            for n1 in range(max_tape + 1 - n0):
                for u0 in by_len.get(n0, []):
                    for u1 in by_len.get(n1, []):
                        region_words.append(
                            AdmissibleWord(
                                (QLetter(0, "q1", 1), QLetter(1, p_state, 1), QLetter(2, "q2", 1)),
                                (u0, u1),
                            )
                        )
    max_bound = 2 * (3 + max_tape) - 2
    depth = max_bound + 1
    # level-synchronized sweep over (word, last rule); track the smallest
    # start length reaching each state so the bound check is tightest
    level: dict[tuple, _Node] = {}
    for w in region_words:
        level[(w, None)] = _Node(w, None, w, w.length(), None)
    min_slack = None
    states_total = len(level)
    for t in range(1, depth + 1):
        nxt: dict[tuple, _Node] = {}
        for node in level.values():
            for r in lr.candidate_rules(node.word.q[0]):
                if node.last is not None and node.last[0] == r.label and node.last[1] == -r.sign:
                    continue
                if not is_applicable(lr, node.word, r):
                    continue
                w2 = apply_rule(lr, node.word, r)
                if w2.y_length() > max_tape:
                    continue
                key = (w2, r.signed_label)
                cand = nxt.get(key)
                if cand is None or node.start_len < cand.start_len:
                    nxt[key] = _Node(w2, r.signed_label, node.start, node.start_len, node)
        if not nxt:
            break
        states_total += len(nxt)
        for node in nxt.values():
            slack = node.start_len + node.word.length() - 2 - t
            if min_slack is None or slack < min_slack:
                min_slack = slack
            if slack < 0:
                return CheckReport(
                    suite="lr-bound",
                    status="fail",
                    params={"max_tape": max_tape, "alphabet": list(alphabet)},
                    counts={"start_words": len(region_words), "states": states_total},
                    stats={"violation_at": t},
                    counterexample=_repro(node.start, node.history()),
                )
        level = nxt
    return CheckReport(
        suite="lr-bound",
        status="pass",
        params={"max_tape": max_tape, "alphabet": list(alphabet), "depth": depth},
        counts={"start_words": len(region_words), "states": states_total},
        stats={"min_slack": min_slack, "bound_cap": max_bound},
    )


def _reduced_words(letters: Sequence[str], max_len: int):
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for name in letters:
                for sign in (1, -1):
                    y = YLetter(name, sign)
                    if w and w[-1].name == name and w[-1].sign == -sign:
                        continue
                    nxt.append(w + (y,))
        out.extend(nxt)
        frontier = nxt
    return out


def _best_periodic_gain(hist: History) -> int:
    """max over factorizations H1 (H2)^k H3 of (2k-3)|H2|, floored at 0."""
    t = len(hist)
    best = 0
    for p in range(1, t // 2 + 1):
        for i in range(0, t - 2 * p + 1):
            k = 1
            while i + (k + 1) * p <= t and hist[i + k * p : i + (k + 1) * p] == hist[i : i + p]:
                k += 1
            if k >= 2:
                best = max(best, (2 * k - 3) * p)
    return best


def check_wi_bound(
    machine: SMachine,
    starts: Sequence[AdmissibleWord],
    depth: int = 8,
    filt: str = "all",
) -> CheckReport:
    """Two-letter-base length bound with periodic-history discounts."""
    checked = 0
    min_slack = None
    for w0 in starts:
        if len(w0.q) != 2:
            raise ValueError("wi bound applies to 2-letter-base words")
        for comp in enumerate_computations(machine, w0, depth, filt):
            checked += 1
            peak = max(w.length() for w in comp.trace)
            bound = (
                comp.start.length()
                + comp.end.length()
                + 2 * len(comp)
                - _best_periodic_gain(comp.history)
            )
            slack = bound - peak
            if min_slack is None or slack < min_slack:
                min_slack = slack
            if slack < 0:
                return CheckReport(
                    suite="wi-bound",
                    status="fail",
                    params={"machine": machine.name, "depth": depth, "filter": filt},
                    counts={"computations": checked},
                    stats={},
                    counterexample=_repro(comp.start, comp.history),
                )
    return CheckReport(
        suite="wi-bound",
        status="pass",
        params={"machine": machine.name, "depth": depth, "filter": filt, "starts": len(starts)},
        counts={"computations": checked},
        stats={"min_slack": min_slack},
    )


def check_chi_occurrences(
    m3: M3Build, starts: Sequence[AdmissibleWord], depth: int = 12
) -> CheckReport:
    """At most one occurrence of each stage-transition rule, either sign.

    Reduced standard-base computations, covered exhaustively by a level
    sweep over (word, last rule, capped occurrence vector).
    """
    machine = m3.machine
    chi_index = {lbl: i for i, lbl in enumerate(m3.chi_labels)}
    zero = (0,) * len(m3.chi_labels)
    level: dict[tuple, _Node] = {}
    for w in starts:
        level[(w, None, zero)] = _Node(w, None, w, w.length(), None, zero)
    max_seen = 0
    states_total = len(level)
    for t in range(1, depth + 1):
        nxt: dict[tuple, _Node] = {}
        for node in level.values():
            vec = node.extra
            for r in machine.candidate_rules(node.word.q[0]):
                if node.last is not None and node.last[0] == r.label and node.last[1] == -r.sign:
                    continue
                if not is_applicable(machine, node.word, r):
                    continue
                w2 = apply_rule(machine, node.word, r)
                v2 = vec
                if r.label in chi_index:
                    i = chi_index[r.label]
                    v2 = vec[:i] + (min(vec[i] + 1, 2),) + vec[i + 1 :]
                    max_seen = max(max_seen, v2[i])
                    if v2[i] >= 2:
                        bad = _Node(w2, r.signed_label, node.start, node.start_len, node, v2)
                        return CheckReport(
                            suite="chi-occurrences",
                            status="fail",
                            params={"depth": depth},
                            counts={"states": states_total},
                            stats={"chi_rule": r.label},
                            counterexample=_repro(bad.start, bad.history()),
                        )
                key = (w2, r.signed_label, v2)
                if key not in nxt:
                    nxt[key] = _Node(w2, r.signed_label, node.start, node.start_len, node, v2)
        if not nxt:
            break
        states_total += len(nxt)
        level = nxt
    return CheckReport(
        suite="chi-occurrences",
        status="pass",
        params={"depth": depth, "starts": len(starts)},
        counts={"states": states_total},
        stats={"max_occurrences": max_seen},
    )


def check_norep(bundle: MainMachineBundle, k: int, depth: int = 8) -> CheckReport:
    """No nontrivial reduced return to W(k,k) without the first two sets."""
    machine = bundle.machine
    target = bundle.w_word(k, k)
    allowed = {"set3", "set4", "set5", "tr23", "tr34", "tr45", "tr50"}
    level: dict[tuple, _Node] = {(target, None): _Node(target, None, target, target.length(), None)}
    states_total = 1
    for t in range(1, depth + 1):
        nxt: dict[tuple, _Node] = {}
        for node in level.values():
            for r in machine.candidate_rules(node.word.q[0]):
                if r.tag not in allowed:
                    continue
                if node.last is not None and node.last[0] == r.label and node.last[1] == -r.sign:
                    continue
                if not is_applicable(machine, node.word, r):
                    continue
                w2 = apply_rule(machine, node.word, r)
                nn = _Node(w2, r.signed_label, node.start, node.start_len, node)
                if w2 == target:
                    return CheckReport(
                        suite="no-return",
                        status="fail",
                        params={"k": k, "depth": depth},
                        counts={"states": states_total},
                        stats={"return_at": t},
                        counterexample=_repro(target, nn.history()),
                    )
                key = (w2, r.signed_label)
                if key not in nxt:
                    nxt[key] = nn
        if not nxt:
            break
        states_total += len(nxt)
        level = nxt
    return CheckReport(
        suite="no-return",
        status="pass",
        params={"k": k, "depth": depth},
        counts={"states": states_total},
        stats={},
    )


def check_periodic_distinctness(
    machine: SMachine,
    start: AdmissibleWord,
    period: Sequence[str],
    max_reps: int = 5,
) -> CheckReport:
    """Boundary words of a period-H computation are pairwise distinct.

    Runs H^j for the largest applicable j <= max_reps; computations with
    a period window repeating a word violate the hypothesis and are
    reported as skipped.
    """
    from .machine import slabel

    hist: History = tuple(slabel(lbl) if isinstance(lbl, str) else lbl for lbl in period)
    trace = [start]
    cur = start
    reps = 0
    for _ in range(max_reps):
        try:
            comp = run_history(machine, cur, hist)
        except Exception:
            break
        trace.extend(comp.trace[1:])
        cur = comp.end
        reps += 1
    if reps == 0:
        return CheckReport(
            suite="periodic-distinctness",
            status="skip",
            params={"machine": machine.name, "period": [format_slabel(s) for s in hist]},
            notes=("period never applicable from the start word",),
        )
    p = len(hist)
    for r in range(len(trace) - p):
        if trace[r] == trace[r + p]:
            return CheckReport(
                suite="periodic-distinctness",
                status="skip",
                params={"machine": machine.name, "reps": reps},
                notes=(f"hypothesis violated: window at {r} repeats",),
            )
    boundaries = [trace[j * p] for j in range(reps + 1)]
    if len(set(boundaries)) != len(boundaries):
        dup = [str(b) for b in boundaries]
        return CheckReport(
            suite="periodic-distinctness",
            status="fail",
            params={"machine": machine.name, "reps": reps},
            counterexample={"start": str(start), "history": [format_slabel(s) for s in hist * reps], "boundaries": dup},
        )
    return CheckReport(
        suite="periodic-distinctness",
        status="pass",
        params={"machine": machine.name, "reps": reps, "period": [format_slabel(s) for s in hist]},
        counts={"boundaries": len(boundaries)},
        stats={},
    )


# --------------------------------------------------------------------------
# the accepted-language experiment


def _bidirectional_search(
    machine: SMachine,
    rules: Sequence[Rule],
    source: AdmissibleWord,
    target: AdmissibleWord,
    budget: int,
) -> tuple[History | None, bool]:
    """Meet-in-the-middle BFS; returns (witness, budget_exhausted)."""
    rule_labels = {r.label for r in rules}
    if source == target:
        return (), False
    fwd: dict[AdmissibleWord, History] = {source: ()}
    bwd: dict[AdmissibleWord, History] = {target: ()}
    fq, bq = deque([source]), deque([target])
    spent = 0

    def expand(queue, seen, other, backward):
        nonlocal spent
        for _ in range(len(queue)):
            w = queue.popleft()
            hist = seen[w]
            for r in machine.candidate_rules(w.q[0]):
                if r.label not in rule_labels:
                    continue
                if not is_applicable(machine, w, r):
                    continue
                spent += 1
                if spent > budget:
                    return "exhausted"
                w2 = apply_rule(machine, w, r)
                if w2 in seen:
                    continue
                seen[w2] = hist + (r.signed_label,)
                if w2 in other:
                    return w2
                queue.append(w2)
        return None

    while fq or bq:
        side = expand(fq, fwd, bwd, False) if len(fq) <= len(bq) and fq else expand(bq, bwd, fwd, True)
        if side == "exhausted":
            return None, True
        if side is not None:
            meet = side
            back = tuple((lbl, -sg) for lbl, sg in reversed(bwd[meet]))
            return fwd[meet] + back, False
        if not fq and not bq:
            break
    return None, False


def accepted_language_experiment(
    bundle: MainMachineBundle,
    ks: Sequence[int] = (0, 1, 2, 3),
    budget: int = 20_000,
) -> CheckReport:
    """Compare machine-level reachability with the reference acceptor.

    For accepted inputs the straight-line witness is constructed and
    replayed; the bounded bidirectional search over the trimmed rule set
    may independently certify reachability.  Verdicts: yes (witness in
    hand), no (search closure exhausted), unknown (budget ran out).
    """
    machine = bundle.machine
    allowed = {"set3", "set4", "set5", "tr34", "tr45", "tr50"}
    rules = tuple(r for r in machine.rules_in_order if r.tag in allowed)
    rows = []
    failures = []
    any_unknown = False
    for k in ks:
        expected = bundle.toy.accepts(k)
        verdict = None
        witness_len = None
        via = None
        if expected:
            hist = bundle.witness_wkk_to_wac(k)
            comp = run_history(machine, bundle.w_word(k, k), hist)
            if comp.end != bundle.w_ac:
                failures.append(f"k={k}: constructed witness does not reach the accept word")
            verdict, witness_len, via = "yes", len(hist), "constructed"
        else:
            wit, exhausted = _bidirectional_search(
                machine, rules, bundle.w_word(k, k), bundle.w_ac, budget
            )
            if wit is not None:
                comp = run_history(machine, bundle.w_word(k, k), wit)
                if comp.end != bundle.w_ac:
                    failures.append(f"k={k}: search witness fails to replay")
                verdict, witness_len, via = "yes", len(wit), "search"
            elif exhausted:
                verdict, via = "unknown", "search"
                any_unknown = True
            else:
                verdict, via = "no", "search"
        if verdict == "yes" and not expected:
            failures.append(f"k={k}: reached but rejected by the reference acceptor")
        if verdict == "no" and expected:
            failures.append(f"k={k}: accepted by the reference but refuted by search")
        rows.append({"k": k, "expected": expected, "verdict": verdict, "via": via, "witness_length": witness_len})
    status = "fail" if failures else "pass"
    return CheckReport(
        suite="accepted-language",
        status=status,
        params={"ks": list(ks), "budget": budget},
        counts={"definite": sum(1 for r in rows if r["verdict"] != "unknown")},
        stats={"table": rows},
        counterexample={"failures": failures} if failures else None,
        depth_exhausted=any_unknown,
    )


# --------------------------------------------------------------------------
# presentation audits


def presentation_audit(pres: Presentation, bundle: MainMachineBundle) -> CheckReport:
    """mu, nu, superscript-discipline, and count reconciliation."""
    failures: list[str] = []
    mu_checked = 0
    for r in pres.relators:
        if mu(pres, r.word) != 0:
            failures.append(f"mu != 0 on {r.tag} relator of {r.rule}")
        mu_checked += 1
    nu_killed = 0
    theta_q_balanced = 0
    for r in pres.relators:
        if r.tag == "theta-a":
            if nu(r.word) != ():
                failures.append(f"nu does not kill a (theta,a)-relator of {r.rule}")
            else:
                nu_killed += 1
        elif r.tag == "theta-q":
            per_rule: dict[str, int] = {}
            for g, s in r.word:
                if g.kind == "th":
                    per_rule[g.name] = per_rule.get(g.name, 0) + s
            if any(v != 0 for v in per_rule.values()):
                failures.append(f"theta exponent sum nonzero in relator of {r.rule}")
            else:
                theta_q_balanced += 1
    t_rel = 0
    for r in pres.relators:
        if r.tag == "theta-q" and r.part == bundle.t_part and r.sup is not None:
            sups = {}
            for g, s in r.word:
                if g.kind == "th":
                    sups[g.idx] = g.sup
            lo, hi = sups.get(1), sups.get(pres.N)
            if lo is None or hi is None or (lo - hi) % pres.L not in (1, pres.L - 1):
                failures.append(f"superscript discipline broken in (theta,t)-relator of {r.rule}")
            else:
                t_rel += 1
    hubs = [r for r in pres.relators if r.tag == "hub"]
    for h in hubs:
        if len(h.word) != pres.L * pres.N:
            failures.append(f"hub {h.rule} has length {len(h.word)} != L*N")
    # count reconciliation against the closed form, over the rules that
    # were actually compiled (the trimmed groups omit the early sets)
    supped_labels = {r.rule for r in pres.relators if r.sup is not None}
    compiled = {r.rule for r in pres.relators if r.tag in ("theta-q", "theta-a")}
    expected = len(hubs) + len([r for r in pres.relators if r.tag == "hnn"])
    for rule in bundle.machine.positive_rules:
        if rule.label not in compiled:
            continue
        inst = pres.L if rule.label in supped_labels else 1
        expected += inst * (pres.N + sum(len(d) for d in rule.domains))
    if expected != len(pres.relators):
        failures.append(f"relator count {len(pres.relators)} != closed form {expected}")
    return CheckReport(
        suite="presentation-audit",
        status="fail" if failures else "pass",
        params={"presentation": pres.name, "L": pres.L, "N": pres.N},
        counts={
            "relators": len(pres.relators),
            "mu_checked": mu_checked,
            "nu_killed": nu_killed,
            "theta_q_balanced": theta_q_balanced,
            "theta_t_disciplined": t_rel,
            "hubs": len(hubs),
        },
        stats={},
        counterexample={"failures": failures[:20]} if failures else None,
    )


# --------------------------------------------------------------------------
# suite registry (used by the CLI and the experiment scripts)

SUITE_NAMES = (
    "lr-bound",
    "wi-bound",
    "chi-occurrences",
    "no-return",
    "periodic",
    "accepted-language",
    "presentation-audit",
)


def _wi_lr_starts():
    lr = build_lr(["a"])
    return [
        (lr, AdmissibleWord((QLetter(0, "q1", 1), QLetter(1, "p1", 1)), ((),))),
        (lr, AdmissibleWord((QLetter(0, "q1", 1), QLetter(1, "p1", 1)), ((YLetter("a", 1),),))),
        (
            lr,
            AdmissibleWord(
                (QLetter(0, "q1", 1), QLetter(1, "p1", 1)),
                ((YLetter("a", 1), YLetter("a", 1)),),
            ),
        ),
        (lr, AdmissibleWord((QLetter(1, "p2", 1), QLetter(2, "q2", 1)), ((YLetter("a'", 1),),))),
    ]


def _m3_build(m: int) -> M3Build:
    from .compose import add_control_letters, add_history_sectors
    from .toy import toy_even_recognizer

    toy = toy_even_recognizer()
    return compose_m3_cached(toy, m)


_M3_CACHE: dict[int, M3Build] = {}


def compose_m3_cached(toy, m: int) -> M3Build:
    from .compose import add_control_letters, add_history_sectors, compose_m3

    if m not in _M3_CACHE:
        _M3_CACHE[m] = compose_m3(add_control_letters(add_history_sectors(toy.machine)), m)
    return _M3_CACHE[m]


_BUNDLE_CACHE: dict[tuple[int, int], MainMachineBundle] = {}


def bundle_cached(m: int, L: int) -> MainMachineBundle:
    from .main_machine import build_main_machine
    from .toy import toy_even_recognizer

    if (m, L) not in _BUNDLE_CACHE:
        _BUNDLE_CACHE[(m, L)] = build_main_machine(toy_even_recognizer(), m=m, L=L)
    return _BUNDLE_CACHE[(m, L)]


def run_one_suite(name: str, opts: Mapping[str, object]) -> list[CheckReport]:
    m = int(opts.get("m", 2))
    L = int(opts.get("L", 12))
    depth = opts.get("depth")
    budget = int(opts.get("budget", 20_000))
    if name == "lr-bound":
        return [check_lr_bound(max_tape=int(opts.get("max_tape", 4)))]
    if name == "wi-bound":
        out = []
        lr_starts = _wi_lr_starts()
        machine = lr_starts[0][0]
        out.append(check_wi_bound(machine, [w for _, w in lr_starts], depth=int(depth or 8), filt="all"))
        m3 = _m3_build(m)
        cfg = start_configuration_m3(m3, 0, ["del2", "fin"])
        hs = m3.history[0]
        i = hs.r_part
        frag = AdmissibleWord((cfg.q[i], cfg.q[i + 1]), (cfg.u[i],))
        out.append(check_wi_bound(m3.machine, [frag], depth=int(depth or 8), filt="all"))
        return out
    if name == "chi-occurrences":
        m3 = _m3_build(m)
        starts = [
            start_configuration_m3(m3, 0, ["fin"]),
            start_configuration_m3(m3, 2, ["del2", "fin"]),
        ]
        return [check_chi_occurrences(m3, starts, depth=int(depth or 10))]
    if name == "no-return":
        bundle = bundle_cached(m, L)
        return [check_norep(bundle, k, depth=int(depth or 8)) for k in (0, 2)]
    if name == "periodic":
        lr = build_lr(["a"])
        w = lr.hardware.word(["q1", "a", "a", "a", "p1", "q2"])
        out = [check_periodic_distinctness(lr, w, ["z1_a"], max_reps=3)]
        w2 = lr.hardware.word(["q1", "p1", "a'", "q2"])
        out.append(check_periodic_distinctness(lr, w2, ["z12", "z12^-1"], max_reps=3))
        w3 = lr.hardware.word(["q1", "p1", "q2"])
        out.append(check_periodic_distinctness(lr, w3, ["z1_a^-1"], max_reps=5))
        return out
    if name == "accepted-language":
        bundle = bundle_cached(m, L)
        ks = tuple(opts.get("ks", (0, 1, 2, 3)))  # type: ignore[arg-type]
        return [accepted_language_experiment(bundle, ks=ks, budget=budget)]
    if name == "presentation-audit":
        from .presentation import compile_group_G, compile_trimmed

        bundle = bundle_cached(m, L)
        out = [presentation_audit(compile_group_G(bundle), bundle)]
        _, gbar = compile_trimmed(bundle)
        rep = presentation_audit(gbar, bundle)
        if any(g.sup is not None for g in gbar.generators):
            rep.status = "fail"
            rep.notes = rep.notes + ("trimmed presentation carries superscripts",)
        rep.params["presentation"] = "Gbar"
        out.append(rep)
        return out
    raise ValueError(f"unknown suite {name!r}")


def _suite_worker(task: tuple[str, dict]) -> list[dict]:
    name, opts = task
    return [r.to_dict() for r in run_one_suite(name, opts)]


def run_suites(suite: str, jobs: int = 1, **opts: object) -> list[CheckReport]:
    names = list(SUITE_NAMES) if suite == "all" else suite.split(",")
    for n in names:
        if n not in SUITE_NAMES:
            raise ValueError(f"unknown suite {n!r}")
    if jobs > 1 and len(names) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            dicts = list(pool.map(_suite_worker, [(n, dict(opts)) for n in names]))
        out = []
        for group in dicts:
            for d in group:
                out.append(
                    CheckReport(
                        suite=d["suite"],
                        status=d["status"],
                        params=d["params"],
                        counts=d["counts"],
                        stats=d["stats"],
                        counterexample=d["counterexample"],
                        depth_exhausted=d["depth_exhausted"],
                        notes=tuple(d["notes"]),
                    )
                )
        return out
    out = []
    for n in names:
        out.extend(run_one_suite(n, dict(opts)))
    return out
