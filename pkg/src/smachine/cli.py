"""Command-line surface: build | simulate | enumerate | compile | export
| verify | disk | report.

Exit codes: 0 success, 1 usage, 2 verification failure, 3 I/O.
Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import checks
from .compose import add_control_letters, add_history_sectors, compose_m3
from .enumerate import enumerate_computations
from .lr import build_lr, build_lr_m, build_rl
from .machine import format_slabel, run_history
from .main_machine import build_main_machine, build_trimmed_machine
from .presentation import (
    compile_group_G,
    compile_group_M,
    compile_trimmed,
    export as export_presentation,
    hnn_Gbar,
    hnn_Gk,
    parse_presentation,
)
from .serialize import manifest, parse_machine, print_machine
from .toy import toy_even_recognizer
from .trapezia import is_disk_word, make_permissible, power_word, PermissibleWord
from .words import AdmissibleWord

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(EXIT_USAGE)


def _write(path: str | None, text: str) -> None:
    try:
        if path is None or path == "-":
            sys.stdout.write(text)
        else:
            Path(path).write_text(text)
    except OSError as e:
        sys.stderr.write(f"i/o error: {e}\n")
        sys.exit(EXIT_IO)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        sys.stderr.write(f"i/o error: {e}\n")
        sys.exit(EXIT_IO)


def _bundle(args) -> "object":
    return build_main_machine(toy_even_recognizer(), m=args.m, L=args.L)


def cmd_build(args) -> int:
    if args.main or args.trimmed:
        bundle = _bundle(args)
        machine = build_trimmed_machine(bundle) if args.trimmed else bundle.machine
        params = {"m": args.m, "L": args.L, "N": bundle.N, "toy": bundle.toy.name, "c4": None}
    elif args.lr:
        machine = build_lr(args.lr.split(","))
        params = {"alphabet": args.lr.split(",")}
    elif args.rl:
        machine = build_rl(args.rl.split(","))
        params = {"alphabet": args.rl.split(",")}
    elif args.lr_m:
        alpha, _, m_s = args.lr_m.partition(":")
        machine = build_lr_m(alpha.split(","), int(m_s or args.m))
        params = {"alphabet": alpha.split(","), "m": int(m_s or args.m)}
    elif args.m3:
        toy = toy_even_recognizer()
        machine = compose_m3(add_control_letters(add_history_sectors(toy.machine)), args.m).machine
        params = {"m": args.m, "toy": toy.name}
    elif args.toy_even and not args.main:
        machine = toy_even_recognizer().machine
        params = {}
    else:
        sys.stderr.write("error: pick one of --main/--trimmed/--lr/--rl/--lr-m/--m3/--toy-even\n")
        return EXIT_USAGE
    _write(args.output, print_machine(machine))
    if args.manifest:
        _write(args.manifest, manifest(machine, **params))
    return EXIT_OK


def _load_word(machine, text: str) -> AdmissibleWord:
    return machine.hardware.word(text.split())


def cmd_simulate(args) -> int:
    machine = parse_machine(_read(args.machine))
    w = _load_word(machine, args.word)
    comp = run_history(machine, w, args.history.split())
    lines = [str(comp.trace[0])]
    for sl, word in zip(comp.history, comp.trace[1:]):
        lines.append(f"  --{format_slabel(sl)}--> {word}")
    _write(args.output, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    machine = parse_machine(_read(args.machine))
    w = _load_word(machine, args.word)
    out = []
    for comp in enumerate_computations(machine, w, args.depth, args.filter):
        hist = " ".join(format_slabel(s) for s in comp.history) or "-"
        out.append(f"{len(comp)} | {hist} | {comp.end}")
    _write(args.output, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_compile(args) -> int:
    bundle = _bundle(args)
    name = args.group
    if name == "M":
        pres = compile_group_M(bundle)
    elif name == "G":
        pres = compile_group_G(bundle)
    elif name == "Mbar":
        pres = compile_trimmed(bundle)[0]
    elif name == "Gbar":
        pres = compile_trimmed(bundle)[1]
    elif name.startswith("Gk:"):
        pres = hnn_Gk(compile_group_G(bundle), bundle, int(name[3:]))
    elif name == "Gbar-hnn":
        pres = hnn_Gbar(compile_group_G(bundle), bundle)
    else:
        sys.stderr.write(f"error: unknown group {name!r}\n")
        return EXIT_USAGE
    _write(args.output, export_presentation(pres, args.format))
    return EXIT_OK


def cmd_export(args) -> int:
    pres = parse_presentation(_read(args.presentation))
    _write(args.output, export_presentation(pres, args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    m, L = args.m, args.L
    if args.manifest:
        doc = json.loads(_read(args.manifest))
        m = int(doc.get("m", m))
        L = int(doc.get("L", L))
    reports = checks.run_suites(
        args.suite,
        m=m,
        L=L,
        max_tape=args.max_tape,
        depth=args.depth,
        budget=args.budget,
        ks=tuple(int(k) for k in args.ks.split(",")) if args.ks else (0, 1, 2, 3),
        jobs=args.jobs,
    )
    text = "".join(r.to_json() for r in reports)
    _write(args.output, text)
    if any(r.status == "fail" for r in reports):
        return EXIT_VERIFY
    return EXIT_OK


def cmd_disk(args) -> int:
    bundle = _bundle(args)
    if args.hub:
        w = bundle.w_st if args.hub == "start" else bundle.w_ac
    else:
        w = bundle.w_word(args.k, args.k)
    big = power_word(w, bundle.L)
    if args.hub == "start":
        pw = make_permissible(
            bundle.machine, big, bundle.machine.rule("tr_st1"), 1, modulus=bundle.L
        )
    else:
        pw = PermissibleWord(big, (None,) * len(big.q), tuple((None,) * len(u) for u in big.u))
    verdict = is_disk_word(pw, bundle, budget=args.budget)
    doc = {
        "word": f"{'hub-' + args.hub if args.hub else f'W({args.k},{args.k})'}^L",
        "verdict": verdict.verdict,
        "direction": verdict.direction,
        "witness_length": len(verdict.witness) if verdict.witness is not None else None,
        "budget_exhausted": verdict.budget_exhausted,
    }
    from .trapezia import disk_diagram_cells

    if verdict.verdict == "yes" and verdict.witness:
        src = w if verdict.direction == "accepting" else bundle.s1()
        comp = run_history(bundle.machine, src, verdict.witness)
        doc["disk_cells"] = disk_diagram_cells(w, comp, bundle)
    if not args.hub and bundle.toy.accepts(args.k):
        # the toy accepts this input: the constructed accepting run gives
        # the hub-plus-L-trapezia cell count
        hist = bundle.witness_wkk_to_wac(args.k)
        comp = run_history(bundle.machine, w, hist)
        doc["verdict"] = "yes"
        doc["accepting_witness_length"] = len(hist)
        doc["accepting_cells"] = disk_diagram_cells(w, comp, bundle)
    _write(args.output, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def cmd_report(args) -> int:
    raw = _read(args.reports)
    decoder = json.JSONDecoder()
    docs = []
    idx = 0
    while idx < len(raw):
        while idx < len(raw) and raw[idx].isspace():
            idx += 1
        if idx >= len(raw):
            break
        doc, end = decoder.raw_decode(raw, idx)
        docs.append(doc)
        idx = end
    lines = [f"{'suite':24} {'status':8} notes"]
    worst = EXIT_OK
    for d in docs:
        extra = []
        if d.get("depth_exhausted"):
            extra.append("depth-exhausted")
        for k, v in sorted(d.get("stats", {}).items()):
            if isinstance(v, (int, float, str)) and v is not None:
                extra.append(f"{k}={v}")
        if d["status"] == "fail":
            worst = EXIT_VERIFY
            extra.append("counterexample recorded")
        lines.append(f"{d['suite']:24} {d['status']:8} {'; '.join(extra)}")
    _write(args.output, "\n".join(lines) + "\n")
    return worst


def make_parser() -> _Parser:
    p = _Parser(prog="smachine", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--m", type=int, default=2)
        sp.add_argument("--L", type=int, default=12)
        sp.add_argument("-o", "--output", default=None)

    b = sub.add_parser("build", help="construct a machine and write its file")
    common(b)
    b.add_argument("--main", action="store_true")
    b.add_argument("--trimmed", action="store_true")
    b.add_argument("--toy-even", action="store_true")
    b.add_argument("--lr", metavar="LETTERS")
    b.add_argument("--rl", metavar="LETTERS")
    b.add_argument("--lr-m", metavar="LETTERS:M")
    b.add_argument("--m3", action="store_true")
    b.add_argument("--manifest")
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("simulate", help="run a history on a word")
    s.add_argument("--machine", required=True)
    s.add_argument("--word", required=True)
    s.add_argument("--history", required=True)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("enumerate", help="stream computations from a word")
    e.add_argument("--machine", required=True)
    e.add_argument("--word", required=True)
    e.add_argument("--depth", type=int, default=3)
    e.add_argument("--filter", choices=("reduced", "eligible", "all"), default="reduced")
    e.add_argument("-o", "--output", default=None)
    e.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("compile", help="emit a group presentation")
    common(c)
    c.add_argument("--group", required=True, help="M | G | Mbar | Gbar | Gk:<k> | Gbar-hnn")
    c.add_argument("--format", choices=("plain", "gap-style"), default="plain")
    c.set_defaults(func=cmd_compile)

    x = sub.add_parser("export", help="re-export a presentation file")
    x.add_argument("--presentation", required=True)
    x.add_argument("--format", choices=("plain", "gap-style"), default="gap-style")
    x.add_argument("-o", "--output", default=None)
    x.set_defaults(func=cmd_export)

    v = sub.add_parser("verify", help="run harness suites")
    common(v)
    v.add_argument(
        "--suite",
        default="all",
        help="lr-bound | wi-bound | chi-occurrences | no-return | periodic | accepted-language | presentation-audit | all",
    )
    v.add_argument("--max-tape", type=int, default=4)
    v.add_argument("--depth", type=int, default=None)
    v.add_argument("--budget", type=int, default=20_000)
    v.add_argument("--ks", default=None, help="comma-separated inputs for the language experiment")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--manifest", default=None, help="replay parameters from a recorded manifest")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("disk", help="disk-word verdicts and cell counts")
    common(d)
    d.add_argument("--k", type=int, default=0)
    d.add_argument("--hub", choices=("start", "accept"), default=None)
    d.add_argument("--budget", type=int, default=10_000)
    d.set_defaults(func=cmd_disk)

    r = sub.add_parser("report", help="render harness reports as a table")
    r.add_argument("--reports", required=True)
    r.add_argument("-o", "--output", default=None)
    r.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
