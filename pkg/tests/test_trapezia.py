"""Permissible lifts, band stacking, disk words."""

import pytest

from smachine.machine import run_history
from smachine.main_machine import build_main_machine
from smachine.presentation import compile_group_G, factory_for
from smachine.toy import toy_even_recognizer
from smachine.trapezia import (
    EmptyHistory,
    IneligibleHistory,
    SuperscriptForbidden,
    SuperscriptRequired,
    computation_to_trapezium,
    disk_diagram_cells,
    is_disk_word,
    make_permissible,
    power_word,
    trapezium_area,
    PermissibleWord,
)


@pytest.fixture(scope="module")
def bundle():
    return build_main_machine(toy_even_recognizer(), m=2, L=12)


@pytest.fixture(scope="module")
def pres_g(bundle):
    return compile_group_G(bundle)


def plain_lift(w):
    return PermissibleWord(w, (None,) * len(w.q), tuple((None,) * len(u) for u in w.u))


def test_plain_family_lift_is_identity(bundle):
    w = bundle.w_word(1, 1)
    rule = bundle.machine.rule("w3_ins_fin")
    pw = make_permissible(bundle.machine, w, rule, None, modulus=bundle.L)
    assert pw.erase() == w and pw.plain


def test_plain_family_forbids_superscript(bundle):
    w = bundle.w_word(0, 0)
    rule = bundle.machine.rule("tr_34")
    with pytest.raises(SuperscriptForbidden):
        make_permissible(bundle.machine, w, rule, 3, modulus=bundle.L)


def test_sup_family_requires_superscript(bundle):
    rule = bundle.machine.rule("tr_st1")
    with pytest.raises(SuperscriptRequired):
        make_permissible(bundle.machine, bundle.w_st, rule, None, modulus=bundle.L)


def test_sup_lift_constant_within_standard_base(bundle):
    rule = bundle.machine.rule("tr_st1")
    pw = make_permissible(bundle.machine, bundle.w_st, rule, 7, modulus=bundle.L)
    assert set(pw.q_sups) == {7}
    assert pw.erase() == bundle.w_st


def test_sup_lift_bumps_at_t_junction(bundle):
    """A two-period word crosses the circular part once: levels i, i+1."""
    w = bundle.w_st
    two = power_word(w, 2)
    rule = bundle.machine.rule("tr_st1")
    pw = make_permissible(bundle.machine, two, rule, 4, modulus=bundle.L)
    assert pw.q_sups[: bundle.N] == (4,) * bundle.N
    assert pw.q_sups[bundle.N :] == (5,) * bundle.N
    # erasure is independent of the chosen level
    pw2 = make_permissible(bundle.machine, two, rule, 9, modulus=bundle.L)
    assert pw.erase() == pw2.erase()


def test_trapezium_of_witness(bundle, pres_g):
    k = 0
    hist = bundle.witness_wst_to_wac(k)
    comp = run_history(bundle.machine, bundle.w_st, hist)
    trap = computation_to_trapezium(bundle, comp, first_sup=1)
    assert trap.height == len(hist)
    assert trap.bottom.erase() == bundle.w_st
    assert trap.top.erase() == bundle.w_ac
    # every cell boundary is a relator of the compiled presentation
    for band in trap.bands:
        for cell in band.cells:
            assert pres_g.has_relator(cell)
    # one (theta,q)-cell per base letter: area at least N per band
    assert trapezium_area(trap) >= bundle.N * trap.height


def test_trapezium_errors(bundle):
    comp = run_history(bundle.machine, bundle.w_st, ())
    with pytest.raises(EmptyHistory):
        computation_to_trapezium(bundle, comp, first_sup=1)
    bad = run_history(bundle.machine, bundle.w_st, ["tr_st1", "tr_st1^-1"])
    with pytest.raises(IneligibleHistory):
        computation_to_trapezium(bundle, bad, first_sup=1)


def test_eligible_pair_gets_distinct_lifts(bundle, pres_g):
    """theta(23)·theta(23)^-1 stacks only with a fresh superscript level."""
    pre = bundle.witness_wst_to_wkk(0)[:-1]
    w = run_history(bundle.machine, bundle.w_st, pre).end
    comp = run_history(bundle.machine, w, ["tr_23", "tr_23^-1"])
    trap = computation_to_trapezium(bundle, comp, first_sup=3)
    assert trap.height == 2
    b1, b2 = trap.bands
    assert b1.bottom.q_sups[0] == 3
    assert b1.top.plain and b2.bottom.plain
    assert b2.top.q_sups[0] == 4  # the default fresh level
    for band in trap.bands:
        for cell in band.cells:
            assert pres_g.has_relator(cell)


def test_band_cell_counts_height_one(bundle):
    """Empty sectors: exactly one (theta,q)-cell per base letter."""
    comp = run_history(bundle.machine, bundle.w_st, ["tr_st1"])
    trap = computation_to_trapezium(bundle, comp, first_sup=1)
    assert trapezium_area(trap) == bundle.N


def test_area_additive_under_stacking(bundle):
    k = 2
    hist = bundle.witness_wst_to_wac(k)
    comp = run_history(bundle.machine, bundle.w_st, hist)
    trap = computation_to_trapezium(bundle, comp, first_sup=1)
    assert trapezium_area(trap) == sum(b.area() for b in trap.bands)
    # consumed input letters do not leave commutation cells behind
    assert trapezium_area(trap) == sum(len(b.bottom.erase().q) + _survivors(b) for b in trap.bands)


def _survivors(band):
    bot, top = band.bottom.erase(), band.top.erase()
    # surviving bottom tape letters = those visible in the top minus inserts
    return band.area() - len(bot.q)


def test_hub_words_are_disk_words(bundle):
    for w, sup in ((bundle.w_st, 1), (bundle.w_ac, None)):
        big = power_word(w, bundle.L)
        if sup is None:
            pw = plain_lift(big)
        else:
            pw = make_permissible(
                bundle.machine, big, bundle.machine.rule("tr_st1"), sup, modulus=bundle.L
            )
        verdict = is_disk_word(pw, bundle, budget=4000)
        assert verdict.verdict == "yes"
        assert verdict.witness is not None


def test_non_power_is_not_disk(bundle):
    pw = plain_lift(bundle.w_word(0, 0))
    assert is_disk_word(pw, bundle).verdict == "no"


def test_wkk_power_is_disk_with_witness(bundle):
    """W(0,0)^L: certified through the constructed accepting computation."""
    w = bundle.w_word(0, 0)
    comp = run_history(bundle.machine, w, bundle.witness_wkk_to_wac(0))
    cells = disk_diagram_cells(w, comp, bundle)
    trap = computation_to_trapezium(bundle, comp)
    assert cells == 1 + bundle.L * trapezium_area(trap)
    assert cells >= bundle.N * bundle.L * len(comp)


def test_disk_cells_hub_only_edge_case(bundle):
    comp = run_history(bundle.machine, bundle.w_ac, ())
    assert disk_diagram_cells(bundle.w_ac, comp, bundle) == 1


def test_dump_golden(bundle):
    from pathlib import Path

    from smachine.machine import run_history

    comp = run_history(bundle.machine, bundle.w_word(0, 0), ["w3_ins_fin", "tr_34"])
    trap = computation_to_trapezium(bundle, comp)
    golden = Path(__file__).parent / "data" / "trapezium_w00_ins.golden"
    assert trap.dump() == golden.read_text()


def test_accepted_power_is_disk_word(bundle):
    big = power_word(bundle.w_word(0, 0), bundle.L)
    verdict = is_disk_word(plain_lift(big), bundle, budget=4000)
    assert verdict.verdict == "yes" and verdict.direction == "from-start"
    # the witness replays from the start configuration
    from smachine.machine import run_history

    comp = run_history(bundle.machine, bundle.s1(), verdict.witness)
    assert comp.end == bundle.w_word(0, 0)
