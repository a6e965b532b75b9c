import pytest
from hypothesis import given, settings, strategies as st

from smachine.lr import build_lr
from smachine.machine import (
    Hardware,
    NotApplicableAt,
    Rule,
    RulePart,
    SMachine,
    UntaggedRule,
    apply_rule,
    history,
    is_applicable,
    is_eligible,
    run_history,
    step_history,
)
from smachine.enumerate import enumerate_computations
from smachine.words import AdmissibleWord, QLetter, YLetter


@pytest.fixture(scope="module")
def lr():
    return build_lr(["a", "b"])


def random_lr_word(lr, draw_content, p_state):
    hw = lr.hardware
    return AdmissibleWord(
        (QLetter(0, "q1", 1), QLetter(1, p_state, 1), QLetter(2, "q2", 1)),
        draw_content,
    )


content = st.lists(
    st.tuples(st.sampled_from(["a", "b", "a'", "b'"]), st.sampled_from([1, -1])),
    max_size=5,
).map(lambda ls: tuple(YLetter(*t) for t in ls))


@st.composite
def lr_words(draw):
    from smachine.words import reduce_word

    u0 = reduce_word(draw(content))
    u1 = reduce_word(draw(content))
    p = draw(st.sampled_from(["p1", "p2"]))
    return AdmissibleWord(
        (QLetter(0, "q1", 1), QLetter(1, p, 1), QLetter(2, "q2", 1)),
        (u0, u1),
    )


@settings(max_examples=300)
@given(lr_words())
def test_round_trip_all_applicable_rules(lr_word):
    lr = build_lr(["a", "b"])
    for r in lr.rules:
        if is_applicable(lr, lr_word, r):
            out = apply_rule(lr, lr_word, r)
            back = apply_rule(lr, out, r.inv())
            assert back == lr_word
            # output is admissible with q-letters at the ends
            lr.hardware.validate(out)
            assert out.q_length() == lr_word.q_length()
            # Y-length bookkeeping
            assert out.length() <= lr_word.length() + r.growth()


@settings(max_examples=200)
@given(lr_words())
def test_base_preserved(lr_word):
    lr = build_lr(["a", "b"])
    for r in lr.rules:
        if is_applicable(lr, lr_word, r):
            assert apply_rule(lr, lr_word, r).base == lr_word.base


def test_inverted_word_application(lr):
    w = lr.hardware.word(["q1", "a", "p1", "q2"])
    wi = w.inv()
    lr.hardware.validate(wi)
    out = apply_rule(lr, wi, lr.rule("z1_a"))
    assert out == lr.hardware.word(["q2^-1", "a'^-1", "p1^-1", "q1^-1"])
    assert apply_rule(lr, out, lr.rule("z1_a").inv()) == wi


def test_run_history_empty(lr):
    w = lr.hardware.word(["q1", "p1", "q2"])
    comp = run_history(lr, w, [])
    assert comp.trace == (w,)


def test_run_history_inverse_pair(lr):
    w = lr.hardware.word(["q1", "a", "p1", "q2"])
    comp = run_history(lr, w, ["z1_a", "z1_a^-1"])
    assert comp.end == w


def test_rules_apply_blindly(lr):
    # no cancellation required: z1_b on a-content just deposits b^-1 / b'
    w = lr.hardware.word(["q1", "a", "p1", "q2"])
    out = apply_rule(lr, w, lr.rule("z1_b"))
    assert out == lr.hardware.word(["q1", "a", "b^-1", "p1", "b'", "q2"])


def test_run_history_failure_index(lr):
    w = lr.hardware.word(["q1", "a", "p1", "q2"])
    # after the turn the p-letter is p2, so z12 cannot fire again
    with pytest.raises(NotApplicableAt) as e:
        run_history(lr, w, ["z1_a", "z12", "z12"])
    assert e.value.index == 2 and e.value.label == "z12"


def test_eligibility_rules():
    h_ok = history("t23", "t23^-1")
    h_bad = history("t23^-1", "t23")
    assert is_eligible(h_ok, allowed="t23")
    assert not is_eligible(h_bad, allowed="t23")
    assert not is_eligible(history("x", "x^-1"), allowed="t23")
    # any reduced history is eligible
    assert is_eligible(history("x", "y", "x^-1"), allowed="t23")


def _tagged_machine():
    hw = Hardware(parts=(("u", "v"),), sector_alphabets=(), circular=False)
    r1 = Rule("f", (RulePart("u", (), "u", ()),), (), tag="set2")
    r2 = Rule("g", (RulePart("u", (), "v", ()),), (), tag="tr23")
    r3 = Rule("h", (RulePart("v", (), "v", ()),), (), tag="set3")
    r4 = Rule("k", (RulePart("u", (), "u", ()),), (), tag="")
    return SMachine(hardware=hw, positive_rules=(r1, r2, r3, r4), name="tagged")


def test_step_history_collapse():
    m = _tagged_machine()
    h = history("f", "f", "g", "h", "h", "h")
    assert step_history(h, m) == ("(2)", "(23)", "(3)")


def test_step_history_inverse_transition():
    m = _tagged_machine()
    assert step_history(history("g^-1",), m) == ("(32)",)
    assert step_history((), m) == ()


def test_step_history_untagged():
    m = _tagged_machine()
    with pytest.raises(UntaggedRule):
        step_history(history("k"), m)


def test_enumerate_depth0(lr):
    w = lr.hardware.word(["q1", "p1", "q2"])
    comps = list(enumerate_computations(lr, w, 0))
    assert len(comps) == 1 and comps[0].history == ()


def test_enumerate_monotone_and_deterministic(lr):
    w = lr.hardware.word(["q1", "a", "p1", "q2"])
    runs = []
    for _ in range(2):
        runs.append([c.history for c in enumerate_computations(lr, w, 3, "reduced")])
    assert runs[0] == runs[1]
    by_depth = [sum(1 for h in runs[0] if len(h) <= d) for d in range(4)]
    assert by_depth == sorted(by_depth)


def test_enumerate_contains_full_sweep():
    lr = build_lr(["a"])
    w = lr.hardware.word(["q1", "a", "p1", "q2"])
    target = lr.hardware.word(["q1", "a", "p2", "q2"])
    hs = {
        c.history
        for c in enumerate_computations(lr, w, 3, "reduced")
        if c.end == target
    }
    assert history("z1_a", "z12", "z2_a") in hs


def test_enumerate_exactly_once(lr):
    w = lr.hardware.word(["q1", "a", "p1", "q2"])
    hs = [c.history for c in enumerate_computations(lr, w, 4, "all")]
    assert len(hs) == len(set(hs))


def test_reach_levels_covers_enumeration(lr):
    """Level states at depth t are exactly the (word, last) pairs of
    length-t reduced computations."""
    from smachine.enumerate import reach_levels

    w = lr.hardware.word(["q1", "a", "p1", "q2"])
    comps = list(enumerate_computations(lr, w, 3, "reduced"))
    by_depth = {}
    for c in comps:
        key = (c.end, c.history[-1] if c.history else None)
        by_depth.setdefault(len(c), set()).add(key)
    for t, states in reach_levels(lr, [w], 3, "reduced"):
        got = {(s.word, s.last) for s in states}
        assert got == by_depth[t]
        for s in states:
            if s.last is not None:
                comp = run_history(lr, w, s.history())
                assert comp.end == s.word
