"""The shipped input recognizer and its reference acceptor."""

import pytest

from smachine.machine import run_history
from smachine.toy import toy_even_recognizer


@pytest.fixture(scope="module")
def toy():
    return toy_even_recognizer()


def test_reference_acceptor(toy):
    assert [k for k in range(-2, 7) if toy.accepts(k)] == [0, 2, 4, 6]


def test_accept_configuration_empty_projection(toy):
    acc = toy.accept_configuration()
    assert acc.y_length() == 0


def test_input_configuration_shape(toy):
    w = toy.input_configuration(3)
    # exactly one input sector, the first one; the rest empty
    assert len(w.u[0]) == 3
    assert all(len(u) == 0 for u in w.u[1:])


def test_accepting_histories_replay(toy):
    for k in (0, 2, 6):
        comp = run_history(toy.machine, toy.input_configuration(k), toy.accepting_history(k))
        assert comp.end == toy.accept_configuration()
        assert len(comp) == k // 2 + 1


def test_rejected_inputs_have_no_history(toy):
    for k in (1, 3, -1):
        with pytest.raises(ValueError):
            toy.accepting_history(k)


def test_odd_input_cannot_finish(toy):
    from smachine.machine import NotApplicableAt

    with pytest.raises(NotApplicableAt):
        run_history(toy.machine, toy.input_configuration(1), ["fin"])
