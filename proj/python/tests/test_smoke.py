from fractions import Fraction

import pytest

import collatz_ca as ca


def test_golden_runs():
    assert ca.run(7, "ca3")["iterates"] == [7, 11, 17, 13, 5, 1]
    assert ca.run(7, "ca2")["iterates"] == [7, 22, 11, 34, 17, 13, 10, 5, 1]
    rec = ca.run(7, "ca1", mode="synchronous")
    assert rec["iterates"] == [7, 11, 17, 26, 13, 20, 10, 5, 8, 4, 2, 1]
    assert rec["ca_steps_to_one"] == 11


def test_big_integers_round_trip():
    n = 2**80 + 1
    assert ca.apply_map("T", n) == 3 * n + 1
    assert ca.run(n, "ca3")["iterates"][0] == n
    assert ca.oracle_trajectory("T3", n)[-1] == 1


def test_oracle_helpers():
    assert ca.to_digits(7, 4) == [3, 1]
    assert ca.total_stopping_time(27) == 111
    assert ca.verify(27, "ca1")["match"]
    assert ca.classify(27, "ca2")["convergent"]


def test_efficiency():
    assert ca.n_efficiency(7, "ca1") == (11, 16, Fraction(11, 16))
    mean = ca.average_efficiency(2, 100, "ca3")
    assert mean == Fraction(8788315219410271478861, 34571542352443475979600)


def test_batches():
    inputs = [183, 120767, 53132499]
    stacked = ca.batch(inputs, "ca3")
    shared = ca.batch(inputs, "ca3", mode="shared")
    assert [r["iterates"] for r in stacked] == [r["iterates"] for r in shared]
    with pytest.raises(ca.CollisionError):
        ca.batch([5, 7], "ca3", mode="shared", spacings=[0])


def test_rules_and_render():
    dump = ca.rules("ca3", 256)
    assert "# section inner entries 16 laws 16" in dump
    text = ca.render(7, "ca3")
    assert text.splitlines()[0].startswith("ca3 7 ")
    assert ca.render(7, "ca1", rows=3, fmt="pgm").startswith("P2\n")
    with pytest.raises(ValueError):
        ca.render(7, "ca3", fmt="svg")
