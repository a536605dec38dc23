import pytest

from orekrylov.sweeps import FAMILIES, run_family, run_trial


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_family_trials_pass(family):
    for t in run_family(family, seed=3, trials=3):
        assert t.checks and t.ok, (family, t.checks, t.stats)


def test_trials_are_reproducible():
    a, b = run_trial("resolvent", 5, 2), run_trial("resolvent", 5, 2)
    assert a.stats == b.stats and a.checks == b.checks
    assert run_trial("resolvent", 5, 3).stats != a.stats
