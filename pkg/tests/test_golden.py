import pytest

from artifact.golden import GOLDENS

# conflicts with purification transparency; see the X^P entry in the decisions ledger
KNOWN_CONFLICTS = {"purify_ltl: T(X q1) for m = 2"}


def _param(g):
    marks = [pytest.mark.xfail(strict=True, reason="golden conflicts with the X^P step length")] \
        if g.name in KNOWN_CONFLICTS else []
    return pytest.param(g, id=f"{g.tag}:{g.name}", marks=marks)


def test_conflict_names_exist():
    assert KNOWN_CONFLICTS <= {g.name for g in GOLDENS}


@pytest.mark.parametrize("g", [_param(g) for g in GOLDENS])
def test_golden(g):
    assert g.fn()
