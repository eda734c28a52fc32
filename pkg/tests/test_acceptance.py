"""One test per acceptance criterion; a summary line per criterion is printed at the end."""
import pytest

from shotnoise.acceptance import CRITERIA


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, acceptance_lines):
    res = CRITERIA[k]()
    acceptance_lines.append(res.summary())
    print(res.report())
    assert res.passed, res.report()
