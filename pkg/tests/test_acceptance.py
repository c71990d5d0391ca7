"""One test per acceptance criterion; each prints a PASS/FAIL line.

The lines are also collected into an "acceptance criteria" section of the
pytest terminal summary. Criteria 4, 5 and 8 take minutes each.
"""

import pytest

from boundstate_atlas.verification import CHECKS

SLOW = {4, 5, 8}


@pytest.mark.parametrize(
    "number", [pytest.param(n, marks=pytest.mark.slow) if n in SLOW else n for n in sorted(CHECKS)]
)
def test_acceptance(number, acceptance_log):
    result = CHECKS[number]()
    line = result.line()
    acceptance_log.append(line)
    print(line)
    for f in result.failures:
        print("    " + f)
    assert result.passed, "\n".join([line] + result.failures[:20])
