from fractions import Fraction

import pytest
from hypothesis import strategies as st

from fractalsum.exact import AffineMap, OrthoMatrix
from fractalsum.ifs import HomogeneousIFS

F = Fraction


@pytest.fixture
def cantor():
    return HomogeneousIFS.simple("1/3", ["0", "2/3"])


# rational orthogonal matrices: signed permutations and Pythagorean rotations
ORTHO_2D = [
    OrthoMatrix.identity(2),
    OrthoMatrix.rotation(0, 1),
    OrthoMatrix.rotation(-1, 0),
    OrthoMatrix.rotation("3/5", "4/5"),
    OrthoMatrix.rotation("5/13", "-12/13"),
    OrthoMatrix(((0, 1), (1, 0))),
    OrthoMatrix(((1, 0), (0, -1))),
]

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=12)
ratios = st.fractions(min_value=F(1, 20), max_value=F(19, 20), max_denominator=20).filter(lambda r: 0 < r < 1)
points_2d = st.tuples(rationals, rationals)


@st.composite
def maps_2d(draw):
    return AffineMap(draw(ratios), draw(st.sampled_from(ORTHO_2D)), draw(points_2d))


@st.composite
def maps_1d(draw):
    return AffineMap(draw(ratios), OrthoMatrix(((draw(st.sampled_from([1, -1])),),)), (draw(rationals),))


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, in criterion order."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" in props and rep.when == "call" or ("criterion" in props and outcome == "error"):
                lines.append((props["criterion"], "PASS" if outcome == "passed" else "FAIL", props.get("title", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for number, verdict, title in sorted(set(lines)):
            terminalreporter.write_line(f"criterion {number:>2}: {verdict}  {title}")
