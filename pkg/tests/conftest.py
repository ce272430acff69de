from fractions import Fraction as F

import pytest

from qhahn.qcore import QParams

# Canonical instance used wherever a single generic instance suffices.
CANONICAL = QParams(F(1, 2), F(32), F(1, 512), 3)

# The versioned verification panel (mirrors data/default_panel.json).
PANEL = [
    QParams(F(1, 2), F(32), F(1, 512), 3),
    QParams(F(1, 2), F(32), F(1, 2048), 4),
    QParams(F(2, 3), F(81, 16), F(256, 6561), 2),
    QParams(F(3, 2), F(32, 243), F(19683, 512), 3),
    QParams(F(5, 7), F(117649, 15625), F(9765625, 282475249), 4),
    QParams(F(1, 2), F(3), F(1, 512), 3),
    QParams(F(2, 3), F(2187, 128), F(4096, 531441), 5),
    QParams(F(1, 2), F(256), F(1, 32768), 6),
    QParams(F(1, 2), F(512), F(1, 131072), 8),
    QParams(F(1, 2), F(32), F(1, 128), 1),
    QParams(F(7, 5), F(15625, 117649), F(282475249, 9765625), 3),
]

# Subset with q on both sides of 1 and a non-q-power A, for slower checks.
SMALL_PANEL = [PANEL[0], PANEL[2], PANEL[3], PANEL[5], PANEL[9]]


@pytest.fixture
def canonical():
    return CANONICAL
