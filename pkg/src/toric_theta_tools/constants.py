# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

from __future__ import annotations

ELEMENT_SEPARATOR = ","
FRACTION_SEPARATOR = "/"


class Precision:
    DIGITS: int = 50
    MIN_DIGITS: int = 15
    FINITE_DIFFERENCE_STEP_EXPONENT: int = -12


class Tolerances:
    WEIL: float = 1e-12
    SHADOW: float = 1e-6
    VIGNERAS: float = 1e-6
    TRANSFORMATION: float = 1e-6
    E2_STAR: float = 1e-8


class Bounds:
    TAIL_SHELL_WIDTH: int = 1
    TAIL_CUTOFF_EXPONENT: int = -60
    TAIL_MAX_SHELLS: int = 100_000
    ORBIT_SEARCH_START: int = 8
    ORBIT_SEARCH_MAX_DOUBLINGS: int = 12


class ZagierLevels:
    # levels at which the completion normalization is checked by an exact vanishing identity
    VERIFIED_COMPLETION: tuple[int, ...] = (1, 2, 3)
