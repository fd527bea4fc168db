import itertools

import loguru
import pytest
import sympy
from _pytest.logging import LogCaptureFixture

from toric_theta_tools.lattice import isotropic_quotient
from toric_theta_tools.lattice import isotropic_sublattice
from toric_theta_tools.lattice import validate_even_lattice

U_PLUS_U = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
ISOTROPIC_LINE = [1, 0, 0, 0]
U_GRAM = [[0, 1], [1, 0]]


@pytest.fixture
def caplog(caplog: LogCaptureFixture):
    handler_id = loguru.logger.add(
        caplog.handler,
        format="{message}",
        level=0,
        filter=lambda record: record["level"].no >= caplog.handler.level,
        enqueue=False,  # Set to 'True' if your test is spawning child processes.
    )
    yield caplog
    loguru.logger.remove(handler_id)


@pytest.fixture(scope="session")
def u_k_iso() -> list[list[int]]:
    # isometry from U onto the computed quotient of U+U by the first basis vector
    lattice = validate_even_lattice(U_PLUS_U, name="L")
    quotient = isotropic_quotient(lattice, isotropic_sublattice(lattice, [ISOTROPIC_LINE]))
    target = sympy.Matrix(U_GRAM)
    for entries in itertools.product(range(-2, 3), repeat=4):
        m = sympy.Matrix(2, 2, entries)
        if abs(m.det()) == 1 and m.T * quotient.lattice.matrix * m == target:
            return [[int(v) for v in m.row(i)] for i in range(2)]
    pytest.fail("No isometry with small entries between U and the quotient lattice.")
    return []


@pytest.fixture
def u_fragment_document(u_k_iso) -> dict:
    return {
        "lattice_L": U_PLUS_U,
        "isotropic_I": ISOTROPIC_LINE,
        "K_iso": u_k_iso,
        "sigma_rays": [[1, 1]],
        "plus_ray": [1, 0],
        "minus_ray": [0, 1],
    }
