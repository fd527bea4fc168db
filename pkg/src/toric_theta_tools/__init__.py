# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

from toric_theta_tools.__version__ import VERSION
from toric_theta_tools.hyperbolic import completion_report
from toric_theta_tools.hyperbolic import eval_completed
from toric_theta_tools.hyperbolic import hyperbolic_setup
from toric_theta_tools.hyperbolic import ray_system
from toric_theta_tools.hyperbolic import theta_plus
from toric_theta_tools.hyperbolic import verify_transformations
from toric_theta_tools.lattice import discriminant_group
from toric_theta_tools.lattice import validate_even_lattice
from toric_theta_tools.toric import ambient_data
from toric_theta_tools.toric import fan_fragment
from toric_theta_tools.toric import intersection_series
from toric_theta_tools.toric import precise_main_pairing

__all__ = [
    "VERSION",
    "ambient_data",
    "completion_report",
    "discriminant_group",
    "eval_completed",
    "fan_fragment",
    "hyperbolic_setup",
    "intersection_series",
    "precise_main_pairing",
    "ray_system",
    "theta_plus",
    "validate_even_lattice",
    "verify_transformations",
]
