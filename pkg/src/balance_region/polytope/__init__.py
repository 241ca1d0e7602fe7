from .approx import axis_optima, init_approximations
from .inner import InnerPolytope, InnerUpdate
from .io import mesh, read_off, to_off, write_off
from .measures import SupportRecord, cap_volume, error_estimate, support_point, volume
from .outer import OuterPolytope, OuterUpdate

__all__ = [
    "InnerPolytope",
    "InnerUpdate",
    "OuterPolytope",
    "OuterUpdate",
    "SupportRecord",
    "axis_optima",
    "cap_volume",
    "error_estimate",
    "init_approximations",
    "mesh",
    "read_off",
    "support_point",
    "to_off",
    "volume",
    "write_off",
]
