"""Induced vacuum charge of a 1+1 dimensional Dirac field in a square well.

Two charge definitions are compared: the naive mode sum over the
eigenmodes of the well, and the point-split charge evaluated as a
principal-value integral along the imaginary energy axis. The sign of
the resulting Casimir energy follows from an adiabatic ramp of the well
depth.
"""

from .core import (
    ChargeProfile,
    ChargeReport,
    ConvergenceError,
    Method,
    OutOfRegionError,
    ParameterError,
    RegimeError,
    VacuumChargeError,
    WellParameters,
    validate_well,
)
from .spectrum import (
    Branch,
    BoundStateSet,
    SpectralMode,
    bound_state_energies,
    bound_states,
    free_mode,
    mode_residual,
    scattering_mode,
)
from .modesum import (
    RegulatorConfig,
    free_vacuum_density,
    rho_b,
    rho_sea,
    rho_sky,
    total_charge_mode_sum,
    vacuum_density,
)
from .capri import (
    QuadratureConfig,
    capri_charge_integral,
    capri_density,
    delta_rho,
    pv_quadrature,
    total_charge_point_split,
)
from .casimir import (
    AuditReport,
    EnergyTrace,
    RampSpec,
    casimir_energy_adiabatic,
    sign_consistency_audit,
)

__version__ = "0.1.0"
