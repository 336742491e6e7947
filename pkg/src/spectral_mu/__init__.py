"""Modified Dirichlet eigenvalue mu(Omega, alpha) on grid domains.

mu(Omega, alpha) is the minimum over nonzero v of

    (int |grad v|^2 + alpha |int |v| v|) / int v^2,

which equals min(lambda_D + alpha, lambda_T) for alpha >= 0, where lambda_T
is the twisted eigenvalue (Rayleigh minimum under int |v| v = 0).
"""
from .closed_form import (ONE_BALL, TWO_BALLS, BallUnionSpec, EnvelopeValue, alpha_critical,
                          ball_radius_for_measure, faber_krahn_value, lambda_ball,
                          mu_single_ball, mu_two_balls, theorem_envelope, two_equal_balls_value)
from .config import ConfigError, ExperimentConfig, ShapeSpec, load_config, parse_config
from .eigen import (ConvergenceError, SpectralResult, lambda_dirichlet, lambda_dirichlet_auto,
                    lambda_dirichlet_dense)
from .grid import (DomainMask, GridFunction, ResolutionError, dirichlet_energy, make_L_shape,
                   make_annulus, make_disk, make_rectangle, make_two_disks, quotient_Q,
                   read_mask, shape_with_measure, write_mask)
from .rearrangement import polya_szego_check, schwarz_rearrange, symmetrize_and_bound
from .special import bessel_j, dimension_constants, first_bessel_zero, unit_ball_volume
from .variational import (LINEAR, TWISTED, MuResult, SpectralProfile, TwistedResult,
                          characterize, lambda_twisted, mu_characterization, mu_direct,
                          nodal_diagnostics)

__version__ = "0.1.0"
