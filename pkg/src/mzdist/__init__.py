"""Phase estimation and distinguishability for photon-counting Mach-Zehnder interferometry.

n photons in two modes are treated as a spin j = n/2; the interferometer is
the rotation exp(i J_y theta) and the measurement counts photons per port.
"""
from .disting import (DistinguishabilityQuery, DistinguishabilityResult, QuadratureRule, QuadratureSpec,
                      default_nodes, disting, disting_sweep, endpoint_divergence, local_approx)
from .errors import (DegenerateLikelihood, DimensionMismatch, InvalidInterval, InvalidM, InvalidSpin, MZError,
                     NonHermitian, UnsupportedDimension, UnsupportedFamily, ZeroInformation)
from .estimation import (EstimationRun, SampleRecord, exact_binary_misid, misid_experiment, mle_grid,
                         mse_experiment, sample_outcomes)
from .fisher import (FisherMethod, FisherResult, closed_form_fisher, cramer_rao_bound, fisher_energy_discrepancy,
                     fisher_prob_derivative)
from .info import (MeasurementDistribution, TypeBounds, distribution, kl_divergence, noon_distribution_analytic,
                   shannon_entropy, type_bounds)
from .rotation import RotationEngine, evolve, mz_three_stage, state_derivative, wigner_d
from .spin import (FockZ, Noon, OperatorMatrix, PhaseState, SpinJ, SpinState, expectation, make_fock_z,
                   make_generators, make_noon, make_phase_state, make_probe, y_eigenbasis)
