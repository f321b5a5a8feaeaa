"""Envelope and local-energy bounds for Schrodinger spectra of -Delta + v f(r)."""
from .base_spectra import (Family, PowerLawSpectrum, QuantumNumbers, TrialFunction, p_number,
                           power_law_spectrum, spectrum_for_shape, trial_eigendata, trial_eval)
from .envelope import (BoundResult, Method, Side, bound_sweep, envelope_bound_kinetic,
                       envelope_bound_tangent, semiclassical_bound)
from .errors import ConfigError, EnvelopeError, NumericalFailure
from .kinetic import (EnergyCurve, KineticPotential, energy_from_kinetic, legendre_to_energy,
                      legendre_to_kinetic, semiclassical_energy, transform_kinetic)
from .local_energy import (LocalEnergyProfile, coincidence_check, critical_parameter, local_energy,
                           local_energy_bound)
from .numerics import Tolerance
from .oracle import OracleResult, RadialProblem, oracle_curve, solve, solve_line, solve_radial
from .potentials import (Convexity, PotentialShape, classify_convexity, parse_potential,
                         tangent_coefficients)

__version__ = "0.1.0"
