"""Quantum-Zeno GHZ-state generation among atoms in fiber-linked cavities."""
from .basis import BasisState, ChainConfig, Kind, classify, enumerate_basis
from .dynamics import Trajectory, analytic_dark_evolution, evolve, fidelity, populations
from .errors import ConfigError, DegeneracyError, OracleError, PropagationError, ZenoError
from .hamiltonian import assemble_acf, assemble_decoherent, assemble_laser, assemble_total
from .oracle import full_space_oracle
from .protocol import (
    Axis,
    GhzReport,
    atomic_register,
    compare_effective,
    concurrence,
    epr_reduce,
    ghz_pulse_time,
    ghz_register,
    ghz_target,
    run_ghz,
    sweep,
)
from .zeno import (
    closed_form_eigensystem,
    dark_state,
    effective_hamiltonian,
    zeno_decompose,
)

__version__ = "0.1.0"
