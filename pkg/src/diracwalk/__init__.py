"""Discrete-time quantum walks realizing lattice Dirac and Majorana dynamics.

Simulation of the coined walk whose coin family is constrained to
reproduce the (1+1)-dimensional Dirac evolution, with first- and
second-order (symmetric-splitting) step rules, charge-conjugation and
self-conjugacy (Majorana) machinery, momentum-space accuracy analysis,
measurable observables, and verified compilation to quantum-gate programs.
"""

from .coins import (
    CoinSpec,
    coin_matrix,
    conjugate_coin,
    gamma_check,
    rx,
    ry,
    rz,
)
from .lattice import (
    WEYL_DIRAC,
    WEYL_MAJORANA,
    InitialStateSpec,
    Lattice,
    WalkerState,
    build_state,
    change_basis,
    charge_conjugate,
    dirac_plane_wave,
    inner_product,
    majorana_plane_wave,
    majorana_residual,
    signed_coordinates,
    state_from_json,
    state_to_json,
)
from .engine import (
    SpacetimeRecord,
    WalkOperatorSpec,
    apply_coin,
    apply_half_shift,
    apply_shift,
    dense_walk_matrix,
    evolve,
    step,
    write_spacetime_csv,
    write_spacetime_sidecar,
)
from .momentum import (
    MomentumBlock,
    ScalingReport,
    dispersion_omega,
    eigenphases,
    exact_step_block,
    max_group_velocity,
    order_fit,
    step_error,
    walk_block,
)
from .observables import (
    BlochSweepResult,
    alpha_shift,
    bloch_sweep,
    chirality_probabilities,
    entanglement_entropy,
    expectation_x,
    position_distribution,
    reduced_coin_density,
    x_moment_form,
)
from .circuits import (
    Gate,
    GateProgram,
    compile_decrement,
    compile_increment,
    compile_state_prep,
    compile_step,
    compile_walk_circuit,
    export_qasm,
    gate_count_report,
    grid_to_statevector,
    parse_qasm,
    simulate,
    statevector_to_grid,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
