"""Python access to the electrons-on-helium Ising chain library."""

from ._core import (
    DEFAULT_SEED,
    ConfigError,
    DeviceGeometry,
    HeliumError,
    InvalidArgument,
    __version__,
    average_kink_signal,
    characterize_well,
    coupling_J,
    derive_parameters,
    electrode_field,
    free_fermion_spectrum,
    ground_energy,
    kink_signal,
    longitudinal_gamma,
    normalize_config,
    pair_potential,
    quench_kink_density,
    run_config,
    solve_1d,
    susceptibility,
    wkb_splitting,
)
