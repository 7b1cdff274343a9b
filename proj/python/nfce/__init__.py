# SPDX-License-Identifier: Apache-2.0
"""Near-field XL-MIMO channel synthesis, sparsifying codebooks (DFT,
polar-domain spherical, DPSS eigen-codebook) and compressive channel
estimation."""

from nfce._core import (  # noqa: F401
    ChannelRealization,
    CoarseLocation,
    Codebook,
    CodebookKind,
    DpssBasis,
    EstimationReport,
    EstimatorSettings,
    LocalizationInfo,
    MeasurementEnsemble,
    OmpOptions,
    OmpResult,
    ScenarioGeometry,
    SincKernel,
    SparsityProfile,
    coarse_localize,
    coefficients_for_energy,
    compensation_matrix,
    default_config_json,
    derive_seed,
    desk_scale_config_json,
    dft_codebook,
    dpss_codebook,
    dpss_codebook_valid,
    dpss_sequences,
    estimate_baseline,
    estimate_two_step,
    estimate_with_injected_localization,
    generate_training,
    gram_map,
    load_codebook,
    los_channel,
    make_geometry,
    nmse_db,
    omp,
    reconstruct_channel,
    rician_channel,
    run_sweep_json,
    save_codebook,
    scalar_impulse_response,
    sinc_kernel,
    sparsification_profile,
)

__version__ = "0.1.0"
