// SPDX-License-Identifier: Apache-2.0
//
// nfce - near-field XL-MIMO channel estimation library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "channel.hpp"
#include "codebook.hpp"
#include "sensing.hpp"

#include <optional>

namespace nfce
{

/// 10*log10(||H_hat - H||_F^2 / ||H||_F^2) for one realization.
/// Returns -inf for an exact match; throws for a zero true channel.
double nmse_db(const CMat &h_hat, const CMat &h);

/// Correlation statistic per codeword: |psi_j^H (Phi^H y)|^2.
/// Returns (x_hat, y_hat, argmax index); ties resolve to the lowest index.
/// The codebook must be Spherical (the meta carries the coordinate mapping).
struct CoarseLocation
{
    double x_hat = 0.0;
    double y_hat = 0.0;
    int index = 0;
};

CoarseLocation coarse_localize(const MeasurementEnsemble &ensemble, const Codebook &polar);

/// Same statistic evaluated over the Kronecker grid in factored form,
/// |b_R^H unvec(Phi^H y) conj(b_T)|^2; equals coarse_localize on the
/// materialized codebook with TX-major column ordering.
struct FactoredLocation
{
    double x_hat = 0.0;
    double y_hat = 0.0;
    int tx_index = 0;
    int rx_index = 0;
};

FactoredLocation coarse_localize_factored(const MeasurementEnsemble &ensemble,
                                          const PolarSideAtoms &tx, const PolarSideAtoms &rx);

struct EstimatorSettings
{
    double mu = 0.4;       // compression ratio, tau = floor(mu * n_t * n_r)
    double snr_db = 20.0;  // +inf = noiseless
    double beta = 1.0;     // baseline-codebook / fallback oversampling
    double beta_loc = 0.0; // localization grid oversampling; <= 0 follows beta
    int max_iters = 30;    // total iteration budget I (localization counts as 1)
    double epsilon = -1.0; // residual bound; negative = noise-calibrated default
    double stall_factor = 8.0;
    double r_min = 1.0; // polar grid distance range
    double r_max = 20.0;
    bool per_iteration_nmse = true;
};

struct LocalizationInfo
{
    double x_hat = 0.0;
    double y_hat = 0.0;
    double error = 0.0; // distance to the true UE center
};

struct EstimationReport
{
    CMat h_hat;
    double nmse_db = 0.0;
    std::vector<int> support;
    std::vector<double> per_iteration_nmse_db;
    std::optional<LocalizationInfo> localization;
    CodebookKind codebook_kind = CodebookKind::Dpss;
    long codebook_size = 0;
    bool fallback_spherical = false;
};

/// Two-step scheme: coarse polar localization (iteration 1; the estimate is
/// the least-squares rank-one fit of the selected polar codeword), then OMP
/// with the DPSS eigen-codebook anchored at the estimate for the remaining
/// I-1 iterations. Falls back to spherical-only OMP (flagged) when the
/// estimate yields an invalid kernel.
EstimationReport estimate_two_step(const ChannelRealization &channel,
                                   const ScenarioGeometry &geom,
                                   const EstimatorSettings &settings, std::uint64_t seed);

/// Single-codebook OMP estimation with the same training construction.
EstimationReport estimate_baseline(const ChannelRealization &channel,
                                   const ScenarioGeometry &geom, const Codebook &codebook,
                                   const EstimatorSettings &settings, std::uint64_t seed);

/// Localization-error-injection mode: bypasses the coarse localization and
/// runs all I iterations of OMP with the DPSS codebook anchored at the given
/// coordinate.
EstimationReport estimate_with_injected_localization(const ChannelRealization &channel,
                                                     const ScenarioGeometry &geom,
                                                     const Point &anchor,
                                                     const EstimatorSettings &settings,
                                                     std::uint64_t seed);

/// Sorted sparse-representation magnitudes |Psi^+ vec(H)| (adjoint for the
/// unitary DPSS codebook, minimum-norm least squares otherwise) and the
/// cumulative energy fraction curve.
struct SparsityProfile
{
    Vec sorted_magnitudes;  // descending
    Vec cumulative_energy;  // fractions in (0, 1]
};

SparsityProfile sparsification_profile(const CMat &h, const Codebook &codebook);

/// Number of leading profile coefficients needed to reach the energy fraction.
int coefficients_for_energy(const SparsityProfile &profile, double fraction);

} // namespace nfce
