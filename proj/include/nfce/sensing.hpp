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

#include "codebook.hpp"
#include "types.hpp"

#include <cstdint>
#include <vector>

namespace nfce
{

/// Stacked training measurements y = Phi * vec(H) + n over tau slots.
/// Row t of Phi is f_t^T kron w_t for that slot's unit-norm random-phase
/// beams (single RF chain and stream on both sides), so row norms are 1.
struct MeasurementEnsemble
{
    CMat phi;  // tau x (n_r*n_t)
    CVec y;    // tau
    double noise_var = 0.0;
    int slots = 0;
    double compression_ratio = 0.0; // tau / (n_r*n_t)
};

/// Synthesizes one training phase. Beam phases are uniform on [0, 2*pi); the
/// noise variance is set so that mean_t |w_t^T H f_t|^2 / sigma_n^2 equals the
/// target SNR (snr_db = +inf gives the exact noiseless model y = Phi vec(H)).
/// Deterministic for a fixed seed. Throws std::invalid_argument for tau < 1.
MeasurementEnsemble generate_training(const CMat &h, int tau, double snr_db, std::uint64_t seed);

struct OmpOptions
{
    int max_iters = 1;
    /// Residual bound; negative means the default 1e-6 * ||y||.
    double epsilon = -1.0;
    /// Optional stall stop: if > 0, stop (and drop the last atom) when the
    /// residual-energy improvement falls below stall_factor * ||r||^2 /
    /// (tau - s), the level expected from fitting the best of pure-noise
    /// correlations. 0 disables (the spec-basic behavior).
    double stall_factor = 0.0;
    /// Keep the least-squares coefficients of every iteration (for
    /// per-iteration reconstruction traces).
    bool keep_history = false;
};

struct OmpResult
{
    CVec sparse_vector;               // length M, support-sparse
    std::vector<int> support;         // selection order
    std::vector<double> residual_trace; // ||r|| after each kept iteration
    int iterations_used = 0;
    bool rank_deficient = false; // some support system was rank-deficient
    std::vector<CVec> coefficient_history; // per iteration, when requested
};

/// Orthogonal matching pursuit on the effective dictionary A = Phi * Psi,
/// evaluated in factored form. Per iteration: pick argmax_j |A[:,j]^H r| over
/// unselected atoms (ties to the lowest index), re-solve least squares on the
/// support (minimum-norm when rank-deficient, flagged), update the residual.
/// Stops at ||r|| <= epsilon or after max_iters iterations.
OmpResult omp(const MeasurementEnsemble &ensemble, const Codebook &codebook,
              const OmpOptions &options);

/// H_hat = unvec(Psi * h_tilde), column-major.
CMat reconstruct_channel(const OmpResult &result, const Codebook &codebook, int n_r, int n_t);

} // namespace nfce
