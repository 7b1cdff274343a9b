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

#include "geometry.hpp"
#include "types.hpp"

#include <cstdint>

namespace nfce
{

/// Normalized scalar spherical-wave response between two points,
/// g(p_t, p_r) = exp(-j*kappa*||r||) / ||r|| with r = p_r - p_t.
/// The free-space constant j*kappa*Z0/(4*pi) is divided out.
/// Throws std::domain_error for coincident points.
cplx scalar_impulse_response(const Point &p_t, const Point &p_r, double kappa);

/// Line-of-sight channel matrix: H(n, m) = g(bs_m, ue_n), size N_R x N_T.
CMat los_channel(const ScenarioGeometry &geom);

/// Rician channel: composite, LoS and NLoS parts plus the linear K factor.
struct ChannelRealization
{
    CMat h_full;
    CMat h_los;
    CMat h_nlos;
    double rician_k = 0.0; // linear ratio, may be +inf
};

/// H = sqrt(K/(1+K)) * H_LoS + sqrt(1/(1+K)) * H_NLoS with NLoS entries
/// i.i.d. CN(0, 1/(N_T*N_R)), drawn column-major. k_db = +inf gives the pure
/// LoS channel, k_db = -inf the pure NLoS (Rayleigh) channel. Deterministic
/// for a fixed seed.
ChannelRealization rician_channel(const ScenarioGeometry &geom, double k_db, std::uint64_t seed);

} // namespace nfce
