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

#include "nfce/channel.hpp"

#include "nfce/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace nfce
{

cplx scalar_impulse_response(const Point &p_t, const Point &p_r, double kappa)
{
    double d = (p_r - p_t).norm();
    if (d <= 0.0)
        throw std::domain_error("scalar_impulse_response: coincident points");
    return std::polar(1.0 / d, -kappa * d);
}

CMat los_channel(const ScenarioGeometry &geom)
{
    const int n_t = geom.n_t();
    const int n_r = geom.n_r();
    CMat h(n_r, n_t);
    for (int m = 0; m < n_t; ++m)
        for (int n = 0; n < n_r; ++n)
            h(n, m) = scalar_impulse_response(geom.bs_elements[m], geom.ue_elements[n],
                                              geom.wavenumber);
    return h;
}

ChannelRealization rician_channel(const ScenarioGeometry &geom, double k_db, std::uint64_t seed)
{
    if (std::isnan(k_db))
        throw std::invalid_argument("rician_channel: k_db must not be NaN");

    ChannelRealization ch;
    ch.h_los = los_channel(geom);

    const int n_t = geom.n_t();
    const int n_r = geom.n_r();
    const double sigma2 = 1.0 / (static_cast<double>(n_t) * n_r);

    Rng rng(seed);
    ch.h_nlos.resize(n_r, n_t);
    for (int m = 0; m < n_t; ++m)
        for (int n = 0; n < n_r; ++n)
            ch.h_nlos(n, m) = rng.complex_normal(sigma2);

    if (std::isinf(k_db))
    {
        if (k_db > 0)
        {
            ch.rician_k = std::numeric_limits<double>::infinity();
            ch.h_full = ch.h_los;
        }
        else
        {
            ch.rician_k = 0.0;
            ch.h_full = ch.h_nlos;
        }
        return ch;
    }

    double k = std::pow(10.0, k_db / 10.0);
    ch.rician_k = k;
    ch.h_full = std::sqrt(k / (1.0 + k)) * ch.h_los + std::sqrt(1.0 / (1.0 + k)) * ch.h_nlos;
    return ch;
}

} // namespace nfce
