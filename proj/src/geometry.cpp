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

#include "nfce/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace nfce
{

std::vector<double> ScenarioGeometry::bs_x() const
{
    std::vector<double> x(bs_elements.size());
    for (std::size_t i = 0; i < bs_elements.size(); ++i)
        x[i] = bs_elements[i].x();
    return x;
}

ScenarioGeometry make_geometry(int n_t, int n_r, double carrier_hz, const Point &ue_center,
                               double ue_rotation)
{
    if (n_t < 1 || n_r < 1)
        throw std::invalid_argument("make_geometry: antenna counts must be positive");
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("make_geometry: carrier frequency must be positive");
    if (!(ue_center.y() > 0.0))
        throw std::invalid_argument("make_geometry: UE center must satisfy y > 0");

    ScenarioGeometry geom;
    geom.wavelength = speed_of_light / carrier_hz;
    geom.wavenumber = 2.0 * M_PI / geom.wavelength;
    geom.ue_center = ue_center;
    geom.ue_rotation = ue_rotation;

    double d = geom.wavelength / 2.0;
    geom.bs_elements.reserve(n_t);
    for (int m = 0; m < n_t; ++m)
    {
        double x = (m - (n_t - 1) / 2.0) * d;
        geom.bs_elements.emplace_back(x, 0.0);
    }

    Point axis{std::cos(ue_rotation), std::sin(ue_rotation)};
    geom.ue_elements.reserve(n_r);
    for (int n = 0; n < n_r; ++n)
    {
        double off = (n - (n_r - 1) / 2.0) * d;
        geom.ue_elements.emplace_back(ue_center + off * axis);
    }
    return geom;
}

} // namespace nfce
