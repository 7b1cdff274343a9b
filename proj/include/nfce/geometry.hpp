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

#include "types.hpp"

#include <vector>

namespace nfce
{

/// 2-D scene with two half-wavelength-spaced linear arrays.
///
/// The BS array lies on the x-axis, symmetric about the origin. The UE array
/// is collinear about `ue_center`; with `ue_rotation` = 0 it is parallel to
/// the BS array. All lengths in meters, angles in radians.
struct ScenarioGeometry
{
    double wavelength = 0.0;
    double wavenumber = 0.0; // 2*pi / wavelength
    std::vector<Point> bs_elements;
    std::vector<Point> ue_elements;
    Point ue_center{0.0, 0.0};
    double ue_rotation = 0.0;

    int n_t() const { return static_cast<int>(bs_elements.size()); }
    int n_r() const { return static_cast<int>(ue_elements.size()); }

    // (N - 1) * lambda / 2
    double bs_aperture() const { return (n_t() - 1) * wavelength / 2.0; }
    double ue_aperture() const { return (n_r() - 1) * wavelength / 2.0; }

    // BS element x-coordinates (y = 0 for all)
    std::vector<double> bs_x() const;
};

/// Builds the geometry for a scenario config record.
/// Throws std::invalid_argument for non-positive counts/carrier or a UE
/// center that is not strictly in front of the BS array (y <= 0).
ScenarioGeometry make_geometry(int n_t, int n_r, double carrier_hz, const Point &ue_center,
                               double ue_rotation = 0.0);

} // namespace nfce
