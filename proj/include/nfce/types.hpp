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

#include <Eigen/Dense>
#include <complex>

namespace nfce
{

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Point = Eigen::Vector2d;

inline constexpr double speed_of_light = 299792458.0; // m/s

// Column-major vectorization, vec(H)[m*n_r + n] = H(n, m).
inline CVec vec(const CMat &h)
{
    return Eigen::Map<const CVec>(h.data(), h.size());
}

// Inverse of vec(): reshape a length n_r*n_t vector into an n_r x n_t matrix.
inline CMat unvec(const CVec &h, Eigen::Index n_r, Eigen::Index n_t)
{
    if (h.size() != n_r * n_t)
        throw std::invalid_argument("unvec: vector length does not match n_r*n_t");
    return Eigen::Map<const CMat>(h.data(), n_r, n_t);
}

} // namespace nfce
