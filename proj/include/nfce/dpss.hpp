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

/// Symmetric Toeplitz sinc (Slepian) kernel.
///
/// Entry(m, m') = sin(2*pi*W*(m-m')) / (pi*(m-m')) for m != m', diagonal 2*W,
/// where W is the normalized half-bandwidth in (0, 1/2). PSD with eigenvalues
/// in [0, 1] and trace 2*W*n.
struct SincKernel
{
    Mat matrix;
    double half_bandwidth = 0.0;
};

/// Throws std::domain_error unless 0 < w < 1/2.
SincKernel sinc_kernel(int n, double w);

/// Orthonormal eigenbasis of a sinc kernel, eigenvalues sorted descending
/// (stable in the original index on ties). Sign convention: the first
/// component of each eigenvector with magnitude above 1e-9 is positive.
struct DpssBasis
{
    Mat vectors;     // n x n, column k = order-k sequence
    Vec eigenvalues; // descending, in [0, 1] up to rounding
};

/// Throws std::runtime_error with kernel diagnostics if the eigensolver fails
/// or an eigenpair residual exceeds 1e-8.
DpssBasis dpss_sequences(const SincKernel &kernel);

/// Diagonal compensation entries exp(j*kappa*x_m^2 / (2*y_hat)), unit modulus.
/// Throws std::domain_error for y_hat <= 0.
CVec compensation_matrix(const std::vector<double> &element_x, double y_hat, double kappa);

} // namespace nfce
