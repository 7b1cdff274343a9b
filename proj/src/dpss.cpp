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

#include "nfce/dpss.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nfce
{

SincKernel sinc_kernel(int n, double w)
{
    if (n < 1)
        throw std::invalid_argument("sinc_kernel: n must be positive");
    if (!(w > 0.0) || !(w < 0.5))
        throw std::domain_error("sinc_kernel: half-bandwidth must lie in (0, 1/2)");

    SincKernel kernel;
    kernel.half_bandwidth = w;
    kernel.matrix.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
        {
            int d = i - j;
            double v = d == 0 ? 2.0 * w : std::sin(2.0 * M_PI * w * d) / (M_PI * d);
            kernel.matrix(i, j) = v;
            kernel.matrix(j, i) = v;
        }
    return kernel;
}

DpssBasis dpss_sequences(const SincKernel &kernel)
{
    const auto n = kernel.matrix.rows();
    Eigen::SelfAdjointEigenSolver<Mat> solver(kernel.matrix);
    if (solver.info() != Eigen::Success)
    {
        std::ostringstream msg;
        msg << "dpss_sequences: eigensolver failed for n=" << n
            << ", w=" << kernel.half_bandwidth;
        throw std::runtime_error(msg.str());
    }

    DpssBasis basis;
    basis.vectors.resize(n, n);
    basis.eigenvalues.resize(n);

    // SelfAdjointEigenSolver sorts ascending; reverse for descending order.
    for (Eigen::Index k = 0; k < n; ++k)
    {
        basis.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
        basis.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }

    // Sign convention: first component with magnitude above 1e-9 is positive.
    for (Eigen::Index k = 0; k < n; ++k)
    {
        for (Eigen::Index i = 0; i < n; ++i)
        {
            double v = basis.vectors(i, k);
            if (std::abs(v) > 1e-9)
            {
                if (v < 0.0)
                    basis.vectors.col(k) = -basis.vectors.col(k);
                break;
            }
        }
    }

    for (Eigen::Index k = 0; k < n; ++k)
    {
        double resid =
            (kernel.matrix * basis.vectors.col(k) - basis.eigenvalues(k) * basis.vectors.col(k))
                .norm();
        if (resid > 1e-8)
        {
            std::ostringstream msg;
            msg << "dpss_sequences: eigenpair residual " << resid << " for order " << k
                << " (n=" << n << ", w=" << kernel.half_bandwidth << ")";
            throw std::runtime_error(msg.str());
        }
    }
    return basis;
}

CVec compensation_matrix(const std::vector<double> &element_x, double y_hat, double kappa)
{
    if (!(y_hat > 0.0))
        throw std::domain_error("compensation_matrix: y_hat must be positive");
    CVec d(static_cast<Eigen::Index>(element_x.size()));
    for (std::size_t i = 0; i < element_x.size(); ++i)
        d(static_cast<Eigen::Index>(i)) =
            std::polar(1.0, kappa * element_x[i] * element_x[i] / (2.0 * y_hat));
    return d;
}

} // namespace nfce
