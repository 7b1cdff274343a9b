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

#include "nfce/sensing.hpp"

#include "nfce/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace nfce
{

MeasurementEnsemble generate_training(const CMat &h, int tau, double snr_db, std::uint64_t seed)
{
    if (tau < 1)
        throw std::invalid_argument("generate_training: tau must be >= 1");
    const int n_r = static_cast<int>(h.rows());
    const int n_t = static_cast<int>(h.cols());
    const Eigen::Index dim = static_cast<Eigen::Index>(n_r) * n_t;

    Rng rng(seed);
    MeasurementEnsemble ens;
    ens.slots = tau;
    ens.compression_ratio = static_cast<double>(tau) / static_cast<double>(dim);
    ens.phi.resize(tau, dim);
    ens.y.resize(tau);

    std::vector<CVec> combiners(tau);
    CVec clean(tau);
    CVec f(n_t), w(n_r);
    const double f_mag = 1.0 / std::sqrt(static_cast<double>(n_t));
    const double w_mag = 1.0 / std::sqrt(static_cast<double>(n_r));

    // Draw order: per slot, f phases then w phases; noise (if any) is drawn
    // after all slots once the signal power is known.
    for (int t = 0; t < tau; ++t)
    {
        for (int m = 0; m < n_t; ++m)
            f(m) = std::polar(f_mag, rng.phase());
        for (int n = 0; n < n_r; ++n)
            w(n) = std::polar(w_mag, rng.phase());
        for (int m = 0; m < n_t; ++m)
            ens.phi.row(t).segment(static_cast<Eigen::Index>(m) * n_r, n_r) =
                f(m) * w.transpose();
        clean(t) = w.transpose() * h * f; // w^T H f == phi_t * vec(H)
        combiners[t] = w;
    }

    if (std::isinf(snr_db) && snr_db > 0)
    {
        ens.noise_var = 0.0;
        ens.y = clean;
        return ens;
    }

    double p_sig = clean.squaredNorm() / tau;
    ens.noise_var = p_sig > 0.0 ? p_sig / std::pow(10.0, snr_db / 10.0) : 0.0;
    ens.y = clean;
    for (int t = 0; t < tau; ++t)
    {
        CVec n(n_r);
        for (int k = 0; k < n_r; ++k)
            n(k) = rng.complex_normal(ens.noise_var);
        ens.y(t) += combiners[t].transpose() * n;
    }
    return ens;
}

OmpResult omp(const MeasurementEnsemble &ensemble, const Codebook &codebook,
              const OmpOptions &options)
{
    if (codebook.size() == 0)
        throw std::invalid_argument("omp: empty codebook");
    if (options.max_iters < 1)
        throw std::invalid_argument("omp: max_iters must be >= 1");

    const Eigen::Index tau = ensemble.y.size();
    const Eigen::Index m_atoms = codebook.size();
    const double eps = options.epsilon < 0.0 ? 1e-6 * ensemble.y.norm() : options.epsilon;

    OmpResult res;
    res.sparse_vector = CVec::Zero(m_atoms);

    CVec r = ensemble.y;
    CMat a_support(tau, 0);
    CVec coef;
    std::vector<char> selected(static_cast<std::size_t>(m_atoms), 0);

    for (int it = 0; it < options.max_iters; ++it)
    {
        if (r.norm() <= eps)
            break;

        // correlations of A = Phi * Psi in factored form
        CVec back = ensemble.phi.adjoint() * r;
        CVec corr = codebook.matrix.adjoint() * back;

        int best = -1;
        double best_mag = 0.0;
        for (Eigen::Index j = 0; j < m_atoms; ++j)
        {
            if (selected[static_cast<std::size_t>(j)])
                continue;
            double mag = std::abs(corr(j));
            if (mag > best_mag)
            {
                best_mag = mag;
                best = static_cast<int>(j);
            }
        }
        if (best < 0 || best_mag == 0.0)
            break;

        double prev_energy = r.squaredNorm();

        CMat a_next(tau, a_support.cols() + 1);
        a_next.leftCols(a_support.cols()) = a_support;
        a_next.col(a_support.cols()) = ensemble.phi * codebook.matrix.col(best);

        Eigen::CompleteOrthogonalDecomposition<CMat> cod(a_next);
        CVec coef_next = cod.solve(ensemble.y);
        bool deficient = cod.rank() < a_next.cols();
        CVec r_next = ensemble.y - a_next * coef_next;
        double cur_energy = r_next.squaredNorm();

        int s = static_cast<int>(a_next.cols());
        if (options.stall_factor > 0.0 && it > 0 && tau - s > 0 &&
            (prev_energy - cur_energy) < options.stall_factor * prev_energy / (tau - s))
            break; // stalled: drop this atom and stop

        a_support = std::move(a_next);
        coef = std::move(coef_next);
        r = std::move(r_next);
        res.support.push_back(best);
        selected[static_cast<std::size_t>(best)] = 1;
        res.rank_deficient = res.rank_deficient || deficient;
        res.residual_trace.push_back(std::sqrt(cur_energy));
        if (options.keep_history)
            res.coefficient_history.push_back(coef);
    }

    res.iterations_used = static_cast<int>(res.support.size());
    for (std::size_t k = 0; k < res.support.size(); ++k)
        res.sparse_vector(res.support[k]) = coef(static_cast<Eigen::Index>(k));
    return res;
}

CMat reconstruct_channel(const OmpResult &result, const Codebook &codebook, int n_r, int n_t)
{
    if (codebook.matrix.rows() != static_cast<Eigen::Index>(n_r) * n_t)
        throw std::invalid_argument("reconstruct_channel: dimension mismatch");
    if (result.sparse_vector.size() != codebook.size())
        throw std::invalid_argument("reconstruct_channel: sparse vector length mismatch");
    // sum over the support only
    CVec h = CVec::Zero(codebook.matrix.rows());
    for (int j : result.support)
        h += codebook.matrix.col(j) * result.sparse_vector(j);
    return unvec(h, n_r, n_t);
}

} // namespace nfce
