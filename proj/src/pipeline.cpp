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

#include "nfce/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace nfce
{

namespace
{

constexpr double nmse_floor_db = -300.0;

double clamp_nmse(double db)
{
    return std::isinf(db) && db < 0 ? nmse_floor_db : std::max(db, nmse_floor_db);
}

int training_slots(double mu, const ScenarioGeometry &geom)
{
    int n = geom.n_t() * geom.n_r();
    int tau = static_cast<int>(std::floor(mu * n));
    if (tau < 1)
        throw std::invalid_argument("estimator: mu too small, tau < 1");
    return tau;
}

double resolve_epsilon(const EstimatorSettings &settings, const MeasurementEnsemble &ens)
{
    if (settings.epsilon >= 0.0)
        return settings.epsilon;
    // noise-calibrated default: the expected noise norm; 1e-6*||y|| when
    // noiseless
    if (ens.noise_var > 0.0)
        return std::sqrt(ens.noise_var * ens.slots);
    return 1e-6 * ens.y.norm();
}

// NMSE after each OMP iteration, reconstructing from the coefficient history.
std::vector<double> trace_from_history(const OmpResult &omp_result, const Codebook &codebook,
                                       const CMat &h_true)
{
    std::vector<double> out;
    out.reserve(omp_result.coefficient_history.size());
    const int n_r = static_cast<int>(h_true.rows());
    const int n_t = static_cast<int>(h_true.cols());
    for (std::size_t it = 0; it < omp_result.coefficient_history.size(); ++it)
    {
        const CVec &coef = omp_result.coefficient_history[it];
        CVec h = CVec::Zero(codebook.matrix.rows());
        for (Eigen::Index k = 0; k < coef.size(); ++k)
            h += codebook.matrix.col(omp_result.support[static_cast<std::size_t>(k)]) * coef(k);
        out.push_back(clamp_nmse(nmse_db(unvec(h, n_r, n_t), h_true)));
    }
    return out;
}

} // namespace

double nmse_db(const CMat &h_hat, const CMat &h)
{
    if (h_hat.rows() != h.rows() || h_hat.cols() != h.cols())
        throw std::invalid_argument("nmse_db: shape mismatch");
    double denom = h.squaredNorm();
    if (denom <= 0.0)
        throw std::invalid_argument("nmse_db: zero true channel");
    double err = (h_hat - h).squaredNorm();
    if (err == 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(err / denom);
}

CoarseLocation coarse_localize(const MeasurementEnsemble &ensemble, const Codebook &polar)
{
    if (polar.kind != CodebookKind::Spherical)
        throw std::invalid_argument("coarse_localize: codebook must be spherical");
    if (polar.size() == 0)
        throw std::invalid_argument("coarse_localize: empty codebook");

    CVec back = ensemble.phi.adjoint() * ensemble.y;
    CVec corr = polar.matrix.adjoint() * back;

    int best = 0;
    double best_stat = -1.0;
    for (Eigen::Index j = 0; j < corr.size(); ++j)
    {
        double stat = std::norm(corr(j));
        if (stat > best_stat)
        {
            best_stat = stat;
            best = static_cast<int>(j);
        }
    }
    const auto &meta = std::get<SphericalMeta>(polar.meta[static_cast<std::size_t>(best)]);
    return CoarseLocation{meta.candidate.x(), meta.candidate.y(), best};
}

FactoredLocation coarse_localize_factored(const MeasurementEnsemble &ensemble,
                                          const PolarSideAtoms &tx, const PolarSideAtoms &rx)
{
    const Eigen::Index n_r = rx.atoms.rows();
    const Eigen::Index n_t = tx.atoms.rows();
    CVec back = ensemble.phi.adjoint() * ensemble.y;
    CMat e = unvec(back, n_r, n_t);
    // statistic(i, j) = |b_R[j]^H E conj(b_T[i])|^2, TX-major tie-breaking
    CMat s = rx.atoms.adjoint() * e * tx.atoms.conjugate(); // (rx atoms) x (tx atoms)

    Eigen::Index best_t = 0, best_r = 0;
    double best_stat = -1.0;
    for (Eigen::Index i = 0; i < s.cols(); ++i)
        for (Eigen::Index j = 0; j < s.rows(); ++j)
        {
            double stat = std::norm(s(j, i));
            if (stat > best_stat)
            {
                best_stat = stat;
                best_t = i;
                best_r = j;
            }
        }

    double ang = tx.angle[static_cast<std::size_t>(best_t)];
    double dist = tx.distance[static_cast<std::size_t>(best_t)];
    return FactoredLocation{dist * std::sin(ang), dist * std::cos(ang),
                            static_cast<int>(best_t), static_cast<int>(best_r)};
}

EstimationReport estimate_two_step(const ChannelRealization &channel,
                                   const ScenarioGeometry &geom,
                                   const EstimatorSettings &settings, std::uint64_t seed)
{
    if (settings.max_iters < 1)
        throw std::invalid_argument("estimate_two_step: need at least one iteration");

    int tau = training_slots(settings.mu, geom);
    MeasurementEnsemble ens = generate_training(channel.h_full, tau, settings.snr_db, seed);
    double eps = resolve_epsilon(settings, ens);

    double beta_loc = settings.beta_loc > 0.0 ? settings.beta_loc : settings.beta;
    int g_t = static_cast<int>(std::ceil(beta_loc * std::sqrt(static_cast<double>(geom.n_t()))));
    int g_r = static_cast<int>(std::ceil(beta_loc * std::sqrt(static_cast<double>(geom.n_r()))));
    PolarSideAtoms tx = polar_side_atoms(geom.n_t(), geom.wavelength, geom.wavenumber, g_t,
                                         settings.r_min, settings.r_max);
    PolarSideAtoms rx = polar_side_atoms(geom.n_r(), geom.wavelength, geom.wavenumber, g_r,
                                         settings.r_min, settings.r_max);
    FactoredLocation loc = coarse_localize_factored(ens, tx, rx);

    EstimationReport report;
    report.codebook_kind = CodebookKind::Dpss;
    report.localization =
        LocalizationInfo{loc.x_hat, loc.y_hat,
                         (Point{loc.x_hat, loc.y_hat} - geom.ue_center).norm()};

    // Iteration 1: least-squares rank-one fit of the selected polar codeword.
    CVec atom(static_cast<Eigen::Index>(geom.n_t()) * geom.n_r());
    for (int m = 0; m < geom.n_t(); ++m)
        atom.segment(static_cast<Eigen::Index>(m) * geom.n_r(), geom.n_r()) =
            tx.atoms(m, loc.tx_index) * rx.atoms.col(loc.rx_index);
    CVec a = ens.phi * atom;
    cplx gain = a.squaredNorm() > 0.0 ? cplx(a.dot(ens.y)) / a.squaredNorm() : cplx(0.0);
    // Eigen's dot conjugates the first argument: gain = a^H y / a^H a
    CMat h1 = unvec(CVec(atom * gain), geom.n_r(), geom.n_t());

    report.h_hat = h1;
    if (settings.per_iteration_nmse)
        report.per_iteration_nmse_db.push_back(clamp_nmse(nmse_db(h1, channel.h_full)));

    if (settings.max_iters > 1)
    {
        OmpOptions opt;
        opt.max_iters = settings.max_iters - 1;
        opt.epsilon = eps;
        opt.stall_factor = settings.stall_factor;
        opt.keep_history = settings.per_iteration_nmse;

        if (dpss_codebook_valid(geom, loc.x_hat, loc.y_hat))
        {
            Codebook eigen_cb = dpss_codebook(geom, loc.x_hat, loc.y_hat);
            OmpResult res = omp(ens, eigen_cb, opt);
            report.support = res.support;
            report.codebook_size = eigen_cb.size();
            if (res.iterations_used > 0)
                report.h_hat = reconstruct_channel(res, eigen_cb, geom.n_r(), geom.n_t());
            if (settings.per_iteration_nmse)
                for (double v : trace_from_history(res, eigen_cb, channel.h_full))
                    report.per_iteration_nmse_db.push_back(v);
        }
        else
        {
            // anchor invalid: spherical-only estimation, flagged
            report.fallback_spherical = true;
            Codebook sph = spherical_codebook(geom, settings.beta, settings.r_min,
                                              settings.r_max);
            OmpResult res = omp(ens, sph, opt);
            report.support = res.support;
            report.codebook_size = sph.size();
            if (res.iterations_used > 0)
                report.h_hat = reconstruct_channel(res, sph, geom.n_r(), geom.n_t());
            if (settings.per_iteration_nmse)
                for (double v : trace_from_history(res, sph, channel.h_full))
                    report.per_iteration_nmse_db.push_back(v);
        }
    }
    if (report.codebook_size == 0)
        report.codebook_size = static_cast<long>(geom.n_t()) * geom.n_r();

    report.nmse_db = clamp_nmse(nmse_db(report.h_hat, channel.h_full));
    return report;
}

EstimationReport estimate_baseline(const ChannelRealization &channel,
                                   const ScenarioGeometry &geom, const Codebook &codebook,
                                   const EstimatorSettings &settings, std::uint64_t seed)
{
    int tau = training_slots(settings.mu, geom);
    MeasurementEnsemble ens = generate_training(channel.h_full, tau, settings.snr_db, seed);

    OmpOptions opt;
    opt.max_iters = settings.max_iters;
    opt.epsilon = resolve_epsilon(settings, ens);
    opt.stall_factor = settings.stall_factor;
    opt.keep_history = settings.per_iteration_nmse;
    OmpResult res = omp(ens, codebook, opt);

    EstimationReport report;
    report.codebook_kind = codebook.kind;
    report.codebook_size = codebook.size();
    report.support = res.support;
    report.h_hat = res.iterations_used > 0
                       ? reconstruct_channel(res, codebook, geom.n_r(), geom.n_t())
                       : CMat::Zero(geom.n_r(), geom.n_t());
    if (settings.per_iteration_nmse)
        report.per_iteration_nmse_db = trace_from_history(res, codebook, channel.h_full);
    report.nmse_db = clamp_nmse(nmse_db(report.h_hat, channel.h_full));
    return report;
}

EstimationReport estimate_with_injected_localization(const ChannelRealization &channel,
                                                     const ScenarioGeometry &geom,
                                                     const Point &anchor,
                                                     const EstimatorSettings &settings,
                                                     std::uint64_t seed)
{
    int tau = training_slots(settings.mu, geom);
    MeasurementEnsemble ens = generate_training(channel.h_full, tau, settings.snr_db, seed);

    OmpOptions opt;
    opt.max_iters = settings.max_iters;
    opt.epsilon = resolve_epsilon(settings, ens);
    opt.stall_factor = settings.stall_factor;
    opt.keep_history = settings.per_iteration_nmse;

    EstimationReport report;
    report.codebook_kind = CodebookKind::Dpss;
    report.localization =
        LocalizationInfo{anchor.x(), anchor.y(), (anchor - geom.ue_center).norm()};

    Codebook cb;
    if (dpss_codebook_valid(geom, anchor.x(), anchor.y()))
    {
        cb = dpss_codebook(geom, anchor.x(), anchor.y());
    }
    else
    {
        report.fallback_spherical = true;
        cb = spherical_codebook(geom, settings.beta, settings.r_min, settings.r_max);
    }
    OmpResult res = omp(ens, cb, opt);
    report.support = res.support;
    report.codebook_size = cb.size();
    report.h_hat = res.iterations_used > 0 ? reconstruct_channel(res, cb, geom.n_r(), geom.n_t())
                                           : CMat::Zero(geom.n_r(), geom.n_t());
    if (settings.per_iteration_nmse)
        report.per_iteration_nmse_db = trace_from_history(res, cb, channel.h_full);
    report.nmse_db = clamp_nmse(nmse_db(report.h_hat, channel.h_full));
    return report;
}

SparsityProfile sparsification_profile(const CMat &h, const Codebook &codebook)
{
    if (codebook.size() == 0)
        throw std::invalid_argument("sparsification_profile: empty codebook");
    if (codebook.matrix.rows() != h.size())
        throw std::invalid_argument("sparsification_profile: dimension mismatch");

    CVec hv = vec(h);
    CVec coeffs;
    if (codebook.kind == CodebookKind::Dpss)
    {
        coeffs = codebook.matrix.adjoint() * hv; // unitary: adjoint = pseudo-inverse
    }
    else
    {
        Eigen::CompleteOrthogonalDecomposition<CMat> cod(codebook.matrix);
        if (cod.rank() == 0)
            throw std::runtime_error("sparsification_profile: pseudo-inverse failed");
        coeffs = cod.solve(hv); // minimum-norm least squares
    }

    SparsityProfile profile;
    profile.sorted_magnitudes = coeffs.cwiseAbs();
    std::sort(profile.sorted_magnitudes.data(),
              profile.sorted_magnitudes.data() + profile.sorted_magnitudes.size(),
              std::greater<double>());
    profile.cumulative_energy.resize(profile.sorted_magnitudes.size());
    double total = profile.sorted_magnitudes.squaredNorm();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < profile.sorted_magnitudes.size(); ++i)
    {
        acc += profile.sorted_magnitudes(i) * profile.sorted_magnitudes(i);
        profile.cumulative_energy(i) = total > 0.0 ? acc / total : 1.0;
    }
    return profile;
}

int coefficients_for_energy(const SparsityProfile &profile, double fraction)
{
    for (Eigen::Index i = 0; i < profile.cumulative_energy.size(); ++i)
        if (profile.cumulative_energy(i) >= fraction)
            return static_cast<int>(i) + 1;
    return static_cast<int>(profile.cumulative_energy.size());
}

} // namespace nfce
