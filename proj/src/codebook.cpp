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

#include "nfce/codebook.hpp"

#include "nfce/channel.hpp"
#include "nfce/dpss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nfce
{

std::string to_string(CodebookKind kind)
{
    switch (kind)
    {
    case CodebookKind::Dft: return "dft";
    case CodebookKind::Spherical: return "spherical";
    case CodebookKind::Dpss: return "dpss";
    }
    return "unknown";
}

CodebookKind codebook_kind_from_string(const std::string &s)
{
    if (s == "dft") return CodebookKind::Dft;
    if (s == "spherical") return CodebookKind::Spherical;
    if (s == "dpss") return CodebookKind::Dpss;
    throw std::invalid_argument("unknown codebook kind: " + s);
}

namespace
{

void renormalize_columns(CMat &m)
{
    for (Eigen::Index c = 0; c < m.cols(); ++c)
    {
        double nrm = m.col(c).norm();
        if (nrm > 0.0)
            m.col(c) /= nrm;
    }
}

// Far-field steering matrix: column i is a(theta_i) with entries
// exp(-j*pi*k*sin(theta_i)) / sqrt(n), theta_i = -pi/2 + i*pi/G.
CMat dft_side(int n, int grid, std::vector<double> &angles)
{
    CMat a(n, grid);
    angles.resize(grid);
    for (int i = 0; i < grid; ++i)
    {
        double theta = -M_PI / 2.0 + i * M_PI / grid;
        angles[i] = theta;
        double s = std::sin(theta);
        for (int k = 0; k < n; ++k)
            a(k, i) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), -M_PI * k * s);
    }
    return a;
}

} // namespace

Codebook dft_codebook(int n_t, int n_r, double beta)
{
    if (n_t < 1 || n_r < 1)
        throw std::invalid_argument("dft_codebook: antenna counts must be positive");
    if (!(beta >= 1.0))
        throw std::invalid_argument("dft_codebook: beta must be >= 1");

    int g_t = static_cast<int>(std::lround(beta * n_t));
    int g_r = static_cast<int>(std::lround(beta * n_r));
    std::vector<double> tx_angles, rx_angles;
    CMat a_t = dft_side(n_t, g_t, tx_angles);
    CMat a_r = dft_side(n_r, g_r, rx_angles);

    Codebook cb;
    cb.kind = CodebookKind::Dft;
    cb.n_t = n_t;
    cb.n_r = n_r;
    cb.matrix.resize(static_cast<Eigen::Index>(n_t) * n_r,
                     static_cast<Eigen::Index>(g_t) * g_r);
    cb.meta.reserve(static_cast<std::size_t>(g_t) * g_r);

    // Psi = conj(A_T) kron A_R, TX-atom-major column order.
    for (int i = 0; i < g_t; ++i)
    {
        CVec bt = a_t.col(i).conjugate();
        for (int j = 0; j < g_r; ++j)
        {
            Eigen::Index col = static_cast<Eigen::Index>(i) * g_r + j;
            for (int m = 0; m < n_t; ++m)
                cb.matrix.col(col).segment(static_cast<Eigen::Index>(m) * n_r, n_r) =
                    bt(m) * a_r.col(j);
            cb.meta.push_back(DftMeta{tx_angles[i], rx_angles[j]});
        }
    }
    renormalize_columns(cb.matrix);
    return cb;
}

PolarSideAtoms polar_side_atoms(int n, double wavelength, double kappa, int grid_points,
                                double r_min, double r_max)
{
    if (!(r_min > 0.0) || !(r_min < r_max))
        throw std::domain_error("polar_side_atoms: need 0 < r_min < r_max");
    if (grid_points < 1)
        throw std::invalid_argument("polar_side_atoms: empty grid");

    std::vector<Point> elems(n);
    for (int k = 0; k < n; ++k)
        elems[k] = Point{(k - (n - 1) / 2.0) * wavelength / 2.0, 0.0};

    PolarSideAtoms side;
    side.grid = grid_points;
    side.atoms.resize(n, static_cast<Eigen::Index>(grid_points) * grid_points);
    side.angle.reserve(static_cast<std::size_t>(grid_points) * grid_points);
    side.distance.reserve(static_cast<std::size_t>(grid_points) * grid_points);

    Eigen::Index col = 0;
    for (int i = 0; i < grid_points; ++i)
    {
        // uniform in sin(theta) over [-1, 1)
        double s = -1.0 + 2.0 * i / grid_points;
        double c = std::sqrt(std::max(0.0, 1.0 - s * s));
        for (int j = 0; j < grid_points; ++j)
        {
            // uniform in 1/r over [1/r_max, 1/r_min]
            double inv = grid_points == 1
                             ? 1.0 / r_max
                             : 1.0 / r_max + (1.0 / r_min - 1.0 / r_max) * j / (grid_points - 1);
            double r = 1.0 / inv;
            Point p{r * s, r * c};
            for (int k = 0; k < n; ++k)
                side.atoms(k, col) = scalar_impulse_response(elems[k], p, kappa);
            side.atoms.col(col) /= side.atoms.col(col).norm();
            side.angle.push_back(std::asin(s));
            side.distance.push_back(r);
            ++col;
        }
    }
    return side;
}

Codebook spherical_codebook(const ScenarioGeometry &geom, double beta, double r_min,
                            double r_max)
{
    if (!(beta >= 1.0))
        throw std::invalid_argument("spherical_codebook: beta must be >= 1");
    int g_t = static_cast<int>(std::ceil(beta * std::sqrt(static_cast<double>(geom.n_t()))));
    int g_r = static_cast<int>(std::ceil(beta * std::sqrt(static_cast<double>(geom.n_r()))));

    PolarSideAtoms tx = polar_side_atoms(geom.n_t(), geom.wavelength, geom.wavenumber, g_t,
                                         r_min, r_max);
    PolarSideAtoms rx = polar_side_atoms(geom.n_r(), geom.wavelength, geom.wavenumber, g_r,
                                         r_min, r_max);

    const Eigen::Index m_t = tx.atoms.cols();
    const Eigen::Index m_r = rx.atoms.cols();

    Codebook cb;
    cb.kind = CodebookKind::Spherical;
    cb.n_t = geom.n_t();
    cb.n_r = geom.n_r();
    cb.matrix.resize(static_cast<Eigen::Index>(geom.n_t()) * geom.n_r(), m_t * m_r);
    cb.meta.reserve(static_cast<std::size_t>(m_t * m_r));

    for (Eigen::Index i = 0; i < m_t; ++i)
    {
        double s = std::sin(tx.angle[i]);
        double c = std::cos(tx.angle[i]);
        Point candidate{tx.distance[i] * s, tx.distance[i] * c};
        for (Eigen::Index j = 0; j < m_r; ++j)
        {
            Eigen::Index col = i * m_r + j;
            for (int m = 0; m < geom.n_t(); ++m)
                cb.matrix.col(col).segment(static_cast<Eigen::Index>(m) * geom.n_r(),
                                           geom.n_r()) = tx.atoms(m, i) * rx.atoms.col(j);
            cb.meta.push_back(SphericalMeta{tx.angle[i], tx.distance[i], rx.angle[j],
                                            rx.distance[j], candidate});
        }
    }
    renormalize_columns(cb.matrix);
    return cb;
}

namespace
{

struct DpssAnchor
{
    double y_eff = 0.0;
    double w_t = 0.0; // TX kernel half-bandwidth (UE-side width)
    double w_r = 0.0; // RX kernel half-bandwidth (BS-side width)
};

DpssAnchor dpss_anchor(const ScenarioGeometry &geom, double x_hat, double y_hat)
{
    DpssAnchor a;
    double r = std::hypot(x_hat, y_hat);
    a.y_eff = r * r * r / (y_hat * y_hat); // exact bilinear coefficient cos^2(theta)/r
    a.w_t = geom.n_r() * geom.wavelength / 2.0 / (4.0 * a.y_eff);
    a.w_r = geom.n_t() * geom.wavelength / 2.0 / (4.0 * a.y_eff);
    return a;
}

} // namespace

bool dpss_codebook_valid(const ScenarioGeometry &geom, double x_hat, double y_hat)
{
    if (!(y_hat > 0.0))
        return false;
    DpssAnchor a = dpss_anchor(geom, x_hat, y_hat);
    return a.w_t > 0.0 && a.w_t < 0.5 && a.w_r > 0.0 && a.w_r < 0.5;
}

Codebook dpss_codebook(const ScenarioGeometry &geom, double x_hat, double y_hat)
{
    if (!(y_hat > 0.0))
        throw std::domain_error("dpss_codebook: anchor must satisfy y_hat > 0");
    DpssAnchor a = dpss_anchor(geom, x_hat, y_hat);
    // sinc_kernel rejects half-bandwidths outside (0, 1/2)
    DpssBasis v = dpss_sequences(sinc_kernel(geom.n_t(), a.w_t));
    DpssBasis u = dpss_sequences(sinc_kernel(geom.n_r(), a.w_r));

    const int n_t = geom.n_t();
    const int n_r = geom.n_r();
    const double kappa = geom.wavenumber;
    const double r_hat = std::hypot(x_hat, y_hat);
    const Point anchor{x_hat, y_hat};

    // Per-element spherical-phase compensation towards the opposite array
    // center; its second-order expansion is the quadratic x^2/(2*y_eff) form.
    CVec d_t(n_t), d_r(n_r);
    for (int m = 0; m < n_t; ++m)
        d_t(m) = std::polar(1.0, kappa * ((geom.bs_elements[m] - anchor).norm() - r_hat));
    for (int n = 0; n < n_r; ++n)
    {
        // UE element positions reconstructed around x_hat (parallel arrays)
        double off = (n - (n_r - 1) / 2.0) * geom.wavelength / 2.0;
        Point elem{x_hat + off, y_hat};
        d_r(n) = std::polar(1.0, kappa * (elem.norm() - r_hat));
    }

    CMat b_t = d_t.asDiagonal() * v.vectors.cast<cplx>();
    CMat b_r = d_r.asDiagonal() * u.vectors.cast<cplx>();

    // Psi_e = conj((D_T V) kron (D_R U)), columns ordered by descending
    // eigenvalue product (stable on ties).
    std::vector<int> order(static_cast<std::size_t>(n_t) * n_r);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        double pl = v.eigenvalues(lhs / n_r) * u.eigenvalues(lhs % n_r);
        double pr = v.eigenvalues(rhs / n_r) * u.eigenvalues(rhs % n_r);
        return pl > pr;
    });

    Codebook cb;
    cb.kind = CodebookKind::Dpss;
    cb.n_t = n_t;
    cb.n_r = n_r;
    cb.matrix.resize(static_cast<Eigen::Index>(n_t) * n_r, static_cast<Eigen::Index>(n_t) * n_r);
    cb.meta.reserve(static_cast<std::size_t>(n_t) * n_r);

    for (std::size_t c = 0; c < order.size(); ++c)
    {
        int t = order[c] / n_r;
        int r = order[c] % n_r;
        Eigen::Index col = static_cast<Eigen::Index>(c);
        for (int m = 0; m < n_t; ++m)
            cb.matrix.col(col).segment(static_cast<Eigen::Index>(m) * n_r, n_r) =
                (b_t(m, t) * b_r.col(r)).conjugate();
        cb.meta.push_back(DpssMeta{t, r, v.eigenvalues(t), u.eigenvalues(r)});
    }
    renormalize_columns(cb.matrix);
    return cb;
}

Mat gram_map(const Codebook &codebook)
{
    return (codebook.matrix.adjoint() * codebook.matrix).cwiseAbs();
}

} // namespace nfce
