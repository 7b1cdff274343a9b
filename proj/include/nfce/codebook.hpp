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

#include <string>
#include <variant>
#include <vector>

namespace nfce
{

enum class CodebookKind
{
    Dft,
    Spherical,
    Dpss,
};

std::string to_string(CodebookKind kind);
CodebookKind codebook_kind_from_string(const std::string &s);

struct DftMeta
{
    double tx_angle = 0.0; // radians
    double rx_angle = 0.0;
};

struct SphericalMeta
{
    double tx_angle = 0.0; // radians
    double tx_distance = 0.0;
    double rx_angle = 0.0;
    double rx_distance = 0.0;
    Point candidate{0.0, 0.0}; // mapped UE-center coordinate of the TX pair
};

struct DpssMeta
{
    int tx_index = 0;
    int rx_index = 0;
    double tx_eigenvalue = 0.0;
    double rx_eigenvalue = 0.0;
};

using CodewordMeta = std::variant<DftMeta, SphericalMeta, DpssMeta>;

/// Dictionary of vectorized channel atoms. Columns are unit-norm; every
/// column c represents vec of an N_R x N_T rank-one pattern and meta[c]
/// records how it was generated.
struct Codebook
{
    CMat matrix; // (n_r*n_t) x M
    CodebookKind kind = CodebookKind::Dft;
    std::vector<CodewordMeta> meta;
    int n_t = 0;
    int n_r = 0;

    Eigen::Index size() const { return matrix.cols(); }
};

/// Far-field steering dictionary, Psi = conj(A_T) kron A_R, with per-side
/// grids of round(beta*N) angles uniform in theta over [-pi/2, pi/2).
/// M = beta^2 * n_t * n_r for integer beta. beta >= 1 (fractional values are
/// used by the storage search).
Codebook dft_codebook(int n_t, int n_r, double beta);

/// One polar-domain side grid: G angle points uniform in sin(theta) over
/// [-1, 1) times G distance points uniform in 1/r over [1/r_max, 1/r_min].
/// Atoms are unit-normalized near-field steering vectors of an n-element
/// centered ULA, evaluated at the candidate points.
struct PolarSideAtoms
{
    CMat atoms; // n x (G*G), angle-major ordering
    std::vector<double> angle;    // radians, per atom
    std::vector<double> distance; // meters, per atom
    int grid = 0;                 // G
};

PolarSideAtoms polar_side_atoms(int n, double wavelength, double kappa, int grid_points,
                                double r_min, double r_max);

/// Joint polar-domain spherical-wave codebook: codeword (i, j) is
/// kron(b_T[i], b_R[j]) (vec of the rank-one outer product), TX-atom-major.
/// Per side G_s = ceil(beta*sqrt(N_s)), M = G_T^2 * G_R^2.
/// Throws std::domain_error unless 0 < r_min < r_max.
Codebook spherical_codebook(const ScenarioGeometry &geom, double beta, double r_min,
                            double r_max);

/// Validity of the DPSS eigen-codebook anchor: y_hat > 0 and both kernel
/// half-bandwidths below 1/2.
bool dpss_codebook_valid(const ScenarioGeometry &geom, double x_hat, double y_hat);

/// DPSS-based eigen-codebook anchored at the (estimated) UE center.
///
/// Builds the TX/RX sinc kernels from the exact bilinear coupling coefficient
/// (effective range y_eff = r^3 / y^2), takes their DPSS eigenbases, applies
/// per-element spherical-phase compensation towards the opposite array
/// center, and forms the unitary Kronecker dictionary. Columns ordered by
/// descending TX*RX eigenvalue product. M = n_t * n_r.
/// Throws std::domain_error when invalid (see dpss_codebook_valid).
Codebook dpss_codebook(const ScenarioGeometry &geom, double x_hat, double y_hat);

/// |Psi^H Psi| entrywise (mutual-correlation map).
Mat gram_map(const Codebook &codebook);

} // namespace nfce
