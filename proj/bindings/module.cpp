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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nfce/codebook_io.hpp"
#include "nfce/harness.hpp"

namespace py = pybind11;
using namespace nfce;

namespace
{

py::dict meta_to_dict(const CodewordMeta &meta)
{
    py::dict d;
    std::visit(
        [&](const auto &m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DftMeta>)
            {
                d["tx_angle"] = m.tx_angle;
                d["rx_angle"] = m.rx_angle;
            }
            else if constexpr (std::is_same_v<T, SphericalMeta>)
            {
                d["tx_angle"] = m.tx_angle;
                d["tx_distance"] = m.tx_distance;
                d["rx_angle"] = m.rx_angle;
                d["rx_distance"] = m.rx_distance;
                d["candidate"] = py::make_tuple(m.candidate.x(), m.candidate.y());
            }
            else
            {
                d["tx_index"] = m.tx_index;
                d["rx_index"] = m.rx_index;
                d["tx_eigenvalue"] = m.tx_eigenvalue;
                d["rx_eigenvalue"] = m.rx_eigenvalue;
            }
        },
        meta);
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Near-field XL-MIMO channel synthesis, sparsifying codebooks and "
              "compressive channel estimation";

    py::class_<ScenarioGeometry>(m, "ScenarioGeometry")
        .def_readonly("wavelength", &ScenarioGeometry::wavelength)
        .def_readonly("wavenumber", &ScenarioGeometry::wavenumber)
        .def_readonly("ue_rotation", &ScenarioGeometry::ue_rotation)
        .def_property_readonly("n_t", &ScenarioGeometry::n_t)
        .def_property_readonly("n_r", &ScenarioGeometry::n_r)
        .def_property_readonly("ue_center",
                               [](const ScenarioGeometry &g) {
                                   return py::make_tuple(g.ue_center.x(), g.ue_center.y());
                               })
        .def_property_readonly("bs_elements",
                               [](const ScenarioGeometry &g) {
                                   std::vector<std::pair<double, double>> v;
                                   for (const auto &p : g.bs_elements)
                                       v.emplace_back(p.x(), p.y());
                                   return v;
                               })
        .def_property_readonly("ue_elements", [](const ScenarioGeometry &g) {
            std::vector<std::pair<double, double>> v;
            for (const auto &p : g.ue_elements)
                v.emplace_back(p.x(), p.y());
            return v;
        });

    m.def(
        "make_geometry",
        [](int n_t, int n_r, double carrier_hz, std::pair<double, double> ue_center,
           double ue_rotation) {
            return make_geometry(n_t, n_r, carrier_hz,
                                 Point{ue_center.first, ue_center.second}, ue_rotation);
        },
        py::arg("n_t"), py::arg("n_r"), py::arg("carrier_hz"), py::arg("ue_center"),
        py::arg("ue_rotation") = 0.0);

    m.def(
        "scalar_impulse_response",
        [](std::pair<double, double> p_t, std::pair<double, double> p_r, double kappa) {
            return scalar_impulse_response(Point{p_t.first, p_t.second},
                                           Point{p_r.first, p_r.second}, kappa);
        },
        py::arg("p_t"), py::arg("p_r"), py::arg("kappa"));

    m.def("los_channel", &los_channel, py::arg("geometry"));

    py::class_<ChannelRealization>(m, "ChannelRealization")
        .def_readonly("h_full", &ChannelRealization::h_full)
        .def_readonly("h_los", &ChannelRealization::h_los)
        .def_readonly("h_nlos", &ChannelRealization::h_nlos)
        .def_readonly("rician_k", &ChannelRealization::rician_k);

    m.def("rician_channel", &rician_channel, py::arg("geometry"), py::arg("k_db"),
          py::arg("seed"));

    py::enum_<CodebookKind>(m, "CodebookKind")
        .value("DFT", CodebookKind::Dft)
        .value("SPHERICAL", CodebookKind::Spherical)
        .value("DPSS", CodebookKind::Dpss);

    py::class_<Codebook>(m, "Codebook")
        .def_readonly("matrix", &Codebook::matrix)
        .def_readonly("kind", &Codebook::kind)
        .def_readonly("n_t", &Codebook::n_t)
        .def_readonly("n_r", &Codebook::n_r)
        .def_property_readonly("size", &Codebook::size)
        .def_property_readonly("meta", [](const Codebook &cb) {
            py::list out;
            for (const auto &m_ : cb.meta)
                out.append(meta_to_dict(m_));
            return out;
        });

    m.def("dft_codebook", &dft_codebook, py::arg("n_t"), py::arg("n_r"), py::arg("beta"));
    m.def("spherical_codebook", &spherical_codebook, py::arg("geometry"), py::arg("beta"),
          py::arg("r_min"), py::arg("r_max"));
    m.def("dpss_codebook", &dpss_codebook, py::arg("geometry"), py::arg("x_hat"),
          py::arg("y_hat"));
    m.def("dpss_codebook_valid", &dpss_codebook_valid, py::arg("geometry"), py::arg("x_hat"),
          py::arg("y_hat"));
    m.def("gram_map", &gram_map, py::arg("codebook"));

    py::class_<SincKernel>(m, "SincKernel")
        .def_readonly("matrix", &SincKernel::matrix)
        .def_readonly("half_bandwidth", &SincKernel::half_bandwidth);
    m.def("sinc_kernel", &sinc_kernel, py::arg("n"), py::arg("w"));

    py::class_<DpssBasis>(m, "DpssBasis")
        .def_readonly("vectors", &DpssBasis::vectors)
        .def_readonly("eigenvalues", &DpssBasis::eigenvalues);
    m.def("dpss_sequences", &dpss_sequences, py::arg("kernel"));
    m.def("compensation_matrix", &compensation_matrix, py::arg("element_x"), py::arg("y_hat"),
          py::arg("kappa"));

    py::class_<MeasurementEnsemble>(m, "MeasurementEnsemble")
        .def_readonly("phi", &MeasurementEnsemble::phi)
        .def_readonly("y", &MeasurementEnsemble::y)
        .def_readonly("noise_var", &MeasurementEnsemble::noise_var)
        .def_readonly("slots", &MeasurementEnsemble::slots)
        .def_readonly("compression_ratio", &MeasurementEnsemble::compression_ratio);
    m.def("generate_training", &generate_training, py::arg("h"), py::arg("tau"),
          py::arg("snr_db"), py::arg("seed"));

    py::class_<OmpOptions>(m, "OmpOptions")
        .def(py::init<>())
        .def_readwrite("max_iters", &OmpOptions::max_iters)
        .def_readwrite("epsilon", &OmpOptions::epsilon)
        .def_readwrite("stall_factor", &OmpOptions::stall_factor)
        .def_readwrite("keep_history", &OmpOptions::keep_history);

    py::class_<OmpResult>(m, "OmpResult")
        .def_readonly("sparse_vector", &OmpResult::sparse_vector)
        .def_readonly("support", &OmpResult::support)
        .def_readonly("residual_trace", &OmpResult::residual_trace)
        .def_readonly("iterations_used", &OmpResult::iterations_used)
        .def_readonly("rank_deficient", &OmpResult::rank_deficient);
    m.def("omp", &omp, py::arg("ensemble"), py::arg("codebook"), py::arg("options"));
    m.def("reconstruct_channel", &reconstruct_channel, py::arg("result"), py::arg("codebook"),
          py::arg("n_r"), py::arg("n_t"));

    m.def("nmse_db", &nmse_db, py::arg("h_hat"), py::arg("h"));

    py::class_<CoarseLocation>(m, "CoarseLocation")
        .def_readonly("x_hat", &CoarseLocation::x_hat)
        .def_readonly("y_hat", &CoarseLocation::y_hat)
        .def_readonly("index", &CoarseLocation::index);
    m.def("coarse_localize", &coarse_localize, py::arg("ensemble"), py::arg("polar"));

    py::class_<EstimatorSettings>(m, "EstimatorSettings")
        .def(py::init<>())
        .def_readwrite("mu", &EstimatorSettings::mu)
        .def_readwrite("snr_db", &EstimatorSettings::snr_db)
        .def_readwrite("beta", &EstimatorSettings::beta)
        .def_readwrite("beta_loc", &EstimatorSettings::beta_loc)
        .def_readwrite("max_iters", &EstimatorSettings::max_iters)
        .def_readwrite("epsilon", &EstimatorSettings::epsilon)
        .def_readwrite("stall_factor", &EstimatorSettings::stall_factor)
        .def_readwrite("r_min", &EstimatorSettings::r_min)
        .def_readwrite("r_max", &EstimatorSettings::r_max)
        .def_readwrite("per_iteration_nmse", &EstimatorSettings::per_iteration_nmse);

    py::class_<LocalizationInfo>(m, "LocalizationInfo")
        .def_readonly("x_hat", &LocalizationInfo::x_hat)
        .def_readonly("y_hat", &LocalizationInfo::y_hat)
        .def_readonly("error", &LocalizationInfo::error);

    py::class_<EstimationReport>(m, "EstimationReport")
        .def_readonly("h_hat", &EstimationReport::h_hat)
        .def_readonly("nmse_db", &EstimationReport::nmse_db)
        .def_readonly("support", &EstimationReport::support)
        .def_readonly("per_iteration_nmse_db", &EstimationReport::per_iteration_nmse_db)
        .def_readonly("localization", &EstimationReport::localization)
        .def_readonly("codebook_kind", &EstimationReport::codebook_kind)
        .def_readonly("codebook_size", &EstimationReport::codebook_size)
        .def_readonly("fallback_spherical", &EstimationReport::fallback_spherical);

    m.def("estimate_two_step", &estimate_two_step, py::arg("channel"), py::arg("geometry"),
          py::arg("settings"), py::arg("seed"));
    m.def("estimate_baseline", &estimate_baseline, py::arg("channel"), py::arg("geometry"),
          py::arg("codebook"), py::arg("settings"), py::arg("seed"));
    m.def(
        "estimate_with_injected_localization",
        [](const ChannelRealization &ch, const ScenarioGeometry &geom,
           std::pair<double, double> anchor, const EstimatorSettings &settings,
           std::uint64_t seed) {
            return estimate_with_injected_localization(
                ch, geom, Point{anchor.first, anchor.second}, settings, seed);
        },
        py::arg("channel"), py::arg("geometry"), py::arg("anchor"), py::arg("settings"),
        py::arg("seed"));

    py::class_<SparsityProfile>(m, "SparsityProfile")
        .def_readonly("sorted_magnitudes", &SparsityProfile::sorted_magnitudes)
        .def_readonly("cumulative_energy", &SparsityProfile::cumulative_energy);
    m.def("sparsification_profile", &sparsification_profile, py::arg("h"),
          py::arg("codebook"));
    m.def("coefficients_for_energy", &coefficients_for_energy, py::arg("profile"),
          py::arg("fraction"));

    m.def(
        "run_sweep_json",
        [](const std::string &config_json) {
            SweepResult result = run_sweep(config_from_json_text(config_json));
            py::list rows;
            for (const auto &row : result.rows)
            {
                py::dict d;
                d["sweep_variable"] = row.sweep_variable;
                d["sweep_value"] = row.sweep_value;
                d["estimator"] = row.estimator;
                d["mean_nmse_db"] = row.mean_nmse_db;
                d["stddev_db"] = row.stddev_db;
                d["trials"] = row.trials;
                d["codebook_size"] = row.codebook_size;
                d["wall_time_s"] = row.wall_time_s;
                rows.append(d);
            }
            return rows;
        },
        py::arg("config_json"));
    m.def("default_config_json", []() { return config_to_json_text(ExperimentConfig{}); });
    m.def("desk_scale_config_json", []() {
        ExperimentConfig config;
        apply_desk_scale(config);
        return config_to_json_text(config);
    });

    m.def(
        "save_codebook",
        [](const Codebook &cb, const std::string &path, bool complex64) {
            save_codebook(cb, path, CodebookFileParams{}, complex64);
        },
        py::arg("codebook"), py::arg("path"), py::arg("complex64") = false);
    m.def(
        "load_codebook", [](const std::string &path) { return load_codebook(path); },
        py::arg("path"));

    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("a"), py::arg("b") = 0,
          py::arg("c") = 0);
}
