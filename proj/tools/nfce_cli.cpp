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

#include "nfce/codebook_io.hpp"
#include "nfce/harness.hpp"
#include "nfce/rng.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

struct CommonOptions
{
    std::string config_path;
    int trials = -1;
    long long seed = -1;
    double snr_db = std::numeric_limits<double>::quiet_NaN();
    std::string out_csv;
    std::string out_json;
    bool desk_scale = false;
};

void add_common(CLI::App *cmd, CommonOptions &opt)
{
    cmd->add_option("--config", opt.config_path, "JSON experiment config file");
    cmd->add_option("--trials", opt.trials, "override trial count");
    cmd->add_option("--seed", opt.seed, "override master seed");
    cmd->add_option("--snr-db", opt.snr_db, "override training SNR in dB");
    cmd->add_option("--out-csv", opt.out_csv, "CSV output path");
    cmd->add_option("--out-json", opt.out_json, "JSON output path");
    cmd->add_flag("--desk-scale", opt.desk_scale, "apply the reduced desk-scale profile");
}

nfce::ExperimentConfig load_config(const CommonOptions &opt)
{
    nfce::ExperimentConfig config;
    if (!opt.config_path.empty())
    {
        std::ifstream f(opt.config_path);
        if (!f)
            throw std::runtime_error("cannot open config file: " + opt.config_path);
        std::ostringstream buf;
        buf << f.rdbuf();
        config = nfce::config_from_json_text(buf.str());
    }
    if (opt.desk_scale)
        nfce::apply_desk_scale(config);
    if (opt.trials > 0)
        config.scenario.trials = opt.trials;
    if (opt.seed >= 0)
        config.scenario.master_seed = static_cast<std::uint64_t>(opt.seed);
    if (!std::isnan(opt.snr_db))
        config.snr_db = opt.snr_db;
    if (!opt.out_csv.empty())
        config.csv_path = opt.out_csv;
    if (!opt.out_json.empty())
        config.json_path = opt.out_json;
    return config;
}

nfce::ScenarioGeometry geometry_at(const nfce::ScenarioConfig &sc, double x, double y)
{
    return nfce::make_geometry(sc.n_t, sc.n_r, sc.carrier_hz, nfce::Point{x, y});
}

nfce::Codebook build_codebook(const nfce::ExperimentConfig &config, const std::string &kind,
                              double x, double y)
{
    const auto &sc = config.scenario;
    if (kind == "dft")
        return nfce::dft_codebook(sc.n_t, sc.n_r, config.beta);
    if (kind == "spherical")
        return nfce::spherical_codebook(geometry_at(sc, 0.0, (sc.r_min + sc.r_max) / 2.0),
                                        config.beta, sc.r_min, sc.r_max);
    if (kind == "dpss")
        return nfce::dpss_codebook(geometry_at(sc, x, y), x, y);
    throw std::runtime_error("unknown codebook kind: " + kind);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"near-field XL-MIMO channel estimation simulator"};
    app.require_subcommand(1);

    CommonOptions sweep_opt, table_opt, profile_opt, gram_opt;

    auto *sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo NMSE sweep");
    add_common(sweep_cmd, sweep_opt);

    auto *table_cmd =
        app.add_subcommand("table1", "minimum codebook size for NMSE targets");
    add_common(table_cmd, table_opt);
    std::vector<double> targets{-1.0, -2.0, -3.5, -12.0};
    std::vector<double> dft_betas{1.0, 1.5, 2.0, 3.0};
    std::vector<double> sph_betas{1.0, 1.5, 2.0, 3.0};
    table_cmd->add_option("--targets", targets, "NMSE targets in dB");
    table_cmd->add_option("--dft-betas", dft_betas, "DFT size grid (oversampling rates)");
    table_cmd->add_option("--spherical-betas", sph_betas,
                          "spherical size grid (oversampling rates)");

    auto *profile_cmd =
        app.add_subcommand("profile", "sparse-representation profiles of sampled channels");
    add_common(profile_cmd, profile_opt);
    double px = 0.0, py = 5.0;
    profile_cmd->add_option("--ue-x", px, "UE center x (m)");
    profile_cmd->add_option("--ue-y", py, "UE center y (m)");

    auto *gram_cmd = app.add_subcommand("gram", "mutual-correlation map of a codebook");
    add_common(gram_cmd, gram_opt);
    std::string gram_kind = "dpss";
    double gx = 0.0, gy = 5.0;
    gram_cmd->add_option("--kind", gram_kind, "codebook kind: dft | spherical | dpss");
    gram_cmd->add_option("--ue-x", gx, "anchor x for the dpss codebook (m)");
    gram_cmd->add_option("--ue-y", gy, "anchor y for the dpss codebook (m)");
    std::string save_path;
    gram_cmd->add_option("--save-codebook", save_path, "also save the codebook container");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (sweep_cmd->parsed())
        {
            nfce::ExperimentConfig config = load_config(sweep_opt);
            nfce::SweepResult result = nfce::run_sweep(config);
            std::cout << nfce::results_to_csv_text(result);
            return 0;
        }

        if (table_cmd->parsed())
        {
            nfce::ExperimentConfig config = load_config(table_opt);
            nfce::Table1Config table;
            table.targets_db = targets;
            table.dft_betas = dft_betas;
            table.spherical_betas = sph_betas;
            auto rows = nfce::table1_search(config, table);
            std::cout << "codebook,target_nmse_db,required_size,achieved_nmse_db\n";
            for (const auto &row : rows)
            {
                std::cout << row.codebook << ',' << row.target_db << ',';
                if (row.size < 0)
                    std::cout << "N/A";
                else
                    std::cout << row.size;
                std::cout << ',';
                if (std::isnan(row.achieved_nmse_db))
                    std::cout << "N/A";
                else
                    std::cout << row.achieved_nmse_db;
                std::cout << '\n';
            }
            if (!config.csv_path.empty())
                nfce::emit_table1_csv(rows, config.csv_path);
            return 0;
        }

        if (profile_cmd->parsed())
        {
            nfce::ExperimentConfig config = load_config(profile_opt);
            const auto &sc = config.scenario;
            nfce::ScenarioGeometry geom = geometry_at(sc, px, py);
            nfce::ChannelRealization ch = nfce::rician_channel(
                geom, sc.k_db, nfce::derive_seed(sc.master_seed, 0, 0, 1));

            std::ostream *out = &std::cout;
            std::ofstream file;
            if (!config.csv_path.empty())
            {
                file.open(config.csv_path, std::ios::binary);
                if (!file)
                    throw std::runtime_error("cannot write " + config.csv_path);
                out = &file;
            }
            *out << "codebook,rank,coefficient_magnitude,cumulative_energy\n";
            for (const std::string kind : {"dft", "spherical", "dpss"})
            {
                nfce::Codebook cb = build_codebook(config, kind, px, py);
                nfce::SparsityProfile profile =
                    nfce::sparsification_profile(ch.h_full, cb);
                for (Eigen::Index i = 0; i < profile.sorted_magnitudes.size(); ++i)
                    *out << kind << ',' << (i + 1) << ',' << profile.sorted_magnitudes(i)
                         << ',' << profile.cumulative_energy(i) << '\n';
                std::cerr << kind << ": M=" << cb.size() << ", coefficients for 95% energy: "
                          << nfce::coefficients_for_energy(profile, 0.95) << '\n';
            }
            return 0;
        }

        if (gram_cmd->parsed())
        {
            nfce::ExperimentConfig config = load_config(gram_opt);
            nfce::Codebook cb = build_codebook(config, gram_kind, gx, gy);
            nfce::Mat g = nfce::gram_map(cb);
            double max_off = 0.0;
            double sum_off = 0.0;
            for (Eigen::Index i = 0; i < g.rows(); ++i)
                for (Eigen::Index j = 0; j < g.cols(); ++j)
                    if (i != j)
                    {
                        max_off = std::max(max_off, g(i, j));
                        sum_off += g(i, j);
                    }
            double denom = static_cast<double>(g.rows()) * (g.cols() - 1);
            std::cout << "kind=" << gram_kind << " M=" << cb.size()
                      << " max_offdiag=" << max_off
                      << " mean_offdiag=" << (denom > 0 ? sum_off / denom : 0.0) << '\n';
            if (!config.csv_path.empty())
            {
                std::ofstream f(config.csv_path, std::ios::binary);
                if (!f)
                    throw std::runtime_error("cannot write " + config.csv_path);
                for (Eigen::Index i = 0; i < g.rows(); ++i)
                {
                    for (Eigen::Index j = 0; j < g.cols(); ++j)
                        f << (j ? "," : "") << g(i, j);
                    f << '\n';
                }
            }
            if (!save_path.empty())
            {
                nfce::CodebookFileParams params;
                params.beta = config.beta;
                if (gram_kind == "dpss")
                {
                    params.x_hat = gx;
                    params.y_hat = gy;
                }
                nfce::save_codebook(cb, save_path, params);
                std::cerr << "saved codebook to " << save_path << '\n';
            }
            return 0;
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
