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

#include "pipeline.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nfce
{

enum class SweepVariable
{
    Mu,
    Iterations,
    Beta,
    LocError,
    CodebookSize,
};

enum class EstimatorKind
{
    Dft,
    Spherical,
    DpssTwoStep,
};

std::string to_string(SweepVariable v);
std::string to_string(EstimatorKind k);
SweepVariable sweep_variable_from_string(const std::string &s);
EstimatorKind estimator_from_string(const std::string &s);

struct ScenarioConfig
{
    int n_t = 192;
    int n_r = 4;
    double carrier_hz = 28e9;
    double k_db = 13.0;
    double r_min = 1.0;
    double r_max = 20.0;
    double angle_min_deg = -30.0;
    double angle_max_deg = 30.0;
    int trials = 100;
    std::uint64_t master_seed = 1;
};

struct OmpConfig
{
    int max_iters = 30;
    double epsilon = -1.0; // negative = noise-calibrated sqrt(tau * sigma_n^2)
    double stall_factor = 8.0;
};

struct ExperimentConfig
{
    ScenarioConfig scenario;
    SweepVariable variable = SweepVariable::Mu;
    std::vector<double> values{0.25, 0.4, 0.6};
    std::vector<EstimatorKind> estimators{EstimatorKind::Dft, EstimatorKind::Spherical,
                                          EstimatorKind::DpssTwoStep};
    double snr_db = 20.0;
    double mu = 0.4;       // fixed mu when the sweep variable is not Mu
    double beta = 1.0;     // fixed beta when not swept
    double beta_loc = 0.0; // <= 0: follows beta
    OmpConfig omp;
    std::string csv_path;
    std::string json_path;
};

/// Reduced profile preserving the full-scale Fresnel regime:
/// n_t=64, n_r=2, carrier 3 GHz, UE range [2, 10] m, 50 trials, beta_loc=10.
void apply_desk_scale(ExperimentConfig &config);

ExperimentConfig config_from_json_text(const std::string &text);
std::string config_to_json_text(const ExperimentConfig &config);

struct SweepRow
{
    std::string sweep_variable;
    double sweep_value = 0.0;
    std::string estimator;
    double mean_nmse_db = 0.0;
    double stddev_db = 0.0;
    int trials = 0;
    long codebook_size = 0;
    double wall_time_s = 0.0;

    bool operator==(const SweepRow &) const = default;
};

struct SweepResult
{
    ExperimentConfig config;
    std::vector<SweepRow> rows;
    /// Mean per-iteration NMSE traces (dB), one per (value, estimator) row;
    /// only filled for trace-capable runs. Not serialized to CSV.
    std::vector<std::vector<double>> traces;
};

/// Runs `trials` independent realizations per (sweep value, estimator) with
/// seeds derived from master_seed (documented scheme in rng.hpp), averaging
/// NMSE in the linear domain. Deterministic for a fixed config (all columns
/// except wall_time_s).
SweepResult run_sweep(const ExperimentConfig &config);

/// One row of the storage search: smallest codebook size whose converged mean
/// NMSE meets the target; size < 0 encodes N/A.
struct Table1Row
{
    std::string codebook;
    double target_db = 0.0;
    long size = -1;
    double achieved_nmse_db = 0.0;
};

struct Table1Config
{
    std::vector<double> targets_db{-1.0, -2.0, -3.5, -12.0};
    std::vector<double> dft_betas{1.0, 1.5, 2.0, 3.0};
    std::vector<double> spherical_betas{1.0, 1.5, 2.0, 3.0};
};

std::vector<Table1Row> table1_search(const ExperimentConfig &config, const Table1Config &table);

/// CSV (fixed header and formatting, byte-stable) plus a JSON mirror with the
/// config embedded. Empty paths skip the corresponding file.
void emit_results(const SweepResult &result, const std::string &csv_path,
                  const std::string &json_path);
std::string results_to_csv_text(const SweepResult &result);
SweepResult results_from_json_text(const std::string &text);

void emit_table1_csv(const std::vector<Table1Row> &rows, const std::string &csv_path);

/// Static-partition parallel loop used for trial-level parallelism.
void parallel_for(int count, const std::function<void(int)> &body);

} // namespace nfce
