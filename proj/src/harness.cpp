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

#include "nfce/harness.hpp"

#include "nfce/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace nfce
{

using nlohmann::ordered_json;

std::string to_string(SweepVariable v)
{
    switch (v)
    {
    case SweepVariable::Mu: return "mu";
    case SweepVariable::Iterations: return "iterations";
    case SweepVariable::Beta: return "beta";
    case SweepVariable::LocError: return "loc_error";
    case SweepVariable::CodebookSize: return "codebook_size";
    }
    return "unknown";
}

std::string to_string(EstimatorKind k)
{
    switch (k)
    {
    case EstimatorKind::Dft: return "dft";
    case EstimatorKind::Spherical: return "spherical";
    case EstimatorKind::DpssTwoStep: return "dpss_two_step";
    }
    return "unknown";
}

SweepVariable sweep_variable_from_string(const std::string &s)
{
    if (s == "mu") return SweepVariable::Mu;
    if (s == "iterations") return SweepVariable::Iterations;
    if (s == "beta") return SweepVariable::Beta;
    if (s == "loc_error") return SweepVariable::LocError;
    if (s == "codebook_size") return SweepVariable::CodebookSize;
    throw std::invalid_argument("unknown sweep variable: " + s);
}

EstimatorKind estimator_from_string(const std::string &s)
{
    if (s == "dft") return EstimatorKind::Dft;
    if (s == "spherical") return EstimatorKind::Spherical;
    if (s == "dpss_two_step") return EstimatorKind::DpssTwoStep;
    throw std::invalid_argument("unknown estimator: " + s);
}

void apply_desk_scale(ExperimentConfig &config)
{
    // Reduced arrays with the full-scale Fresnel regime: the carrier scales
    // by ((192-1)/(64-1))^2 so L^2/lambda (and the Rayleigh distance) match.
    config.scenario.n_t = 64;
    config.scenario.n_r = 2;
    config.scenario.carrier_hz = 3e9;
    config.scenario.r_min = 2.0;
    config.scenario.r_max = 10.0;
    config.scenario.trials = 50;
    config.beta_loc = 10.0;
}

void parallel_for(int count, const std::function<void(int)> &body)
{
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1)
        workers = 1;
    workers = std::min(workers, count);
    if (workers <= 1)
    {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (;;)
            {
                int i = next.fetch_add(1);
                if (i >= count)
                    return;
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    return;
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

// ---------------------------------------------------------------- JSON I/O

namespace
{

ordered_json scenario_to_json(const ScenarioConfig &s)
{
    return ordered_json{{"n_t", s.n_t},
                        {"n_r", s.n_r},
                        {"carrier_hz", s.carrier_hz},
                        {"k_db", s.k_db},
                        {"ue_distance_range_m", {s.r_min, s.r_max}},
                        {"ue_angle_range_deg", {s.angle_min_deg, s.angle_max_deg}},
                        {"trials", s.trials},
                        {"master_seed", s.master_seed}};
}

void scenario_from_json(const ordered_json &j, ScenarioConfig &s)
{
    s.n_t = j.value("n_t", s.n_t);
    s.n_r = j.value("n_r", s.n_r);
    s.carrier_hz = j.value("carrier_hz", s.carrier_hz);
    s.k_db = j.value("k_db", s.k_db);
    if (j.contains("ue_distance_range_m"))
    {
        s.r_min = j["ue_distance_range_m"].at(0).get<double>();
        s.r_max = j["ue_distance_range_m"].at(1).get<double>();
    }
    if (j.contains("ue_angle_range_deg"))
    {
        s.angle_min_deg = j["ue_angle_range_deg"].at(0).get<double>();
        s.angle_max_deg = j["ue_angle_range_deg"].at(1).get<double>();
    }
    s.trials = j.value("trials", s.trials);
    s.master_seed = j.value("master_seed", s.master_seed);
}

ordered_json config_to_json(const ExperimentConfig &c)
{
    ordered_json est = ordered_json::array();
    for (auto e : c.estimators)
        est.push_back(to_string(e));
    return ordered_json{
        {"scenario", scenario_to_json(c.scenario)},
        {"sweep", ordered_json{{"variable", to_string(c.variable)}, {"values", c.values}}},
        {"estimators", est},
        {"snr_db", c.snr_db},
        {"mu", c.mu},
        {"beta", c.beta},
        {"beta_loc", c.beta_loc},
        {"omp", ordered_json{{"max_iters", c.omp.max_iters},
                             {"epsilon", c.omp.epsilon},
                             {"stall_factor", c.omp.stall_factor}}},
        {"output", ordered_json{{"csv_path", c.csv_path}, {"json_path", c.json_path}}}};
}

ExperimentConfig config_from_json(const ordered_json &j)
{
    ExperimentConfig c;
    if (j.contains("scenario"))
        scenario_from_json(j["scenario"], c.scenario);
    if (j.contains("sweep"))
    {
        const auto &sw = j["sweep"];
        if (sw.contains("variable"))
            c.variable = sweep_variable_from_string(sw["variable"].get<std::string>());
        if (sw.contains("values"))
            c.values = sw["values"].get<std::vector<double>>();
    }
    if (j.contains("estimators"))
    {
        c.estimators.clear();
        for (const auto &e : j["estimators"])
            c.estimators.push_back(estimator_from_string(e.get<std::string>()));
    }
    c.snr_db = j.value("snr_db", c.snr_db);
    c.mu = j.value("mu", c.mu);
    c.beta = j.value("beta", c.beta);
    c.beta_loc = j.value("beta_loc", c.beta_loc);
    if (j.contains("omp"))
    {
        const auto &o = j["omp"];
        c.omp.max_iters = o.value("max_iters", c.omp.max_iters);
        c.omp.epsilon = o.value("epsilon", c.omp.epsilon);
        c.omp.stall_factor = o.value("stall_factor", c.omp.stall_factor);
    }
    if (j.contains("output"))
    {
        c.csv_path = j["output"].value("csv_path", std::string());
        c.json_path = j["output"].value("json_path", std::string());
    }
    return c;
}

} // namespace

ExperimentConfig config_from_json_text(const std::string &text)
{
    return config_from_json(ordered_json::parse(text));
}

std::string config_to_json_text(const ExperimentConfig &config)
{
    return config_to_json(config).dump(2);
}

// ------------------------------------------------------------- evaluation

namespace
{

constexpr double nmse_floor_db = -300.0;

double to_db(double linear)
{
    return linear > 0.0 ? std::max(10.0 * std::log10(linear), nmse_floor_db) : nmse_floor_db;
}

double from_db(double db)
{
    return std::pow(10.0, db / 10.0);
}

struct PointSettings
{
    double mu = 0.4;
    double beta = 1.0;
    double beta_loc = 0.0;
    int iters = 30;
    double loc_error = -1.0; // >= 0: injected-localization mode (two-step only)
};

struct PointResult
{
    double mean_db = 0.0;
    double std_db = 0.0;
    long codebook_size = 0;
    int trials = 0;
    std::vector<double> mean_trace_db;
    double seconds = 0.0;
};

// One (sweep value, estimator) evaluation: `trials` independent realizations
// with seeds derived from (master_seed, point_id, trial, stream).
// Streams: 0 placement, 1 channel, 2 training, 3 injected localization.
PointResult run_point(const ExperimentConfig &cfg, EstimatorKind estimator,
                      const PointSettings &ps, int point_id)
{
    const ScenarioConfig &sc = cfg.scenario;
    const int trials = sc.trials;
    if (trials < 1)
        throw std::invalid_argument("run_point: trials must be >= 1");

    auto t_start = std::chrono::steady_clock::now();

    // Baseline codebooks do not depend on the UE position: build once.
    ScenarioGeometry probe = make_geometry(sc.n_t, sc.n_r, sc.carrier_hz, Point{0.0, 1.0});
    Codebook baseline;
    if (estimator == EstimatorKind::Dft)
        baseline = dft_codebook(sc.n_t, sc.n_r, ps.beta);
    else if (estimator == EstimatorKind::Spherical)
        baseline = spherical_codebook(probe, ps.beta, sc.r_min, sc.r_max);

    EstimatorSettings es;
    es.mu = ps.mu;
    es.snr_db = cfg.snr_db;
    es.beta = ps.beta;
    es.beta_loc = ps.beta_loc;
    es.max_iters = ps.iters;
    es.epsilon = cfg.omp.epsilon;
    es.stall_factor = cfg.omp.stall_factor;
    es.r_min = sc.r_min;
    es.r_max = sc.r_max;
    es.per_iteration_nmse = true;

    std::vector<double> finals(static_cast<std::size_t>(trials));
    std::vector<std::vector<double>> traces(static_cast<std::size_t>(trials));
    std::vector<long> sizes(static_cast<std::size_t>(trials), 0);

    const std::uint64_t pid = static_cast<std::uint64_t>(point_id);
    parallel_for(trials, [&](int t) {
        const std::uint64_t ti = static_cast<std::uint64_t>(t);
        Rng place(derive_seed(sc.master_seed, pid, ti, 0));
        double r = sc.r_min + (sc.r_max - sc.r_min) * place.uniform();
        double ang = (sc.angle_min_deg +
                      (sc.angle_max_deg - sc.angle_min_deg) * place.uniform()) *
                     M_PI / 180.0;
        Point center{r * std::sin(ang), r * std::cos(ang)};
        ScenarioGeometry geom = make_geometry(sc.n_t, sc.n_r, sc.carrier_hz, center);
        ChannelRealization ch =
            rician_channel(geom, sc.k_db, derive_seed(sc.master_seed, pid, ti, 1));
        std::uint64_t train_seed = derive_seed(sc.master_seed, pid, ti, 2);

        EstimationReport report;
        if (estimator == EstimatorKind::DpssTwoStep)
        {
            if (ps.loc_error >= 0.0)
            {
                Rng inj(derive_seed(sc.master_seed, pid, ti, 3));
                double rad = ps.loc_error * std::sqrt(inj.uniform());
                double th = inj.phase();
                Point anchor = center + Point{rad * std::cos(th), rad * std::sin(th)};
                report = estimate_with_injected_localization(ch, geom, anchor, es, train_seed);
            }
            else
            {
                report = estimate_two_step(ch, geom, es, train_seed);
            }
            sizes[static_cast<std::size_t>(t)] =
                static_cast<long>(geom.n_t()) * geom.n_r(); // scheme codebook size
        }
        else
        {
            report = estimate_baseline(ch, geom, baseline, es, train_seed);
            sizes[static_cast<std::size_t>(t)] = baseline.size();
        }

        finals[static_cast<std::size_t>(t)] = from_db(report.nmse_db);
        // pad stopped runs with their held estimate
        std::vector<double> tr = report.per_iteration_nmse_db;
        if (tr.empty())
            tr.push_back(report.nmse_db);
        while (static_cast<int>(tr.size()) < ps.iters)
            tr.push_back(tr.back());
        traces[static_cast<std::size_t>(t)] = std::move(tr);
    });

    PointResult out;
    out.trials = trials;
    out.codebook_size = sizes[0];

    double mean_linear = 0.0;
    for (double v : finals)
        mean_linear += v;
    mean_linear /= trials;
    out.mean_db = to_db(mean_linear);

    double var = 0.0;
    for (double v : finals)
    {
        double d = to_db(v) - out.mean_db;
        var += d * d;
    }
    out.std_db = trials > 1 ? std::sqrt(var / (trials - 1)) : 0.0;

    out.mean_trace_db.resize(static_cast<std::size_t>(ps.iters));
    for (int i = 0; i < ps.iters; ++i)
    {
        double acc = 0.0;
        for (const auto &tr : traces)
            acc += from_db(tr[static_cast<std::size_t>(i)]);
        out.mean_trace_db[static_cast<std::size_t>(i)] = to_db(acc / trials);
    }

    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                      .count();
    return out;
}

PointSettings point_settings_for(const ExperimentConfig &cfg, double value)
{
    PointSettings ps;
    ps.mu = cfg.mu;
    ps.beta = cfg.beta;
    ps.beta_loc = cfg.beta_loc;
    ps.iters = cfg.omp.max_iters;

    switch (cfg.variable)
    {
    case SweepVariable::Mu:
        ps.mu = value;
        break;
    case SweepVariable::Iterations:
        // evaluated from the trace of a single run at the maximum
        break;
    case SweepVariable::Beta:
        ps.beta = value;
        if (cfg.beta_loc <= 0.0)
            ps.beta_loc = value; // localization grid follows the swept beta
        break;
    case SweepVariable::LocError:
        ps.loc_error = value;
        break;
    case SweepVariable::CodebookSize:
        break; // handled per estimator
    }
    return ps;
}

double beta_for_size(EstimatorKind estimator, double size, int n_t, int n_r)
{
    double n = static_cast<double>(n_t) * n_r;
    if (estimator == EstimatorKind::Dft)
        return std::max(1.0, std::sqrt(size / n));
    if (estimator == EstimatorKind::Spherical)
        return std::max(1.0, std::pow(size / n, 0.25));
    return 1.0;
}

} // namespace

SweepResult run_sweep(const ExperimentConfig &config)
{
    if (config.values.empty())
        throw std::invalid_argument("run_sweep: empty sweep values");
    SweepResult result;
    result.config = config;

    if (config.variable == SweepVariable::Iterations)
    {
        int i_max = 0;
        for (double v : config.values)
        {
            if (v < 1.0 || v != std::floor(v))
                throw std::invalid_argument("run_sweep: iteration values must be integers >= 1");
            i_max = std::max(i_max, static_cast<int>(v));
        }
        for (auto estimator : config.estimators)
        {
            PointSettings ps = point_settings_for(config, 0.0);
            ps.iters = i_max;
            PointResult pr = run_point(config, estimator, ps, 0);
            for (std::size_t vi = 0; vi < config.values.size(); ++vi)
            {
                int iters = static_cast<int>(config.values[vi]);
                SweepRow row;
                row.sweep_variable = to_string(config.variable);
                row.sweep_value = config.values[vi];
                row.estimator = to_string(estimator);
                row.mean_nmse_db = pr.mean_trace_db[static_cast<std::size_t>(iters - 1)];
                row.stddev_db = pr.std_db; // dispersion of the final iterate
                row.trials = pr.trials;
                row.codebook_size = pr.codebook_size;
                row.wall_time_s = pr.seconds;
                result.rows.push_back(row);
                result.traces.push_back(pr.mean_trace_db);
            }
        }
    }
    else
    {
        for (std::size_t vi = 0; vi < config.values.size(); ++vi)
        {
            for (auto estimator : config.estimators)
            {
                PointSettings ps = point_settings_for(config, config.values[vi]);
                if (config.variable == SweepVariable::CodebookSize &&
                    estimator != EstimatorKind::DpssTwoStep)
                    ps.beta = beta_for_size(estimator, config.values[vi],
                                            config.scenario.n_t, config.scenario.n_r);
                PointResult pr = run_point(config, estimator, ps, static_cast<int>(vi));
                SweepRow row;
                row.sweep_variable = to_string(config.variable);
                row.sweep_value = config.values[vi];
                row.estimator = to_string(estimator);
                row.mean_nmse_db = pr.mean_db;
                row.stddev_db = pr.std_db;
                row.trials = pr.trials;
                row.codebook_size = pr.codebook_size;
                row.wall_time_s = pr.seconds;
                result.rows.push_back(row);
                result.traces.push_back(pr.mean_trace_db);
            }
        }
    }

    if (!config.csv_path.empty() || !config.json_path.empty())
        emit_results(result, config.csv_path, config.json_path);
    return result;
}

std::vector<Table1Row> table1_search(const ExperimentConfig &config, const Table1Config &table)
{
    if (table.targets_db.empty())
        throw std::invalid_argument("table1_search: no targets");
    if (table.dft_betas.empty() || table.spherical_betas.empty())
        throw std::invalid_argument("table1_search: empty size grid");

    struct SizePoint
    {
        long size;
        double mean_db;
    };
    auto evaluate = [&](EstimatorKind estimator, const std::vector<double> &betas) {
        std::vector<SizePoint> points;
        for (double beta : betas)
        {
            PointSettings ps;
            ps.mu = config.mu;
            ps.beta = beta;
            ps.beta_loc = config.beta_loc;
            ps.iters = config.omp.max_iters;
            PointResult pr = run_point(config, estimator, ps, 0);
            points.push_back({pr.codebook_size, pr.mean_db});
        }
        std::sort(points.begin(), points.end(),
                  [](const SizePoint &a, const SizePoint &b) { return a.size < b.size; });
        return points;
    };

    std::vector<SizePoint> dft = evaluate(EstimatorKind::Dft, table.dft_betas);
    std::vector<SizePoint> sph = evaluate(EstimatorKind::Spherical, table.spherical_betas);

    PointSettings ps;
    ps.mu = config.mu;
    ps.beta = config.beta;
    ps.beta_loc = config.beta_loc;
    ps.iters = config.omp.max_iters;
    PointResult dpss = run_point(config, EstimatorKind::DpssTwoStep, ps, 0);

    std::vector<Table1Row> rows;
    auto emit_codebook = [&](const std::string &name, const std::vector<SizePoint> &points) {
        for (double target : table.targets_db)
        {
            Table1Row row;
            row.codebook = name;
            row.target_db = target;
            row.size = -1;
            row.achieved_nmse_db = std::numeric_limits<double>::quiet_NaN();
            for (const auto &p : points)
                if (p.mean_db <= target)
                {
                    row.size = p.size;
                    row.achieved_nmse_db = p.mean_db;
                    break;
                }
            rows.push_back(row);
        }
    };
    emit_codebook("dft", dft);
    emit_codebook("spherical", sph);
    for (double target : table.targets_db)
    {
        Table1Row row;
        row.codebook = "dpss";
        row.target_db = target;
        if (dpss.mean_db <= target)
        {
            row.size = dpss.codebook_size;
            row.achieved_nmse_db = dpss.mean_db;
        }
        else
        {
            row.size = -1;
            row.achieved_nmse_db = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(row);
    }
    return rows;
}

// ----------------------------------------------------------------- output

namespace
{

std::string format_double(const char *fmt, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

} // namespace

std::string results_to_csv_text(const SweepResult &result)
{
    std::string out =
        "sweep_variable,sweep_value,estimator,mean_nmse_db,stddev_db,trials,codebook_size,"
        "wall_time_s\n";
    for (const auto &row : result.rows)
    {
        out += row.sweep_variable;
        out += ',';
        out += format_double("%g", row.sweep_value);
        out += ',';
        out += row.estimator;
        out += ',';
        out += format_double("%.4f", row.mean_nmse_db);
        out += ',';
        out += format_double("%.4f", row.stddev_db);
        out += ',';
        out += std::to_string(row.trials);
        out += ',';
        out += std::to_string(row.codebook_size);
        out += ',';
        out += format_double("%.3f", row.wall_time_s);
        out += '\n';
    }
    return out;
}

void emit_results(const SweepResult &result, const std::string &csv_path,
                  const std::string &json_path)
{
    if (!csv_path.empty())
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f)
            throw std::runtime_error("emit_results: cannot write " + csv_path);
        f << results_to_csv_text(result);
    }
    if (!json_path.empty())
    {
        ordered_json rows = ordered_json::array();
        for (const auto &row : result.rows)
            rows.push_back(ordered_json{{"sweep_variable", row.sweep_variable},
                                        {"sweep_value", row.sweep_value},
                                        {"estimator", row.estimator},
                                        {"mean_nmse_db", row.mean_nmse_db},
                                        {"stddev_db", row.stddev_db},
                                        {"trials", row.trials},
                                        {"codebook_size", row.codebook_size},
                                        {"wall_time_s", row.wall_time_s}});
        ordered_json doc{{"config", config_to_json(result.config)}, {"rows", rows}};
        std::ofstream f(json_path, std::ios::binary);
        if (!f)
            throw std::runtime_error("emit_results: cannot write " + json_path);
        f << doc.dump(2) << '\n';
    }
}

SweepResult results_from_json_text(const std::string &text)
{
    ordered_json doc = ordered_json::parse(text);
    SweepResult result;
    result.config = config_from_json(doc.at("config"));
    for (const auto &j : doc.at("rows"))
    {
        SweepRow row;
        row.sweep_variable = j.at("sweep_variable").get<std::string>();
        row.sweep_value = j.at("sweep_value").get<double>();
        row.estimator = j.at("estimator").get<std::string>();
        row.mean_nmse_db = j.at("mean_nmse_db").get<double>();
        row.stddev_db = j.at("stddev_db").get<double>();
        row.trials = j.at("trials").get<int>();
        row.codebook_size = j.at("codebook_size").get<long>();
        row.wall_time_s = j.at("wall_time_s").get<double>();
        result.rows.push_back(row);
    }
    return result;
}

void emit_table1_csv(const std::vector<Table1Row> &rows, const std::string &csv_path)
{
    std::ofstream f(csv_path, std::ios::binary);
    if (!f)
        throw std::runtime_error("emit_table1_csv: cannot write " + csv_path);
    f << "codebook,target_nmse_db,required_size,achieved_nmse_db\n";
    for (const auto &row : rows)
    {
        f << row.codebook << ',' << format_double("%g", row.target_db) << ',';
        if (row.size < 0)
            f << "N/A";
        else
            f << row.size;
        f << ',';
        if (std::isnan(row.achieved_nmse_db))
            f << "N/A";
        else
            f << format_double("%.4f", row.achieved_nmse_db);
        f << '\n';
    }
}

} // namespace nfce
