/*
 Copyright 2026 The cadp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "cadp/suite.hpp"

#include <exception>
#include <fstream>

#include <fmt/format.h>
#include <fmt/os.h>
#include <json.hpp>
#include <omp.h>
#include <spdlog/spdlog.h>

#include "cadp/errors.hpp"
#include "cadp/trace_csv.hpp"

namespace cadp::bench
{

    namespace fs = std::filesystem;
    using nlohmann::json;

    namespace
    {
        fs::path trace_path(const fs::path &dir, const TrialSpec &spec)
        {
            return dir / "trials" / (spec.id() + ".csv");
        }

        void write_json(const fs::path &path, const json &j)
        {
            std::ofstream out(path);
            if (!out)
                throw ConfigError("cannot write " + path.string());
            out << j.dump(2) << '\n';
        }

        json read_json(const fs::path &path)
        {
            std::ifstream in(path);
            if (!in)
                throw ConfigError("cannot open " + path.string());
            try
            {
                return json::parse(in);
            }
            catch (const json::exception &e)
            {
                throw ConfigError("cannot parse " + path.string() + ": " + e.what());
            }
        }

        json manifest_json(const Scenario &s, const SuiteResult &r, std::uint64_t seed)
        {
            json trials = json::array();
            for (const TrialRecord &t : r.trials)
            {
                json start = json::array();
                for (Eigen::Index i = 0; i < t.spec.start.size(); ++i)
                    start.push_back(t.spec.start(i));
                trials.push_back({{"id", t.spec.id()},
                                  {"method", to_string(t.spec.method)},
                                  {"goal_index", t.spec.goal_index},
                                  {"start_index", t.spec.start_index},
                                  {"goal", {t.spec.goal.x(), t.spec.goal.y()}},
                                  {"start", start},
                                  {"T_f", t.spec.T_f},
                                  {"status", t.status},
                                  {"trace", "trials/" + t.spec.id() + ".csv"}});
            }
            return {{"scenario", s.name}, {"seed", seed}, {"trials", trials}};
        }

        void normalize(SuiteResult &r)
        {
            std::vector<TrialMetrics> all;
            all.reserve(r.trials.size());
            for (const TrialRecord &t : r.trials)
                all.push_back(t.metrics);
            r.normalized = normalize_metrics(all);
        }
    } // namespace

    SuiteResult run_suite(const Scenario &s, const SuiteOptions &opts, const fs::path &out)
    {
        s.validate();
        if (opts.jobs < 1)
            throw ConfigError("--jobs must be at least 1");

        std::vector<TrialSpec> specs = make_trials(s, opts.seed);
        if (opts.method)
            std::erase_if(specs, [&](const TrialSpec &t) { return t.method != *opts.method; });
        if (specs.empty())
            throw ConfigError("the scenario has no trials for the requested method");

        fs::create_directories(out / "trials");
        write_json(out / "config.json", scenario_to_json(s));

        SuiteResult result;
        result.trials.resize(specs.size());
        std::vector<std::exception_ptr> errors(specs.size());
        const long count = static_cast<long>(specs.size());

        spdlog::info("{}: {} trials on {} thread(s)", s.name, count, opts.jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(opts.jobs)
        for (long i = 0; i < count; ++i)
        {
            try
            {
                TrialResult r = run_trial(s, specs[i], opts.solver);
                write_trace(trace_path(out, specs[i]), r.log);
                result.trials[i] = {r.spec, r.metrics, r.status, r.wall_ms,
                                    r.mean_solve_ms, r.max_solve_ms, r.updates};
                spdlog::info("{} {}: SI={} AT={:.2f} min psi0={:.3g} ({:.1f} s, {:.2f} ms/update)",
                             s.name, specs[i].id(), r.metrics.SI, r.metrics.AT, r.metrics.min_psi0,
                             r.wall_ms / 1000.0, r.mean_solve_ms);
                if (!r.completed())
                    spdlog::warn("{} {} stopped early: {}", s.name, specs[i].id(), r.status);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
        for (const std::exception_ptr &e : errors)
            if (e)
                std::rethrow_exception(e);

        normalize(result);
        write_metrics_csv(out / "metrics.csv", result, s.limits);
        write_summary_json(out / "summary.json", s, result);
        write_timing_csv(out / "timing.csv", result);
        write_json(out / "manifest.json", manifest_json(s, result, opts.seed));
        return result;
    }

    SuiteResult recompute_metrics(const fs::path &dir)
    {
        const Scenario s = scenario_from_json(read_json(dir / "config.json"));
        const json manifest = read_json(dir / "manifest.json");

        SuiteResult result;
        try
        {
            for (const json &t : manifest.at("trials"))
            {
                TrialRecord rec;
                rec.spec.method = method_from_string(t.at("method").get<std::string>());
                rec.spec.goal_index = t.at("goal_index").get<int>();
                rec.spec.start_index = t.at("start_index").get<int>();
                rec.spec.goal = {t.at("goal").at(0).get<double>(), t.at("goal").at(1).get<double>()};
                const json &start = t.at("start");
                rec.spec.start.resize(static_cast<Eigen::Index>(start.size()));
                for (std::size_t i = 0; i < start.size(); ++i)
                    rec.spec.start(static_cast<Eigen::Index>(i)) = start.at(i).get<double>();
                rec.spec.scenario = s.name;
                rec.spec.seed = manifest.value("seed", std::uint64_t{0});
                rec.spec.T_f = t.at("T_f").get<double>();
                rec.status = t.at("status").get<std::string>();

                const ClosedLoopLog log = read_trace(dir / t.at("trace").get<std::string>());
                if (log.size() > 0)
                    rec.metrics = compute_metrics(log, goal_state(rec.spec.goal), metric_weights(s));
                else
                    rec.metrics.AT = s.limits.T_f;
                result.trials.push_back(std::move(rec));
            }
        }
        catch (const json::exception &e)
        {
            throw ConfigError("malformed manifest.json: " + std::string(e.what()));
        }

        normalize(result);
        write_metrics_csv(dir / "metrics.csv", result, s.limits);
        write_summary_json(dir / "summary.json", s, result);
        return result;
    }

    void write_metrics_csv(const fs::path &path, const SuiteResult &r, const robot::ScenarioLimits &limits)
    {
        auto out = fmt::output_file(path.string());
        out.print("trial,method,goal,start,status,SI,AT,TC,CM,CD,CI,SI_n,AT_n,TC_n,CM_n,CD_n,CI_n,"
                  "min_psi0,max_abs_s,max_abs_omega,min_constraint,final_distance,safe\n");
        for (std::size_t i = 0; i < r.trials.size(); ++i)
        {
            const TrialRecord &t = r.trials[i];
            const TrialMetrics &m = t.metrics;
            const NormalizedMetrics &n = r.normalized[i];
            out.print("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", t.spec.id(),
                      to_string(t.spec.method), t.spec.goal_index, t.spec.start_index,
                      t.status == "ok" ? "ok" : "error", m.SI, m.AT, m.TC, m.CM, m.CD, m.CI, n.SI, n.AT, n.TC,
                      n.CM, n.CD, n.CI, m.min_psi0, m.max_abs_s, m.max_abs_omega, m.min_constraint,
                      m.final_distance, audit_safety(m, limits).ok() ? 1 : 0);
        }
    }

    void write_summary_json(const fs::path &path, const Scenario &s, const SuiteResult &r)
    {
        json methods = json::object();
        for (Method method : {Method::Cadp, Method::NaiveCbf})
        {
            int count = 0, successes = 0, safe = 0;
            TrialMetrics sum;
            sum.SI = 0;
            NormalizedMetrics nsum{0, 0, 0, 0, 0, 0};
            for (std::size_t i = 0; i < r.trials.size(); ++i)
            {
                const TrialRecord &t = r.trials[i];
                if (t.spec.method != method)
                    continue;
                ++count;
                successes += t.metrics.SI == 0 ? 1 : 0;
                safe += audit_safety(t.metrics, s.limits).ok() ? 1 : 0;
                sum.SI += t.metrics.SI;
                sum.AT += t.metrics.AT;
                sum.TC += t.metrics.TC;
                sum.CM += t.metrics.CM;
                sum.CD += t.metrics.CD;
                sum.CI += t.metrics.CI;
                const NormalizedMetrics &n = r.normalized[i];
                nsum = {nsum.SI + n.SI, nsum.AT + n.AT, nsum.TC + n.TC,
                        nsum.CM + n.CM, nsum.CD + n.CD, nsum.CI + n.CI};
            }
            if (count == 0)
                continue;
            const double c = count;
            methods[to_string(method)] = {
                {"trials", count},
                {"successes", successes},
                {"success_rate", successes / c},
                {"safe_trials", safe},
                {"mean", {{"SI", sum.SI / c}, {"AT", sum.AT / c}, {"TC", sum.TC / c},
                          {"CM", sum.CM / c}, {"CD", sum.CD / c}, {"CI", sum.CI / c}}},
                {"mean_normalized", {{"SI", nsum.SI / c}, {"AT", nsum.AT / c}, {"TC", nsum.TC / c},
                                     {"CM", nsum.CM / c}, {"CD", nsum.CD / c}, {"CI", nsum.CI / c}}}};
        }

        json trials = json::array();
        for (std::size_t i = 0; i < r.trials.size(); ++i)
        {
            const TrialRecord &t = r.trials[i];
            const NormalizedMetrics &n = r.normalized[i];
            json entry = {{"id", t.spec.id()},
                          {"method", to_string(t.spec.method)},
                          {"status", t.status},
                          {"normalized", {{"SI", n.SI}, {"AT", n.AT}, {"TC", n.TC},
                                          {"CM", n.CM}, {"CD", n.CD}, {"CI", n.CI}}}};
            trials.push_back(std::move(entry));
        }

        write_json(path, {{"scenario", s.name},
                          {"pool_size", r.trials.size()},
                          {"normalization", "min-max over all trials in this run; 1 is best"},
                          {"methods", methods},
                          {"trials", trials}});
    }

    void write_timing_csv(const fs::path &path, const SuiteResult &r)
    {
        auto out = fmt::output_file(path.string());
        out.print("trial,wall_ms,updates,mean_solve_ms,max_solve_ms\n");
        for (const TrialRecord &t : r.trials)
            out.print("{},{:.3f},{},{:.4f},{:.4f}\n", t.spec.id(), t.wall_ms, t.updates, t.mean_solve_ms,
                      t.max_solve_ms);
    }

} // namespace cadp::bench
