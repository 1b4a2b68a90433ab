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

// Trial grids: execution, result files and metric recomputation.
//
// Output directory layout:
//   config.json     scenario as executed
//   manifest.json   one entry per trial with its status and trace file
//   trials/<id>.csv closed-loop trace per trial
//   metrics.csv     raw and normalized metrics, one row per trial
//   summary.json    per-method means and per-trial normalized metrics
//   timing.csv      wall time and solve times per trial
//
// Everything except timing.csv and the solve_ms trace column is a pure
// function of the scenario, so metrics.csv is byte-identical across runs.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cadp/trial.hpp"

namespace cadp::bench
{

    struct SuiteOptions
    {
        std::optional<Method> method; // run only this method
        int jobs = 1;
        std::uint64_t seed = 0;
        SolverOptions solver;
    };

    struct TrialRecord
    {
        TrialSpec spec;
        TrialMetrics metrics;
        std::string status = "ok";
        double wall_ms = 0.0;
        double mean_solve_ms = 0.0;
        double max_solve_ms = 0.0;
        int updates = 0;
    };

    struct SuiteResult
    {
        std::vector<TrialRecord> trials;
        std::vector<NormalizedMetrics> normalized;
    };

    /// Runs every trial of the scenario and writes the output directory.
    SuiteResult run_suite(const Scenario &s, const SuiteOptions &opts, const std::filesystem::path &out);

    /// Re-derives metrics from the traces of a finished run and rewrites
    /// metrics.csv and summary.json.
    SuiteResult recompute_metrics(const std::filesystem::path &dir);

    void write_metrics_csv(const std::filesystem::path &path, const SuiteResult &r,
                           const robot::ScenarioLimits &limits);
    void write_summary_json(const std::filesystem::path &path, const Scenario &s, const SuiteResult &r);
    void write_timing_csv(const std::filesystem::path &path, const SuiteResult &r);

} // namespace cadp::bench
