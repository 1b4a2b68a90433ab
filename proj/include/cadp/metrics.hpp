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

// Benchmark metrics of one closed-loop trial and their min-max
// normalization across a pool of trials.

#pragma once

#include <vector>

#include "cadp/simulation.hpp"

namespace cadp::bench
{

    struct MetricWeights
    {
        Vector Q;      // state weight diagonal
        Vector R_v;    // control weight diagonal
        double d_tol = 0.25;
        double T_f = 120.0;
        bool cd_skip_updates = true; // exclude policy-update jumps from CD
    };

    struct TrialMetrics
    {
        int SI = 1;        // 0 on success
        double AT = 0.0;   // arrival time [s], T_f on failure
        double TC = 0.0;   // integrated running cost
        double CM = 0.0;   // max ||v|| [V]
        double CD = 0.0;   // max ||dv/dt|| [V/s]
        double CI = 0.0;   // max ||v - v_d|| [V]

        double final_distance = 0.0;
        double min_psi0 = 0.0;
        double max_abs_s = 0.0;
        double max_abs_omega = 0.0;
        double min_constraint = 0.0;
    };

    struct NormalizedMetrics
    {
        double SI = 1.0;
        double AT = 1.0;
        double TC = 1.0;
        double CM = 1.0;
        double CD = 1.0;
        double CI = 1.0;
    };

    /// Metrics of one trace. x_d is the goal state; the tolerance ball is
    /// on the position only.
    TrialMetrics compute_metrics(const ClosedLoopLog &log, const Vector &x_d, const MetricWeights &w);

    /// (max - m) / (max - min) per metric, so 1 is best. A column with a single
    /// distinct value normalizes to 1 everywhere.
    std::vector<NormalizedMetrics> normalize_metrics(const std::vector<TrialMetrics> &all);

    /// The min-max map applied to one column.
    std::vector<double> normalize_column(const std::vector<double> &values);

} // namespace cadp::bench
