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

// Construction and execution of a single benchmark trial.

#pragma once

#include <memory>
#include <string>

#include "cadp/metrics.hpp"
#include "cadp/scenario.hpp"

namespace cadp::bench
{

    /// Everything a controller for one goal needs.
    struct TrialSetup
    {
        robot::SafeSet safe;
        StageConstraint constraint;
        ContinuousDynamics plant;
        DiscreteDynamics discrete;
        RunningCost running;
        Vector x_d;
    };

    TrialSetup make_setup(const Scenario &s, const Eigen::Vector2d &goal);

    /// The receding-horizon controller, seeded with a rollout of the naive
    /// goal-seeking control as its first nominal trajectory.
    std::unique_ptr<FeedbackController> make_cadp_controller(const Scenario &s, const TrialSpec &spec,
                                                             const TrialSetup &setup,
                                                             const SolverOptions &opts = {});

    std::unique_ptr<FeedbackController> make_naive_cbf_controller(const Scenario &s, const TrialSpec &spec,
                                                                  const TrialSetup &setup);

    SimulationConfig simulation_config(const Scenario &s, const TrialSpec &spec);
    MetricWeights metric_weights(const Scenario &s);

    struct TrialResult
    {
        TrialSpec spec;
        ClosedLoopLog log;
        TrialMetrics metrics;
        std::string status = "ok"; // error message when the run aborted
        double wall_ms = 0.0;
        double mean_solve_ms = 0.0;
        double max_solve_ms = 0.0;
        int updates = 0;

        bool completed() const { return status == "ok"; }
    };

    /// Runs the trial to T_f. Solver and simulation errors end the run early;
    /// the partial trace is kept and the trial counts as a failure.
    TrialResult run_trial(const Scenario &s, const TrialSpec &spec, const SolverOptions &opts = {});

    struct SafetyAudit
    {
        bool psi0_ok = true;
        bool speed_ok = true;
        bool turn_ok = true;
        bool constraint_ok = true;

        bool ok() const { return psi0_ok && speed_ok && turn_ok; }
    };

    /// Checks the logged extrema against the safe set with the simulation
    /// slack of 1e-6 (1e-9 for the instantaneous constraint).
    SafetyAudit audit_safety(const TrialMetrics &m, const robot::ScenarioLimits &limits);

} // namespace cadp::bench
