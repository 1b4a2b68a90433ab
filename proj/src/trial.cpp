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

#include "cadp/trial.hpp"

#include <chrono>

#include "cadp/errors.hpp"

namespace cadp::bench
{

    TrialSetup make_setup(const Scenario &s, const Eigen::Vector2d &goal)
    {
        robot::ScenarioLimits limits = s.limits;
        limits.goal = goal;
        robot::SafeSet safe = robot::assemble_safe_set(s.map, limits, s.params);
        StageConstraint constraint = make_stage_constraint(safe.chain, linear_class_k(s.weights.kappa));
        ContinuousDynamics plant = robot::robot_dynamics(s.params);
        DiscreteDynamics discrete = discretize(plant, s.horizon.T_p);

        const Vector x_d = goal_state(goal);
        const Matrix Q = s.weights.Q.asDiagonal();
        // Minimizing (x - x_d)'Q(x - x_d) / 2 gives the linear term -Q x_d.
        RunningCost running = RunningCost::constant(Q, -Q * x_d, s.weights.R_v.asDiagonal(), s.weights.Omega_v);
        return {std::move(safe), std::move(constraint), std::move(plant), std::move(discrete),
                std::move(running), x_d};
    }

    std::unique_ptr<FeedbackController> make_cadp_controller(const Scenario &s, const TrialSpec &spec,
                                                             const TrialSetup &setup,
                                                             const SolverOptions &opts)
    {
        CadpController::NominalFn nominal =
            [dyn = setup.discrete, goal = spec.goal, gains = s.weights.naive, p = s.params](const Vector &x0,
                                                                                           int stages)
        {
            return rollout_nominal(dyn, x0, stages, [&](const Vector &x)
                                   { return baselines::naive_control(x, goal, gains, p); });
        };
        return std::make_unique<CadpController>(s.horizon, setup.running, setup.constraint, setup.discrete,
                                                std::move(nominal), opts);
    }

    std::unique_ptr<FeedbackController> make_naive_cbf_controller(const Scenario &s, const TrialSpec &spec,
                                                                  const TrialSetup &setup)
    {
        return std::make_unique<baselines::NaiveCbfController>(spec.goal, s.weights.naive, s.params,
                                                               setup.constraint, s.horizon.r_delta);
    }

    SimulationConfig simulation_config(const Scenario &s, const TrialSpec &spec)
    {
        SimulationConfig cfg;
        cfg.duration = spec.T_f;
        cfg.zoh_rate = s.zoh_rate;
        return cfg;
    }

    MetricWeights metric_weights(const Scenario &s)
    {
        MetricWeights w;
        w.Q = s.weights.Q;
        w.R_v = s.weights.R_v;
        w.d_tol = s.limits.d_tol;
        w.T_f = s.limits.T_f;
        return w;
    }

    TrialResult run_trial(const Scenario &s, const TrialSpec &spec, const SolverOptions &opts)
    {
        using clock = std::chrono::steady_clock;
        const auto start = clock::now();

        TrialResult result;
        result.spec = spec;
        const TrialSetup setup = make_setup(s, spec.goal);
        std::unique_ptr<FeedbackController> controller =
            spec.method == Method::Cadp ? make_cadp_controller(s, spec, setup, opts)
                                        : make_naive_cbf_controller(s, spec, setup);
        try
        {
            run_closed_loop_into(result.log, setup.plant, spec.start, *controller, simulation_config(s, spec),
                                 &setup.safe.chain);
        }
        catch (const Error &e)
        {
            result.status = e.what();
        }

        result.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
        for (std::size_t j = 0; j < result.log.size(); ++j)
        {
            if (!result.log.update[j])
                continue;
            ++result.updates;
            result.mean_solve_ms += result.log.solve_ms[j];
            result.max_solve_ms = std::max(result.max_solve_ms, result.log.solve_ms[j]);
        }
        if (result.updates > 0)
            result.mean_solve_ms /= result.updates;

        if (result.log.size() > 0)
            result.metrics = compute_metrics(result.log, setup.x_d, metric_weights(s));
        else
            result.metrics.AT = s.limits.T_f;
        return result;
    }

    SafetyAudit audit_safety(const TrialMetrics &m, const robot::ScenarioLimits &limits)
    {
        constexpr double slack = 1e-6;
        SafetyAudit a;
        a.psi0_ok = m.min_psi0 >= -slack;
        a.speed_ok = m.max_abs_s <= limits.s_bar + slack;
        a.turn_ok = m.max_abs_omega <= limits.omega_bar + slack;
        a.constraint_ok = m.min_constraint >= -1e-9;
        return a;
    }

} // namespace cadp::bench
