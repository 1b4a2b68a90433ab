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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cadp/horizon.hpp"

namespace cadp
{

    struct ControlSample
    {
        Vector v;
        double delta = 0.0;
        Vector v_desired;             // control before the safety correction
        double constraint_value = 0.0; // a(x) + b(x)' [v; delta]
    };

    /// A sampled-data feedback law: refreshed every update_period() seconds,
    /// evaluated at every zero-order-hold tick.
    class FeedbackController
    {
    public:
        virtual ~FeedbackController() = default;

        /// <= 0 means the controller never needs a refresh.
        virtual double update_period() const = 0;
        /// Returns the wall time spent in milliseconds.
        virtual double refresh(int k, double t, const Vector &x) = 0;
        virtual ControlSample control(double t, const Vector &x) const = 0;
    };

    /// Receding-horizon controller: refresh() runs rh_update, control()
    /// evaluates u*_{0,k} at the current state.
    class CadpController : public FeedbackController
    {
    public:
        using NominalFn = std::function<std::vector<Vector>(const Vector &x0, int stages)>;

        CadpController(HorizonConfig cfg, RunningCost running, StageConstraint constraint,
                       DiscreteDynamics dynamics, NominalFn initial_nominal, SolverOptions opts = {});

        double update_period() const override { return cfg_.T_s; }
        double refresh(int k, double t, const Vector &x) override;
        ControlSample control(double t, const Vector &x) const override;

        const PolicySequence &policy() const;
        const HorizonConfig &config() const { return cfg_; }

    private:
        HorizonConfig cfg_;
        RunningCost running_;
        StageConstraint constraint_;
        DiscreteDynamics dynamics_;
        NominalFn initial_nominal_;
        SolverOptions opts_;
        std::optional<PolicySequence> policy_;
    };

    struct SimulationConfig
    {
        double duration = 120.0;
        double zoh_rate = 100.0;      // control ticks per second
        double integrator_step = 0.0; // <= 0: ZOH period / 5
        double escape_bound = 1e6;    // |x_j| above this aborts the run
    };

    struct ClosedLoopLog
    {
        std::vector<double> t;
        std::vector<Vector> x;
        std::vector<Vector> v;
        std::vector<double> delta;
        std::vector<Vector> v_desired;
        std::vector<double> psi0;
        std::vector<std::vector<double>> chain; // psi_0..psi_{d-1} per tick
        std::vector<double> constraint;
        std::vector<double> solve_ms; // 0 on ticks without a refresh
        std::vector<std::uint8_t> update;

        std::size_t size() const { return t.size(); }
        /// Throws ConfigError when the traces disagree in length or time is not increasing.
        void validate() const;
    };

    /// Classic fourth-order Runge-Kutta step with v held constant.
    Vector rk4_step(const ContinuousDynamics &plant, const Vector &x, const Vector &v, double dt);

    /// Integrates the plant under `controller` with a zero-order hold. When
    /// `chain` is given, x0 must lie in C and the chain values are logged.
    ClosedLoopLog run_closed_loop(const ContinuousDynamics &plant, const Vector &x0,
                                  FeedbackController &controller, const SimulationConfig &cfg,
                                  const HigherOrderChain *chain = nullptr);

    /// Same as run_closed_loop, but the ticks logged before an exception stay
    /// in `log`.
    void run_closed_loop_into(ClosedLoopLog &log, const ContinuousDynamics &plant, const Vector &x0,
                              FeedbackController &controller, const SimulationConfig &cfg,
                              const HigherOrderChain *chain = nullptr);

} // namespace cadp
