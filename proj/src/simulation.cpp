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

#include "cadp/simulation.hpp"

#include <cmath>
#include <limits>

#include "cadp/errors.hpp"

namespace cadp
{

    CadpController::CadpController(HorizonConfig cfg, RunningCost running, StageConstraint constraint,
                                   DiscreteDynamics dynamics, NominalFn initial_nominal,
                                   SolverOptions opts)
        : cfg_(cfg), running_(std::move(running)), constraint_(std::move(constraint)),
          dynamics_(std::move(dynamics)), initial_nominal_(std::move(initial_nominal)), opts_(opts)
    {
        cfg_.validate();
        if (!initial_nominal_)
            throw ConfigError("an initial nominal trajectory generator is required");
    }

    double CadpController::refresh(int k, double, const Vector &x)
    {
        std::vector<Vector> nominal;
        if (!policy_)
            nominal = initial_nominal_(x, cfg_.stages());
        HorizonUpdate update = rh_update(k, x, cfg_, running_, constraint_, dynamics_,
                                         policy_ ? &*policy_ : nullptr, &nominal, opts_);
        policy_ = std::move(update.policy);
        return update.solve_ms;
    }

    ControlSample CadpController::control(double, const Vector &x) const
    {
        const StagePoint p = policy().evaluate(0, x);
        const Vector u = p.control();
        const Eigen::Index lv = u.size() - 1;
        return {u.head(lv), u(lv), p.desired_control().head(lv), p.constraint.value(u)};
    }

    const PolicySequence &CadpController::policy() const
    {
        if (!policy_)
            throw ConfigError("controller has not been refreshed yet");
        return *policy_;
    }

    void ClosedLoopLog::validate() const
    {
        const std::size_t n = t.size();
        if (x.size() != n || v.size() != n || delta.size() != n || v_desired.size() != n ||
            psi0.size() != n || chain.size() != n || constraint.size() != n ||
            solve_ms.size() != n || update.size() != n)
            throw ConfigError("closed-loop log traces have inconsistent lengths");
        for (std::size_t j = 1; j < n; ++j)
            if (!(t[j] > t[j - 1]))
                throw ConfigError("closed-loop log time grid is not strictly increasing");
    }

    Vector rk4_step(const ContinuousDynamics &plant, const Vector &x, const Vector &v, double dt)
    {
        const auto rhs = [&](const Vector &y) -> Vector { return plant.f(y) + plant.g(y) * v; };
        const Vector k1 = rhs(x);
        const Vector k2 = rhs(x + 0.5 * dt * k1);
        const Vector k3 = rhs(x + 0.5 * dt * k2);
        const Vector k4 = rhs(x + dt * k3);
        return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    ClosedLoopLog run_closed_loop(const ContinuousDynamics &plant, const Vector &x0,
                                  FeedbackController &controller, const SimulationConfig &cfg,
                                  const HigherOrderChain *chain)
    {
        ClosedLoopLog log;
        run_closed_loop_into(log, plant, x0, controller, cfg, chain);
        return log;
    }

    void run_closed_loop_into(ClosedLoopLog &log, const ContinuousDynamics &plant, const Vector &x0,
                              FeedbackController &controller, const SimulationConfig &cfg,
                              const HigherOrderChain *chain)
    {
        log = ClosedLoopLog{};
        if (!(cfg.zoh_rate > 0.0) || !(cfg.duration >= 0.0))
            throw ConfigError("simulation needs a positive ZOH rate and a nonnegative duration");
        if (chain)
        {
            for (double psi : lift_chain(*chain, x0))
                if (psi < 0.0)
                    throw ConfigError("initial state is outside the safe set");
        }

        const double period = 1.0 / cfg.zoh_rate;
        const double h_max = cfg.integrator_step > 0.0 ? std::min(cfg.integrator_step, period) : period / 5.0;
        const int substeps = static_cast<int>(std::ceil(period / h_max - 1e-9));
        const double h = period / substeps;
        const long ticks = std::lround(cfg.duration / period);
        const double T_s = controller.update_period();

        const auto reserve = static_cast<std::size_t>(ticks + 1);
        log.t.reserve(reserve);
        log.x.reserve(reserve);
        log.v.reserve(reserve);
        log.v_desired.reserve(reserve);

        Vector x = x0;
        long last_update = -1;
        for (long j = 0; j <= ticks; ++j)
        {
            const double t = j * period;
            if (!x.allFinite() || x.cwiseAbs().maxCoeff() > cfg.escape_bound)
                throw SimulationError(t, "state left the numeric range");

            double solve_ms = 0.0;
            bool refreshed = false;
            const long k = T_s > 0.0 ? static_cast<long>(std::floor(t / T_s + 1e-9)) : 0;
            if (k != last_update && (T_s > 0.0 || last_update < 0))
            {
                solve_ms = controller.refresh(static_cast<int>(k), t, x);
                last_update = k;
                refreshed = true;
            }
            const ControlSample c = controller.control(t, x);

            log.t.push_back(t);
            log.x.push_back(x);
            log.v.push_back(c.v);
            log.delta.push_back(c.delta);
            log.v_desired.push_back(c.v_desired);
            log.constraint.push_back(c.constraint_value);
            log.solve_ms.push_back(solve_ms);
            log.update.push_back(refreshed ? 1 : 0);
            if (chain)
            {
                log.chain.push_back(lift_chain(*chain, x));
                log.psi0.push_back(log.chain.back().front());
            }
            else
            {
                log.chain.emplace_back();
                log.psi0.push_back(std::numeric_limits<double>::quiet_NaN());
            }

            if (j == ticks)
                break;
            for (int s = 0; s < substeps; ++s)
                x = rk4_step(plant, x, c.v, h);
        }
    }

} // namespace cadp
