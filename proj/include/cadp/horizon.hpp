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

// Receding-horizon control on top of the finite-horizon recursion.
//
// The continuous system xdot = f(x) + g(x) v is discretized with forward
// Euler at the planning step T_p, the control is augmented with a slack
// delta that only enters the safety constraint, and every T_s seconds the
// nominal trajectory is re-simulated under the previous policy (forward
// pass) and the policy is recomputed (backward pass). The applied control is
// the leading l_v entries of the stage-0 policy evaluated at the current state.

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cadp/cbf.hpp"
#include "cadp/solver.hpp"

namespace cadp
{

    /// How the integral cost over [t, t+T] becomes stage costs.
    enum class CostQuadrature
    {
        Riemann, // integrand sampled at t + i T_p, weighted by T_p (terminal too)
        Sampled, // integrand sampled at t + i T_p, unit weight
    };

    struct HorizonConfig
    {
        double T = 20.0;    // horizon [s]
        double T_p = 0.05;  // planning step [s]
        double T_s = 0.05;  // update period [s], 0 < T_s <= T_p
        double eta = 1.0;   // softplus sharpness
        double r_delta = 0.2e10;
        CostQuadrature quadrature = CostQuadrature::Riemann;

        /// N = T / T_p
        int stages() const;
        void validate() const;
    };

    /// Time-varying weights of the running cost
    /// 1/2 x'Q(t)x + Gamma(t)'x + 1/2 v'R_v(t)v + Omega_v(t)'v.
    struct RunningCost
    {
        std::function<Matrix(double)> Q;
        std::function<Vector(double)> Gamma;
        std::function<Matrix(double)> R_v;
        std::function<Vector(double)> Omega_v;

        static RunningCost constant(Matrix Q, Vector Gamma, Matrix R_v, Vector Omega_v);
    };

    struct SampledCosts
    {
        std::vector<StageCost> stages;
        TerminalCost terminal;
    };

    /// [g_d(x) 0]: appends the slack column.
    Matrix augment_with_slack(const Matrix &g_d);

    /// F(x) = x + T_p f(x), G(x) = [T_p g(x) 0].
    DiscreteDynamics discretize(const ContinuousDynamics &dynamics, double T_p);

    /// Stage and terminal costs of update window k (window start k T_s).
    SampledCosts sample_stage_costs(int k, const HorizonConfig &cfg, const RunningCost &running);

    /// xbar_0 = x_now, xbar_{i+1} = F(xbar_i) + G(xbar_i) u*_i(xbar_i), i < N-1.
    std::vector<Vector> forward_pass(const PolicySequence &previous, const Vector &x_now);

    struct HorizonUpdate
    {
        PolicySequence policy;
        double solve_ms = 0.0; // forward + backward pass wall time
    };

    /// One iteration of the receding-horizon loop. For k = 0 the nominal
    /// trajectory is `initial_nominal`; afterwards it comes from a forward pass
    /// of `previous` started at x_now.
    HorizonUpdate rh_update(int k, const Vector &x_now, const HorizonConfig &cfg,
                            const RunningCost &running, const StageConstraint &constraint,
                            const DiscreteDynamics &dyn, const PolicySequence *previous,
                            const std::vector<Vector> *initial_nominal,
                            const SolverOptions &opts = {});

    struct ControlSplit
    {
        Vector v;
        double delta = 0.0;
    };

    /// v = [I 0] u*_0(x), delta = [0 1] u*_0(x).
    ControlSplit extract_control(const PolicySequence &policy, const Vector &x);

    /// Simulates the discretized dynamics from x0 for N steps under `control`
    /// (returning v only; the slack is zero), returning xbar_0..xbar_{N-1}.
    std::vector<Vector> rollout_nominal(const DiscreteDynamics &dyn, const Vector &x0, int stages,
                                        const std::function<Vector(const Vector &)> &control);

} // namespace cadp
