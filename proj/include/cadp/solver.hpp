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

// Constrained approximate dynamic programming.
//
// Every stage has the same closed-form policy
//
//   W_i(x)  = (R_i + G(x)' P_{i+1} G(x))^-1
//   k_i(x)  = -W_i(x) [G(x)' (P_{i+1} F(x) + T_{i+1}) + Omega_i]
//   z_i(x)  = (-a_i(x) - b_i(x)' k_i(x)) / (b_i(x)' W_i(x) b_i(x))
//   u_i*(x) = k_i(x) + max(0, z_i(x)) W_i(x) b_i(x)
//
// and the cost-to-go 1/2 x'P_i x + T_i'x is propagated backwards by
// linearizing the softplus-smoothed policy u~_i (max replaced by softplus)
// around the nominal state xbar_i:
//
//   K_i = du~_i/dx (xbar_i),  A~_i = d(F + G u~_i)/dx (xbar_i)
//   P_i = Q_i + K_i' R_i K_i + A~_i' P_{i+1} A~_i
//   T_i = A~_i' (P_{i+1} (F(xbar_i) + G(xbar_i) u_i*(xbar_i) - A~_i xbar_i) + T_{i+1})
//       + K_i' (R_i u_i*(xbar_i) - R_i K_i xbar_i + Omega_i) + Gamma_i
//
// starting from P_N = Q_N, T_N = Gamma_N.

#pragma once

#include <vector>

#include "cadp/problem.hpp"

namespace cadp
{

    /// (1/eta) log(1 + exp(eta z)), evaluated without overflow.
    double softplus(double z, double eta);

    /// Inputs of one stage of the recursion. References must outlive the view.
    /// W computed once for a given G(x). Reused whenever G(x) compares equal,
    /// which for state-independent input matrices is every evaluation.
    struct GainCache
    {
        Matrix G;
        Matrix W;
    };

    struct StageData
    {
        const StageCost &cost;
        const ValueQuadratic &next; // P_{i+1}, T_{i+1}
        const StageConstraint &constraint;
        const DiscreteDynamics &dynamics;
        int index = -1;
        const GainCache *gain = nullptr;
    };

    /// Everything the closed-form policy needs at one state, computed once.
    struct StagePoint
    {
        Vector F;
        Matrix G;
        Matrix W;
        Vector k;
        AffineConstraint constraint;
        Vector Wb;               // W b
        double bWb = 0.0;        // b' W b
        bool degenerate = false; // ||b|| < b_epsilon, treated as b = 0
        double z = 0.0;          // argument of max / softplus
        double lambda = 0.0;     // max(0, z)

        Vector control() const;                     // u*
        Vector smoothed_control(double eta) const;  // u~
        Vector desired_control() const { return k; } // lambda = 0 branch
    };

    Matrix gain_W(const Matrix &G, const Matrix &R, const Matrix &P_next,
                  double max_condition = SolverOptions{}.max_condition, int stage = -1);
    Matrix gain_W(const Vector &x, const StageCost &cost, const Matrix &P_next,
                  const DiscreteDynamics &dyn, const SolverOptions &opts = {}, int stage = -1);

    Vector nominal_gain_k(const Vector &x, const StageCost &cost, const Matrix &P_next,
                          const Vector &T_next, const DiscreteDynamics &dyn,
                          const SolverOptions &opts = {}, int stage = -1);

    /// max(0, z). Sets `z_out` (when non-null) to the unclipped argument.
    double multiplier_lambda(const AffineConstraint &c, const Vector &k, const Matrix &W,
                             const SolverOptions &opts = {}, int stage = -1, double *z_out = nullptr);
    double multiplier_lambda(const Vector &x, const StageConstraint &constraint, const Vector &k,
                             const Matrix &W, const SolverOptions &opts = {}, int stage = -1);

    StagePoint evaluate_stage(const StageData &stage, const Vector &x, const SolverOptions &opts);

    struct StageJacobians
    {
        Matrix K;       // m x n
        Matrix A_tilde; // n x n
    };

    /// Central differences with one Richardson halving around xbar.
    StageJacobians stage_jacobians(const StageData &stage, const Vector &xbar,
                                   const SolverOptions &opts);

    struct RiccatiStep
    {
        ValueQuadratic value;
        StageJacobians jacobians;
        Vector u_nominal; // u*(xbar)
        GainCache gain;   // G and W at xbar
    };

    RiccatiStep riccati_step(const StageData &stage, const Vector &xbar, const SolverOptions &opts);

    /// Approximate stage cost l_i(x, u) + 1/2 y'P_{i+1}y + T_{i+1}'y with y = F(x) + G(x)u.
    double approx_stage_cost(const StageCost &cost, const Matrix &P_next, const Vector &T_next,
                             const DiscreteDynamics &dyn, const Vector &x, const Vector &u);

    struct PolicyStage
    {
        StageCost cost;
        StageConstraint constraint;
        Matrix K;
        Matrix A_tilde;
        GainCache gain; // W at the nominal state
    };

    /// Result of a backward pass. Immutable; safe to share read-only.
    class PolicySequence
    {
    public:
        PolicySequence() = default;
        PolicySequence(DiscreteDynamics dynamics, SolverOptions options,
                       std::vector<PolicyStage> stages, std::vector<ValueQuadratic> values,
                       std::vector<Vector> nominal);

        int horizon() const { return static_cast<int>(stages_.size()); }
        int state_dim() const;
        int control_dim() const;

        const PolicyStage &stage(int i) const { return stages_.at(i); }
        /// P_i, T_i for i = 0..N.
        const ValueQuadratic &value(int i) const { return values_.at(i); }
        const std::vector<Vector> &nominal() const { return nominal_; }
        const DiscreteDynamics &dynamics() const { return dynamics_; }
        const SolverOptions &options() const { return options_; }

        StageData stage_data(int i) const;
        StagePoint evaluate(int i, const Vector &x) const;

    private:
        DiscreteDynamics dynamics_;
        SolverOptions options_;
        std::vector<PolicyStage> stages_;
        std::vector<ValueQuadratic> values_;
        std::vector<Vector> nominal_;
    };

    Vector policy_eval(const PolicySequence &policy, int i, const Vector &x);
    Vector smoothed_policy_eval(const PolicySequence &policy, int i, const Vector &x);
    Vector closed_loop_map(const PolicySequence &policy, int i, const Vector &x);
    StageJacobians stage_jacobians(const PolicySequence &policy, int i, const Vector &xbar);

    /// Backward recursion over the nominal trajectory xbar_0..xbar_{N-1}.
    /// `constraints` holds either N entries or a single entry shared by all stages.
    PolicySequence backward_pass(const std::vector<Vector> &nominal,
                                 const std::vector<StageCost> &costs,
                                 const TerminalCost &terminal,
                                 const std::vector<StageConstraint> &constraints,
                                 const DiscreteDynamics &dyn,
                                 const SolverOptions &opts = {});

} // namespace cadp
