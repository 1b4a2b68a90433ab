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

// Barrier functions and the single affine safety constraint built from them.
//
// Several barriers h_1..h_n are composed into one smooth lower bound
//
//   psi_0(x) = -(1/rho) log(sum_i exp(-rho h_i(x)))
//
// which satisfies min_i h_i - log(n)/rho <= psi_0 <= min_i h_i. A chain of
// degree d lifts psi_0 until the control appears,
//
//   psi_j = L_f psi_{j-1} + alpha_{j-1}(psi_{j-1}),   j = 1..d-1,
//
// and the constraint on u = [v; delta] is
//
//   a(x) = L_f psi_{d-1}(x) + alpha(psi_{d-1}(x))
//   b(x) = [L_g psi_{d-1}(x)'; psi_{d-1}(x)]
//   a(x) + b(x)' u >= 0.

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cadp/linalg.hpp"
#include "cadp/problem.hpp"

namespace cadp
{

    struct BarrierValue
    {
        double value = 0.0;
        Vector gradient;
    };

    class Barrier
    {
    public:
        using Eval = std::function<BarrierValue(const Vector &)>;

        Barrier() = default;

        /// Value and gradient supplied together.
        static Barrier analytic(std::string label, Eval eval);
        static Barrier analytic(std::string label, std::function<double(const Vector &)> h,
                                std::function<Vector(const Vector &)> grad);
        /// Gradient by central differences with the given step.
        static Barrier numeric(std::string label, std::function<double(const Vector &)> h,
                               double step = 1e-6);

        BarrierValue evaluate(const Vector &x) const { return eval_(x); }
        double value(const Vector &x) const { return eval_(x).value; }
        Vector gradient(const Vector &x) const { return eval_(x).gradient; }
        const std::string &label() const { return label_; }

    private:
        Barrier(std::string label, Eval eval) : label_(std::move(label)), eval_(std::move(eval)) {}

        std::string label_;
        Eval eval_;
    };

    /// Central-difference gradient of a scalar function.
    Vector numeric_gradient(const std::function<double(const Vector &)> &h, const Vector &x,
                            double step);

    /// -(1/rho) log(sum exp(-rho v_i)), shifted by the minimum for stability.
    double soft_min(std::span<const double> values, double rho);

    /// softmax(-rho v): the weights of d soft_min / d v_i.
    std::vector<double> soft_min_weights(std::span<const double> values, double rho);

    class SoftMinBarrier
    {
    public:
        SoftMinBarrier(std::vector<Barrier> members, double rho);

        BarrierValue evaluate(const Vector &x) const;
        /// Member values h_i(x).
        std::vector<double> member_values(const Vector &x) const;

        Barrier as_barrier(std::string label = "psi0") const;

        std::size_t size() const { return members_.size(); }
        double rho() const { return rho_; }
        const std::vector<Barrier> &members() const { return members_; }
        /// log(n_h) / rho
        double approximation_bound() const;

    private:
        std::vector<Barrier> members_;
        double rho_;
    };

    using ClassK = std::function<double(double)>;

    /// alpha(z) = kappa z
    ClassK linear_class_k(double kappa);

    /// Spot-checks alpha(0) = 0 and monotonicity on a grid over [-range, range].
    bool looks_like_class_k(const ClassK &alpha, double range = 10.0, int samples = 201);

    struct ContinuousDynamics
    {
        std::function<Vector(const Vector &)> f;
        std::function<Matrix(const Vector &)> g;
    };

    struct HigherOrderChain
    {
        Barrier psi0;
        int degree = 1;
        std::vector<ClassK> alphas; // alpha_0..alpha_{d-2}; extra entries ignored
        ContinuousDynamics dynamics;
        double fd_step = 1e-6;      // gradient step for levels >= 1

        /// Throws ConfigError when the chain is malformed.
        void validate() const;
    };

    /// psi_0(x)..psi_{d-1}(x). x lies in the set C when every entry is >= 0.
    std::vector<double> lift_chain(const HigherOrderChain &chain, const Vector &x);

    /// psi_{d-1} and its gradient (analytic at level 0, central differences above).
    BarrierValue chain_top(const HigherOrderChain &chain, const Vector &x);

    AffineConstraint affine_terms(const HigherOrderChain &chain, const ClassK &alpha, const Vector &x);

    /// L_f psi_{d-1} + L_g psi_{d-1} v + alpha(psi_{d-1}) + psi_{d-1} delta,
    /// evaluated term by term.
    double cbf_constraint_value(const HigherOrderChain &chain, const ClassK &alpha,
                                const Vector &x, const Vector &v, double delta);

    StageConstraint make_stage_constraint(HigherOrderChain chain, ClassK alpha);

} // namespace cadp
