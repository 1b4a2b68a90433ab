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

// Problem data for the finite-horizon constrained recursion:
//
//   min  sum_i l_i(x_i, u_i) + l_N(x_N)
//   s.t. x_{i+1} = F(x_i) + G(x_i) u_i
//        a_i(x_i) + b_i(x_i)^T u_i >= 0
//
// with l_i = 1/2 u'Ru + Omega'u + 1/2 x'Qx + Gamma'x and l_N = 1/2 x'Q_N x + Gamma_N'x.

#pragma once

#include <functional>

#include "cadp/linalg.hpp"

namespace cadp
{

    struct StageCost
    {
        Matrix Q;     // n x n, PSD
        Matrix R;     // m x m, PD
        Vector Omega; // m
        Vector Gamma; // n

        int state_dim() const { return static_cast<int>(Q.rows()); }
        int control_dim() const { return static_cast<int>(R.rows()); }

        /// Throws ConfigError on shape mismatch, Q not PSD or R not PD.
        void validate() const;

        /// l_i(x, u)
        double evaluate(const Vector &x, const Vector &u) const;
    };

    struct TerminalCost
    {
        Matrix Q;
        Vector Gamma;

        void validate() const;
        double evaluate(const Vector &x) const;
    };

    /// Quadratic cost-to-go approximation 1/2 x'Px + T'x.
    struct ValueQuadratic
    {
        Matrix P;
        Vector T;

        double evaluate(const Vector &x) const { return 0.5 * x.dot(P * x) + T.dot(x); }
    };

    enum class JacobianMode
    {
        CentralDifference,
        Analytic,
    };

    /// Control-affine step map x+ = F(x) + G(x) u.
    struct DiscreteDynamics
    {
        std::function<Vector(const Vector &)> F;
        std::function<Matrix(const Vector &)> G;

        // Optional analytic hooks, used only in JacobianMode::Analytic:
        // dF(x) = dF/dx, dGu(x, u) = d(G(x) u)/dx with u held fixed.
        std::function<Matrix(const Vector &)> dF;
        std::function<Matrix(const Vector &, const Vector &)> dGu;

        JacobianMode jacobian_mode = JacobianMode::CentralDifference;

        bool has_analytic_jacobians() const
        {
            return jacobian_mode == JacobianMode::Analytic && dF && dGu;
        }
    };

    /// Value of the affine constraint data at one state.
    struct AffineConstraint
    {
        double a = 0.0;
        Vector b;

        double value(const Vector &u) const { return a + b.dot(u); }
    };

    /// a(x) + b(x)^T u >= 0. Stored as one callback because a and b usually
    /// share most of their work (barrier values and gradients).
    struct StageConstraint
    {
        std::function<AffineConstraint(const Vector &)> evaluate;

        static StageConstraint from_functions(std::function<double(const Vector &)> a,
                                              std::function<Vector(const Vector &)> b);

        /// a(x) = 1, b(x) = 0: never active.
        static StageConstraint inactive(int control_dim);
    };

    struct SolverOptions
    {
        double eta = 1.0;                  // softplus sharpness
        double b_epsilon = 1e-12;          // ||b|| below this is treated as b = 0
        double max_condition = 1e14;       // cap on cond(R + G'PG)
        double fd_scale = 1e-5;            // h = fd_scale * (1 + ||xbar||)
        double psd_clip = -1e-10;          // eigenvalues of P_i below this are raised to 0
        bool parallel_jacobians = false;   // OpenMP perturbation sweep
    };

} // namespace cadp
