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

// Problem builders shared by the unit and acceptance tests.

#pragma once

#include <cmath>
#include <vector>

#include "cadp/solver.hpp"
#include "oracles.hpp"

namespace cadp::fixtures
{

    inline DiscreteDynamics linear_dynamics(const Matrix &A, const Matrix &B)
    {
        return {[A](const Vector &x) -> Vector { return A * x; },
                [B](const Vector &) -> Matrix { return B; }};
    }

    /// (a0 + c'x) + b'u >= 0
    inline StageConstraint affine_constraint(double a0, const Vector &c, const Vector &b)
    {
        return StageConstraint::from_functions([a0, c](const Vector &x) { return a0 + c.dot(x); },
                                               [b](const Vector &) { return b; });
    }

    /// One stage whose successor value is (P_next, T_next), as a policy with N = 1.
    inline PolicySequence single_stage(const StageCost &cost, const Matrix &P_next, const Vector &T_next,
                                       const StageConstraint &constraint, const DiscreteDynamics &dyn,
                                       const Vector &xbar, const SolverOptions &opts = {})
    {
        return backward_pass({xbar}, {cost}, TerminalCost{P_next, T_next}, {constraint}, dyn, opts);
    }

    /// A small nonlinear stage with state-dependent input matrix and
    /// constraint, used for the per-stage optimality and feasibility sweeps:
    ///   F(x) = A x + 0.3 sin(x)
    ///   G(x) = B + 0.1 x_0 E
    ///   a(x) = a0 + c'x + 0.2 cos(x_0)
    ///   b(x) = b0 + 0.05 sin(x_1) e
    struct RandomStage
    {
        int n = 0;
        int m = 0;
        Matrix A, B, E;
        Vector c, b0, e;
        double a0 = 0.0;
        StageCost cost;
        Matrix P_next;
        Vector T_next;
        DiscreteDynamics dyn;
        StageConstraint constraint;

        Vector F(const Vector &x) const { return A * x + 0.3 * x.array().sin().matrix(); }
        Matrix G(const Vector &x) const { return B + 0.1 * x(0) * E; }
        double a(const Vector &x) const { return a0 + c.dot(x) + 0.2 * std::cos(x(0)); }
        Vector b(const Vector &x) const
        {
            return b0 + 0.05 * std::sin(x(x.size() > 1 ? 1 : 0)) * e;
        }
    };

    inline RandomStage random_stage(oracle::Rng &rng, int max_n = 4, int max_m = 2, double a_scale = 0.6)
    {
        RandomStage s;
        s.n = rng.integer(1, max_n);
        s.m = rng.integer(1, max_m);
        s.A = rng.matrix(s.n, s.n, a_scale);
        s.B = rng.matrix(s.n, s.m);
        s.E = rng.matrix(s.n, s.m);
        s.c = rng.vector(s.n);
        s.b0 = rng.vector(s.m);
        s.e = rng.vector(s.m);
        s.a0 = rng.uniform(-3.0, 3.0);
        s.cost.Q = rng.psd(s.n, rng.integer(1, s.n));
        s.cost.R = rng.pd(s.m);
        s.cost.Omega = rng.vector(s.m);
        s.cost.Gamma = rng.vector(s.n);
        s.P_next = rng.psd(s.n, s.n);
        s.T_next = rng.vector(s.n);

        const Matrix A = s.A, B = s.B, E = s.E;
        const Vector c = s.c, b0 = s.b0, e = s.e;
        const double a0 = s.a0;
        s.dyn = {[A](const Vector &x) -> Vector { return A * x + 0.3 * x.array().sin().matrix(); },
                 [B, E](const Vector &x) -> Matrix { return B + 0.1 * x(0) * E; }};
        s.constraint = StageConstraint::from_functions(
            [a0, c](const Vector &x) { return a0 + c.dot(x) + 0.2 * std::cos(x(0)); },
            [b0, e](const Vector &x) -> Vector { return b0 + 0.05 * std::sin(x(x.size() > 1 ? 1 : 0)) * e; });
        return s;
    }

} // namespace cadp::fixtures
