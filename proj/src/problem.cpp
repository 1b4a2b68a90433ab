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

#include "cadp/problem.hpp"

#include "cadp/errors.hpp"

namespace cadp
{

    namespace
    {
        constexpr double kPsdTolerance = -1e-10;

        void require_square(const Matrix &A, const char *name)
        {
            if (A.rows() != A.cols())
                throw ConfigError(std::string(name) + " must be square");
        }
    } // namespace

    void StageCost::validate() const
    {
        require_square(Q, "Q");
        require_square(R, "R");
        if (Gamma.size() != Q.rows())
            throw ConfigError("Gamma length must match Q");
        if (Omega.size() != R.rows())
            throw ConfigError("Omega length must match R");
        if (min_eigenvalue(Q) < kPsdTolerance)
            throw ConfigError("Q is not positive semidefinite");
        if (R.rows() == 0 || min_eigenvalue(R) <= 0.0)
            throw ConfigError("R is not positive definite");
    }

    double StageCost::evaluate(const Vector &x, const Vector &u) const
    {
        return 0.5 * u.dot(R * u) + Omega.dot(u) + 0.5 * x.dot(Q * x) + Gamma.dot(x);
    }

    void TerminalCost::validate() const
    {
        require_square(Q, "Q_N");
        if (Gamma.size() != Q.rows())
            throw ConfigError("Gamma_N length must match Q_N");
        if (min_eigenvalue(Q) < kPsdTolerance)
            throw ConfigError("Q_N is not positive semidefinite");
    }

    double TerminalCost::evaluate(const Vector &x) const
    {
        return 0.5 * x.dot(Q * x) + Gamma.dot(x);
    }

    StageConstraint StageConstraint::from_functions(std::function<double(const Vector &)> a,
                                                    std::function<Vector(const Vector &)> b)
    {
        return {[a = std::move(a), b = std::move(b)](const Vector &x)
                {
                    return AffineConstraint{a(x), b(x)};
                }};
    }

    StageConstraint StageConstraint::inactive(int control_dim)
    {
        return {[control_dim](const Vector &)
                {
                    return AffineConstraint{1.0, Vector::Zero(control_dim)};
                }};
    }

} // namespace cadp
