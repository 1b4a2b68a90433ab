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

#include <Eigen/Dense>

namespace cadp
{

    using Vector = Eigen::VectorXd;
    using Matrix = Eigen::MatrixXd;

    inline Matrix symmetrized(const Matrix &A) { return 0.5 * (A + A.transpose()); }

    /// Smallest eigenvalue of the symmetric part of A.
    inline double min_eigenvalue(const Matrix &A)
    {
        if (A.size() == 0)
            return 0.0;
        Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(A), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    inline bool all_finite(const Matrix &A) { return A.allFinite(); }

} // namespace cadp
