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

// Data-parallel kernels. Each `_omp` kernel has a `_serial` twin that is the
// reference implementation; both write every output slot independently, so
// their results are bit-identical for any thread count.

#pragma once

#include <functional>
#include <vector>

#include "cadp/linalg.hpp"

namespace cadp::kernels
{

    using VectorFn = std::function<Vector(const Vector &)>;

    /// Evaluates fn at x + s e_j for s in {+h, -h, +h/2, -h/2} and every
    /// coordinate j. Column 4j + p holds the p-th perturbation of coordinate j.
    /// Non-finite outputs are stored as they are; the caller checks.
    Matrix perturbation_sweep_serial(const VectorFn &fn, const Vector &x, double h, int out_dim);
    Matrix perturbation_sweep_omp(const VectorFn &fn, const Vector &x, double h, int out_dim);

    /// Central difference at h, at h/2, and their Richardson combination
    /// (4 D(h/2) - D(h)) / 3, all from one sweep.
    struct DifferenceSet
    {
        Matrix coarse;
        Matrix fine;
        Matrix extrapolated;
    };
    DifferenceSet differences_from_sweep(const Matrix &sweep, double h);

    /// out[s] = fn(states[s]).
    std::vector<Vector> map_states_serial(const VectorFn &fn, const std::vector<Vector> &states);
    std::vector<Vector> map_states_omp(const VectorFn &fn, const std::vector<Vector> &states);

    int max_threads();

} // namespace cadp::kernels
