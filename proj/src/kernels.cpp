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

#include "cadp/kernels.hpp"

#include <exception>
#include <omp.h>

namespace cadp::kernels
{

    namespace
    {
        constexpr double kOffsets[4] = {1.0, -1.0, 0.5, -0.5};

        Vector perturbed_eval(const VectorFn &fn, const Vector &x, double h, int column)
        {
            Vector xp = x;
            xp(column / 4) += kOffsets[column % 4] * h;
            return fn(xp);
        }
    } // namespace

    Matrix perturbation_sweep_serial(const VectorFn &fn, const Vector &x, double h, int out_dim)
    {
        const int cols = 4 * static_cast<int>(x.size());
        Matrix sweep(out_dim, cols);
        for (int c = 0; c < cols; ++c)
            sweep.col(c) = perturbed_eval(fn, x, h, c);
        return sweep;
    }

    Matrix perturbation_sweep_omp(const VectorFn &fn, const Vector &x, double h, int out_dim)
    {
        const int cols = 4 * static_cast<int>(x.size());
        Matrix sweep(out_dim, cols);
        std::exception_ptr failure;
#pragma omp parallel for schedule(static)
        for (int c = 0; c < cols; ++c)
        {
            try
            {
                sweep.col(c) = perturbed_eval(fn, x, h, c);
            }
            catch (...)
            {
#pragma omp critical(cadp_sweep_failure)
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
        return sweep;
    }

    DifferenceSet differences_from_sweep(const Matrix &sweep, double h)
    {
        const int n = static_cast<int>(sweep.cols() / 4);
        DifferenceSet d{Matrix(sweep.rows(), n), Matrix(sweep.rows(), n), Matrix(sweep.rows(), n)};
        for (int j = 0; j < n; ++j)
        {
            d.coarse.col(j) = (sweep.col(4 * j) - sweep.col(4 * j + 1)) / (2.0 * h);
            d.fine.col(j) = (sweep.col(4 * j + 2) - sweep.col(4 * j + 3)) / h;
        }
        d.extrapolated = (4.0 * d.fine - d.coarse) / 3.0;
        return d;
    }

    std::vector<Vector> map_states_serial(const VectorFn &fn, const std::vector<Vector> &states)
    {
        std::vector<Vector> out(states.size());
        for (std::size_t s = 0; s < states.size(); ++s)
            out[s] = fn(states[s]);
        return out;
    }

    std::vector<Vector> map_states_omp(const VectorFn &fn, const std::vector<Vector> &states)
    {
        std::vector<Vector> out(states.size());
        const auto count = static_cast<long>(states.size());
        std::exception_ptr failure;
#pragma omp parallel for schedule(static)
        for (long s = 0; s < count; ++s)
        {
            try
            {
                out[s] = fn(states[s]);
            }
            catch (...)
            {
#pragma omp critical(cadp_map_failure)
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
        return out;
    }

    int max_threads() { return omp_get_max_threads(); }

} // namespace cadp::kernels
