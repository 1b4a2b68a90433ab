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

#include "cadp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cadp/errors.hpp"

namespace cadp::bench
{

    TrialMetrics compute_metrics(const ClosedLoopLog &log, const Vector &x_d, const MetricWeights &w)
    {
        log.validate();
        const std::size_t n = log.size();
        if (n == 0)
            throw ConfigError("cannot compute metrics of an empty log");
        if (w.Q.size() != x_d.size())
            throw ConfigError("metric state weight does not match the state size");

        TrialMetrics m;
        m.min_psi0 = std::numeric_limits<double>::infinity();
        m.min_constraint = std::numeric_limits<double>::infinity();

        // Arrival: the start of the last contiguous stay inside the ball,
        // provided the trace ends inside it.
        std::size_t stay_start = n;
        for (std::size_t j = n; j-- > 0;)
        {
            const double dist = (log.x[j].head<2>() - x_d.head<2>()).norm();
            if (dist > w.d_tol)
                break;
            stay_start = j;
        }
        m.final_distance = (log.x.back().head<2>() - x_d.head<2>()).norm();
        const bool covers_horizon = log.t.back() >= w.T_f - 1e-9;
        if (stay_start < n && covers_horizon)
        {
            m.SI = 0;
            m.AT = log.t[stay_start];
        }
        else
        {
            m.SI = 1;
            m.AT = w.T_f;
        }

        const auto integrand = [&](std::size_t j)
        {
            const Vector e = log.x[j] - x_d;
            return e.dot(w.Q.cwiseProduct(e)) + log.v[j].dot(w.R_v.cwiseProduct(log.v[j]));
        };
        double prev = integrand(0);
        for (std::size_t j = 0; j < n; ++j)
        {
            if (j > 0)
            {
                const double cur = integrand(j);
                m.TC += 0.5 * (log.t[j] - log.t[j - 1]) * (prev + cur);
                prev = cur;

                if (!(w.cd_skip_updates && log.update[j]))
                {
                    const double rate = (log.v[j] - log.v[j - 1]).norm() / (log.t[j] - log.t[j - 1]);
                    m.CD = std::max(m.CD, rate);
                }
            }
            m.CM = std::max(m.CM, log.v[j].norm());
            m.CI = std::max(m.CI, (log.v[j] - log.v_desired[j]).norm());
            m.max_abs_s = std::max(m.max_abs_s, std::abs(log.x[j](3)));
            m.max_abs_omega = std::max(m.max_abs_omega, std::abs(log.x[j](4)));
            if (!std::isnan(log.psi0[j]))
                m.min_psi0 = std::min(m.min_psi0, log.psi0[j]);
            m.min_constraint = std::min(m.min_constraint, log.constraint[j]);
        }
        return m;
    }

    std::vector<double> normalize_column(const std::vector<double> &values)
    {
        std::vector<double> out(values.size(), 1.0);
        if (values.empty())
            return out;
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        const double span = *hi - *lo;
        if (!(span > 0.0))
            return out;
        for (std::size_t i = 0; i < values.size(); ++i)
            out[i] = (*hi - values[i]) / span;
        return out;
    }

    std::vector<NormalizedMetrics> normalize_metrics(const std::vector<TrialMetrics> &all)
    {
        const auto column = [&](auto field)
        {
            std::vector<double> c;
            c.reserve(all.size());
            for (const TrialMetrics &m : all)
                c.push_back(static_cast<double>(m.*field));
            return normalize_column(c);
        };
        const std::vector<double> si = column(&TrialMetrics::SI);
        const std::vector<double> at = column(&TrialMetrics::AT);
        const std::vector<double> tc = column(&TrialMetrics::TC);
        const std::vector<double> cm = column(&TrialMetrics::CM);
        const std::vector<double> cd = column(&TrialMetrics::CD);
        const std::vector<double> ci = column(&TrialMetrics::CI);

        std::vector<NormalizedMetrics> out(all.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            out[i] = {si[i], at[i], tc[i], cm[i], cd[i], ci[i]};
        return out;
    }

} // namespace cadp::bench
