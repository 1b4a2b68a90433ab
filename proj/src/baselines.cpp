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

#include "cadp/baselines.hpp"

#include <cmath>

#include "cadp/errors.hpp"

namespace cadp::baselines
{

    Eigen::Vector2d desired_acceleration(const Vector &x, const Eigen::Vector2d &goal,
                                         const NaiveGains &gains, const robot::RobotParams &p)
    {
        const Vector f = robot::robot_f(x, p);
        const Eigen::Vector2d err = x.head<2>() - goal;
        const Eigen::Vector2d qdot = f.head<2>();
        return -gains.k_p * err.array().tanh().matrix() - gains.k_d * qdot.array().tanh().matrix();
    }

    Vector naive_control(const Vector &x, const Eigen::Vector2d &goal, const NaiveGains &gains,
                         const robot::RobotParams &p)
    {
        if (!(p.l_d > 0.0))
            throw ConfigError("naive control needs l_d > 0");
        const double gamma = x(2), s = x(3), omega = x(4);
        const double c = std::cos(gamma), sn = std::sin(gamma);
        const Eigen::Vector2d a_d = desired_acceleration(x, goal, gains, p);

        const double sdot_d = c * a_d(0) + sn * a_d(1) + p.l_d * omega * omega;
        const double omegadot_d = (-sn * a_d(0) + c * a_d(1) - s * omega) / p.l_d;

        const Vector f = robot::robot_f(x, p);
        Eigen::Vector2d rhs(sdot_d - f(3), omegadot_d - f(4));
        const Eigen::Matrix2d M = p.M();
        // M is square; (M'M)^-1 M' reduces to M^-1.
        return M.partialPivLu().solve(rhs);
    }

    FilteredControl min_intervention_filter(const Vector &v_d, double a, const Vector &b,
                                            double r_delta, double b_epsilon)
    {
        const Eigen::Index lv = v_d.size();
        if (b.size() != lv + 1)
            throw ConfigError("constraint vector must have l_v + 1 entries");
        if (!(r_delta > 0.0))
            throw ConfigError("slack weight must be positive");

        Vector u_d = Vector::Zero(lv + 1);
        u_d.head(lv) = v_d;
        const double value = a + b.dot(u_d);
        if (value >= 0.0)
            return {v_d, 0.0};

        Vector Hinv_b = b;
        Hinv_b(lv) /= r_delta;
        const double bHb = b.dot(Hinv_b);
        if (bHb < b_epsilon)
            throw InfeasibleError(-1, "filter constraint has b'H^-1 b = 0 with a < 0");
        const double mu = -value / bHb;
        const Vector u = u_d + mu * Hinv_b;
        return {u.head(lv), u(lv)};
    }

    NaiveCbfController::NaiveCbfController(Eigen::Vector2d goal, NaiveGains gains,
                                           robot::RobotParams params, StageConstraint constraint,
                                           double r_delta)
        : goal_(std::move(goal)), gains_(gains), params_(params), constraint_(std::move(constraint)),
          r_delta_(r_delta)
    {
    }

    ControlSample NaiveCbfController::control(double, const Vector &x) const
    {
        const Vector v_d = naive_control(x, goal_, gains_, params_);
        const AffineConstraint c = constraint_.evaluate(x);
        const FilteredControl out = min_intervention_filter(v_d, c.a, c.b, r_delta_);
        Vector u(out.v.size() + 1);
        u << out.v, out.delta;
        return {out.v, out.delta, v_d, c.value(u)};
    }

} // namespace cadp::baselines
