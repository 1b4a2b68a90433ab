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

// Goal-seeking control that ignores obstacles, made safe by a
// minimum-intervention filter on the same affine constraint the receding
// horizon controller uses.

#pragma once

#include "cadp/robot.hpp"
#include "cadp/simulation.hpp"

namespace cadp::baselines
{

    struct NaiveGains
    {
        double k_p = 0.4;
        double k_d = 0.75;
    };

    /// Commanded acceleration of the point of interest,
    /// a_d = -k_p tanh(q - q_d) - k_d tanh(qdot), componentwise.
    Eigen::Vector2d desired_acceleration(const Vector &x, const Eigen::Vector2d &goal,
                                         const NaiveGains &gains, const robot::RobotParams &p);

    /// Voltages that realize a_d in the absence of obstacles:
    /// v_d = M^-1 ([sdot_d; omegadot_d] - [f_4(x); f_5(x)]).
    Vector naive_control(const Vector &x, const Eigen::Vector2d &goal, const NaiveGains &gains,
                         const robot::RobotParams &p);

    struct FilteredControl
    {
        Vector v;
        double delta = 0.0;
    };

    /// argmin ||v - v_d||^2 + r_delta delta^2  s.t.  a + b'[v; delta] >= 0,
    /// in closed form for the single constraint.
    FilteredControl min_intervention_filter(const Vector &v_d, double a, const Vector &b,
                                            double r_delta, double b_epsilon = 1e-12);

    /// Naive control passed through the filter at every tick.
    class NaiveCbfController : public FeedbackController
    {
    public:
        NaiveCbfController(Eigen::Vector2d goal, NaiveGains gains, robot::RobotParams params,
                           StageConstraint constraint, double r_delta);

        double update_period() const override { return 0.0; }
        double refresh(int, double, const Vector &) override { return 0.0; }
        ControlSample control(double t, const Vector &x) const override;

    private:
        Eigen::Vector2d goal_;
        NaiveGains gains_;
        robot::RobotParams params_;
        StageConstraint constraint_;
        double r_delta_;
    };

} // namespace cadp::baselines
