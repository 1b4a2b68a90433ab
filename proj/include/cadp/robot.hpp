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

// Differential-drive ground robot with motor and drag damping.
//
// State x = [q_x, q_y, gamma, s, omega]: position of a point of interest at
// distance l_d ahead of the mass center, heading, speed and turn rate.
// Input v = [u_r, u_l]: right and left motor voltages.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cadp/cbf.hpp"

namespace cadp::robot
{

    constexpr int kStateDim = 5;
    constexpr int kInputDim = 2;

    struct RobotState
    {
        double q_x = 0.0;
        double q_y = 0.0;
        double gamma = 0.0;
        double s = 0.0;
        double omega = 0.0;

        Vector to_vector() const;
        static RobotState from_vector(const Vector &x);
    };

    struct RobotParams
    {
        double k_m = 0.1;     // torque constant [N m / A]
        double r = 0.1;       // wheel radius [m]
        double l = 0.5;       // wheel separation [m]
        double l_d = 0.25;    // mass center to point of interest [m]
        double R_a = 0.27;    // armature resistance [ohm]
        double m = 10.0;      // mass [kg]
        double I = 0.83;      // moment of inertia [kg m^2]
        double k_b = 0.0487;  // back-EMF constant [V s / rad]
        double eps3 = 0.01;   // friction coefficient [N m s]
        double c2 = 0.4581;   // [1/m]
        double c4 = 0.3477;
        double eps1 = 0.4;
        double eps2 = 0.4;

        double c1() const;
        double c3() const;
        /// 2x2 input matrix of the (s, omega) rows.
        Matrix M() const;
    };

    Vector robot_f(const Vector &x, const RobotParams &p);
    /// df/dx, 5x5.
    Matrix robot_f_jacobian(const Vector &x, const RobotParams &p);
    /// [0_{3x2}; M]
    Matrix robot_g(const RobotParams &p);
    ContinuousDynamics robot_dynamics(const RobotParams &p);

    struct Circle
    {
        Eigen::Vector2d center;
        double radius = 0.0;
    };

    struct Bounds
    {
        Eigen::Vector2d lower;
        Eigen::Vector2d upper;
    };

    struct ObstacleMap
    {
        std::vector<Circle> circles;
        std::optional<Bounds> bounds; // drawing extent only; not a barrier

        void validate() const;
    };

    struct ScenarioLimits
    {
        double s_bar = 1.5;
        double omega_bar = 0.5;
        double zeta = 0.5;   // obstacle relative-degree lift gain
        double rho = 750.0;  // soft-min sharpness
        Eigen::Vector2d goal = Eigen::Vector2d::Zero();
        double d_tol = 0.25;
        double T_f = 120.0;

        void validate() const;
    };

    /// phi(x) = ||q - c||^2 - r^2 and its gradient.
    BarrierValue obstacle_phi(const Circle &circle, const Vector &x);

    /// h(x) = L_f phi(x) + zeta phi(x) with its analytic gradient.
    BarrierValue lifted_obstacle(const Circle &circle, const Vector &x, double zeta, const RobotParams &p);

    struct VelocityBarriers
    {
        BarrierValue speed; // s_bar^2 - s^2
        BarrierValue turn;  // omega_bar^2 - omega^2
    };
    VelocityBarriers velocity_barriers(const Vector &x, const ScenarioLimits &limits);

    /// psi_0 = soft-min of every lifted obstacle barrier and both velocity
    /// barriers, computed in one pass. Member gradients are only formed for
    /// members whose soft-min weight does not underflow to zero. Agrees with
    /// the generic SoftMinBarrier composition of the same members.
    BarrierValue robot_psi0(const ObstacleMap &map, const Vector &x, const ScenarioLimits &limits,
                            const RobotParams &p);

    struct SafeSet
    {
        SoftMinBarrier psi0;     // n_h = obstacles + 2 members
        HigherOrderChain chain;  // degree 1 over robot_psi0
    };

    SafeSet assemble_safe_set(const ObstacleMap &map, const ScenarioLimits &limits, const RobotParams &p);

} // namespace cadp::robot
