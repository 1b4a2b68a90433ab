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

#include "cadp/robot.hpp"

#include <algorithm>
#include <cmath>

#include "cadp/errors.hpp"

namespace cadp::robot
{

    Vector RobotState::to_vector() const
    {
        Vector x(kStateDim);
        x << q_x, q_y, gamma, s, omega;
        return x;
    }

    RobotState RobotState::from_vector(const Vector &x)
    {
        if (x.size() != kStateDim)
            throw ConfigError("robot state must have 5 entries");
        return {x(0), x(1), x(2), x(3), x(4)};
    }

    double RobotParams::c1() const
    {
        return 2.0 * k_b * k_m / (m * r * R_a) + 2.0 * eps3 / (m * r);
    }

    double RobotParams::c3() const
    {
        return k_b * k_m * l * l / (I * r * r * R_a) + l * eps3 / (I * r * r);
    }

    Matrix RobotParams::M() const
    {
        const double gain = k_m / (r * R_a);
        Matrix M(2, 2);
        M << 1.0 / m, 1.0 / m,
            l / I, -l / I;
        return gain * M;
    }

    Vector robot_f(const Vector &x, const RobotParams &p)
    {
        const double gamma = x(2), s = x(3), omega = x(4);
        const double c = std::cos(gamma), sn = std::sin(gamma);
        Vector f(kStateDim);
        f << s * c - p.l_d * omega * sn,
            s * sn + p.l_d * omega * c,
            omega,
            -p.c1() * s - p.c2 * s * s * std::tanh(s / p.eps1),
            -p.c3() * omega - p.c4 * omega * omega * std::tanh(omega / p.eps2);
        return f;
    }

    namespace
    {
        // d/dz [c z + d z^2 tanh(z / eps)]
        double drag_slope(double z, double c, double d, double eps)
        {
            const double th = std::tanh(z / eps);
            return c + d * (2.0 * z * th + z * z * (1.0 - th * th) / eps);
        }
    } // namespace

    Matrix robot_f_jacobian(const Vector &x, const RobotParams &p)
    {
        const double gamma = x(2), s = x(3), omega = x(4);
        const double c = std::cos(gamma), sn = std::sin(gamma);
        Matrix J = Matrix::Zero(kStateDim, kStateDim);
        J(0, 2) = -s * sn - p.l_d * omega * c;
        J(0, 3) = c;
        J(0, 4) = -p.l_d * sn;
        J(1, 2) = s * c - p.l_d * omega * sn;
        J(1, 3) = sn;
        J(1, 4) = p.l_d * c;
        J(2, 4) = 1.0;
        J(3, 3) = -drag_slope(s, p.c1(), p.c2, p.eps1);
        J(4, 4) = -drag_slope(omega, p.c3(), p.c4, p.eps2);
        return J;
    }

    Matrix robot_g(const RobotParams &p)
    {
        Matrix g = Matrix::Zero(kStateDim, kInputDim);
        g.bottomRows(2) = p.M();
        return g;
    }

    ContinuousDynamics robot_dynamics(const RobotParams &p)
    {
        const Matrix g = robot_g(p);
        return {[p](const Vector &x) { return robot_f(x, p); },
                [g](const Vector &) { return g; }};
    }

    void ObstacleMap::validate() const
    {
        for (const Circle &c : circles)
            if (!(c.radius > 0.0))
                throw ConfigError("obstacle radii must be positive");
    }

    void ScenarioLimits::validate() const
    {
        if (!(s_bar > 0.0 && omega_bar > 0.0 && zeta > 0.0 && rho > 0.0 && d_tol > 0.0 && T_f > 0.0))
            throw ConfigError("scenario limits must be positive");
    }

    BarrierValue obstacle_phi(const Circle &circle, const Vector &x)
    {
        const Eigen::Vector2d d = x.head<2>() - circle.center;
        BarrierValue out{d.squaredNorm() - circle.radius * circle.radius, Vector::Zero(x.size())};
        out.gradient.head<2>() = 2.0 * d;
        return out;
    }

    BarrierValue lifted_obstacle(const Circle &circle, const Vector &x, double zeta, const RobotParams &p)
    {
        const double gamma = x(2), s = x(3), omega = x(4);
        const double c = std::cos(gamma), sn = std::sin(gamma);
        const Eigen::Vector2d d = x.head<2>() - circle.center;
        const Eigen::Vector2d qdot(s * c - p.l_d * omega * sn, s * sn + p.l_d * omega * c);

        const double phi = d.squaredNorm() - circle.radius * circle.radius;
        BarrierValue out{2.0 * d.dot(qdot) + zeta * phi, Vector::Zero(kStateDim)};

        // d/dx [2 d'qdot] = [2 qdot; 2 d' dqdot/d(gamma, s, omega)]
        out.gradient.head<2>() = 2.0 * qdot + 2.0 * zeta * d;
        out.gradient(2) = 2.0 * (d(0) * (-s * sn - p.l_d * omega * c) + d(1) * (s * c - p.l_d * omega * sn));
        out.gradient(3) = 2.0 * (d(0) * c + d(1) * sn);
        out.gradient(4) = 2.0 * p.l_d * (-d(0) * sn + d(1) * c);
        return out;
    }

    VelocityBarriers velocity_barriers(const Vector &x, const ScenarioLimits &limits)
    {
        VelocityBarriers out;
        out.speed = {limits.s_bar * limits.s_bar - x(3) * x(3), Vector::Zero(kStateDim)};
        out.speed.gradient(3) = -2.0 * x(3);
        out.turn = {limits.omega_bar * limits.omega_bar - x(4) * x(4), Vector::Zero(kStateDim)};
        out.turn.gradient(4) = -2.0 * x(4);
        return out;
    }

    BarrierValue robot_psi0(const ObstacleMap &map, const Vector &x, const ScenarioLimits &limits,
                            const RobotParams &p)
    {
        const std::size_t n_obs = map.circles.size();
        const std::size_t n_h = n_obs + 2;
        const double gamma = x(2), s = x(3), omega = x(4);
        const double c = std::cos(gamma), sn = std::sin(gamma);
        const Eigen::Vector2d qdot(s * c - p.l_d * omega * sn, s * sn + p.l_d * omega * c);

        // Values first; obstacle j sits at index j, speed and turn last.
        thread_local std::vector<double> h;
        thread_local std::vector<double> w;
        h.resize(n_h);
        w.resize(n_h);
        for (std::size_t j = 0; j < n_obs; ++j)
        {
            const Circle &circle = map.circles[j];
            const Eigen::Vector2d d = x.head<2>() - circle.center;
            const double phi = d.squaredNorm() - circle.radius * circle.radius;
            h[j] = 2.0 * d.dot(qdot) + limits.zeta * phi;
        }
        h[n_obs] = limits.s_bar * limits.s_bar - s * s;
        h[n_obs + 1] = limits.omega_bar * limits.omega_bar - omega * omega;

        const double m = *std::min_element(h.begin(), h.end());
        double sum = 0.0;
        for (std::size_t j = 0; j < n_h; ++j)
        {
            // exp of anything below -746 is exactly zero in double precision.
            const double arg = -limits.rho * (h[j] - m);
            w[j] = arg < -746.0 ? 0.0 : std::exp(arg);
            sum += w[j];
        }

        Eigen::Matrix<double, kStateDim, 1> grad = Eigen::Matrix<double, kStateDim, 1>::Zero();
        for (std::size_t j = 0; j < n_obs; ++j)
        {
            if (w[j] == 0.0)
                continue;
            const double wj = w[j] / sum;
            const Eigen::Vector2d d = x.head<2>() - map.circles[j].center;
            grad.head<2>() += wj * (2.0 * qdot + 2.0 * limits.zeta * d);
            grad(2) += wj * 2.0 * (d(0) * (-s * sn - p.l_d * omega * c) + d(1) * (s * c - p.l_d * omega * sn));
            grad(3) += wj * 2.0 * (d(0) * c + d(1) * sn);
            grad(4) += wj * 2.0 * p.l_d * (-d(0) * sn + d(1) * c);
        }
        grad(3) += (w[n_obs] / sum) * (-2.0 * s);
        grad(4) += (w[n_obs + 1] / sum) * (-2.0 * omega);

        return {m - std::log(sum) / limits.rho, grad};
    }

    SafeSet assemble_safe_set(const ObstacleMap &map, const ScenarioLimits &limits, const RobotParams &p)
    {
        map.validate();
        limits.validate();

        std::vector<Barrier> members;
        members.reserve(map.circles.size() + 2);
        for (std::size_t i = 0; i < map.circles.size(); ++i)
        {
            members.push_back(Barrier::analytic(
                "obstacle" + std::to_string(i),
                [circle = map.circles[i], zeta = limits.zeta, p](const Vector &x)
                { return lifted_obstacle(circle, x, zeta, p); }));
        }
        members.push_back(Barrier::analytic("speed", [limits](const Vector &x)
                                            { return velocity_barriers(x, limits).speed; }));
        members.push_back(Barrier::analytic("turn", [limits](const Vector &x)
                                            { return velocity_barriers(x, limits).turn; }));

        SoftMinBarrier psi0(std::move(members), limits.rho);
        Barrier fast = Barrier::analytic("psi0", [map, limits, p](const Vector &x)
                                         { return robot_psi0(map, x, limits, p); });
        HigherOrderChain chain{std::move(fast), 1, {}, robot_dynamics(p)};
        return {std::move(psi0), std::move(chain)};
    }

} // namespace cadp::robot
