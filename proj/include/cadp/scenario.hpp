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

// Scenario files:
//
// {
//   "name": "simple2",
//   "obstacles": [{"c": [x, y], "r": r}, ...],
//   "bounds": {"lower": [x, y], "upper": [x, y]},        (optional)
//   "goal": [x, y],                 or "goals": [[x, y], ...]
//   "starts": [[x, y, gamma, s, omega], ...],
//   "limits": {"s_bar", "omega_bar", "zeta", "rho", "d_tol", "T_f"},
//   "weights": {"Q": [5], "R_v": [2], "Omega_v": [2], "r_delta", "eta", "kappa", "k_p", "k_d"},
//   "horizon": {"T", "T_p", "T_s", "zoh_rate", "quadrature": "riemann" | "sampled"},
//   "methods": ["cadp", "naive_cbf"]                      (optional)
// }
//
// Every key in "limits", "weights" and "horizon" is optional and defaults to
// the reference robot tuning.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cadp/baselines.hpp"
#include "cadp/horizon.hpp"
#include "cadp/robot.hpp"

namespace cadp::bench
{

    enum class Method
    {
        Cadp,
        NaiveCbf,
    };

    std::string to_string(Method m);
    Method method_from_string(const std::string &name);

    struct Weights
    {
        Vector Q = (Vector(5) << 1, 1, 0, 16, 160).finished();
        Vector R_v = (Vector(2) << 80, 80).finished();
        Vector Omega_v = Vector::Zero(2);
        double kappa = 1.0; // outer class-K gain, alpha(z) = kappa z
        baselines::NaiveGains naive;
    };

    struct Scenario
    {
        std::string name;
        robot::ObstacleMap map;
        std::vector<Eigen::Vector2d> goals;
        std::vector<Vector> starts;
        robot::ScenarioLimits limits;
        Weights weights;
        HorizonConfig horizon;
        double zoh_rate = 100.0;
        std::vector<Method> methods{Method::Cadp, Method::NaiveCbf};
        robot::RobotParams params;

        void validate() const;
    };

    Scenario scenario_from_json(const nlohmann::json &j);
    nlohmann::json scenario_to_json(const Scenario &s);
    Scenario load_scenario(const std::filesystem::path &path);

    struct TrialSpec
    {
        Method method = Method::Cadp;
        int goal_index = 0;
        int start_index = 0;
        Vector start;
        Eigen::Vector2d goal = Eigen::Vector2d::Zero();
        std::string scenario;
        std::uint64_t seed = 0;
        double T_f = 120.0;

        std::string id() const;
    };

    /// methods x goals x starts, in that nesting order.
    std::vector<TrialSpec> make_trials(const Scenario &s, std::uint64_t seed);

    /// Goal state x_d = [q_d; 0; 0; 0].
    Vector goal_state(const Eigen::Vector2d &goal);

} // namespace cadp::bench
