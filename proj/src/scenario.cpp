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

#include "cadp/scenario.hpp"

#include <fstream>

#include "cadp/errors.hpp"

namespace cadp::bench
{

    using nlohmann::json;

    std::string to_string(Method m)
    {
        return m == Method::Cadp ? "cadp" : "naive_cbf";
    }

    Method method_from_string(const std::string &name)
    {
        if (name == "cadp")
            return Method::Cadp;
        if (name == "naive_cbf")
            return Method::NaiveCbf;
        throw ConfigError("unknown method '" + name + "' (expected cadp or naive_cbf)");
    }

    namespace
    {
        Vector vector_from(const json &j, Eigen::Index expected, const char *what)
        {
            if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != expected)
                throw ConfigError(std::string(what) + " must be an array of " + std::to_string(expected) + " numbers");
            Vector v(expected);
            for (Eigen::Index i = 0; i < expected; ++i)
                v(i) = j.at(i).get<double>();
            return v;
        }

        Eigen::Vector2d point_from(const json &j, const char *what)
        {
            const Vector v = vector_from(j, 2, what);
            return {v(0), v(1)};
        }

        json to_array(const Vector &v)
        {
            json a = json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i)
                a.push_back(v(i));
            return a;
        }

        template <typename T>
        void read_opt(const json &obj, const char *key, T &out)
        {
            if (obj.contains(key))
                out = obj.at(key).get<T>();
        }
    } // namespace

    void Scenario::validate() const
    {
        map.validate();
        limits.validate();
        horizon.validate();
        if (goals.empty())
            throw ConfigError("scenario needs at least one goal");
        if (starts.empty())
            throw ConfigError("scenario needs at least one start state");
        if (!(zoh_rate > 0.0))
            throw ConfigError("zoh_rate must be positive");
        if ((weights.Q.array() < 0.0).any())
            throw ConfigError("Q weights must be nonnegative");
        if ((weights.R_v.array() <= 0.0).any())
            throw ConfigError("R_v weights must be positive");
        if (!(weights.kappa > 0.0) || !(weights.naive.k_p > 0.0) || !(weights.naive.k_d > 0.0))
            throw ConfigError("kappa, k_p and k_d must be positive");
    }

    Scenario scenario_from_json(const json &j)
    {
        Scenario s;
        try
        {
            s.name = j.value("name", std::string("scenario"));
            for (const json &o : j.value("obstacles", json::array()))
                s.map.circles.push_back({point_from(o.at("c"), "obstacle center"), o.at("r").get<double>()});
            if (j.contains("bounds"))
                s.map.bounds = robot::Bounds{point_from(j["bounds"].at("lower"), "bounds.lower"),
                                             point_from(j["bounds"].at("upper"), "bounds.upper")};
            if (j.contains("goals"))
                for (const json &g : j["goals"])
                    s.goals.push_back(point_from(g, "goal"));
            else
                s.goals.push_back(point_from(j.at("goal"), "goal"));
            for (const json &st : j.at("starts"))
                s.starts.push_back(vector_from(st, robot::kStateDim, "start"));

            const json limits = j.value("limits", json::object());
            read_opt(limits, "s_bar", s.limits.s_bar);
            read_opt(limits, "omega_bar", s.limits.omega_bar);
            read_opt(limits, "zeta", s.limits.zeta);
            read_opt(limits, "rho", s.limits.rho);
            read_opt(limits, "d_tol", s.limits.d_tol);
            read_opt(limits, "T_f", s.limits.T_f);

            const json w = j.value("weights", json::object());
            if (w.contains("Q"))
                s.weights.Q = vector_from(w["Q"], robot::kStateDim, "weights.Q");
            if (w.contains("R_v"))
                s.weights.R_v = vector_from(w["R_v"], robot::kInputDim, "weights.R_v");
            if (w.contains("Omega_v"))
                s.weights.Omega_v = vector_from(w["Omega_v"], robot::kInputDim, "weights.Omega_v");
            read_opt(w, "r_delta", s.horizon.r_delta);
            read_opt(w, "eta", s.horizon.eta);
            read_opt(w, "kappa", s.weights.kappa);
            read_opt(w, "k_p", s.weights.naive.k_p);
            read_opt(w, "k_d", s.weights.naive.k_d);

            const json h = j.value("horizon", json::object());
            read_opt(h, "T", s.horizon.T);
            read_opt(h, "T_p", s.horizon.T_p);
            read_opt(h, "T_s", s.horizon.T_s);
            read_opt(h, "zoh_rate", s.zoh_rate);
            const std::string quad = h.value("quadrature", std::string("riemann"));
            if (quad == "riemann")
                s.horizon.quadrature = CostQuadrature::Riemann;
            else if (quad == "sampled")
                s.horizon.quadrature = CostQuadrature::Sampled;
            else
                throw ConfigError("horizon.quadrature must be 'riemann' or 'sampled'");

            if (j.contains("methods"))
            {
                s.methods.clear();
                for (const json &m : j["methods"])
                    s.methods.push_back(method_from_string(m.get<std::string>()));
            }
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("scenario JSON: ") + e.what());
        }
        s.limits.goal = s.goals.front();
        s.validate();
        return s;
    }

    json scenario_to_json(const Scenario &s)
    {
        json j;
        j["name"] = s.name;
        j["obstacles"] = json::array();
        for (const robot::Circle &c : s.map.circles)
            j["obstacles"].push_back({{"c", {c.center.x(), c.center.y()}}, {"r", c.radius}});
        if (s.map.bounds)
            j["bounds"] = {{"lower", {s.map.bounds->lower.x(), s.map.bounds->lower.y()}},
                           {"upper", {s.map.bounds->upper.x(), s.map.bounds->upper.y()}}};
        j["goals"] = json::array();
        for (const Eigen::Vector2d &g : s.goals)
            j["goals"].push_back({g.x(), g.y()});
        j["starts"] = json::array();
        for (const Vector &x0 : s.starts)
            j["starts"].push_back(to_array(x0));
        j["limits"] = {{"s_bar", s.limits.s_bar}, {"omega_bar", s.limits.omega_bar},
                       {"zeta", s.limits.zeta}, {"rho", s.limits.rho},
                       {"d_tol", s.limits.d_tol}, {"T_f", s.limits.T_f}};
        j["weights"] = {{"Q", to_array(s.weights.Q)}, {"R_v", to_array(s.weights.R_v)},
                        {"Omega_v", to_array(s.weights.Omega_v)}, {"r_delta", s.horizon.r_delta},
                        {"eta", s.horizon.eta}, {"kappa", s.weights.kappa},
                        {"k_p", s.weights.naive.k_p}, {"k_d", s.weights.naive.k_d}};
        j["horizon"] = {{"T", s.horizon.T}, {"T_p", s.horizon.T_p}, {"T_s", s.horizon.T_s},
                        {"zoh_rate", s.zoh_rate},
                        {"quadrature", s.horizon.quadrature == CostQuadrature::Riemann ? "riemann" : "sampled"}};
        j["methods"] = json::array();
        for (Method m : s.methods)
            j["methods"].push_back(to_string(m));
        return j;
    }

    Scenario load_scenario(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open scenario file " + path.string());
        json j;
        try
        {
            in >> j;
        }
        catch (const json::exception &e)
        {
            throw ConfigError("cannot parse " + path.string() + ": " + e.what());
        }
        return scenario_from_json(j);
    }

    std::string TrialSpec::id() const
    {
        return to_string(method) + "_g" + std::to_string(goal_index) + "_s" + std::to_string(start_index);
    }

    std::vector<TrialSpec> make_trials(const Scenario &s, std::uint64_t seed)
    {
        std::vector<TrialSpec> trials;
        for (Method m : s.methods)
            for (std::size_t g = 0; g < s.goals.size(); ++g)
                for (std::size_t i = 0; i < s.starts.size(); ++i)
                {
                    TrialSpec t;
                    t.method = m;
                    t.goal_index = static_cast<int>(g);
                    t.start_index = static_cast<int>(i);
                    t.start = s.starts[i];
                    t.goal = s.goals[g];
                    t.scenario = s.name;
                    t.seed = seed;
                    t.T_f = s.limits.T_f;
                    trials.push_back(std::move(t));
                }
        return trials;
    }

    Vector goal_state(const Eigen::Vector2d &goal)
    {
        Vector x = Vector::Zero(robot::kStateDim);
        x.head<2>() = goal;
        return x;
    }

} // namespace cadp::bench
