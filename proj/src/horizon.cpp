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

#include "cadp/horizon.hpp"

#include <chrono>
#include <cmath>

#include "cadp/errors.hpp"

namespace cadp
{

    int HorizonConfig::stages() const
    {
        return static_cast<int>(std::lround(T / T_p));
    }

    void HorizonConfig::validate() const
    {
        if (!(T > 0.0) || !(T_p > 0.0))
            throw ConfigError("horizon T and planning step T_p must be positive");
        const double ratio = T / T_p;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || stages() < 1)
            throw ConfigError("T / T_p must be a positive integer");
        if (!(T_s > 0.0) || T_s > T_p * (1.0 + 1e-12))
            throw ConfigError("update period must satisfy 0 < T_s <= T_p");
        if (!(eta > 0.0))
            throw ConfigError("softplus sharpness eta must be positive");
        if (!(r_delta > 0.0))
            throw ConfigError("slack weight r_delta must be positive");
    }

    RunningCost RunningCost::constant(Matrix Q, Vector Gamma, Matrix R_v, Vector Omega_v)
    {
        return {[Q = std::move(Q)](double) { return Q; },
                [Gamma = std::move(Gamma)](double) { return Gamma; },
                [R_v = std::move(R_v)](double) { return R_v; },
                [Omega_v = std::move(Omega_v)](double) { return Omega_v; }};
    }

    Matrix augment_with_slack(const Matrix &g_d)
    {
        Matrix G = Matrix::Zero(g_d.rows(), g_d.cols() + 1);
        G.leftCols(g_d.cols()) = g_d;
        return G;
    }

    DiscreteDynamics discretize(const ContinuousDynamics &dynamics, double T_p)
    {
        if (!(T_p > 0.0))
            throw ConfigError("planning step must be positive");
        DiscreteDynamics d;
        d.F = [f = dynamics.f, T_p](const Vector &x) -> Vector { return x + T_p * f(x); };
        d.G = [g = dynamics.g, T_p](const Vector &x) -> Matrix { return augment_with_slack(T_p * g(x)); };
        return d;
    }

    namespace
    {
        // Sampled weights are usually identical from stage to stage; only
        // re-run the eigenvalue checks when they change.
        class WeightChecker
        {
        public:
            void check_state(const Matrix &Q, double t)
            {
                if (Q.size() == last_Q_.size() && Q == last_Q_)
                    return;
                if (Q.rows() != Q.cols() || min_eigenvalue(Q) < -1e-10)
                    throw ConfigError("sampled Q is not positive semidefinite at t=" + std::to_string(t));
                last_Q_ = Q;
            }

            void check_control(const Matrix &R, double t)
            {
                if (R.size() == last_R_.size() && R == last_R_)
                    return;
                if (R.rows() != R.cols() || R.rows() == 0 || min_eigenvalue(R) <= 0.0)
                    throw ConfigError("sampled R_v is not positive definite at t=" + std::to_string(t));
                last_R_ = R;
            }

        private:
            Matrix last_Q_;
            Matrix last_R_;
        };
    } // namespace

    SampledCosts sample_stage_costs(int k, const HorizonConfig &cfg, const RunningCost &running)
    {
        const int N = cfg.stages();
        const double weight = cfg.quadrature == CostQuadrature::Riemann ? cfg.T_p : 1.0;
        const double t0 = k * cfg.T_s;

        WeightChecker checker;
        SampledCosts out;
        out.stages.reserve(N);
        for (int i = 0; i < N; ++i)
        {
            const double t = t0 + i * cfg.T_p;
            const Matrix Q = running.Q(t);
            const Matrix R_v = running.R_v(t);
            checker.check_state(Q, t);
            checker.check_control(R_v, t);
            const Vector Omega_v = running.Omega_v(t);
            const Eigen::Index lv = R_v.rows();
            if (Omega_v.size() != lv)
                throw ConfigError("Omega_v length must match R_v");

            StageCost s;
            s.Q = weight * Q;
            s.Gamma = weight * running.Gamma(t);
            s.R = Matrix::Zero(lv + 1, lv + 1);
            s.R.topLeftCorner(lv, lv) = weight * R_v;
            s.R(lv, lv) = weight * cfg.r_delta;
            s.Omega = Vector::Zero(lv + 1);
            s.Omega.head(lv) = weight * Omega_v;
            out.stages.push_back(std::move(s));
        }
        const double tN = t0 + N * cfg.T_p;
        const Matrix QN = running.Q(tN);
        checker.check_state(QN, tN);
        out.terminal = {weight * QN, weight * running.Gamma(tN)};
        return out;
    }

    std::vector<Vector> forward_pass(const PolicySequence &previous, const Vector &x_now)
    {
        const int N = previous.horizon();
        std::vector<Vector> nominal(N);
        nominal[0] = x_now;
        for (int i = 0; i + 1 < N; ++i)
        {
            try
            {
                const StagePoint p = previous.evaluate(i, nominal[i]);
                nominal[i + 1] = p.F + p.G * p.control();
            }
            catch (const SolverError &e)
            {
                throw SolverError(i, std::string("forward pass: ") + e.what());
            }
        }
        return nominal;
    }

    HorizonUpdate rh_update(int k, const Vector &x_now, const HorizonConfig &cfg,
                            const RunningCost &running, const StageConstraint &constraint,
                            const DiscreteDynamics &dyn, const PolicySequence *previous,
                            const std::vector<Vector> *initial_nominal, const SolverOptions &opts)
    {
        const auto start = std::chrono::steady_clock::now();

        std::vector<Vector> nominal;
        if (k == 0 || previous == nullptr)
        {
            if (initial_nominal == nullptr)
                throw ConfigError("the first update needs an initial nominal trajectory");
            nominal = *initial_nominal;
        }
        else
        {
            nominal = forward_pass(*previous, x_now);
        }
        if (static_cast<int>(nominal.size()) != cfg.stages())
            throw ConfigError("nominal trajectory length must equal N");

        const SampledCosts costs = sample_stage_costs(k, cfg, running);
        SolverOptions solver_opts = opts;
        solver_opts.eta = cfg.eta;

        HorizonUpdate out;
        out.policy = backward_pass(nominal, costs.stages, costs.terminal, {constraint}, dyn, solver_opts);
        out.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return out;
    }

    ControlSplit extract_control(const PolicySequence &policy, const Vector &x)
    {
        const Vector u = policy_eval(policy, 0, x);
        const Eigen::Index lv = u.size() - 1;
        return {u.head(lv), u(lv)};
    }

    std::vector<Vector> rollout_nominal(const DiscreteDynamics &dyn, const Vector &x0, int stages,
                                        const std::function<Vector(const Vector &)> &control)
    {
        std::vector<Vector> nominal(stages);
        nominal[0] = x0;
        for (int i = 0; i + 1 < stages; ++i)
        {
            const Matrix G = dyn.G(nominal[i]);
            Vector u = Vector::Zero(G.cols());
            const Vector v = control(nominal[i]);
            u.head(v.size()) = v;
            nominal[i + 1] = dyn.F(nominal[i]) + G * u;
        }
        return nominal;
    }

} // namespace cadp
