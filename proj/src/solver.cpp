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

#include "cadp/solver.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "cadp/errors.hpp"
#include "cadp/kernels.hpp"

namespace cadp
{

    double softplus(double z, double eta)
    {
        assert(eta > 0.0);
        // max(z, 0) + log1p(exp(-eta |z|)) / eta == log(1 + exp(eta z)) / eta
        return std::max(z, 0.0) + std::log1p(std::exp(-eta * std::abs(z))) / eta;
    }

    // ---------------------------------------------------------------------
    // Per-state quantities

    Matrix gain_W(const Matrix &G, const Matrix &R, const Matrix &P_next, double max_condition,
                  int stage)
    {
        const Matrix H = symmetrized(R + G.transpose() * P_next * G);
        Eigen::LLT<Matrix> llt(H);
        if (llt.info() != Eigen::Success)
            throw SolverError(stage, "R + G'PG is not positive definite");
        const double rcond = llt.rcond();
        if (!(rcond > 0.0) || 1.0 / rcond > max_condition)
            throw SolverError(stage, "R + G'PG is ill-conditioned (rcond " + std::to_string(rcond) + ")");
        return symmetrized(llt.solve(Matrix::Identity(H.rows(), H.cols())));
    }

    Matrix gain_W(const Vector &x, const StageCost &cost, const Matrix &P_next,
                  const DiscreteDynamics &dyn, const SolverOptions &opts, int stage)
    {
        return gain_W(dyn.G(x), cost.R, P_next, opts.max_condition, stage);
    }

    namespace
    {
        Vector gain_k(const Vector &F, const Matrix &G, const Matrix &W, const StageCost &cost,
                      const Matrix &P_next, const Vector &T_next)
        {
            return -W * (G.transpose() * (P_next * F + T_next) + cost.Omega);
        }
    } // namespace

    Vector nominal_gain_k(const Vector &x, const StageCost &cost, const Matrix &P_next,
                          const Vector &T_next, const DiscreteDynamics &dyn,
                          const SolverOptions &opts, int stage)
    {
        const Matrix G = dyn.G(x);
        const Matrix W = gain_W(G, cost.R, P_next, opts.max_condition, stage);
        return gain_k(dyn.F(x), G, W, cost, P_next, T_next);
    }

    double multiplier_lambda(const AffineConstraint &c, const Vector &k, const Matrix &W,
                             const SolverOptions &opts, int stage, double *z_out)
    {
        if (c.b.norm() < opts.b_epsilon)
        {
            if (!(c.a > 0.0))
                throw InfeasibleError(stage, "b(x) = 0 with a(x) = " + std::to_string(c.a) + " <= 0");
            if (z_out)
                *z_out = -std::numeric_limits<double>::infinity();
            return 0.0;
        }
        const double z = (-c.a - c.b.dot(k)) / c.b.dot(W * c.b);
        if (z_out)
            *z_out = z;
        return std::max(0.0, z);
    }

    double multiplier_lambda(const Vector &x, const StageConstraint &constraint, const Vector &k,
                             const Matrix &W, const SolverOptions &opts, int stage)
    {
        return multiplier_lambda(constraint.evaluate(x), k, W, opts, stage);
    }

    StagePoint evaluate_stage(const StageData &stage, const Vector &x, const SolverOptions &opts)
    {
        StagePoint p;
        p.F = stage.dynamics.F(x);
        p.G = stage.dynamics.G(x);
        if (stage.gain && p.G.rows() == stage.gain->G.rows() && p.G.cols() == stage.gain->G.cols() &&
            p.G == stage.gain->G)
            p.W = stage.gain->W;
        else
            p.W = gain_W(p.G, stage.cost.R, stage.next.P, opts.max_condition, stage.index);
        p.k = gain_k(p.F, p.G, p.W, stage.cost, stage.next.P, stage.next.T);
        p.constraint = stage.constraint.evaluate(x);
        if (p.constraint.b.size() != p.k.size())
            throw SolverError(stage.index, "b(x) length does not match the control dimension");

        p.degenerate = p.constraint.b.norm() < opts.b_epsilon;
        if (p.degenerate)
        {
            if (!(p.constraint.a > 0.0))
                throw InfeasibleError(stage.index, "b(x) = 0 with a(x) = " +
                                                       std::to_string(p.constraint.a) + " <= 0");
            p.Wb = Vector::Zero(p.k.size());
            p.z = -std::numeric_limits<double>::infinity();
            p.lambda = 0.0;
            return p;
        }
        p.Wb = p.W * p.constraint.b;
        p.bWb = p.constraint.b.dot(p.Wb);
        p.z = (-p.constraint.a - p.constraint.b.dot(p.k)) / p.bWb;
        p.lambda = std::max(0.0, p.z);
        return p;
    }

    Vector StagePoint::control() const
    {
        if (lambda == 0.0)
            return k;
        return k + lambda * Wb;
    }

    Vector StagePoint::smoothed_control(double eta) const
    {
        if (degenerate)
            return k;
        return k + softplus(z, eta) * Wb;
    }

    // ---------------------------------------------------------------------
    // Linearization and value recursion

    StageJacobians stage_jacobians(const StageData &stage, const Vector &xbar,
                                   const SolverOptions &opts)
    {
        const int n = static_cast<int>(xbar.size());
        const int m = static_cast<int>(stage.cost.R.rows());
        const double h = opts.fd_scale * (1.0 + xbar.norm());

        GainCache local;
        StageData cached = stage;
        if (!stage.gain)
        {
            const StagePoint base = evaluate_stage(stage, xbar, opts);
            local = {base.G, base.W};
            cached.gain = &local;
        }

        // Stacked [u~(x); F(x) + G(x) u~(x)].
        const kernels::VectorFn closed_loop = [&](const Vector &x)
        {
            const StagePoint p = evaluate_stage(cached, x, opts);
            Vector out(m + n);
            out.head(m) = p.smoothed_control(opts.eta);
            out.tail(n) = p.F + p.G * out.head(m);
            return out;
        };

        const Matrix sweep = opts.parallel_jacobians
                                 ? kernels::perturbation_sweep_omp(closed_loop, xbar, h, m + n)
                                 : kernels::perturbation_sweep_serial(closed_loop, xbar, h, m + n);
        for (int j = 0; j < n; ++j)
            if (!sweep.middleCols(4 * j, 4).allFinite())
                throw JacobianError(stage.index, j, "non-finite value while differencing");

        const Matrix D = kernels::differences_from_sweep(sweep, h).extrapolated;
        StageJacobians jac{D.topRows(m), D.bottomRows(n)};

        if (stage.dynamics.has_analytic_jacobians())
        {
            const StagePoint p = evaluate_stage(cached, xbar, opts);
            const Vector u = p.smoothed_control(opts.eta);
            jac.A_tilde = stage.dynamics.dF(xbar) + stage.dynamics.dGu(xbar, u) + p.G * jac.K;
        }
        return jac;
    }

    namespace
    {
        void clip_psd(Matrix &P, double clip)
        {
            if (min_eigenvalue(P) >= clip)
                return;
            Eigen::SelfAdjointEigenSolver<Matrix> es(P);
            const Vector lambda = es.eigenvalues().cwiseMax(0.0);
            P = symmetrized(es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose());
        }
    } // namespace

    RiccatiStep riccati_step(const StageData &stage, const Vector &xbar, const SolverOptions &opts)
    {
        const StagePoint p = evaluate_stage(stage, xbar, opts);
        const Vector u = p.control();
        const Vector x_next = p.F + p.G * u;

        RiccatiStep step;
        step.u_nominal = u;
        step.gain = {p.G, p.W};
        StageData cached = stage;
        cached.gain = &step.gain;
        step.jacobians = stage_jacobians(cached, xbar, opts);
        const Matrix &K = step.jacobians.K;
        const Matrix &A = step.jacobians.A_tilde;
        const Matrix &R = stage.cost.R;
        const Matrix &P_next = stage.next.P;

        Matrix P = stage.cost.Q + K.transpose() * R * K + A.transpose() * P_next * A;
        P = symmetrized(P);
        clip_psd(P, opts.psd_clip);

        step.value.T = A.transpose() * (P_next * (x_next - A * xbar) + stage.next.T) +
                       K.transpose() * (R * u - R * (K * xbar) + stage.cost.Omega) + stage.cost.Gamma;
        step.value.P = std::move(P);
        return step;
    }

    double approx_stage_cost(const StageCost &cost, const Matrix &P_next, const Vector &T_next,
                             const DiscreteDynamics &dyn, const Vector &x, const Vector &u)
    {
        const Vector y = dyn.F(x) + dyn.G(x) * u;
        return cost.evaluate(x, u) + 0.5 * y.dot(P_next * y) + T_next.dot(y);
    }

    // ---------------------------------------------------------------------
    // Policy sequence

    PolicySequence::PolicySequence(DiscreteDynamics dynamics, SolverOptions options,
                                   std::vector<PolicyStage> stages,
                                   std::vector<ValueQuadratic> values, std::vector<Vector> nominal)
        : dynamics_(std::move(dynamics)), options_(options), stages_(std::move(stages)),
          values_(std::move(values)), nominal_(std::move(nominal))
    {
        if (values_.size() != stages_.size() + 1 || nominal_.size() != stages_.size())
            throw ConfigError("policy sequence lengths are inconsistent");
    }

    int PolicySequence::state_dim() const
    {
        return values_.empty() ? 0 : static_cast<int>(values_.back().P.rows());
    }

    int PolicySequence::control_dim() const
    {
        return stages_.empty() ? 0 : static_cast<int>(stages_.front().cost.R.rows());
    }

    StageData PolicySequence::stage_data(int i) const
    {
        const PolicyStage &s = stages_.at(i);
        return StageData{s.cost, values_.at(i + 1), s.constraint, dynamics_, i, &s.gain};
    }

    StagePoint PolicySequence::evaluate(int i, const Vector &x) const
    {
        return evaluate_stage(stage_data(i), x, options_);
    }

    Vector policy_eval(const PolicySequence &policy, int i, const Vector &x)
    {
        return policy.evaluate(i, x).control();
    }

    Vector smoothed_policy_eval(const PolicySequence &policy, int i, const Vector &x)
    {
        return policy.evaluate(i, x).smoothed_control(policy.options().eta);
    }

    Vector closed_loop_map(const PolicySequence &policy, int i, const Vector &x)
    {
        const StagePoint p = policy.evaluate(i, x);
        return p.F + p.G * p.smoothed_control(policy.options().eta);
    }

    StageJacobians stage_jacobians(const PolicySequence &policy, int i, const Vector &xbar)
    {
        return stage_jacobians(policy.stage_data(i), xbar, policy.options());
    }

    PolicySequence backward_pass(const std::vector<Vector> &nominal,
                                 const std::vector<StageCost> &costs,
                                 const TerminalCost &terminal,
                                 const std::vector<StageConstraint> &constraints,
                                 const DiscreteDynamics &dyn, const SolverOptions &opts)
    {
        const std::size_t N = nominal.size();
        if (N == 0)
            throw ConfigError("backward pass needs at least one stage");
        if (costs.size() != N)
            throw ConfigError("stage cost count does not match the nominal trajectory");
        if (constraints.size() != N && constraints.size() != 1)
            throw ConfigError("constraint count must be 1 or match the nominal trajectory");
        if (!(opts.eta > 0.0))
            throw ConfigError("softplus sharpness eta must be positive");
        const Eigen::Index n = terminal.Q.rows();
        if (terminal.Gamma.size() != n)
            throw ConfigError("Gamma_N length must match Q_N");
        for (std::size_t i = 0; i < N; ++i)
        {
            if (nominal[i].size() != n || costs[i].Q.rows() != n || costs[i].Gamma.size() != n ||
                costs[i].Omega.size() != costs[i].R.rows())
                throw ConfigError("stage " + std::to_string(i) + " has inconsistent dimensions");
        }

        std::vector<ValueQuadratic> values(N + 1);
        values[N] = {terminal.Q, terminal.Gamma};
        std::vector<PolicyStage> stages(N);

        for (std::size_t r = 0; r < N; ++r)
        {
            const std::size_t i = N - 1 - r;
            const StageConstraint &constraint = constraints.size() == 1 ? constraints[0] : constraints[i];
            const StageData data{costs[i], values[i + 1], constraint, dyn, static_cast<int>(i)};
            RiccatiStep step;
            try
            {
                step = riccati_step(data, nominal[i], opts);
            }
            catch (const SolverError &)
            {
                throw;
            }
            catch (const std::exception &e)
            {
                throw SolverError(static_cast<int>(i), e.what());
            }
            values[i] = std::move(step.value);
            stages[i] = PolicyStage{costs[i], constraint, std::move(step.jacobians.K),
                                    std::move(step.jacobians.A_tilde), std::move(step.gain)};
        }
        return PolicySequence(dyn, opts, std::move(stages), std::move(values), nominal);
    }

} // namespace cadp
