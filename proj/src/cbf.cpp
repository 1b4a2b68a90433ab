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

#include "cadp/cbf.hpp"

#include <algorithm>
#include <cmath>

#include "cadp/errors.hpp"

namespace cadp
{

    Barrier Barrier::analytic(std::string label, Eval eval)
    {
        return Barrier(std::move(label), std::move(eval));
    }

    Barrier Barrier::analytic(std::string label, std::function<double(const Vector &)> h,
                              std::function<Vector(const Vector &)> grad)
    {
        return Barrier(std::move(label), [h = std::move(h), grad = std::move(grad)](const Vector &x)
                       { return BarrierValue{h(x), grad(x)}; });
    }

    Barrier Barrier::numeric(std::string label, std::function<double(const Vector &)> h, double step)
    {
        return Barrier(std::move(label), [h = std::move(h), step](const Vector &x)
                       { return BarrierValue{h(x), numeric_gradient(h, x, step)}; });
    }

    Vector numeric_gradient(const std::function<double(const Vector &)> &h, const Vector &x,
                            double step)
    {
        Vector grad(x.size());
        Vector xp = x;
        for (Eigen::Index j = 0; j < x.size(); ++j)
        {
            xp(j) = x(j) + step;
            const double up = h(xp);
            xp(j) = x(j) - step;
            const double down = h(xp);
            xp(j) = x(j);
            grad(j) = (up - down) / (2.0 * step);
        }
        return grad;
    }

    double soft_min(std::span<const double> values, double rho)
    {
        const double m = *std::min_element(values.begin(), values.end());
        double sum = 0.0;
        for (double v : values)
            sum += std::exp(-rho * (v - m));
        return m - std::log(sum) / rho;
    }

    std::vector<double> soft_min_weights(std::span<const double> values, double rho)
    {
        const double m = *std::min_element(values.begin(), values.end());
        std::vector<double> w(values.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            w[i] = std::exp(-rho * (values[i] - m));
            sum += w[i];
        }
        for (double &wi : w)
            wi /= sum;
        return w;
    }

    // ---------------------------------------------------------------------

    SoftMinBarrier::SoftMinBarrier(std::vector<Barrier> members, double rho)
        : members_(std::move(members)), rho_(rho)
    {
        if (members_.empty())
            throw ConfigError("soft-min needs at least one barrier");
        if (!(rho_ > 0.0))
            throw ConfigError("soft-min sharpness rho must be positive");
    }

    std::vector<double> SoftMinBarrier::member_values(const Vector &x) const
    {
        std::vector<double> h(members_.size());
        for (std::size_t i = 0; i < members_.size(); ++i)
            h[i] = members_[i].value(x);
        return h;
    }

    BarrierValue SoftMinBarrier::evaluate(const Vector &x) const
    {
        std::vector<double> h(members_.size());
        std::vector<Vector> grads(members_.size());
        for (std::size_t i = 0; i < members_.size(); ++i)
        {
            BarrierValue bv = members_[i].evaluate(x);
            h[i] = bv.value;
            grads[i] = std::move(bv.gradient);
        }
        const std::vector<double> w = soft_min_weights(h, rho_);
        BarrierValue out{soft_min(h, rho_), Vector::Zero(x.size())};
        for (std::size_t i = 0; i < members_.size(); ++i)
            if (w[i] > 0.0)
                out.gradient += w[i] * grads[i];
        return out;
    }

    Barrier SoftMinBarrier::as_barrier(std::string label) const
    {
        return Barrier::analytic(std::move(label), [self = *this](const Vector &x)
                                 { return self.evaluate(x); });
    }

    double SoftMinBarrier::approximation_bound() const
    {
        return std::log(static_cast<double>(members_.size())) / rho_;
    }

    // ---------------------------------------------------------------------

    ClassK linear_class_k(double kappa)
    {
        if (!(kappa > 0.0))
            throw ConfigError("class-K gain must be positive");
        return [kappa](double z) { return kappa * z; };
    }

    bool looks_like_class_k(const ClassK &alpha, double range, int samples)
    {
        if (alpha(0.0) != 0.0)
            return false;
        double prev = alpha(-range);
        for (int s = 1; s < samples; ++s)
        {
            const double z = -range + 2.0 * range * s / (samples - 1);
            const double v = alpha(z);
            if (!(v >= prev))
                return false;
            prev = v;
        }
        return true;
    }

    void HigherOrderChain::validate() const
    {
        if (degree < 1)
            throw ConfigError("chain degree must be positive");
        if (static_cast<int>(alphas.size()) < degree - 1)
            throw ConfigError("chain of degree d needs d-1 class-K functions");
        for (int j = 0; j + 1 < degree; ++j)
            if (!alphas[j] || !looks_like_class_k(alphas[j]))
                throw ConfigError("alpha_" + std::to_string(j) + " is not an extended class-K function");
        if (!dynamics.f || !dynamics.g)
            throw ConfigError("chain dynamics f and g are required");
        if (!(fd_step > 0.0))
            throw ConfigError("chain finite-difference step must be positive");
    }

    namespace
    {
        double level_value(const HigherOrderChain &chain, int j, const Vector &x);

        Vector level_gradient(const HigherOrderChain &chain, int j, const Vector &x)
        {
            Vector grad = j == 0
                              ? chain.psi0.gradient(x)
                              : numeric_gradient([&](const Vector &y) { return level_value(chain, j, y); },
                                                 x, chain.fd_step);
            if (!grad.allFinite())
                throw ChainError(j, "non-finite gradient");
            return grad;
        }

        double level_value(const HigherOrderChain &chain, int j, const Vector &x)
        {
            if (j == 0)
                return chain.psi0.value(x);
            const double below = level_value(chain, j - 1, x);
            const Vector grad = level_gradient(chain, j - 1, x);
            return grad.dot(chain.dynamics.f(x)) + chain.alphas[j - 1](below);
        }
    } // namespace

    std::vector<double> lift_chain(const HigherOrderChain &chain, const Vector &x)
    {
        std::vector<double> psi(chain.degree);
        psi[0] = chain.psi0.value(x);
        for (int j = 1; j < chain.degree; ++j)
        {
            const Vector grad = level_gradient(chain, j - 1, x);
            psi[j] = grad.dot(chain.dynamics.f(x)) + chain.alphas[j - 1](psi[j - 1]);
            if (!std::isfinite(psi[j]))
                throw ChainError(j, "non-finite value");
        }
        return psi;
    }

    BarrierValue chain_top(const HigherOrderChain &chain, const Vector &x)
    {
        const int top = chain.degree - 1;
        if (top == 0)
        {
            BarrierValue bv = chain.psi0.evaluate(x);
            if (!bv.gradient.allFinite())
                throw ChainError(0, "non-finite gradient");
            return bv;
        }
        return {level_value(chain, top, x), level_gradient(chain, top, x)};
    }

    AffineConstraint affine_terms(const HigherOrderChain &chain, const ClassK &alpha, const Vector &x)
    {
        const BarrierValue top = chain_top(chain, x);
        const Matrix g = chain.dynamics.g(x);
        AffineConstraint c;
        c.a = top.gradient.dot(chain.dynamics.f(x)) + alpha(top.value);
        c.b.resize(g.cols() + 1);
        c.b.head(g.cols()) = g.transpose() * top.gradient;
        c.b(g.cols()) = top.value;
        return c;
    }

    double cbf_constraint_value(const HigherOrderChain &chain, const ClassK &alpha,
                                const Vector &x, const Vector &v, double delta)
    {
        const BarrierValue top = chain_top(chain, x);
        const double lf = top.gradient.dot(chain.dynamics.f(x));
        const double lgv = top.gradient.dot(chain.dynamics.g(x) * v);
        return lf + lgv + alpha(top.value) + top.value * delta;
    }

    StageConstraint make_stage_constraint(HigherOrderChain chain, ClassK alpha)
    {
        chain.validate();
        return {[chain = std::move(chain), alpha = std::move(alpha)](const Vector &x)
                { return affine_terms(chain, alpha, x); }};
    }

} // namespace cadp
