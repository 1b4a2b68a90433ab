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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "cadp/cbf.hpp"
#include "cadp/errors.hpp"
#include "cadp/robot.hpp"
#include "oracles.hpp"

namespace cadp
{
    namespace
    {

        // f = (x_2, 0), g = (0, 1)
        ContinuousDynamics double_integrator()
        {
            return {[](const Vector &x) -> Vector { return (Vector(2) << x(1), 0.0).finished(); },
                    [](const Vector &) -> Matrix { return (Matrix(2, 1) << 0.0, 1.0).finished(); }};
        }

        HigherOrderChain position_chain(int degree)
        {
            Barrier psi0 = Barrier::analytic(
                "x1", [](const Vector &x) { return x(0); },
                [](const Vector &x) -> Vector { return Vector::Unit(x.size(), 0); });
            return {psi0, degree, {linear_class_k(1.0)}, double_integrator()};
        }

        // ---------------------------------------------------------------
        // soft_min

        TEST(SoftMin, SingleValueIsExact)
        {
            const std::vector<double> v{1.0};
            for (double rho : {1e-3, 1.0, 750.0, 1e8})
                EXPECT_EQ(soft_min(v, rho), 1.0);
        }

        TEST(SoftMin, TwoZerosGiveMinusLogTwo)
        {
            const std::vector<double> v{0.0, 0.0};
            EXPECT_NEAR(soft_min(v, 1.0), -std::log(2.0), 1e-15);
        }

        TEST(SoftMin, SandwichWithFortyThreeValues)
        {
            oracle::Rng rng(31);
            const double bound = std::log(43.0) / 750.0;
            EXPECT_NEAR(bound, 0.005014933487591417, 1e-15);
            for (int trial = 0; trial < 1000; ++trial)
            {
                std::vector<double> v(43);
                for (double &h : v)
                    h = rng.uniform(-5.0, 5.0) * (trial % 2 == 0 ? 1.0 : 1e-3);
                const double lo = *std::min_element(v.begin(), v.end());
                const double s = soft_min(v, 750.0);
                EXPECT_LE(s, lo);
                EXPECT_GE(s, lo - bound);
            }
        }

        TEST(SoftMin, LargeValuesDoNotOverflow)
        {
            const std::vector<double> v{1e6, 2e6, 5e5};
            const double s = soft_min(v, 750.0);
            EXPECT_TRUE(std::isfinite(s));
            EXPECT_NEAR(s, 5e5, 1e-9);
        }

        TEST(SoftMin, EqualValuesHitTheLowerBound)
        {
            const std::vector<double> v(43, 0.7);
            EXPECT_NEAR(soft_min(v, 750.0), 0.7 - std::log(43.0) / 750.0, 1e-15);
        }

        TEST(SoftMin, WeightsSumToOneAndFavorTheMinimum)
        {
            const std::vector<double> v{0.3, 0.1, 0.2};
            const std::vector<double> w = soft_min_weights(v, 10.0);
            double sum = 0.0;
            for (double x : w)
                sum += x;
            EXPECT_NEAR(sum, 1.0, 1e-15);
            EXPECT_GT(w[1], w[2]);
            EXPECT_GT(w[2], w[0]);
        }

        TEST(SoftMin, NondecreasingInEachMember)
        {
            oracle::Rng rng(32);
            for (int trial = 0; trial < 500; ++trial)
            {
                std::vector<double> v(5);
                for (double &h : v)
                    h = rng.uniform(-1.0, 1.0);
                const double before = soft_min(v, 50.0);
                v[rng.integer(0, 4)] += rng.uniform(0.0, 0.5);
                EXPECT_GE(soft_min(v, 50.0), before);
            }
        }

        TEST(SoftMinBarrier, GradientIsWeightedMemberGradients)
        {
            oracle::Rng rng(33);
            std::vector<Barrier> members;
            for (int i = 0; i < 4; ++i)
            {
                const Vector c = rng.vector(3);
                const double r = rng.uniform(0.2, 1.0);
                members.push_back(Barrier::analytic(
                    "ball" + std::to_string(i), [c, r](const Vector &x) { return (x - c).squaredNorm() - r * r; },
                    [c](const Vector &x) -> Vector { return 2.0 * (x - c); }));
            }
            const SoftMinBarrier psi(members, 5.0);
            for (int trial = 0; trial < 100; ++trial)
            {
                const Vector x = rng.vector(3);
                const BarrierValue bv = psi.evaluate(x);
                const Vector fd = oracle::central_gradient([&](const Vector &y) { return psi.evaluate(y).value; }, x, 1e-5);
                EXPECT_LT((bv.gradient - fd).norm(), 1e-5 * (1.0 + fd.norm())) << trial;

                const std::vector<double> h = psi.member_values(x);
                const std::vector<double> w = soft_min_weights(h, 5.0);
                Vector expected = Vector::Zero(3);
                for (int i = 0; i < 4; ++i)
                    expected += w[i] * members[i].gradient(x);
                EXPECT_LT((bv.gradient - expected).norm(), 1e-12 * (1.0 + expected.norm()));
            }
        }

        TEST(SoftMinBarrier, RejectsEmptyOrNonpositiveSharpness)
        {
            EXPECT_THROW(SoftMinBarrier({}, 1.0), ConfigError);
            const Barrier b = Barrier::numeric("x", [](const Vector &x) { return x(0); });
            EXPECT_THROW(SoftMinBarrier({b}, 0.0), ConfigError);
        }

        TEST(Barrier, NumericGradientMatchesAnalytic)
        {
            oracle::Rng rng(34);
            const auto h = [](const Vector &x) { return std::sin(x(0)) * x(1) + x(2) * x(2); };
            const Barrier numeric = Barrier::numeric("h", h);
            for (int trial = 0; trial < 100; ++trial)
            {
                const Vector x = rng.vector(3);
                const Vector exact = (Vector(3) << std::cos(x(0)) * x(1), std::sin(x(0)), 2.0 * x(2)).finished();
                EXPECT_LT((numeric.gradient(x) - exact).norm(), 1e-4 * (1.0 + exact.norm()));
            }
        }

        // ---------------------------------------------------------------
        // class-K and chains

        TEST(ClassK, LinearIsClassK)
        {
            EXPECT_TRUE(looks_like_class_k(linear_class_k(0.5)));
            EXPECT_FALSE(looks_like_class_k([](double z) { return z + 1.0; }));
            EXPECT_FALSE(looks_like_class_k([](double z) { return -z; }));
            EXPECT_THROW(linear_class_k(0.0), ConfigError);
        }

        TEST(Chain, DoubleIntegratorLift)
        {
            const HigherOrderChain chain = position_chain(2);
            oracle::Rng rng(35);
            for (int trial = 0; trial < 50; ++trial)
            {
                const Vector x = rng.vector(2);
                const std::vector<double> psi = lift_chain(chain, x);
                ASSERT_EQ(psi.size(), 2u);
                EXPECT_EQ(psi[0], x(0));
                EXPECT_NEAR(psi[1], x(1) + x(0), 1e-9);
            }
        }

        TEST(Chain, DegreeOneIsPsi0Only)
        {
            const std::vector<double> psi = lift_chain(position_chain(1), (Vector(2) << 0.4, 3.0).finished());
            ASSERT_EQ(psi.size(), 1u);
            EXPECT_EQ(psi[0], 0.4);
        }

        TEST(Chain, NonFiniteGradientNamesLevel)
        {
            HigherOrderChain chain = position_chain(2);
            chain.psi0 = Barrier::analytic(
                "bad", [](const Vector &x) { return x(0); },
                [](const Vector &x) -> Vector { return Vector::Constant(x.size(), std::nan("")); });
            try
            {
                lift_chain(chain, Vector::Zero(2));
                FAIL() << "expected ChainError";
            }
            catch (const ChainError &e)
            {
                EXPECT_EQ(e.level(), 0);
            }
        }

        TEST(Chain, ValidateRejectsMalformedChains)
        {
            HigherOrderChain chain = position_chain(3);
            EXPECT_THROW(chain.validate(), ConfigError); // two levels need two alphas
            chain.alphas.push_back([](double z) { return -z; });
            EXPECT_THROW(chain.validate(), ConfigError);
            chain = position_chain(0);
            EXPECT_THROW(chain.validate(), ConfigError);
        }

        TEST(AffineTerms, DoubleIntegratorSymbolic)
        {
            // psi_1 = x_2 + x_1, L_f psi_1 = x_2, L_g psi_1 = 1, alpha(z) = 2z.
            const HigherOrderChain chain = position_chain(2);
            const ClassK alpha = linear_class_k(2.0);
            oracle::Rng rng(36);
            for (int trial = 0; trial < 100; ++trial)
            {
                const Vector x = rng.vector(2);
                const AffineConstraint c = affine_terms(chain, alpha, x);
                const double psi1 = x(1) + x(0);
                EXPECT_NEAR(c.a, x(1) + 2.0 * psi1, 1e-8);
                ASSERT_EQ(c.b.size(), 2);
                EXPECT_NEAR(c.b(0), 1.0, 1e-8);
                EXPECT_NEAR(c.b(1), psi1, 1e-8);
            }
        }

        TEST(AffineTerms, ZeroInputOnBoundaryGivesZeroB)
        {
            ContinuousDynamics dyn{[](const Vector &) -> Vector { return (Vector(2) << 1.0, 0.0).finished(); },
                                   [](const Vector &) -> Matrix { return Matrix::Zero(2, 1); }};
            HigherOrderChain chain{position_chain(1).psi0, 1, {}, dyn};
            const AffineConstraint c = affine_terms(chain, linear_class_k(1.0), (Vector(2) << 0.0, 5.0).finished());
            EXPECT_EQ(c.b.norm(), 0.0);
            EXPECT_GT(c.a, 0.0);
        }

        TEST(AffineTerms, ZeroControlGivesA)
        {
            const HigherOrderChain chain = position_chain(2);
            const ClassK alpha = linear_class_k(1.0);
            const Vector x = (Vector(2) << 0.3, -0.1).finished();
            const AffineConstraint c = affine_terms(chain, alpha, x);
            EXPECT_EQ(c.value(Vector::Zero(2)), c.a);
            EXPECT_NEAR(cbf_constraint_value(chain, alpha, x, Vector::Zero(1), 0.0), c.a, 1e-12);
        }

        TEST(AffineTerms, AffineFormEqualsTermByTermExpression)
        {
            const robot::RobotParams p;
            robot::ObstacleMap map;
            map.circles = {{{2.0, 0.5}, 0.6}, {{4.0, -1.0}, 0.8}, {{1.0, -2.0}, 0.4}};
            const robot::ScenarioLimits limits;
            const robot::SafeSet safe = robot::assemble_safe_set(map, limits, p);
            const ClassK alpha = linear_class_k(1.0);
            oracle::Rng rng(37);
            for (int trial = 0; trial < 500; ++trial)
            {
                const Vector x = (Vector(5) << rng.uniform(-1, 5), rng.uniform(-3, 3), rng.uniform(-3, 3),
                                  rng.uniform(-1.5, 1.5), rng.uniform(-0.5, 0.5))
                                     .finished();
                const Vector v = rng.vector(2, 5.0);
                const double delta = rng.normal();
                const AffineConstraint c = affine_terms(safe.chain, alpha, x);
                Vector u(3);
                u << v, delta;
                const double direct = cbf_constraint_value(safe.chain, alpha, x, v, delta);
                EXPECT_NEAR(c.value(u), direct, 1e-12 * (1.0 + std::abs(direct)));
            }
        }

    } // namespace
} // namespace cadp
