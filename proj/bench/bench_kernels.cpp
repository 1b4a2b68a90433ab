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

// Serial kernels against their OpenMP twins on the robot workload: the
// perturbation sweep behind each stage Jacobian, a batch of state
// evaluations, and a whole backward pass over the reference horizon.

#include <benchmark/benchmark.h>

#include "cadp/kernels.hpp"
#include "cadp/trial.hpp"

namespace
{

    using namespace cadp;

    bench::Scenario scenario()
    {
        return bench::load_scenario(CADP_SCENARIO_DIR "/cluttered12.json");
    }

    Vector start_state()
    {
        return (Vector(5) << 0.5, 0.2, 0.1, 0.4, 0.05).finished();
    }

    // One closed-loop evaluation of the kind the Jacobian sweep performs:
    // the discretized robot step under a fixed voltage, followed by the soft
    // minimum over every barrier.
    kernels::VectorFn robot_map(const bench::Scenario &s)
    {
        const robot::RobotParams p = s.params;
        const robot::ObstacleMap map = s.map;
        const robot::ScenarioLimits limits = s.limits;
        const double T_p = s.horizon.T_p;
        return [=](const Vector &x) -> Vector
        {
            Vector y(6);
            y.head(5) = x + T_p * (robot::robot_f(x, p) + robot::robot_g(p) * Eigen::Vector2d(1.0, 0.5));
            y(5) = robot::robot_psi0(map, x, limits, p).value;
            return y;
        };
    }

    template <bool Parallel>
    void BM_PerturbationSweep(benchmark::State &state)
    {
        const kernels::VectorFn fn = robot_map(scenario());
        const Vector x = start_state();
        for (auto _ : state)
        {
            Matrix m = Parallel ? kernels::perturbation_sweep_omp(fn, x, 1e-5, 6)
                                : kernels::perturbation_sweep_serial(fn, x, 1e-5, 6);
            benchmark::DoNotOptimize(m.data());
        }
    }

    template <bool Parallel>
    void BM_MapStates(benchmark::State &state)
    {
        const kernels::VectorFn fn = robot_map(scenario());
        std::vector<Vector> states(static_cast<std::size_t>(state.range(0)));
        for (std::size_t i = 0; i < states.size(); ++i)
            states[i] = start_state() * (1.0 + 1e-3 * static_cast<double>(i));
        for (auto _ : state)
        {
            std::vector<Vector> out = Parallel ? kernels::map_states_omp(fn, states)
                                               : kernels::map_states_serial(fn, states);
            benchmark::DoNotOptimize(out.data());
        }
        state.SetItemsProcessed(state.iterations() * state.range(0));
    }

    template <bool Parallel>
    void BM_BackwardPass(benchmark::State &state)
    {
        const bench::Scenario s = scenario();
        const bench::TrialSetup setup = bench::make_setup(s, s.goals.front());
        const HorizonConfig &cfg = s.horizon;
        const std::vector<Vector> nominal(static_cast<std::size_t>(cfg.stages()), start_state());
        const SampledCosts costs = sample_stage_costs(0, cfg, setup.running);
        SolverOptions opts;
        opts.eta = cfg.eta;
        opts.parallel_jacobians = Parallel;
        for (auto _ : state)
        {
            PolicySequence pol =
                backward_pass(nominal, costs.stages, costs.terminal, {setup.constraint}, setup.discrete, opts);
            benchmark::DoNotOptimize(&pol);
        }
        state.counters["threads"] = kernels::max_threads();
    }

} // namespace

BENCHMARK(BM_PerturbationSweep<false>)->Name("perturbation_sweep/serial");
BENCHMARK(BM_PerturbationSweep<true>)->Name("perturbation_sweep/omp");
BENCHMARK(BM_MapStates<false>)->Name("map_states/serial")->Arg(64)->Arg(400);
BENCHMARK(BM_MapStates<true>)->Name("map_states/omp")->Arg(64)->Arg(400);
BENCHMARK(BM_BackwardPass<false>)->Name("backward_pass_n400/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BackwardPass<true>)->Name("backward_pass_n400/omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
