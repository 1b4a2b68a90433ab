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

#pragma once

#include <stdexcept>
#include <string>

namespace cadp
{

    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Invalid configuration or problem data (non-PSD weights, bad horizon, ...).
    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    /// Numerical failure inside the backward recursion. `stage()` is -1 when
    /// the failing call was not tied to a stage of a policy.
    class SolverError : public Error
    {
    public:
        SolverError(int stage, const std::string &what)
            : Error(stage >= 0 ? "stage " + std::to_string(stage) + ": " + what : what),
              stage_(stage) {}

        int stage() const noexcept { return stage_; }

    private:
        int stage_;
    };

    /// b(x) vanished while a(x) <= 0: the single affine constraint cannot be met.
    class InfeasibleError : public SolverError
    {
    public:
        using SolverError::SolverError;
    };

    class JacobianError : public SolverError
    {
    public:
        JacobianError(int stage, int coordinate, const std::string &what)
            : SolverError(stage, "coordinate " + std::to_string(coordinate) + ": " + what),
              coordinate_(coordinate) {}

        int coordinate() const noexcept { return coordinate_; }

    private:
        int coordinate_;
    };

    /// Failure while evaluating level `level()` of a higher-order barrier chain.
    class ChainError : public Error
    {
    public:
        ChainError(int level, const std::string &what)
            : Error("chain level " + std::to_string(level) + ": " + what), level_(level) {}

        int level() const noexcept { return level_; }

    private:
        int level_;
    };

    class SimulationError : public Error
    {
    public:
        SimulationError(double time, const std::string &what)
            : Error("t=" + std::to_string(time) + ": " + what), time_(time) {}

        double time() const noexcept { return time_; }

    private:
        double time_;
    };

} // namespace cadp
