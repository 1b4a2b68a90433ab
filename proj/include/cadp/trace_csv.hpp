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

// Per-trial trace files. Columns:
//   t, qx, qy, gamma, s, omega, v_r, v_l, delta, psi0, solve_ms,
//   vd_r, vd_l, update, constraint
// Numbers are written in shortest round-trip form, so a trace read back
// reproduces the logged doubles exactly.

#pragma once

#include <filesystem>
#include <string>

#include "cadp/simulation.hpp"

namespace cadp::bench
{

    std::string trace_header();

    void write_trace(const std::filesystem::path &path, const ClosedLoopLog &log);

    /// Rebuilds a log from a trace written by write_trace. The chain column
    /// holds psi0 only.
    ClosedLoopLog read_trace(const std::filesystem::path &path);

} // namespace cadp::bench
