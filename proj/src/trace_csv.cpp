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

#include "cadp/trace_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <fmt/os.h>

#include "cadp/errors.hpp"

namespace cadp::bench
{

    namespace
    {
        constexpr int kColumns = 15;

        double parse_double(const std::string &cell, const std::filesystem::path &path, std::size_t line)
        {
            // from_chars handles "nan" and "inf" as written by fmt.
            double value = 0.0;
            const char *first = cell.data();
            const char *last = first + cell.size();
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc() || ptr != last)
                throw ConfigError(fmt::format("{}:{}: bad number '{}'", path.string(), line, cell));
            return value;
        }
    } // namespace

    std::string trace_header()
    {
        return "t,qx,qy,gamma,s,omega,v_r,v_l,delta,psi0,solve_ms,vd_r,vd_l,update,constraint";
    }

    void write_trace(const std::filesystem::path &path, const ClosedLoopLog &log)
    {
        log.validate();
        auto out = fmt::output_file(path.string());
        out.print("{}\n", trace_header());
        for (std::size_t j = 0; j < log.size(); ++j)
        {
            const Vector &x = log.x[j];
            const Vector &v = log.v[j];
            const Vector &vd = log.v_desired[j];
            out.print("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", log.t[j], x(0), x(1), x(2), x(3), x(4),
                      v(0), v(1), log.delta[j], log.psi0[j], log.solve_ms[j], vd(0), vd(1),
                      static_cast<int>(log.update[j]), log.constraint[j]);
        }
    }

    ClosedLoopLog read_trace(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open trace " + path.string());
        std::string line;
        if (!std::getline(in, line) || line != trace_header())
            throw ConfigError("trace " + path.string() + " has an unexpected header");

        ClosedLoopLog log;
        std::size_t line_no = 1;
        std::vector<double> row(kColumns);
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            std::istringstream cells(line);
            std::string cell;
            int c = 0;
            while (std::getline(cells, cell, ','))
            {
                if (c >= kColumns)
                    throw ConfigError(fmt::format("{}:{}: too many columns", path.string(), line_no));
                row[c++] = parse_double(cell, path, line_no);
            }
            if (c != kColumns)
                throw ConfigError(fmt::format("{}:{}: expected {} columns", path.string(), line_no, kColumns));

            Vector x(5);
            x << row[1], row[2], row[3], row[4], row[5];
            log.t.push_back(row[0]);
            log.x.push_back(x);
            log.v.push_back(Eigen::Vector2d(row[6], row[7]));
            log.delta.push_back(row[8]);
            log.psi0.push_back(row[9]);
            log.chain.push_back({row[9]});
            log.solve_ms.push_back(row[10]);
            log.v_desired.push_back(Eigen::Vector2d(row[11], row[12]));
            log.update.push_back(row[13] != 0.0 ? 1 : 0);
            log.constraint.push_back(row[14]);
        }
        log.validate();
        return log;
    }

} // namespace cadp::bench
