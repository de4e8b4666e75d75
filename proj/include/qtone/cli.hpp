/*
 * Copyright 2026 The qtone Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QTONE_CLI_HPP
#define QTONE_CLI_HPP

#include <optional>
#include <string>
#include <vector>

#include "qtone/tonemap.hpp"

namespace qtone::cli {

/// Bad invocation or bad configuration; maps to exit code 2.
struct UsageError : Error {
    using Error::Error;
};

struct SweepSpec {
    std::string param;  // "gamma" or "beta"
    std::vector<double> values;
};

struct Config {
    std::vector<std::string> inputs;
    std::string output = ".";  // file path (single input) or directory
    PipelineConfig pipeline;
    std::optional<SweepSpec> sweep;
    bool emit_report = false;
    bool csv = false;
    bool show_help = false;
    std::string help_text;
};

/// Parses argv[1..] into a Config. Flags override config-file values
/// (from --config or $TONEMAP_CONFIG) which override built-in defaults.
/// Throws UsageError on unknown flags, missing inputs, conflicting options
/// or an unreadable config file.
Config parse_args(const std::vector<std::string>& args);

/// Loads a flat `key = value` config file with [tone]/[hdr]/[display]
/// sections into cfg.
void apply_config_file(const std::string& path, Config& cfg);

enum class StatsFormat { KeyValue, Csv };

/// Flat key-value block or a one-row CSV (with header) for a report.
std::string emit_stats(const RunReport& report, StatsFormat format,
                       const std::string& input_name = "");

/// Processes every input independently; per-file failures are reported and
/// do not abort the batch. Returns 0 on full success, 1 when any file
/// failed. Output and report writes are atomic.
int run_batch(const Config& cfg);

/// Top-level entry: parse, dispatch, translate errors into exit codes
/// (0 success, 1 partial failure, 2 usage error).
int run(int argc, const char* const* argv);

}  // namespace qtone::cli

#endif  // QTONE_CLI_HPP
