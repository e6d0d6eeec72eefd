// Copyright 2026 The holoqutrit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

namespace holo {

struct RunOptions {
  std::string command;  // gate, qpt, rb, sweep, cavity, calibrate
  std::filesystem::path config;  // empty: built-in defaults
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool exact_measurement = false;
  std::optional<long> shots;
};

/// Reads a JSON config and checks its schema version. Throws ConfigError
/// naming the offending key path, IoError when the file cannot be read.
nlohmann::json load_config(const std::filesystem::path& path);
/// Smallest valid config; every other key takes its documented default.
nlohmann::json default_config();

/// Runs one subcommand, writing artifacts and manifest.json under options.out.
/// Returns 0 on success; errors propagate as holo::Error.
int run(const RunOptions& options, std::ostream& log);

/// argv front end; maps library errors to exit status 2 (config), 3 (I/O), 1 (other).
int run_cli(int argc, char** argv);

}  // namespace holo
