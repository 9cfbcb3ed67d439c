#pragma once

// Experiment configuration, the attack runner and its reports.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "otplab/oracle.hpp"

namespace otplab::harness {

enum class Protocol { Rotiv, Chen };
enum class Format { Json, Csv };

std::string to_string(Protocol p);
Protocol parse_protocol(const std::string& s);  // ConfigError on unknown names
Format parse_format(const std::string& s);

// Attacks cmd_attack knows about. The first four are the real attacks; the
// rest are baselines and controls.
const std::vector<std::string>& known_attacks();

struct ExperimentConfig {
  Protocol protocol = Protocol::Chen;
  std::string attack = "chen-trace";
  std::uint64_t trials = 500;
  std::uint64_t tau = 64;
  unsigned word_width = 16;
  std::uint64_t q = group::kDefaultModulus;
  std::uint64_t seed = 1;
  std::string output;  // empty: stdout
  Format format = Format::Json;
  bool reveal = false;
  unsigned jobs = 1;
  std::uint64_t gap_max = 16;
  bool loop_from_zero = false;
};

// Throws ConfigError describing the first violated constraint.
void validate(const ExperimentConfig& config);

struct Deviation {
  std::string id;
  std::string description;
  std::uint64_t trials = 0;  // trials that raised it
};

// Human description of a flag raised by an attack or game.
std::string describe_flag(const std::string& flag);

struct Report {
  ExperimentConfig config;
  oracle::GameResult result;
  std::vector<Deviation> deviations;
};

// Validates, builds the game and runs it.
Report run_attack(const ExperimentConfig& config);

nlohmann::json to_json(const Report& report);
std::string render(const Report& report);  // in config.format
void write_csv(std::ostream& out, const Report& report);

}  // namespace otplab::harness
