// otplab: demo, attack and selftest front end.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "otplab/errors.hpp"
#include "otplab/harness/demo.hpp"
#include "otplab/harness/experiment.hpp"
#include "otplab/harness/selftest.hpp"

namespace h = otplab::harness;

namespace {

constexpr int kExitConfig = 2;

int cmd_attack(const h::ExperimentConfig& config) {
  h::Report report;
  try {
    report = h::run_attack(config);
  } catch (const otplab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const std::string body = h::render(report);
  if (config.output.empty() || config.output == "-") {
    std::cout << body;
  } else {
    std::ofstream out(config.output, std::ios::binary);
    if (!out || !(out << body)) {
      std::cerr << "cannot write " << config.output << "\n";
      return 1;
    }
  }
  const auto& r = report.result;
  std::ostream& summary = config.output.empty() || config.output == "-" ? std::cerr : std::cout;
  summary << std::fixed << std::setprecision(4) << config.attack << ": advantage " << r.advantage << " (95% CI "
          << r.advantage_ci.low << " .. " << r.advantage_ci.high << "), success rate " << r.success_rate << ", "
          << r.correct << "/" << r.trials << "\n";
  for (const auto& d : report.deviations) summary << "deviation " << d.id << ": " << d.description << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ownership-transfer privacy lab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "Master seed")->envname("OTPLAB_SEED");

  // demo
  h::DemoOptions demo;
  std::string demo_protocol = "rotiv";
  auto* demo_cmd = app.add_subcommand("demo", "Honest transfer plus one session, message by message");
  demo_cmd->add_option("protocol", demo_protocol, "rotiv or chen")->required();
  demo_cmd->add_option("--q", demo.q, "Group order (prime)");
  demo_cmd->add_option("--word-width", demo.word_width, "Chen word width: 8, 16 or 32");
  demo_cmd->add_flag("--drop", demo.drop_message, "Lose the last message of the transfer exchange");
  demo_cmd->add_flag("--reveal", demo.reveal, "Print secure-channel payloads and keys");
  demo_cmd->add_flag("--literal-reencryption", demo.literal_reencryption,
                     "ROTIV: re-encrypt under the releasing owner's key");

  // attack
  h::ExperimentConfig config;
  std::string attack_protocol;
  std::string format = "json";
  auto* attack_cmd = app.add_subcommand("attack", "Run an attack game and write a report");
  attack_cmd->set_config("--config", "", "key=value configuration file; flags override it");
  attack_cmd->add_option("attack", config.attack, "Attack name")
      ->required()
      ->check(CLI::IsMember(h::known_attacks()));
  attack_cmd->add_option("--protocol", attack_protocol, "rotiv or chen (default: from the attack name)");
  attack_cmd->add_option("--trials", config.trials, "Number of games");
  attack_cmd->add_option("--tau", config.tau, "Key search bound");
  attack_cmd->add_option("--word-width", config.word_width, "Chen word width: 8, 16 or 32");
  attack_cmd->add_option("--q", config.q, "Group order (prime)");
  attack_cmd->add_option("--gap-max", config.gap_max, "Largest number of sessions since the adversary's snapshot");
  attack_cmd->add_option("--output,-o", config.output, "Report path (default stdout)");
  attack_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  attack_cmd->add_option("--jobs,-j", config.jobs, "Worker threads");
  attack_cmd->add_flag("--reveal", config.reveal, "Report raw recovered secrets instead of fingerprints");
  attack_cmd->add_flag("--loop-from-zero", config.loop_from_zero, "Start the key search at zero elapsed sessions");

  // selftest
  h::SelftestOptions selftest;
  auto* selftest_cmd = app.add_subcommand("selftest", "Reduced invariant suites of every module");
  selftest_cmd->add_flag("--corrupt-crc-table", selftest.corrupt_crc_table,
                         "Test hook: flip one crc16 table entry before checking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*demo_cmd) {
      demo.seed = seed;
      demo.protocol = h::parse_protocol(demo_protocol);
      return h::run_demo(demo, std::cout, std::cerr);
    }
    if (*attack_cmd) {
      config.seed = seed;
      config.format = h::parse_format(format);
      config.protocol = h::parse_protocol(attack_protocol.empty() ? config.attack.substr(0, config.attack.find('-'))
                                                                  : attack_protocol);
      return cmd_attack(config);
    }
    if (*selftest_cmd) return h::run_selftest(selftest, std::cout);
  } catch (const otplab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
