#include "otplab/harness/experiment.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>

#include "otplab/errors.hpp"
#include "otplab/games.hpp"

namespace otplab::harness {

std::string to_string(Protocol p) { return p == Protocol::Rotiv ? "rotiv" : "chen"; }

Protocol parse_protocol(const std::string& s) {
  if (s == "rotiv") return Protocol::Rotiv;
  if (s == "chen") return Protocol::Chen;
  throw ConfigError("unknown protocol '" + s + "' (expected rotiv or chen)");
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw ConfigError("unknown format '" + s + "' (expected json or csv)");
}

const std::vector<std::string>& known_attacks() {
  static const std::vector<std::string> names = {
      "rotiv-trace", "rotiv-corrupt-trace", "chen-trace", "chen-impersonate",
      "rotiv-random", "chen-random",        "chen-decoy", "chen-impersonate-stale",
  };
  return names;
}

void validate(const ExperimentConfig& c) {
  bool known = false;
  for (const auto& name : known_attacks()) known = known || name == c.attack;
  if (!known) throw ConfigError("unknown attack '" + c.attack + "'");
  const std::string prefix = to_string(c.protocol) + "-";
  if (c.attack.rfind(prefix, 0) != 0) {
    throw ConfigError("attack '" + c.attack + "' does not belong to protocol " + to_string(c.protocol));
  }
  if (c.trials < 1) throw ConfigError("trials must be at least 1");
  if (c.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (c.protocol == Protocol::Chen) {
    const prim::WordSpec spec(c.word_width);
    attacks::validate_tau(spec, c.tau);
    if (c.gap_max < 1) throw ConfigError("gap_max must be at least 1");
  } else {
    group::PairingParams check(c.q);
    (void)check;
  }
}

std::string describe_flag(const std::string& flag) {
  static const std::map<std::string, std::string> text = {
      {attacks::kFlagIdentityCheck,
       "the tracing check reduces to an identity in the pairing group and held for both "
       "candidates, so the attack produced no decision"},
      {attacks::kFlagLoopFromZero,
       "key search started at zero elapsed sessions, covering an adversary that still owns the tag"},
      {games::kFlagCoinFlip, "undetermined guesses were replaced by a fair coin before scoring"},
      {games::kFlagConsecutiveTest, "the Test query returned two consecutive sessions per label"},
  };
  const auto it = text.find(flag);
  return it == text.end() ? flag : it->second;
}

namespace {

games::ChenGameParams chen_params(const ExperimentConfig& c) {
  games::ChenGameParams p;
  p.spec = prim::WordSpec(c.word_width);
  p.tau = c.tau;
  p.gap_min = 1;
  p.gap_max = c.gap_max;
  p.start_at_zero = c.loop_from_zero;
  return p;
}

oracle::TrialFn make_trial(const ExperimentConfig& c) {
  if (c.protocol == Protocol::Chen) {
    const games::ChenGameParams p = chen_params(c);
    if (c.attack == "chen-trace") return games::chen_trace_game(p);
    if (c.attack == "chen-random") return games::chen_trace_game(p, games::chen_random_distinguisher());
    if (c.attack == "chen-decoy") return games::chen_decoy_false_accept(p);
    games::ChenImpersonationParams ip{p, c.attack == "chen-impersonate-stale"};
    return games::chen_impersonation_game(ip);
  }
  games::RotivGameParams p;
  p.q = c.q;
  p.corrupt = c.attack == "rotiv-corrupt-trace";
  if (c.attack == "rotiv-random") return games::rotiv_trace_game(p, games::rotiv_random_distinguisher());
  return games::rotiv_trace_game(p);
}

std::string word_hex(prim::Word w, unsigned bits) {
  std::ostringstream os;
  os << std::hex;
  os.width(static_cast<std::streamsize>(bits / 4));
  os.fill('0');
  os << w.value;
  return os.str();
}

nlohmann::json secrets_json(const RecoveredSecrets& s, unsigned bits) {
  nlohmann::json j = nlohmann::json::object();
  if (s.k_star) j["k_star"] = word_hex(*s.k_star, bits);
  if (s.k_next) j["k_next"] = word_hex(*s.k_next, bits);
  if (s.t_next) j["t_next"] = word_hex(*s.t_next, bits);
  return j;
}

}  // namespace

Report run_attack(const ExperimentConfig& config) {
  validate(config);
  Report report;
  report.config = config;
  report.result = oracle::run_game(make_trial(config), config.trials, config.seed, config.jobs);

  std::map<std::string, std::uint64_t> counts;
  for (const auto& rec : report.result.records) {
    std::vector<std::string> seen = rec.flags;
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (const auto& f : seen) ++counts[f];
  }
  for (const auto& [flag, n] : counts) report.deviations.push_back({flag, describe_flag(flag), n});
  return report;
}

nlohmann::json to_json(const Report& report) {
  const ExperimentConfig& c = report.config;
  const oracle::GameResult& r = report.result;
  nlohmann::json j;
  j["protocol"] = to_string(c.protocol);
  j["attack"] = c.attack;
  j["trials"] = r.trials;
  j["correct"] = r.correct;
  j["undetermined"] = r.undetermined;
  j["success_rate"] = r.success_rate;
  j["success_ci_low"] = r.success_ci.low;
  j["success_ci_high"] = r.success_ci.high;
  j["advantage"] = r.advantage;
  j["ci_low"] = r.advantage_ci.low;
  j["ci_high"] = r.advantage_ci.high;
  j["seed"] = c.seed;

  nlohmann::json params;
  if (c.protocol == Protocol::Chen) {
    params["word_width"] = c.word_width;
    params["tau"] = c.tau;
    params["gap_min"] = 1;
    params["gap_max"] = c.gap_max;
    params["loop_from_zero"] = c.loop_from_zero;
  } else {
    params["q"] = c.q;
  }
  j["params"] = params;

  nlohmann::json devs = nlohmann::json::array();
  for (const auto& d : report.deviations) {
    devs.push_back({{"id", d.id}, {"description", d.description}, {"trials", d.trials}});
  }
  j["deviations"] = devs;

  const unsigned bits = c.protocol == Protocol::Chen ? c.word_width : 64;
  nlohmann::json outcomes = nlohmann::json::array();
  for (const auto& rec : r.records) {
    nlohmann::json o;
    o["trial"] = rec.trial;
    o["guess"] = rec.guess;
    o["raw_guess"] = to_string(rec.raw_guess);
    o["truth"] = rec.truth;
    o["correct"] = rec.correct;
    o["iterations"] = rec.iterations;
    if (c.reveal) {
      o["recovered"] = secrets_json(rec.outcome.recovered, bits);
      o["ground_truth"] = secrets_json(rec.ground_truth, bits);
    } else if (!rec.fingerprint.empty()) {
      o["fingerprint"] = rec.fingerprint;
    }
    if (!rec.flags.empty()) o["flags"] = rec.flags;
    outcomes.push_back(std::move(o));
  }
  j["outcomes"] = outcomes;
  return j;
}

void write_csv(std::ostream& out, const Report& report) {
  out << "trial,guess,truth,correct,iterations\n";
  for (const auto& rec : report.result.records) {
    out << rec.trial << ',' << rec.guess << ',' << rec.truth << ',' << (rec.correct ? 1 : 0) << ','
        << rec.iterations << '\n';
  }
}

std::string render(const Report& report) {
  if (report.config.format == Format::Json) return to_json(report).dump(2) + "\n";
  std::ostringstream os;
  write_csv(os, report);
  return os.str();
}

}  // namespace otplab::harness
