#include <gtest/gtest.h>

#include <sstream>

#include "otplab/attacks.hpp"
#include "otplab/errors.hpp"
#include "otplab/harness/demo.hpp"
#include "otplab/harness/experiment.hpp"
#include "otplab/harness/selftest.hpp"

namespace otplab::harness {
namespace {

ExperimentConfig chen_config(std::uint64_t trials = 50) {
  ExperimentConfig c;
  c.trials = trials;
  return c;
}

TEST(Validate, RejectsBadConfigs) {
  ExperimentConfig c = chen_config();
  EXPECT_NO_THROW(validate(c));

  c.attack = "nope";
  EXPECT_THROW(validate(c), ConfigError);

  c = chen_config();
  c.attack = "rotiv-trace";
  EXPECT_THROW(validate(c), ConfigError);

  c = chen_config();
  c.trials = 0;
  EXPECT_THROW(validate(c), ConfigError);

  c = chen_config();
  c.word_width = 8;
  c.tau = 512;
  EXPECT_THROW(validate(c), ConfigError);
  c.tau = 255;
  EXPECT_NO_THROW(validate(c));

  c = chen_config();
  c.word_width = 12;
  EXPECT_THROW(validate(c), ConfigError);

  c = chen_config();
  c.jobs = 0;
  EXPECT_THROW(validate(c), ConfigError);

  c.protocol = Protocol::Rotiv;
  c.attack = "rotiv-trace";
  c.jobs = 1;
  c.q = 100;
  EXPECT_THROW(validate(c), ConfigError);
  c.q = 101;
  EXPECT_NO_THROW(validate(c));
}

TEST(Parse, ProtocolAndFormat) {
  EXPECT_EQ(parse_protocol("rotiv"), Protocol::Rotiv);
  EXPECT_EQ(parse_protocol("chen"), Protocol::Chen);
  EXPECT_THROW(parse_protocol("Chen"), ConfigError);
  EXPECT_EQ(parse_format("csv"), Format::Csv);
  EXPECT_THROW(parse_format("xml"), ConfigError);
}

TEST(Report, JsonHasSummaryAndOutcomes) {
  const Report r = run_attack(chen_config());
  const nlohmann::json j = to_json(r);
  for (const char* key : {"protocol", "attack", "trials", "correct", "undetermined", "success_rate", "advantage",
                          "ci_low", "ci_high", "seed", "params", "deviations", "outcomes"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["trials"], 50);
  ASSERT_EQ(j["outcomes"].size(), 50U);
  const auto& o = j["outcomes"][0];
  EXPECT_TRUE(o.contains("fingerprint"));
  EXPECT_FALSE(o.contains("recovered"));
  EXPECT_LE(j["ci_low"].get<double>(), j["advantage"].get<double>());
  EXPECT_GE(j["ci_high"].get<double>(), j["advantage"].get<double>());
}

TEST(Report, RevealAddsSecrets) {
  ExperimentConfig c = chen_config(5);
  c.reveal = true;
  const nlohmann::json j = to_json(run_attack(c));
  const auto& o = j["outcomes"][0];
  EXPECT_TRUE(o.contains("recovered"));
  EXPECT_TRUE(o.contains("ground_truth"));
  EXPECT_FALSE(o.contains("fingerprint"));
}

TEST(Report, ByteIdenticalAcrossRunsAndJobs) {
  ExperimentConfig c = chen_config(120);
  const std::string a = render(run_attack(c));
  const std::string b = render(run_attack(c));
  c.jobs = 3;
  const std::string d = render(run_attack(c));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, d);
  c.seed = 2;
  EXPECT_NE(a, render(run_attack(c)));
}

TEST(Report, CsvHeader) {
  ExperimentConfig c = chen_config(3);
  c.format = Format::Csv;
  const std::string s = render(run_attack(c));
  EXPECT_EQ(s.rfind("trial,guess,truth,correct,iterations\n", 0), 0U);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
}

TEST(Report, RotivDeviationsAreListed) {
  ExperimentConfig c;
  c.protocol = Protocol::Rotiv;
  c.attack = "rotiv-trace";
  c.trials = 20;
  const Report r = run_attack(c);
  std::vector<std::string> ids;
  for (const auto& d : r.deviations) ids.push_back(d.id);
  EXPECT_NE(std::find(ids.begin(), ids.end(), attacks::kFlagIdentityCheck), ids.end());
  for (const auto& d : r.deviations) {
    if (d.id == attacks::kFlagIdentityCheck) EXPECT_EQ(d.trials, 20U);
    EXPECT_NE(d.description, d.id);
  }
}

TEST(Demo, HonestRunsSucceed) {
  for (Protocol p : {Protocol::Rotiv, Protocol::Chen}) {
    std::ostringstream out, err;
    DemoOptions o;
    o.protocol = p;
    EXPECT_EQ(run_demo(o, out, err), 0) << err.str();
    EXPECT_NE(out.str().find("keys synchronized"), std::string::npos);
    EXPECT_TRUE(err.str().empty());
  }
}

TEST(Demo, DeterministicForSeed) {
  DemoOptions o;
  o.protocol = Protocol::Chen;
  std::ostringstream a, b, e;
  run_demo(o, a, e);
  run_demo(o, b, e);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Demo, DroppedMessageNamesTheStep) {
  DemoOptions o;
  o.drop_message = true;
  std::ostringstream out, err;
  o.protocol = Protocol::Chen;
  EXPECT_EQ(run_demo(o, out, err), 1);
  EXPECT_NE(err.str().find("step 2"), std::string::npos);
  std::ostringstream out2, err2;
  o.protocol = Protocol::Rotiv;
  EXPECT_EQ(run_demo(o, out2, err2), 1);
  EXPECT_NE(err2.str().find("step 5"), std::string::npos);
}

TEST(Demo, LiteralReencryptionStrandsTheNewOwner) {
  DemoOptions o;
  o.literal_reencryption = true;
  std::ostringstream out, err;
  EXPECT_EQ(run_demo(o, out, err), 1);
  EXPECT_NE(out.str().find("FAILED: step 2"), std::string::npos) << out.str();
}

TEST(Demo, BadOptionsGiveConfigExit) {
  DemoOptions o;
  o.protocol = Protocol::Rotiv;
  o.q = 100;
  std::ostringstream out, err;
  EXPECT_EQ(run_demo(o, out, err), 2);
}

TEST(Selftest, PassesAndDetectsCorruptTable) {
  std::ostringstream ok;
  EXPECT_EQ(run_selftest({}, ok), 0) << ok.str();
  SelftestOptions bad;
  bad.corrupt_crc_table = true;
  std::ostringstream out;
  EXPECT_EQ(run_selftest(bad, out), 1);
  EXPECT_NE(out.str().find("FAIL crc16 oracle"), std::string::npos);
  EXPECT_EQ(out.str().find("FAIL crc32"), std::string::npos);
}

}  // namespace
}  // namespace otplab::harness
