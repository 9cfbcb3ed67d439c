#include <gtest/gtest.h>

#include "otplab/games.hpp"

namespace otplab::games {
namespace {

TEST(ChenTraceGame, RecoveredKeyMatchesGroundTruth) {
  const ChenGameParams p;
  const auto r = oracle::run_game(chen_trace_game(p), 200, 3);
  EXPECT_GE(r.advantage, 0.95);
  for (const auto& rec : r.records) {
    if (rec.raw_guess == Guess::Undetermined || !rec.correct) continue;
    ASSERT_TRUE(rec.outcome.recovered.k_star.has_value());
    EXPECT_EQ(rec.outcome.recovered.k_star, rec.ground_truth.k_star) << "trial " << rec.trial;
    // A target under label 1 is found only after label 0's full search.
    const std::uint64_t offset = rec.raw_guess == Guess::One ? p.tau : 0;
    EXPECT_GE(rec.iterations, offset + 1);
    EXPECT_LE(rec.iterations, offset + 16);
    EXPECT_FALSE(rec.fingerprint.empty());
  }
}

TEST(ChenTraceGame, TestFlagIsRecorded) {
  const auto r = oracle::run_game(chen_trace_game({}), 5, 1);
  for (const auto& rec : r.records) {
    EXPECT_NE(std::find(rec.flags.begin(), rec.flags.end(), std::string(kFlagConsecutiveTest)), rec.flags.end());
  }
}

TEST(ChenTraceGame, GapBeyondTauFallsToChance) {
  ChenGameParams p;
  p.tau = 4;
  p.gap_min = 8;
  p.gap_max = 12;
  const auto r = oracle::run_game(chen_trace_game(p), 400, 5);
  EXPECT_LT(r.advantage, 0.2);
  EXPECT_GT(r.undetermined, 350U);
}

TEST(ChenTraceGame, RandomDistinguisherHasNoAdvantage) {
  const auto r = oracle::run_game(chen_trace_game({}, chen_random_distinguisher()), 1000, 9);
  EXPECT_LT(r.advantage, 0.1);
}

TEST(ChenTraceGame, DeterministicPerSeedAndIndependentOfJobs) {
  const auto a = oracle::run_game(chen_trace_game({}), 100, 11, 1);
  const auto b = oracle::run_game(chen_trace_game({}), 100, 11, 4);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].guess, b.records[i].guess);
    EXPECT_EQ(a.records[i].truth, b.records[i].truth);
    EXPECT_EQ(a.records[i].fingerprint, b.records[i].fingerprint);
  }
  EXPECT_EQ(a.correct, b.correct);
}

TEST(ChenDecoyGame, FalseAcceptsAreRareAtSixteenBits) {
  const auto r = oracle::run_game(chen_decoy_false_accept({}), 1000, 2);
  EXPECT_LE(r.correct, 6U);
}

TEST(ChenDecoyGame, FalseAcceptsAreCommonAtEightBits) {
  ChenGameParams p;
  p.spec = prim::WordSpec(8);
  p.tau = 255;
  const auto r = oracle::run_game(chen_decoy_false_accept(p), 400, 2);
  EXPECT_GT(r.correct, 100U);
}

TEST(ChenImpersonationGame, RecoveredKeysAreAccepted) {
  const auto r = oracle::run_game(chen_impersonation_game({}), 200, 4);
  for (const auto& rec : r.records) {
    if (rec.outcome.recovered.k_star != rec.ground_truth.k_star) continue;
    EXPECT_TRUE(rec.correct) << "trial " << rec.trial;
    EXPECT_EQ(rec.outcome.recovered.k_next, rec.ground_truth.k_next);
    EXPECT_EQ(rec.outcome.recovered.t_next, rec.ground_truth.t_next);
  }
  EXPECT_GE(r.correct, 195U);
}

TEST(ChenImpersonationGame, StaleKeysAreRejected) {
  ChenImpersonationParams p;
  p.stale_keys = true;
  const auto r = oracle::run_game(chen_impersonation_game(p), 200, 4);
  EXPECT_LE(r.correct, 1U);
}

TEST(RotivTraceGame, IdentityCheckYieldsCoinFlips) {
  const auto r = oracle::run_game(rotiv_trace_game({}), 300, 6);
  EXPECT_EQ(r.undetermined, 300U);
  EXPECT_LT(r.advantage, 0.2);
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.raw_guess, Guess::Undetermined);
    EXPECT_NE(std::find(rec.flags.begin(), rec.flags.end(), std::string(attacks::kFlagIdentityCheck)),
              rec.flags.end());
    EXPECT_NE(std::find(rec.flags.begin(), rec.flags.end(), std::string(kFlagCoinFlip)), rec.flags.end());
  }
}

TEST(RotivTraceGame, CorruptAndSmallGroupVariantsRun) {
  RotivGameParams p;
  p.corrupt = true;
  EXPECT_EQ(oracle::run_game(rotiv_trace_game(p), 50, 1).undetermined, 50U);
  p.corrupt = false;
  p.q = 101;
  EXPECT_EQ(oracle::run_game(rotiv_trace_game(p), 50, 1).trials, 50U);
}

TEST(RotivTraceGame, RandomDistinguisherIsDetermined) {
  const auto r = oracle::run_game(rotiv_trace_game({}, rotiv_random_distinguisher()), 200, 8);
  EXPECT_EQ(r.undetermined, 0U);
  EXPECT_LT(r.advantage, 0.2);
}

}  // namespace
}  // namespace otplab::games
