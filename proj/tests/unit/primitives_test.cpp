#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "otplab/errors.hpp"
#include "otplab/primitives.hpp"
#include "otplab/rng.hpp"

namespace otplab::prim {
namespace {

std::vector<std::uint8_t> random_message(Rng& rng) {
  std::vector<std::uint8_t> m(rng.uniform(80));
  rng.fill(m);
  return m;
}

TEST(Crc, CheckValues) {
  EXPECT_EQ(crc16(as_bytes("123456789")), 0x29B1);
  EXPECT_EQ(crc32(as_bytes("123456789")), 0xCBF43926U);
  EXPECT_EQ(crc16(Bytes{}), 0xFFFF);
  EXPECT_EQ(crc32(Bytes{}), 0U);
}

TEST(Crc, MatchesBitSerialOracle) {
  Rng rng(11);
  for (int i = 0; i < 3000; ++i) {
    const auto m = random_message(rng);
    ASSERT_EQ(crc16(m), testing::crc16_serial(m));
    ASSERT_EQ(crc32(m), testing::crc32_serial(m));
  }
}

TEST(Crc, CustomTableHook) {
  Crc16Table table = crc16_table();
  EXPECT_EQ(crc16_with(table, as_bytes("123456789")), 0x29B1);
  table[0x31] ^= 1;
  bool differs = false;
  Rng rng(2);
  for (int i = 0; i < 50 && !differs; ++i) {
    const auto m = random_message(rng);
    differs = crc16_with(table, m) != crc16(m);
  }
  EXPECT_TRUE(differs);
}

TEST(WordSpec, RejectsUnsupportedWidths) {
  for (unsigned w : {0U, 1U, 12U, 24U, 64U}) EXPECT_THROW(WordSpec{w}, ConfigError);
  const WordSpec s8(8);
  EXPECT_THROW(s8.make(256), DomainError);
  EXPECT_EQ(s8.make(255).value, 255U);
  EXPECT_EQ(s8.truncate(0x1FF).value, 0xFFU);
}

TEST(WordSpec, CrcPerWidthKnownValues) {
  EXPECT_EQ(WordSpec(8).crc(Word{0x78}).value, 0x6FU);
  EXPECT_EQ(WordSpec(16).crc(Word{0x5678}).value, 0xA6CCU);
  EXPECT_EQ(WordSpec(32).crc(Word{0x12345678}).value, 0xAF6D87D2U);
}

TEST(WordSpec, CrcIsLittleEndianEncoding) {
  const WordSpec s(16);
  const Word w{0xBEEF};
  EXPECT_EQ(s.encode(w), (Bytes{0xEF, 0xBE}));
  EXPECT_EQ(s.crc(w).value, crc16(Bytes{0xEF, 0xBE}));
}

TEST(Lfsr, MatchesTapOracle) {
  struct Case {
    unsigned w;
    std::initializer_list<unsigned> taps;
    std::uint32_t zero;
  };
  const Case cases[] = {{8, {8, 6, 5, 4}, 0xE1}, {16, {16, 15, 13, 4}, 0xACE1}, {32, {32, 22, 2, 1}, 0xACE1ACE1}};
  Rng rng(4);
  for (const auto& c : cases) {
    const WordSpec spec(c.w);
    EXPECT_EQ(spec.zero_state_image().value, c.zero);
    EXPECT_EQ(spec.prng_step(Word{0}).value, c.zero);
    for (int i = 0; i < 2000; ++i) {
      const Word s = spec.random(rng);
      ASSERT_EQ(spec.prng_step(s).value, testing::lfsr_taps(s.value, c.w, c.taps, c.zero));
    }
  }
}

TEST(Lfsr, KnownSequence) {
  const WordSpec s32(32);
  EXPECT_EQ(s32.prng_iter(Word{1}, 1).value, 0x80000000U);
  EXPECT_EQ(s32.prng_iter(Word{1}, 2).value, 0xC0000000U);
  EXPECT_EQ(s32.prng_iter(Word{1}, 3).value, 0x60000000U);
  EXPECT_EQ(WordSpec(16).prng_iter(Word{1}, 3).value, 0x2000U);
}

TEST(Lfsr, MaximalPeriodByCycleWalk) {
  for (unsigned w : {8U, 16U}) {
    const WordSpec spec(w);
    std::set<std::uint32_t> seen;
    Word s{1};
    do {
      ASSERT_TRUE(seen.insert(s.value).second) << "state repeated before returning to 1";
      s = spec.prng_step(s);
    } while (s != Word{1});
    EXPECT_EQ(seen.size(), spec.cardinality() - 1) << "w = " << w;
  }
}

TEST(Lfsr, IterEqualsUnrolledSteps) {
  const WordSpec spec(16);
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const Word s0 = spec.random(rng);
    Word s = s0;
    for (std::uint64_t n = 0; n < 70; ++n) {
      ASSERT_EQ(spec.prng_iter(s0, n), s);
      s = spec.prng_step(s);
    }
  }
}

TEST(Lfsr, IterAdditivity) {
  Rng rng(7);
  for (unsigned w : {8U, 16U, 32U}) {
    const WordSpec spec(w);
    for (int i = 0; i < 3000; ++i) {
      const Word s = spec.random(rng);
      const auto a = rng.uniform(300);
      const auto b = rng.uniform(300);
      ASSERT_EQ(spec.prng_iter(spec.prng_iter(s, a), b), spec.prng_iter(s, a + b));
    }
  }
}

TEST(KeyedHash, KnownValues) {
  EXPECT_EQ(to_hex(keyed_hash({}, std::initializer_list<ByteView>{})), "c81306b4cc986c59c14e89825c5a5e22");
  EXPECT_EQ(to_hex(keyed_hash(as_bytes("key"), {as_bytes("ab"), as_bytes("c")})),
            "07b04e1ab7c39082216ea98d6c923e52");
  EXPECT_EQ(to_hex(keyed_hash(as_bytes("key"), {as_bytes("a"), as_bytes("bc")})),
            "aa5ee112db73881aa22a2fb14023330a");
}

TEST(KeyedHash, KeyMatters) {
  EXPECT_NE(keyed_hash(as_bytes("k1"), {as_bytes("m")}), keyed_hash(as_bytes("k2"), {as_bytes("m")}));
}

TEST(Fingerprint, ShortHexDigest) {
  EXPECT_EQ(fingerprint(as_bytes("otplab")), "f169ec36");
  EXPECT_EQ(fingerprint(as_bytes("otplab")).size(), 8U);
}

}  // namespace
}  // namespace otplab::prim
