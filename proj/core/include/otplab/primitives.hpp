#pragma once

// Symmetric primitives available to EPC Gen2 class tags (CRC and a small
// PRNG), a keyed hash for the ROTIV side, and fixed-width word handling.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

#include "otplab/bytes.hpp"
#include "otplab/rng.hpp"

namespace otplab::prim {

// ---------------------------------------------------------------------------
// CRC

// Lookup table for the MSB-first CRC-16 with polynomial 0x1021.
using Crc16Table = std::array<std::uint16_t, 256>;

const Crc16Table& crc16_table();

// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xorout.
// crc16("123456789") == 0x29B1.
std::uint16_t crc16(ByteView data);

// Same algorithm driven by an explicit table (used by the self-test to
// prove that a damaged table is caught).
std::uint16_t crc16_with(const Crc16Table& table, ByteView data);

// CRC-32/ISO-HDLC (reflected 0xEDB88320). Only used for 32-bit words.
std::uint32_t crc32(ByteView data);

// ---------------------------------------------------------------------------
// Words

// Unsigned value held in a configurable number of bits. The width lives in
// WordSpec; Word only carries the value.
struct Word {
  std::uint32_t value = 0;

  friend constexpr Word operator^(Word a, Word b) { return Word{a.value ^ b.value}; }
  friend constexpr bool operator==(Word, Word) = default;
};

// Word width w in {8, 16, 32} together with everything that depends on it:
// canonical little-endian encoding, the CRC reduced or extended to w bits,
// and a maximal-length Fibonacci LFSR.
//
//   w = 8  : low 8 bits of crc16, LFSR taps (8, 6, 5, 4)
//   w = 16 : crc16,                LFSR taps (16, 15, 13, 4)
//   w = 32 : crc32,                LFSR taps (32, 22, 2, 1)
//
// The zero state is a fixed point of every LFSR; prng_step maps it to a
// fixed nonzero constant instead.
class WordSpec {
 public:
  // Throws ConfigError for unsupported widths.
  explicit WordSpec(unsigned bits = 16);

  unsigned bits() const { return bits_; }
  std::uint32_t mask() const { return mask_; }
  // 2^w as a 64-bit count.
  std::uint64_t cardinality() const { return std::uint64_t{1} << bits_; }
  std::size_t byte_width() const { return bits_ / 8; }

  // Throws DomainError if v does not fit in w bits.
  Word make(std::uint64_t v) const;
  Word truncate(std::uint64_t v) const { return Word{static_cast<std::uint32_t>(v & mask_)}; }

  void encode(ByteWriter& w, Word v) const { w.le(v.value, byte_width()); }
  Bytes encode(Word v) const;

  // CRC of the canonical encoding of v, reduced to w bits.
  Word crc(Word v) const;
  Word crc_bytes(ByteView data) const;

  Word prng_step(Word s) const;
  Word prng_iter(Word s, std::uint64_t count) const;

  // The constant prng_step(0) returns.
  Word zero_state_image() const;

  Word random(Rng& rng) const { return Word{static_cast<std::uint32_t>(rng.next() & mask_)}; }

  friend bool operator==(const WordSpec& a, const WordSpec& b) { return a.bits_ == b.bits_; }

 private:
  unsigned bits_;
  std::uint32_t mask_;
};

// ---------------------------------------------------------------------------
// Keyed hash

inline constexpr std::size_t kDigestSize = 16;
using Digest = std::array<std::uint8_t, kDigestSize>;

// PRF-style keyed hash: SHA-256 over a domain tag, the length-prefixed key
// and each length-prefixed part, truncated to kDigestSize bytes. Framing
// makes ("ab","c") and ("a","bc") hash differently.
Digest keyed_hash(ByteView key, std::span<const ByteView> parts);
Digest keyed_hash(ByteView key, std::initializer_list<ByteView> parts);

// First 4 bytes of SHA-256(data) as 8 hex characters; used in reports in
// place of raw secrets.
std::string fingerprint(ByteView data);

}  // namespace otplab::prim
