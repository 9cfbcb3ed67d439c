#include "otplab/primitives.hpp"

#include <algorithm>

#include "otplab/errors.hpp"
#include "sha256.hpp"

namespace otplab::prim {

namespace {

constexpr Crc16Table make_crc16_table() {
  Crc16Table table{};
  for (std::uint32_t byte = 0; byte < 256; ++byte) {
    std::uint16_t crc = static_cast<std::uint16_t>(byte << 8);
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                           : static_cast<std::uint16_t>(crc << 1);
    }
    table[byte] = crc;
  }
  return table;
}

constexpr Crc16Table kCrc16Table = make_crc16_table();

constexpr std::array<std::uint32_t, 256> make_crc32_table() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t byte = 0; byte < 256; ++byte) {
    std::uint32_t crc = byte;
    for (int bit = 0; bit < 8; ++bit) crc = (crc & 1) ? (crc >> 1) ^ 0xEDB88320u : crc >> 1;
    table[byte] = crc;
  }
  return table;
}

constexpr std::array<std::uint32_t, 256> kCrc32Table = make_crc32_table();

// Feedback bit positions (shift amounts) of the Fibonacci LFSRs: tap t of an
// n-bit register is bit n - t.
struct Lfsr {
  unsigned shifts[4];
  std::uint32_t zero_image;
};

constexpr Lfsr kLfsr8{{0, 2, 3, 4}, 0xE1};
constexpr Lfsr kLfsr16{{0, 1, 3, 12}, 0xACE1};
constexpr Lfsr kLfsr32{{0, 10, 30, 31}, 0xACE1ACE1};

const Lfsr& lfsr_for(unsigned bits) {
  switch (bits) {
    case 8:
      return kLfsr8;
    case 16:
      return kLfsr16;
    default:
      return kLfsr32;
  }
}

}  // namespace

const Crc16Table& crc16_table() { return kCrc16Table; }

std::uint16_t crc16_with(const Crc16Table& table, ByteView data) {
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t b : data) {
    crc = static_cast<std::uint16_t>((crc << 8) ^ table[((crc >> 8) ^ b) & 0xFF]);
  }
  return crc;
}

std::uint16_t crc16(ByteView data) { return crc16_with(kCrc16Table, data); }

std::uint32_t crc32(ByteView data) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::uint8_t b : data) crc = (crc >> 8) ^ kCrc32Table[(crc ^ b) & 0xFF];
  return crc ^ 0xFFFFFFFFu;
}

WordSpec::WordSpec(unsigned bits) : bits_(bits) {
  if (bits != 8 && bits != 16 && bits != 32) {
    throw ConfigError("word width must be 8, 16 or 32 bits, got " + std::to_string(bits));
  }
  mask_ = bits == 32 ? 0xFFFFFFFFu : static_cast<std::uint32_t>((1u << bits) - 1);
}

Word WordSpec::make(std::uint64_t v) const {
  if (v > mask_) {
    throw DomainError("value " + std::to_string(v) + " exceeds " + std::to_string(bits_) + "-bit word");
  }
  return Word{static_cast<std::uint32_t>(v)};
}

Bytes WordSpec::encode(Word v) const {
  ByteWriter w;
  encode(w, v);
  return std::move(w).take();
}

Word WordSpec::crc_bytes(ByteView data) const {
  if (bits_ == 32) return Word{crc32(data)};
  return truncate(crc16(data));
}

Word WordSpec::crc(Word v) const {
  std::array<std::uint8_t, 4> buf{};
  for (std::size_t i = 0; i < byte_width(); ++i) buf[i] = static_cast<std::uint8_t>(v.value >> (8 * i));
  return crc_bytes(ByteView(buf.data(), byte_width()));
}

Word WordSpec::zero_state_image() const { return truncate(lfsr_for(bits_).zero_image); }

Word WordSpec::prng_step(Word s) const {
  const Lfsr& l = lfsr_for(bits_);
  const std::uint32_t v = s.value & mask_;
  if (v == 0) return zero_state_image();
  const std::uint32_t fb =
      ((v >> l.shifts[0]) ^ (v >> l.shifts[1]) ^ (v >> l.shifts[2]) ^ (v >> l.shifts[3])) & 1u;
  return Word{((v >> 1) | (fb << (bits_ - 1))) & mask_};
}

Word WordSpec::prng_iter(Word s, std::uint64_t count) const {
  for (std::uint64_t i = 0; i < count; ++i) s = prng_step(s);
  return s;
}

Digest keyed_hash(ByteView key, std::span<const ByteView> parts) {
  ByteWriter w;
  w.str("otplab/keyed-hash").framed(key).u64(parts.size());
  for (ByteView p : parts) w.framed(p);
  const auto full = detail::sha256(w.bytes());
  Digest out{};
  std::copy_n(full.begin(), out.size(), out.begin());
  return out;
}

Digest keyed_hash(ByteView key, std::initializer_list<ByteView> parts) {
  return keyed_hash(key, std::span<const ByteView>(parts.begin(), parts.size()));
}

std::string fingerprint(ByteView data) {
  const auto full = detail::sha256(data);
  return to_hex(ByteView(full.data(), 4));
}

}  // namespace otplab::prim
