#pragma once

// Ideal public-key encryption and signatures. Ciphertexts and signatures are
// opaque handles into a trusted ledger; only the ledger knows what they
// contain. A ledger is a single-writer registry: concurrent sessions need
// their own instance or external serialization.

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "otplab/bytes.hpp"
#include "otplab/rng.hpp"

namespace otplab::ideal {

struct PartyId {
  std::string name;

  friend auto operator<=>(const PartyId&, const PartyId&) = default;
};

struct IdealCiphertext {
  std::uint64_t handle = 0;
  friend bool operator==(const IdealCiphertext&, const IdealCiphertext&) = default;
};

struct IdealSignature {
  std::uint64_t handle = 0;
  friend bool operator==(const IdealSignature&, const IdealSignature&) = default;
};

class IdealLedger {
 public:
  explicit IdealLedger(std::uint64_t seed) : rng_(seed) {}

  // Gives `party` a key pair. Idempotent.
  void register_party(const PartyId& party) { parties_.insert(party); }
  bool has_party(const PartyId& party) const { return parties_.contains(party); }

  // Throws AuthorizationError if the recipient holds no key.
  IdealCiphertext encrypt(const PartyId& recipient, ByteView message);
  // Throws AuthorizationError unless `recipient` is the registered party the
  // ciphertext was made for.
  Bytes decrypt(const PartyId& recipient, const IdealCiphertext& ct) const;

  // Throws AuthorizationError if the signer holds no key.
  IdealSignature sign(const PartyId& signer, ByteView message);
  bool verify(const PartyId& signer, ByteView message, const IdealSignature& sig) const;

 private:
  struct Sealed {
    PartyId recipient;
    Bytes message;
  };
  struct Signed {
    PartyId signer;
    Bytes message;
  };

  std::uint64_t fresh_handle();

  Rng rng_;
  std::set<PartyId> parties_;
  std::map<std::uint64_t, Sealed> ciphertexts_;
  std::map<std::uint64_t, Signed> signatures_;
};

}  // namespace otplab::ideal
