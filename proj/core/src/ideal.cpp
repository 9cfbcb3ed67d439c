#include "otplab/ideal.hpp"

#include <algorithm>

#include "otplab/errors.hpp"

namespace otplab::ideal {

std::uint64_t IdealLedger::fresh_handle() {
  std::uint64_t h;
  do {
    h = rng_.next();
  } while (h == 0 || ciphertexts_.contains(h) || signatures_.contains(h));
  return h;
}

IdealCiphertext IdealLedger::encrypt(const PartyId& recipient, ByteView message) {
  if (!has_party(recipient)) throw AuthorizationError("no public key for '" + recipient.name + "'");
  const std::uint64_t h = fresh_handle();
  ciphertexts_.emplace(h, Sealed{recipient, Bytes(message.begin(), message.end())});
  return IdealCiphertext{h};
}

Bytes IdealLedger::decrypt(const PartyId& recipient, const IdealCiphertext& ct) const {
  if (!has_party(recipient)) throw AuthorizationError("no secret key for '" + recipient.name + "'");
  auto it = ciphertexts_.find(ct.handle);
  if (it == ciphertexts_.end()) throw AuthorizationError("unknown ciphertext");
  if (it->second.recipient != recipient) {
    throw AuthorizationError("'" + recipient.name + "' cannot decrypt a ciphertext for '" +
                             it->second.recipient.name + "'");
  }
  return it->second.message;
}

IdealSignature IdealLedger::sign(const PartyId& signer, ByteView message) {
  if (!has_party(signer)) throw AuthorizationError("no signing key for '" + signer.name + "'");
  const std::uint64_t h = fresh_handle();
  signatures_.emplace(h, Signed{signer, Bytes(message.begin(), message.end())});
  return IdealSignature{h};
}

bool IdealLedger::verify(const PartyId& signer, ByteView message, const IdealSignature& sig) const {
  auto it = signatures_.find(sig.handle);
  if (it == signatures_.end()) return false;
  return it->second.signer == signer && has_party(signer) &&
         std::equal(message.begin(), message.end(), it->second.message.begin(),
                    it->second.message.end());
}

}  // namespace otplab::ideal
