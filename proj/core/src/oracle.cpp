#include "otplab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

namespace otplab::oracle {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

// ---------------------------------------------------------------------------
// ChenWorld

ChenWorld::ChenWorld(prim::WordSpec spec, std::uint64_t seed)
    : spec_(spec),
      rng_(seed),
      ledger_(Rng::derive_seed(seed, 1)),
      issuer_(spec, ideal::PartyId{"issuer"}, Rng::derive_seed(seed, 2)) {
  ledger_.register_party(issuer_.id());
}

void ChenWorld::advance_to(std::uint64_t i) {
  if (i < clock_) {
    throw LookupError("instance " + std::to_string(i) + " is in the past (clock " +
                      std::to_string(clock_) + ")");
  }
  clock_ = i;
}

ChenWorld::TagEntry& ChenWorld::tag_entry(TagId tag) {
  if (tag.value >= tags_.size()) throw LookupError("unknown tag " + std::to_string(tag.value));
  return tags_[tag.value];
}

const ChenWorld::TagEntry& ChenWorld::tag_entry(TagId tag) const {
  if (tag.value >= tags_.size()) throw LookupError("unknown tag " + std::to_string(tag.value));
  return tags_[tag.value];
}

ChenWorld::OwnerEntry& ChenWorld::owner_entry(OwnerId owner) {
  if (owner.value >= owners_.size()) throw LookupError("unknown owner " + std::to_string(owner.value));
  return owners_[owner.value];
}

const ChenWorld::OwnerEntry& ChenWorld::owner_entry(OwnerId owner) const {
  if (owner.value >= owners_.size()) throw LookupError("unknown owner " + std::to_string(owner.value));
  return owners_[owner.value];
}

OwnerId ChenWorld::add_owner(const std::string& name) {
  OwnerEntry e;
  e.id = ideal::PartyId{name};
  ledger_.register_party(e.id);
  owners_.push_back(std::move(e));
  return OwnerId{static_cast<std::uint32_t>(owners_.size() - 1)};
}

TagId ChenWorld::issue_tag(OwnerId owner) {
  OwnerEntry& o = owner_entry(owner);
  // EPC identities are unique within a world.
  prim::Word id_t;
  bool fresh = false;
  while (!fresh) {
    id_t = spec_.random(rng_);
    fresh = std::none_of(tags_.begin(), tags_.end(), [&](const TagEntry& t) { return t.state.id_t == id_t; });
  }
  auto [tag_state, owner_state] = issuer_.issue_tag(o.id, id_t);
  const TagId id{static_cast<std::uint32_t>(tags_.size())};
  tags_.push_back(TagEntry{tag_state, owner});
  o.known[id] = owner_state;
  return id;
}

OwnerId ChenWorld::owner_of(TagId tag) const { return tag_entry(tag).owner; }

const chen::ChenOwnerState& ChenWorld::owner_view(OwnerId owner, TagId tag) const {
  const OwnerEntry& o = owner_entry(owner);
  auto it = o.known.find(tag);
  if (it == o.known.end()) {
    throw LookupError("owner " + o.id.name + " has no record of tag " + std::to_string(tag.value));
  }
  return it->second;
}

const chen::ChenTagState& ChenWorld::tag_state(TagId tag) const { return tag_entry(tag).state; }

chen::ChenTransferTranscript ChenWorld::transfer(TagId tag, OwnerId to) {
  advance_to(clock_ + 1);
  TagEntry& t = tag_entry(tag);
  OwnerEntry& from = owner_entry(t.owner);
  OwnerEntry& dest = owner_entry(to);
  auto it = from.known.find(tag);
  if (it == from.known.end()) throw LookupError("current owner holds no record for the tag");
  auto [tr, new_state] = chen::run_chen_transfer(spec_, ledger_, issuer_, it->second, dest.id, t.state, rng_);
  dest.known[tag] = new_state;
  store_[{tag, t.owner, clock_}] = ChenObservedSession{tr.auth, tr.bundle.masked_cert};
  t.owner = to;
  return tr;
}

void ChenWorld::schedule_transfer(TagId tag, OwnerId to, std::uint64_t instance) {
  tag_entry(tag);
  owner_entry(to);
  if (instance <= clock_) throw ContractError("transfers can only be scheduled in the future");
  scheduled_[{tag, instance}] = to;
}

ChenObservedSession ChenWorld::execute(TagId tag, OwnerId owner, std::uint64_t i) {
  if (auto it = store_.find({tag, owner, i}); it != store_.end()) return it->second;
  advance_to(i);
  TagEntry& t = tag_entry(tag);
  OwnerEntry& o = owner_entry(owner);
  auto known = o.known.find(tag);
  if (known == o.known.end()) {
    throw LookupError("owner " + o.id.name + " has no record of tag " + std::to_string(tag.value));
  }
  ChenObservedSession observed;
  if (auto sched = scheduled_.find({tag, i}); sched != scheduled_.end() && t.owner == owner) {
    OwnerEntry& dest = owner_entry(sched->second);
    auto [tr, new_state] =
        chen::run_chen_transfer(spec_, ledger_, issuer_, known->second, dest.id, t.state, rng_);
    dest.known[tag] = new_state;
    t.owner = sched->second;
    scheduled_.erase(sched);
    observed = ChenObservedSession{tr.auth, tr.bundle.masked_cert};
  } else {
    observed.auth = chen::run_chen_session(spec_, known->second, t.state, rng_);
  }
  store_[{tag, owner, i}] = observed;
  return observed;
}

ChenMessage ChenWorld::send(Party from, Party to, std::uint64_t i, const ChenMessage& m) {
  (void)from;
  advance_to(i);
  return std::visit(
      Overloaded{
          [&](TagId tag) -> ChenMessage {
            const auto* ch = std::get_if<chen::Challenge>(&m);
            if (ch == nullptr) throw PositionError(1, "a tag only accepts (N_O, A)");
            std::optional<chen::TagResponse> r = chen::tag_respond(spec_, tag_entry(tag).state, *ch, rng_);
            if (!r) return Silence{};
            return *r;
          },
          [&](OwnerId owner) -> ChenMessage {
            OwnerEntry& o = owner_entry(owner);
            if (const auto* start = std::get_if<StartSession>(&m)) {
              auto known = o.known.find(start->tag);
              if (known == o.known.end()) throw LookupError("owner has no record of the tag");
              const chen::Challenge ch = chen::owner_challenge(spec_, known->second, rng_);
              o.pending[start->tag] = ch;
              return ch;
            }
            if (const auto* resp = std::get_if<chen::TagResponse>(&m)) {
              // Matched against the outstanding challenge (lowest tag id first).
              if (o.pending.empty()) throw PositionError(3, "owner has no outstanding challenge");
              auto pending = o.pending.begin();
              const TagId tag = pending->first;
              const chen::Challenge ch = pending->second;
              o.pending.erase(pending);
              chen::ChenOwnerState& state = o.known.at(tag);
              try {
                chen::owner_verify_response(spec_, state, ch, *resp);
                return Verdict{true};
              } catch (const AuthenticationError&) {
                return Verdict{false};
              }
            }
            throw PositionError(1, "owner cannot process this message");
          },
          [&](AdversaryId) -> ChenMessage { throw PositionError(1, "cannot send to the adversary"); },
      },
      to);
}

TestChallenge<ChenChallengeView> ChenWorld::test(std::uint64_t i, TagId target, TagId decoy,
                                                 unsigned instances) {
  if (target == decoy) throw ContractError("test needs two distinct tags");
  if (instances == 0) throw ContractError("test needs at least one instance");
  const int b = rng_.coin() ? 1 : 0;
  ChenChallengeView view;
  view.instance = i;
  for (unsigned k = 0; k < instances; ++k) {
    // Owners are looked up per instance: a scheduled transfer may move a tag.
    const ChenObservedSession st = execute(target, owner_of(target), i + k);
    const ChenObservedSession sd = execute(decoy, owner_of(decoy), i + k);
    view.sessions[static_cast<std::size_t>(b)].push_back(st);
    view.sessions[static_cast<std::size_t>(1 - b)].push_back(sd);
  }
  return TestChallenge<ChenChallengeView>(std::move(view), b);
}

// ---------------------------------------------------------------------------
// RotivWorld

RotivWorld::RotivWorld(std::uint64_t q, std::uint64_t seed, rotiv::TransferOptions options)
    : params_(q), rng_(seed), options_(options) {
  issuer_ = rotiv::setup_issuer(params_, rng_);
}

void RotivWorld::advance_to(std::uint64_t i) {
  if (i < clock_) {
    throw LookupError("instance " + std::to_string(i) + " is in the past (clock " +
                      std::to_string(clock_) + ")");
  }
  clock_ = i;
}

RotivWorld::TagEntry& RotivWorld::tag_entry(TagId tag) {
  if (tag.value >= tags_.size()) throw LookupError("unknown tag " + std::to_string(tag.value));
  return tags_[tag.value];
}

const RotivWorld::TagEntry& RotivWorld::tag_entry(TagId tag) const {
  if (tag.value >= tags_.size()) throw LookupError("unknown tag " + std::to_string(tag.value));
  return tags_[tag.value];
}

rotiv::Owner& RotivWorld::owner_entry(OwnerId owner) {
  if (owner.value >= owners_.size()) throw LookupError("unknown owner " + std::to_string(owner.value));
  return owners_[owner.value];
}

const rotiv::Owner& RotivWorld::owner(OwnerId owner) const {
  if (owner.value >= owners_.size()) throw LookupError("unknown owner " + std::to_string(owner.value));
  return owners_[owner.value];
}

OwnerId RotivWorld::add_owner(const std::string& name) {
  owners_.emplace_back(ideal::PartyId{name}, rotiv::make_owner_keys(params_, rng_));
  return OwnerId{static_cast<std::uint32_t>(owners_.size() - 1)};
}

TagId RotivWorld::issue_tag(OwnerId owner) {
  rotiv::Owner& o = owner_entry(owner);
  const group::Scalar t = params_.random_scalar(rng_);
  rotiv::IssuedTag issued = rotiv::init_tag(params_, issuer_, t, rng_);
  o.store(issued.ref);
  tags_.push_back(TagEntry{issued.tag, owner, t, issued.ref.psi, std::nullopt});
  return TagId{static_cast<std::uint32_t>(tags_.size() - 1)};
}

OwnerId RotivWorld::owner_of(TagId tag) const { return tag_entry(tag).owner; }

const rotiv::RotivTagState& RotivWorld::tag_state(TagId tag) const { return tag_entry(tag).state; }

const group::GroupElement& RotivWorld::issued_psi(TagId tag) const { return tag_entry(tag).psi; }

rotiv::TransferTranscript RotivWorld::transfer(TagId tag, OwnerId to) {
  advance_to(clock_ + 1);
  TagEntry& t = tag_entry(tag);
  rotiv::Owner& from = owner_entry(t.owner);
  rotiv::Owner& dest = owner_entry(to);
  rotiv::TransferTranscript tr =
      rotiv::run_ownership_transfer(params_, issuer_.pk, from, dest, t.state, rng_, options_);
  rotiv::TransferTranscript stored = tr;
  stored.handoff.reset();
  store_[{tag, t.owner, clock_}] = stored;
  t.owner = to;
  return tr;
}

RotivTranscript RotivWorld::execute(TagId tag, OwnerId owner, std::uint64_t i) {
  if (auto it = store_.find({tag, owner, i}); it != store_.end()) return it->second;
  advance_to(i);
  TagEntry& t = tag_entry(tag);
  rotiv::SessionTranscript tr =
      rotiv::run_mutual_authentication(params_, owner_entry(owner), t.state, rng_);
  store_[{tag, owner, i}] = tr;
  return tr;
}

RotivMessage RotivWorld::send(Party from, Party to, std::uint64_t i, const RotivMessage& m) {
  (void)from;
  advance_to(i);
  const TagId* tag = std::get_if<TagId>(&to);
  if (tag == nullptr) throw PositionError(1, "only tags accept injected messages in this world");
  TagEntry& t = tag_entry(*tag);
  if (const auto* n_owner = std::get_if<rotiv::Nonce>(&m)) {
    rotiv::TagResponse r = rotiv::tag_respond(t.state, *n_owner, rng_);
    t.pending = std::make_pair(*n_owner, r.n_tag);
    return r;
  }
  if (const auto* update = std::get_if<rotiv::UpdateMessage>(&m)) {
    if (!t.pending) throw PositionError(3, "tag has no open session");
    const auto [n_owner, n_tag] = *t.pending;
    t.pending.reset();
    if (!rotiv::tag_finalize(t.state, *update, n_owner, n_tag)) return Silence{};
    return Verdict{true};
  }
  throw PositionError(1, "a tag only accepts N_O or (m_{i+1}, s_{i+1})");
}

RotivCorruption RotivWorld::corrupt(TagId tag) const {
  const TagEntry& t = tag_entry(tag);
  return RotivCorruption{t.state, t.t, t.psi};
}

TestChallenge<RotivChallengeView> RotivWorld::test(std::uint64_t i, TagId target, TagId decoy) {
  if (target == decoy) throw ContractError("test needs two distinct tags");
  const int b = rng_.coin() ? 1 : 0;
  RotivChallengeView view;
  view.instance = i;
  auto session = [&](TagId tag) {
    for (const auto& [key, stored] : store_) {
      if (std::get<0>(key) == tag && std::get<2>(key) == i &&
          std::holds_alternative<rotiv::TransferTranscript>(stored)) {
        throw ContractError("test instance is an ownership transfer, not a session");
      }
    }
    RotivTranscript tr = execute(tag, owner_of(tag), i);
    if (auto* s = std::get_if<rotiv::SessionTranscript>(&tr)) return *s;
    throw ContractError("test instance is an ownership transfer, not a session");
  };
  view.sessions[static_cast<std::size_t>(b)] = session(target);
  view.sessions[static_cast<std::size_t>(1 - b)] = session(decoy);
  return TestChallenge<RotivChallengeView>(std::move(view), b);
}

// ---------------------------------------------------------------------------
// Games

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

Interval advantage_interval(const Interval& p) {
  const double lo = 2.0 * p.low - 1.0;
  const double hi = 2.0 * p.high - 1.0;
  if (lo >= 0.0) return {lo, hi};
  if (hi <= 0.0) return {-hi, -lo};
  return {0.0, std::max(-lo, hi)};
}

GameResult summarize(std::vector<TrialRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return a.trial < b.trial; });
  GameResult r;
  r.trials = records.size();
  std::set<std::string> flags;
  for (const TrialRecord& rec : records) {
    if (rec.correct) ++r.correct;
    if (rec.raw_guess == Guess::Undetermined) ++r.undetermined;
    flags.insert(rec.flags.begin(), rec.flags.end());
  }
  if (r.trials > 0) {
    r.success_rate = static_cast<double>(r.correct) / static_cast<double>(r.trials);
    r.advantage = 2.0 * std::fabs(r.success_rate - 0.5);
  }
  r.success_ci = wilson_interval(r.correct, r.trials);
  r.advantage_ci = advantage_interval(r.success_ci);
  r.flags.assign(flags.begin(), flags.end());
  r.records = std::move(records);
  return r;
}

GameResult run_game(const TrialFn& trial, std::uint64_t trials, std::uint64_t seed, unsigned jobs) {
  std::vector<TrialRecord> records(trials);
  auto run_one = [&](std::uint64_t k) {
    Rng rng(Rng::derive_seed(seed, k));
    records[k] = trial(k, rng);
    records[k].trial = k;
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1 || trials < 2) {
    for (std::uint64_t k = 0; k < trials; ++k) run_one(k);
    return summarize(std::move(records));
  }
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::uint64_t k = w; k < trials; k += jobs) run_one(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return summarize(std::move(records));
}

}  // namespace otplab::oracle
