#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "clue/cards.hpp"
#include "clue/game.hpp"
#include "clue/view.hpp"

namespace clue {

// Where a card sits: a player's hand or the envelope.
struct Location {
  static constexpr int kEnvelope = -1;
  int holder = kEnvelope;

  static constexpr Location envelope() { return Location{kEnvelope}; }
  static constexpr Location player(PlayerId p) { return Location{p}; }
  constexpr bool is_envelope() const { return holder == kEnvelope; }
  auto operator<=>(const Location&) const = default;
};

std::string location_name(Location loc, const std::vector<std::string>& names);

struct Fact {
  Card card;
  Location location;
  auto operator<=>(const Fact&) const = default;
};

// "player holds at least one of cards".
struct Disjunction {
  PlayerId player = 0;
  CardSet cards;
  bool operator==(const Disjunction&) const = default;
};

// Bit p (p < num_players) means "may be in player p's hand"; bit num_players
// means "may be in the envelope".
using LocationMask = std::uint32_t;

inline constexpr std::uint64_t kDefaultNodeCap = 2'000'000;

// Constraint store over card locations from one player's point of view.
// Exclusions and known locations both live in the per-card location masks:
// a card whose mask has a single bit is located.
class KnowledgeBase {
 public:
  KnowledgeBase(PlayerId owner, CardSet deck, std::vector<int> hand_sizes, CardSet own_hand);

  // Owner's hand plus every observation in the view.
  static KnowledgeBase from_view(const PlayerView& view);

  PlayerId owner() const { return owner_; }
  CardSet deck() const { return deck_; }
  int num_players() const { return static_cast<int>(hand_sizes_.size()); }
  const std::vector<int>& hand_sizes() const { return hand_sizes_; }
  const std::vector<Disjunction>& disjunctions() const { return disjunctions_; }

  LocationMask possible(Card c) const { return masks_[c.id()]; }
  LocationMask bit(Location loc) const;
  LocationMask all_locations() const { return (LocationMask{1} << (num_players() + 1)) - 1; }
  bool can_be_at(Card c, Location loc) const { return (masks_[c.id()] & bit(loc)) != 0; }
  std::optional<Location> location(Card c) const;
  std::vector<Location> candidates(Card c) const;

  std::vector<Fact> known_locations() const;
  // (player, card) pairs the player is known not to hold.
  std::vector<std::pair<PlayerId, Card>> exclusions() const;

  CardSet envelope_candidates(Category cat) const;

  // Applies one observed suggestion. Throws InconsistentEvent when it
  // contradicts a known location.
  void ingest(const HistoryEntry& entry);
  void ingest(const GameEvent& event);

  void place(Card c, Location loc);
  void exclude(Card c, Location loc);
  void note_not_in_envelope(Card c) { exclude(c, Location::envelope()); }
  void add_disjunction(PlayerId p, CardSet cards);

  bool operator==(const KnowledgeBase&) const = default;

 private:
  friend struct Propagator;

  PlayerId owner_;
  CardSet deck_;
  std::vector<int> hand_sizes_;
  std::array<LocationMask, Card::kCount> masks_{};
  std::vector<Disjunction> disjunctions_;
};

struct Propagation {
  KnowledgeBase kb;
  std::vector<Fact> new_facts;  // locations pinned by this call, in card order
};

// Fixed point of unit resolution on disjunctions, hand-size saturation (both
// directions), one-per-category envelope elimination and disjunction
// subsumption. Throws Inconsistent.
Propagation propagate(KnowledgeBase kb);

struct World {
  CardSet deck;
  std::array<Location, Card::kCount> location{};
  Location at(Card c) const { return location[c.id()]; }
  bool operator==(const World&) const = default;
};

// Every total assignment consistent with the knowledge base, by exhaustive
// backtracking. The cap bounds search nodes; CapExceeded carries the number
// of worlds found so far.
std::vector<World> enumerate_worlds(const KnowledgeBase& kb, std::uint64_t cap = kDefaultNodeCap);
std::uint64_t count_worlds(const KnowledgeBase& kb, std::uint64_t cap = kDefaultNodeCap);
void for_each_world(const KnowledgeBase& kb, std::uint64_t cap,
                    const std::function<void(const World&)>& visit);

// For each card, exactly the locations it takes in at least one world.
// Computed by witness search (one satisfiability probe per unwitnessed
// card/location pair) rather than by listing worlds. Throws Inconsistent
// when no world exists and CapExceeded when the node budget runs out.
std::array<LocationMask, Card::kCount> exact_possibilities(const KnowledgeBase& kb,
                                                           std::uint64_t cap = kDefaultNodeCap);

// Locations that hold in every world.
std::vector<Fact> certain_facts(const KnowledgeBase& kb, std::uint64_t cap = kDefaultNodeCap);

struct GroundTruth {
  Solution solution;
  std::vector<CardSet> hands;

  static GroundTruth of(const GameState& state);
  static GroundTruth of(const Solution& solution, const std::vector<Hand>& hands);
  std::optional<PlayerId> holder(Card c) const;
};

struct ClaimClassification {
  CardSet correct;
  CardSet incorrect;
  CardSet filtered;
};

// A claim names a card some opponent holds. Cards the claimant already knows
// (own hand, shown to it, earlier verified claims) are filtered out first.
ClaimClassification classify_claims(CardSet claimed, const GroundTruth& truth, PlayerId claimant,
                                    CardSet already_known);

struct DerivedInfo {
  std::array<CardSet, 3> remaining;
  std::array<std::optional<Card>, 3> locked;
  std::vector<HistoryEntry> undisproved;
  std::vector<Fact> definitive;
};

// Direct-elimination summary that accompanies every prompt: envelope
// candidates per category after removing seen cards, locked categories,
// undisproved suggestions and facts that need no inference.
DerivedInfo derive_info(const PlayerView& view);

}  // namespace clue
