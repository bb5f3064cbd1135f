#include "clue/deduction.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace clue {

std::string location_name(Location loc, const std::vector<std::string>& names) {
  if (loc.is_envelope()) return "Envelope";
  const auto idx = static_cast<std::size_t>(loc.holder);
  if (idx < names.size()) return names[idx];
  return "P" + std::to_string(loc.holder + 1);
}

KnowledgeBase::KnowledgeBase(PlayerId owner, CardSet deck, std::vector<int> hand_sizes,
                             CardSet own_hand)
    : owner_(owner), deck_(deck), hand_sizes_(std::move(hand_sizes)) {
  if (owner < 0 || owner >= num_players()) throw InvalidConfig("knowledge base owner out of range");
  if (!own_hand.is_subset_of(deck)) throw InvalidConfig("own hand contains cards outside the deck");
  const LocationMask all = all_locations();
  for (Card c : deck_) masks_[c.id()] = all;
  for (Card c : deck_) {
    if (own_hand.contains(c)) {
      masks_[c.id()] = bit(Location::player(owner));
    } else {
      masks_[c.id()] &= ~bit(Location::player(owner));
    }
  }
}

KnowledgeBase KnowledgeBase::from_view(const PlayerView& view) {
  KnowledgeBase kb(view.self, view.deck, view.hand_sizes, view.hand);
  for (const HistoryEntry& e : view.history) kb.ingest(e);
  for (const ShownToMe& s : view.shown_to_me) kb.place(s.card, Location::player(s.from));
  for (Card c : view.verified_deductions) kb.note_not_in_envelope(c);
  return kb;
}

LocationMask KnowledgeBase::bit(Location loc) const {
  if (loc.is_envelope()) return LocationMask{1} << num_players();
  return LocationMask{1} << loc.holder;
}

std::optional<Location> KnowledgeBase::location(Card c) const {
  const LocationMask m = masks_[c.id()];
  if (std::popcount(m) != 1) return std::nullopt;
  const int idx = std::countr_zero(m);
  return idx == num_players() ? Location::envelope() : Location::player(idx);
}

std::vector<Location> KnowledgeBase::candidates(Card c) const {
  std::vector<Location> out;
  for (int p = 0; p < num_players(); ++p) {
    if (can_be_at(c, Location::player(p))) out.push_back(Location::player(p));
  }
  if (can_be_at(c, Location::envelope())) out.push_back(Location::envelope());
  return out;
}

std::vector<Fact> KnowledgeBase::known_locations() const {
  std::vector<Fact> out;
  for (Card c : deck_) {
    if (auto loc = location(c)) out.push_back({c, *loc});
  }
  return out;
}

std::vector<std::pair<PlayerId, Card>> KnowledgeBase::exclusions() const {
  std::vector<std::pair<PlayerId, Card>> out;
  for (Card c : deck_) {
    for (int p = 0; p < num_players(); ++p) {
      if (!can_be_at(c, Location::player(p))) out.emplace_back(p, c);
    }
  }
  return out;
}

CardSet KnowledgeBase::envelope_candidates(Category cat) const {
  CardSet out;
  for (Card c : deck_.of(cat)) {
    if (can_be_at(c, Location::envelope())) out.insert(c);
  }
  return out;
}

void KnowledgeBase::place(Card c, Location loc) {
  if (!deck_.contains(c)) throw InconsistentEvent(std::string(c.name()) + " is not in play");
  if (!can_be_at(c, loc)) {
    throw InconsistentEvent(std::string(c.name()) + " cannot be at the observed location");
  }
  masks_[c.id()] = bit(loc);
}

void KnowledgeBase::exclude(Card c, Location loc) {
  if (!deck_.contains(c)) return;
  if (masks_[c.id()] == bit(loc)) {
    throw InconsistentEvent(std::string(c.name()) + " is known to be where it was excluded");
  }
  masks_[c.id()] &= ~bit(loc);
}

void KnowledgeBase::add_disjunction(PlayerId p, CardSet cards) {
  cards &= deck_;
  bool possible_any = false;
  for (Card c : cards) possible_any = possible_any || can_be_at(c, Location::player(p));
  if (!possible_any) throw InconsistentEvent("disprover can hold none of the suggested cards");
  Disjunction d{p, cards};
  if (std::find(disjunctions_.begin(), disjunctions_.end(), d) == disjunctions_.end()) {
    disjunctions_.push_back(d);
  }
}

void KnowledgeBase::ingest(const HistoryEntry& e) {
  const CardSet triple = e.cards.cards();
  for (PlayerId q : e.passers) {
    for (Card c : triple) exclude(c, Location::player(q));
  }
  if (!e.disprover) return;
  const Location d = Location::player(*e.disprover);
  if (e.shown) {
    if (!triple.contains(*e.shown)) throw InconsistentEvent("shown card is not part of the suggestion");
    place(*e.shown, d);
    return;
  }
  // A disjunction already satisfied by a known holding carries no information.
  for (Card c : triple) {
    if (location(c) == d) return;
  }
  add_disjunction(*e.disprover, triple);
}

void KnowledgeBase::ingest(const GameEvent& event) {
  if (const auto* s = std::get_if<SuggestionMade>(&event.payload)) {
    ingest(visible_entry(event, *s, owner_));
  }
}

// ---------------------------------------------------------------------------
// Propagation

struct Propagator {
  KnowledgeBase& kb;
  bool changed = false;

  LocationMask& mask(Card c) { return kb.masks_[c.id()]; }

  void set(Card c, LocationMask m) {
    if (m == 0) throw Inconsistent(std::string(c.name()) + " has no possible location");
    if (mask(c) != m) {
      mask(c) = m;
      changed = true;
    }
  }

  void disjunctions() {
    std::vector<Disjunction> kept;
    for (const Disjunction& d : kb.disjunctions_) {
      const LocationMask pb = kb.bit(Location::player(d.player));
      CardSet live;
      bool satisfied = false;
      for (Card c : d.cards) {
        if (mask(c) == pb) satisfied = true;
        if (mask(c) & pb) live.insert(c);
      }
      if (satisfied) {
        changed = true;
        continue;
      }
      if (live.empty()) throw Inconsistent("a disprover can hold none of its suggested cards");
      if (live.size() == 1) {
        set(live.first(), pb);
        continue;
      }
      if (live != d.cards) changed = true;
      kept.push_back({d.player, live});
    }
    // Subsumption: a player's disjunction over a superset of another of its
    // disjunctions is implied and can be dropped.
    std::vector<Disjunction> minimal;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < kept.size() && !redundant; ++j) {
        if (i == j || kept[i].player != kept[j].player) continue;
        const bool subset = kept[j].cards.is_subset_of(kept[i].cards);
        if (subset && (kept[j].cards != kept[i].cards || j < i)) redundant = true;
      }
      if (redundant) {
        changed = true;
      } else {
        minimal.push_back(kept[i]);
      }
    }
    kb.disjunctions_ = std::move(minimal);
  }

  // A location with capacity k: if k cards are pinned there it takes nothing
  // else; if only k cards may go there they all do.
  void saturate(CardSet pool, LocationMask b, int capacity) {
    int pinned = 0;
    int maybe = 0;
    for (Card c : pool) {
      if (mask(c) == b) ++pinned;
      if (mask(c) & b) ++maybe;
    }
    if (pinned > capacity) throw Inconsistent("more cards pinned to a location than it holds");
    if (maybe < capacity) throw Inconsistent("a location cannot be filled");
    if (pinned == capacity) {
      for (Card c : pool) {
        if (mask(c) != b && (mask(c) & b)) set(c, mask(c) & ~b);
      }
    } else if (maybe == capacity) {
      for (Card c : pool) {
        if (mask(c) & b) set(c, b);
      }
    }
  }

  void run() {
    do {
      changed = false;
      for (Card c : kb.deck_) {
        if (mask(c) == 0) throw Inconsistent(std::string(c.name()) + " has no possible location");
      }
      disjunctions();
      for (int p = 0; p < kb.num_players(); ++p) {
        saturate(kb.deck_, kb.bit(Location::player(p)), kb.hand_sizes_[static_cast<std::size_t>(p)]);
      }
      for (Category cat : kCategories) {
        const CardSet pool = kb.deck_.of(cat);
        if (!pool.empty()) saturate(pool, kb.bit(Location::envelope()), 1);
      }
    } while (changed);
  }
};

Propagation propagate(KnowledgeBase kb) {
  const KnowledgeBase before = kb;
  Propagator{kb}.run();
  Propagation out{std::move(kb), {}};
  for (Card c : out.kb.deck()) {
    auto now = out.kb.location(c);
    if (now && !before.location(c)) out.new_facts.push_back({c, *now});
  }
  return out;
}

// ---------------------------------------------------------------------------
// World search

namespace {

class WorldSearch {
 public:
  WorldSearch(const KnowledgeBase& kb, std::uint64_t cap, std::uint64_t* nodes)
      : kb_(kb), cap_(cap), nodes_(nodes), n_(kb.num_players()) {
    for (Card c : kb.deck()) order_.push_back(c);
    masks_.fill(0);
    for (Card c : kb.deck()) masks_[c.id()] = kb.possible(c);
    for (const Disjunction& d : kb.disjunctions()) disjunctions_.push_back(d);
  }

  // Restricts the search to worlds where the card sits at loc.
  void force(Card c, Location loc) { masks_[c.id()] &= kb_.bit(loc); }

  // Calls visit for each world; stops early when visit returns false.
  // Returns false if the search was stopped by visit.
  bool run(const std::function<bool(const World&)>& visit) {
    visit_ = &visit;
    if (!setup()) return true;
    return dfs(0);
  }

  std::uint64_t found() const { return found_; }

 private:
  bool setup() {
    int expected = 0;
    for (int h : kb_.hand_sizes()) expected += h;
    int categories = 0;
    for (Category cat : kCategories) categories += kb_.deck().of(cat).empty() ? 0 : 1;
    if (expected + categories != kb_.deck().size()) return false;
    for (Card c : order_) {
      if (masks_[c.id()] == 0) return false;
    }
    // Most constrained cards first.
    std::stable_sort(order_.begin(), order_.end(), [&](Card a, Card b) {
      return std::popcount(masks_[a.id()]) < std::popcount(masks_[b.id()]);
    });
    capacity_.assign(static_cast<std::size_t>(n_), 0);
    available_.assign(static_cast<std::size_t>(n_), 0);
    for (int p = 0; p < n_; ++p) capacity_[static_cast<std::size_t>(p)] = kb_.hand_sizes()[static_cast<std::size_t>(p)];
    env_needed_.fill(false);
    env_available_.fill(0);
    for (Category cat : kCategories) {
      env_needed_[static_cast<std::size_t>(cat)] = !kb_.deck().of(cat).empty();
    }
    for (Card c : order_) {
      for (int p = 0; p < n_; ++p) {
        if (masks_[c.id()] & (LocationMask{1} << p)) ++available_[static_cast<std::size_t>(p)];
      }
      if (masks_[c.id()] & env_bit()) ++env_available_[static_cast<std::size_t>(c.category())];
    }
    disj_live_.assign(disjunctions_.size(), 0);
    disj_sat_.assign(disjunctions_.size(), 0);
    by_card_.fill({});
    for (std::size_t i = 0; i < disjunctions_.size(); ++i) {
      const Disjunction& d = disjunctions_[i];
      for (Card c : d.cards) {
        by_card_[c.id()].push_back(i);
        if (masks_[c.id()] & (LocationMask{1} << d.player)) ++disj_live_[i];
      }
    }
    world_.deck = kb_.deck();
    return feasible();
  }

  LocationMask env_bit() const { return LocationMask{1} << n_; }

  bool feasible() const {
    for (int p = 0; p < n_; ++p) {
      if (capacity_[static_cast<std::size_t>(p)] > available_[static_cast<std::size_t>(p)]) return false;
    }
    for (std::size_t k = 0; k < 3; ++k) {
      if (env_needed_[k] && env_available_[k] == 0) return false;
    }
    for (std::size_t i = 0; i < disjunctions_.size(); ++i) {
      if (disj_sat_[i] == 0 && disj_live_[i] == 0) return false;
    }
    return true;
  }

  // Removes card c from the pool of unassigned cards and assigns it to slot
  // (player index or n_ for the envelope); delta is +1 to apply, -1 to undo.
  void apply(Card c, int slot, int delta) {
    const LocationMask m = masks_[c.id()];
    for (int p = 0; p < n_; ++p) {
      if (m & (LocationMask{1} << p)) available_[static_cast<std::size_t>(p)] -= delta;
    }
    const auto cat = static_cast<std::size_t>(c.category());
    if (m & env_bit()) env_available_[cat] -= delta;
    if (slot == n_) {
      env_needed_[cat] = delta < 0;
    } else {
      capacity_[static_cast<std::size_t>(slot)] -= delta;
    }
    for (std::size_t i : by_card_[c.id()]) {
      const PlayerId dp = disjunctions_[i].player;
      if (m & (LocationMask{1} << dp)) disj_live_[i] -= delta;
      if (slot == dp) disj_sat_[i] += delta;
    }
  }

  bool dfs(std::size_t depth) {
    if (++*nodes_ > cap_) throw CapExceeded(*nodes_, found_);
    if (depth == order_.size()) {
      ++found_;
      return (*visit_)(world_);
    }
    const Card c = order_[depth];
    const LocationMask m = masks_[c.id()];
    const auto cat = static_cast<std::size_t>(c.category());
    for (int slot = 0; slot <= n_; ++slot) {
      if (!(m & (LocationMask{1} << slot))) continue;
      if (slot == n_ ? !env_needed_[cat] : capacity_[static_cast<std::size_t>(slot)] == 0) continue;
      apply(c, slot, +1);
      world_.location[c.id()] = slot == n_ ? Location::envelope() : Location::player(slot);
      bool keep_going = true;
      if (feasible()) keep_going = dfs(depth + 1);
      apply(c, slot, -1);
      if (!keep_going) return false;
    }
    return true;
  }

  const KnowledgeBase& kb_;
  std::uint64_t cap_;
  std::uint64_t* nodes_;
  int n_;
  std::vector<Card> order_;
  std::array<LocationMask, Card::kCount> masks_{};
  std::vector<Disjunction> disjunctions_;
  std::vector<int> capacity_;
  std::vector<int> available_;
  std::array<bool, 3> env_needed_{};
  std::array<int, 3> env_available_{};
  std::vector<int> disj_live_;
  std::vector<int> disj_sat_;
  std::array<std::vector<std::size_t>, Card::kCount> by_card_{};
  World world_;
  std::uint64_t found_ = 0;
  const std::function<bool(const World&)>* visit_ = nullptr;
};

}  // namespace

void for_each_world(const KnowledgeBase& kb, std::uint64_t cap,
                    const std::function<void(const World&)>& visit) {
  std::uint64_t nodes = 0;
  WorldSearch search(kb, cap, &nodes);
  search.run([&](const World& w) {
    visit(w);
    return true;
  });
}

std::vector<World> enumerate_worlds(const KnowledgeBase& kb, std::uint64_t cap) {
  std::vector<World> out;
  for_each_world(kb, cap, [&](const World& w) { out.push_back(w); });
  return out;
}

std::uint64_t count_worlds(const KnowledgeBase& kb, std::uint64_t cap) {
  std::uint64_t n = 0;
  for_each_world(kb, cap, [&](const World&) { ++n; });
  return n;
}

std::array<LocationMask, Card::kCount> exact_possibilities(const KnowledgeBase& kb,
                                                           std::uint64_t cap) {
  std::array<LocationMask, Card::kCount> witnessed{};
  std::uint64_t nodes = 0;
  auto witness = [&](const World& w) {
    for (Card c : kb.deck()) witnessed[c.id()] |= kb.bit(w.at(c));
    return false;  // one world per probe is enough
  };
  {
    WorldSearch search(kb, cap, &nodes);
    search.run(witness);
    if (search.found() == 0) throw Inconsistent("no world is consistent with the knowledge base");
  }
  for (Card c : kb.deck()) {
    for (Location loc : kb.candidates(c)) {
      if (witnessed[c.id()] & kb.bit(loc)) continue;
      WorldSearch probe(kb, cap, &nodes);
      probe.force(c, loc);
      probe.run(witness);
    }
  }
  return witnessed;
}

std::vector<Fact> certain_facts(const KnowledgeBase& kb, std::uint64_t cap) {
  const auto exact = exact_possibilities(kb, cap);
  std::vector<Fact> out;
  for (Card c : kb.deck()) {
    const LocationMask m = exact[c.id()];
    if (std::popcount(m) != 1) continue;
    const int idx = std::countr_zero(m);
    out.push_back({c, idx == kb.num_players() ? Location::envelope() : Location::player(idx)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ground truth and claims

GroundTruth GroundTruth::of(const GameState& state) { return of(state.solution, state.hands); }

GroundTruth GroundTruth::of(const Solution& solution, const std::vector<Hand>& hands) {
  GroundTruth t{solution, {}};
  for (const Hand& h : hands) t.hands.push_back(h.cards);
  return t;
}

std::optional<PlayerId> GroundTruth::holder(Card c) const {
  for (std::size_t p = 0; p < hands.size(); ++p) {
    if (hands[p].contains(c)) return static_cast<PlayerId>(p);
  }
  return std::nullopt;
}

ClaimClassification classify_claims(CardSet claimed, const GroundTruth& truth, PlayerId claimant,
                                    CardSet already_known) {
  ClaimClassification out;
  const CardSet own = truth.hands.at(static_cast<std::size_t>(claimant));
  for (Card c : claimed) {
    if (own.contains(c) || already_known.contains(c)) {
      out.filtered.insert(c);
      continue;
    }
    const auto holder = truth.holder(c);
    if (holder) {
      out.correct.insert(c);
    } else if (truth.solution.cards().contains(c)) {
      out.incorrect.insert(c);
    } else {
      out.filtered.insert(c);  // not in play
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derived prompt information

DerivedInfo derive_info(const PlayerView& view) {
  DerivedInfo out;
  const CardSet seen = view.seen();
  CardSet definite_envelope;
  for (const HistoryEntry& e : view.history) {
    if (e.disprover) continue;
    out.undisproved.push_back(e);
    // Everyone else passed on our own suggestion: what we do not hold is in
    // the envelope.
    if (e.suggester == view.self) {
      for (Card c : e.cards.cards()) {
        if (!view.hand.contains(c)) definite_envelope.insert(c);
      }
    }
  }
  for (Category cat : kCategories) {
    const auto k = static_cast<std::size_t>(cat);
    const CardSet env = definite_envelope.of(cat);
    out.remaining[k] = env.size() == 1 ? env : view.deck.of(cat) - seen;
    if (out.remaining[k].size() == 1) out.locked[k] = out.remaining[k].first();
  }
  for (const ShownToMe& s : view.shown_to_me) {
    Fact f{s.card, Location::player(s.from)};
    if (std::find(out.definitive.begin(), out.definitive.end(), f) == out.definitive.end()) {
      out.definitive.push_back(f);
    }
  }
  for (const auto& locked : out.locked) {
    if (locked) out.definitive.push_back({*locked, Location::envelope()});
  }
  return out;
}

}  // namespace clue
