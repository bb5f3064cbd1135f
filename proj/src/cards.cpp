#include "clue/cards.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace clue {
namespace {

constexpr std::array<std::string_view, Card::kCount> kNames = {
    "Miss Scarlet", "Colonel Mustard", "Mrs. White", "Mr. Green", "Mrs. Peacock",
    "Professor Plum", "Candlestick", "Knife", "Lead Pipe", "Revolver", "Rope", "Wrench",
    "Kitchen", "Ballroom", "Conservatory", "Dining Room", "Billiard Room", "Library",
    "Lounge", "Hall", "Study"};

constexpr int kFirstWeapon = 6;
constexpr int kFirstRoom = 12;

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char ch : text) {
    auto u = static_cast<unsigned char>(ch);
    if (std::isspace(u)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

const std::array<std::string, Card::kCount>& normalized_names() {
  static const auto names = [] {
    std::array<std::string, Card::kCount> out;
    for (std::size_t i = 0; i < kNames.size(); ++i) out[i] = normalize(kNames[i]);
    return out;
  }();
  return names;
}

}  // namespace

std::string_view category_name(Category c) {
  switch (c) {
    case Category::Suspect: return "suspect";
    case Category::Weapon: return "weapon";
    case Category::Room: return "room";
  }
  return "?";
}

Category Card::category() const {
  if (id_ < kFirstWeapon) return Category::Suspect;
  if (id_ < kFirstRoom) return Category::Weapon;
  return Category::Room;
}

std::string_view Card::name() const { return kNames.at(id_); }

Card card_named(std::string_view canonical) {
  auto it = std::find(kNames.begin(), kNames.end(), canonical);
  if (it == kNames.end()) throw UnknownCard(std::string(canonical));
  return Card(static_cast<std::uint8_t>(it - kNames.begin()));
}

Card parse_card(std::string_view text) {
  const std::string key = normalize(text);
  const auto& names = normalized_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == key) return Card(static_cast<std::uint8_t>(i));
  }
  throw UnknownCard(std::string(text));
}

CardSet category_cards(Category c) {
  switch (c) {
    case Category::Suspect: return CardSet((1u << kFirstWeapon) - 1);
    case Category::Weapon: return CardSet(((1u << kFirstRoom) - 1) & ~((1u << kFirstWeapon) - 1));
    case Category::Room: return CardSet(CardSet::kAllBits & ~((1u << kFirstRoom) - 1));
  }
  return {};
}

CardSet CardSet::of(Category c) const { return *this & category_cards(c); }

CardSet full_deck() { return CardSet(CardSet::kAllBits); }

CardSet reduced_deck(int suspects, int weapons, int rooms) {
  if (suspects < 1 || suspects > 6 || weapons < 1 || weapons > 6 || rooms < 1 || rooms > 9) {
    throw InvalidConfig("reduced deck needs 1-6 suspects, 1-6 weapons and 1-9 rooms");
  }
  CardSet out;
  for (int i = 0; i < suspects; ++i) out.insert(Card(static_cast<std::uint8_t>(i)));
  for (int i = 0; i < weapons; ++i) out.insert(Card(static_cast<std::uint8_t>(kFirstWeapon + i)));
  for (int i = 0; i < rooms; ++i) out.insert(Card(static_cast<std::uint8_t>(kFirstRoom + i)));
  return out;
}

std::string join_names(CardSet cards, std::string_view sep) {
  std::string out;
  for (Card c : cards) {
    if (!out.empty()) out += sep;
    out += c.name();
  }
  return out;
}

Card Triple::at(Category c) const {
  switch (c) {
    case Category::Suspect: return suspect;
    case Category::Weapon: return weapon;
    case Category::Room: return room;
  }
  return suspect;
}

bool Triple::valid() const {
  return suspect.category() == Category::Suspect && weapon.category() == Category::Weapon &&
         room.category() == Category::Room;
}

std::string Triple::to_string() const {
  std::string out(suspect.name());
  out += ", ";
  out += weapon.name();
  out += ", ";
  out += room.name();
  return out;
}

Triple make_triple(Card a, Card b, Card c) {
  std::array<std::optional<Card>, 3> slot;
  for (Card x : {a, b, c}) {
    auto idx = static_cast<std::size_t>(x.category());
    if (slot[idx]) throw InvalidConfig("triple needs exactly one card per category");
    slot[idx] = x;
  }
  return Triple{*slot[0], *slot[1], *slot[2]};
}

}  // namespace clue
