#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "clue/errors.hpp"

namespace clue {

enum class Category : std::uint8_t { Suspect = 0, Weapon = 1, Room = 2 };

inline constexpr std::array<Category, 3> kCategories = {Category::Suspect, Category::Weapon,
                                                        Category::Room};

std::string_view category_name(Category c);

// One of the 21 roster cards. Ids 0-5 are suspects, 6-11 weapons, 12-20 rooms,
// each block in canonical roster order.
class Card {
 public:
  static constexpr std::size_t kCount = 21;

  constexpr Card() = default;
  constexpr explicit Card(std::uint8_t id) : id_(id) {}

  constexpr std::uint8_t id() const { return id_; }
  Category category() const;
  std::string_view name() const;

  constexpr auto operator<=>(const Card&) const = default;

 private:
  std::uint8_t id_ = 0;
};

// Looks up a card by canonical name; the name must match exactly.
Card card_named(std::string_view canonical);

// Case-insensitive match against the roster after trimming and collapsing
// internal whitespace. Throws UnknownCard.
Card parse_card(std::string_view text);

// Small fixed-size set of cards backed by a 32-bit mask.
class CardSet {
 public:
  constexpr CardSet() = default;
  constexpr explicit CardSet(std::uint32_t bits) : bits_(bits & kAllBits) {}
  CardSet(std::initializer_list<Card> cards) {
    for (Card c : cards) insert(c);
  }

  constexpr bool contains(Card c) const { return (bits_ >> c.id()) & 1u; }
  constexpr void insert(Card c) { bits_ |= 1u << c.id(); }
  constexpr void erase(Card c) { bits_ &= ~(1u << c.id()); }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint32_t bits() const { return bits_; }

  constexpr CardSet operator|(CardSet o) const { return CardSet(bits_ | o.bits_); }
  constexpr CardSet operator&(CardSet o) const { return CardSet(bits_ & o.bits_); }
  constexpr CardSet operator-(CardSet o) const { return CardSet(bits_ & ~o.bits_); }
  constexpr CardSet& operator|=(CardSet o) { bits_ |= o.bits_; return *this; }
  constexpr CardSet& operator&=(CardSet o) { bits_ &= o.bits_; return *this; }
  constexpr CardSet& operator-=(CardSet o) { bits_ &= ~o.bits_; return *this; }
  constexpr bool is_subset_of(CardSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool operator==(const CardSet&) const = default;

  CardSet of(Category c) const;
  Card first() const { return Card(static_cast<std::uint8_t>(std::countr_zero(bits_))); }

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Card;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = Card;

    iterator() = default;
    explicit iterator(std::uint32_t rest) : rest_(rest) {}
    Card operator*() const { return Card(static_cast<std::uint8_t>(std::countr_zero(rest_))); }
    iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    iterator operator++(int) {
      iterator t = *this;
      ++*this;
      return t;
    }
    bool operator==(const iterator&) const = default;

   private:
    std::uint32_t rest_ = 0;
  };

  iterator begin() const { return iterator(bits_); }
  iterator end() const { return iterator(0); }
  std::vector<Card> to_vector() const { return {begin(), end()}; }

  static constexpr std::uint32_t kAllBits = (1u << Card::kCount) - 1;

 private:
  std::uint32_t bits_ = 0;
};

// All 21 cards: 6 suspects, 6 weapons, 9 rooms.
CardSet full_deck();

// The first n cards of each category; used for small exhaustive test games.
CardSet reduced_deck(int suspects, int weapons, int rooms);

CardSet category_cards(Category c);

// "Miss Scarlet, Rope, Kitchen" in id order.
std::string join_names(CardSet cards, std::string_view sep = ", ");

// One card per category.
struct Triple {
  Card suspect;
  Card weapon;
  Card room;

  Card at(Category c) const;
  CardSet cards() const { return CardSet{suspect, weapon, room}; }
  bool valid() const;
  bool operator==(const Triple&) const = default;
  std::string to_string() const;
};

Triple make_triple(Card a, Card b, Card c);

}  // namespace clue
