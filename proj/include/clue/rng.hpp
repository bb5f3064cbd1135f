#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace clue {

// Derives an independent sub-stream seed for a named consumer ("deal",
// "fallback", "agent/3", ...). Adding a consumer never perturbs the others.
std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose);

// mt19937_64 with portable sampling helpers. The standard distributions are
// implementation-defined, so they are avoided to keep logs reproducible
// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t root, std::string_view purpose) : engine_(derive_seed(root, purpose)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(below(items.size()))];
  }

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace clue
