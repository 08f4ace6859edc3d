#include "sdasel/rng.hpp"

namespace sdasel {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t w : words) h = splitmix64(h ^ splitmix64(w));
  return h;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling keeps the draw exactly uniform and the stream portable.
  const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} - bound + 1) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= limit) return r % bound;
  }
}

}  // namespace sdasel
