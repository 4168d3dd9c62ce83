#include "aoisim/rng.hpp"

#include <bit>
#include <cmath>

namespace aoisim {
namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

}  // namespace

std::uint64_t derive_state(std::uint64_t seed, StreamKind kind,
                           std::uint64_t k1, std::uint64_t k2,
                           std::uint64_t k3, std::uint64_t k4) {
  std::uint64_t h = mix64(seed + kGamma);
  h = mix64(h ^ (static_cast<std::uint64_t>(kind) * 0xff51afd7ed558ccdull));
  h = mix64(h ^ (k1 * 0xc4ceb9fe1a85ec53ull));
  h = mix64(h ^ (k2 * 0x2545f4914f6cdd1dull));
  h = mix64(h ^ (k3 * 0x9e3779b97f4a7c15ull));
  h = mix64(h ^ (k4 * 0xd6e8feb86659fd93ull));
  return h;
}

std::uint64_t RngStream::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double RngStream::next_unit() {
  // 52 random bits centered in (0,1); never returns 0 or 1.
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double RngStream::next_exp(double rate) {
  return -std::log(next_unit()) / rate;
}

double RngStream::next_gauss() {
  double u1 = next_unit();
  double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

std::uint32_t RngStream::next_below(std::uint32_t bound) {
  // Rejection sampling to stay exactly uniform.
  std::uint64_t limit = (~0ull / bound) * bound;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<std::uint32_t>(x % bound);
}

bool RngStream::bernoulli(double p) { return next_unit() < p; }

std::uint64_t time_key(double t) { return std::bit_cast<std::uint64_t>(t); }

double filter_candidate_delay(std::uint64_t seed, int agent, int particle,
                              std::int64_t msg_index, std::uint64_t context,
                              double rate) {
  RngStream s(derive_state(seed, StreamKind::FilterSim,
                           static_cast<std::uint64_t>(agent),
                           static_cast<std::uint64_t>(particle),
                           static_cast<std::uint64_t>(msg_index), context));
  return s.next_exp(rate);
}

}  // namespace aoisim
