#pragma once

#include <cstdint>
#include <random>

namespace tpp {

/// Seeded generator with platform-independent draw mappings.
///
/// The raw stream is std::mt19937_64, whose output is fixed by the standard.
/// The std:: distributions are implementation-defined, so every mapping from
/// raw bits to a value lives here instead. Identical seeds therefore yield
/// identical simulations on every conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return p >= 1.0 || (p > 0.0 && uniform() < p); }

  /// Poisson draw; large means are split into independent chunks.
  std::uint64_t poisson(double mean);

  /// Derives an independent sub-stream seed so that adding draws to one
  /// concern (say, muter selection) never perturbs another.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Sub-stream tags. Values are arbitrary but frozen: changing one changes
// every seeded result downstream.
namespace stream {
inline constexpr std::uint64_t kGraph = 0x01;
inline constexpr std::uint64_t kInstall = 0x02;
inline constexpr std::uint64_t kPhase = 0x03;
inline constexpr std::uint64_t kDynamics = 0x04;
inline constexpr std::uint64_t kAttack = 0x05;
inline constexpr std::uint64_t kMute = 0x06;
inline constexpr std::uint64_t kWalk = 0x07;
inline constexpr std::uint64_t kEpidemic = 0x08;
inline constexpr std::uint64_t kCatalog = 0x09;
}  // namespace stream

}  // namespace tpp
