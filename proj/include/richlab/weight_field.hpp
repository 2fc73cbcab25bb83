#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "richlab/lattice.hpp"

namespace richlab {

// Counter-based generation. A value is a pure function of
//   (master_seed, replication_index, clock_index, axis, low endpoint x1..xd)
// absorbed word by word into a 64-bit state:
//
//   h = fmix64(master_seed ^ kSeedSalt)
//   h = absorb(h, w)  for w in [replication_index, clock_index, axis, x1, ..., xd]
//   absorb(h, w) = fmix64(h ^ (w * kWordMul + kWordAdd))
//
// where fmix64 is the SplitMix64 finalizer. The top 52 bits k = h >> 12 map to
// u = (k + 0.5) / 2^52, which lies strictly inside (0, 1) in double precision.
// docs/weight-field.md carries the same description with constants.

namespace mixing {

inline constexpr std::uint64_t kSeedSalt = 0x5ca1ab1e0ddba11ULL;
inline constexpr std::uint64_t kWordMul = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t kWordAdd = 0xd1b54a32d192ed03ULL;

constexpr std::uint64_t fmix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t absorb(std::uint64_t h, std::uint64_t word) { return fmix64(h ^ (word * kWordMul + kWordAdd)); }

constexpr std::uint64_t seed_state(std::uint64_t master_seed) { return fmix64(master_seed ^ kSeedSalt); }

/// (k + 0.5) / 2^52 with k the top 52 bits of h.
constexpr double to_open_unit(std::uint64_t h) {
  return (static_cast<double>(h >> 12) + 0.5) * 0x1p-52;
}

}  // namespace mixing

enum class ClockMode { Single, Two };

/// Deterministic realization of the exponential passage times tau(e) (single clock) or
/// tau_1(e), tau_2(e) (two clocks). Immutable; safe to share across threads.
class WeightField {
 public:
  /// Throws ConfigError unless both rates are finite and positive, and, in single-clock
  /// mode, equal.
  WeightField(std::uint64_t master_seed, std::int64_t replication_index, ClockMode mode, double lambda1,
              double lambda2);

  /// One-type field at rate lambda (single clock).
  static WeightField one_type(std::uint64_t master_seed, std::int64_t replication_index, double lambda = 1.0) {
    return WeightField(master_seed, replication_index, ClockMode::Single, lambda, lambda);
  }

  std::uint64_t master_seed() const { return seed_; }
  std::int64_t replication_index() const { return rep_; }
  ClockMode clock_mode() const { return mode_; }
  double lambda(int type_index) const { return type_index == 2 && mode_ == ClockMode::Two ? lambda2_ : lambda1_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }

  /// Uniform draw attached to (edge, clock), clock in {1, 2}.
  double uniform01(const Edge& edge, int clock_index) const;

  /// -ln(u) / lambda for the clock serving `type_index`.
  double edge_weight(const Edge& edge, int type_index) const;

  /// Engine fast path: edge given by its low endpoint and axis.
  double uniform_at(const Point& low, int axis, int clock_index) const {
    std::uint64_t h = prefix_[clock_index == 2 ? 1 : 0];
    h = mixing::absorb(h, static_cast<std::uint64_t>(axis));
    for (int i = 0; i < low.dim(); ++i) h = mixing::absorb(h, static_cast<std::uint64_t>(low[i]));
    return mixing::to_open_unit(h);
  }

  double weight_at(const Point& low, int axis, int type_index) const {
    const int clock = mode_ == ClockMode::Two && type_index == 2 ? 2 : 1;
    return -std::log(uniform_at(low, axis, clock)) / (clock == 2 ? lambda2_ : lambda1_);
  }

  /// Same field with a different replication index.
  WeightField with_replication(std::int64_t rep) const { return {seed_, rep, mode_, lambda1_, lambda2_}; }
  /// Same uniforms, different rates.
  WeightField with_rates(double lambda1, double lambda2) const { return {seed_, rep_, mode_, lambda1, lambda2}; }

 private:
  std::uint64_t seed_;
  std::int64_t rep_;
  ClockMode mode_;
  double lambda1_;
  double lambda2_;
  std::array<std::uint64_t, 2> prefix_{};
};

/// Free-function form of WeightField::uniform01.
double uniform01(std::uint64_t master_seed, std::int64_t replication_index, const Edge& edge, int clock_index);

/// Sequential uniform stream keyed like the weight field (seed, replication, stream tag),
/// for event-driven simulation. Distinct tags give unrelated streams.
class CounterStream {
 public:
  CounterStream(std::uint64_t master_seed, std::int64_t replication_index, std::uint64_t tag)
      : key_(mixing::absorb(mixing::absorb(mixing::seed_state(master_seed), static_cast<std::uint64_t>(replication_index)),
                            tag ^ 0x7f4a7c159e3779b9ULL)) {}

  std::uint64_t next_u64() { return mixing::absorb(key_, counter_++); }
  double uniform01() { return mixing::to_open_unit(next_u64()); }
  double exponential(double rate) { return -std::log(uniform01()) / rate; }
  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace richlab
