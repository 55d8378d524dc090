#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace eigendetect {

// Tags that keep draws for unrelated purposes in disjoint streams.
enum class Substream : std::uint32_t {
  noise = 0,     // white generator entries
  signal = 1,    // signal-subspace generator rows
  rotation = 2,  // basis draw, shared by every trial of a cell
};

// Addresses one independent random stream inside an experiment.
// (seed, cell, trial) fully determine the stream; running trials in any
// order or on any number of threads reproduces the same draws.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint32_t cell = 0;
  std::uint32_t trial = 0;
};

/// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw,
/// "Parallel random numbers: as easy as 1, 2, 3", SC'11).
///
/// Keying used throughout this project, fixed per release:
///   key     = 64-bit experiment seed, split into two 32-bit words
///   counter = [block_lo, block_hi, trial, cell | substream<<16]
/// so every (seed, cell, trial, substream) tuple owns 2^64 blocks of
/// 128 random bits, and streams never overlap.
class Philox4x32 {
 public:
  Philox4x32(const StreamKey& key, Substream sub)
      : key0_(static_cast<std::uint32_t>(key.seed)),
        key1_(static_cast<std::uint32_t>(key.seed >> 32)),
        stream_lo_(key.trial),
        stream_hi_((key.cell & 0xFFFFu) |
                   (static_cast<std::uint32_t>(sub) << 16)) {}

  std::uint64_t next_u64() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto w = block({static_cast<std::uint32_t>(block_index_),
                          static_cast<std::uint32_t>(block_index_ >> 32),
                          stream_lo_, stream_hi_},
                         {key0_, key1_});
    ++block_index_;
    spare_ = w[2] | (std::uint64_t{w[3]} << 32);
    have_spare_ = true;
    return w[0] | (std::uint64_t{w[1]} << 32);
  }

  // One 10-round Philox block; exposed for the known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round != 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  std::uint32_t key0_, key1_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint64_t block_index_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

/// Standard normal draws via Box-Muller on Philox output.
/// Two uniforms are consumed per pair of normals, so the mapping from
/// stream position to variate is fixed.
class NormalStream {
 public:
  NormalStream(const StreamKey& key, Substream sub) : gen_(key, sub) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = to_unit(gen_.next_u64());
    const double u2 = to_unit(gen_.next_u64());
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  // Circularly symmetric complex normal with unit total variance.
  std::complex<double> next_complex() {
    constexpr double half = std::numbers::sqrt2 / 2.0;
    const double re = next();
    const double im = next();
    return {re * half, im * half};
  }

 private:
  static double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;  // [0, 1)
  }

  Philox4x32 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace eigendetect
