#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tosi {

/// Philox4x32-10 block function: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// An immutable, named position in the random-number space. Two streams with
/// the same (seed, label path) generate identical sequences; child streams
/// are keyed by hashing the parent key with the child label and index, so
/// replicate r or split l always sees the same numbers regardless of which
/// thread draws them or in which order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label);

  RngStream child(std::string_view label, std::uint64_t index = 0) const;

  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& label() const noexcept { return label_; }
  std::uint64_t key() const noexcept { return key_; }

 private:
  RngStream(std::uint64_t seed, std::string label, std::uint64_t key)
      : seed_(seed), label_(std::move(label)), key_(key) {}

  std::uint64_t seed_;
  std::string label_;
  std::uint64_t key_;
};

/// Sequential reader over an RngStream. Satisfies UniformRandomBitGenerator
/// but the library only uses its own transforms below, so sequences are
/// identical across standard libraries.
class RngEngine {
 public:
  using result_type = std::uint64_t;

  explicit RngEngine(const RngStream& stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform01();
  double uniform(double a, double b);
  /// Uniform integer in [0, bound), bound >= 1 (Lemire's method).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Gamma(shape, 1) (Marsaglia-Tsang).
  double gamma(double shape);
  double student_t(double nu);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

struct StandardNormal {};
struct StudentT {
  double nu;
};
struct Uniform {
  double a;
  double b;
};
using Distribution = std::variant<StandardNormal, StudentT, Uniform>;

/// `count` draws from the start of `stream`. Throws DomainError on invalid
/// parameters (nu <= 0, a >= b).
std::vector<double> draw(const RngStream& stream, const Distribution& dist, std::size_t count);

/// Uniformly random permutation of {0, ..., n-1} (Fisher-Yates).
std::vector<std::size_t> random_permutation(RngEngine& engine, std::size_t n);

}  // namespace tosi
