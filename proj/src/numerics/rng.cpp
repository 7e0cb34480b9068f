#include "tosi/numerics/rng.hpp"

#include "tosi/error.hpp"

#include <cmath>
#include <numeric>
#include <type_traits>
#include <variant>

namespace tosi {
namespace {

constexpr std::uint32_t kMulA = 0xD2511F53u;
constexpr std::uint32_t kMulB = 0xCD9E8D57u;
constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t combine(std::uint64_t key, std::string_view label, std::uint64_t index) {
  std::uint64_t h = splitmix64(key ^ fnv1a(label));
  return splitmix64(h ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  return ctr;
}

RngStream::RngStream(std::uint64_t seed, std::string_view label)
    : seed_(seed), label_(label), key_(combine(splitmix64(seed), label, 0)) {}

RngStream RngStream::child(std::string_view label, std::uint64_t index) const {
  std::string path = label_;
  path += '/';
  path += label;
  path += '#';
  path += std::to_string(index);
  return RngStream(seed_, std::move(path), combine(key_, label, index));
}

RngEngine::RngEngine(const RngStream& stream)
    : key_{static_cast<std::uint32_t>(stream.key()),
           static_cast<std::uint32_t>(stream.key() >> 32)} {}

void RngEngine::refill() {
  buffer_ = philox4x32({static_cast<std::uint32_t>(block_),
                        static_cast<std::uint32_t>(block_ >> 32), 0u, 0u},
                       key_);
  ++block_;
  used_ = 0;
}

RngEngine::result_type RngEngine::operator()() {
  if (used_ > 2) refill();
  const std::uint64_t hi = buffer_[static_cast<std::size_t>(used_)];
  const std::uint64_t lo = buffer_[static_cast<std::size_t>(used_) + 1];
  used_ += 2;
  return (hi << 32) | lo;
}

double RngEngine::uniform01() {
  // (k + 0.5) / 2^53 keeps both endpoints out of reach.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngEngine::uniform(double a, double b) { return a + (b - a) * uniform01(); }

__extension__ using u128 = unsigned __int128;

std::uint64_t RngEngine::below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("below: bound must be positive");
  u128 m = static_cast<u128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RngEngine::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  has_spare_ = true;
  return u * f;
}

double RngEngine::gamma(double shape) {
  if (!(shape > 0.0)) throw DomainError("gamma shape must be positive");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform01(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngEngine::student_t(double nu) {
  if (!(nu > 0.0)) throw DomainError("student-t degrees of freedom must be positive");
  const double z = normal();
  const double chi2 = 2.0 * gamma(0.5 * nu);
  return z / std::sqrt(chi2 / nu);
}

std::vector<double> draw(const RngStream& stream, const Distribution& dist, std::size_t count) {
  if (const auto* t = std::get_if<StudentT>(&dist); t && !(t->nu > 0.0))
    throw DomainError("student-t degrees of freedom must be positive");
  if (const auto* u = std::get_if<Uniform>(&dist); u && !(u->a < u->b))
    throw DomainError("uniform bounds must satisfy a < b");
  RngEngine engine(stream);
  std::vector<double> out(count);
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        for (auto& x : out) {
          if constexpr (std::is_same_v<D, StandardNormal>)
            x = engine.normal();
          else if constexpr (std::is_same_v<D, StudentT>)
            x = engine.student_t(d.nu);
          else
            x = engine.uniform(d.a, d.b);
        }
      },
      dist);
  return out;
}

std::vector<std::size_t> random_permutation(RngEngine& engine, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(engine.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace tosi
