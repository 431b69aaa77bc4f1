#pragma once

// Exact discrete probability objects over binary alphabets {-1,+1} and the
// information measures built on them. All quantities are in bits.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace morphdecomp {

// Normalization is exact to this tolerance without touching the data.
inline constexpr double kNormTolerance = 1e-12;
// Inputs off by at most this much are silently renormalized; beyond, rejected.
inline constexpr double kRenormTolerance = 1e-9;

enum class Axis : unsigned { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> kAllAxes{Axis::X, Axis::Y, Axis::Z};

char axis_name(Axis a) noexcept;

class AxisSet {
 public:
  constexpr AxisSet() = default;
  constexpr AxisSet(std::initializer_list<Axis> axes) {
    for (Axis a : axes) bits_ |= bit(a);
  }
  constexpr AxisSet(Axis a) : bits_(bit(a)) {}  // NOLINT(google-explicit-constructor)

  static constexpr AxisSet all() { return AxisSet{Axis::X, Axis::Y, Axis::Z}; }

  constexpr bool contains(Axis a) const { return (bits_ & bit(a)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    return static_cast<std::size_t>((bits_ & 1u) + ((bits_ >> 1) & 1u) + ((bits_ >> 2) & 1u));
  }
  constexpr bool intersects(AxisSet o) const { return (bits_ & o.bits_) != 0; }
  constexpr AxisSet operator|(AxisSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr bool operator==(const AxisSet&) const = default;

  // Member axes in X, Y, Z order.
  std::vector<Axis> axes() const;

 private:
  static constexpr unsigned bit(Axis a) { return 1u << static_cast<unsigned>(a); }
  static constexpr AxisSet from_bits(unsigned b) {
    AxisSet s;
    s.bits_ = b;
    return s;
  }
  unsigned bits_ = 0;
};

// Maps a value in {-1,+1} to 0/1. Throws ArgumentError otherwise.
std::size_t binary_index(int v);
inline constexpr int binary_value(std::size_t bit) { return bit ? +1 : -1; }

// Dense joint distribution over (X, Y, Z) in {-1,+1}^3.
//
// Cell layout: index = 4*[x=+1] + 2*[y=+1] + [z=+1], so X is the most
// significant axis. Immutable after construction.
class Pmf3 {
 public:
  static constexpr std::size_t kCells = 8;
  using Cells = std::array<double, kCells>;

  // Validates nonnegativity and normalization (see kRenormTolerance).
  explicit Pmf3(const Cells& cells);

  static Pmf3 uniform();

  static constexpr std::size_t index(std::size_t xb, std::size_t yb, std::size_t zb) {
    return (xb << 2) | (yb << 1) | zb;
  }
  // Value in {-1,+1} of `axis` at cell `idx`.
  static constexpr int value_at(std::size_t idx, Axis axis) {
    return binary_value((idx >> (2 - static_cast<unsigned>(axis))) & 1u);
  }

  double operator()(int x, int y, int z) const;
  double cell(std::size_t idx) const { return p_[idx]; }
  const Cells& cells() const noexcept { return p_; }

  bool operator==(const Pmf3&) const = default;

 private:
  Cells p_{};
};

// Dense joint distribution over two binary variables; index = 2*[a=+1] + [b=+1].
class Pmf2 {
 public:
  static constexpr std::size_t kCells = 4;
  using Cells = std::array<double, kCells>;

  explicit Pmf2(const Cells& cells);

  double operator()(int a, int b) const;
  const Cells& cells() const noexcept { return p_; }

  bool operator==(const Pmf2&) const = default;

 private:
  Cells p_{};
};

// Marginal of a Pmf3 on a set of axes. Cells ordered as in Pmf3, restricted
// to the kept axes (the earliest kept axis is most significant).
struct Marginal {
  AxisSet axes;
  std::vector<double> p;
};

// Shannon entropy of a normalized distribution, with 0 log 0 = 0.
// Throws NormalizationError for negative entries or |sum - 1| > 1e-9.
double entropy(std::span<const double> d);

Marginal marginalize(const Pmf3& P, AxisSet keep);
// Pairwise marginal with `first` as the most significant axis of the result.
Pmf2 marginal_pair(const Pmf3& P, Axis first, Axis second);

// Joint entropy of the marginal on `axes`; 0 for the empty set.
double joint_entropy(const Pmf3& P, AxisSet axes);

// I(target : sources). Throws ArgumentError when sources is empty or
// contains target.
double mutual_information(const Pmf3& P, Axis target, AxisSet sources);

// I(target : source | given). Axes must be pairwise distinct.
double conditional_mutual_information(const Pmf3& P, Axis target, Axis source, Axis given);

// CoI = I(X:Y) - I(X:Y|Z); symmetric in the three axes, may be negative.
double co_information(const Pmf3& P);

// D_KL(p || q) in bits. Terms with p = 0 contribute 0; p > 0 with q = 0
// throws FeasibilityError. Sizes must match.
double kl_divergence(std::span<const double> p, std::span<const double> q);

// sum_{s,g} p(s,g) D_KL( p(target | s,g) || p(target | g) ), the weighted
// Kullback-Leibler form of I(target : source | given).
double weighted_kl_cmi(const Pmf3& P, Axis target, Axis source, Axis given);

}  // namespace morphdecomp
