#include "morphdecomp/probcore.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "morphdecomp/errors.hpp"

namespace morphdecomp {

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

template <std::size_t N>
std::array<double, N> validated(const std::array<double, N>& in, const char* what) {
  double sum = 0.0;
  for (double v : in) {
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream os;
      os << what << ": entries must be finite and nonnegative (got " << v << ")";
      throw NormalizationError(os.str());
    }
    sum += v;
  }
  const double defect = std::abs(sum - 1.0);
  if (defect > kRenormTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": entries sum to " << sum << ", not 1";
    throw NormalizationError(os.str());
  }
  std::array<double, N> out = in;
  if (defect > kNormTolerance) {
    for (double& v : out) v /= sum;
  }
  return out;
}

// Index of cell `idx` of a Pmf3 within the marginal on `keep`.
std::size_t project(std::size_t idx, AxisSet keep) {
  std::size_t out = 0;
  for (Axis a : kAllAxes) {
    if (!keep.contains(a)) continue;
    out = (out << 1) | ((idx >> (2 - static_cast<unsigned>(a))) & 1u);
  }
  return out;
}

void require_distinct(Axis a, Axis b, Axis c) {
  if (a == b || a == c || b == c) {
    throw ArgumentError("conditional mutual information needs three distinct axes");
  }
}

}  // namespace

char axis_name(Axis a) noexcept {
  switch (a) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  return '?';
}

std::vector<Axis> AxisSet::axes() const {
  std::vector<Axis> out;
  for (Axis a : kAllAxes)
    if (contains(a)) out.push_back(a);
  return out;
}

std::size_t binary_index(int v) {
  if (v == -1) return 0;
  if (v == +1) return 1;
  throw ArgumentError("binary variables take values in {-1,+1}, got " + std::to_string(v));
}

Pmf3::Pmf3(const Cells& cells) : p_(validated(cells, "Pmf3")) {}

Pmf3 Pmf3::uniform() {
  Cells c;
  c.fill(1.0 / kCells);
  return Pmf3(c);
}

double Pmf3::operator()(int x, int y, int z) const {
  return p_[index(binary_index(x), binary_index(y), binary_index(z))];
}

Pmf2::Pmf2(const Cells& cells) : p_(validated(cells, "Pmf2")) {}

double Pmf2::operator()(int a, int b) const { return p_[2 * binary_index(a) + binary_index(b)]; }

double entropy(std::span<const double> d) {
  double sum = 0.0;
  for (double v : d) {
    if (!std::isfinite(v) || v < 0.0) throw NormalizationError("entropy: negative or non-finite probability");
    sum += v;
  }
  if (d.empty() || std::abs(sum - 1.0) > kRenormTolerance) {
    throw NormalizationError("entropy: distribution is not normalized");
  }
  double h = 0.0;
  for (double v : d) h -= plogp(v);
  return h > 0.0 ? h : 0.0;
}

Marginal marginalize(const Pmf3& P, AxisSet keep) {
  if (keep.empty()) throw ArgumentError("marginalize: keep-set must not be empty");
  Marginal m{keep, std::vector<double>(std::size_t{1} << keep.size(), 0.0)};
  for (std::size_t i = 0; i < Pmf3::kCells; ++i) m.p[project(i, keep)] += P.cell(i);
  return m;
}

Pmf2 marginal_pair(const Pmf3& P, Axis first, Axis second) {
  if (first == second) throw ArgumentError("marginal_pair: axes must differ");
  Pmf2::Cells c{};
  for (std::size_t i = 0; i < Pmf3::kCells; ++i) {
    const std::size_t a = binary_index(Pmf3::value_at(i, first));
    const std::size_t b = binary_index(Pmf3::value_at(i, second));
    c[2 * a + b] += P.cell(i);
  }
  return Pmf2(c);
}

double joint_entropy(const Pmf3& P, AxisSet axes) {
  if (axes.empty()) return 0.0;
  const Marginal m = marginalize(P, axes);
  double h = 0.0;
  for (double v : m.p) h -= plogp(v);
  return h;
}

double mutual_information(const Pmf3& P, Axis target, AxisSet sources) {
  if (sources.empty()) throw ArgumentError("mutual_information: empty source set");
  if (sources.contains(target)) throw ArgumentError("mutual_information: target overlaps sources");
  const double mi =
      joint_entropy(P, target) + joint_entropy(P, sources) - joint_entropy(P, sources | target);
  return mi > 0.0 ? mi : 0.0;
}

double conditional_mutual_information(const Pmf3& P, Axis target, Axis source, Axis given) {
  require_distinct(target, source, given);
  const double cmi = joint_entropy(P, {target, given}) + joint_entropy(P, {source, given}) -
                     joint_entropy(P, AxisSet::all()) - joint_entropy(P, given);
  return cmi > 0.0 ? cmi : 0.0;
}

double co_information(const Pmf3& P) {
  return mutual_information(P, Axis::X, Axis::Y) -
         conditional_mutual_information(P, Axis::X, Axis::Y, Axis::Z);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ArgumentError("kl_divergence: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) throw FeasibilityError("kl_divergence: p > 0 where q = 0");
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return d > 0.0 ? d : 0.0;
}

double weighted_kl_cmi(const Pmf3& P, Axis target, Axis source, Axis given) {
  require_distinct(target, source, given);
  double total = 0.0;
  for (std::size_t sb = 0; sb < 2; ++sb) {
    for (std::size_t gb = 0; gb < 2; ++gb) {
      std::array<double, 2> joint_sg{};  // p(t, s, g) over t
      std::array<double, 2> joint_g{};   // p(t, g) over t
      for (std::size_t i = 0; i < Pmf3::kCells; ++i) {
        const std::size_t tb = binary_index(Pmf3::value_at(i, target));
        if (binary_index(Pmf3::value_at(i, given)) != gb) continue;
        joint_g[tb] += P.cell(i);
        if (binary_index(Pmf3::value_at(i, source)) == sb) joint_sg[tb] += P.cell(i);
      }
      const double p_sg = joint_sg[0] + joint_sg[1];
      const double p_g = joint_g[0] + joint_g[1];
      if (p_sg <= 0.0) continue;
      const std::array<double, 2> cond{joint_sg[0] / p_sg, joint_sg[1] / p_sg};
      const std::array<double, 2> ref{joint_g[0] / p_g, joint_g[1] / p_g};
      total += p_sg * kl_divergence(cond, ref);
    }
  }
  return total;
}

}  // namespace morphdecomp
