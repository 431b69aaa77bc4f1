#include "morphdecomp/io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

#include "morphdecomp/errors.hpp"

namespace morphdecomp {

namespace {

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<double> to_double(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

std::optional<int> to_binary(std::string_view tok) {
  if (tok == "-1") return -1;
  if (tok == "1" || tok == "+1") return +1;
  return std::nullopt;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

Pmf3 parse_pmf3(std::istream& in) {
  Pmf3::Cells cells{};
  std::array<bool, Pmf3::kCells> seen{};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto tok = split_ws(body);
    if (tok.size() != 4) throw ParseError(lineno, "expected `x y z p`, got " + std::to_string(tok.size()) + " fields");
    std::array<std::size_t, 3> bits{};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto v = to_binary(tok[k]);
      if (!v) throw ParseError(lineno, "coordinate `" + std::string(tok[k]) + "` is not -1 or +1");
      bits[k] = binary_index(*v);
    }
    const auto p = to_double(tok[3]);
    if (!p) throw ParseError(lineno, "probability `" + std::string(tok[3]) + "` is not a number");
    const std::size_t idx = Pmf3::index(bits[0], bits[1], bits[2]);
    if (seen[idx]) throw ParseError(lineno, "duplicate cell");
    seen[idx] = true;
    cells[idx] = *p;
  }
  if (in.bad()) throw IoError("read error");
  return Pmf3(cells);
}

Pmf3 read_pmf3(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_pmf3(in);
}

std::string format_pmf3(const Pmf3& P) {
  std::string out = "# x y z p\n";
  char buf[96];
  for (std::size_t i = 0; i < Pmf3::kCells; ++i) {
    std::snprintf(buf, sizeof buf, "%+d %+d %+d %.17g\n", Pmf3::value_at(i, Axis::X), Pmf3::value_at(i, Axis::Y),
                  Pmf3::value_at(i, Axis::Z), P.cell(i));
    out += buf;
  }
  return out;
}

ModelParams parse_model_config(std::istream& in) {
  ModelParams params;
  params.zeta = kDeterministicZeta;
  const std::array<std::pair<std::string_view, double ModelParams::*>, 6> keys{{
      {"phi", &ModelParams::phi},
      {"psi", &ModelParams::psi},
      {"omega", &ModelParams::omega},
      {"zeta", &ModelParams::zeta},
      {"mu", &ModelParams::mu},
      {"tau", &ModelParams::tau},
  }};
  std::array<bool, 6> seen{};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "expected `key = value`");
    const std::string_view key = trim(body.substr(0, eq));
    const std::string_view value = trim(body.substr(eq + 1));
    std::size_t k = 0;
    while (k < keys.size() && keys[k].first != key) ++k;
    if (k == keys.size()) throw ParseError(lineno, "unknown key `" + std::string(key) + "`");
    if (seen[k]) throw ParseError(lineno, "duplicate key `" + std::string(key) + "`");
    const auto v = to_double(value);
    if (!v) throw ParseError(lineno, "value `" + std::string(value) + "` is not a number");
    seen[k] = true;
    params.*(keys[k].second) = *v;
  }
  if (in.bad()) throw IoError("read error");
  return params;
}

ModelParams read_model_config(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_model_config(in);
}

}  // namespace morphdecomp
