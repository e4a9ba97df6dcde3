#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mdsp/errors.hpp"
#include "mdsp/linalg.hpp"
#include "mdsp/rational.hpp"

namespace mdsp {

// Basis file format:
//
//   # comment lines and trailing comments start with '#'
//   m n
//   a_11 ... a_1n
//   ...
//   a_m1 ... a_mn
//
// Tokens are integers or "p/q". Blank lines are ignored. Each row is one
// lattice vector.
inline QMatrix parse_basis_file(std::string_view text) {
  struct Token {
    std::string_view text;
    std::size_t column;
  };
  std::vector<std::pair<std::size_t, std::vector<Token>>> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      toks.push_back({line.substr(i, j - i), i + 1});
      i = j;
    }
    if (!toks.empty()) lines.emplace_back(line_no, std::move(toks));
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (lines.empty()) throw ParseError("missing header", line_no, 1);

  auto dimension = [](const Token& t, std::size_t ln) {
    auto q = parse_rational(t.text);
    if (!q || !is_integral(*q) || *q < 1 || !q->get_num().fits_ulong_p())
      throw ParseError("expected a positive integer, got '" + std::string(t.text) + "'", ln, t.column);
    return static_cast<std::size_t>(q->get_num().get_ui());
  };
  const auto& [hline, header] = lines.front();
  if (header.size() != 2) throw ParseError("header must be 'm n'", hline, header.size() > 2 ? header[2].column : 1);
  const std::size_t m = dimension(header[0], hline);
  const std::size_t n = dimension(header[1], hline);

  QMatrix out(m, n);
  if (lines.size() - 1 < m)
    throw ParseError("expected " + std::to_string(m) + " rows, found " + std::to_string(lines.size() - 1),
                     line_no, 1);
  if (lines.size() - 1 > m) {
    const auto& [ln, toks] = lines[m + 1];
    throw ParseError("unexpected extra row", ln, toks.front().column);
  }
  for (std::size_t r = 0; r < m; ++r) {
    const auto& [ln, toks] = lines[r + 1];
    if (toks.size() != n) {
      const std::size_t col = toks.size() > n ? toks[n].column : toks.back().column + toks.back().text.size();
      throw ParseError("expected " + std::to_string(n) + " tokens, found " + std::to_string(toks.size()), ln,
                       col);
    }
    for (std::size_t c = 0; c < n; ++c) {
      auto q = parse_rational(toks[c].text);
      if (!q) throw ParseError("bad rational '" + std::string(toks[c].text) + "'", ln, toks[c].column);
      out(r, c) = *q;
    }
  }
  return out;
}

inline std::string serialize_basis(const QMatrix& m) {
  std::ostringstream os;
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << to_string(m(r, c));
    os << '\n';
  }
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline QMatrix load_basis_file(const std::string& path) { return parse_basis_file(read_file(path)); }

// Square integer matrix with entries uniform in [-entry_bound, entry_bound],
// redrawn until nonsingular. Rows are the basis vectors.
inline QMatrix generate_random_basis(std::size_t dim, long entry_bound, std::uint64_t seed) {
  if (dim < 2) throw InvalidArgument("dim must be at least 2");
  if (entry_bound < 1 || entry_bound > (1L << 62)) throw InvalidArgument("entry_bound must lie in [1, 2^62]");
  std::mt19937_64 rng(seed);
  // std::uniform_int_distribution is implementation defined; plain rejection
  // on the engine output keeps fixtures identical across standard libraries.
  const std::uint64_t span = 2 * static_cast<std::uint64_t>(entry_bound) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / span * span;
  auto draw = [&]() -> long {
    std::uint64_t u;
    do u = rng();
    while (u >= limit);
    return static_cast<long>(u % span) - entry_bound;
  };
  while (true) {
    QMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) m(r, c) = draw();
    if (determinant(m) != 0) return m;
  }
}

}  // namespace mdsp
