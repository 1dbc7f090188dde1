#include "vortlab/subgroups.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace vortlab {

namespace {

constexpr std::array<std::pair<GroupElement, const char*>, 4> kLetters{
    {{kElementP, "p"}, {kElementQ, "q"}, {kElementE1, "e1"}, {kElementE2, "e2"}}};

void check_element(GroupElement e) {
  if (e >= kGroupOrder) throw std::invalid_argument("group element mask out of range");
}

struct Table {
  std::array<CoefficientMap, kGroupOrder> maps{};
  std::array<std::array<GroupElement, kGroupOrder>, kGroupOrder> product{};

  Table() {
    for (std::size_t e = 0; e < kGroupOrder; ++e) {
      CoefficientMap m;
      for (const auto& [bit, name] : kLetters) {
        if (e & bit) m = m.compose(induced_symmetry(name));
      }
      maps[e] = m;
    }
    for (std::size_t a = 0; a < kGroupOrder; ++a) {
      for (std::size_t b = 0; b < kGroupOrder; ++b) {
        const CoefficientMap ab = maps[a].compose(maps[b]);
        const auto it = std::find(maps.begin(), maps.end(), ab);
        if (it == maps.end()) throw std::logic_error("group table: product not in the group");
        product[a][b] = static_cast<GroupElement>(it - maps.begin());
      }
    }
  }
};

const Table& table() {
  static const Table t;
  return t;
}

std::vector<GroupElement> closure(std::vector<GroupElement> set) {
  set.push_back(0);
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  bool grown = true;
  while (grown) {
    grown = false;
    const auto current = set;
    for (auto a : current) {
      for (auto b : current) {
        const GroupElement ab = multiply(a, b);
        if (!std::binary_search(set.begin(), set.end(), ab)) {
          set.insert(std::lower_bound(set.begin(), set.end(), ab), ab);
          grown = true;
        }
      }
    }
  }
  return set;
}

std::string format_coefficient(double c) {
  std::ostringstream os;
  os << std::setprecision(12) << c;
  return os.str();
}

}  // namespace

CoefficientMap element_map(GroupElement element) {
  check_element(element);
  return table().maps[element];
}

std::string element_name(GroupElement element) {
  check_element(element);
  if (element == 0) return "1";
  std::string out;
  for (const auto& [bit, name] : kLetters) {
    if (element & bit) out += name;
  }
  return out;
}

GroupElement parse_element(std::string_view word) {
  if (word == "1") return 0;
  if (word.empty()) throw std::invalid_argument("empty group element");
  GroupElement e = 0;
  std::size_t i = 0;
  while (i < word.size()) {
    GroupElement bit = 0;
    if (word[i] == 'p') {
      bit = kElementP;
      i += 1;
    } else if (word[i] == 'q') {
      bit = kElementQ;
      i += 1;
    } else if (word.substr(i, 2) == "e1") {
      bit = kElementE1;
      i += 2;
    } else if (word.substr(i, 2) == "e2") {
      bit = kElementE2;
      i += 2;
    } else if (word.substr(i, 2) == "e3") {
      throw std::invalid_argument("group element '" + std::string(word) +
                                  "': e3 acts on time and is not part of the reduction group");
    } else {
      throw std::invalid_argument("group element '" + std::string(word) + "': unknown letter at " +
                                  std::to_string(i));
    }
    e = multiply(e, bit);
  }
  return e;
}

GroupElement multiply(GroupElement a, GroupElement b) {
  check_element(a);
  check_element(b);
  return table().product[a][b];
}

// ---------------------------------------------------------------------------

Subgroup::Subgroup(std::vector<GroupElement> elements) : elements_(std::move(elements)) {
  std::vector<GroupElement> span{0};
  for (GroupElement e = 1; e < kGroupOrder; ++e) {
    if (!contains(e) || std::binary_search(span.begin(), span.end(), e)) continue;
    generators_.push_back(e);
    span = closure(generators_);
  }
}

Subgroup Subgroup::generated_by(const std::vector<GroupElement>& generators) {
  for (auto g : generators) check_element(g);
  return Subgroup(closure(generators));
}

Subgroup Subgroup::from_word(std::string_view words) {
  std::vector<GroupElement> gens;
  std::size_t start = 0;
  while (start <= words.size()) {
    const std::size_t comma = words.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? words.size() : comma;
    std::string_view token = words.substr(start, end - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) {
      gens.push_back(parse_element(token));
    } else if (comma != std::string_view::npos || !words.empty()) {
      if (words.find_first_not_of(' ') != std::string_view::npos) {
        throw std::invalid_argument("subgroup word '" + std::string(words) + "': empty element");
      }
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return generated_by(gens);
}

bool Subgroup::contains(GroupElement e) const noexcept {
  return std::binary_search(elements_.begin(), elements_.end(), e);
}

std::string Subgroup::word() const {
  if (generators_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (i) out += ",";
    out += element_name(generators_[i]);
  }
  return out;
}

std::vector<CoefficientMap> Subgroup::maps() const {
  std::vector<CoefficientMap> out;
  for (auto e : elements_) out.push_back(element_map(e));
  return out;
}

Subgroup lorenz_subgroup() { return Subgroup::from_word("pqe1,pqe2,e1e2"); }

std::vector<Subgroup> enumerate_subgroups() {
  std::vector<Subgroup> out;
  // Subsets of the non-identity elements; the identity is always included.
  for (std::uint32_t mask = 0; mask < (1u << (kGroupOrder - 1)); ++mask) {
    std::vector<GroupElement> set{0};
    for (std::size_t i = 1; i < kGroupOrder; ++i) {
      if (mask & (1u << (i - 1))) set.push_back(static_cast<GroupElement>(i));
    }
    bool closed = true;
    for (auto a : set) {
      for (auto b : set) {
        if (!std::binary_search(set.begin(), set.end(), multiply(a, b))) {
          closed = false;
          break;
        }
      }
      if (!closed) break;
    }
    if (closed) out.push_back(Subgroup::generated_by(set));
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements() < b.elements();
  });
  return out;
}

// ---------------------------------------------------------------------------

double FixedSubspace::distance(const Eigen::VectorXd& real) const {
  if (basis.cols() == 0) return real.norm();
  return (real - basis * (basis.transpose() * real)).norm();
}

FixedSubspace fixed_subspace(const Subgroup& subgroup, const TruncationPtr& truncation) {
  if (!truncation) throw std::invalid_argument("fixed_subspace: missing truncation");
  const auto n = static_cast<Eigen::Index>(truncation->real_dimension());
  std::vector<Eigen::MatrixXd> blocks;
  for (auto e : subgroup.elements()) {
    if (e == 0) continue;
    blocks.push_back(element_map(e).real_matrix(truncation) - Eigen::MatrixXd::Identity(n, n));
  }
  Eigen::MatrixXd system(static_cast<Eigen::Index>(blocks.size()) * n, n);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    system.middleRows(static_cast<Eigen::Index>(b) * n, n) = blocks[b];
  }

  // Row reduction choosing pivots from the last column backwards, so that
  // constraints solve for later coordinates in terms of earlier ones.
  constexpr double kZero = 1e-12;
  std::vector<Eigen::Index> pivot_columns;
  Eigen::Index row = 0;
  for (Eigen::Index col = n - 1; col >= 0 && row < system.rows(); --col) {
    Eigen::Index best = row;
    for (Eigen::Index r = row; r < system.rows(); ++r) {
      if (std::abs(system(r, col)) > std::abs(system(best, col))) best = r;
    }
    if (std::abs(system(best, col)) <= kZero) continue;
    system.row(row).swap(system.row(best));
    system.row(row) /= system(row, col);
    for (Eigen::Index r = 0; r < system.rows(); ++r) {
      if (r != row && system(r, col) != 0.0) system.row(r) -= system(r, col) * system.row(row);
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      if (std::abs(system(row, c)) <= kZero) system(row, c) = 0.0;
    }
    pivot_columns.push_back(col);
    ++row;
  }

  FixedSubspace out;
  for (Eigen::Index c = 0; c < n; ++c) {
    if (std::find(pivot_columns.begin(), pivot_columns.end(), c) == pivot_columns.end()) {
      out.free_coordinates.push_back(static_cast<std::size_t>(c));
    }
  }
  const auto d = static_cast<Eigen::Index>(out.free_coordinates.size());
  out.parametrization = Eigen::MatrixXd::Zero(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto fc = static_cast<Eigen::Index>(out.free_coordinates[static_cast<std::size_t>(j)]);
    out.parametrization(fc, j) = 1.0;
    for (std::size_t r = 0; r < pivot_columns.size(); ++r) {
      out.parametrization(pivot_columns[r], j) = -system(static_cast<Eigen::Index>(r), fc);
    }
  }

  // Constraints listed in coordinate order.
  std::vector<std::pair<Eigen::Index, std::string>> constraints;
  for (std::size_t r = 0; r < pivot_columns.size(); ++r) {
    const Eigen::Index pc = pivot_columns[r];
    std::string rhs;
    for (std::size_t j = 0; j < out.free_coordinates.size(); ++j) {
      const double c = -system(static_cast<Eigen::Index>(r),
                               static_cast<Eigen::Index>(out.free_coordinates[j]));
      if (c == 0.0) continue;
      const std::string name = truncation->coordinate_name(out.free_coordinates[j]);
      std::string term;
      if (c == 1.0) term = name;
      else if (c == -1.0) term = "-" + name;
      else term = format_coefficient(c) + "*" + name;
      if (rhs.empty()) rhs = term;
      else if (term.front() == '-') rhs += " - " + term.substr(1);
      else rhs += " + " + term;
    }
    constraints.emplace_back(pc, truncation->coordinate_name(static_cast<std::size_t>(pc)) + " = " +
                                     (rhs.empty() ? "0" : rhs));
  }
  std::sort(constraints.begin(), constraints.end());
  for (auto& c : constraints) out.constraints.push_back(std::move(c.second));

  if (d > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(out.parametrization);
    out.basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, d);
  } else {
    out.basis = Eigen::MatrixXd::Zero(n, 0);
  }
  return out;
}

}  // namespace vortlab
