#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vortlab/spectral.hpp"

namespace vortlab {

/// Element of the group generated by {p, q, e1, e2}, as a bit mask
/// (p = 1, q = 2, e1 = 4, e2 = 8). 0 is the identity.
using GroupElement = std::uint8_t;

inline constexpr GroupElement kElementP = 1;
inline constexpr GroupElement kElementQ = 2;
inline constexpr GroupElement kElementE1 = 4;
inline constexpr GroupElement kElementE2 = 8;
inline constexpr std::size_t kGroupOrder = 16;

/// Composite map of an element, built from the generators.
CoefficientMap element_map(GroupElement element);
/// "1", "p", "pq", "pqe1", "e1e2", ... (letter order p, q, e1, e2).
std::string element_name(GroupElement element);
/// Accepts any letter order, e.g. "e1qp". "e3" is rejected because it acts on time.
GroupElement parse_element(std::string_view word);
/// Group product computed by composing coefficient maps.
GroupElement multiply(GroupElement a, GroupElement b);

class Subgroup {
 public:
  /// Closure of the given elements; throws std::invalid_argument for masks >= 16.
  static Subgroup generated_by(const std::vector<GroupElement>& generators);
  /// Comma-separated generator words, e.g. "pqe1,pqe2"; "1" or "" is trivial.
  static Subgroup from_word(std::string_view words);

  const std::vector<GroupElement>& elements() const noexcept { return elements_; }
  /// Canonical generating set: greedy over increasing masks.
  const std::vector<GroupElement>& generators() const noexcept { return generators_; }
  std::size_t order() const noexcept { return elements_.size(); }
  bool contains(GroupElement e) const noexcept;
  /// Canonical word, "1" for the trivial subgroup.
  std::string word() const;
  std::vector<CoefficientMap> maps() const;

  bool operator==(const Subgroup& other) const noexcept { return elements_ == other.elements_; }

 private:
  explicit Subgroup(std::vector<GroupElement> elements);
  std::vector<GroupElement> elements_;
  std::vector<GroupElement> generators_;
};

/// {1, pqe1, pqe2, e1e2}
Subgroup lorenz_subgroup();

/// Every subgroup, by brute-force closure over subsets, ordered by
/// (order, element masks).
std::vector<Subgroup> enumerate_subgroups();

struct FixedSubspace {
  Eigen::MatrixXd basis;            // orthonormal columns
  Eigen::MatrixXd parametrization;  // columns: free coordinate -> full state
  std::vector<std::size_t> free_coordinates;
  std::vector<std::string> constraints;  // e.g. "B[0,1] = 0", "A[1,1] = -A[1,-1]"

  std::size_t dimension() const noexcept { return free_coordinates.size(); }
  /// Euclidean distance of a real state from the subspace.
  double distance(const Eigen::VectorXd& real) const;
};

/// Solves v = sigma(v) for all sigma in S over the real coordinates. Throws
/// std::domain_error when some map leaves the truncation.
FixedSubspace fixed_subspace(const Subgroup& subgroup, const TruncationPtr& truncation);

}  // namespace vortlab
