#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pathrules/error.hpp"

namespace pathrules {

/// Raised when a region cannot be divided: all of its points share one
/// outcome group or are geometrically identical.
class Unsplittable : public Error {
 public:
  using Error::Error;
};

/// Total map from hidden-state vectors to discrete machine states, stored as
/// a tree. Internal nodes route a vector either to the child of its nearest
/// centroid (ties to the lowest index) or by a single-coordinate threshold.
/// Several leaves may carry the same state id once states are merged; state
/// ids are dense in [0, state_count()).
class QuantizerTree {
 public:
  struct Node {
    enum class Kind { Leaf, Centroids, Axis };
    Kind kind = Kind::Leaf;
    std::size_t state = 0;                       // Leaf
    std::vector<std::vector<double>> centroids;  // Centroids
    std::size_t axis = 0;                        // Axis: value <= threshold -> children[0]
    double threshold = 0.0;
    std::vector<std::size_t> children;
  };

  /// One leaf covering the whole space, state 0.
  explicit QuantizerTree(std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t state_count() const noexcept { return state_count_; }
  std::size_t leaf_count() const noexcept;
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

  std::size_t quantize(std::span<const double> point) const;
  /// Index of the leaf node reached by `point`.
  std::size_t leaf_of(std::span<const double> point) const;

  /// Turns the leaves of `state` into nearest-centroid nodes with one child
  /// per centroid. Child j carries new_states[j]; the state count grows to
  /// cover the new ids. A non-empty `only_leaves` restricts the split to
  /// those leaves of the state.
  void split_by_centroids(std::size_t state, const std::vector<std::vector<double>>& centroids,
                          const std::vector<std::size_t>& new_states, const std::vector<std::size_t>& only_leaves = {});
  void split_by_axis(std::size_t state, std::size_t axis, double threshold, std::size_t low_state,
                     std::size_t high_state, const std::vector<std::size_t>& only_leaves = {});

  /// Renames states: leaf state s becomes mapping[s]; mapping must be onto
  /// [0, new_count).
  void relabel(const std::vector<std::size_t>& mapping, std::size_t new_count);

 private:
  std::vector<std::size_t> leaves_of(std::size_t state) const;
  std::vector<std::size_t> target_leaves(std::size_t state, const std::vector<std::size_t>& only_leaves) const;

  std::size_t dimension_;
  std::size_t state_count_ = 1;
  std::vector<Node> nodes_;
};

}  // namespace pathrules
