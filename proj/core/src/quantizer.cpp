#include "pathrules/quantizer.hpp"

#include <algorithm>
#include <limits>

namespace pathrules {

QuantizerTree::QuantizerTree(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw InvalidArgument("quantizer: dimension must be >= 1");
  nodes_.push_back(Node{});
}

std::size_t QuantizerTree::leaf_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.kind == Node::Kind::Leaf; }));
}

std::size_t QuantizerTree::leaf_of(std::span<const double> point) const {
  if (point.size() != dimension_) throw InvalidArgument("quantizer: dimension mismatch");
  std::size_t at = 0;
  for (;;) {
    const Node& node = nodes_[at];
    switch (node.kind) {
      case Node::Kind::Leaf:
        return at;
      case Node::Kind::Axis:
        at = node.children[point[node.axis] <= node.threshold ? 0 : 1];
        break;
      case Node::Kind::Centroids: {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < node.centroids.size(); ++c) {
          double d = 0.0;
          for (std::size_t k = 0; k < dimension_; ++k) {
            const double diff = point[k] - node.centroids[c][k];
            d += diff * diff;
          }
          if (d < best_d) {
            best_d = d;
            best = c;
          }
        }
        at = node.children[best];
        break;
      }
    }
  }
}

std::size_t QuantizerTree::quantize(std::span<const double> point) const { return nodes_[leaf_of(point)].state; }

std::vector<std::size_t> QuantizerTree::leaves_of(std::size_t state) const {
  if (state >= state_count_) throw InvalidArgument("quantizer: no such state");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].kind == Node::Kind::Leaf && nodes_[i].state == state) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> QuantizerTree::target_leaves(std::size_t state,
                                                     const std::vector<std::size_t>& only_leaves) const {
  auto leaves = leaves_of(state);
  if (only_leaves.empty()) return leaves;
  std::vector<std::size_t> out;
  for (std::size_t leaf : leaves) {
    if (std::find(only_leaves.begin(), only_leaves.end(), leaf) != only_leaves.end()) out.push_back(leaf);
  }
  if (out.empty()) throw InvalidArgument("quantizer: none of the given leaves belongs to the state");
  return out;
}

void QuantizerTree::split_by_centroids(std::size_t state, const std::vector<std::vector<double>>& centroids,
                                       const std::vector<std::size_t>& new_states,
                                       const std::vector<std::size_t>& only_leaves) {
  if (centroids.size() < 2 || centroids.size() != new_states.size()) {
    throw InvalidArgument("quantizer: need matching centroid and state lists of size >= 2");
  }
  for (const auto& c : centroids) {
    if (c.size() != dimension_) throw InvalidArgument("quantizer: centroid dimension mismatch");
  }
  for (std::size_t leaf : target_leaves(state, only_leaves)) {
    std::vector<std::size_t> children;
    for (std::size_t s : new_states) {
      Node child;
      child.state = s;
      nodes_.push_back(std::move(child));
      children.push_back(nodes_.size() - 1);
    }
    Node& node = nodes_[leaf];
    node.kind = Node::Kind::Centroids;
    node.centroids = centroids;
    node.children = std::move(children);
  }
  state_count_ = std::max(state_count_, *std::max_element(new_states.begin(), new_states.end()) + 1);
}

void QuantizerTree::split_by_axis(std::size_t state, std::size_t axis, double threshold, std::size_t low_state,
                                  std::size_t high_state, const std::vector<std::size_t>& only_leaves) {
  if (axis >= dimension_) throw InvalidArgument("quantizer: axis out of range");
  for (std::size_t leaf : target_leaves(state, only_leaves)) {
    Node low;
    low.state = low_state;
    Node high;
    high.state = high_state;
    nodes_.push_back(std::move(low));
    nodes_.push_back(std::move(high));
    Node& node = nodes_[leaf];
    node.kind = Node::Kind::Axis;
    node.axis = axis;
    node.threshold = threshold;
    node.children = {nodes_.size() - 2, nodes_.size() - 1};
  }
  state_count_ = std::max({state_count_, low_state + 1, high_state + 1});
}

void QuantizerTree::relabel(const std::vector<std::size_t>& mapping, std::size_t new_count) {
  if (mapping.size() != state_count_) throw InvalidArgument("quantizer: relabel mapping size mismatch");
  for (auto& node : nodes_) {
    if (node.kind == Node::Kind::Leaf) node.state = mapping[node.state];
  }
  state_count_ = new_count;
}

}  // namespace pathrules
