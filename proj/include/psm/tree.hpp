#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "psm/scene.hpp"
#include "psm/types.hpp"

namespace psm {

inline constexpr int kNoParent = -1;

struct TreeNode {
  Configuration q;
  int parent = kNoParent;
  double cost = 0.0;  // path length from q_start
  int manifold = 0;   // manifold the node is extended on (intersection nodes carry the next index)
  bool synthetic_root = false;
  int source = -1;  // for subtree seeds: id of the same configuration in the previous subtree
  std::vector<int> children;
};

// Search tree with parent links and cost-to-root bookkeeping. Synthetic
// roots carry no configuration and are invisible to nearest/near.
class Tree {
 public:
  int add_root(const Configuration& q, int manifold, double cost = 0.0);
  int add_synthetic_root();
  int add_node(const Configuration& q, int parent, double cost, int manifold);

  const TreeNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  TreeNode& node(int id) { return nodes_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(nodes_.size()); }
  // Number of non-synthetic nodes, |V|.
  int num_real() const { return real_count_; }
  bool has_real_parent(int id) const;

  // Re-parents `id` and recomputes costs of its whole subtree.
  void rewire(int id, int new_parent);

  // Exact Euclidean nearest real node accepted by `accept`; lowest id wins ties.
  template <typename Pred>
  int nearest(const Configuration& q, Pred&& accept) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i) {
      const TreeNode& n = nodes_[static_cast<std::size_t>(i)];
      if (n.synthetic_root || !accept(n)) continue;
      const double d = (n.q - q).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best < 0) throw std::logic_error("nearest: tree has no eligible nodes");
    return best;
  }
  int nearest(const Configuration& q) const {
    return nearest(q, [](const TreeNode&) { return true; });
  }

  // Real nodes strictly within `radius` of q, in increasing id order.
  template <typename Pred>
  std::vector<int> near(const Configuration& q, double radius, Pred&& accept) const {
    std::vector<int> out;
    const double r2 = radius * radius;
    for (int i = 0; i < size(); ++i) {
      const TreeNode& n = nodes_[static_cast<std::size_t>(i)];
      if (n.synthetic_root || !accept(n)) continue;
      if ((n.q - q).squaredNorm() < r2) out.push_back(i);
    }
    return out;
  }
  std::vector<int> near(const Configuration& q, double radius) const {
    return near(q, radius, [](const TreeNode&) { return true; });
  }

 private:
  std::vector<TreeNode> nodes_;
  int real_count_ = 0;
};

struct ExtendParams {
  double gamma = 24.0;
  double alpha = 1.0;
  int dim = 3;
  double collision_step = 0.05;
};

// Neighborhood radius min{gamma (log|V| / |V|)^(1/k), alpha}.
double rewire_radius(const ExtendParams& params, int num_nodes);

// RRT* extend: inserts q_new under the cheapest collision-free neighbor and
// rewires neighbors through it. Parent candidates share q_near's manifold
// index; neighbors are rewired only when `manifold` equals that index.
// Returns the new node id, or -1 when q_near -> q_new collides.
int rrt_star_extend(Tree& tree, int near_id, const Configuration& q_new, const FreeSpaceState& fs,
                    const ExtendParams& params, int manifold);

inline int rrt_star_extend(Tree& tree, int near_id, const Configuration& q_new, const FreeSpaceState& fs,
                           const ExtendParams& params) {
  return rrt_star_extend(tree, near_id, q_new, fs, params, tree.node(near_id).manifold);
}

}  // namespace psm
