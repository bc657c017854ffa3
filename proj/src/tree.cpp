#include "psm/tree.hpp"

namespace psm {

int Tree::add_root(const Configuration& q, int manifold, double cost) {
  TreeNode n;
  n.q = q;
  n.cost = cost;
  n.manifold = manifold;
  nodes_.push_back(std::move(n));
  ++real_count_;
  return size() - 1;
}

int Tree::add_synthetic_root() {
  TreeNode n;
  n.synthetic_root = true;
  nodes_.push_back(std::move(n));
  return size() - 1;
}

int Tree::add_node(const Configuration& q, int parent, double cost, int manifold) {
  if (parent < 0 || parent >= size()) throw std::invalid_argument("add_node: invalid parent");
  TreeNode n;
  n.q = q;
  n.parent = parent;
  n.cost = cost;
  n.manifold = manifold;
  nodes_.push_back(std::move(n));
  const int id = size() - 1;
  nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
  ++real_count_;
  return id;
}

bool Tree::has_real_parent(int id) const {
  const TreeNode& n = node(id);
  return n.parent != kNoParent && !node(n.parent).synthetic_root;
}

void Tree::rewire(int id, int new_parent) {
  TreeNode& n = node(id);
  if (n.parent != kNoParent) std::erase(node(n.parent).children, id);
  n.parent = new_parent;
  node(new_parent).children.push_back(id);

  std::vector<int> stack{id};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    TreeNode& c = node(cur);
    const TreeNode& p = node(c.parent);
    c.cost = p.cost + (c.q - p.q).norm();
    stack.insert(stack.end(), c.children.begin(), c.children.end());
  }
}

double rewire_radius(const ExtendParams& params, int num_nodes) {
  if (num_nodes <= 1) return 0.0;
  const double n = static_cast<double>(num_nodes);
  return std::min(params.gamma * std::pow(std::log(n) / n, 1.0 / params.dim), params.alpha);
}

int rrt_star_extend(Tree& tree, int near_id, const Configuration& q_new, const FreeSpaceState& fs,
                    const ExtendParams& params, int manifold) {
  const Configuration& q_near = tree.node(near_id).q;
  if (!collision_free_segment(q_near, q_new, fs, params.collision_step)) return -1;

  const int parent_manifold = tree.node(near_id).manifold;
  auto same_manifold = [parent_manifold](const TreeNode& n) { return n.manifold == parent_manifold; };
  const std::vector<int> neighbors = tree.near(q_new, rewire_radius(params, tree.num_real()), same_manifold);

  int best = near_id;
  double best_cost = tree.node(near_id).cost + (q_new - q_near).norm();
  for (int id : neighbors) {
    if (id == near_id) continue;
    const TreeNode& cand = tree.node(id);
    const double c = cand.cost + (q_new - cand.q).norm();
    if (c < best_cost && collision_free_segment(cand.q, q_new, fs, params.collision_step)) {
      best = id;
      best_cost = c;
    }
  }
  const int new_id = tree.add_node(q_new, best, best_cost, manifold);

  if (manifold != parent_manifold) return new_id;
  for (int id : neighbors) {
    if (id == best) continue;
    const double via = tree.node(new_id).cost + (tree.node(id).q - q_new).norm();
    if (via < tree.node(id).cost && collision_free_segment(q_new, tree.node(id).q, fs, params.collision_step))
      tree.rewire(id, new_id);
  }
  return new_id;
}

}  // namespace psm
