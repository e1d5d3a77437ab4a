// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#pragma once

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

namespace gridshift {

/// Dinic max-flow on real-valued capacities. Deterministic: arcs are
/// explored in insertion order. The level/blocking-flow structure bounds the
/// number of augmentations combinatorially, so fractional capacities are
/// safe.
class MaxFlow {
 public:
  explicit MaxFlow(int n_nodes) : head_(n_nodes) {}

  static constexpr double kEps = 1e-11;

  /// Adds arc u->v with the given capacity; returns its arc index.
  int add_edge(int u, int v, double cap) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({v, cap});
    head_[u].push_back(id);
    arcs_.push_back({u, 0.0});
    head_[v].push_back(id + 1);
    return id;
  }

  /// Flow currently on the arc returned by add_edge.
  double flow_on(int arc_id) const { return arcs_[arc_id + 1].residual; }

  double solve(int source, int sink) {
    double total = 0.0;
    while (build_levels(source, sink)) {
      iter_.assign(head_.size(), 0);
      double pushed;
      while ((pushed = augment(source, sink,
                               std::numeric_limits<double>::infinity())) >
             kEps) {
        total += pushed;
      }
    }
    return total;
  }

 private:
  struct Arc {
    int to;
    double residual;
  };

  bool build_levels(int source, int sink) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[source] = 0;
    q.push(source);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int id : head_[u]) {
        const Arc& a = arcs_[id];
        if (a.residual > kEps && level_[a.to] < 0) {
          level_[a.to] = level_[u] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  double augment(int u, int sink, double limit) {
    if (u == sink) return limit;
    for (std::size_t& i = iter_[u]; i < head_[u].size(); ++i) {
      const int id = head_[u][i];
      Arc& a = arcs_[id];
      if (a.residual > kEps && level_[a.to] == level_[u] + 1) {
        const double got =
            augment(a.to, sink, std::min(limit, a.residual));
        if (got > kEps) {
          a.residual -= got;
          arcs_[id ^ 1].residual += got;
          return got;
        }
      }
    }
    return 0.0;
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> head_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

}  // namespace gridshift
