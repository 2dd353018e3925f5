#pragma once

// Test-only oracle: optimal transport cost between two small atom measures
// on [0,1], solved as a min-cost flow by successive shortest augmenting
// paths (Bellman-Ford on the bipartite residual graph). Independent of the
// CDF-integral evaluation in the library.

#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

inline double transport_cost(const std::vector<double>& xs,
                             const std::vector<double>& ws,
                             const std::vector<double>& ys,
                             const std::vector<double>& vs) {
  const int n = static_cast<int>(xs.size());
  const int m = static_cast<int>(ys.size());
  std::vector<double> supply = ws, demand = vs;
  std::vector<std::vector<double>> flow(n, std::vector<double>(m, 0.0));
  const double inf = std::numeric_limits<double>::infinity();
  constexpr double eps = 1e-15;

  for (;;) {
    // Nodes: 0..n-1 supply side, n..n+m-1 demand side.
    std::vector<double> dist(n + m, inf);
    std::vector<int> prev(n + m, -1);
    for (int i = 0; i < n; ++i)
      if (supply[i] > eps) dist[i] = 0.0;
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
          const double c = std::fabs(xs[i] - ys[j]);
          if (dist[i] < inf && dist[i] + c < dist[n + j] - 1e-18) {
            dist[n + j] = dist[i] + c;
            prev[n + j] = i;
            changed = true;
          }
          if (flow[i][j] > eps && dist[n + j] < inf &&
              dist[n + j] - c < dist[i] - 1e-18) {
            dist[i] = dist[n + j] - c;
            prev[i] = n + j;
            changed = true;
          }
        }
    }
    int best = -1;
    for (int j = 0; j < m; ++j)
      if (demand[j] > eps && dist[n + j] < inf &&
          (best < 0 || dist[n + j] < dist[n + best]))
        best = j;
    if (best < 0) break;

    // Trace the path and find the bottleneck.
    std::vector<int> path;  // node sequence demand-side back to a free supply
    int node = n + best;
    path.push_back(node);
    while (prev[node] >= 0) {
      node = prev[node];
      path.push_back(node);
    }
    double push = demand[best];
    push = std::min(push, supply[path.back()]);
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      const int a = path[t], b = path[t + 1];
      if (a >= n && b < n) continue;              // forward arc b->a, no cap
      if (a < n && b >= n) push = std::min(push, flow[a][b - n]);
    }
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      const int a = path[t], b = path[t + 1];
      if (a >= n && b < n) flow[b][a - n] += push;   // forward: supply->demand
      if (a < n && b >= n) flow[a][b - n] -= push;   // reverse: cancel flow
    }
    supply[path.back()] -= push;
    demand[best] -= push;
  }

  double cost = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) cost += flow[i][j] * std::fabs(xs[i] - ys[j]);
  return cost;
}

}  // namespace oracle
