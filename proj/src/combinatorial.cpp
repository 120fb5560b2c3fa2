#include "pmaxflow/combinatorial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "pmaxflow/error.hpp"

namespace pmaxflow {

namespace {

constexpr double kIntTol = 1e-7;

bool IsIntegral(double x) { return std::abs(x - std::round(x)) <= kIntTol; }

// Residual arcs of a two-sided flow: for edge e, direction +1 (tail -> head)
// has room u+ - f, direction -1 has room u- + f.
struct Arc {
  int to;
  int edge;
  int dir;
};

std::vector<std::vector<Arc>> Adjacency(const Graph& g) {
  std::vector<std::vector<Arc>> adj(static_cast<std::size_t>(g.n()));
  for (int e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    adj[ed.tail].push_back({ed.head, e, +1});
    adj[ed.head].push_back({ed.tail, e, -1});
  }
  return adj;
}

double Room(const Graph& g, std::span<const double> f, int e, int dir) {
  return dir > 0 ? g.edge(e).cap_fwd - f[e] : g.edge(e).cap_bwd + f[e];
}

// BFS over residual arcs with room >= 1 from `from` until `is_target`;
// `reverse` walks arcs backwards (finding a path into `from`). Returns the
// path as (edge, dir) pairs in s-to-target order, empty if none.
template <class Pred>
std::vector<std::pair<int, int>> ResidualPath(
    const Graph& g, const std::vector<std::vector<Arc>>& adj,
    std::span<const double> f, int from, Pred is_target, bool reverse,
    int* reached) {
  const int n = g.n();
  std::vector<int> pred_edge(n, -1), pred_dir(n, 0), pred_vertex(n, -1);
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(from);
  seen[from] = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    if (v != from && is_target(v)) {
      std::vector<std::pair<int, int>> path;
      for (int x = v; x != from; x = pred_vertex[x]) {
        path.emplace_back(pred_edge[x], pred_dir[x]);
      }
      if (!reverse) std::reverse(path.begin(), path.end());
      *reached = v;
      return path;
    }
    for (const Arc& a : adj[v]) {
      // Walking backwards along arc x -> v means using the arc in direction
      // -a.dir as seen from v.
      const int dir = reverse ? -a.dir : a.dir;
      if (seen[a.to] || Room(g, f, a.edge, dir) < 1.0 - kIntTol) continue;
      seen[a.to] = 1;
      pred_edge[a.to] = a.edge;
      pred_dir[a.to] = dir;
      pred_vertex[a.to] = v;
      q.push(a.to);
    }
  }
  return {};
}

}  // namespace

double CutBound(const Graph& g) {
  double out_s = 0.0, in_t = 0.0;
  for (const Edge& e : g.edges()) {
    if (e.tail == g.source()) out_s += e.cap_fwd;
    if (e.head == g.source()) out_s += e.cap_bwd;
    if (e.head == g.sink()) in_t += e.cap_fwd;
    if (e.tail == g.sink()) in_t += e.cap_bwd;
  }
  return std::min(out_s, in_t);
}

Flow DinicMaxFlow(const Graph& g) {
  const int n = g.n();
  const int m = g.m();
  // Arc 2e is tail -> head, arc 2e+1 its twin; flow on the twin is -flow.
  std::vector<int> to(2 * m);
  std::vector<double> res(2 * m);
  std::vector<std::vector<int>> adj(n);
  for (int e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    to[2 * e] = ed.head;
    to[2 * e + 1] = ed.tail;
    res[2 * e] = ed.cap_fwd;
    res[2 * e + 1] = ed.cap_bwd;
    adj[ed.tail].push_back(2 * e);
    adj[ed.head].push_back(2 * e + 1);
  }
  const int s = g.source(), t = g.sink();
  std::vector<int> level(n), it(n);
  auto bfs = [&] {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int a : adj[v]) {
        if (res[a] > 0.5 && level[to[a]] < 0) {
          level[to[a]] = level[v] + 1;
          q.push(to[a]);
        }
      }
    }
    return level[t] >= 0;
  };
  // Iterative blocking-flow DFS.
  auto push = [&](double limit) {
    std::vector<int> stack_arcs;
    int v = s;
    while (true) {
      if (v == t) {
        double amt = limit;
        for (int a : stack_arcs) amt = std::min(amt, res[a]);
        for (int a : stack_arcs) {
          res[a] -= amt;
          res[a ^ 1] += amt;
        }
        return amt;
      }
      bool advanced = false;
      for (; it[v] < static_cast<int>(adj[v].size()); ++it[v]) {
        const int a = adj[v][it[v]];
        if (res[a] > 0.5 && level[to[a]] == level[v] + 1) {
          stack_arcs.push_back(a);
          v = to[a];
          advanced = true;
          break;
        }
      }
      if (advanced) continue;
      if (stack_arcs.empty()) return 0.0;
      level[v] = -1;  // dead end
      const int back = stack_arcs.back();
      stack_arcs.pop_back();
      v = to[back ^ 1];
      ++it[v];
    }
  };
  double total = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    while (true) {
      const double pushed = push(inf);
      if (pushed <= 0.0) break;
      total += pushed;
    }
  }
  Flow out;
  out.values.resize(m);
  for (int e = 0; e < m; ++e) out.values[e] = g.edge(e).cap_fwd - res[2 * e];
  out.value = total;
  return out;
}

bool IsFeasibleFlow(const Graph& g, std::span<const double> f, double* value,
                    double tol) {
  for (int e = 0; e < g.m(); ++e) {
    if (f[e] > g.edge(e).cap_fwd + tol || f[e] < -g.edge(e).cap_bwd - tol) {
      return false;
    }
  }
  const Vec net = g.NetInflow(f);
  for (int v = 0; v < g.n(); ++v) {
    if (v != g.source() && v != g.sink() && std::abs(net[v]) > tol) return false;
  }
  if (value) *value = net[g.sink()];
  return true;
}

Flow RoundToIntegral(const Graph& g, std::span<const double> f_fractional) {
  const int n = g.n();
  const int m = g.m();
  if (static_cast<int>(f_fractional.size()) < m) {
    throw Error(ErrorCode::kInvalidParams, "fractional flow is too short");
  }
  Vec x(m);
  for (int e = 0; e < m; ++e) {
    x[e] = std::clamp(f_fractional[e], -g.edge(e).cap_bwd, g.edge(e).cap_fwd);
    if (IsIntegral(x[e])) x[e] = std::round(x[e]);
  }
  const int s = g.source(), t = g.sink();

  // Round fractional cycles, s-t paths and stray leaves out of the support.
  // Each pass makes at least one edge integral.
  while (true) {
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (edge, other)
    int frac_count = 0;
    for (int e = 0; e < m; ++e) {
      if (IsIntegral(x[e])) continue;
      ++frac_count;
      adj[g.edge(e).tail].emplace_back(e, g.edge(e).head);
      adj[g.edge(e).head].emplace_back(e, g.edge(e).tail);
    }
    if (frac_count == 0) break;

    // Look for a cycle with an iterative DFS; otherwise for an s-t path.
    std::vector<int> parent_edge(n, -1), parent(n, -1), state(n, 0);
    std::vector<std::pair<int, int>> walk;  // (edge, dir) along the walk
    for (int root = 0; root < n && walk.empty(); ++root) {
      if (state[root] != 0 || adj[root].empty()) continue;
      std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
      state[root] = 1;
      while (!stack.empty() && walk.empty()) {
        auto& [v, idx] = stack.back();
        if (idx == adj[v].size()) {
          state[v] = 2;
          stack.pop_back();
          continue;
        }
        const auto [e, u] = adj[v][idx++];
        if (e == parent_edge[v]) continue;
        if (state[u] == 1) {
          // Cycle u -> ... -> v -> u along the tree path plus edge e.
          std::vector<std::pair<int, int>> rev;
          rev.emplace_back(e, g.edge(e).tail == v ? +1 : -1);
          for (int a = v; a != u; a = parent[a]) {
            const int pe = parent_edge[a];
            rev.emplace_back(pe, g.edge(pe).head == a ? +1 : -1);
          }
          walk.assign(rev.rbegin(), rev.rend());
          break;
        }
        if (state[u] == 0) {
          state[u] = 1;
          parent[u] = v;
          parent_edge[u] = e;
          stack.emplace_back(u, 0);
        }
      }
    }
    bool is_path = false;
    if (walk.empty()) {
      // Forest: find the s-t path if s and t share a tree.
      std::vector<int> pe(n, -2);
      std::queue<int> q;
      q.push(s);
      pe[s] = -1;
      while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (const auto& [e, u] : adj[v]) {
          if (pe[u] != -2) continue;
          pe[u] = e;
          q.push(u);
        }
      }
      if (pe[t] != -2) {
        std::vector<std::pair<int, int>> rev;
        for (int v = t; v != s;) {
          const int e = pe[v];
          const bool forward = g.edge(e).head == v;
          rev.emplace_back(e, forward ? +1 : -1);
          v = forward ? g.edge(e).tail : g.edge(e).head;
        }
        walk.assign(rev.rbegin(), rev.rend());
        is_path = true;
      }
    }
    if (walk.empty()) {
      // Stray leaf (conservation was broken by clamping): round its edge.
      for (int v = 0; v < n; ++v) {
        if (v != s && v != t && adj[v].size() == 1) {
          const int e = adj[v][0].first;
          x[e] = std::round(x[e]);
          break;
        }
      }
      continue;
    }
    // Push theta along the walk (up) or against it (down).
    double up = std::numeric_limits<double>::infinity(), down = up;
    for (const auto& [e, dir] : walk) {
      const double ceil_gap = std::ceil(x[e]) - x[e];
      const double floor_gap = x[e] - std::floor(x[e]);
      up = std::min(up, dir > 0 ? ceil_gap : floor_gap);
      down = std::min(down, dir > 0 ? floor_gap : ceil_gap);
    }
    double theta;
    if (is_path) {
      // Keep the value at or above its floor when lowering it.
      const double value = g.NetInflow(x)[t];
      const double frac = value - std::floor(value + kIntTol);
      theta = down <= frac + kIntTol ? -down : up;
    } else {
      theta = up <= down ? up : -down;
    }
    for (const auto& [e, dir] : walk) {
      x[e] += dir * theta;
      if (IsIntegral(x[e])) x[e] = std::round(x[e]);
    }
  }

  // Repair imbalances left by clamping with unit pushes on residual paths.
  const auto adj = Adjacency(g);
  while (true) {
    const Vec net = g.NetInflow(x);
    int v = -1;
    for (int u = 0; u < n; ++u) {
      if (u != s && u != t && std::abs(net[u]) > 0.5) {
        v = u;
        break;
      }
    }
    if (v < 0) break;
    int reached = -1;
    if (net[v] > 0) {
      // Excess: move one unit out of v towards s, t or a deficit.
      auto target = [&](int u) { return u == s || u == t || net[u] < -0.5; };
      const auto path = ResidualPath(g, adj, x, v, target, false, &reached);
      if (path.empty()) {
        throw Error(ErrorCode::kInfeasibleFlow, "cannot repair excess");
      }
      for (const auto& [e, dir] : path) x[e] += dir;
    } else {
      // Deficit: bring one unit into v from s, t or an excess.
      auto target = [&](int u) { return u == s || u == t || net[u] > 0.5; };
      const auto path = ResidualPath(g, adj, x, v, target, true, &reached);
      if (path.empty()) {
        throw Error(ErrorCode::kInfeasibleFlow, "cannot repair deficit");
      }
      for (const auto& [e, dir] : path) x[e] += dir;
    }
  }
  Flow out;
  out.values = std::move(x);
  out.value = g.NetInflow(out.values)[t];
  return out;
}

Flow AugmentToOptimal(const Graph& g, const Flow& flow, double target) {
  Flow out = flow;
  const auto adj = Adjacency(g);
  const int t = g.sink();
  while (out.value < target - 0.5) {
    int reached = -1;
    const auto path = ResidualPath(
        g, adj, out.values, g.source(), [t](int u) { return u == t; }, false,
        &reached);
    if (path.empty()) break;
    double amt = target - out.value;
    for (const auto& [e, dir] : path) {
      amt = std::min(amt, Room(g, out.values, e, dir));
    }
    amt = std::floor(amt + kIntTol);
    for (const auto& [e, dir] : path) out.values[e] += dir * amt;
    out.value += amt;
  }
  return out;
}

}  // namespace pmaxflow
