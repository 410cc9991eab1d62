#include "physmocap/prep/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace physmocap::prep {

namespace {

DataMesh from_edge_lists(
    const std::vector<Vec3>& verts, const std::vector<std::uint32_t>& source,
    const std::vector<std::vector<std::pair<std::uint32_t, double>>>& nbrs) {
  DataMesh m;
  m.vertices = verts;
  m.source = source;
  m.adj_offsets.reserve(verts.size() + 1);
  m.adj_offsets.push_back(0);
  for (const auto& row : nbrs) {
    for (const auto& [j, len] : row) {
      m.adj.push_back(j);
      m.adj_len.push_back(len);
    }
    m.adj_offsets.push_back(static_cast<std::uint32_t>(m.adj.size()));
  }
  return m;
}

}  // namespace

DataMesh triangulate(const PointCloudFrame& frame, double cutoff, int knn) {
  if (!(cutoff > 0)) throw InvalidInput("triangulate: cutoff must be positive");
  const std::size_t n = frame.size();
  std::vector<Vec3> verts;
  std::vector<std::uint32_t> source;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> nbrs;

  if (frame.is_grid()) {
    // Compact the valid pixels, then connect 8-neighborhoods.
    std::vector<std::int32_t> compact(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      if (!frame.valid.empty() && !frame.valid[i]) continue;
      compact[i] = static_cast<std::int32_t>(verts.size());
      verts.push_back(frame.point(i));
      source.push_back(static_cast<std::uint32_t>(i));
    }
    nbrs.resize(verts.size());
    const int w = frame.grid_width, h = frame.grid_height;
    // One directed sweep over E, SE, S, SW keeps each pair once.
    const int dxs[4] = {1, 1, 0, -1}, dys[4] = {0, 1, 1, 1};
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const std::int32_t a = compact[y * w + x];
        if (a < 0) continue;
        for (int d = 0; d < 4; ++d) {
          const int nx = x + dxs[d], ny = y + dys[d];
          if (nx < 0 || nx >= w || ny >= h) continue;
          const std::int32_t b = compact[ny * w + nx];
          if (b < 0) continue;
          const double len = (verts[a] - verts[b]).norm();
          if (len >= cutoff) continue;
          nbrs[a].push_back({static_cast<std::uint32_t>(b), len});
          nbrs[b].push_back({static_cast<std::uint32_t>(a), len});
        }
      }
    return from_edge_lists(verts, source, nbrs);
  }

  verts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    verts.push_back(frame.point(i));
    source.push_back(static_cast<std::uint32_t>(i));
  }
  nbrs.resize(n);
  if (n == 0) return from_edge_lists(verts, source, nbrs);

  const GridHash hash(frame, cutoff);
  std::vector<std::pair<double, std::uint32_t>> cand;
  for (std::size_t i = 0; i < n; ++i) {
    cand.clear();
    for (std::uint32_t j : hash.within(verts[i], cutoff)) {
      if (j == i) continue;
      const double len = (verts[i] - verts[j]).norm();
      if (len < cutoff) cand.push_back({len, j});
    }
    std::sort(cand.begin(), cand.end());
    const std::size_t keep = std::min<std::size_t>(cand.size(), knn);
    for (std::size_t k = 0; k < keep; ++k) {
      const auto [len, j] = cand[k];
      // Undirected dedupe: register from the lower id unless already present.
      bool dup = false;
      for (const auto& [jj, ll] : nbrs[i])
        if (jj == j) {
          dup = true;
          break;
        }
      if (dup) continue;
      nbrs[i].push_back({j, len});
      nbrs[j].push_back({static_cast<std::uint32_t>(i), len});
    }
  }
  return from_edge_lists(verts, source, nbrs);
}

std::vector<DataMesh> connected_components(const DataMesh& mesh,
                                           int min_size) {
  const int n = mesh.vertex_count();
  std::vector<std::int32_t> comp(n, -1);
  int n_comp = 0;
  std::vector<std::uint32_t> stack;
  for (int seed = 0; seed < n; ++seed) {
    if (comp[seed] >= 0) continue;
    stack.assign(1, static_cast<std::uint32_t>(seed));
    comp[seed] = n_comp;
    while (!stack.empty()) {
      const std::uint32_t v = stack.back();
      stack.pop_back();
      for (std::uint32_t k = mesh.adj_offsets[v]; k < mesh.adj_offsets[v + 1];
           ++k) {
        const std::uint32_t u = mesh.adj[k];
        if (comp[u] < 0) {
          comp[u] = n_comp;
          stack.push_back(u);
        }
      }
    }
    ++n_comp;
  }

  std::vector<std::vector<std::uint32_t>> members(n_comp);
  for (int v = 0; v < n; ++v) members[comp[v]].push_back(v);
  std::stable_sort(members.begin(), members.end(),
                   [](const auto& a, const auto& b) {
                     return a.size() > b.size();
                   });

  std::vector<DataMesh> out;
  std::vector<std::int32_t> remap(n);
  for (const auto& verts : members) {
    if (static_cast<int>(verts.size()) < min_size) continue;
    DataMesh sub;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      remap[verts[i]] = static_cast<std::int32_t>(i);
      sub.vertices.push_back(mesh.vertices[verts[i]]);
      sub.source.push_back(mesh.source[verts[i]]);
    }
    sub.adj_offsets.push_back(0);
    for (std::uint32_t v : verts) {
      for (std::uint32_t k = mesh.adj_offsets[v]; k < mesh.adj_offsets[v + 1];
           ++k) {
        sub.adj.push_back(static_cast<std::uint32_t>(remap[mesh.adj[k]]));
        sub.adj_len.push_back(mesh.adj_len[k]);
      }
      sub.adj_offsets.push_back(static_cast<std::uint32_t>(sub.adj.size()));
    }
    out.push_back(std::move(sub));
  }
  return out;
}

ShortestPaths dijkstra(const DataMesh& mesh,
                       const std::vector<std::uint32_t>& sources) {
  const int n = mesh.vertex_count();
  ShortestPaths sp;
  sp.dist.assign(n, kUnreachable);
  sp.pred.assign(n, -1);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (std::uint32_t s : sources) {
    sp.dist[s] = 0;
    heap.push({0.0, s});
  }
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > sp.dist[v]) continue;
    for (std::uint32_t k = mesh.adj_offsets[v]; k < mesh.adj_offsets[v + 1];
         ++k) {
      const std::uint32_t u = mesh.adj[k];
      const double nd = d + mesh.adj_len[k];
      if (nd < sp.dist[u]) {
        sp.dist[u] = nd;
        sp.pred[u] = static_cast<std::int32_t>(v);
        heap.push({nd, u});
      }
    }
  }
  return sp;
}

}  // namespace physmocap::prep
