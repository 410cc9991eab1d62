#pragma once

#include <limits>
#include <vector>

#include "physmocap/prep/cloud.hpp"

namespace physmocap::prep {

// Edge graph over observed points; geodesics run on edges, faces are never
// needed.
struct DataMesh {
  std::vector<Vec3> vertices;
  std::vector<std::uint32_t> source;  // index into the originating frame
  std::vector<std::uint32_t> adj_offsets;
  std::vector<std::uint32_t> adj;
  std::vector<double> adj_len;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  std::size_t edge_count() const { return adj.size() / 2; }  // undirected
};

// Grid input connects valid 8-neighborhood pixels closer than `cutoff`;
// unordered input links each point to its (up to) k nearest neighbors within
// `cutoff`.
DataMesh triangulate(const PointCloudFrame& frame, double cutoff,
                     int knn = 8);

// Connected components at least `min_size` vertices big, largest first.
std::vector<DataMesh> connected_components(const DataMesh& mesh,
                                           int min_size = 100);

constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct ShortestPaths {
  std::vector<double> dist;
  std::vector<std::int32_t> pred;  // -1 at sources / unreachable
};

ShortestPaths dijkstra(const DataMesh& mesh,
                       const std::vector<std::uint32_t>& sources);

}  // namespace physmocap::prep
