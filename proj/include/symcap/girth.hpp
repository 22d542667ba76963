#pragma once

#include "symcap/io.hpp"
#include "symcap/loops.hpp"

#include <vector>

namespace symcap {

/// Antipodally paired samples of the boundary of a centrally symmetric body,
/// joined by k-nearest-neighbour edges weighted by the gauge of the difference.
struct BoundaryGraph {
  struct Edge {
    int to;
    double weight;
  };
  ConvexBody body;
  Mat points;                 // d x P, column i + P/2 is minus column i
  std::vector<int> antipode;  // involution i <-> i + P/2
  std::vector<std::vector<Edge>> adjacency;

  int size() const { return static_cast<int>(points.cols()); }
};

/// Random directions (evenly spaced angles when d = 2) projected to the boundary.
BoundaryGraph build_boundary_graph(const ConvexBody& body, int samples = 4096, int neighbours = 12,
                                   std::uint64_t seed = 0);

/// Shortest graph path between two samples; empty when unreachable.
std::vector<int> shortest_path(const BoundaryGraph& graph, int from, int to, double* length = nullptr);

struct GirthOptions {
  int samples = 4096;
  int neighbours = 12;
  std::uint64_t seed = 0;
  int candidates = 4;
  std::vector<int> levels{16, 32, 64, 128};
  int steps_per_level = 200;
  int subdivisions = 8;
};

struct GirthResult {
  double length = 0.0;        // gauge length of `loop`
  DiscreteLoop loop;          // centrally symmetric, vertices on the boundary
  double graph_length = 0.0;  // doubled shortest antipodal path
  double bound = 0.0;
  double margin = 0.0;
  /// One entry per refinement level: length after respacing, then after every accepted step.
  std::vector<std::vector<double>> history;
  int sources_searched = 0;
};

/// Short centrally symmetric closed curve on the boundary: shortest antipodal graph
/// path, doubled, then refined by projected descent on one half. An upper bound on the girth.
GirthResult symmetric_girth(const ConvexBody& body, const GirthOptions& options = {});

/// 4 + 4/d for even d, 4 + 4/(d - 1) for odd d.
double schaffer_bound(Eigen::Index d);

/// Splits every chord into `subdivisions` pieces and projects all points radially to
/// the boundary. An exactly symmetric input stays exactly symmetric.
DiscreteLoop boundary_loop(const ConvexBody& body, const DiscreteLoop& curve, int subdivisions = 1);

struct SchafferReport {
  double length = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool violation = false;
  double symmetry_defect = 0.0;
  double boundary_residual = 0.0;
};

/// Errors LoopNotSymmetric (defect > 1e-6 diameter) and LoopNotOnBoundary (|g - 1| > 1e-3).
SchafferReport check_schaffer_bound(const ConvexBody& body, const DiscreteLoop& loop);

Json to_json(const GirthResult& result);
Json to_json(const SchafferReport& report);

}  // namespace symcap
