#pragma once

// Distances, clustering algorithms, purity and a classical-MDS embedding.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slicebench/error.hpp"
#include "slicebench/io.hpp"
#include "slicebench/rng.hpp"

namespace slicebench {

using Points = std::vector<std::vector<double>>;
using DistanceMatrix = std::vector<std::vector<double>>;

enum class Metric { Soergel, Euclidean, Manhattan };
enum class Linkage { Average, Single, Complete };

inline constexpr std::array<Metric, 3> kAllMetrics = {Metric::Soergel, Metric::Euclidean, Metric::Manhattan};
inline constexpr std::array<Linkage, 3> kAllLinkages = {Linkage::Average, Linkage::Single, Linkage::Complete};

inline constexpr std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Soergel: return "soergel";
    case Metric::Euclidean: return "euclidean";
    case Metric::Manhattan: return "manhattan";
  }
  return "?";
}

inline constexpr std::string_view to_string(Linkage l) {
  switch (l) {
    case Linkage::Average: return "average";
    case Linkage::Single: return "single";
    case Linkage::Complete: return "complete";
  }
  return "?";
}

inline double distance(Metric metric, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ConfigError("distance: dimension mismatch");
  double acc = 0.0;
  switch (metric) {
    case Metric::Soergel: {
      double den = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0.0 || y[i] < 0.0) throw ConfigError("Soergel distance needs non-negative coordinates");
        acc += std::abs(x[i] - y[i]);
        den += std::max(x[i], y[i]);
      }
      return den > 0.0 ? acc / den : 0.0;
    }
    case Metric::Euclidean:
      for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
      return std::sqrt(acc);
    case Metric::Manhattan:
      for (std::size_t i = 0; i < x.size(); ++i) acc += std::abs(x[i] - y[i]);
      return acc;
  }
  return acc;
}

inline DistanceMatrix distance_matrix(const Points& pts, Metric metric) {
  const auto n = pts.size();
  DistanceMatrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = distance(metric, pts[i], pts[j]);
  }
  return d;
}

// Hard assignments use cluster; fuzzy ones also fill memberships (rows sum to 1).
struct ClusterAssignment {
  std::vector<int> cluster;
  int k = 0;
  std::vector<std::vector<double>> memberships;
  bool converged = true;
  int iterations = 0;
};

// Relabels clusters 0,1,... in order of first appearance; -1 stays noise.
inline void canonicalize(ClusterAssignment& a) {
  std::map<int, int> remap;
  for (auto& c : a.cluster) {
    if (c < 0) continue;
    auto it = remap.try_emplace(c, static_cast<int>(remap.size())).first;
    c = it->second;
  }
}

// Lance-Williams agglomeration. Among equal distances the pair with the lowest
// (i, j) index wins, where a cluster's index is its first member's row.
inline ClusterAssignment agglomerative(const DistanceMatrix& dist, int k, Linkage linkage) {
  const auto n = static_cast<int>(dist.size());
  if (k < 1 || k > n) throw ConfigError("agglomerative: k must be in [1, rows]");
  auto d = dist;
  std::vector<int> size(n, 1), owner(n);
  std::vector<bool> alive(n, true);
  for (int i = 0; i < n; ++i) owner[i] = i;
  for (int clusters = n; clusters > k; --clusters) {
    int bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (alive[j] && d[i][j] < best) {
          best = d[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) {  // all remaining distances are infinite or NaN
      for (int i = 0; i < n && bi < 0; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (alive[i] && alive[j]) {
            bi = i;
            bj = j;
            break;
          }
        }
      }
    }
    for (int m = 0; m < n; ++m) {
      if (!alive[m] || m == bi || m == bj) continue;
      double v = 0.0;
      switch (linkage) {
        case Linkage::Average:
          v = (size[bi] * d[bi][m] + size[bj] * d[bj][m]) / static_cast<double>(size[bi] + size[bj]);
          break;
        case Linkage::Single: v = std::min(d[bi][m], d[bj][m]); break;
        case Linkage::Complete: v = std::max(d[bi][m], d[bj][m]); break;
      }
      d[bi][m] = d[m][bi] = v;
    }
    size[bi] += size[bj];
    alive[bj] = false;
    for (auto& o : owner) {
      if (o == bj) o = bi;
    }
  }
  ClusterAssignment a;
  a.k = k;
  a.cluster = owner;
  canonicalize(a);
  return a;
}

inline ClusterAssignment agglomerative(const Points& pts, int k, Metric metric, Linkage linkage) {
  return agglomerative(distance_matrix(pts, metric), k, linkage);
}

namespace detail {

inline double sq_euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline void check_rect(const Points& pts) {
  for (const auto& p : pts) {
    if (p.size() != pts.front().size()) throw ConfigError("ragged point set");
  }
}

// k-means++: first centre uniform, later ones proportional to squared distance.
inline Points plus_plus_seeds(const Points& pts, int k, Stream& rng) {
  Points c;
  c.push_back(pts[rng.below(pts.size())]);
  std::vector<double> d2(pts.size());
  while (static_cast<int>(c.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      d2[i] = std::numeric_limits<double>::infinity();
      for (const auto& cc : c) d2[i] = std::min(d2[i], sq_euclid(pts[i], cc));
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double u = rng.uniform() * total, run = 0.0;
      pick = pts.size() - 1;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        run += d2[i];
        if (u < run && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.below(pts.size());
    }
    c.push_back(pts[pick]);
  }
  return c;
}

}  // namespace detail

inline ClusterAssignment kmeans(const Points& pts, int k, std::uint64_t seed, int max_iter = 300) {
  const auto n = static_cast<int>(pts.size());
  if (k < 1 || k > n) throw ConfigError("kmeans: k must be in [1, rows]");
  detail::check_rect(pts);
  Stream rng(seed);
  auto centres = detail::plus_plus_seeds(pts, k, rng);
  const auto dim = pts.front().size();
  ClusterAssignment a;
  a.k = k;
  a.cluster.assign(n, -1);
  a.converged = false;
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        double v = detail::sq_euclid(pts[i], centres[c]);
        if (v < bd) {
          bd = v;
          best = c;
        }
      }
      if (a.cluster[i] != best) {
        a.cluster[i] = best;
        changed = true;
      }
    }
    a.iterations = it + 1;
    if (!changed) {
      a.converged = true;
      break;
    }
    std::vector<int> count(k, 0);
    Points sum(k, std::vector<double>(dim, 0.0));
    for (int i = 0; i < n; ++i) {
      ++count[a.cluster[i]];
      for (std::size_t j = 0; j < dim; ++j) sum[a.cluster[i]][j] += pts[i][j];
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] == 0) continue;  // empty cluster keeps its centre
      for (std::size_t j = 0; j < dim; ++j) centres[c][j] = sum[c][j] / count[c];
    }
  }
  canonicalize(a);
  return a;
}

inline ClusterAssignment dbscan(const Points& pts, double eps, int min_pts, Metric metric = Metric::Euclidean) {
  if (!(eps > 0.0)) throw ConfigError("dbscan: eps must be positive");
  if (min_pts < 1) throw ConfigError("dbscan: min_pts must be >= 1");
  const auto d = distance_matrix(pts, metric);
  const auto n = static_cast<int>(pts.size());
  auto neighbours = [&](int i) {
    std::vector<int> out;
    for (int j = 0; j < n; ++j) {
      if (d[i][j] <= eps) out.push_back(j);
    }
    return out;
  };
  constexpr int unvisited = -2;
  ClusterAssignment a;
  a.cluster.assign(n, unvisited);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (a.cluster[i] != unvisited) continue;
    auto nb = neighbours(i);
    if (static_cast<int>(nb.size()) < min_pts) {
      a.cluster[i] = -1;
      continue;
    }
    const int id = next++;
    a.cluster[i] = id;
    std::vector<int> queue(nb.begin(), nb.end());
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int p = queue[q];
      if (a.cluster[p] == -1) a.cluster[p] = id;  // border point
      if (a.cluster[p] != unvisited) continue;
      a.cluster[p] = id;
      auto pn = neighbours(p);
      if (static_cast<int>(pn.size()) >= min_pts) queue.insert(queue.end(), pn.begin(), pn.end());
    }
  }
  a.k = next;
  return a;
}

struct CMeansOptions {
  double m = 2.0;
  double tol = 1e-6;
  int max_iter = 300;
  std::uint64_t seed = 0;
  Points initial_centroids;  // optional; k-means++ seeding otherwise
};

// Fuzzy c-means on Euclidean distance. Stops when no membership moves by tol
// or more; converged=false flags a result cut off at max_iter.
inline ClusterAssignment cmeans(const Points& pts, int k, const CMeansOptions& opt = {}) {
  const auto n = static_cast<int>(pts.size());
  if (!(opt.m > 1.0)) throw ConfigError("cmeans: fuzzifier must exceed 1");
  if (k < 1 || k > n) throw ConfigError("cmeans: k must be in [1, rows]");
  detail::check_rect(pts);
  const auto dim = pts.front().size();
  Points centres;
  if (!opt.initial_centroids.empty()) {
    if (static_cast<int>(opt.initial_centroids.size()) != k) throw ConfigError("cmeans: need k initial centroids");
    centres = opt.initial_centroids;
  } else {
    Stream rng(opt.seed);
    centres = detail::plus_plus_seeds(pts, k, rng);
  }
  const double expo = 2.0 / (opt.m - 1.0);
  auto update_memberships = [&](std::vector<std::vector<double>>& u) {
    for (int i = 0; i < n; ++i) {
      std::vector<double> dd(k);
      int zero = -1;
      for (int c = 0; c < k; ++c) {
        dd[c] = std::sqrt(detail::sq_euclid(pts[i], centres[c]));
        if (dd[c] == 0.0 && zero < 0) zero = c;
      }
      if (zero >= 0) {
        std::fill(u[i].begin(), u[i].end(), 0.0);
        u[i][zero] = 1.0;
        continue;
      }
      for (int c = 0; c < k; ++c) {
        double s = 0.0;
        for (int q = 0; q < k; ++q) s += std::pow(dd[c] / dd[q], expo);
        u[i][c] = 1.0 / s;
      }
    }
  };
  ClusterAssignment a;
  a.k = k;
  a.memberships.assign(n, std::vector<double>(k, 0.0));
  update_memberships(a.memberships);
  a.converged = false;
  for (int it = 0; it < opt.max_iter; ++it) {
    for (int c = 0; c < k; ++c) {
      std::vector<double> num(dim, 0.0);
      double den = 0.0;
      for (int i = 0; i < n; ++i) {
        const double w = std::pow(a.memberships[i][c], opt.m);
        den += w;
        for (std::size_t j = 0; j < dim; ++j) num[j] += w * pts[i][j];
      }
      if (den > 0.0) {
        for (std::size_t j = 0; j < dim; ++j) centres[c][j] = num[j] / den;
      }
    }
    auto prev = a.memberships;
    update_memberships(a.memberships);
    double delta = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < k; ++c) delta = std::max(delta, std::abs(a.memberships[i][c] - prev[i][c]));
    }
    a.iterations = it + 1;
    if (delta < opt.tol) {
      a.converged = true;
      break;
    }
  }
  a.cluster.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& row = a.memberships[i];
    a.cluster[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return a;
}

// (1/N) * sum over clusters of the majority label count. Fuzzy assignments are
// hardened by argmax; noise (-1) is scored as one more cluster.
template <typename Label>
double purity(const std::vector<int>& cluster, const std::vector<Label>& labels) {
  if (cluster.size() != labels.size()) throw ConfigError("purity: label/assignment size mismatch");
  if (cluster.empty()) return 0.0;
  std::map<int, std::map<Label, int>> table;
  for (std::size_t i = 0; i < cluster.size(); ++i) ++table[cluster[i]][labels[i]];
  int hits = 0;
  for (const auto& [c, counts] : table) {
    int best = 0;
    for (const auto& [l, n] : counts) best = std::max(best, n);
    hits += best;
  }
  return static_cast<double>(hits) / static_cast<double>(cluster.size());
}

template <typename Label>
double purity(const ClusterAssignment& a, const std::vector<Label>& labels) {
  if (!a.memberships.empty()) {
    std::vector<int> hard;
    for (const auto& row : a.memberships) {
      hard.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
    }
    return purity(hard, labels);
  }
  return purity(a.cluster, labels);
}

// Classical MDS to two dimensions. Each axis is oriented so its first
// nonzero coordinate is positive.
inline std::vector<std::array<double, 2>> embed2d(const DistanceMatrix& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d[i].size() != static_cast<std::size_t>(n)) throw ConfigError("embed2d: distance matrix is not square");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(d[i][j] - d[j][i]) > 1e-9 * std::max(1.0, std::abs(d[i][j]))) {
        throw ConfigError("embed2d: distance matrix is not symmetric");
      }
    }
  }
  std::vector<std::array<double, 2>> out(d.size(), {0.0, 0.0});
  if (n == 0) return out;
  Eigen::MatrixXd sq(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) sq(i, j) = d[i][j] * d[i][j];
  }
  const Eigen::MatrixXd centre =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd b = -0.5 * centre * sq * centre;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  const auto& vals = eig.eigenvalues();  // ascending
  const auto& vecs = eig.eigenvectors();
  for (int axis = 0; axis < 2 && axis < n; ++axis) {
    const Eigen::Index col = n - 1 - axis;
    const double lambda = vals(col);
    if (!(lambda > 1e-12)) continue;
    Eigen::VectorXd v = vecs.col(col) * std::sqrt(lambda);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) out[i][axis] = v(i);
  }
  return out;
}

// ----------------------------------------------------------------------------
// export

inline std::string assignment_to_csv(const ClusterAssignment& a, const std::vector<int>& run_ids,
                                     const std::vector<int>& profile_ids) {
  std::string out = "run_id,profile_id,cluster";
  for (int c = 0; c < static_cast<int>(a.memberships.empty() ? 0 : a.k); ++c) out += ",m" + std::to_string(c);
  out += '\n';
  for (std::size_t i = 0; i < a.cluster.size(); ++i) {
    out += std::to_string(run_ids.at(i)) + "," + std::to_string(profile_ids.at(i)) + "," + std::to_string(a.cluster[i]);
    if (!a.memberships.empty()) {
      for (double m : a.memberships[i]) out += "," + format_number(m);
    }
    out += '\n';
  }
  return out;
}

inline std::string distance_matrix_to_csv(const DistanceMatrix& d, const std::vector<int>& run_ids) {
  std::string out = "run_id";
  for (int id : run_ids) out += "," + std::to_string(id);
  out += '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out += std::to_string(run_ids.at(i));
    for (double v : d[i]) out += "," + format_number(v);
    out += '\n';
  }
  return out;
}

inline std::string embedding_to_csv(const std::vector<std::array<double, 2>>& xy, const std::vector<int>& run_ids,
                                    const std::vector<int>& profile_ids) {
  std::string out = "run_id,profile_id,x,y\n";
  for (std::size_t i = 0; i < xy.size(); ++i) {
    out += std::to_string(run_ids.at(i)) + "," + std::to_string(profile_ids.at(i)) + "," + format_number(xy[i][0]) +
           "," + format_number(xy[i][1]) + "\n";
  }
  return out;
}

}  // namespace slicebench
