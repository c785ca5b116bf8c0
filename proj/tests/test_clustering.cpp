#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "slicebench/clustering.hpp"
#include "slicebench/rng.hpp"

using namespace slicebench;

namespace {

std::vector<double> random_point(Stream& rng, std::size_t d) {
  std::vector<double> x(d);
  for (auto& v : x) v = rng.bernoulli(0.15) ? 0.0 : rng.uniform();
  return x;
}

Points blobs(Stream& rng, int per, std::vector<std::vector<double>> centres, double spread) {
  Points pts;
  for (const auto& c : centres) {
    for (int i = 0; i < per; ++i) {
      auto p = c;
      for (auto& v : p) v += spread * rng.normal();
      pts.push_back(p);
    }
  }
  return pts;
}

// Best over every map from cluster to label.
double brute_purity(const std::vector<int>& cluster, const std::vector<int>& labels, int k, int nl) {
  int best = 0;
  std::vector<int> f(k, 0);
  while (true) {
    int hits = 0;
    for (std::size_t i = 0; i < cluster.size(); ++i) hits += f[cluster[i]] == labels[i];
    best = std::max(best, hits);
    int pos = 0;
    while (pos < k && ++f[pos] == nl) f[pos++] = 0;
    if (pos == k) break;
  }
  return static_cast<double>(best) / cluster.size();
}

double dist2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

// ---- distance

TEST(Soergel, Examples) {
  EXPECT_DOUBLE_EQ(distance(Metric::Soergel, {2, 0, 1}, {1, 1, 1}), 0.5);
  EXPECT_DOUBLE_EQ(distance(Metric::Soergel, {1, 0}, {0, 1}), 1.0);
  EXPECT_EQ(distance(Metric::Soergel, {0.3, 0.7, 0}, {0.3, 0.7, 0}), 0.0);
  EXPECT_EQ(distance(Metric::Soergel, {0, 0}, {0, 0}), 0.0);
  EXPECT_THROW(distance(Metric::Soergel, {-1, 0}, {0, 1}), ConfigError);
  EXPECT_THROW(distance(Metric::Soergel, {1}, {0, 1}), ConfigError);
}

TEST(Soergel, MetricAxiomsOnRandomVectors) {
  Stream rng(31);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t d = 1 + rng.below(12);
    auto x = random_point(rng, d), y = random_point(rng, d), z = random_point(rng, d);
    const double xy = distance(Metric::Soergel, x, y);
    EXPECT_GE(xy, 0.0);
    EXPECT_NEAR(distance(Metric::Soergel, x, x), 0.0, 1e-9);
    if (x != y) EXPECT_GT(xy, 0.0);
    EXPECT_NEAR(xy, distance(Metric::Soergel, y, x), 1e-9);
    EXPECT_LE(distance(Metric::Soergel, x, z), xy + distance(Metric::Soergel, y, z) + 1e-9);
  }
}

TEST(Soergel, EqualsTanimotoForm) {
  Stream rng(32);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t d = 1 + rng.below(12);
    auto x = random_point(rng, d), y = random_point(rng, d);
    double mn = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      mn += std::min(x[i], y[i]);
      mx += std::max(x[i], y[i]);
    }
    const double tanimoto = mx > 0 ? 1.0 - mn / mx : 0.0;
    EXPECT_NEAR(distance(Metric::Soergel, x, y), tanimoto, 1e-12);
  }
}

// ---- agglomerative

TEST(Agglomerative, LimitCases) {
  Stream rng(1);
  Points pts;
  for (int i = 0; i < 9; ++i) pts.push_back(random_point(rng, 4));
  auto all = agglomerative(pts, 9, Metric::Soergel, Linkage::Average);
  EXPECT_EQ(std::set<int>(all.cluster.begin(), all.cluster.end()).size(), 9u);
  auto one = agglomerative(pts, 1, Metric::Soergel, Linkage::Average);
  EXPECT_EQ(std::set<int>(one.cluster.begin(), one.cluster.end()), std::set<int>{0});
  EXPECT_THROW(agglomerative(pts, 10, Metric::Soergel, Linkage::Average), ConfigError);
}

TEST(Agglomerative, RecoversSeparatedGroups) {
  Stream rng(2);
  auto pts = blobs(rng, 6, {{0.1, 0.1, 0.1}, {0.9, 0.9, 0.9}}, 0.01);
  std::vector<int> labels(12);
  for (int i = 6; i < 12; ++i) labels[i] = 1;
  for (auto l : kAllLinkages) {
    EXPECT_EQ(purity(agglomerative(pts, 2, Metric::Soergel, l), labels), 1.0) << to_string(l);
  }
}

TEST(Agglomerative, FewerClustersCoarsen) {
  Stream rng(3);
  for (int t = 0; t < 40; ++t) {
    Points pts;
    const int n = 5 + static_cast<int>(rng.below(20));
    for (int i = 0; i < n; ++i) pts.push_back(random_point(rng, 5));
    const auto link = kAllLinkages[t % 3];
    const int k = 2 + static_cast<int>(rng.below(n - 2));
    const int k2 = 1 + static_cast<int>(rng.below(k - 1));
    auto fine = agglomerative(pts, k, Metric::Soergel, link);
    auto coarse = agglomerative(pts, k2, Metric::Soergel, link);
    std::map<int, int> parent;
    for (int i = 0; i < n; ++i) {
      auto [it, fresh] = parent.emplace(fine.cluster[i], coarse.cluster[i]);
      EXPECT_EQ(it->second, coarse.cluster[i]) << "trial " << t;
    }
  }
}

// ---- k-means, DBSCAN

TEST(KMeans, TwoBlobs) {
  Stream rng(4);
  auto pts = blobs(rng, 10, {{0, 0}, {5, 5}}, 0.3);
  std::vector<int> labels(20);
  for (int i = 10; i < 20; ++i) labels[i] = 1;
  EXPECT_EQ(purity(kmeans(pts, 2, 7), labels), 1.0);
}

TEST(KMeans, SingleClusterAndDeterminism) {
  Stream rng(5);
  auto pts = blobs(rng, 8, {{0, 0}, {3, 1}}, 1.0);
  auto a = kmeans(pts, 1, 3);
  EXPECT_EQ(std::set<int>(a.cluster.begin(), a.cluster.end()), std::set<int>{0});
  EXPECT_EQ(kmeans(pts, 3, 11).cluster, kmeans(pts, 3, 11).cluster);
}

TEST(Dbscan, SmallRadiusIsAllNoise) {
  Points pts = {{0, 0}, {1, 0}, {0, 1}, {3, 3}};
  auto a = dbscan(pts, 0.5, 2);
  for (int c : a.cluster) EXPECT_EQ(c, -1);
}

TEST(Dbscan, FindsDenseGroups) {
  Stream rng(6);
  auto pts = blobs(rng, 10, {{0, 0}, {10, 10}}, 0.2);
  pts.push_back({5, 5});
  auto a = dbscan(pts, 1.5, 3);
  EXPECT_EQ(a.cluster.back(), -1);
  EXPECT_EQ(std::set<int>(a.cluster.begin(), a.cluster.end() - 1).size(), 2u);
}

// ---- c-means

TEST(CMeans, CoincidentPointGetsFullMembership) {
  Points pts = {{0, 0}, {4, 0}};
  CMeansOptions o;
  o.initial_centroids = pts;
  auto a = cmeans(pts, 2, o);
  EXPECT_DOUBLE_EQ(a.memberships[0][0], 1.0);
  EXPECT_DOUBLE_EQ(a.memberships[1][1], 1.0);
}

TEST(CMeans, EquidistantPointSplitsEvenly) {
  Points pts = {{-1, 0}, {1, 0}, {0, 0}};
  CMeansOptions o;
  o.initial_centroids = {{-1, 0}, {1, 0}};
  auto a = cmeans(pts, 2, o);
  EXPECT_NEAR(a.memberships[2][0], 0.5, 1e-12);
  EXPECT_NEAR(a.memberships[2][1], 0.5, 1e-12);
}

TEST(CMeans, MidpointOutlierIsShared) {
  Stream rng(8);
  auto pts = blobs(rng, 10, {{0, 0}, {6, 0}}, 0.3);
  pts.push_back({3, 0});
  CMeansOptions o;
  o.seed = 1;
  auto a = cmeans(pts, 2, o);
  EXPECT_TRUE(a.converged);
  for (double u : a.memberships.back()) {
    EXPECT_GT(u, 0.3);
    EXPECT_LT(u, 0.7);
  }
}

TEST(CMeans, RowsSumToOneAndHardenLikeKMeans) {
  Stream rng(9);
  for (int t = 0; t < 20; ++t) {
    auto pts = blobs(rng, 8, {{0, 0, 0}, {4, 4, 4}}, 0.4);
    CMeansOptions o;
    o.seed = t;
    auto fz = cmeans(pts, 2, o);
    for (const auto& row : fz.memberships) {
      double s = 0.0;
      for (double u : row) s += u;
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
    auto km = kmeans(pts, 2, t);
    EXPECT_EQ(purity(fz, km.cluster), 1.0);
  }
}

// ---- purity

TEST(Purity, Examples) {
  EXPECT_DOUBLE_EQ(purity(std::vector<int>{0, 0, 1, 1, 1}, std::vector<char>{'A', 'A', 'A', 'B', 'B'}), 0.8);
  EXPECT_DOUBLE_EQ(purity(std::vector<int>{0, 0, 0, 0}, std::vector<int>{1, 1, 2, 2}), 0.5);
  EXPECT_DOUBLE_EQ(purity(std::vector<int>{3, 3, 1}, std::vector<int>{7, 7, 9}), 1.0);
}

TEST(Purity, MatchesBruteForce) {
  Stream rng(10);
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const int k = 1 + static_cast<int>(rng.below(4));
    const int nl = 1 + static_cast<int>(rng.below(4));
    std::vector<int> c(n), l(n);
    for (int i = 0; i < n; ++i) {
      c[i] = static_cast<int>(rng.below(k));
      l[i] = static_cast<int>(rng.below(nl));
    }
    EXPECT_EQ(purity(c, l), brute_purity(c, l, k, nl)) << "case " << t;
  }
}

TEST(Purity, InvariantUnderRenaming) {
  Stream rng(11);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + static_cast<int>(rng.below(20));
    std::vector<int> c(n), l(n);
    for (int i = 0; i < n; ++i) {
      c[i] = static_cast<int>(rng.below(5));
      l[i] = static_cast<int>(rng.below(5));
    }
    std::vector<int> pc = {3, 0, 4, 1, 2}, pl = {2, 4, 1, 0, 3};
    std::vector<int> c2(n), l2(n);
    for (int i = 0; i < n; ++i) {
      c2[i] = pc[c[i]];
      l2[i] = pl[l[i]];
    }
    EXPECT_EQ(purity(c, l), purity(c2, l2));
  }
}

// ---- embedding

TEST(Embedding, EquilateralTriangle) {
  DistanceMatrix d = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  auto xy = embed2d(d);
  EXPECT_NEAR(dist2(xy[0], xy[1]), dist2(xy[1], xy[2]), 1e-6);
  EXPECT_NEAR(dist2(xy[0], xy[1]), dist2(xy[0], xy[2]), 1e-6);
  EXPECT_NEAR(dist2(xy[0], xy[1]), 1.0, 1e-6);
}

TEST(Embedding, CollinearPointsLieOnALine) {
  std::vector<double> pos = {0.0, 1.0, 3.0, 3.5, 7.0};
  DistanceMatrix d(pos.size(), std::vector<double>(pos.size()));
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = 0; j < pos.size(); ++j) d[i][j] = std::fabs(pos[i] - pos[j]);
  }
  for (const auto& p : embed2d(d)) EXPECT_NEAR(p[1], 0.0, 1e-6);
}

TEST(Embedding, IdenticalPointsShareCoordinates) {
  Points pts = {{0.1, 0.2}, {0.1, 0.2}, {0.9, 0.4}, {0.5, 0.5}};
  auto xy = embed2d(distance_matrix(pts, Metric::Soergel));
  EXPECT_NEAR(xy[0][0], xy[1][0], 1e-9);
  EXPECT_NEAR(xy[0][1], xy[1][1], 1e-9);
}
