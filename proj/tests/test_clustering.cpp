#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "strelmine/clustering.hpp"
#include "strelmine/errors.hpp"
#include "strelmine/rng.hpp"

using namespace strelmine;

namespace {

// From-scratch complete-linkage oracle: recomputes every inter-cluster
// distance as the maximum pairwise point distance at every step.
std::vector<MergeStep> exhaustive_linkage(const Points& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::vector<int>> clusters(n);
  for (int i = 0; i < n; ++i) clusters[i] = {i};
  auto dist = [&](const std::vector<int>& a, const std::vector<int>& b) {
    double worst = 0.0;
    for (int i : a) {
      for (int j : b) {
        double s = 0.0;
        for (std::size_t d = 0; d < pts[i].size(); ++d) {
          const double delta = pts[i][d] - pts[j][d];
          s += delta * delta;
        }
        worst = std::max(worst, std::sqrt(s));
      }
    }
    return worst;
  };
  std::vector<MergeStep> merges;
  while (clusters.size() > 1) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        double d = dist(clusters[i], clusters[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    merges.push_back({clusters[bi].front(), clusters[bj].front(), best});
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    std::sort(clusters[bi].begin(), clusters[bi].end());
    clusters.erase(clusters.begin() + static_cast<long>(bj));
  }
  return merges;
}

Points random_points(Rng& rng, int n, int dims) {
  Points pts(n, std::vector<double>(dims));
  for (auto& p : pts) {
    for (auto& v : p) v = rng.uniform(-5.0, 5.0);
  }
  return pts;
}

std::set<std::set<int>> as_partition(const std::vector<int>& labels) {
  std::map<int, std::set<int>> by_label;
  for (std::size_t i = 0; i < labels.size(); ++i) by_label[labels[i]].insert(static_cast<int>(i));
  std::set<std::set<int>> out;
  for (auto& [l, members] : by_label) out.insert(members);
  return out;
}

}  // namespace

TEST_CASE("degenerate cuts") {
  Rng rng(1);
  auto pts = random_points(rng, 6, 2);
  auto singletons = ahc_complete(pts, 6, false);
  CHECK(singletons.num_clusters == 6);
  std::set<int> labels(singletons.labels.begin(), singletons.labels.end());
  CHECK(labels.size() == 6);
  auto one = ahc_complete(pts, 1, false);
  CHECK(one.num_clusters == 1);
  CHECK_THROWS_AS(ahc_complete(pts, 0, false), data_error);
  CHECK_THROWS_AS(ahc_complete(pts, 7, false), data_error);
}

TEST_CASE("two tight triads are recovered and the dendrogram matches the oracle") {
  Points pts{{0.0, 0.0}, {0.1, 0.0}, {0.0, 0.1}, {5.0, 5.0}, {5.1, 5.0}, {5.0, 5.1}};
  auto assignment = ahc_complete(pts, 2, false);
  CHECK(assignment.labels[0] == assignment.labels[1]);
  CHECK(assignment.labels[1] == assignment.labels[2]);
  CHECK(assignment.labels[3] == assignment.labels[4]);
  CHECK(assignment.labels[4] == assignment.labels[5]);
  CHECK(assignment.labels[0] != assignment.labels[3]);

  auto dendro = ahc_dendrogram(pts);
  auto expect = exhaustive_linkage(pts);
  REQUIRE(dendro.merges.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(dendro.merges[i].a == expect[i].a);
    CHECK(dendro.merges[i].b == expect[i].b);
    CHECK(dendro.merges[i].height == expect[i].height);
  }
}

TEST_CASE("merge sequence matches the exhaustive oracle on random sets") {
  Rng rng(2);
  for (int round = 0; round < 120; ++round) {
    auto pts = random_points(rng, rng.uniform_int(2, 8), rng.uniform_int(1, 3));
    auto dendro = ahc_dendrogram(pts);
    auto expect = exhaustive_linkage(pts);
    REQUIRE(dendro.merges.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
      CHECK(dendro.merges[i].a == expect[i].a);
      CHECK(dendro.merges[i].b == expect[i].b);
      CHECK(dendro.merges[i].height == expect[i].height);
    }
  }
}

TEST_CASE("dendrogram heights are non-decreasing") {
  Rng rng(3);
  for (int round = 0; round < 50; ++round) {
    auto pts = random_points(rng, rng.uniform_int(3, 12), 2);
    auto dendro = ahc_dendrogram(pts);
    for (std::size_t i = 1; i < dendro.merges.size(); ++i) {
      CHECK(dendro.merges[i].height >= dendro.merges[i - 1].height);
    }
  }
}

TEST_CASE("permutation invariance as set partitions") {
  Rng rng(4);
  for (int round = 0; round < 30; ++round) {
    auto pts = random_points(rng, 9, 2);
    auto base = as_partition(ahc_complete(pts, 3, false).labels);
    std::vector<int> perm(9);
    for (int i = 0; i < 9; ++i) perm[i] = i;
    rng.shuffle(perm);
    Points shuffled(9);
    for (int i = 0; i < 9; ++i) shuffled[i] = pts[perm[i]];
    auto other_labels = ahc_complete(shuffled, 3, false).labels;
    // Map back to original indexing before comparing partitions.
    std::vector<int> unshuffled(9);
    for (int i = 0; i < 9; ++i) unshuffled[perm[i]] = other_labels[i];
    CHECK(as_partition(unshuffled) == base);
  }
}

TEST_CASE("pre-normalized data equals normalization flag") {
  Rng rng(5);
  auto pts = random_points(rng, 10, 2);
  for (auto& p : pts) p[1] *= 1000.0;  // wildly different scales
  auto a = ahc_complete(pts, 3, true);
  auto b = ahc_complete(minmax_normalize(pts), 3, false);
  CHECK(as_partition(a.labels) == as_partition(b.labels));
}

TEST_CASE("zero-variance dimensions are dropped with notice") {
  Points pts{{1.0, 7.0}, {2.0, 7.0}, {3.0, 7.0}};
  std::vector<int> dropped;
  auto normalized = minmax_normalize(pts, &dropped);
  CHECK(dropped == std::vector<int>{1});
  CHECK(normalized.front().size() == 1);
}

TEST_CASE("silhouette on constructed shapes") {
  // Two well separated tight blobs score > 0.9.
  Points pts;
  Rng rng(6);
  std::vector<int> labels;
  for (int i = 0; i < 8; ++i) {
    pts.push_back({rng.uniform(0.0, 0.1), rng.uniform(0.0, 0.1)});
    labels.push_back(1);
  }
  for (int i = 0; i < 8; ++i) {
    pts.push_back({rng.uniform(9.0, 9.1), rng.uniform(9.0, 9.1)});
    labels.push_back(2);
  }
  CHECK(silhouette(pts, labels) > 0.9);

  // Identical points split randomly into two clusters score <= 0.
  Points same(10, {1.0, 1.0});
  std::vector<int> random_labels;
  for (int i = 0; i < 10; ++i) random_labels.push_back(rng.bernoulli(0.5) ? 1 : 2);
  random_labels[0] = 1;
  random_labels[1] = 2;  // both clusters non-empty
  CHECK(silhouette(same, random_labels) <= 0.0);

  // Singleton-only clustering scores 0 by convention.
  Points three{{0.0}, {1.0}, {2.0}};
  CHECK(silhouette(three, {1, 2, 3}) == 0.0);

  CHECK_THROWS_AS(silhouette(three, {1, 1, 1}), data_error);
}

TEST_CASE("choose_k recovers three separated blobs") {
  Points pts;
  Rng rng(7);
  for (int blob = 0; blob < 3; ++blob) {
    for (int i = 0; i < 7; ++i) {
      pts.push_back({blob * 10.0 + rng.uniform(0.0, 0.5), blob * -6.0 + rng.uniform(0.0, 0.5)});
    }
  }
  auto result = choose_k(pts, 2, 6, false);
  CHECK(result.k == 3);
  CHECK(result.best_score > 0.8);
  CHECK(result.scores.size() == 5);

  // One blob: some k comes back, with a weak score to report alongside.
  Points blob;
  for (int i = 0; i < 12; ++i) blob.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
  auto weak = choose_k(blob, 2, 4, false);
  CHECK(weak.k >= 2);
  CHECK(weak.best_score < 0.8);

  CHECK_THROWS_AS(choose_k(pts, 1, 4, false), data_error);
  CHECK_THROWS_AS(choose_k(pts, 5, 4, false), data_error);
}
