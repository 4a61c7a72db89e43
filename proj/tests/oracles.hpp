#pragma once

// Slow, straightforward reference implementations. They share no code with
// the library beyond Eigen containers.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// Rank by sorting, each tie group gets the mean of the positions it spans.
inline std::vector<double> ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    double sum = 0.0;
    for (std::size_t p = i; p <= j; ++p) sum += static_cast<double>(p + 1);
    for (std::size_t p = i; p <= j; ++p) r[order[p]] = sum / static_cast<double>(j - i + 1);
    i = j + 1;
  }
  return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline Eigen::MatrixXd cosine_loop(const Eigen::MatrixXd& rows) {
  const auto n = rows.rows();
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double dot = 0, ni = 0, nj = 0;
      for (Eigen::Index d = 0; d < rows.cols(); ++d) {
        dot += rows(i, d) * rows(j, d);
        ni += rows(i, d) * rows(i, d);
        nj += rows(j, d) * rows(j, d);
      }
      c(i, j) = dot / std::sqrt(ni * nj);
    }
  }
  return c;
}

// Mean row-wise Spearman of two cosine matrices.
inline double language_similarity(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    sum += spearman(to_std(a.row(i).transpose()), to_std(b.row(i).transpose()));
  }
  return sum / static_cast<double>(a.rows());
}

// Ward agglomeration from first principles: clusters are point sets, the
// merge cost is sqrt(2|A||B|/(|A|+|B|)) times the centroid distance.
struct WardStep {
  std::set<int> members;
  double height;
};

inline std::vector<WardStep> ward_centroid(const Eigen::MatrixXd& points) {
  std::vector<std::set<int>> clusters;
  for (int i = 0; i < points.rows(); ++i) clusters.push_back({i});
  auto centroid = [&](const std::set<int>& c) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(points.cols());
    for (int i : c) m += points.row(i).transpose();
    return Eigen::VectorXd(m / static_cast<double>(c.size()));
  };
  std::vector<WardStep> steps;
  while (clusters.size() > 1) {
    double best = INFINITY;
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        const double na = static_cast<double>(clusters[a].size());
        const double nb = static_cast<double>(clusters[b].size());
        const double d = std::sqrt(2.0 * na * nb / (na + nb)) *
                         (centroid(clusters[a]) - centroid(clusters[b])).norm();
        if (d < best) {
          best = d;
          ba = a;
          bb = b;
        }
      }
    }
    std::set<int> merged = clusters[ba];
    merged.insert(clusters[bb].begin(), clusters[bb].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
    clusters[ba] = merged;
    steps.push_back({merged, best});
  }
  return steps;
}

// A rooted binary tree as a plain edge list, with a Newick rendering.
struct EdgeTree {
  std::vector<std::vector<int>> adjacency;
  std::vector<std::string> labels;  // leaf i is node i
  std::string newick;
};

inline EdgeTree random_binary_tree(int leaves, std::mt19937_64& gen) {
  EdgeTree t;
  t.adjacency.resize(static_cast<std::size_t>(leaves));
  std::vector<std::pair<int, std::string>> pool;
  for (int i = 0; i < leaves; ++i) {
    t.labels.push_back("l" + std::to_string(i));
    pool.emplace_back(i, t.labels.back());
  }
  while (pool.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const std::size_t a = pick(gen);
    auto left = pool[a];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(a));
    std::uniform_int_distribution<std::size_t> pick2(0, pool.size() - 1);
    const std::size_t b = pick2(gen);
    auto right = pool[b];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(b));
    const int id = static_cast<int>(t.adjacency.size());
    t.adjacency.push_back({left.first, right.first});
    t.adjacency[static_cast<std::size_t>(left.first)].push_back(id);
    t.adjacency[static_cast<std::size_t>(right.first)].push_back(id);
    pool.emplace_back(id, "(" + left.second + "," + right.second + ")");
  }
  t.newick = pool.front().second + ";";
  return t;
}

// Perfectly balanced tree over a power-of-two leaf count; leaves are
// paired in a random order so labels carry no positional hint.
inline EdgeTree balanced_binary_tree(int leaves, std::mt19937_64& gen) {
  EdgeTree t;
  t.adjacency.resize(static_cast<std::size_t>(leaves));
  std::vector<std::pair<int, std::string>> level;
  for (int i = 0; i < leaves; ++i) {
    t.labels.push_back("l" + std::to_string(i));
    level.emplace_back(i, t.labels.back());
  }
  std::shuffle(level.begin(), level.end(), gen);
  while (level.size() > 1) {
    std::vector<std::pair<int, std::string>> next;
    for (std::size_t k = 0; k + 1 < level.size(); k += 2) {
      const int id = static_cast<int>(t.adjacency.size());
      t.adjacency.push_back({level[k].first, level[k + 1].first});
      t.adjacency[static_cast<std::size_t>(level[k].first)].push_back(id);
      t.adjacency[static_cast<std::size_t>(level[k + 1].first)].push_back(id);
      next.emplace_back(id, "(" + level[k].second + "," + level[k + 1].second + ")");
    }
    level = std::move(next);
  }
  t.newick = level.front().second + ";";
  return t;
}

inline int bfs_edges(const EdgeTree& t, int from, int to) {
  std::vector<int> dist(t.adjacency.size(), -1);
  std::queue<int> q;
  dist[static_cast<std::size_t>(from)] = 0;
  q.push(from);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : t.adjacency[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  return dist[static_cast<std::size_t>(to)];
}

// Tree distance by enumerating every unordered leaf pair of two trees whose leaf i
// carries the same label.
inline double tree_distance(const EdgeTree& a, const EdgeTree& b) {
  double sum = 0.0;
  const int n = static_cast<int>(a.labels.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = bfs_edges(a, i, j) - bfs_edges(b, i, j);
      sum += d * d;
    }
  }
  return sum;
}

// Cyclic Jacobi eigenvalue iteration for a symmetric matrix. Returns
// eigenvalues descending with matching eigenvector columns.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> jacobi_eigen(Eigen::MatrixXd a) {
  const auto n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) > a(y, y); });
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    values[i] = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return {values, vectors};
}

}  // namespace oracle
