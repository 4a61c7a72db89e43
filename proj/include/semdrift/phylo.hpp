#pragma once

#include "semdrift/rng.hpp"
#include "semdrift/rsa.hpp"
#include "semdrift/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semdrift {

/// One agglomeration step. Node ids follow the linkage convention: leaves
/// are 0..M-1, the node created by step s is M+s.
struct Merge {
  int left = -1;
  int right = -1;
  double height = 0.0;
  int size = 0;
};

/// Rooted tree over language leaves.
///
/// Trees produced by ward_cluster are binary with merge heights. Trees read
/// from Newick may contain polytomies; path lengths are well defined either
/// way. Every leaf label is unique.
class PhyloTree {
 public:
  struct Node {
    std::string label;
    int parent = -1;
    std::vector<int> children;
    double height = 0.0;
    std::optional<double> branch_length;
  };

  PhyloTree() = default;

  /// Builds the dendrogram of a linkage. `labels` name the leaves.
  static PhyloTree from_merges(std::vector<std::string> labels, const std::vector<Merge>& merges);

  /// Builds a tree from explicit nodes (used by the Newick reader).
  static PhyloTree from_nodes(std::vector<Node> nodes, int root);

  int root() const noexcept { return root_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<Merge>& merges() const noexcept { return merges_; }

  std::size_t leaf_count() const noexcept { return leaves_.size(); }
  /// Leaf labels in node order.
  std::vector<std::string> leaves() const;
  std::optional<int> leaf_node(std::string_view label) const;
  bool is_binary() const;

  /// Number of edges on the path between two leaves.
  int leaf_path_edges(std::string_view a, std::string_view b) const;

  /// All pairwise leaf path lengths, indexed in `labels` order.
  Eigen::MatrixXi path_matrix(const std::vector<std::string>& labels) const;

 private:
  void index();

  std::vector<Node> nodes_;
  std::vector<int> leaves_;
  std::vector<int> depth_;
  std::vector<Merge> merges_;
  int root_ = -1;
};

enum class ClusterMetric {
  /// Each language is its row of the similarity matrix; Euclidean row distance.
  RowEuclidean,
  /// 1 - similarity used directly as the dissimilarity.
  OneMinusSimilarity,
};

/// Euclidean (or 1 - s) dissimilarities that feed the Ward agglomeration.
MatrixXd cluster_distances(const MatrixXd& similarity, ClusterMetric metric);

/// Ward minimum-variance agglomeration with the Lance-Williams update.
/// Ties in merge selection go to the smallest (i, j) slot pair, where the
/// merged cluster takes the lower slot.
std::vector<Merge> ward_linkage(const MatrixXd& distances);

PhyloTree ward_cluster(const LanguageSimilarityMatrix& matrix,
                       ClusterMetric metric = ClusterMetric::RowEuclidean);

/// Sum over unordered leaf pairs of the squared difference in path length.
double tree_distance(const PhyloTree& t, const PhyloTree& g);

/// Throws ValidationError listing the labels only present in one tree.
void check_same_leaves(const PhyloTree& t, const PhyloTree& g);

PhyloTree parse_newick(std::string_view text);
std::string serialize_newick(const PhyloTree& tree);

enum class BaselineKind { Random, Permutation };

struct BaselineResult {
  BaselineKind kind = BaselineKind::Random;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

std::string_view to_string(BaselineKind kind);

struct RandomBaselineOptions {
  std::size_t iterations = 50'000;
  double lo = 0.3;
  double hi = 0.8;
  std::uint64_t seed = 0;
  ClusterMetric metric = ClusterMetric::RowEuclidean;
};

/// Symmetric matrix with unit diagonal and off-diagonal entries drawn from
/// U[lo, hi) in row-major upper-triangle order from `rng`.
MatrixXd random_similarity_matrix(Index languages, double lo, double hi, Rng& rng);

/// Applies a uniform random permutation to the strict upper triangle and
/// mirrors it, keeping the unit diagonal.
MatrixXd permute_similarity_matrix(const MatrixXd& matrix, Rng& rng);

/// Mean distance to `gold` of trees clustered from uniformly random matrices.
/// Iteration i draws from Rng::stream(seed, i).
BaselineResult random_baseline(const std::vector<LanguageId>& languages, const PhyloTree& gold,
                               const RandomBaselineOptions& options = {});

/// Mean distance to `gold` of trees clustered from scrambled copies of `matrix`.
BaselineResult permutation_baseline(const LanguageSimilarityMatrix& matrix, const PhyloTree& gold,
                                    std::size_t iterations = 50'000, std::uint64_t seed = 0,
                                    ClusterMetric metric = ClusterMetric::RowEuclidean);

struct TreeScore {
  double model_distance = 0.0;
  double baseline_mean = 0.0;
  double quality_change_pct = 0.0;
};

/// (baseline - model) / baseline * 100; positive means closer to gold than chance.
double quality_change_pct(double model_distance, double baseline_mean);

TreeScore score_tree(const PhyloTree& model, const PhyloTree& gold, double baseline_mean);

/// Merge table as CSV: step,left,right,height,size,members.
void write_merges_csv(std::ostream& out, const PhyloTree& tree);

}  // namespace semdrift
