#include "semdrift/phylo.hpp"

#include "semdrift/error.hpp"
#include "semdrift/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <unordered_map>

namespace semdrift {

// --- tree ------------------------------------------------------------------

PhyloTree PhyloTree::from_merges(std::vector<std::string> labels,
                                 const std::vector<Merge>& merges) {
  const int m = static_cast<int>(labels.size());
  if (m < 1) throw ValidationError("tree needs at least one leaf");
  if (static_cast<int>(merges.size()) != m - 1) {
    throw ValidationError("a linkage over " + std::to_string(m) + " leaves needs " +
                          std::to_string(m - 1) + " merges");
  }
  PhyloTree tree;
  tree.nodes_.resize(static_cast<std::size_t>(2 * m - 1));
  for (int i = 0; i < m; ++i) tree.nodes_[static_cast<std::size_t>(i)].label = std::move(labels[static_cast<std::size_t>(i)]);
  for (int s = 0; s < m - 1; ++s) {
    const Merge& merge = merges[static_cast<std::size_t>(s)];
    const int id = m + s;
    for (int child : {merge.left, merge.right}) {
      if (child < 0 || child >= id || tree.nodes_[static_cast<std::size_t>(child)].parent != -1) {
        throw ValidationError("invalid linkage at step " + std::to_string(s));
      }
      tree.nodes_[static_cast<std::size_t>(child)].parent = id;
    }
    auto& node = tree.nodes_[static_cast<std::size_t>(id)];
    node.children = {merge.left, merge.right};
    node.height = merge.height;
  }
  for (auto& node : tree.nodes_) {
    if (node.parent >= 0) {
      node.branch_length = tree.nodes_[static_cast<std::size_t>(node.parent)].height - node.height;
    }
  }
  tree.merges_ = merges;
  tree.root_ = 2 * m - 2;
  tree.index();
  return tree;
}

PhyloTree PhyloTree::from_nodes(std::vector<Node> nodes, int root) {
  PhyloTree tree;
  tree.nodes_ = std::move(nodes);
  tree.root_ = root;
  tree.index();
  return tree;
}

void PhyloTree::index() {
  if (root_ < 0 || root_ >= static_cast<int>(nodes_.size())) {
    throw ValidationError("tree has no valid root");
  }
  depth_.assign(nodes_.size(), -1);
  leaves_.clear();
  std::set<std::string, std::less<>> labels;
  std::vector<int> stack{root_};
  depth_[static_cast<std::size_t>(root_)] = 0;
  std::size_t visited = 0;
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    ++visited;
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.children.empty()) {
      if (n.label.empty()) throw ValidationError("tree has an unlabelled leaf");
      if (!labels.insert(n.label).second) {
        throw ValidationError("duplicate leaf label '" + n.label + "'");
      }
      leaves_.push_back(id);
    }
    for (int child : n.children) {
      if (depth_[static_cast<std::size_t>(child)] != -1) {
        throw ValidationError("tree structure contains a cycle");
      }
      depth_[static_cast<std::size_t>(child)] = depth_[static_cast<std::size_t>(id)] + 1;
      stack.push_back(child);
    }
  }
  if (visited != nodes_.size()) throw ValidationError("tree has nodes unreachable from the root");
  std::sort(leaves_.begin(), leaves_.end());
}

std::vector<std::string> PhyloTree::leaves() const {
  std::vector<std::string> out;
  out.reserve(leaves_.size());
  for (int id : leaves_) out.push_back(nodes_[static_cast<std::size_t>(id)].label);
  return out;
}

std::optional<int> PhyloTree::leaf_node(std::string_view label) const {
  for (int id : leaves_) {
    if (nodes_[static_cast<std::size_t>(id)].label == label) return id;
  }
  return std::nullopt;
}

bool PhyloTree::is_binary() const {
  return std::all_of(nodes_.begin(), nodes_.end(), [](const Node& n) {
    return n.children.empty() || n.children.size() == 2;
  });
}

namespace {

int edges_between(const std::vector<PhyloTree::Node>& nodes, const std::vector<int>& depth, int a,
                  int b) {
  int edges = 0;
  while (depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)]) {
    a = nodes[static_cast<std::size_t>(a)].parent;
    ++edges;
  }
  while (depth[static_cast<std::size_t>(b)] > depth[static_cast<std::size_t>(a)]) {
    b = nodes[static_cast<std::size_t>(b)].parent;
    ++edges;
  }
  while (a != b) {
    a = nodes[static_cast<std::size_t>(a)].parent;
    b = nodes[static_cast<std::size_t>(b)].parent;
    edges += 2;
  }
  return edges;
}

}  // namespace

int PhyloTree::leaf_path_edges(std::string_view a, std::string_view b) const {
  const auto na = leaf_node(a);
  const auto nb = leaf_node(b);
  if (!na) throw ValidationError("unknown leaf '" + std::string(a) + "'");
  if (!nb) throw ValidationError("unknown leaf '" + std::string(b) + "'");
  if (*na == *nb) throw ValidationError("path query needs two distinct leaves");
  return edges_between(nodes_, depth_, *na, *nb);
}

Eigen::MatrixXi PhyloTree::path_matrix(const std::vector<std::string>& labels) const {
  std::vector<int> ids;
  ids.reserve(labels.size());
  for (const auto& l : labels) {
    auto id = leaf_node(l);
    if (!id) throw ValidationError("unknown leaf '" + l + "'");
    ids.push_back(*id);
  }
  const auto n = static_cast<Index>(ids.size());
  Eigen::MatrixXi out = Eigen::MatrixXi::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      out(i, j) = out(j, i) = edges_between(nodes_, depth_, ids[static_cast<std::size_t>(i)],
                                            ids[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

// --- Ward ------------------------------------------------------------------

MatrixXd cluster_distances(const MatrixXd& similarity, ClusterMetric metric) {
  const Index l = similarity.rows();
  MatrixXd d = MatrixXd::Zero(l, l);
  for (Index i = 0; i < l; ++i) {
    for (Index j = i + 1; j < l; ++j) {
      const double v = metric == ClusterMetric::RowEuclidean
                           ? (similarity.row(i) - similarity.row(j)).norm()
                           : std::max(0.0, 1.0 - similarity(i, j));
      d(i, j) = d(j, i) = v;
    }
  }
  return d;
}

std::vector<Merge> ward_linkage(const MatrixXd& distances) {
  const Index l = distances.rows();
  MatrixXd d = distances;
  std::vector<int> node(static_cast<std::size_t>(l));
  std::vector<int> size(static_cast<std::size_t>(l), 1);
  std::vector<bool> active(static_cast<std::size_t>(l), true);
  for (Index i = 0; i < l; ++i) node[static_cast<std::size_t>(i)] = static_cast<int>(i);

  std::vector<Merge> merges;
  merges.reserve(static_cast<std::size_t>(std::max<Index>(l - 1, 0)));
  for (Index step = 0; step + 1 < l; ++step) {
    Index bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < l; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      for (Index j = i + 1; j < l; ++j) {
        if (!active[static_cast<std::size_t>(j)]) continue;
        if (d(i, j) < best || bi < 0) {
          best = d(i, j);
          bi = i;
          bj = j;
        }
      }
    }

    const auto ui = static_cast<std::size_t>(bi);
    const auto uj = static_cast<std::size_t>(bj);
    const double ni = size[ui];
    const double nj = size[uj];
    const double dij2 = best * best;
    for (Index k = 0; k < l; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      if (!active[uk] || k == bi || k == bj) continue;
      const double nk = size[uk];
      const double num = (ni + nk) * d(bi, k) * d(bi, k) + (nj + nk) * d(bj, k) * d(bj, k) -
                         nk * dij2;
      const double v = std::sqrt(std::max(0.0, num / (ni + nj + nk)));
      d(bi, k) = d(k, bi) = v;
    }

    merges.push_back({node[ui], node[uj], best, size[ui] + size[uj]});
    node[ui] = static_cast<int>(l + step);
    size[ui] += size[uj];
    active[uj] = false;
  }
  return merges;
}

PhyloTree ward_cluster(const LanguageSimilarityMatrix& matrix, ClusterMetric metric) {
  const Index l = matrix.values.rows();
  if (l < 2 || matrix.values.cols() != l) {
    throw ValidationError("clustering needs a square matrix over at least 2 languages");
  }
  if (static_cast<Index>(matrix.languages.size()) != l) {
    throw ValidationError("language labels do not match the matrix size");
  }
  if (!matrix.values.allFinite()) throw ValidationError("similarity matrix has non-finite entries");
  for (Index i = 0; i < l; ++i) {
    for (Index j = i + 1; j < l; ++j) {
      if (std::abs(matrix.values(i, j) - matrix.values(j, i)) > 1e-12) {
        throw ValidationError("similarity matrix is not symmetric at (" +
                              matrix.languages[static_cast<std::size_t>(i)].code() + ", " +
                              matrix.languages[static_cast<std::size_t>(j)].code() + ")");
      }
    }
  }
  std::vector<std::string> labels;
  for (const auto& id : matrix.languages) labels.push_back(id.code());
  return PhyloTree::from_merges(std::move(labels),
                                ward_linkage(cluster_distances(matrix.values, metric)));
}

// --- tree distance -----------------------------------------------------------

namespace {

void require_same_labels(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a == b) return;
  std::vector<std::string> only_a, only_b;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s.empty() ? std::string("-") : s;
  };
  throw ValidationError("leaf sets differ; only in first: " + join(only_a) +
                        "; only in second: " + join(only_b));
}

}  // namespace

void check_same_leaves(const PhyloTree& t, const PhyloTree& g) {
  require_same_labels(t.leaves(), g.leaves());
}

namespace {

double squared_path_difference(const Eigen::MatrixXi& a, const Eigen::MatrixXi& b) {
  double sum = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = i + 1; j < a.cols(); ++j) {
      const double diff = a(i, j) - b(i, j);
      sum += diff * diff;
    }
  }
  return sum;
}

}  // namespace

double tree_distance(const PhyloTree& t, const PhyloTree& g) {
  check_same_leaves(t, g);
  const auto labels = t.leaves();
  return squared_path_difference(t.path_matrix(labels), g.path_matrix(labels));
}

// --- Newick ------------------------------------------------------------------

namespace {

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : text_(text) {}

  PhyloTree parse() {
    skip();
    if (at_end()) fail("empty tree");
    const int root = subtree(-1);
    skip();
    if (!at_end() && peek() == ')') fail("unbalanced parentheses");
    if (at_end() || peek() != ';') fail("expected ';' at end of tree");
    ++pos_;
    skip();
    if (!at_end()) fail("unexpected text after ';'");
    return PhyloTree::from_nodes(std::move(nodes_), root);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("newick: " + what + " at offset " + std::to_string(pos_));
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '[') {
        const auto close = text_.find(']', pos_);
        if (close == std::string_view::npos) fail("unterminated comment");
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  std::string label() {
    skip();
    std::string out;
    if (!at_end() && peek() == '\'') {
      ++pos_;
      while (true) {
        if (at_end()) fail("unterminated quoted label");
        if (peek() == '\'') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {
            out += '\'';
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        out += text_[pos_++];
      }
      return out;
    }
    while (!at_end()) {
      const char c = peek();
      if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == '[' || c == ' ' ||
          c == '\t' || c == '\n' || c == '\r') {
        break;
      }
      out += c;
      ++pos_;
    }
    return out;
  }

  std::optional<double> branch_length() {
    skip();
    if (at_end() || peek() != ':') return std::nullopt;
    ++pos_;
    skip();
    const std::size_t start = pos_;
    while (!at_end() && std::string_view("0123456789.eE+-").find(peek()) != std::string_view::npos) {
      ++pos_;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc() || ptr != text_.data() + pos_ || start == pos_) {
      fail("malformed branch length");
    }
    return v;
  }

  int subtree(int parent) {
    skip();
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_.back().parent = parent;
    if (!at_end() && peek() == '(') {
      ++pos_;
      std::vector<int> children;
      while (true) {
        children.push_back(subtree(id));
        skip();
        if (at_end()) fail("unbalanced parentheses");
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ')') {
          ++pos_;
          break;
        }
        fail(std::string("unexpected '") + peek() + "'");
      }
      if (children.size() < 2) fail("internal node with a single child");
      nodes_[static_cast<std::size_t>(id)].children = std::move(children);
      nodes_[static_cast<std::size_t>(id)].label = label();
    } else {
      if (!at_end() && peek() == ')') fail("unbalanced parentheses");
      auto l = label();
      if (l.empty()) fail("leaf without a label");
      nodes_[static_cast<std::size_t>(id)].label = std::move(l);
    }
    nodes_[static_cast<std::size_t>(id)].branch_length = branch_length();
    return id;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<PhyloTree::Node> nodes_;
};

std::string quote_label(const std::string& label) {
  if (label.find_first_of("()[]':;, \t\n") == std::string::npos) return label;
  std::string out = "'";
  for (char c : label) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

void emit(const PhyloTree& tree, int id, std::string& out) {
  const auto& n = tree.node(id);
  if (!n.children.empty()) {
    out += '(';
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i > 0) out += ',';
      emit(tree, n.children[i], out);
    }
    out += ')';
  }
  out += quote_label(n.label);
  if (n.branch_length && n.parent >= 0) out += ':' + format_number(*n.branch_length);
}

}  // namespace

PhyloTree parse_newick(std::string_view text) { return NewickParser(text).parse(); }

std::string serialize_newick(const PhyloTree& tree) {
  std::string out;
  emit(tree, tree.root(), out);
  return out + ';';
}

// --- baselines -------------------------------------------------------------

std::string_view to_string(BaselineKind kind) {
  return kind == BaselineKind::Random ? "random" : "permutation";
}

MatrixXd random_similarity_matrix(Index languages, double lo, double hi, Rng& rng) {
  MatrixXd m = MatrixXd::Identity(languages, languages);
  for (Index i = 0; i < languages; ++i) {
    for (Index j = i + 1; j < languages; ++j) m(i, j) = m(j, i) = rng.uniform(lo, hi);
  }
  return m;
}

MatrixXd permute_similarity_matrix(const MatrixXd& matrix, Rng& rng) {
  const Index l = matrix.rows();
  std::vector<double> upper;
  for (Index i = 0; i < l; ++i) {
    for (Index j = i + 1; j < l; ++j) upper.push_back(matrix(i, j));
  }
  for (std::size_t i = upper.size(); i > 1; --i) {
    std::swap(upper[i - 1], upper[rng.below(i)]);
  }
  MatrixXd out = MatrixXd::Identity(l, l);
  std::size_t k = 0;
  for (Index i = 0; i < l; ++i) {
    for (Index j = i + 1; j < l; ++j) out(i, j) = out(j, i) = upper[k++];
  }
  return out;
}

namespace {

template <typename DrawMatrix>
BaselineResult run_baseline(BaselineKind kind, const std::vector<LanguageId>& languages,
                            const PhyloTree& gold, std::size_t iterations, std::uint64_t seed,
                            ClusterMetric metric, DrawMatrix draw) {
  if (iterations == 0) throw ValidationError("baseline needs at least one iteration");
  std::vector<std::string> labels;
  for (const auto& id : languages) labels.push_back(id.code());
  require_same_labels(labels, gold.leaves());
  const Eigen::MatrixXi gold_paths = gold.path_matrix(labels);
  std::vector<double> distances(iterations);
  parallel_for(iterations, [&](std::size_t it) {
    Rng rng = Rng::stream(seed, it);
    const MatrixXd sim = draw(rng);
    std::vector<std::string> names = labels;
    const PhyloTree tree = PhyloTree::from_merges(
        std::move(names), ward_linkage(cluster_distances(sim, metric)));
    distances[it] = squared_path_difference(tree.path_matrix(labels), gold_paths);
  });

  BaselineResult out;
  out.kind = kind;
  out.iterations = iterations;
  out.seed = seed;
  double sum = 0.0;
  for (double d : distances) sum += d;
  out.mean = sum / static_cast<double>(iterations);
  double var = 0.0;
  for (double d : distances) var += (d - out.mean) * (d - out.mean);
  out.stddev = std::sqrt(var / static_cast<double>(iterations));
  return out;
}

}  // namespace

BaselineResult random_baseline(const std::vector<LanguageId>& languages, const PhyloTree& gold,
                               const RandomBaselineOptions& options) {
  if (!(options.lo < options.hi) || !std::isfinite(options.lo) || !std::isfinite(options.hi)) {
    throw ValidationError("random baseline needs lo < hi");
  }
  if (languages.size() < 2) throw ValidationError("random baseline needs at least 2 languages");
  const auto l = static_cast<Index>(languages.size());
  auto result = run_baseline(BaselineKind::Random, languages, gold, options.iterations,
                             options.seed, options.metric, [&](Rng& rng) {
                               return random_similarity_matrix(l, options.lo, options.hi, rng);
                             });
  result.lo = options.lo;
  result.hi = options.hi;
  return result;
}

BaselineResult permutation_baseline(const LanguageSimilarityMatrix& matrix, const PhyloTree& gold,
                                    std::size_t iterations, std::uint64_t seed,
                                    ClusterMetric metric) {
  if (matrix.size() < 2) throw ValidationError("permutation baseline needs at least 2 languages");
  return run_baseline(BaselineKind::Permutation, matrix.languages, gold, iterations, seed, metric,
                      [&](Rng& rng) { return permute_similarity_matrix(matrix.values, rng); });
}

double quality_change_pct(double model_distance, double baseline_mean) {
  if (!(baseline_mean > 0.0)) throw ValidationError("baseline mean must be positive");
  return (baseline_mean - model_distance) / baseline_mean * 100.0;
}

TreeScore score_tree(const PhyloTree& model, const PhyloTree& gold, double baseline_mean) {
  TreeScore score;
  score.model_distance = tree_distance(model, gold);
  score.baseline_mean = baseline_mean;
  score.quality_change_pct = quality_change_pct(score.model_distance, baseline_mean);
  return score;
}

void write_merges_csv(std::ostream& out, const PhyloTree& tree) {
  const int m = static_cast<int>(tree.leaf_count());
  std::vector<std::string> members(tree.nodes().size());
  for (int i = 0; i < m; ++i) members[static_cast<std::size_t>(i)] = tree.node(i).label;
  out << "step,left,right,height,size,members\n";
  for (std::size_t s = 0; s < tree.merges().size(); ++s) {
    const Merge& merge = tree.merges()[s];
    const auto id = static_cast<std::size_t>(m) + s;
    members[id] = members[static_cast<std::size_t>(merge.left)] + '|' +
                  members[static_cast<std::size_t>(merge.right)];
    out << s << ',' << merge.left << ',' << merge.right << ',' << format_number(merge.height)
        << ',' << merge.size << ',' << members[id] << '\n';
  }
}

}  // namespace semdrift
