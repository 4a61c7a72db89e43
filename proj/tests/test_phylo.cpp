#include "helpers.hpp"
#include "oracles.hpp"

#include "semdrift/error.hpp"
#include "semdrift/parallel.hpp"
#include "semdrift/bundled.hpp"
#include "semdrift/phylo.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

using namespace semdrift;

namespace {

LanguageSimilarityMatrix labelled(const MatrixXd& values) {
  LanguageSimilarityMatrix m;
  for (Index i = 0; i < values.rows(); ++i) m.languages.emplace_back("l" + std::to_string(i));
  m.values = values;
  return m;
}

MatrixXd random_similarity(Index l, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatrixXd m = MatrixXd::Identity(l, l);
  for (Index i = 0; i < l; ++i)
    for (Index j = i + 1; j < l; ++j) m(i, j) = m(j, i) = u(gen);
  return m;
}

std::vector<std::set<int>> merge_members(const std::vector<Merge>& merges, int leaves) {
  std::vector<std::set<int>> members;
  for (int i = 0; i < leaves; ++i) members.push_back({i});
  std::vector<std::set<int>> out;
  for (const auto& m : merges) {
    std::set<int> s = members[static_cast<std::size_t>(m.left)];
    s.insert(members[static_cast<std::size_t>(m.right)].begin(),
             members[static_cast<std::size_t>(m.right)].end());
    members.push_back(s);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(Ward, TwoLanguagesMergeAtRowDistance) {
  MatrixXd s(2, 2);
  s << 1.0, 0.4, 0.4, 1.0;
  const PhyloTree t = ward_cluster(labelled(s));
  ASSERT_EQ(t.merges().size(), 1u);
  EXPECT_NEAR(t.merges()[0].height, (s.row(0) - s.row(1)).norm(), 1e-15);
  EXPECT_EQ(t.leaf_path_edges("l0", "l1"), 2);
}

TEST(Ward, MatchesCentroidOracle) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Index l = 3 + trial % 8;
    const MatrixXd s = random_similarity(l, gen);
    const PhyloTree t = ward_cluster(labelled(s));
    const auto expected = oracle::ward_centroid(s);
    const auto got = merge_members(t.merges(), static_cast<int>(l));
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      EXPECT_EQ(got[k], expected[k].members) << "trial " << trial << " step " << k;
      EXPECT_NEAR(t.merges()[k].height, expected[k].height, 1e-9);
    }
  }
}

TEST(Ward, HeightsMonotone) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 30; ++trial) {
    const PhyloTree t = ward_cluster(labelled(random_similarity(10, gen)));
    for (std::size_t k = 1; k < t.merges().size(); ++k) {
      EXPECT_GE(t.merges()[k].height, t.merges()[k - 1].height - 1e-12);
      EXPECT_GE(t.merges()[k].height, 0.0);
    }
  }
}

TEST(Ward, TiesGoToSmallestPair) {
  // All rows equidistant: the first merge must be (0, 1).
  MatrixXd s = MatrixXd::Constant(4, 4, 0.5);
  s.diagonal().setOnes();
  const PhyloTree t = ward_cluster(labelled(s));
  EXPECT_EQ(t.merges()[0].left, 0);
  EXPECT_EQ(t.merges()[0].right, 1);
}

TEST(Ward, InvariantUnderLanguageOrder) {
  std::mt19937_64 gen(13);
  const MatrixXd s = random_similarity(7, gen);
  const auto a = labelled(s);
  std::vector<Index> perm{3, 0, 6, 2, 5, 1, 4};
  LanguageSimilarityMatrix b;
  b.values.resize(7, 7);
  for (Index i = 0; i < 7; ++i) {
    b.languages.push_back(a.languages[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
    for (Index j = 0; j < 7; ++j)
      b.values(i, j) = s(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  EXPECT_EQ(tree_distance(ward_cluster(a), ward_cluster(b)), 0.0);
}

TEST(Ward, RejectsAsymmetricInput) {
  MatrixXd s = MatrixXd::Identity(3, 3);
  s(0, 1) = 0.5;
  EXPECT_THROW(ward_cluster(labelled(s)), ValidationError);
}

TEST(Ward, OneMinusSimilarityMetric) {
  MatrixXd s(3, 3);
  s << 1, 0.9, 0.1, 0.9, 1, 0.2, 0.1, 0.2, 1;
  const PhyloTree t = ward_cluster(labelled(s), ClusterMetric::OneMinusSimilarity);
  EXPECT_NEAR(t.merges()[0].height, 0.1, 1e-12);
  EXPECT_EQ(t.leaf_path_edges("l0", "l1"), 2);
}

TEST(PathEdges, BasicTopologies) {
  const PhyloTree t = parse_newick("((a,b),(c,d));");
  EXPECT_EQ(t.leaf_count(), 4u);
  EXPECT_TRUE(t.is_binary());
  EXPECT_EQ(t.leaf_path_edges("a", "b"), 2);
  EXPECT_EQ(t.leaf_path_edges("a", "c"), 4);
  EXPECT_THROW(t.leaf_path_edges("a", "z"), ValidationError);
  EXPECT_THROW(t.leaf_path_edges("a", "a"), ValidationError);
}

TEST(PathEdges, MatchBfsOracle) {
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 20; ++trial) {
    const auto et = oracle::random_binary_tree(8, gen);
    const PhyloTree t = parse_newick(et.newick);
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j)
        EXPECT_EQ(t.leaf_path_edges(et.labels[static_cast<std::size_t>(i)],
                                    et.labels[static_cast<std::size_t>(j)]),
                  oracle::bfs_edges(et, i, j));
  }
}

TEST(TreeDistance, CaterpillarVersusBalanced) {
  const PhyloTree balanced = parse_newick("((a,b),(c,d));");
  const PhyloTree caterpillar = parse_newick("(((a,b),c),d);");
  // Balanced: ab 2, ac 4, ad 4, bc 4, bd 4, cd 2.
  // Caterpillar: ab 2, ac 3, ad 4, bc 3, bd 4, cd 3.
  EXPECT_EQ(tree_distance(balanced, caterpillar), 3.0);
  EXPECT_EQ(tree_distance(caterpillar, balanced), 3.0);
  EXPECT_EQ(tree_distance(balanced, balanced), 0.0);
}

TEST(TreeDistance, MatchesOracleOnRandomTrees) {
  std::mt19937_64 gen(15);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 4 + trial % 9;
    const auto a = oracle::random_binary_tree(m, gen);
    const auto b = oracle::random_binary_tree(m, gen);
    const PhyloTree ta = parse_newick(a.newick), tb = parse_newick(b.newick);
    EXPECT_EQ(tree_distance(ta, tb), oracle::tree_distance(a, b));
    EXPECT_EQ(tree_distance(ta, ta), 0.0);
  }
}

TEST(TreeDistance, LeafMismatchListsDifferences) {
  try {
    tree_distance(parse_newick("((a,b),c);"), parse_newick("((a,b),d);"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find('c'), std::string::npos);
    EXPECT_NE(msg.find('d'), std::string::npos);
  }
}

TEST(Newick, ParsesLengthsCommentsAndQuotes) {
  const PhyloTree t = parse_newick("[gold] (('x y':0.5,b:1)[inner]:2,c:3);");
  EXPECT_EQ(t.leaf_count(), 3u);
  EXPECT_EQ(t.leaf_path_edges("x y", "b"), 2);
  EXPECT_EQ(t.leaf_path_edges("x y", "c"), 3);
}

TEST(Newick, Errors) {
  EXPECT_THROW(parse_newick("((a,b),c;"), ValidationError);
  EXPECT_THROW(parse_newick("((a,b),c));"), ValidationError);
  EXPECT_THROW(parse_newick("((a,a),c);"), ValidationError);
  EXPECT_THROW(parse_newick("((a,),c);"), ValidationError);
}

TEST(Newick, RoundTripPreservesPaths) {
  std::mt19937_64 gen(16);
  const auto et = oracle::random_binary_tree(10, gen);
  const PhyloTree t = parse_newick(et.newick);
  const PhyloTree back = parse_newick(serialize_newick(t));
  const auto labels = t.leaves();
  EXPECT_EQ(t.path_matrix(labels), back.path_matrix(labels));
}

TEST(Newick, ClusteredTreeCarriesBranchLengths) {
  std::mt19937_64 gen(17);
  const PhyloTree t = ward_cluster(labelled(random_similarity(5, gen)));
  const std::string text = serialize_newick(t);
  EXPECT_NE(text.find(':'), std::string::npos);
  const PhyloTree back = parse_newick(text);
  EXPECT_EQ(tree_distance(t, back), 0.0);
}

TEST(Newick, BundledGoldTrees) {
  const auto words = parse_newick(std::string(*bundled_resource("gold_20_words")));
  EXPECT_EQ(words.leaf_count(), 20u);
  const auto sentences = parse_newick(std::string(*bundled_resource("gold_17_sentences")));
  auto leaves = sentences.leaves();
  std::sort(leaves.begin(), leaves.end());
  EXPECT_EQ(leaves, (std::vector<std::string>{"bg", "cs", "da", "de", "en", "es", "fr", "it", "lt",
                                              "lv", "nl", "pl", "pt", "ro", "sk", "sl", "sv"}));
}

TEST(Baseline, RandomMatrixShape) {
  Rng rng(3);
  const MatrixXd m = random_similarity_matrix(6, 0.3, 0.8, rng);
  EXPECT_EQ(m, m.transpose());
  for (Index i = 0; i < 6; ++i) {
    EXPECT_EQ(m(i, i), 1.0);
    for (Index j = 0; j < 6; ++j)
      if (i != j) {
        EXPECT_GE(m(i, j), 0.3);
        EXPECT_LE(m(i, j), 0.8);
      }
  }
}

TEST(Baseline, PermutationKeepsValues) {
  std::mt19937_64 gen(18);
  const MatrixXd s = random_similarity(6, gen);
  Rng rng(5);
  const MatrixXd p = permute_similarity_matrix(s, rng);
  EXPECT_EQ(p, p.transpose());
  std::multiset<double> before, after;
  for (Index i = 0; i < 6; ++i)
    for (Index j = i + 1; j < 6; ++j) {
      before.insert(s(i, j));
      after.insert(p(i, j));
    }
  EXPECT_EQ(before, after);
  EXPECT_EQ(p.diagonal(), VectorXd::Ones(6));
}

TEST(Baseline, SingleIterationEqualsManualRun) {
  const PhyloTree gold = parse_newick("(((l0,l1),l2),(l3,(l4,l5)));");
  std::vector<LanguageId> langs;
  for (int i = 0; i < 6; ++i) langs.emplace_back("l" + std::to_string(i));
  RandomBaselineOptions opts;
  opts.iterations = 1;
  opts.seed = 99;
  const auto result = random_baseline(langs, gold, opts);

  Rng rng = Rng::stream(99, 0);
  LanguageSimilarityMatrix m;
  m.languages = langs;
  m.values = random_similarity_matrix(6, 0.3, 0.8, rng);
  EXPECT_EQ(result.mean, tree_distance(ward_cluster(m), gold));
  EXPECT_EQ(result.iterations, 1u);
  EXPECT_EQ(result.seed, 99u);
}

TEST(Baseline, ThreeLeavesExpectation) {
  // Each pair is equally likely to merge first; a wrong pair costs exactly 2.
  const PhyloTree gold = parse_newick("((a,b),c);");
  RandomBaselineOptions opts;
  opts.iterations = 2000;
  const auto r = random_baseline({LanguageId("a"), LanguageId("b"), LanguageId("c")}, gold, opts);
  EXPECT_NEAR(r.mean, 4.0 / 3.0, 0.1);
  EXPECT_NEAR(r.stddev, std::sqrt(8.0 / 9.0), 0.05);
}

TEST(Baseline, DeterministicAcrossRunsAndThreads) {
  const PhyloTree gold = parse_newick("(((l0,l1),l2),((l3,l4),(l5,(l6,l7))));");
  std::vector<LanguageId> langs;
  for (int i = 0; i < 8; ++i) langs.emplace_back("l" + std::to_string(i));
  RandomBaselineOptions opts;
  opts.iterations = 500;
  opts.seed = 4;
  set_thread_count(1);
  const auto a = random_baseline(langs, gold, opts);
  set_thread_count(8);
  const auto b = random_baseline(langs, gold, opts);
  set_thread_count(0);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stddev, b.stddev);
  opts.seed = 5;
  EXPECT_NE(random_baseline(langs, gold, opts).mean, a.mean);
}

TEST(Baseline, InvalidRangeThrows) {
  const PhyloTree gold = parse_newick("((a,b),c);");
  RandomBaselineOptions opts;
  opts.lo = 0.8;
  opts.hi = 0.3;
  EXPECT_THROW(random_baseline({LanguageId("a"), LanguageId("b"), LanguageId("c")}, gold, opts),
               ValidationError);
}

TEST(Baseline, PermutationOfEqualValuesIsConstant) {
  MatrixXd s = MatrixXd::Constant(5, 5, 0.6);
  s.diagonal().setOnes();
  const auto m = labelled(s);
  const PhyloTree gold = parse_newick("((l0,l1),((l2,l3),l4));");
  const double model = tree_distance(ward_cluster(m), gold);
  const auto r = permutation_baseline(m, gold, 50, 1);
  EXPECT_EQ(r.mean, model);
  EXPECT_EQ(r.stddev, 0.0);
}

TEST(Baseline, PermutationLeafMismatchThrows) {
  MatrixXd s = MatrixXd::Identity(3, 3);
  EXPECT_THROW(permutation_baseline(labelled(s), parse_newick("((a,b),c);"), 5, 0), ValidationError);
}

TEST(Score, QualityChange) {
  EXPECT_EQ(quality_change_pct(10.0, 10.0), 0.0);
  EXPECT_NEAR(quality_change_pct(0.466 * 50.0, 50.0), 53.4, 1e-9);
  EXPECT_NEAR(quality_change_pct(1.389 * 50.0, 50.0), -38.9, 1e-9);
  EXPECT_THROW(quality_change_pct(1.0, 0.0), ValidationError);
  const PhyloTree t = parse_newick("((a,b),(c,d));");
  const auto s = score_tree(t, t, 8.0);
  EXPECT_EQ(s.model_distance, 0.0);
  EXPECT_EQ(s.quality_change_pct, 100.0);
}

TEST(MergesCsv, ListsMembers) {
  MatrixXd s(3, 3);
  s << 1, 0.9, 0.1, 0.9, 1, 0.2, 0.1, 0.2, 1;
  std::ostringstream out;
  write_merges_csv(out, ward_cluster(labelled(s)));
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("step,left,right,height,size,members\n", 0), 0u);
  EXPECT_NE(text.find("l0|l1"), std::string::npos);
}
