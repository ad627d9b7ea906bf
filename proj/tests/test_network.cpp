#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "geoseg/network.hpp"
#include "oracles.hpp"
#include "random_graphs.hpp"

using namespace geoseg;

TEST(CountNetwork, EmptyGraph) {
  const auto roster = fixtures::two_schools();
  const StudentGraph g({{"a", "1"}, {"b", "2"}}, {});
  const auto net = build_count_network(g, roster);
  for (auto w : net.network.weights()) EXPECT_EQ(w, 0u);
}

TEST(CountNetwork, FourStudentFixture) {
  const auto net = build_count_network(fixtures::four_students(), fixtures::two_schools());
  EXPECT_EQ(net.network.kind(), NetworkKind::RawCount);
  EXPECT_EQ(net.network.weight(0, 1), 2u);
  EXPECT_EQ(net.network.weight(1, 0), 2u);
  EXPECT_EQ(net.network.weight(0, 0), 0u);
  EXPECT_EQ(net.network.weight(1, 1), 0u);
  EXPECT_EQ(net.intra_school_edges, (std::vector<std::uint64_t>{1, 0}));
}

TEST(CountNetwork, UnknownSchool) {
  const StudentGraph g({{"a", "1"}, {"b", "9"}}, {{"a", "b"}});
  try {
    build_count_network(g, fixtures::two_schools());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownSchoolId);
  }
  EXPECT_THROW(build_min_symmetrized_network(g, fixtures::two_schools()), Error);
}

TEST(MinSymmetrized, FourStudentFixture) {
  const auto net = build_min_symmetrized_network(fixtures::four_students(), fixtures::two_schools());
  EXPECT_EQ(net.directed[0 * 2 + 1], 2u);  // a and b each have friend c
  EXPECT_EQ(net.directed[1 * 2 + 0], 1u);  // only c
  EXPECT_EQ(net.network.weight(0, 1), 1u);
  EXPECT_EQ(net.network.kind(), NetworkKind::MinSymmetrized);
}

TEST(MinSymmetrized, SingleCrossEdge) {
  const StudentGraph g({{"a", "1"}, {"c", "2"}}, {{"a", "c"}});
  const auto roster = fixtures::two_schools();
  EXPECT_EQ(build_count_network(g, roster).network.weight(0, 1), 1u);
  const auto m = build_min_symmetrized_network(g, roster);
  EXPECT_EQ(m.directed[1], 1u);
  EXPECT_EQ(m.directed[2], 1u);
  EXPECT_EQ(m.network.weight(0, 1), 1u);
}

TEST(Networks, MatchBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [graph, roster] = random_graphs::student_graph(rng, 60, 8);
    const auto brute = oracle::school_networks(graph, roster);
    const auto a = build_count_network(graph, roster);
    const auto hat = build_min_symmetrized_network(graph, roster);
    const std::size_t n = roster.size();
    std::uint64_t upper = 0;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = 0; l < n; ++l) {
        ASSERT_EQ(a.network.weight(k, l), brute.a[k][l]);
        ASSERT_EQ(hat.directed[k * n + l], brute.a_tilde[k][l]);
        ASSERT_EQ(hat.network.weight(k, l), brute.a_hat[k][l]);
        ASSERT_LE(hat.network.weight(k, l), std::min(brute.a_tilde[k][l], brute.a_tilde[l][k]));
        ASSERT_LE(std::min(brute.a_tilde[k][l], brute.a_tilde[l][k]), a.network.weight(k, l));
        if (k < l) upper += a.network.weight(k, l);
      }
    }
    std::uint64_t intra = 0;
    for (auto c : a.intra_school_edges) intra += c;
    ASSERT_EQ(upper + intra, graph.edges().size());
    ASSERT_EQ(degree_centrality(binarize(a.network)), degree_centrality(a.network));
  }
}

TEST(Binarize, Basics) {
  const auto roster = fixtures::two_schools();
  const SchoolNetwork zero(roster.ids(), std::vector<std::uint32_t>(4, 0), NetworkKind::RawCount);
  EXPECT_EQ(binarize(zero).weights(), zero.weights());

  const auto a = build_count_network(fixtures::four_students(), roster).network;
  const auto b = binarize(a);
  EXPECT_EQ(b.kind(), NetworkKind::Binary);
  EXPECT_EQ(b.weight(0, 1), 1u);
  EXPECT_EQ(binarize(b), b);
}

TEST(DegreeCentrality, CompleteStarAndFixture) {
  std::vector<std::string> ids{"h", "a", "b", "c", "d"};
  std::vector<std::uint32_t> complete(25, 1), star(25, 0);
  for (std::size_t i = 0; i < 5; ++i) complete[i * 5 + i] = 0;
  for (std::size_t i = 1; i < 5; ++i) star[i] = star[i * 5] = 3;
  for (const auto& [id, deg] : degree_centrality(SchoolNetwork(ids, complete, NetworkKind::Binary))) {
    EXPECT_EQ(deg, 4u) << id;
  }
  const auto s = degree_centrality(SchoolNetwork(ids, star, NetworkKind::RawCount));
  EXPECT_EQ(s.at("h"), 4u);
  for (const char* leaf : {"a", "b", "c", "d"}) EXPECT_EQ(s.at(leaf), 1u);

  const auto f = degree_centrality(build_count_network(fixtures::four_students(), fixtures::two_schools()).network);
  EXPECT_EQ(f.at("1"), 1u);
  EXPECT_EQ(f.at("2"), 1u);
}

TEST(SchoolNetwork, RejectsInvalidMatrices) {
  const std::vector<std::string> ids{"a", "b"};
  EXPECT_THROW(SchoolNetwork(ids, {0, 1, 2, 0}, NetworkKind::RawCount), Error);
  EXPECT_THROW(SchoolNetwork(ids, {1, 0, 0, 0}, NetworkKind::RawCount), Error);
  EXPECT_THROW(SchoolNetwork(ids, {0, 2, 2, 0}, NetworkKind::Binary), Error);
  EXPECT_THROW(SchoolNetwork(ids, {0, 1, 1}, NetworkKind::RawCount), Error);
}
