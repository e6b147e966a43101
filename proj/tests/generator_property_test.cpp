#include <gtest/gtest.h>

#include <random>

#include "docgen/generator.hpp"
#include "support/test_support.hpp"

namespace docgen {
namespace {

// generate() succeeds exactly when the brute-force oracle finds something,
// and its output is one of the oracle's sequences.
TEST(GeneratorProperty, AgreesWithOracleOnSmallPools) {
  std::mt19937_64 rng(20170915);
  int feasible_cases = 0;
  int infeasible_cases = 0;
  for (int round = 0; round < 600; ++round) {
    const auto rc = testing::random_small_case(rng);
    const ClipBank bank = parse_bank(rc.manifest);
    const auto valid = oracle_enumerate(bank, rc.selection, rc.constraints);
    const std::uint64_t seed = rng();
    try {
      const Documentary doc = generate(bank, rc.selection, rc.constraints, seed);
      EXPECT_FALSE(valid.empty()) << rc.manifest;
      EXPECT_TRUE(valid.count(doc.clip_ids())) << rc.manifest;
      EXPECT_TRUE(testing::documentary_violations(bank, doc).empty());
      ++feasible_cases;
    } catch (const InfeasibleError& e) {
      EXPECT_TRUE(valid.empty()) << rc.manifest;
      EXPECT_NE(e.reason(), InfeasibleReason::kRestartBudgetExhausted);
      ++infeasible_cases;
    }
  }
  EXPECT_GT(feasible_cases, 100);
  EXPECT_GT(infeasible_cases, 100);
}

TEST(GeneratorProperty, FeasibleMatchesOracle) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 600; ++round) {
    auto rc = testing::random_small_case(rng);
    const ClipBank bank = parse_bank(rc.manifest);
    for (bool coverage : {true, false}) {
      rc.constraints.require_topic_coverage = coverage;
      const auto valid = oracle_enumerate(bank, rc.selection, rc.constraints);
      const auto report = feasible(bank, rc.selection, rc.constraints);
      EXPECT_EQ(report.feasible, !valid.empty()) << rc.manifest;
      EXPECT_EQ(report.feasible, report.witness.has_value());
      EXPECT_EQ(report.feasible, !report.reason.has_value());
      if (report.witness) EXPECT_TRUE(valid.count(*report.witness)) << rc.manifest;
      try {
        const auto doc = generate(bank, rc.selection, rc.constraints, round);
        EXPECT_TRUE(report.feasible);
      } catch (const InfeasibleError& e) {
        ASSERT_TRUE(report.reason);
        EXPECT_EQ(e.reason(), *report.reason);
      }
    }
  }
}

TEST(GeneratorProperty, UnionLaw) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    const auto rc = testing::random_small_case(rng);
    const ClipBank bank = parse_bank(rc.manifest);
    const auto& topics = bank.topics();
    const auto& a = topics[rng() % topics.size()].key;
    const auto& b = topics[rng() % topics.size()].key;
    auto both = filter_candidates(bank, {{a, b}});
    auto left = filter_candidates(bank, {{a}});
    const auto right = filter_candidates(bank, {{b}});
    left.insert(left.end(), right.begin(), right.end());
    std::sort(left.begin(), left.end());
    left.erase(std::unique(left.begin(), left.end()), left.end());
    EXPECT_EQ(both, left);
  }
}

// Larger random banks, beyond oracle reach: every success must still satisfy
// the documentary rules.
TEST(GeneratorProperty, SoundOnLargerBanks) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> vocab = {"t0", "t1", "t2", "t3", "t4", "t5"};
  for (int round = 0; round < 150; ++round) {
    std::vector<testing::ClipSpec> specs;
    const int n = 30 + static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i) {
      testing::ClipSpec s{"c" + std::to_string(i), "p" + std::to_string(rng() % 9),
                          18 + static_cast<int>(rng() % 57), {vocab[rng() % vocab.size()]},
                          static_cast<int>(rng() % 10)};
      specs.push_back(std::move(s));
    }
    const ClipBank bank = testing::make_bank(vocab, specs);
    FilterSelection sel{{vocab[rng() % 6], vocab[rng() % 6], vocab[rng() % 6]}};
    GenerationConstraints c;
    c.max_clips_per_speaker = 1 + static_cast<int>(rng() % 3);
    try {
      const Documentary doc = generate(bank, sel, c, rng());
      EXPECT_TRUE(testing::documentary_violations(bank, doc).empty());
    } catch (const InfeasibleError&) {
    }
  }
}

}  // namespace
}  // namespace docgen
