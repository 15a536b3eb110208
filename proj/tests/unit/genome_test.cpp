#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "sops/genome.hpp"

using namespace sops;

namespace {

// Valid tuples of each behavior in lexicographic order, enumerated by
// nested loops independently of the library's ranking arithmetic.
std::vector<Locus> enumerate_loci(Behavior b) {
  std::vector<Locus> out;
  switch (b) {
    case Behavior::Aggregation:
      for (int x = 0; x <= 3; ++x)
        for (int y = 0; y <= 2; ++y)
          for (int z = 0; z <= 3; ++z) out.push_back(AggregationLocus{x, y, z});
      break;
    case Behavior::Phototaxing:
      for (int x = 0; x <= 3; ++x)
        for (int y = 0; y <= 2; ++y)
          for (int z = 0; z <= 3; ++z)
            for (int l = 0; l < 3; ++l)
              out.push_back(PhototaxingLocus{x, y, z, static_cast<LightTransition>(l)});
      break;
    case Behavior::Separation: {
      auto pairs = [](int size) {
        std::vector<ColorCount> v;
        for (int t = 0; t <= size; ++t)
          for (int s = 0; s <= t; ++s) v.push_back({t, s});
        return v;
      };
      for (auto bb : pairs(3))
        for (auto mm : pairs(2))
          for (auto ff : pairs(3)) out.push_back(SeparationLocus{bb, mm, ff});
      break;
    }
    case Behavior::Coating: {
      auto pairs = [](int size) {
        std::vector<ObjectCount> v;
        for (int p = 0; p <= size; ++p)
          for (int o = 0; p + o <= size; ++o) v.push_back({p, o});
        return v;
      };
      for (auto bb : pairs(3))
        for (auto mm : pairs(2))
          for (auto ff : pairs(3)) out.push_back(CoatingLocus{bb, mm, ff});
      break;
    }
  }
  return out;
}

}  // namespace

TEST(Genome, LocusSpaceSizes) {
  EXPECT_EQ(locus_space_size(Behavior::Aggregation), 48u);
  EXPECT_EQ(locus_space_size(Behavior::Phototaxing), 144u);
  EXPECT_EQ(locus_space_size(Behavior::Separation), 600u);
  EXPECT_EQ(locus_space_size(Behavior::Coating), 600u);
  for (Behavior b : kAllBehaviors) EXPECT_EQ(Genome(b).size(), locus_space_size(b));
}

TEST(Genome, LocusIndexIsLexicographicRankForEveryBehavior) {
  for (Behavior b : kAllBehaviors) {
    const auto loci = enumerate_loci(b);
    ASSERT_EQ(loci.size(), locus_space_size(b)) << behavior_name(b);
    for (std::size_t j = 0; j < loci.size(); ++j) {
      EXPECT_EQ(locus_index(loci[j]), j) << behavior_name(b);
      EXPECT_EQ(locus_from_index(b, j), loci[j]) << behavior_name(b) << " " << j;
      EXPECT_EQ(locus_behavior(loci[j]), b);
    }
  }
}

TEST(Genome, AggregationMinimumLocusIsZero) {
  EXPECT_EQ(locus_index(AggregationLocus{0, 0, 0}), 0u);
  EXPECT_EQ(locus_index(AggregationLocus{3, 2, 3}), 47u);
}

TEST(Genome, InvalidTuplesAreRejected) {
  EXPECT_THROW(locus_index(AggregationLocus{4, 0, 0}), std::invalid_argument);
  EXPECT_THROW(locus_index(AggregationLocus{0, 3, 0}), std::invalid_argument);
  EXPECT_THROW(locus_index(AggregationLocus{0, 0, -1}), std::invalid_argument);
  EXPECT_THROW(locus_index(SeparationLocus{{1, 2}, {}, {}}), std::invalid_argument);
  EXPECT_THROW(locus_index(CoatingLocus{{2, 2}, {}, {}}), std::invalid_argument);
  EXPECT_THROW(locus_index(CoatingLocus{{}, {1, 2}, {}}), std::invalid_argument);
  EXPECT_THROW(locus_from_index(Behavior::Aggregation, 48), std::out_of_range);
}

TEST(Genome, AlleleDecoding) {
  EXPECT_EQ(Allele(0).probability(), 1.0);
  EXPECT_EQ(Allele(1).probability(), 0.5);
  EXPECT_EQ(Allele(10).probability(), std::ldexp(1.0, -10));
  EXPECT_NEAR(allele_to_probability(Allele(10)), 0.000977, 1e-6);
  for (int a = 0; a <= 10; ++a) {
    const double p = Allele(a).probability();
    EXPECT_GE(p, std::ldexp(1.0, -10));
    EXPECT_LE(p, 1.0);
  }
  EXPECT_THROW(Allele(11), std::invalid_argument);
  EXPECT_THROW(Allele(-1), std::invalid_argument);
}

TEST(Genome, ConstructionValidatesLengthAndAlleles) {
  EXPECT_THROW(Genome(Behavior::Aggregation, std::vector<std::uint8_t>(47, 0)),
               std::invalid_argument);
  std::vector<std::uint8_t> bad(48, 0);
  bad[5] = 11;
  EXPECT_THROW(Genome(Behavior::Aggregation, bad), std::invalid_argument);
  Genome g(Behavior::Aggregation);
  EXPECT_THROW(g.set_allele(0, 12), std::invalid_argument);
}

TEST(Genome, LookupDecodesTheIndexedAllele) {
  const Genome zero(Behavior::Coating);
  for (std::size_t j = 0; j < zero.size(); ++j) {
    EXPECT_EQ(zero.lookup(locus_from_index(Behavior::Coating, j)), 1.0);
  }
  Genome g(Behavior::Separation);
  g.set_allele(123, 3);
  EXPECT_EQ(g.lookup(locus_from_index(Behavior::Separation, 123)), 0.125);
  EXPECT_THROW(g.lookup(AggregationLocus{}), std::invalid_argument);
}

TEST(Genome, LookupRoundTripsEveryIndex) {
  Rng rng = make_rng({17});
  for (Behavior b : kAllBehaviors) {
    const Genome g = testkit::random_genome(b, rng);
    for (std::size_t j = 0; j < g.size(); ++j) {
      EXPECT_EQ(g.lookup(locus_from_index(b, j)), std::ldexp(1.0, -g.allele(j)));
    }
  }
}

TEST(Genome, BehaviorNames) {
  for (Behavior b : kAllBehaviors) {
    EXPECT_EQ(parse_behavior(behavior_name(b)), b);
    EXPECT_EQ(parse_behavior(behavior_short_name(b)), b);
  }
  EXPECT_FALSE(parse_behavior("flocking"));
}
