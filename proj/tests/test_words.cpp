#include <gtest/gtest.h>

#include <set>

#include "anosov/words.hpp"
#include "anosov/zoo.hpp"

using namespace anosov;

TEST(Word, ParseAndPrint) {
  EXPECT_EQ(Word::parse("a b A").str(), "abA");
  EXPECT_EQ(Word::parse("e").size(), 0u);
  EXPECT_EQ(Word::parse("e").str(), "");
  EXPECT_EQ(Word::parse("a.b*c").letters(), (std::vector<Letter>{1, 2, 3}));
  EXPECT_THROW(Word::parse("a1"), ParseError);
}

TEST(Word, FreeReduction) {
  EXPECT_EQ(Word::parse("abBA").size(), 0u);
  EXPECT_EQ(Word::parse("aAb").str(), "b");
  EXPECT_EQ((Word::parse("ab") * Word::parse("Ba")).str(), "aa");
  EXPECT_EQ(Word::parse("abc").inverse().str(), "CBA");
  EXPECT_EQ(power(Word::parse("ab"), 3).str(), "ababab");
  EXPECT_EQ(power(Word::parse("ab"), -1).str(), "BA");
}

TEST(Word, CyclicReduce) {
  EXPECT_EQ(cyclic_reduce(Word::parse("abA")).str(), "b");
  EXPECT_EQ(cyclic_reduce(Word::parse("ab")).str(), "ab");
  EXPECT_EQ(cyclic_reduce(Word::parse("aabAA")).str(), "b");
  EXPECT_TRUE(is_cyclically_reduced(Word::parse("ab")));
  EXPECT_FALSE(is_cyclically_reduced(Word::parse("abA")));
}

TEST(Word, LeastRotation) {
  EXPECT_EQ(least_rotation(Word::parse("ba")).str(), "ab");
  EXPECT_EQ(least_rotation(Word::parse("ab")).str(), "ab");
}

TEST(Word, ShortlexOrder) {
  EXPECT_TRUE(shortlex_less(Word::parse("b"), Word::parse("aa")));
  EXPECT_TRUE(shortlex_less(Word::parse("a"), Word::parse("A")));
  EXPECT_TRUE(shortlex_less(Word::parse("A"), Word::parse("b")));
  EXPECT_FALSE(shortlex_less(Word::parse("a"), Word::parse("a")));
}

TEST(FreeBall, SizesMatchClosedForm) {
  // |ball(R)| of F_k = 1 + 2k((2k-1)^R - 1)/(2k-2)
  EXPECT_EQ(enumerate_free_ball(2, 0).size(), 1u);
  EXPECT_EQ(enumerate_free_ball(2, 1).size(), 5u);
  EXPECT_EQ(enumerate_free_ball(2, 3).size(), 53u);
  EXPECT_EQ(enumerate_free_ball(2, 8).size(), 13121u);
  EXPECT_EQ(free_ball_size(2, 8), 13121u);
  EXPECT_EQ(enumerate_free_ball(3, 3).size(), 1u + 6u + 30u + 150u);
  EXPECT_EQ(enumerate_free_ball(1, 4).size(), 9u);
}

TEST(FreeBall, ShortlexSortedAndReduced) {
  const auto b = enumerate_free_ball(2, 4);
  for (std::size_t i = 1; i < b.size(); ++i) EXPECT_TRUE(shortlex_less(b[i - 1], b[i]));
  for (const auto& w : b) EXPECT_EQ(reduce(w.letters()).size(), w.size());
}

TEST(FreeGroup, WordLengthAndGromovProduct) {
  auto m = GroupModel::free(2);
  EXPECT_EQ(word_length(*m, Word::parse("abA")), 3);
  EXPECT_DOUBLE_EQ(gromov_product_group(*m, Word::parse("abb"), Word::parse("abA")), 2.0);
  EXPECT_DOUBLE_EQ(gromov_product_group(*m, Word::parse("a"), Word::parse("b")), 0.0);
  EXPECT_DOUBLE_EQ(stable_length(*m, Word::parse("aba")), 3.0);
  EXPECT_DOUBLE_EQ(stable_length(*m, Word::parse("abA")), 1.0);
  EXPECT_DOUBLE_EQ(stable_defect(*m, Word::parse("abA")), 2.0);
  EXPECT_THROW(word_length(*m, Word::parse("c")), PreconditionError);
}

TEST(FreeGroup, CyclicClassesAreDistinctRotations) {
  const auto classes = cyclic_classes(2, 4);
  std::set<std::string> seen;
  for (const auto& c : classes) {
    EXPECT_TRUE(is_cyclically_reduced(c));
    EXPECT_EQ(least_rotation(c), c);
    EXPECT_TRUE(seen.insert(c.str()).second);
  }
  // 84 cyclically reduced words of length 4 in F_2; Burnside over the
  // rotation group gives (84 + 12 + 2*4) / 4 classes
  std::size_t count4 = 0;
  for (const auto& c : classes)
    if (c.size() == 4) ++count4;
  EXPECT_EQ(count4, 26u);
}

TEST(BoundaryRay, ParseAndPrefix) {
  const BoundaryRay x = BoundaryRay::parse("a|b");
  EXPECT_EQ(x.str(), "a|b");
  EXPECT_EQ(ray_prefix(x, 4).str(), "abbb");
  EXPECT_EQ(ray_prefix(BoundaryRay::parse("|ab"), 5).str(), "ababa");
  EXPECT_THROW(BoundaryRay::parse("a|A"), PreconditionError);
  EXPECT_THROW(BoundaryRay::parse("b|B"), PreconditionError);
  EXPECT_EQ(ray_prefix(BoundaryRay::parse("ab"), 3).str(), "aba");
}

TEST(SurfaceGroup, RelatorAndSphereSizes) {
  const Representation rho = surface_octagon();
  const GroupModel& m = rho.model();
  EXPECT_EQ(m.rank(), 4);
  EXPECT_EQ(m.genus(), 2);
  EXPECT_EQ(m.relator().str(), "abABcdCD");
  EXPECT_EQ(word_length(m, m.relator()), 0);
  // growth series (1+2x+2x^2+2x^3+x^4) / (1-6x-6x^2-6x^3+x^4)
  const std::vector<std::size_t> sphere{1, 8, 56, 392, 2736, 19096};
  const auto b = ball(m, 5);
  std::vector<std::size_t> sizes(6, 0);
  for (const auto& w : b) ++sizes[w.size()];
  EXPECT_EQ(sizes, sphere);
}

TEST(SurfaceGroup, WordLengthUsesShortestRepresentative) {
  const Representation rho = surface_octagon();
  const GroupModel& m = rho.model();
  // abAB = dcDC in the group, so abABc = dcD has length 3
  EXPECT_EQ(word_length(m, Word::parse("abABc")), 3);
  EXPECT_EQ(word_length(m, Word::parse("ab")), 2);
  EXPECT_THROW(word_length(m, power(Word::parse("a"), 40)), SurfaceRadiusExceeded);
}

TEST(SurfaceGroup, StableLengthBracket) {
  const Representation rho = surface_octagon();
  const StableLength s = anchor_stable_length(rho.model(), Word::parse("ab"));
  EXPECT_GT(s.value, 0.0);
  EXPECT_LT(s.bracket, 1e-9);
}
