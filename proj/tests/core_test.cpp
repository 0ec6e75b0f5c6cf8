// Copyright 2026 The QSL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qsl/core.hpp"

namespace qsl {
namespace {

TEST(Prng, SameSeedSameStream) {
  Prng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs = differs || x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(Prng, UniformInUnitInterval) {
  Prng rng(7);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(Prng, BelowStaysInRange) {
  Prng rng(3);
  std::vector<int> hist(3, 0);
  for (int i = 0; i < 30000; ++i) ++hist[rng.below(3)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 400);
}

TEST(Prng, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(9, 4), derive_seed(9, 4));
}

TEST(BasisIndex, BitstringPutsHighQubitLeft) {
  const BasisIndex b(0b1011, 4);
  EXPECT_EQ(b.to_bitstring(), "1011");
  EXPECT_TRUE(b.bit(0));
  EXPECT_FALSE(b.bit(2));
  EXPECT_EQ(BasisIndex::from_bitstring("0001").value, 1U);
  EXPECT_EQ(b.flipped(2).value, 0b1111U);
}

TEST(BasisIndex, RejectsOutOfRange) {
  EXPECT_THROW(BasisIndex(4, 2), ValidationError);
  EXPECT_THROW(BasisIndex(0, 0), ValidationError);
  EXPECT_THROW(BasisIndex(0, 31), ValidationError);
  EXPECT_THROW(BasisIndex::from_bitstring("10a"), ValidationError);
}

TEST(ResourceCap, DefaultAdmitsTwentySix) {
  const ResourceCap cap;
  EXPECT_EQ(cap.max_qubits(), 26);
  EXPECT_NO_THROW(cap.check(26));
  EXPECT_THROW(cap.check(27), ResourceError);
  EXPECT_THROW(ResourceCap{1e6}.check(31), ResourceError);
}

TEST(ExplicitDistribution, Validation) {
  EXPECT_NO_THROW(ExplicitDistribution(1, {0.25, 0.75}));
  EXPECT_THROW(ExplicitDistribution(1, {0.5, 0.6}), ValidationError);
  EXPECT_THROW(ExplicitDistribution(1, {1.5, -0.5}), ValidationError);
  EXPECT_THROW(ExplicitDistribution(2, {0.5, 0.5}), ValidationError);
  EXPECT_THROW(ExplicitDistribution(1, {NAN, 1.0}), ValidationError);
  const auto u = ExplicitDistribution::uniform(3);
  for (double p : u.probs()) EXPECT_DOUBLE_EQ(p, 0.125);
  EXPECT_DOUBLE_EQ(ExplicitDistribution::point_mass(2, 3)[3], 1.0);
}

TEST(Sampling, PointMassAlwaysHits) {
  Prng rng(5);
  const auto s = sample_from_distribution(ExplicitDistribution::point_mass(3, 6), 1000, rng);
  for (auto x : s.samples) EXPECT_EQ(x, 6U);
}

TEST(Sampling, ZeroProbabilityNeverDrawn) {
  Prng rng(11);
  const ExplicitDistribution d(2, {0.5, 0.0, 0.5, 0.0});
  const auto s = sample_from_distribution(d, 200000, rng);
  for (auto x : s.samples) ASSERT_TRUE(x == 0 || x == 2);
}

TEST(Sampling, FrequenciesConverge) {
  Prng rng(12);
  const ExplicitDistribution d(2, {0.1, 0.2, 0.3, 0.4});
  const auto s = sample_from_distribution(d, 400000, rng);
  const auto e = empirical_distribution(s);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(e[i], d[i], 0.003);
}

TEST(Sampling, IndependentOfThreadCount) {
  const auto d = ExplicitDistribution::uniform(10);
  Prng a(99), b(99);
  const auto s1 = sample_from_distribution(d, 3 * kSampleChunk + 17, a, 1);
  const auto s4 = sample_from_distribution(d, 3 * kSampleChunk + 17, b, 4);
  EXPECT_EQ(s1.samples, s4.samples);
}

TEST(Sampling, ZeroCountRejected) {
  Prng rng(1);
  EXPECT_THROW(sample_from_distribution(ExplicitDistribution::uniform(1), 0, rng), ValidationError);
}

TEST(InverseCdf, UsesUpperBound) {
  const std::vector<double> cdf{0.25, 0.5, 0.75, 1.0};
  EXPECT_EQ(inverse_cdf(cdf, 0.0), 0U);
  EXPECT_EQ(inverse_cdf(cdf, 0.25), 1U);
  EXPECT_EQ(inverse_cdf(cdf, 0.999), 3U);
}

TEST(SampleFile, RoundTrip) {
  SampleSet s;
  s.n = 4;
  s.samples = {0, 1, 8, 15, 6};
  std::stringstream buf;
  write_samples(buf, s);
  EXPECT_EQ(buf.str(), "0000\n0001\n1000\n1111\n0110\n");
  const auto back = read_samples(buf);
  EXPECT_EQ(back.n, 4);
  EXPECT_EQ(back.samples, s.samples);
}

TEST(SampleFile, RejectsMalformedInput) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_samples(in);
  };
  EXPECT_THROW(parse("010\n01\n"), ParseError);
  EXPECT_THROW(parse("010\r\n011\r\n"), ParseError);
  EXPECT_THROW(parse("0102\n"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("01\n\n10\n"), ParseError);
  EXPECT_NO_THROW(parse("01\n10"));
}

TEST(Counts, MatchSamples) {
  SampleSet s;
  s.n = 2;
  s.samples = {0, 3, 3, 1};
  const auto c = count_samples(s);
  EXPECT_EQ(c, (std::vector<std::uint64_t>{1, 1, 0, 2}));
  const auto e = empirical_distribution(s);
  EXPECT_DOUBLE_EQ(e[3], 0.5);
  SampleSet bad;
  bad.n = 2;
  bad.samples = {4};
  EXPECT_THROW(bad.validate(), ValidationError);
}

}  // namespace
}  // namespace qsl
