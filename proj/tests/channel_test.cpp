#include <gtest/gtest.h>

#include <cmath>

#include "nflab/channel.hpp"
#include "nflab/specfun.hpp"

namespace {

using namespace nflab;

constexpr int kSamples = 1000000;

TEST(Channel, ParseModel) {
  for (auto m : {ChannelModel::awgn_real, ChannelModel::awgn_complex, ChannelModel::rayleigh_real,
                 ChannelModel::rayleigh_complex})
    EXPECT_EQ(parse_channel_model(to_string(m)), m);
  EXPECT_THROW(parse_channel_model("rician"), ValidationError);
}

TEST(Channel, ZeroNoiseAwgnIsIdentity) {
  Eigen::VectorXd s(4);
  s << 1, -2, 3, 0.5;
  for (auto m : {ChannelModel::awgn_real, ChannelModel::awgn_complex}) {
    auto [y, r] = transmit(s, m, 1, 2, {0.0});
    EXPECT_EQ(y, s);
  }
}

TEST(Channel, ZeroNoiseFadingAppliesCoefficients) {
  Eigen::VectorXd s(4);
  s << 1, -2, 3, 0.5;
  auto [y, r] = transmit(s, ChannelModel::rayleigh_complex, 1, 2, {0.0});
  ASSERT_EQ(r.symbols(), 2u);
  for (int i = 0; i < 2; ++i) {
    const std::complex<double> z = r.fading[i] * std::complex<double>(s[2 * i], s[2 * i + 1]);
    EXPECT_NEAR(y[2 * i], z.real(), 1e-15);
    EXPECT_NEAR(y[2 * i + 1], z.imag(), 1e-15);
  }
  auto [yr, rr] = transmit(s, ChannelModel::rayleigh_real, 1, 2, {0.0});
  for (int i = 0; i < 4; ++i) {
    EXPECT_GE(rr.fading[i].real(), 0.0);
    EXPECT_EQ(rr.fading[i].imag(), 0.0);
    EXPECT_DOUBLE_EQ(yr[i], rr.fading[i].real() * s[i]);
  }
}

TEST(Channel, DimensionMismatch) {
  EXPECT_THROW(transmit(Eigen::VectorXd::Zero(3), ChannelModel::awgn_complex, 1, 0), ValidationError);
}

TEST(Channel, Reproducible) {
  const Eigen::VectorXd s = Eigen::VectorXd::Ones(8);
  auto [a, ra] = transmit(s, ChannelModel::rayleigh_complex, 99, 12345);
  (void)transmit(s, ChannelModel::rayleigh_complex, 99, 1);
  auto [b, rb] = transmit(s, ChannelModel::rayleigh_complex, 99, 12345);
  EXPECT_EQ(a, b);
  auto [c, rc] = transmit(s, ChannelModel::rayleigh_complex, 99, 12346);
  EXPECT_NE(a, c);
}

double noise_variance(ChannelModel m) {
  const std::size_t symbols = 100;
  double s2 = 0;
  std::size_t count = 0;
  for (std::uint64_t t = 0; count < static_cast<std::size_t>(kSamples); ++t) {
    const auto r = draw_realization(symbols, m, 5, t);
    s2 += r.noise.squaredNorm();
    count += r.noise.size();
  }
  return s2 / count;
}

TEST(Channel, NoiseVarianceConventions) {
  EXPECT_NEAR(noise_variance(ChannelModel::awgn_complex), 0.5, 0.01);
  EXPECT_NEAR(noise_variance(ChannelModel::awgn_real), 1.0, 0.01);
}

TEST(Channel, FadingIsExponentialPower) {
  for (auto m : {ChannelModel::rayleigh_complex, ChannelModel::rayleigh_real}) {
    double s = 0, s2 = 0, slog = 0;
    int count = 0;
    for (std::uint64_t t = 0; count < kSamples; ++t) {
      const auto r = draw_realization(100, m, 6, t);
      for (const auto& h : r.fading) {
        const double x = std::norm(h);
        s += x;
        s2 += x * x;
        slog += std::log(x);
        ++count;
      }
    }
    const double mean = s / count, var = s2 / count - mean * mean;
    EXPECT_NEAR(mean, 1.0, 0.01);
    EXPECT_NEAR(var, 1.0, 0.03);
    EXPECT_NEAR(slog / count, -kEulerGamma, 0.01);
  }
}

TEST(Channel, AwgnHasUnitFading) {
  const auto r = draw_realization(4, ChannelModel::awgn_real, 1, 1);
  EXPECT_DOUBLE_EQ(geometric_mean_statistic(r), 1.0);
}

TEST(Channel, GeometricMeanChernoffTail) {
  const int n = 8, trials = 100000;
  const double delta = 0.5;
  const double bound = std::exp(n * chernoff_solve(delta).exponent);
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    const auto r = draw_realization(n, ChannelModel::rayleigh_complex, 8, t);
    hits += std::log(geometric_mean_statistic(r)) <= -(delta + kEulerGamma);
  }
  const double p = static_cast<double>(hits) / trials;
  EXPECT_LE(p, bound + 3.0 * std::sqrt(bound * (1.0 - bound) / trials));
}

}  // namespace
