#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vortlab/spectral.hpp"

using namespace vortlab;

namespace {

TruncationPtr eight(double k = 1.0, double l = 2.0) {
  return std::make_shared<const Truncation>(Truncation::eight_mode(k, l));
}

SpectralState random_state(const TruncationPtr& trunc, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd x(static_cast<Eigen::Index>(trunc->real_dimension()));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = u(rng);
  return SpectralState::from_real(trunc, x);
}

/// C_m -> C for m and conj(C) for -m.
std::vector<Complex> with_pairs(const Truncation& trunc,
                                std::initializer_list<std::pair<ModeIndex, Complex>> values) {
  std::vector<Complex> c(trunc.modes().size());
  for (const auto& [m, v] : values) {
    c[trunc.position(m)] = v;
    c[trunc.position(-m)] = std::conj(v);
  }
  return c;
}

}  // namespace

TEST(ModeIndex, Basics) {
  const ModeIndex m{1, -1};
  EXPECT_EQ(m.to_string(), "[1,-1]");
  EXPECT_EQ(-m, (ModeIndex{-1, 1}));
  EXPECT_TRUE(m.is_representative());
  EXPECT_FALSE((-m).is_representative());
  EXPECT_TRUE((ModeIndex{0, 1}).is_representative());
  EXPECT_TRUE((ModeIndex{0, 0}).is_zero());
  EXPECT_EQ((m + ModeIndex{0, 2}), (ModeIndex{1, 1}));
  EXPECT_EQ((m - ModeIndex{1, 1}), (ModeIndex{0, -2}));
}

TEST(InteractionTerm, Examples) {
  EXPECT_DOUBLE_EQ(interaction_term({0, 1}, {1, 1}, 1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(interaction_term({1, 1}, {2, 2}, 0.7, 1.9), 0.0);
  EXPECT_DOUBLE_EQ(interaction_term({1, 0}, {1, 1}, 1.0, 2.0), -2.0);
  EXPECT_THROW(interaction_term({0, 0}, {1, 1}, 1.0, 1.0), std::invalid_argument);
}

TEST(Truncation, EightModeLayout) {
  const auto t = eight();
  EXPECT_EQ(t->modes().size(), 8u);
  EXPECT_EQ(t->representatives().size(), 4u);
  EXPECT_EQ(t->real_dimension(), 8u);
  EXPECT_EQ(t->coordinate_name(0), "A[0,1]");
  EXPECT_EQ(t->coordinate_name(1), "A[1,-1]");
  EXPECT_EQ(t->coordinate_name(2), "A[1,0]");
  EXPECT_EQ(t->coordinate_name(3), "A[1,1]");
  EXPECT_EQ(t->coordinate_name(4), "B[0,1]");
  EXPECT_THROW(t->coordinate_name(8), std::out_of_range);
  EXPECT_DOUBLE_EQ(t->wavenumber_squared({1, -1}), 5.0);
  EXPECT_TRUE(t->contains({-1, -1}));
  EXPECT_FALSE(t->contains({2, 0}));
  EXPECT_THROW(t->position({2, 0}), std::out_of_range);
  EXPECT_EQ(Truncation::box(2, 1.0, 1.0).modes().size(), 24u);
}

TEST(Truncation, Validation) {
  EXPECT_THROW(Truncation({{1, 0}}, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Truncation({{0, 0}}, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Truncation({{4, 0}, {-4, 0}}, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Truncation({{1, 0}, {-1, 0}, {1, 0}}, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Truncation({{1, 0}, {-1, 0}}, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Truncation::box(4, 1.0, 1.0), std::invalid_argument);
}

TEST(SpectralState, RealityIsEnforced) {
  const auto t = eight();
  auto c = with_pairs(*t, {{{1, 0}, {1.0, 0.5}}});
  EXPECT_NO_THROW(SpectralState(t, c));
  c[t->position({-1, 0})] = {1.0, 0.5};
  EXPECT_THROW(SpectralState(t, c), std::invalid_argument);
  EXPECT_THROW(SpectralState(t, std::vector<Complex>(3)), std::invalid_argument);
}

TEST(SpectralState, RealCoordinatesRoundTrip) {
  const auto t = eight();
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const auto s = random_state(t, rng);
    const auto again = SpectralState::from_real(t, s.to_real());
    for (std::size_t j = 0; j < t->modes().size(); ++j) {
      EXPECT_EQ(s.coefficients()[j], again.coefficients()[j]);
    }
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(8);
  x(2) = 3.0;  // A[1,0]
  x(6) = 4.0;  // B[1,0]
  const auto s = SpectralState::from_real(t, x);
  EXPECT_EQ(s.coefficient({1, 0}), Complex(1.5, -2.0));
  EXPECT_EQ(s.coefficient({-1, 0}), Complex(1.5, 2.0));
  // |C|^2 summed over the pair is (A^2 + B^2)/2.
  EXPECT_DOUBLE_EQ(s.enstrophy(), 12.5);
  EXPECT_DOUBLE_EQ(s.energy(), 12.5);
}

TEST(SpectralRhs, SingleModeIsSteady) {
  const auto t = eight();
  const SpectralState s(t, with_pairs(*t, {{{1, 0}, {0.8, -0.3}}}));
  const auto rhs = spectral_rhs(s);
  for (const auto& c : rhs.coefficients()) EXPECT_EQ(c, Complex(0.0));
}

TEST(SpectralRhs, HandSummedTriad) {
  const double k = 1.0, l = 1.0;
  const auto t = eight(k, l);
  const SpectralState s(t, with_pairs(*t, {{{0, 1}, 1.0}, {{1, 0}, 1.0}}));
  const Complex got = spectral_rhs(s).coefficient({1, 1});
  const double want = interaction_term({0, 1}, {1, 1}, k, l) + interaction_term({1, 0}, {1, 1}, k, l);
  EXPECT_DOUBLE_EQ(got.real(), want);
  EXPECT_DOUBLE_EQ(got.imag(), 0.0);
  EXPECT_DOUBLE_EQ(want, 0.0);

  const auto t2 = eight(1.0, 2.0);
  const Complex a{0.3, -0.4}, b{-1.1, 0.2};
  const SpectralState s2(t2, with_pairs(*t2, {{{0, 1}, a}, {{1, 0}, b}}));
  const Complex want2 = interaction_term({0, 1}, {1, 1}, 1.0, 2.0) * a * b +
                        interaction_term({1, 0}, {1, 1}, 1.0, 2.0) * b * a;
  const Complex got2 = spectral_rhs(s2).coefficient({1, 1});
  EXPECT_NEAR(std::abs(got2 - want2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(want2 - Complex(-1.5) * a * b), 0.0, 1e-15);
}

TEST(SpectralRhs, RealityPreservedExactly) {
  std::mt19937_64 rng(2);
  for (int n : {1, 2, 3}) {
    const auto t = std::make_shared<const Truncation>(Truncation::box(n, 1.3, 0.7));
    for (int i = 0; i < 20; ++i) {
      const auto rhs = spectral_rhs(random_state(t, rng));
      EXPECT_EQ(reality_defect(*t, rhs.coefficients()), 0.0);
    }
  }
}

TEST(SpectralRhs, RealFormMatchesComplexForm) {
  const auto t = eight(0.9, 1.4);
  std::mt19937_64 rng(3);
  const auto s = random_state(t, rng);
  const Eigen::VectorXd a = spectral_rhs(s).to_real();
  const Eigen::VectorXd b = spectral_rhs_real(t, s.to_real());
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SpectralRhs, BilinearFormIsSymmetricWithRhsDiagonal) {
  const auto t = eight(1.1, 0.6);
  std::mt19937_64 rng(4);
  const auto u = random_state(t, rng), v = random_state(t, rng);
  const auto uv = spectral_bilinear(*t, u.coefficients(), v.coefficients());
  const auto vu = spectral_bilinear(*t, v.coefficients(), u.coefficients());
  const auto uu = spectral_bilinear(*t, u.coefficients(), u.coefficients());
  const auto rhs = spectral_rhs(u);
  for (std::size_t i = 0; i < uv.size(); ++i) {
    EXPECT_NEAR(std::abs(uv[i] - vu[i]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(uu[i] - rhs.coefficients()[i]), 0.0, 1e-15);
  }
}

TEST(SpectralRhs, ConservesEnergyAndEnstrophyInstantaneously) {
  std::mt19937_64 rng(5);
  for (int n : {1, 2}) {
    const auto t = std::make_shared<const Truncation>(Truncation::box(n, 1.0, 1.7));
    for (int i = 0; i < 20; ++i) {
      const auto s = random_state(t, rng);
      const auto r = spectral_rhs(s);
      double dE = 0.0, dZ = 0.0;
      for (std::size_t j = 0; j < t->modes().size(); ++j) {
        const double w = std::real(std::conj(s.coefficients()[j]) * r.coefficients()[j]);
        dZ += w;
        dE += w / t->wavenumber_squared(t->modes()[j]);
      }
      EXPECT_NEAR(dE, 0.0, 1e-13);
      EXPECT_NEAR(dZ, 0.0, 1e-13);
    }
  }
}

TEST(InducedSymmetry, Examples) {
  const auto t = eight();
  const SpectralState s(t, with_pairs(*t, {{{1, -1}, {2.0, 1.0}}, {{1, 0}, {0.5, -0.5}}}));
  EXPECT_EQ(induced_symmetry("e1").apply(s).coefficient({1, 1}), -s.coefficient({1, -1}));
  EXPECT_EQ(induced_symmetry("p").apply(s).coefficient({1, 0}), -s.coefficient({1, 0}));
  EXPECT_EQ(induced_symmetry("q").apply(s).coefficient({1, 0}), s.coefficient({1, 0}));
  EXPECT_EQ(induced_symmetry("e2").apply(s).coefficient({-1, 1}), -s.coefficient({1, 1}));
  EXPECT_EQ(induced_symmetry("e3").apply(s).coefficient({1, 0}), -s.coefficient({1, 0}));
  EXPECT_TRUE(induced_symmetry("e3").time_reversal);
  EXPECT_FALSE(induced_symmetry("e1").time_reversal);
  EXPECT_THROW(induced_symmetry("e4"), std::invalid_argument);
}

TEST(InducedSymmetry, InvolutionsCommutingWithReality) {
  const auto t = std::make_shared<const Truncation>(Truncation::box(2, 1.0, 1.5));
  std::mt19937_64 rng(6);
  for (const char* name : {"e1", "e2", "e3", "p", "q"}) {
    const auto g = induced_symmetry(name);
    const auto gg = g.compose(g);
    EXPECT_EQ(gg.sign, 1);
    EXPECT_FALSE(gg.reflect1 || gg.reflect2 || gg.parity1 || gg.parity2 || gg.time_reversal);
    const Eigen::MatrixXd M = g.real_matrix(t);
    EXPECT_LE((M * M - Eigen::MatrixXd::Identity(M.rows(), M.cols())).cwiseAbs().maxCoeff(), 0.0);
    for (int i = 0; i < 5; ++i) {
      const auto s = random_state(t, rng);
      const auto image = g.apply(s);  // constructor re-checks reality
      EXPECT_LE((image.to_real() - M * s.to_real()).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(InducedSymmetry, Equivariance) {
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 3}) {
    const auto t = std::make_shared<const Truncation>(Truncation::box(n, 1.0, 2.0));
    for (int i = 0; i < 50; ++i) {
      const auto s = random_state(t, rng);
      const auto rhs = spectral_rhs(s);
      for (const char* name : {"e1", "e2", "p", "q"}) {
        const auto g = induced_symmetry(name);
        const Eigen::VectorXd lhs = spectral_rhs(g.apply(s)).to_real();
        const Eigen::VectorXd r = g.apply(rhs).to_real();
        EXPECT_LE((lhs - r).cwiseAbs().maxCoeff(), 1e-12) << name;
      }
      // e3 reverses time: rhs(e3 s) = -e3 rhs(s).
      const auto e3 = induced_symmetry("e3");
      const Eigen::VectorXd lhs = spectral_rhs(e3.apply(s)).to_real();
      const Eigen::VectorXd r = -e3.apply(rhs).to_real();
      EXPECT_LE((lhs - r).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(InducedSymmetry, LeavingTheTruncationIsAnError) {
  const auto t = std::make_shared<const Truncation>(
      Truncation({{1, 1}, {-1, -1}, {1, 0}, {-1, 0}}, 1.0, 1.0));
  const SpectralState s = SpectralState::zero(t);
  EXPECT_THROW(induced_symmetry("e1").apply(s), std::domain_error);
  EXPECT_NO_THROW(induced_symmetry("p").apply(s));
}
