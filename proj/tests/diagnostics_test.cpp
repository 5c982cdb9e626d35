#include "trobust/diagnostics.hpp"
#include "trobust/errors.hpp"
#include "trobust/linalg.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

namespace {

using namespace trobust;
using diagnostics::Verdict;
using linalg::MatrixXd;
using linalg::RegressionData;
using linalg::VectorXd;
using fixtures::line_data;

TEST(Diagnose, UniformLeverageIsConflictRobust) {
  const RegressionData d(VectorXd{{1, 2, 3, 4, 50}}, MatrixXd::Ones(5, 1));
  const diagnostics::ConflictDiagnosis r = diagnostics::diagnose(d, 4, 2.0);
  EXPECT_NEAR(r.h_nn, 0.2, 1e-12);
  ASSERT_EQ(r.h_row.size(), 4u);
  for (double h : r.h_row) EXPECT_NEAR(h, 0.2, 1e-12);
  EXPECT_TRUE(r.lemma1_sufficient);
  EXPECT_TRUE(r.lemma1_exact_all());
  EXPECT_TRUE(r.lemma2_holds);
  EXPECT_TRUE(r.count_condition_holds);
  EXPECT_EQ(r.verdict, Verdict::conflict_robust);
}

TEST(Diagnose, ExtremeXIsLeveragePoint) {
  const RegressionData d = line_data({0, 0, 0, 0, 0, 0, 0, 0, 0, 100}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const diagnostics::ConflictDiagnosis r = diagnostics::diagnose(d, 9, 4.0);
  const double oracle = 0.1 + 8100.0 / 9000.0;
  EXPECT_NEAR(r.h_nn, oracle, 1e-10);
  EXPECT_FALSE(r.lemma2_holds);
  EXPECT_EQ(r.verdict, Verdict::leverage_point);
}

TEST(Diagnose, SmallSampleIsInsufficient) {
  const RegressionData d = line_data({0, 1, 2, 1.5}, {0, 1, 2, 20});
  const diagnostics::ConflictDiagnosis r = diagnostics::diagnose(d, 3, 4.0);
  EXPECT_TRUE(r.lemma2_holds);
  EXPECT_FALSE(r.count_condition_holds);
  EXPECT_EQ(r.verdict, Verdict::insufficient_sample);
}

TEST(Diagnose, ExactFormWeakerThanSufficientForm) {
  // Outlier at the edge of the x range: some h_nj are negative, yet every
  // exact inequality 1 - h_nn > -h_nj holds.
  const RegressionData d = line_data({0, 1, 2, 3, 4, 5, 6, 7, 8, 6}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 90});
  const diagnostics::ConflictDiagnosis r = diagnostics::diagnose(d, 9, 4.0);
  EXPECT_FALSE(r.lemma1_sufficient);
  EXPECT_TRUE(r.lemma1_exact_all());
  EXPECT_EQ(r.verdict, Verdict::conflict_robust);
}

TEST(Diagnose, Preconditions) {
  const RegressionData d = line_data({0, 1, 2, 3}, {0, 1, 2, 3});
  EXPECT_THROW(diagnostics::diagnose(d, 4, 4.0), IndexOutOfRangeError);
  EXPECT_THROW(diagnostics::diagnose(d, 0, 1.0), InvalidTailIndexError);
  EXPECT_THROW(diagnostics::diagnose(d, 0, 0.5), InvalidTailIndexError);
}

TEST(Classify, VerdictTable) {
  EXPECT_EQ(diagnostics::classify(0, 10, 1, 0.6, {0.1, 0.1}, 4.0).verdict, Verdict::leverage_point);
  EXPECT_EQ(diagnostics::classify(0, 10, 1, 0.3, {0.1, -0.8}, 4.0).verdict, Verdict::no_conflict);
  EXPECT_EQ(diagnostics::classify(0, 10, 1, 0.3, {0.1, 0.1}, 8.0).verdict, Verdict::insufficient_sample);
  EXPECT_EQ(diagnostics::classify(0, 10, 1, 0.3, {0.1, -0.2}, 4.0).verdict, Verdict::conflict_robust);
}

TEST(Classify, LeverageThresholdIsStrict) {
  EXPECT_FALSE(diagnostics::classify(0, 10, 1, 0.5, {0.1}, 4.0).lemma2_holds);
  EXPECT_TRUE(diagnostics::classify(0, 10, 1, 0.5 - 1e-12, {0.1}, 4.0).lemma2_holds);
}

TEST(Classify, CountConditionMonotoneInSampleSize) {
  bool seen = false;
  for (std::size_t n = 3; n < 30; ++n) {
    const bool holds = diagnostics::classify(0, n, 1, 0.2, {0.1}, 4.0).count_condition_holds;
    if (seen) EXPECT_TRUE(holds) << "n = " << n;
    seen = seen || holds;
  }
  EXPECT_TRUE(seen);
}

TEST(Classify, CountConditionMonotoneInRho) {
  bool failed = false;
  for (double rho = 1.5; rho < 12.0; rho += 0.5) {
    const bool holds = diagnostics::classify(0, 10, 1, 0.2, {0.1}, rho).count_condition_holds;
    if (failed) EXPECT_FALSE(holds) << "rho = " << rho;
    failed = failed || !holds;
  }
}

TEST(VerdictNames, RoundTrip) {
  EXPECT_EQ(diagnostics::to_string(Verdict::conflict_robust), "conflict_robust");
  EXPECT_EQ(diagnostics::to_string(Verdict::leverage_point), "leverage_point");
  EXPECT_EQ(diagnostics::to_string(Verdict::insufficient_sample), "insufficient_sample");
  EXPECT_EQ(diagnostics::to_string(Verdict::no_conflict), "no_conflict");
}

TEST(SufficientDof, Examples) {
  EXPECT_TRUE(diagnostics::sufficient_dof(10, 1, 3.0));
  EXPECT_FALSE(diagnostics::sufficient_dof(5, 1, 2.0));
  EXPECT_FALSE(diagnostics::sufficient_dof(4, 1, 1.0));
}

TEST(SufficientDof, AgreesWithCountCondition) {
  for (std::size_t n = 3; n < 15; ++n) {
    for (std::size_t k = 0; k < 3; ++k) {
      for (double d = 0.5; d < 12.0; d += 0.5) {
        EXPECT_EQ(diagnostics::sufficient_dof(n, k, d), diagnostics::classify(0, n, k, 0.2, {}, d + 1.0).count_condition_holds);
      }
    }
  }
}

}  // namespace
