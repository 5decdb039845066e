#include "properties.hpp"

#include <gtest/gtest.h>

namespace lt = leibniz::testing;

namespace {

void expect_suite(const lt::SuiteResult& r) {
  EXPECT_TRUE(r.passed()) << r.summary();
  ::testing::Test::RecordProperty("cases", r.cases);
}

}  // namespace

TEST(ExprCoreProperties, NormalizeIsIdempotent) { expect_suite(lt::normalize_idempotence()); }
TEST(ExprCoreProperties, NormalizePreservesValue) { expect_suite(lt::value_preservation()); }
TEST(ExprCoreProperties, SubstitutionComposes) { expect_suite(lt::substitution_composes()); }

TEST(ParserProperties, FormatThenParseIsIdentity) { expect_suite(lt::parser_round_trip()); }
TEST(ParserProperties, JsonRoundTrip) { expect_suite(lt::json_round_trip()); }
TEST(ParserProperties, ErrorSpanPointsAtFirstBadToken) { expect_suite(lt::parse_error_spans()); }

TEST(DifferentiationProperties, Linearity) { expect_suite(lt::differential_linearity()); }
TEST(DifferentiationProperties, ProductRuleSymmetry) { expect_suite(lt::product_rule_symmetry()); }
TEST(DifferentiationProperties, ProductToSumIdentity) { expect_suite(lt::product_to_sum_identity()); }
TEST(DifferentiationProperties, AgreesWithCentralDifferences) { expect_suite(lt::finite_difference_oracle()); }
TEST(DifferentiationProperties, TotalIsSumOfPartials) { expect_suite(lt::sum_of_partials()); }

TEST(SolverProperties, PolynomialOracle) { expect_suite(lt::solver_polynomial_oracle()); }
TEST(SolverProperties, InverseRatioProductIsOne) { expect_suite(lt::inverse_ratio_product()); }
TEST(SolverProperties, ImplicitConsistency) { expect_suite(lt::implicit_consistency()); }
TEST(SolverProperties, PartialWithNothingHeldIsTotal) { expect_suite(lt::partial_degeneracy()); }
TEST(SolverProperties, SecondDerivativeReduction) { expect_suite(lt::second_derivative_reduction()); }

TEST(HyperrealProperties, FieldLaws) { expect_suite(lt::hyperreal_field_laws()); }
TEST(HyperrealProperties, StdPartHomomorphism) { expect_suite(lt::std_part_homomorphism()); }
TEST(HyperrealProperties, LimitsAgreeWithProbing) { expect_suite(lt::limit_numeric_agreement()); }
TEST(HyperrealProperties, SlopeMatchesDifferential) { expect_suite(lt::slope_matches_differential()); }

TEST(SummationProperties, AntidifferentialRoundTrip) { expect_suite(lt::antidifferential_round_trip()); }
TEST(SummationProperties, FundamentalTheorem) { expect_suite(lt::fundamental_theorem()); }
TEST(SummationProperties, PathIndependence) { expect_suite(lt::path_independence()); }
TEST(SummationProperties, Additivity) { expect_suite(lt::total_difference_additivity()); }
