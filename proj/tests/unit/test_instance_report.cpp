#include <gtest/gtest.h>

#include <cstdlib>

#include "support/fixtures.hpp"

using namespace lftest;

namespace {

std::string h3_text(const std::string& metric, const std::string& drift, const std::string& extra = "") {
  return R"({"name": "t", "dim": 3, "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1.0}], "metric": )" + metric +
         R"(, "drift": )" + drift + R"(, "phi": {"kind": "randers"})" + extra + "}";
}

const std::string kIdentity = "[[1,0,0],[0,1,0],[0,0,1]]";

}  // namespace

TEST(Instance, PresetParses) {
  const InstanceFile f = load_preset("heisenberg3-randers");
  EXPECT_EQ(f.dim, 3);
  ASSERT_EQ(f.brackets.size(), 1u);
  EXPECT_EQ(f.brackets[0], (InstanceBracket{1, 2, 3, 1.0}));
  EXPECT_EQ(f.phi.kind, "randers");
  EXPECT_EQ(f.algebra().bracket(e(3, 0), e(3, 1)), e(3, 2));
  for (const Preset& p : presets()) EXPECT_NO_THROW(load_preset(p.name)) << p.name;
}

TEST(Instance, RejectsIndefiniteMetric) {
  try {
    parse_instance(h3_text("[[1,0,0],[0,1,0],[0,0,-0.1]]", "[0.1,0,0]"));
    FAIL();
  } catch (const ValidationError& err) {
    EXPECT_EQ(err.check(), "positive_definiteness");
    EXPECT_NEAR(err.residual(), -0.1, 1e-12);
  }
}

TEST(Instance, RejectsLongDrift) {
  try {
    parse_instance(h3_text(kIdentity, "[1.3,0,0]"));
    FAIL();
  } catch (const ValidationError& err) {
    EXPECT_EQ(err.check(), "norm_bound");
  }
}

TEST(Instance, RejectsBrokenJacobi) {
  const std::string text = R"({"name": "t", "dim": 3, "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1.0}, {"i": 2, "j": 3, "k": 2, "c": 1.0}, {"i": 1, "j": 3, "k": 1, "c": 1.0}],
    "metric": [[1,0,0],[0,1,0],[0,0,1]], "drift": [0,0,0], "phi": {"kind": "randers"}})";
  const InstanceFile f = parse_instance_unchecked(text);
  const ValidationReport r = validate_instance(f, Tolerances{});
  ASSERT_NE(r.first_failure(), nullptr);
  EXPECT_EQ(r.first_failure()->name, "jacobi");
}

TEST(Instance, ParseAndSchemaErrors) {
  EXPECT_THROW(parse_instance_unchecked("{\"name\": \"t\", \"dim\": 3,,}"), ParseError);
  try {
    parse_instance_unchecked("{\n  \"name\": \"t\",\n  oops\n}");
    FAIL();
  } catch (const ParseError& err) {
    EXPECT_NE(std::string(err.what()).find("3:"), std::string::npos) << err.what();
  }
  EXPECT_THROW(parse_instance_unchecked(h3_text(kIdentity, "[0,0,0]", ", \"colour\": 1")), SchemaError);
  EXPECT_THROW(parse_instance_unchecked(R"({"name": "t", "dim": 3, "brackets": []})"), SchemaError);
  EXPECT_THROW(parse_instance_unchecked(h3_text("[[1,0],[0,1]]", "[0,0,0]")), SchemaError);
  EXPECT_THROW(parse_instance_unchecked(h3_text(kIdentity, "[0,0]")), SchemaError);
  try {
    parse_instance_unchecked(h3_text(kIdentity, "[0,0,\"x\"]"));
    FAIL();
  } catch (const SchemaError& err) {
    EXPECT_NE(std::string(err.what()).find("drift"), std::string::npos);
  }
}

TEST(Instance, JsonRoundTrip) {
  for (const Preset& p : presets()) {
    const InstanceFile f = load_preset(p.name);
    EXPECT_EQ(parse_instance_unchecked(instance_to_json(f).dump()), f) << p.name;
  }
  const InstanceFile g = parse_instance_unchecked(h3_text(kIdentity, "[0.1,0,0]", R"(, "seed": 9, "tolerances": {"oracle": 1e-5})"));
  EXPECT_EQ(parse_instance_unchecked(instance_to_json(g).dump()), g);
}

TEST(Instance, TolerancePrecedence) {
  InstanceFile f = parse_instance_unchecked(h3_text(kIdentity, "[0.1,0,0]", R"(, "tolerances": {"oracle": 1e-5, "pd": 1e-8})"));
  unsetenv("LIFTFINSLER_TOL_ORACLE");
  Tolerances t = resolve_tolerances(f);
  EXPECT_EQ(t.oracle, 1e-5);
  EXPECT_EQ(t.pd, 1e-8);
  EXPECT_EQ(t.alg, Tolerances{}.alg);
  setenv("LIFTFINSLER_TOL_ORACLE", "2e-4", 1);
  t = resolve_tolerances(f);
  EXPECT_EQ(t.oracle, 2e-4);
  EXPECT_EQ(t.pd, 1e-8);
  unsetenv("LIFTFINSLER_TOL_ORACLE");
}

TEST(Report, AbelianRowsAreZero) {
  const InstanceFile f = load_preset("abelian3");
  const Report r = run_analysis(f, make_options(f, 5, 1, std::nullopt));
  EXPECT_EQ(r.exit_code, kExitOk);
  ASSERT_EQ(r.rows.size(), 2u * 4u * 5u);
  for (const CurvatureRow& row : r.rows) {
    ASSERT_TRUE(row.theorem_value);
    EXPECT_NEAR(*row.theorem_value, 0.0, 1e-12);
    EXPECT_TRUE(row.passed);
  }
  EXPECT_NE(emit_text(r).find("K = 0.000000"), std::string::npos);
  EXPECT_EQ(emit_text(r).find("K = -0.000000"), std::string::npos);
}

TEST(Report, HeisenbergRandersIsDouglasNotBerwald) {
  const InstanceFile f = load_preset("heisenberg3-randers");
  const Report r = run_analysis(f, make_options(f, 3, 5, std::nullopt));
  EXPECT_EQ(r.exit_code, kExitOk);
  ASSERT_EQ(r.classifications.size(), 3u);
  for (const ClassificationRecord& c : r.classifications) {
    EXPECT_TRUE(c.result.douglas) << c.metric;
    EXPECT_FALSE(c.result.berwald) << c.metric;
  }
  ASSERT_FALSE(r.rows.empty());
  for (const CurvatureRow& row : r.rows) {
    EXPECT_EQ(row.method, to_string(CurvatureMethod::RandersFormula));
    EXPECT_TRUE(row.printed_value.has_value());
  }
}

TEST(Report, NonDouglasInstanceHasNoRows) {
  const InstanceFile f = load_preset("heisenberg3-central");
  const Report r = run_analysis(f, make_options(f, 3, 5, std::nullopt));
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_TRUE(r.rows.empty());
  EXPECT_FALSE(r.notes.empty());
}

TEST(Report, KropinaUndefinedCells) {
  const InstanceFile f = load_preset("kropina-berwald");
  const Report r = run_analysis(f, make_options(f, 4, 3, std::nullopt));
  EXPECT_EQ(r.exit_code, kExitOk);
  for (const CurvatureRow& row : r.rows) {
    const bool pole_complete = row.case_tag == "cc" || row.case_tag == "cv";
    EXPECT_EQ(row.defined, row.metric == "Fc" ? pole_complete : !pole_complete) << row.metric << " " << row.case_tag;
    if (!row.defined) EXPECT_FALSE(row.theorem_value.has_value());
  }
  EXPECT_NE(to_json(r).dump().find("\"undefined\""), std::string::npos);
}

TEST(Report, RowsAreOrdered) {
  const InstanceFile f = load_preset("matsumoto-berwald");
  const Report r = run_analysis(f, make_options(f, 3, 11, std::nullopt));
  ASSERT_EQ(r.rows.size(), 24u);
  EXPECT_EQ(r.rows.front().metric, "Fc");
  EXPECT_EQ(r.rows.front().case_tag, "cc");
  EXPECT_EQ(r.rows.front().plane, 0);
  EXPECT_EQ(r.rows[3].case_tag, "cv");
  EXPECT_EQ(r.rows.back().metric, "Fv");
  EXPECT_EQ(r.rows.back().case_tag, "vv");
  EXPECT_EQ(r.rows.back().plane, 2);
}

TEST(Report, JsonRoundTripAndDeterminism) {
  for (const char* name : {"abelian3", "heisenberg3-randers", "kropina-berwald", "heisenberg3-plus-r-randers"}) {
    const InstanceFile f = load_preset(name);
    const Report a = run_analysis(f, make_options(f, 3, 7, std::nullopt));
    const Report b = run_analysis(f, make_options(f, 3, 7, std::nullopt));
    EXPECT_EQ(emit_json(a), emit_json(b)) << name;
    EXPECT_EQ(report_from_json(emit_json(a)), a) << name;
    const Report c = run_analysis(f, make_options(f, 3, 8, std::nullopt));
    if (!a.rows.empty()) EXPECT_NE(a.rows, c.rows) << name;
  }
}

TEST(Report, LooseClassificationToleranceIsInconsistent) {
  const InstanceFile f = load_preset("heisenberg3-central");
  const Report r = run_analysis(f, make_options(f, 2, 1, 0.2));
  EXPECT_EQ(r.exit_code, kExitInconsistency);
}

TEST(Report, ValidationFailureHasNoRows) {
  InstanceFile f = load_preset("heisenberg3-randers");
  f.drift = {1.3, 0.0, 0.0};
  const Report r = run_analysis(f, make_options(f, 2, 1, std::nullopt));
  EXPECT_EQ(r.exit_code, kExitValidation);
  EXPECT_TRUE(r.rows.empty());
}
