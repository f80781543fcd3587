#include "doctest.h"

#include "needle/needle.hpp"
#include "needle/report.hpp"

using namespace needle;

TEST_CASE("k rules") {
  CHECK(KRule::parse("all").k_values(3) == std::vector<std::int64_t>{0, 1, 2, 3});
  CHECK(KRule::parse("list:0,2,9").k_values(5) == std::vector<std::int64_t>{0, 2, 9});
  CHECK(KRule::parse("fraction:0.1,0.25").k_values(40) == std::vector<std::int64_t>{4, 10});
  CHECK(KRule::parse("offset:2,3").k_values(41) == std::vector<std::int64_t>{18, 17});
  // ceil(32 + sqrt(64 ln 64)) = ceil(32 + 16.31...) = 49
  CHECK(KRule::parse("above:1").k_values(64) == std::vector<std::int64_t>{49});
  CHECK_THROWS_AS(KRule::parse("some:1"), std::invalid_argument);
  CHECK_THROWS_AS(KRule::parse("list"), std::invalid_argument);
  CHECK_THROWS_AS(KRule::parse("list:1,x"), std::invalid_argument);
}

TEST_CASE("n value lists") {
  CHECK(parse_n_values("40,60,80") == std::vector<std::int64_t>{40, 60, 80});
  CHECK(parse_n_values("10..13") == std::vector<std::int64_t>{10, 11, 12, 13});
  CHECK(parse_n_values("10..20:5") == std::vector<std::int64_t>{10, 15, 20});
  CHECK_THROWS_AS(parse_n_values("0,4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_n_values("5..4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_n_values("1..4:0"), std::invalid_argument);
}

TEST_CASE("output selection") {
  const auto all = SweepOutputs::parse("exact,bound,estimate");
  CHECK(all.exact);
  CHECK(all.bound_eq1);
  CHECK(all.estimate);
  CHECK_FALSE(all.simulate.has_value());
  const auto some = SweepOutputs::parse("exact,simulate");
  CHECK_FALSE(some.bound_eq1);
  CHECK(some.simulate.has_value());
  CHECK_THROWS_AS(SweepOutputs::parse("exact,plot"), std::invalid_argument);
}

TEST_CASE("cell contents") {
  SweepSpec spec;
  const auto row = evaluate_cell(40, 0, spec);
  REQUIRE(row.exact.has_value());
  CHECK(*row.exact == expected_runtime({40, 0}));
  CHECK(row.r == 20);
  CHECK(row.regime == "SUBLINEAR_K");
  CHECK(row.eq1_valid == "valid");
  CHECK(row.flags.empty());

  const auto odd = evaluate_cell(41, 3, spec);
  CHECK_FALSE(odd.r.has_value());
  CHECK(odd.eq1_valid == "invalid: odd n");
  CHECK(odd.eq1_bound.empty());

  const auto trivial = evaluate_cell(4, 4, spec);
  CHECK(trivial.has_flag("EXACT_ZERO"));
  CHECK(trivial.ratio_exact_estimate == "undefined");

  const auto skipped = evaluate_cell(5, 9, spec);
  CHECK(skipped.has_flag("skipped"));
  CHECK_FALSE(skipped.exact.has_value());
}

TEST_CASE("sweep rows come out in grid order") {
  SweepSpec spec;
  spec.n_values = {6, 4};
  spec.k_rule = KRule::parse("list:0,3,5");
  spec.threads = 3;
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].n == 6);
  CHECK(rows[2].k == 5);
  CHECK(rows[5].n == 4);
  CHECK(rows[5].has_flag("skipped"));
}

TEST_CASE("property: CSV round trip") {
  SweepSpec spec;
  spec.n_values = {8, 9, 12};
  spec.outputs = SweepOutputs::parse("exact,bound,estimate,simulate");
  spec.outputs.simulate->trials = 50;
  spec.outputs.simulate->seed = 3;
  spec.k_rule = KRule::parse("list:0,2,5,20");
  SweepTable table{{"seed=3;rng_name=x", "comment, with \"quotes\""}, run_sweep(spec)};
  const auto text = write_csv(table);
  const auto back = read_csv(text);
  CHECK(back.metadata == table.metadata);
  REQUIRE(back.rows.size() == table.rows.size());
  CHECK(write_csv(back) == text);
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    CHECK(back.rows[i].exact == table.rows[i].exact);
    CHECK(back.rows[i].flags == table.rows[i].flags);
  }
  CHECK(text.find(std::string(kCsvHeader)) != std::string::npos);
  CHECK_THROWS_AS(read_csv("a,b\n"), std::invalid_argument);
}
