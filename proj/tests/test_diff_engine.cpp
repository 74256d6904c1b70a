#include <algorithm>
#include <map>
#include <vector>

#include <doctest.h>

#include "chaindiff/combinatorics.hpp"
#include "chaindiff/diff.hpp"
#include "chaindiff/serialize.hpp"

using namespace chaindiff;

namespace {

const Expr X = Expr::point_var("x");

Expr sym(const char* name) { return Expr::func_symbol(name); }

Expr gx() { return Expr::apply(sym("g"), {X}); }

Expr ei(int i) { return Expr::direction_var(i); }

Expr dg(std::vector<int> idx) {
  std::vector<Expr> dirs;
  for (int i : idx) dirs.push_back(ei(i));
  return Expr::diff(sym("g"), X, std::move(dirs));
}

Expr df_at_gx(std::vector<Expr> dirs) {
  return Expr::diff(sym("f"), gx(), std::move(dirs));
}

}  // namespace

TEST_CASE("exp composed with g differentiates to the closed product form") {
  Expr e = Expr::compose(Expr::exp_fn(), sym("g"));
  Expr got = chain_diff(e, X, 1);
  Expr expected = canonicalize(
      Expr::product({Expr::apply(Expr::exp_fn(), {gx()}), dg({1})}));
  CHECK(identical(got, expected));
  CHECK(to_dsl(got) == "exp(g(x)) * D[e1] g @ x");
}

TEST_CASE("power one composes away") {
  Expr e = Expr::compose(Expr::power(1), sym("g"));
  CHECK(identical(chain_diff(e, X, 1), canonicalize(dg({1}))));
}

TEST_CASE("power k pulls down the exponent") {
  Expr e = Expr::compose(Expr::power(3), sym("g"));
  Expr expected = canonicalize(Expr::product(
      {Expr::scalar(std::int64_t{3}), Expr::apply(Expr::power(2), {gx()}),
       dg({1})}));
  CHECK(identical(chain_diff(e, X, 1), expected));
}

TEST_CASE("linear maps commute with differentiation") {
  Expr e = Expr::compose(Expr::linear("l"), sym("g"));
  Expr expected = canonicalize(Expr::apply(Expr::linear("l"), {dg({1})}));
  CHECK(identical(chain_diff(e, X, 1), expected));
}

TEST_CASE("first-order product rule") {
  Expr e = Expr::product({Expr::apply(sym("f"), {X}), gx()});
  Expr expected = canonicalize(Expr::sum(
      {Expr::product({Expr::apply(sym("f"), {X}), dg({1})}),
       Expr::product({Expr::diff(sym("f"), X, {ei(1)}), gx()})}));
  CHECK(identical(chain_diff(e, X, 1), expected));
}

TEST_CASE("scalar differentiates to zero, point var to the direction") {
  CHECK(chain_diff(Expr::scalar(std::int64_t{5}), X, 1).is_zero());
  CHECK(identical(chain_diff(X, X, 1), canonicalize(ei(1))));
  CHECK(chain_diff(Expr::point_var("y"), X, 1).is_zero());
}

TEST_CASE("second order of exp compose matches the hand expansion") {
  Expr e = Expr::compose(Expr::exp_fn(), sym("g"));
  Expr got = nth_chain_diff(e, X, {1, 2});
  Expr expgx = Expr::apply(Expr::exp_fn(), {gx()});
  Expr expected = canonicalize(
      Expr::sum({Expr::product({expgx, dg({1}), dg({2})}),
                 Expr::product({expgx, dg({1, 2})})}));
  CHECK(identical(got, expected));
}

TEST_CASE("order zero returns the canonical input") {
  Expr e = Expr::sum({gx(), gx()});
  CHECK(identical(nth_chain_diff(e, X, {}), canonicalize(e)));
}

TEST_CASE("abstract second-order composition produces both partition terms") {
  Expr e = Expr::compose(sym("f"), sym("g"));
  Expr got = nth_chain_diff(e, X, {1, 2});
  Expr expected = canonicalize(Expr::sum(
      {df_at_gx({dg({1, 2})}), df_at_gx({dg({1}), dg({2})})}));
  CHECK(identical(got, expected));
}

TEST_CASE("direct expansion at n=1 is the plain chain rule") {
  Expr got = faa_di_bruno(sym("f"), sym("g"), X, {1});
  CHECK(identical(got, canonicalize(df_at_gx({dg({1})}))));
}

TEST_CASE("partition expansion term counts follow the Bell numbers") {
  std::vector<int> dirs;
  for (int n = 1; n <= 6; ++n) {
    dirs.push_back(n);
    std::vector<Expr> terms = faa_di_bruno_terms(sym("f"), sym("g"), X, dirs);
    CHECK(static_cast<std::int64_t>(terms.size()) == bell(n));
  }
}

TEST_CASE("n=3 partition terms carry block sizes 3, 2+1 thrice, 1+1+1") {
  std::vector<Expr> terms = faa_di_bruno_terms(sym("f"), sym("g"), X, {1, 2, 3});
  REQUIRE(terms.size() == 5);
  std::map<std::vector<int>, int> shapes;
  for (const Expr& t : terms) {
    Expr ct = canonicalize(t);
    const DiffTerm& dt = ct.diff_term();
    std::vector<int> shape;
    for (const Expr& d : dt.directions) shape.push_back(d.diff_term().order);
    std::sort(shape.begin(), shape.end());
    ++shapes[shape];
  }
  CHECK(shapes[std::vector<int>{3}] == 1);
  CHECK(shapes[std::vector<int>{1, 2}] == 3);
  CHECK(shapes[std::vector<int>{1, 1, 1}] == 1);
}

TEST_CASE("subset expansion term counts are powers of two") {
  std::vector<int> dirs;
  for (int n = 0; n <= 6; ++n) {
    std::vector<Expr> terms = leibniz_terms(sym("f"), sym("g"), X, dirs);
    CHECK(terms.size() == (size_t{1} << n));
    dirs.push_back(n + 1);
  }
}

TEST_CASE("order-zero subset expansion is the plain product") {
  Expr got = leibniz(sym("f"), sym("g"), X, {});
  CHECK(to_dsl(got) == "f(x) * g(x)");
}

TEST_CASE("first-order subset expansion matches the product rule") {
  Expr got = leibniz(sym("f"), sym("g"), X, {1});
  CHECK(identical(got, chain_diff(Expr::product({Expr::apply(sym("f"), {X}),
                                                 gx()}),
                                  X, 1)));
}

TEST_CASE("second-order subset expansion has the four cross terms") {
  Expr got = leibniz(sym("f"), sym("g"), X, {1, 2});
  Expr fxe = Expr::apply(sym("f"), {X});
  Expr expected = canonicalize(Expr::sum(
      {Expr::product({fxe, dg({1, 2})}),
       Expr::product({Expr::diff(sym("f"), X, {ei(1)}), dg({2})}),
       Expr::product({Expr::diff(sym("f"), X, {ei(2)}), dg({1})}),
       Expr::product({Expr::diff(sym("f"), X, {ei(1), ei(2)}), gx()})}));
  CHECK(identical(got, expected));
}

TEST_CASE("recursive and direct expansions agree for compositions up to n=4") {
  Expr comp = Expr::compose(sym("f"), sym("g"));
  std::vector<int> dirs;
  for (int n = 1; n <= 4; ++n) {
    dirs.push_back(n);
    CHECK(structural_equal(nth_chain_diff(comp, X, dirs),
                           faa_di_bruno(sym("f"), sym("g"), X, dirs)));
  }
}

TEST_CASE("recursive and direct expansions agree for products up to n=4") {
  Expr prod = Expr::product({Expr::apply(sym("f"), {X}), gx()});
  std::vector<int> dirs;
  for (int n = 1; n <= 4; ++n) {
    dirs.push_back(n);
    CHECK(structural_equal(nth_chain_diff(prod, X, dirs),
                           leibniz(sym("f"), sym("g"), X, dirs)));
  }
}

TEST_CASE("direction order never changes the expansion") {
  std::vector<int> dirs = {1, 2, 3};
  Expr base = faa_di_bruno(sym("f"), sym("g"), X, dirs);
  std::sort(dirs.begin(), dirs.end());
  do {
    CHECK(structural_equal(base, faa_di_bruno(sym("f"), sym("g"), X, dirs)));
  } while (std::next_permutation(dirs.begin(), dirs.end()));
  std::vector<int> two = {2, 1};
  CHECK(structural_equal(nth_chain_diff(Expr::compose(sym("f"), sym("g")), X,
                                        {1, 2}),
                         nth_chain_diff(Expr::compose(sym("f"), sym("g")), X,
                                        two)));
}

TEST_CASE("total differential splits into slot partials") {
  Expr F = Expr::func_symbol("F", 2);
  Expr y = Expr::point_var("y");
  Expr got = total_diff(F, {X, y}, {1, 2});
  Expr expected = canonicalize(Expr::sum(
      {Expr::diff(F, Expr::tuple({X, y}), {ei(1)}, {1}),
       Expr::diff(F, Expr::tuple({X, y}), {ei(2)}, {2})}));
  CHECK(identical(got, expected));
}

TEST_CASE("arity one total differential is a plain differential term") {
  Expr got = total_diff(sym("F"), {X}, {1});
  CHECK(identical(got, canonicalize(Expr::diff(sym("F"), X, {ei(1)}))));
}

TEST_CASE("zero directions drop their slot terms") {
  Expr F = Expr::func_symbol("F", 3);
  Expr y = Expr::point_var("y");
  Expr z = Expr::point_var("z");
  Expr got = total_diff(F, {X, y, z}, {1, 0, 0});
  Expr expected = canonicalize(
      Expr::diff(F, Expr::tuple({X, y, z}), {ei(1)}, {1}));
  CHECK(identical(got, expected));
}

TEST_CASE("total differential validates lengths") {
  Expr F = Expr::func_symbol("F", 2);
  CHECK_THROWS_AS(total_diff(F, {X}, {1}), ArgumentError);
  CHECK_THROWS_AS(total_diff(F, {X, X}, {1}), ArgumentError);
}

TEST_CASE("direction reuse across a fold is rejected") {
  Expr e = Expr::compose(sym("f"), sym("g"));
  CHECK_THROWS_AS(nth_chain_diff(e, X, {1, 1}), ArgumentError);
  Expr already = dg({1});
  CHECK_THROWS_AS(chain_diff(already, X, 1), ArgumentError);
}

TEST_CASE("rule traces stay canonical and name their rules") {
  std::vector<RuleTrace> trace;
  nth_chain_diff(Expr::compose(Expr::exp_fn(), sym("g")), X, {1}, &trace);
  REQUIRE(!trace.empty());
  bool saw_exp = false;
  for (const RuleTrace& t : trace) {
    CHECK(identical(t.output, canonicalize(t.output)));
    if (t.applied_rule == Rule::Exp) saw_exp = true;
  }
  CHECK(saw_exp);
  CHECK(std::string(rule_name(Rule::Chain)) == "R-CHAIN");
  CHECK(std::string(rule_name(Rule::SumLinearity)) == "R-SUM-LINEARITY");
}

TEST_CASE("differentiating an existing differential term bumps its order") {
  Expr dge1 = dg({1});
  Expr got = chain_diff(dge1, X, 2);
  CHECK(identical(got, canonicalize(dg({1, 2}))));
}

TEST_CASE("composite-target differentials expand to atomic targets") {
  Expr composite = Expr::diff(Expr::compose(sym("f"), sym("g")), X, {ei(1)});
  Expr expanded = expand_differentials(canonicalize(composite));
  CHECK(identical(expanded, canonicalize(df_at_gx({dg({1})}))));

  Expr prod_target =
      Expr::diff(Expr::product({sym("f"), sym("g")}), X, {ei(1)});
  Expr expanded2 = expand_differentials(canonicalize(prod_target));
  CHECK(identical(expanded2, leibniz(sym("f"), sym("g"), X, {1})));
}

TEST_CASE("sums differentiate term by term") {
  Expr e = Expr::sum({Expr::apply(sym("f"), {X}), gx()});
  Expr got = chain_diff(e, X, 1);
  Expr expected = canonicalize(
      Expr::sum({Expr::diff(sym("f"), X, {ei(1)}), dg({1})}));
  CHECK(identical(got, expected));
}

TEST_CASE("function-valued input is applied at the point first") {
  Expr got = chain_diff(sym("g"), X, 1);
  CHECK(identical(got, canonicalize(dg({1}))));
}
