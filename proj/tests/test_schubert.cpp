#include "gaudin/schubert.hpp"

#include "doctest.h"

using namespace gaudin;

namespace {

using Poly = Polynomial<Rational>;
using RF = RationalFunction<Rational>;
using Point = SchubertPoint<Rational>;

// The operator with kernel span{u^2, u - 1/2}, the unique member of the
// class for two single-box points at 0 and 1.
ScalarDiffOp<Rational> two_point_oracle() {
  RF h1(Poly{1, -2}, Poly{0, -1, 1});
  RF h2(Poly{2}, Poly{0, -1, 1});
  return ScalarDiffOp<Rational>({h2, h1, RF(1L)});
}

}  // namespace

TEST_CASE("flag bases are echelonized to the unique form") {
  Point trivial(Partition{0, 0}, {Poly{0, 1}, Poly{1}});
  CHECK(trivial.degrees() == std::vector<long>{1, 0});
  CHECK(trivial.flag()[0] == Poly{0, 1});
  CHECK(trivial.flag()[1] == Poly{1});

  // A stray constant term sits on f_2's leading degree and is removed.
  Point x(Partition{1, 0}, {Poly{3, 0, 1}, Poly{1}});
  CHECK(x.flag()[0] == Poly{0, 0, 1});

  // Two bases of the same subspace give identical coefficients.
  Point a(Partition{1, 0}, {Poly{1, 1, 1}, Poly{2}});
  Point b(Partition{1, 0}, {Poly{0, 1, 1}, Poly{1}});
  CHECK(a == b);

  // Scrambled input order is sorted by degree.
  Point c(Partition{1, 0}, {Poly{1}, Poly{0, 1, 1}});
  CHECK(c == b);

  CHECK_THROWS_AS(Point(Partition{1, 0}, {Poly{0, 0, 1}, Poly{0, 1}}),
                  input_error);
  CHECK_THROWS_AS(Point(Partition{1, 0}, {Poly{0, 0, 1}, Poly{1}}, 2),
                  input_error);
  CHECK_THROWS_AS(Point(Partition{1, 0}, {Poly{0, 0, 1}}), input_error);
}

TEST_CASE("y polynomials are monic with the level degrees") {
  {
    Point x(Partition{1, 0}, {Poly{0, 0, 1}, Poly{1}});
    auto y = y_polynomials(x);
    REQUIRE(y.size() == 2);
    CHECK(y[0] == Poly{0, 1});
    CHECK(y[1] == Poly{1});
  }
  {
    Point x(Partition{0, 0, 0}, {Poly{0, 0, 1}, Poly{0, 1}, Poly{1}});
    for (const auto& y : y_polynomials(x)) CHECK(y == Poly{1});
  }
  {
    Point x(Partition{1, 1, 0},
            {Poly{0, 0, 0, 1}, Poly{0, 0, 1}, Poly{1}});
    auto y = y_polynomials(x);
    CHECK(y[0] == Poly{0, 0, 1});
    CHECK(y[1] == Poly{0, 1});
    CHECK(y[2] == Poly{1});
  }
}

TEST_CASE("root coordinates and genericity") {
  config::set_precision(256);
  Point x(Partition{1, 0}, {Poly{0, 0, 1}, Poly{1}});
  auto t = root_coordinates(x);
  REQUIRE(t.rank() == 2);
  REQUIRE(t.level[0].size() == 1);
  CHECK(abs(t.level[0][0]).to_double() < 1e-60);
  CHECK(t.level[1].empty());
  CHECK(is_generic(x));
  CHECK(is_generic(convert_point<MpComplex>(x)));

  // y_0 = u^2: double root, not generic in either domain.
  Point dbl(Partition{2, 0}, {Poly{0, 0, 0, 1}, Poly{1}});
  CHECK(y_polynomials(dbl)[0] == Poly{0, 0, 1});
  CHECK(!is_generic(dbl));
  CHECK(!is_generic(convert_point<MpComplex>(dbl)));

  Point deg(Partition{1, 1, 0}, {Poly{0, 0, 0, 1}, Poly{0, 0, 1}, Poly{1}});
  auto td = root_coordinates(deg);
  CHECK(td.level[0].size() == 2);
  CHECK(!is_generic(deg));
}

TEST_CASE("stationarity residuals") {
  // No equations at all.
  RootCoordinates<Rational> empty({{Rational(0)}, {}});
  CHECK(bae_residual(empty) == 0);

  // Midpoint: 1/(1-0) + 1/(1-2) = 0.
  RootCoordinates<Rational> mid({{Rational(0), Rational(2)}, {Rational(1)}});
  CHECK(bae_residual(mid) == 0);

  // The two-point singular line: t^{(0)} = {0,1}, t^{(1)} = {1/2}.
  RootCoordinates<Rational> half({{Rational(0), Rational(1)}, {frac(1, 2)}});
  CHECK(bae_residual(half) == 0);

  // Shifted off the midpoint the residual is 1/1 + 1/(-3) != 0.
  RootCoordinates<Rational> off({{Rational(0), Rational(4)}, {Rational(1)}});
  CHECK(bae_residual(off) == frac(2, 3));

  RootCoordinates<Rational> clash({{Rational(0), Rational(0)}, {Rational(0)}});
  CHECK_THROWS_AS(bae_residual(clash), compute_error);
}

TEST_CASE("factorized operator from root coordinates") {
  {
    RootCoordinates<Rational> none({{}, {}});
    auto d = chi_operator(none);
    CHECK(d.order() == 2);
    CHECK(d.coeff(0).is_zero());
    CHECK(d.coeff(1).is_zero());
    CHECK(d.coeff(2) == RF(1L));
  }
  {
    RootCoordinates<Rational> t({{Rational(0)}, {}});
    auto d = chi_operator(t);
    CHECK(apply(d, Poly{1}).is_zero());
    CHECK(apply(d, Poly{0, 0, 1}).is_zero());
    Point x(Partition{1, 0}, {Poly{0, 0, 1}, Poly{1}});
    CHECK(d == operator_from_kernel(x));
  }
  {
    // Bethe roots of the two-point singular line reproduce the oracle.
    RootCoordinates<Rational> t({{Rational(0), Rational(1)}, {frac(1, 2)}});
    CHECK(chi_operator(t) == two_point_oracle());
  }
}

TEST_CASE("operator from kernel") {
  Point flat(Partition{0, 0}, {Poly{0, 1}, Poly{1}});
  auto dd2 = operator_from_kernel(flat);
  CHECK(dd2.order() == 2);
  CHECK(dd2.coeff(0).is_zero());
  CHECK(dd2.coeff(1).is_zero());

  Point x(Partition{1, 0}, {Poly{0, 0, 1}, Poly{1}});
  auto d = operator_from_kernel(x);
  CHECK(d == ScalarDiffOp<Rational>({RF(), RF(Poly{-1}, Poly{0, 1}), RF(1L)}));

  Point big(Partition{1, 1, 0}, {Poly{0, 0, 0, 1}, Poly{0, 0, 1}, Poly{1}});
  auto d3 = operator_from_kernel(big);
  CHECK(d3.order() == 3);
  for (const auto& f : big.flag()) CHECK(apply(d3, f).is_zero());

  Point halfp(Partition{1, 1}, {Poly{0, 0, 1}, Poly{frac(-1, 2), 1}});
  CHECK(operator_from_kernel(halfp) == two_point_oracle());
}

TEST_CASE("kernel to point inverts the kernel map") {
  {
    auto d = operator_from_kernel(Point(Partition{0, 0}, {Poly{0, 1}, Poly{1}}));
    CHECK(kernel_to_point(d, Partition{0, 0}) ==
          Point(Partition{0, 0}, {Poly{0, 1}, Poly{1}}));
  }
  std::vector<Point> pts{
      Point(Partition{1, 0}, {Poly{0, 0, 1}, Poly{1}}),
      Point(Partition{1, 0}, {Poly{0, 5, 1}, Poly{1}}),
      Point(Partition{2, 1}, {Poly{7, 0, 2, 1}, Poly{3, 1}}),
      Point(Partition{1, 1}, {Poly{0, 0, 1}, Poly{frac(-1, 2), 1}}),
      Point(Partition{1, 1, 0}, {Poly{0, 4, 0, 1}, Poly{0, -1, 1}, Poly{1}}),
  };
  for (const auto& x : pts)
    CHECK(kernel_to_point(operator_from_kernel(x), x.shape()) == x);

  // dd - 1 has no polynomial kernel.
  ScalarDiffOp<Rational> no_poly({RF(Rational(-1)), RF(1L)});
  CHECK_THROWS_AS(kernel_to_point(no_poly, Partition{1}), input_error);
  // Wrong cell: the kernel degrees {2, 0} are not {2, 1}.
  auto d = operator_from_kernel(Point(Partition{1, 0}, {Poly{0, 0, 1}, Poly{1}}));
  CHECK_THROWS_AS(kernel_to_point(d, Partition{1, 1}), input_error);
}

TEST_CASE("curve samples approach the target points") {
  config::set_precision(256);
  auto x0 = convert_point<MpComplex>(
      Point(Partition{1, 1}, {Poly{0, 0, 1}, Poly{frac(-1, 2), 1}}));
  std::vector<MpComplex> b{MpComplex(0L), MpComplex(1L)};
  auto cs = sample_curve(x0, b, {1, 1}, 42);
  REQUIRE(cs.roots.size() == cs.eps.size());
  REQUIRE(cs.eps.size() == 25);
  const auto& last = cs.roots.back();
  REQUIRE(last.level[0].size() == 2);
  // Ordered by group: first root near 0, second near 1.
  CHECK(abs(last.level[0][0]).to_double() < 1e-6);
  CHECK(abs(last.level[0][1] - MpComplex(1L)).to_double() < 1e-6);
  CHECK(abs(last.level[1][0] - MpComplex(Rational(1) / 2)).to_double() < 1e-6);
  // Trajectories are continuous: consecutive samples stay close.
  for (std::size_t m = 1; m < cs.roots.size(); ++m)
    for (int a = 0; a < 2; ++a)
      for (std::size_t j = 0; j < cs.roots[m].level[a].size(); ++j)
        CHECK(abs(cs.roots[m].level[a][j] - cs.roots[m - 1].level[a][j])
                  .to_double() < 0.5);

  // Same seed replays bit for bit.
  auto again = sample_curve(x0, b, {1, 1}, 42);
  for (std::size_t m = 0; m < cs.roots.size(); ++m)
    CHECK(scalar_traits<MpComplex>::is_zero(cs.roots[m].level[0][0] -
                                            again.roots[m].level[0][0]));

  // Wrong targets cannot absorb the roots.
  std::vector<MpComplex> wrong{MpComplex(0L), MpComplex(5L)};
  CHECK_THROWS_AS(sample_curve(x0, wrong, {1, 1}, 42), compute_error);
  CHECK_THROWS_AS(sample_curve(x0, b, {2, 1}, 42), input_error);
}

TEST_CASE("curves resolve a non-generic base point") {
  config::set_precision(256);
  // y_0 = u^2 at the base; the pencil splits the double root.
  auto x0 = convert_point<MpComplex>(
      Point(Partition{1, 1, 0}, {Poly{0, 0, 0, 1}, Poly{0, 0, 1}, Poly{1}}));
  auto cs = sample_curve(x0, {MpComplex(0L)}, {2}, 11);
  const auto& last = cs.roots.back();
  REQUIRE(last.level[0].size() == 2);
  for (const auto& t : last.level[0]) {
    CHECK(abs(t).to_double() < 1e-3);
    CHECK(abs(t).to_double() > 1e-7);  // square-root rate, not linear
  }

  // Every sampled point is generic, so its root coordinates satisfy the
  // stationarity equations and the two operator constructions agree.
  for (std::size_t m : {std::size_t(0), cs.roots.size() - 1}) {
    CHECK(bae_residual(cs.roots[m]).to_double() < 1e-9);
    auto x = cs.germ.at(MpComplex(cs.eps[m]));
    auto via_chi = chi_operator(cs.roots[m]);
    auto via_wr = operator_from_kernel(x);
    for (long r = 2; r < 12; ++r) {
      MpComplex p(r);
      for (int k = 0; k < 3; ++k) {
        MpComplex a = via_chi.coeff(k).is_zero() ? MpComplex(0L)
                                                 : via_chi.coeff(k).eval(p);
        MpComplex bb = via_wr.coeff(k).is_zero() ? MpComplex(0L)
                                                 : via_wr.coeff(k).eval(p);
        CHECK(abs(a - bb).to_double() < 1e-8);
      }
    }
  }
}

TEST_CASE("generic operators have the expected local behaviour") {
  config::set_precision(256);
  auto x0 = convert_point<MpComplex>(
      Point(Partition{1, 1}, {Poly{0, 0, 1}, Poly{frac(-1, 2), 1}}));
  auto cs = sample_curve(x0, {MpComplex(0L), MpComplex(1L)}, {1, 1}, 42);
  auto x = cs.germ.at(MpComplex(cs.eps[3]));
  auto d = operator_from_kernel(x);
  MpReal rel_tol = MpReal::pow2(-100);
  // At each base-level root the exponents are {0, ..., N-2, N} = {0, 2}.
  for (const auto& t : cs.roots[3].level[0]) {
    auto ex = exponents_at(d, t, rel_tol);
    REQUIRE(ex.size() == 2);
    CHECK(abs(ex[0]).to_double() < 1e-8);
    CHECK(abs(ex[1] - MpComplex(2L)).to_double() < 1e-8);
  }
  // At infinity they are {1 - N - lambda_1, ..., -lambda_N} = {-2, -1}.
  auto ei = exponents_at_infinity(d, rel_tol);
  REQUIRE(ei.size() == 2);
  CHECK(abs(ei[0] - MpComplex(-2L)).to_double() < 1e-8);
  CHECK(abs(ei[1] - MpComplex(-1L)).to_double() < 1e-8);
}
