#include "gaudin/pipeline.hpp"

#include "doctest.h"

using namespace gaudin;

namespace {

using CVec = VecX<MpComplex>;
using RF = RationalFunction<Rational>;
using Poly = Polynomial<Rational>;

CVec cvec2(const MpComplex& a, const MpComplex& b) {
  CVec v(2);
  v[0] = a;
  v[1] = b;
  return v;
}

MatX<MpComplex> columns(const std::vector<CVec>& vs) {
  MatX<MpComplex> out(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t c = 0; c < vs.size(); ++c)
    out.col(static_cast<Eigen::Index>(c)) = vs[c];
  return out;
}

// Number of standard tableaux of the shape, by corner removal; the
// multiplicity of the irreducible in the tensor power of the vector
// representation.
long tableau_count(std::vector<long> shape) {
  while (!shape.empty() && shape.back() == 0) shape.pop_back();
  if (shape.empty()) return 1;
  long total = 0;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i + 1 < shape.size() && shape[i + 1] == shape[i]) continue;
    auto next = shape;
    next[i] -= 1;
    total += tableau_count(next);
  }
  return total;
}

// The order-two operator with kernel span{u^2, u - 1/2}: the unique member
// of the class for two single-box points at 0 and 1 with target (1, 1).
ScalarDiffOp<MpComplex> two_point_operator() {
  RF h1(Poly{1, -2}, Poly{0, -1, 1});
  RF h2(Poly{2}, Poly{0, -1, 1});
  return convert_op<MpComplex>(ScalarDiffOp<Rational>({h2, h1, RF(1L)}));
}

// The order-two operator with kernel span{u^2, 1} for a single point at 0
// with shape (1, 0).
ScalarDiffOp<MpComplex> one_point_operator() {
  return convert_op<MpComplex>(
      ScalarDiffOp<Rational>({RF(), RF(Poly{-1}, Poly{0, 1}), RF(1L)}));
}

std::vector<MpReal> geometric(int steps) {
  return default_eps_schedule(steps);
}

}  // namespace

TEST_CASE("ray representatives pin norm and phase") {
  config::set_precision(256);
  CVec v = cvec2(MpComplex(3L), MpComplex(MpReal(0L), MpReal(4L)));
  CVec rep = ray_representative(v);
  // Unit norm, largest component 4/5 made real positive, so the first
  // component picks up the compensating phase -i.
  CVec want = cvec2(MpComplex(MpReal(0L), MpReal(-3L) / MpReal(5L)),
                    MpComplex(MpReal(4L) / MpReal(5L)));
  CHECK(max_norm(CVec(rep - want)).to_double() < 1e-70);

  // Scaling by any nonzero number leaves the representative unchanged.
  CVec scaled = v * MpComplex(MpReal(-2L), MpReal(7L));
  CHECK(max_norm(CVec(ray_representative(scaled) - want)).to_double() < 1e-70);

  CHECK((MpReal(1L) - ray_alignment(v, scaled)).to_double() < 1e-70);
  CHECK(ray_alignment(cvec2(MpComplex(1L), MpComplex(0L)),
                      cvec2(MpComplex(0L), MpComplex(1L)))
            .to_double() < 1e-70);
  CHECK_THROWS_AS(ray_representative(CVec(CVec::Zero(2))),
                  std::invalid_argument);
}

TEST_CASE("direction limits of synthetic sequences") {
  config::set_precision(256);
  auto eps = geometric(20);

  SUBCASE("constant sequence has exponent zero") {
    CVec v = cvec2(MpComplex(3L), MpComplex(MpReal(0L), MpReal(4L)));
    std::vector<std::pair<MpReal, CVec>> seq;
    for (const auto& e : eps) seq.emplace_back(e, v);
    PuiseuxLimit lim = puiseux_leading(seq);
    CHECK(max_norm(CVec(lim.direction - ray_representative(v))) == MpReal(0L));
    CHECK(std::abs(lim.exponent) < 1e-10);
    CHECK(lim.last_delta == MpReal(0L));
  }

  SUBCASE("linear leading term dominates the quadratic tail") {
    std::vector<std::pair<MpReal, CVec>> seq;
    for (const auto& e : eps)
      seq.emplace_back(e, cvec2(MpComplex(e), MpComplex(e * e)));
    PuiseuxLimit lim = puiseux_leading(seq);
    CHECK(abs(lim.direction[0] - MpComplex(1L)).to_double() < 1e-5);
    CHECK(abs(lim.direction[1]).to_double() < 1e-5);
    CHECK(std::abs(lim.exponent - 1.0) < 0.05);
  }

  SUBCASE("fractional growth still has a direction") {
    std::vector<std::pair<MpReal, CVec>> seq;
    for (const auto& e : eps) {
      MpReal r = sqrt(e);
      seq.emplace_back(e, cvec2(MpComplex(r * MpReal(2L)), MpComplex(r)));
    }
    PuiseuxLimit lim = puiseux_leading(seq);
    CHECK(std::abs(lim.exponent - 0.5) < 1e-10);
    MpReal s = sqrt(MpReal(5L));
    CVec want = cvec2(MpComplex(MpReal(2L) / s), MpComplex(MpReal(1L) / s));
    CHECK(max_norm(CVec(lim.direction - want)).to_double() < 1e-70);
  }

  SUBCASE("oscillating directions are refused") {
    std::vector<std::pair<MpReal, CVec>> seq;
    for (std::size_t m = 0; m < eps.size(); ++m)
      seq.emplace_back(eps[m], m % 2 == 0
                                   ? cvec2(MpComplex(1L), MpComplex(0L))
                                   : cvec2(MpComplex(0L), MpComplex(1L)));
    CHECK_THROWS_WITH_AS(
        puiseux_leading(seq),
        "Puiseux limit not resolved; refine schedule/precision",
        compute_error);
  }

  SUBCASE("malformed sequences are rejected") {
    CVec v = cvec2(MpComplex(1L), MpComplex(0L));
    std::vector<std::pair<MpReal, CVec>> shrt{
        {MpReal(0.1), v}, {MpReal(0.01), v}, {MpReal(0.001), v}};
    CHECK_THROWS_AS(puiseux_leading(shrt), input_error);

    std::vector<std::pair<MpReal, CVec>> up;
    for (const auto& e : eps) up.emplace_back(e, v);
    std::swap(up[2], up[3]);
    CHECK_THROWS_AS(puiseux_leading(up), input_error);

    std::vector<std::pair<MpReal, CVec>> zero;
    for (const auto& e : eps) zero.emplace_back(e, v);
    zero[5].second = CVec::Zero(2);
    CHECK_THROWS_AS(puiseux_leading(zero), input_error);
  }
}

TEST_CASE("one point construction recovers the highest weight line") {
  config::set_precision(256);
  auto d0 = one_point_operator();
  ConstructionResult cr = construct_eigenvector(
      d0, {Partition{1, 0}}, Partition{1, 0}, {MpComplex(0L)});
  CHECK(cr.pass);
  CHECK(cr.eigen_residual.to_double() < 1e-40);
  CHECK(cr.operator_residual.to_double() < 1e-40);
  CHECK(cr.f_retries == 0);
  CHECK(cr.v_eps.size() == cr.schedule.size());
  CHECK(std::abs(cr.puiseux_exponent) < 1e-6);
  // The weight-function vector is the highest weight vector itself.
  CVec oracle = cvec2(MpComplex(1L), MpComplex(0L));
  CHECK((MpReal(1L) - ray_alignment(cr.w, oracle)).to_double() < 1e-30);
}

TEST_CASE("two point construction matches the hand eigenvector") {
  config::set_precision(256);
  auto d0 = two_point_operator();
  std::vector<Partition> shapes{Partition{1, 0}, Partition{1, 0}};
  Partition lam{1, 1};
  std::vector<MpComplex> b{MpComplex(0L), MpComplex(1L)};

  ConstructionOptions opt;
  opt.schedule = geometric(35);
  ConstructionResult cr = construct_eigenvector(d0, shapes, lam, b, opt);
  CHECK(cr.pass);
  CHECK(cr.eigen_residual.to_double() < 1e-10);
  CHECK(cr.operator_residual.to_double() < 1e-10);
  CHECK(std::abs(cr.puiseux_exponent) < 0.01);

  // Antisymmetric combination of the two slot orders.
  CVec oracle = CVec::Zero(4);
  oracle[1] = MpComplex(1L);
  oracle[2] = MpComplex(-1L);
  CHECK((MpReal(1L) - ray_alignment(cr.w, oracle)).to_double() < 1e-9);

  SUBCASE("direction is independent of the curve and projection seeds") {
    ConstructionOptions other = opt;
    other.curve_seed = 7;
    other.f_seed = 9;
    ConstructionResult cr2 = construct_eigenvector(d0, shapes, lam, b, other);
    CHECK(cr2.pass);
    CHECK((MpReal(1L) - ray_alignment(cr.w, cr2.w)).to_double() < 1e-6);
  }

  SUBCASE("identical seeds replay bit for bit") {
    ConstructionResult cr3 = construct_eigenvector(d0, shapes, lam, b, opt);
    CHECK(max_norm(CVec(cr.w - cr3.w)) == MpReal(0L));
    CHECK(max_norm(CVec(cr.v0 - cr3.v0)) == MpReal(0L));
    CHECK(cr.puiseux_exponent == cr3.puiseux_exponent);
  }
}

TEST_CASE("intermediate vectors stay singular eigenvectors along the curve") {
  config::set_precision(256);
  auto d0 = two_point_operator();
  Partition lam{1, 1};
  std::vector<MpComplex> b{MpComplex(0L), MpComplex(1L)};
  ConstructionOptions opt;
  opt.schedule = geometric(25);
  ConstructionResult cr = construct_eigenvector(
      d0, {Partition{1, 0}, Partition{1, 0}}, lam, b, opt);
  REQUIRE(cr.pass);

  // The same pencil is reproducible from the recorded seed and schedule.
  SchubertPoint<MpComplex> x0 =
      kernel_to_point(d0, lam, MpReal::pow2(-128));
  CurveSamples curve =
      sample_curve(x0, b, {1, 1}, cr.curve_seed, cr.schedule);

  MpReal rel_tol = MpReal::pow2(-128);
  for (std::size_t m : {std::size_t{0}, std::size_t{8}, std::size_t{20}}) {
    CVec v = omega(curve.roots[m]);
    CHECK(max_norm(CVec(v - cr.v_eps[m])) == MpReal(0L));

    ModuleSpace<MpComplex> sp(2, curve.roots[m].level[0]);
    MpReal vn = max_norm(v);
    CHECK(max_norm(sp.act_eij(1, 2, 0, v)).to_double() <
          1e-60 * vn.to_double());

    auto sing = singular_basis(sp, lam, rel_tol);
    REQUIRE(!sing.empty());
    MatX<MpComplex> basis = columns(sing);
    auto u = universal_operator(sp, basis, rel_tol);
    CVec sub = least_squares<MpComplex>(basis, v, rel_tol);
    auto er = eigen_check(u, sub);
    CHECK(er.pass);
    CHECK(er.residual.to_double() < 1e-50);

    // The extracted operator agrees with the one annihilating the sampled
    // flag.
    auto dx = operator_from_kernel(curve.germ.at(MpComplex(curve.eps[m])));
    CHECK(operator_distance(er.op, dx, sp.points()).to_double() < 1e-20);
  }
}

TEST_CASE("weight mismatch is rejected before any work") {
  config::set_precision(256);
  auto d0 = two_point_operator();
  CHECK_THROWS_AS(construct_eigenvector(d0, {Partition{1, 0}}, Partition{1, 1},
                                        {MpComplex(0L)}),
                  input_error);
}

TEST_CASE("bijection closes on the two point instance") {
  config::set_precision(256);
  ProblemInstance inst;
  inst.name = "two-point";
  inst.rank = 2;
  inst.big_lambda = {Partition{1, 0}, Partition{1, 0}};
  inst.b = {Rational(0), Rational(1)};
  inst.lambda = Partition{1, 1};

  CHECK(realize_instance(inst, 1).basis.cols() == 1);

  PipelineReport rep = verify_bijection(inst, 1e-8, 5);
  CHECK(rep.pass());
  CHECK(rep.precision == 256);
  CHECK(rep.seed == 5);
  REQUIRE(rep.assertions.size() == 5);
  CHECK(rep.assertions[0].name ==
        "eigenvector count equals the subspace dimension");
  CHECK(rep.assertions[4].name == "extracted operators are pairwise distinct");

  SUBCASE("reports replay identically") {
    PipelineReport rep2 = verify_bijection(inst, 1e-8, 5);
    REQUIRE(rep2.assertions.size() == rep.assertions.size());
    for (std::size_t i = 0; i < rep.assertions.size(); ++i) {
      CHECK(rep.assertions[i].name == rep2.assertions[i].name);
      CHECK(rep.assertions[i].pass == rep2.assertions[i].pass);
      CHECK(rep.assertions[i].residual == rep2.assertions[i].residual);
    }
  }
}

TEST_CASE("bijection closes on four single box factors") {
  config::set_precision(256);
  ProblemInstance inst;
  inst.name = "four-point";
  inst.rank = 2;
  inst.big_lambda = std::vector<Partition>(4, Partition{1, 0});
  inst.b = {Rational(0), Rational(1), Rational(2), Rational(3)};
  inst.lambda = Partition{2, 2};

  CHECK(realize_instance(inst, 1).basis.cols() == tableau_count({2, 2}));

  PipelineReport rep = verify_bijection(inst, 1e-8, 11);
  for (const auto& a : rep.assertions) {
    CAPTURE(a.name);
    CAPTURE(a.note);
    CHECK(a.pass);
  }
  // One count assertion, three per eigenvector, one distinctness.
  CHECK(rep.assertions.size() == 8);
}

TEST_CASE("bijection closes on the mixed rank three instance") {
  config::set_precision(256);
  ProblemInstance inst;
  inst.name = "mixed-rank-three";
  inst.rank = 3;
  inst.big_lambda = {Partition{1, 1, 0}, Partition{2, 0, 0}};
  inst.b = {Rational(0), Rational(1)};
  inst.lambda = Partition{2, 1, 1};

  // The wedge square tensor the symmetric square contains this weight once.
  CHECK(realize_instance(inst, 1).basis.cols() == 1);

  PipelineReport rep = verify_bijection(inst, 1e-8, 3);
  for (const auto& a : rep.assertions) {
    CAPTURE(a.name);
    CAPTURE(a.note);
    CHECK(a.pass);
  }
}

TEST_CASE("completeness of the simple spectrum on the cube") {
  config::set_precision(256);
  ProblemInstance inst;
  inst.name = "cube";
  inst.rank = 3;
  inst.big_lambda = std::vector<Partition>(3, Partition{1, 0, 0});
  inst.b = {Rational(0), Rational(1), Rational(2)};
  inst.lambda = Partition{1, 1, 1};

  CHECK(realize_instance(inst, 1).basis.cols() == tableau_count({1, 1, 1}));

  PipelineReport rep = completeness_report(inst, 1e-8, 2, true);
  for (const auto& a : rep.assertions) {
    CAPTURE(a.name);
    CAPTURE(a.note);
    CHECK(a.pass);
  }
  // Three completeness assertions plus the chained closure report.
  CHECK(rep.assertions.size() == 8);
}

TEST_CASE("weight mismatch instances report vacuously") {
  config::set_precision(256);
  ProblemInstance inst;
  inst.name = "vacuous";
  inst.rank = 3;
  inst.big_lambda = std::vector<Partition>(3, Partition{1, 0, 0});
  inst.b = {Rational(0), Rational(1), Rational(2)};
  inst.lambda = Partition{2, 0, 0};

  PipelineReport rep = completeness_report(inst);
  CHECK(rep.pass());
  REQUIRE(rep.assertions.size() == 1);
  CHECK(rep.assertions[0].note.find("vacuous") != std::string::npos);
  CHECK(verify_bijection(inst).pass());
}

TEST_CASE("instance validation") {
  config::set_precision(256);
  ProblemInstance inst;
  inst.rank = 2;
  inst.big_lambda = {Partition{1, 0}, Partition{1, 0}};
  inst.b = {Rational(0), Rational(0)};
  inst.lambda = Partition{1, 1};
  CHECK_THROWS_AS(realize_instance(inst, 1), input_error);

  inst.b = {Rational(0)};
  CHECK_THROWS_AS(realize_instance(inst, 1), input_error);

  inst.b = {Rational(0), Rational(1)};
  inst.lambda = Partition{1, 1, 0};
  CHECK_THROWS_AS(realize_instance(inst, 1), input_error);
}
