// Acceptance battery: six end-to-end checks, one line each, nonzero exit if
// any fails or overruns its time budget.  All tolerances are pinned here.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "gaudin/serialize.hpp"

using namespace gaudin;

namespace {

constexpr double kBaeTol = 1e-9;       // stationarity residual of root data
constexpr double kSingularTol = 1e-9;  // relative raising-action norm
constexpr double kEigenTol = 1e-8;     // joint-eigenvector residual
constexpr double kOperatorTol = 1e-8;  // operator agreement at sample points
constexpr double kAlignTol = 1e-6;     // 1 - |cos angle| between directions

struct Outcome {
  bool pass = true;
  std::string detail;
};

void flag(Outcome& o, const std::string& msg) {
  o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += msg;
}

using Mat = MatX<Rational>;
using Poly = Polynomial<Rational>;
using RF = RationalFunction<Rational>;

Mat elementary(int n, int i, int j) {
  Mat m = Mat::Zero(n, n);
  m(i - 1, j - 1) = 1;
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

MatX<MpComplex> columns(const std::vector<VecX<MpComplex>>& vs) {
  MatX<MpComplex> out(vs.front().size(), static_cast<long>(vs.size()));
  for (std::size_t c = 0; c < vs.size(); ++c)
    out.col(static_cast<long>(c)) = vs[c];
  return out;
}

Partition single_box(int rank) {
  std::vector<long> parts(static_cast<std::size_t>(rank), 0);
  parts[0] = 1;
  return Partition(parts);
}

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

// Seeded random cell point with exact rational flag coefficients, redrawn
// until both the exact and the root-separation genericity tests pass.
SchubertPoint<Rational> random_generic_point(const Partition& lam,
                                             std::uint64_t seed) {
  auto degrees = lam.degrees();
  for (std::uint64_t attempt = 0; attempt < 40; ++attempt) {
    Rng rng(Rng::mix(seed, attempt));
    std::vector<Poly> basis;
    for (long d : degrees) {
      std::vector<Rational> c(static_cast<std::size_t>(d) + 1);
      for (long k = 0; k < d; ++k)
        c[static_cast<std::size_t>(k)] =
            frac(static_cast<long>(rng.next() % 17) - 8,
                 1 + static_cast<long>(rng.next() % 5));
      c.back() = 1;
      basis.emplace_back(std::move(c));
    }
    SchubertPoint<Rational> x(lam, std::move(basis));
    if (!is_generic(x)) continue;
    if (!is_generic(convert_point<MpComplex>(x), 1e-6)) continue;
    return x;
  }
  throw compute_error("no generic cell point found for the seed");
}

const std::vector<ProblemInstance>& closure_instances() {
  static const std::vector<ProblemInstance> all = [] {
    ProblemInstance four;
    four.name = "four-point";
    four.rank = 2;
    four.big_lambda = std::vector<Partition>(4, Partition{1, 0});
    four.b = {Rational(0), Rational(1), Rational(2), Rational(3)};
    four.lambda = Partition{2, 2};
    ProblemInstance cube;
    cube.name = "cube";
    cube.rank = 3;
    cube.big_lambda = std::vector<Partition>(3, Partition{1, 0, 0});
    cube.b = {Rational(0), Rational(1), Rational(2)};
    cube.lambda = Partition{1, 1, 1};
    ProblemInstance mixed;
    mixed.name = "mixed";
    mixed.rank = 3;
    mixed.big_lambda = {Partition{1, 1, 0}, Partition{2, 0, 0}};
    mixed.b = {Rational(0), Rational(1)};
    mixed.lambda = Partition{2, 1, 1};
    return std::vector<ProblemInstance>{four, cube, mixed};
  }();
  return all;
}

// Four single-box factors give 2 states; the symmetric cube 1; the wedge
// square paired with the symmetric square also 1 (one way to attach the
// two extra boxes as a horizontal strip).
const long kClosureDims[] = {2, 1, 1};

// The two-slot vector with one chain lowered to the third row: exact
// coefficients and nothing else.
Outcome criterion1() {
  Outcome o;
  RootCoordinates<Rational> t(
      {{Rational(0), Rational(1)}, {Rational(3)}, {Rational(7)}});
  VecX<Rational> v = omega(t);
  ModuleSpace<Rational> sp(3, t.level[0]);
  if (v.size() != sp.dim()) {
    flag(o, "wrong ambient dimension");
    return o;
  }
  for (long idx = 0; idx < v.size(); ++idx) {
    Rational want(0);
    if (idx == sp.index_of({3, 1})) want = frac(1, 12);
    if (idx == sp.index_of({1, 3})) want = frac(1, 8);
    if (v[idx] != want) flag(o, "coefficient mismatch at index " +
                                    std::to_string(idx));
  }
  return o;
}

// Random generic cell points: root data solves the stationarity equations,
// the weight-function value is a singular joint eigenvector, its extracted
// operator matches the flag operator, and the local data has the expected
// singularities, exponents, and polynomial kernel.
Outcome criterion2() {
  Outcome o;
  config::set_precision(256);
  MpReal rel_tol = MpReal::pow2(-128);
  struct Shape {
    int rank;
    std::vector<long> lam;
  };
  const std::vector<Shape> shapes = {
      {2, {1, 1}},    {2, {2, 0}},    {2, {2, 1}},    {2, {2, 2}},
      {2, {3, 1}},    {3, {1, 1, 0}}, {3, {1, 1, 1}}, {3, {2, 1, 0}},
      {3, {2, 1, 1}}, {3, {2, 2, 0}}};

  for (int trial = 0; trial < 20; ++trial) {
    const Shape& sh = shapes[static_cast<std::size_t>(trial) % shapes.size()];
    const std::string tag = "trial " + std::to_string(trial);
    try {
      Partition lam(sh.lam);
      SchubertPoint<Rational> x =
          random_generic_point(lam, static_cast<std::uint64_t>(trial) + 1);
      auto xc = convert_point<MpComplex>(x);
      RootCoordinates<MpComplex> t = root_coordinates(xc);
      if (!(bae_residual(t) < MpReal(kBaeTol)))
        flag(o, tag + ": stationarity residual too large");

      ModuleSpace<MpComplex> space(sh.rank, t.level[0]);
      VecX<MpComplex> w = omega(t);
      MpReal wn = norm2(w);
      if (wn == MpReal(0L)) {
        flag(o, tag + ": weight function vanished");
        continue;
      }
      for (int i = 1; i <= sh.rank; ++i)
        for (int j = i + 1; j <= sh.rank; ++j)
          if (!(norm2(space.act_eij(i, j, 0, w)) < MpReal(kSingularTol) * wn))
            flag(o, tag + ": raising action does not vanish");

      auto sing = singular_basis(space, lam, rel_tol);
      if (sing.empty()) {
        flag(o, tag + ": empty singular subspace");
        continue;
      }
      MatX<MpComplex> basis = columns(sing);
      auto u = universal_operator(space, basis, rel_tol);
      VecX<MpComplex> sub = least_squares<MpComplex>(basis, w, rel_tol);
      auto er = eigen_check(u, sub, kEigenTol);
      if (!er.pass) flag(o, tag + ": eigen residual too large");

      ScalarDiffOp<Rational> dq = operator_from_kernel(x);
      auto dx = convert_op<MpComplex>(dq);
      if (!(operator_distance(er.op, dx, space.points()) <
            MpReal(kOperatorTol)))
        flag(o, tag + ": extracted operator disagrees with the flag operator");

      // Local data: singular points, both exponent lists, kernel.
      std::vector<Partition> boxes(t.level[0].size(), single_box(sh.rank));
      auto gate = delta_membership(dx, boxes, lam, t.level[0], rel_tol, 1e-6);
      if (!gate.pass) flag(o, tag + ": local singularity data off");

      std::vector<Rational> inf = exponents_at_infinity(dq);
      std::vector<Rational> want;
      for (long d : lam.degrees()) want.emplace_back(-d);
      std::sort(inf.begin(), inf.end());
      std::sort(want.begin(), want.end());
      if (inf != want) flag(o, tag + ": exponents at infinity off");

      for (const auto& f : x.flag())
        if (!apply(dq, f).is_zero())
          flag(o, tag + ": flag polynomial not annihilated");
    } catch (const std::exception& e) {
      flag(o, tag + ": " + e.what());
    }
  }
  return o;
}

// Exact algebra at zero tolerance: the order-two expansion against the hand
// formula, commuting coefficient families, factorized against Wronskian
// operators, and the kernel round trip.
Outcome criterion3() {
  Outcome o;
  {
    ModuleSpace<Rational> space(2, {Rational(0), Rational(1)});
    MatrixDiffOp<Rational> raw = raw_universal_operator(space);
    Mat id2 = Mat::Identity(2, 2);
    auto current = [&](int i, int j) {
      Mat slot1 = kron(elementary(2, i, j), id2);
      Mat slot2 = kron(id2, elementary(2, i, j));
      std::vector<Mat> num{-slot1, slot1 + slot2};
      return MatRatFun<Rational>(std::move(num), Poly{0, -1, 1});
    };
    auto e11 = current(1, 1), e22 = current(2, 2);
    auto e12 = current(1, 2), e21 = current(2, 1);
    MatRatFun<Rational> c1 = (e11 + e22) * Rational(-1);
    MatRatFun<Rational> c0 = e11 * e22 - e21 * e12 - e22.derivative();
    MatrixDiffOp<Rational> hand(4, {c0, c1, MatRatFun<Rational>::identity(4)});
    std::vector<Rational> samples{Rational(2), Rational(3), Rational(-1),
                                  frac(5, 2), Rational(7)};
    for (const auto& xval : samples)
      for (int k = 0; k <= 2; ++k) {
        Mat a = raw.coeff(k).is_zero() ? Mat(Mat::Zero(4, 4))
                                       : raw.coeff(k).eval(xval);
        Mat b = hand.coeff(k).is_zero() ? Mat(Mat::Zero(4, 4))
                                        : hand.coeff(k).eval(xval);
        if (max_norm(Mat(a - b)) != 0) flag(o, "hand expansion mismatch");
      }
  }
  {
    ModuleSpace<Rational> s2(2, {Rational(0), Rational(1), Rational(2)});
    if (commutativity_check(s2) != 0) flag(o, "rank-two family fails to commute");
    ModuleSpace<Rational> s3(3, {Rational(0), Rational(1), Rational(2)});
    if (commutativity_check(s3, 2) != 0)
      flag(o, "rank-three family fails to commute");
  }
  {
    RootCoordinates<Rational> t({{Rational(0), Rational(1)}, {frac(1, 2)}});
    SchubertPoint<Rational> x(Partition{1, 1},
                              {Poly{0, 0, 1}, Poly{frac(-1, 2), 1}});
    if (chi_operator(t) != operator_from_kernel(x))
      flag(o, "factorized operator disagrees with the Wronskian form");
    RootCoordinates<Rational> t1({{Rational(0)}, {}});
    SchubertPoint<Rational> x1(Partition{1, 0}, {Poly{0, 0, 1}, Poly{1}});
    if (chi_operator(t1) != operator_from_kernel(x1))
      flag(o, "single-point factorized operator off");
  }
  for (std::uint64_t seed = 100; seed < 106; ++seed) {
    Partition lam = seed % 2 ? Partition{2, 1} : Partition{1, 1, 0};
    SchubertPoint<Rational> x = random_generic_point(lam, seed);
    if (kernel_to_point(operator_from_kernel(x), lam) != x)
      flag(o, "kernel round trip broke at seed " + std::to_string(seed));
  }
  return o;
}

// Eigenvector-to-operator-to-eigenvector closure on the three instances.
Outcome criterion4() {
  Outcome o;
  config::set_precision(256);
  const auto& all = closure_instances();
  for (std::size_t k = 0; k < all.size(); ++k) {
    PipelineReport rep = verify_bijection(all[k], kEigenTol, 21);
    for (const auto& a : rep.assertions)
      if (!a.pass)
        flag(o, all[k].name + ": " + a.name +
                    (a.note.empty() ? "" : " (" + a.note + ")"));
  }
  return o;
}

// Counting: as many simple eigenvectors as the subspace dimension, which
// itself matches the tableau/branching oracle; nothing degenerate.
Outcome criterion5() {
  Outcome o;
  config::set_precision(256);
  const auto& all = closure_instances();
  const long oracle[] = {tableau_count({2, 2}), tableau_count({1, 1, 1}),
                         kClosureDims[2]};
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (oracle[k] != kClosureDims[k]) flag(o, "oracle disagrees");
    RealizedInstance real = realize_instance(all[k], Rng::mix(21, 977));
    if (real.basis.cols() != oracle[k])
      flag(o, all[k].name + ": realized dimension " +
                  std::to_string(real.basis.cols()) + " != " +
                  std::to_string(oracle[k]));
    PipelineReport rep = completeness_report(all[k], kEigenTol, 21);
    for (const auto& a : rep.assertions)
      if (!a.pass) flag(o, all[k].name + ": " + a.name);
  }
  return o;
}

// Direction independence across seeds and byte determinism of reports.
Outcome criterion6() {
  Outcome o;
  config::set_precision(256);
  MpReal rel_tol = MpReal::pow2(-128);
  for (const auto& inst : closure_instances()) {
    RealizedInstance real = realize_instance(inst, Rng::mix(5, 977));
    auto u = universal_operator(real.space, real.basis, rel_tol);
    auto eigen = spectrum(u, kEigenTol, Rng::mix(5, 1));
    for (std::size_t i = 0; i < eigen.size(); ++i) {
      ConstructionOptions a, b;
      a.curve_seed = 11;
      a.f_seed = 13;
      b.curve_seed = 29;
      b.f_seed = 31;
      try {
        ConstructionResult ca = construct_eigenvector(
            eigen[i].op, inst.big_lambda, inst.lambda, real.b, a);
        ConstructionResult cb = construct_eigenvector(
            eigen[i].op, inst.big_lambda, inst.lambda, real.b, b);
        if (!ca.pass || !cb.pass)
          flag(o, inst.name + ": reconstruction failed");
        else if (!(ray_alignment(ca.w, cb.w) > MpReal(1L) - MpReal(kAlignTol)))
          flag(o, inst.name + ": direction depends on the seeds");
      } catch (const std::exception& e) {
        flag(o, inst.name + ": " + e.what());
      }
    }
  }
  std::string once = report_to_json(verify_bijection(
                         closure_instances()[0], kEigenTol, 21)).dump(2);
  std::string twice = report_to_json(verify_bijection(
                          closure_instances()[0], kEigenTol, 21)).dump(2);
  if (once != twice) flag(o, "identical seeds gave different reports");
  return o;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Outcome (*fn)();
    double budget_seconds;
  };
  const Entry entries[] = {
      {"exact weight-function example", criterion1, 1},
      {"random cell points give singular eigenvectors", criterion2, 180},
      {"exact operator identities", criterion3, 120},
      {"operator/eigenvector closure", criterion4, 600},
      {"spectrum completeness counts", criterion5, 600},
      {"seed independence and report determinism", criterion6, 600},
  };
  bool all = true;
  for (std::size_t k = 0; k < std::size(entries); ++k) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = entries[k].fn();
    } catch (const std::exception& e) {
      flag(o, e.what());
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    if (secs > entries[k].budget_seconds)
      flag(o, "over time budget: " + std::to_string(secs) + " s");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", secs);
    std::cout << "criterion " << k + 1 << " (" << entries[k].name
              << "): " << (o.pass ? "PASS" : "FAIL") << " [" << buf << " s]";
    if (!o.detail.empty()) std::cout << " " << o.detail;
    std::cout << '\n';
    if (!o.pass) all = false;
  }
  return all ? 0 : 1;
}
