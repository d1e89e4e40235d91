#ifndef GAUDIN_PIPELINE_HPP
#define GAUDIN_PIPELINE_HPP

#include <string>
#include <utility>

#include "gaudin/bethe.hpp"
#include "gaudin/schubert.hpp"

namespace gaudin {

// Unit vector with the phase fixed by making the largest-magnitude
// component real positive; eigenvectors are compared as directions, so this
// is the canonical representative of the ray.
inline VecX<MpComplex> ray_representative(const VecX<MpComplex>& v) {
  MpReal nrm = norm2(v);
  if (nrm == MpReal(0L))
    throw std::invalid_argument("zero vector has no direction");
  VecX<MpComplex> u = v / MpComplex(nrm);
  Eigen::Index j = detail::largest_component(u);
  return u / (u[j] / MpComplex(abs(u[j])));
}

// |cos angle| between two rays.
inline MpReal ray_alignment(const VecX<MpComplex>& a, const VecX<MpComplex>& b) {
  MpReal na = norm2(a), nb = norm2(b);
  if (na == MpReal(0L) || nb == MpReal(0L))
    throw std::invalid_argument("zero vector has no direction");
  return abs(dot(a, b)) / (na * nb);
}

struct PuiseuxLimit {
  VecX<MpComplex> direction;  // canonical ray representative of the limit
  double exponent = 0;        // leading growth rate of the norm; diagnostic
  MpReal last_delta;          // final successive difference, diagnostic
};

// Direction limit of a vector family sampled along a decreasing schedule.
// Each sample is normalized and phase-aligned against its predecessor, so
// the successive differences measure distance between rays; canonicalizing
// samples one by one would jitter when the limit has several components of
// equal magnitude.  The tail must be Cauchy (three final differences under
// tolerance).  The growth exponent is a least-squares slope of log-norm
// against log-eps and is reported for diagnosis only: fractional rates are
// fine, the direction is what converges.
inline PuiseuxLimit puiseux_leading(
    const std::vector<std::pair<MpReal, VecX<MpComplex>>>& samples,
    double tolerance = 1e-6) {
  if (samples.size() < 4)
    throw input_error("at least four samples are needed for a limit test");
  for (std::size_t m = 1; m < samples.size(); ++m)
    if (!(samples[m].first < samples[m - 1].first))
      throw input_error("sample schedule must be strictly decreasing");

  std::vector<VecX<MpComplex>> unit;
  for (const auto& [eps, v] : samples) {
    MpReal nrm = norm2(v);
    if (nrm == MpReal(0L))
      throw input_error("zero vector in the sample sequence");
    VecX<MpComplex> u = v / MpComplex(nrm);
    if (!unit.empty()) {
      MpComplex d = dot(unit.back(), u);
      MpReal mag = abs(d);
      if (mag > MpReal(0L)) u *= conj(d) / MpComplex(mag);
    }
    unit.push_back(std::move(u));
  }
  std::vector<MpReal> delta;
  for (std::size_t m = 1; m < unit.size(); ++m)
    delta.push_back(max_norm(VecX<MpComplex>(unit[m] - unit[m - 1])));
  MpReal tol(tolerance);
  for (std::size_t m = delta.size() - 3; m < delta.size(); ++m)
    if (!(delta[m] < tol))
      throw compute_error("Puiseux limit not resolved; refine schedule/precision");

  // Slope of log ||v|| vs log eps.
  MpReal sx(0L), sy(0L), sxx(0L), sxy(0L);
  for (const auto& [eps, v] : samples) {
    MpReal x = log(eps), y = log(norm2(v));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  MpReal count(static_cast<long>(samples.size()));
  MpReal slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);

  return PuiseuxLimit{ray_representative(unit.back()), slope.to_double(),
                      delta.back()};
}

// Max relative coefficient gap between two monic operators over
// deterministic sample points clear of the given pole locations.
template <class S>
typename scalar_traits<S>::real_type operator_distance(
    const ScalarDiffOp<S>& a, const ScalarDiffOp<S>& b,
    const std::vector<S>& poles, int count = 10) {
  using ST = scalar_traits<S>;
  auto pts = detail::off_pole_samples(poles, count);
  int order = std::max(a.order(), b.order());
  typename ST::real_type worst{};
  for (const auto& x : pts)
    for (int k = 0; k <= order; ++k) {
      S va = (k <= a.order() && !a.coeff(k).is_zero()) ? a.coeff(k).eval(x)
                                                       : S(0);
      S vb = (k <= b.order() && !b.coeff(k).is_zero()) ? b.coeff(k).eval(x)
                                                       : S(0);
      typename ST::real_type gap = ST::abs(va - vb);
      typename ST::real_type scale = ST::abs(vb);
      if (typename ST::real_type(1) > scale) scale = typename ST::real_type(1);
      gap = gap / scale;
      if (gap > worst) worst = gap;
    }
  return worst;
}

struct ConstructionOptions {
  std::vector<MpReal> schedule;   // empty: default geometric schedule
  std::uint64_t curve_seed = 1;
  std::uint64_t f_seed = 1;
  double tolerance = 1e-8;        // eigen and operator-comparison residuals
  double limit_tolerance = 1e-6;  // Cauchy tail bound for the limit
  double match_tol = 1e-6;        // exponent matching in the class test
};

struct ConstructionResult {
  ScalarDiffOp<MpComplex> input_op;        // monic operator the run started from
  std::uint64_t curve_seed = 0;
  std::vector<MpReal> schedule;
  std::vector<VecX<MpComplex>> v_eps;      // weight-function vector per step
  VecX<MpComplex> v0;                      // direction limit of v_eps
  double puiseux_exponent = 0;             // diagnostic
  MpReal limit_delta;                      // diagnostic
  std::uint64_t f_seed = 0;                // seed of the accepted projection
  int f_retries = 0;
  std::vector<MpComplex> limit_points;     // b_s repeated n_s times, in slot order
  VecX<MpComplex> w;                       // projected limit, full tensor coordinates
  MpReal eigen_residual;
  MpReal operator_residual;                // extracted operator vs input at samples
  bool pass = false;
};

namespace detail {

inline MpReal default_rank_tol() {
  return MpReal::pow2(-static_cast<long>(config::precision()) / 2);
}

// Echelon basis of the column span.
template <class S>
MatX<S> column_span(const MatX<S>& m,
                    const typename scalar_traits<S>::real_type& rel_tol) {
  Echelon<S> e = rref<S>(MatX<S>(m.transpose()), rel_tol);
  MatX<S> out(m.rows(), e.rank());
  for (long k = 0; k < e.rank(); ++k) out.col(k) = e.mat.row(k).transpose();
  return out;
}

}  // namespace detail

// Eigenvector from an operator: degenerate the kernel flag along a generic
// pencil toward the prescribed points, follow the weight-function vector to
// its direction limit, project onto the realized irreducible factors, and
// certify the output against the input operator.
inline ConstructionResult construct_eigenvector(
    const ScalarDiffOp<MpComplex>& d0, const std::vector<Partition>& big_lambda,
    const Partition& lambda, const std::vector<MpComplex>& b,
    const ConstructionOptions& opt = {}) {
  MpReal rel_tol = detail::default_rank_tol();
  ScalarDiffOp<MpComplex> d = d0.is_monic() ? d0 : monicized(d0);

  auto gate = delta_membership(d, big_lambda, lambda, b, rel_tol, opt.match_tol);
  if (!gate.pass) {
    std::string why = "operator is outside the admissible class";
    for (const auto& note : gate.notes) why += "; " + note;
    throw input_error(why);
  }

  ConstructionResult out;
  out.input_op = d;
  out.curve_seed = opt.curve_seed;

  std::vector<long> ns;
  for (const auto& l : big_lambda) ns.push_back(l.weight());

  SchubertPoint<MpComplex> x0 = kernel_to_point(d, lambda, rel_tol);

  // Repeated points branch at fractional rates, so the direction can
  // converge slower than the schedule shrinks.  When the caller did not pin
  // a schedule, deepen it until the tail is Cauchy; past ~45 steps the
  // within-group root separations approach the genericity guard, so give up
  // there instead of sampling junk.
  bool adaptive = opt.schedule.empty();
  out.schedule = adaptive ? default_eps_schedule() : opt.schedule;
  for (;;) {
    CurveSamples curve = sample_curve(x0, b, ns, opt.curve_seed, out.schedule);
    out.v_eps.clear();
    std::vector<std::pair<MpReal, VecX<MpComplex>>> seq;
    for (std::size_t m = 0; m < curve.eps.size(); ++m) {
      VecX<MpComplex> v = omega(curve.roots[m]);
      out.v_eps.push_back(v);
      seq.emplace_back(curve.eps[m], std::move(v));
    }
    try {
      PuiseuxLimit lim = puiseux_leading(seq, opt.limit_tolerance);
      out.v0 = lim.direction;
      out.puiseux_exponent = lim.exponent;
      out.limit_delta = lim.last_delta;
      break;
    } catch (const compute_error&) {
      if (!adaptive || out.schedule.size() >= 45) throw;
      out.schedule =
          default_eps_schedule(static_cast<int>(out.schedule.size()) + 10);
    }
  }

  int rank = lambda.n_parts();
  for (std::size_t s = 0; s < b.size(); ++s)
    for (long m = 0; m < ns[s]; ++m) out.limit_points.push_back(b[s]);

  // The projection kills the limit only for non-generic seeds; retry a few
  // fresh draws before giving up.
  std::uint64_t f_seed = opt.f_seed;
  int retry = 0;
  for (;; ++retry) {
    Epimorphism f = build_epimorphism(rank, big_lambda, ns, f_seed);
    out.w = apply_F(f, out.v0);
    if (norm2(out.w).to_double() >= 1e-6) break;
    if (retry >= 5)
      throw compute_error(
          "projection annihilated the limit vector after retries; "
          "non-generic data");
    f_seed = Rng::mix(opt.f_seed, static_cast<std::uint64_t>(retry) + 1);
  }
  out.f_seed = f_seed;
  out.f_retries = retry;

  // Certify on the singular subspace at the limit points.
  ModuleSpace<MpComplex> space(rank, out.limit_points);
  auto sing = singular_basis(space, lambda, rel_tol);
  if (sing.empty())
    throw compute_error("no singular subspace at the limit points");
  MatX<MpComplex> basis(space.dim(), static_cast<long>(sing.size()));
  for (std::size_t c = 0; c < sing.size(); ++c)
    basis.col(static_cast<long>(c)) = sing[c];
  VecX<MpComplex> w_sub = least_squares<MpComplex>(basis, out.w, rel_tol);
  MpReal escape = max_norm(VecX<MpComplex>(basis * w_sub - out.w));
  if (escape > MpReal(opt.tolerance) * max_norm(out.w))
    throw compute_error("projected vector escaped the singular subspace");

  UniversalOperator<MpComplex> u = universal_operator(space, basis, rel_tol);
  EigenReport<MpComplex> er = eigen_check(u, w_sub, opt.tolerance);
  out.eigen_residual = er.residual;
  out.operator_residual = operator_distance(er.op, d, out.limit_points);
  out.pass = er.pass && out.operator_residual < MpReal(opt.tolerance) &&
             norm2(out.w) > MpReal(0L);
  return out;
}

// A problem instance: rank, one local shape per evaluation point, the
// points themselves, and the target weight.
struct ProblemInstance {
  std::string name;
  int rank = 0;
  std::vector<Partition> big_lambda;
  std::vector<Rational> b;
  Partition lambda{std::vector<long>{}};
};

struct Assertion {
  std::string name;
  bool pass = false;
  double residual = 0;
  std::string note;
};

struct PipelineReport {
  std::string instance;
  std::vector<Assertion> assertions;
  std::uint64_t seed = 0;
  unsigned precision = 0;

  bool pass() const {
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }
};

// The realized target space: the tensor power module at the limit points
// together with an echelon basis of the image of the factor projections
// inside the singular weight subspace.
struct RealizedInstance {
  ModuleSpace<MpComplex> space;
  MatX<MpComplex> basis;
  std::vector<MpComplex> b;
  std::vector<long> ns;
};

inline RealizedInstance realize_instance(const ProblemInstance& inst,
                                         std::uint64_t f_seed) {
  if (inst.rank < 1) throw input_error("rank must be at least 1");
  if (inst.big_lambda.size() != inst.b.size())
    throw input_error("one local shape per evaluation point required");
  if (inst.b.empty()) throw input_error("at least one evaluation point required");
  for (std::size_t i = 0; i < inst.b.size(); ++i)
    for (std::size_t j = i + 1; j < inst.b.size(); ++j)
      if (inst.b[i] == inst.b[j])
        throw input_error("evaluation points must be pairwise distinct");
  if (inst.lambda.n_parts() != inst.rank)
    throw input_error("target weight size must equal the rank");
  for (const auto& l : inst.big_lambda)
    if (l.n_parts() != inst.rank)
      throw input_error("local shape size must equal the rank");

  MpReal rel_tol = detail::default_rank_tol();
  std::vector<long> ns;
  std::vector<MpComplex> b;
  std::vector<MpComplex> points;
  for (std::size_t s = 0; s < inst.b.size(); ++s) {
    ns.push_back(inst.big_lambda[s].weight());
    b.emplace_back(inst.b[s]);
    for (long m = 0; m < ns.back(); ++m) points.emplace_back(inst.b[s]);
  }
  ModuleSpace<MpComplex> space(inst.rank, points);
  auto sing = singular_basis(space, inst.lambda, rel_tol);
  if (sing.empty())
    return RealizedInstance{std::move(space), MatX<MpComplex>(0, 0),
                            std::move(b), std::move(ns)};
  Epimorphism f = build_epimorphism(inst.rank, inst.big_lambda, ns, f_seed);
  MatX<MpComplex> image(space.dim(), static_cast<long>(sing.size()));
  for (std::size_t c = 0; c < sing.size(); ++c)
    image.col(static_cast<long>(c)) = apply_F(f, sing[c]);
  MatX<MpComplex> basis = detail::column_span(image, rel_tol);
  return RealizedInstance{std::move(space), std::move(basis), std::move(b),
                          std::move(ns)};
}

namespace detail {

inline void add_assertion(PipelineReport& rep, std::string name, bool pass,
                          double residual, std::string note = "") {
  rep.assertions.push_back(
      Assertion{std::move(name), pass, residual, std::move(note)});
}

}  // namespace detail

// Round trip on one instance: diagonalize the coefficient family on the
// realized target space, pass every eigenvector through the operator class
// test and the construction, and compare the reconstructed direction with
// the original.  Failures are itemized, not thrown.
inline PipelineReport verify_bijection(const ProblemInstance& inst,
                                       double tolerance = 1e-8,
                                       std::uint64_t seed = 1,
                                       const std::vector<MpReal>& schedule = {}) {
  PipelineReport rep;
  rep.instance = inst.name;
  rep.seed = seed;
  rep.precision = config::precision();
  MpReal rel_tol = detail::default_rank_tol();

  RealizedInstance real = realize_instance(inst, Rng::mix(seed, 977));
  long dim = real.basis.cols();
  if (dim == 0) {
    detail::add_assertion(rep, "realized subspace is nonzero", true, 0,
                          "dimension 0; vacuous");
    return rep;
  }

  UniversalOperator<MpComplex> u =
      universal_operator(real.space, real.basis, rel_tol);
  auto eigen = spectrum(u, tolerance, Rng::mix(seed, 1));

  bool simple = true;
  for (const auto& er : eigen)
    if (er.degenerate) simple = false;
  detail::add_assertion(rep, "eigenvector count equals the subspace dimension",
                        simple && static_cast<long>(eigen.size()) == dim,
                        static_cast<double>(eigen.size()) -
                            static_cast<double>(dim));

  std::vector<ScalarDiffOp<MpComplex>> ops;
  for (std::size_t i = 0; i < eigen.size(); ++i) {
    const std::string tag = "eigenvector " + std::to_string(i);
    detail::add_assertion(rep, tag + ": eigen residual", eigen[i].pass,
                          eigen[i].residual.to_double());
    ops.push_back(eigen[i].op);

    auto gate = delta_membership(eigen[i].op, inst.big_lambda, inst.lambda,
                                 real.b, rel_tol, 1e-6);
    std::string note;
    for (const auto& line : gate.notes) {
      if (!note.empty()) note += "; ";
      note += line;
    }
    detail::add_assertion(rep, tag + ": operator lies in the admissible class",
                          gate.pass, 0, note);
    if (!gate.pass) continue;

    ConstructionOptions opt;
    opt.schedule = schedule;
    opt.curve_seed = Rng::mix(seed, 100 + static_cast<std::uint64_t>(i));
    opt.f_seed = Rng::mix(seed, 200 + static_cast<std::uint64_t>(i));
    opt.tolerance = tolerance;
    try {
      ConstructionResult cr = construct_eigenvector(
          eigen[i].op, inst.big_lambda, inst.lambda, real.b, opt);
      VecX<MpComplex> v_full = u.full_vector(eigen[i].v);
      MpReal align = ray_alignment(cr.w, v_full);
      detail::add_assertion(rep, tag + ": reconstruction matches",
                            cr.pass && align > MpReal(1L) - MpReal(1e-6),
                            (MpReal(1L) - align).to_double());
    } catch (const std::exception& e) {
      detail::add_assertion(rep, tag + ": reconstruction matches", false, 1,
                            e.what());
    }
  }

  // Injectivity: distinct eigenvectors map to operators separated at the
  // sample points.
  double min_gap = -1;
  bool distinct = true;
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      double gap =
          operator_distance(ops[i], ops[j], real.space.points()).to_double();
      if (min_gap < 0 || gap < min_gap) min_gap = gap;
      if (gap <= 1e-6) distinct = false;
    }
  detail::add_assertion(rep, "extracted operators are pairwise distinct",
                        distinct, min_gap < 0 ? 0 : min_gap,
                        ops.size() < 2 ? "fewer than two eigenvectors" : "");
  return rep;
}

// Simplicity of the realized spectrum: every joint eigenspace
// one-dimensional and as many eigenvectors as the dimension.  Optionally
// chains the full round trip.
inline PipelineReport completeness_report(const ProblemInstance& inst,
                                          double tolerance = 1e-8,
                                          std::uint64_t seed = 1,
                                          bool with_bijection = false,
                                          const std::vector<MpReal>& schedule = {}) {
  PipelineReport rep;
  rep.instance = inst.name;
  rep.seed = seed;
  rep.precision = config::precision();
  MpReal rel_tol = detail::default_rank_tol();

  RealizedInstance real = realize_instance(inst, Rng::mix(seed, 977));
  long dim = real.basis.cols();
  if (dim == 0) {
    detail::add_assertion(rep, "simple spectrum spans the subspace", true, 0,
                          "dimension 0; vacuous");
    return rep;
  }

  UniversalOperator<MpComplex> u =
      universal_operator(real.space, real.basis, rel_tol);
  auto eigen = spectrum(u, tolerance, Rng::mix(seed, 1));

  long simple = 0;
  bool degenerate = false;
  double worst = 0;
  for (const auto& er : eigen) {
    if (er.degenerate) degenerate = true;
    else ++simple;
    worst = std::max(worst, er.residual.to_double());
  }
  detail::add_assertion(rep, "simple eigenvector count equals the dimension",
                        simple == dim,
                        static_cast<double>(simple) - static_cast<double>(dim));
  detail::add_assertion(rep, "no degenerate joint eigenspaces", !degenerate,
                        degenerate ? 1 : 0);
  detail::add_assertion(rep, "eigen residuals within tolerance", worst <= tolerance,
                        worst);

  if (with_bijection) {
    PipelineReport closure = verify_bijection(inst, tolerance, seed, schedule);
    for (auto& a : closure.assertions)
      rep.assertions.push_back(std::move(a));
  }
  return rep;
}

}  // namespace gaudin

#endif
