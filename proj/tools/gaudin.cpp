#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "gaudin/serialize.hpp"

namespace {

using namespace gaudin;

struct CliConfig {
  std::string instance_path;
  std::string command;
  unsigned precision = 0;  // 0: not given on the command line
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string eps0 = "1/100";
  std::string eps_ratio = "1/2";
  int eps_steps = 0;  // 0: library default with adaptive deepening
  double tol = 1e-8;
  int jobs = 1;
  std::string out_path;
};

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open instance file: " + path);
  Json j;
  in >> j;
  return j;
}

std::vector<InstanceConfig> load_instances(const Json& j) {
  std::vector<InstanceConfig> out;
  if (j.is_array())
    for (const auto& e : j) out.push_back(instance_from_json(e));
  else
    out.push_back(instance_from_json(j));
  for (std::size_t k = 0; k < out.size(); ++k)
    if (out[k].instance.name.empty())
      out[k].instance.name = "instance-" + std::to_string(k);
  return out;
}

// Precision precedence: command line, then the instance file, then the
// GAUDIN_PRECISION environment variable, then 256 bits.
unsigned resolve_precision(const CliConfig& cfg, const InstanceConfig& ic) {
  unsigned p = 256;
  if (const char* env = std::getenv("GAUDIN_PRECISION")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0')
      throw input_error("GAUDIN_PRECISION is not a number");
    p = static_cast<unsigned>(v);
  }
  if (ic.precision) p = ic.precision;
  if (cfg.precision) p = cfg.precision;
  if (p < 53) throw input_error("precision must be at least 53 bits");
  return p;
}

std::vector<MpReal> build_schedule(const CliConfig& cfg) {
  if (cfg.eps_steps <= 0) return {};
  Rational e0 = parse_rational(cfg.eps0);
  Rational r = parse_rational(cfg.eps_ratio);
  if (!(e0 > 0)) throw input_error("eps0 must be positive");
  if (!(r > 0 && r < 1)) throw input_error("eps ratio must lie in (0,1)");
  std::vector<MpReal> out;
  Rational e = e0;
  for (int m = 0; m < cfg.eps_steps; ++m) {
    out.emplace_back(e);
    e *= r;
  }
  return out;
}

void add(PipelineReport& rep, std::string name, bool pass, double residual,
         std::string note = "") {
  rep.assertions.push_back(
      Assertion{std::move(name), pass, residual, std::move(note)});
}

Json cmd_spectrum(const InstanceConfig& ic, std::uint64_t seed, double tol,
                  bool& pass) {
  PipelineReport rep;
  rep.instance = ic.instance.name;
  rep.seed = seed;
  rep.precision = config::precision();
  Json extra = Json::array();

  RealizedInstance real = realize_instance(ic.instance, Rng::mix(seed, 977));
  long dim = real.basis.cols();
  if (dim == 0) {
    add(rep, "realized subspace is nonzero", true, 0, "dimension 0; vacuous");
  } else {
    auto u = universal_operator(real.space, real.basis,
                                detail::default_rank_tol());
    auto eigen = spectrum(u, tol, Rng::mix(seed, 1));
    bool simple = true;
    for (const auto& er : eigen)
      if (er.degenerate) simple = false;
    add(rep, "eigenvector count equals the subspace dimension",
        simple && static_cast<long>(eigen.size()) == dim,
        static_cast<double>(eigen.size()) - static_cast<double>(dim));
    for (std::size_t i = 0; i < eigen.size(); ++i) {
      add(rep, "eigenvector " + std::to_string(i) + ": eigen residual",
          eigen[i].pass, eigen[i].residual.to_double());
      extra.push_back(eigen_report_to_json(eigen[i], u));
    }
  }
  pass = rep.pass();
  Json out = report_to_json(rep);
  out["eigenvectors"] = std::move(extra);
  return out;
}

Json cmd_construct(const InstanceConfig& ic, std::uint64_t seed, double tol,
                   const std::vector<MpReal>& schedule, bool& pass) {
  if (!ic.op)
    throw input_error(
        "construct needs an operator object in the instance file");
  const ProblemInstance& inst = ic.instance;
  ScalarDiffOp<MpComplex> d = convert_op<MpComplex>(*ic.op);
  std::vector<MpComplex> b;
  for (const auto& q : inst.b) b.emplace_back(q);

  PipelineReport rep;
  rep.instance = inst.name;
  rep.seed = seed;
  rep.precision = config::precision();
  Json extra;

  auto gate = delta_membership(d, inst.big_lambda, inst.lambda, b,
                               detail::default_rank_tol(), 1e-6);
  std::string notes;
  for (const auto& line : gate.notes) {
    if (!notes.empty()) notes += "; ";
    notes += line;
  }
  add(rep, "local weights sum to the target weight", gate.weight_consistent,
      0);
  add(rep, "singular points lie in the prescribed set",
      gate.cond_singular_points, 0);
  add(rep, "finite exponents match the shapes", gate.cond_exponents_finite,
      0);
  add(rep, "infinity exponents match the target weight",
      gate.cond_exponents_infinity, 0);
  add(rep, "kernel is polynomial of the prescribed degrees", gate.cond_kernel,
      0, notes);

  if (gate.pass) {
    ConstructionOptions opt;
    opt.schedule = schedule;
    opt.curve_seed = Rng::mix(seed, 100);
    opt.f_seed = Rng::mix(seed, 200);
    opt.tolerance = tol;
    try {
      ConstructionResult cr =
          construct_eigenvector(d, inst.big_lambda, inst.lambda, b, opt);
      add(rep, "limit direction resolved", true,
          cr.limit_delta.to_double());
      add(rep, "projection of the limit is nonzero",
          norm2(cr.w) > MpReal(0L), static_cast<double>(cr.f_retries));
      add(rep, "projected vector is a joint eigenvector",
          cr.eigen_residual.to_double() <= tol,
          cr.eigen_residual.to_double());
      add(rep, "extracted operator matches the input",
          cr.operator_residual.to_double() <= tol,
          cr.operator_residual.to_double());
      ModuleSpace<MpComplex> space(inst.rank, cr.limit_points);
      extra = Json{{"f_retries", cr.f_retries},
                   {"puiseux_exponent", cr.puiseux_exponent},
                   {"schedule_depth", cr.schedule.size()},
                   {"w", vector_to_json(space, cr.w)}};
    } catch (const compute_error& e) {
      add(rep, "construction completed", false, 1, e.what());
    }
  }
  pass = rep.pass();
  Json out = report_to_json(rep);
  if (!extra.is_null()) out["construction"] = std::move(extra);
  return out;
}

int run(const CliConfig& cfg) {
  if (cfg.tol <= 0) throw input_error("tolerance must be positive");
  if (cfg.jobs < 1) throw input_error("jobs must be at least 1");
  if (cfg.precision && cfg.precision < 53)
    throw input_error("precision must be at least 53 bits");

  std::vector<InstanceConfig> instances;
  bool array_output = false;
  if (cfg.command == "selftest") {
    InstanceConfig two;
    two.instance.name = "selftest-two-point";
    two.instance.rank = 2;
    two.instance.big_lambda = {Partition{1, 0}, Partition{1, 0}};
    two.instance.b = {Rational(0), Rational(1)};
    two.instance.lambda = Partition{1, 1};
    InstanceConfig four = two;
    four.instance.name = "selftest-four-point";
    four.instance.big_lambda = std::vector<Partition>(4, Partition{1, 0});
    four.instance.b = {Rational(0), Rational(1), Rational(2), Rational(3)};
    four.instance.lambda = Partition{2, 2};
    InstanceConfig cube;
    cube.instance.name = "selftest-cube";
    cube.instance.rank = 3;
    cube.instance.big_lambda = std::vector<Partition>(3, Partition{1, 0, 0});
    cube.instance.b = {Rational(0), Rational(1), Rational(2)};
    cube.instance.lambda = Partition{1, 1, 1};
    instances = {std::move(two), std::move(four), std::move(cube)};
    array_output = true;
  } else {
    if (cfg.instance_path.empty())
      throw input_error("--instance is required for this command");
    Json j = load_json(cfg.instance_path);
    array_output = j.is_array();
    instances = load_instances(j);
  }

  bool all_pass = true;
  std::vector<std::pair<std::string, Json>> reports;
  for (const auto& ic : instances) {
    config::set_precision(resolve_precision(cfg, ic));
    std::vector<MpReal> schedule = build_schedule(cfg);
    std::uint64_t seed = cfg.seed_given ? cfg.seed : ic.seed;
    bool pass = false;
    Json rep;
    if (cfg.command == "spectrum") {
      rep = cmd_spectrum(ic, seed, cfg.tol, pass);
    } else if (cfg.command == "construct") {
      rep = cmd_construct(ic, seed, cfg.tol, schedule, pass);
    } else if (cfg.command == "verify" || cfg.command == "selftest") {
      PipelineReport r =
          verify_bijection(ic.instance, cfg.tol, seed, schedule);
      pass = r.pass();
      rep = report_to_json(r);
    } else {
      PipelineReport r =
          completeness_report(ic.instance, cfg.tol, seed, false, schedule);
      pass = r.pass();
      rep = report_to_json(r);
    }
    if (!pass) all_pass = false;
    std::cerr << ic.instance.name << ": " << (pass ? "pass" : "FAIL") << '\n';
    reports.emplace_back(ic.instance.name, std::move(rep));
  }

  std::stable_sort(reports.begin(), reports.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Json payload;
  if (array_output) {
    payload = Json::array();
    for (auto& [name, rep] : reports) payload.push_back(std::move(rep));
  } else {
    payload = std::move(reports.front().second);
  }

  std::string text = payload.dump(2);
  text += '\n';
  std::cout << text;
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path);
    if (!out) throw input_error("cannot open output file: " + cfg.out_path);
    out << text;
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Eigenvectors of the Bethe algebra and Fuchsian operators with "
      "polynomial kernel: batch verification over instance files"};
  CliConfig cfg;
  app.add_option("--instance", cfg.instance_path,
                 "instance JSON file (one object or an array)");
  app.add_option("--command", cfg.command, "what to run")
      ->required()
      ->check(CLI::IsMember(
          {"spectrum", "construct", "verify", "completeness", "selftest"}));
  app.add_option("--precision", cfg.precision,
                 "mantissa bits (>= 53); beats the instance file and the "
                 "GAUDIN_PRECISION environment variable");
  auto* seed_opt = app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--eps0", cfg.eps0, "first schedule value, rational");
  app.add_option("--eps-ratio", cfg.eps_ratio,
                 "schedule ratio, rational in (0,1)");
  app.add_option("--eps-steps", cfg.eps_steps,
                 "schedule length; 0 keeps the adaptive default");
  app.add_option("--tol", cfg.tol, "residual tolerance");
  app.add_option("--jobs", cfg.jobs,
                 "parallelism cap; desk-scale instances run one at a time");
  app.add_option("--out", cfg.out_path, "also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cfg.seed_given = seed_opt->count() > 0;

  try {
    return run(cfg);
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const compute_error& e) {
    std::cerr << "computation failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
