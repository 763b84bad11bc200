#include "definetti/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "definetti/errors.hpp"
#include "definetti/extension.hpp"
#include "definetti/games.hpp"
#include "definetti/hsep.hpp"
#include "definetti/infotheory.hpp"
#include "definetti/json_io.hpp"
#include "definetti/norms.hpp"
#include "definetti/random.hpp"
#include "definetti/rounding.hpp"
#include "definetti/separability.hpp"
#include "definetti/tomography.hpp"

namespace definetti::cli {

namespace {

// Non-finite values have no JSON number form.
Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json nums(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

struct Context {
  std::string format = "json";
  Tolerances tol;
  std::optional<std::int64_t> max_dim, max_tuples, max_lp_vars, max_branches;
  Json bounds = Json::array();
  Json extra_tol = Json::object();

  Budget budget() const {
    Budget b = Budget::from_environment();
    if (max_dim) b.max_dim = *max_dim;
    if (max_tuples) b.max_tuples = *max_tuples;
    if (max_lp_vars) b.max_lp_vars = *max_lp_vars;
    if (max_branches) b.max_branches = *max_branches;
    return b;
  }

  void bound(const std::string& name, const std::string& formula, double value) {
    Json b;
    b["name"] = name;
    b["formula"] = formula;
    b["value"] = num(value);
    bounds.push_back(b);
  }
};

struct SolverFlags {
  long max_iter = DykstraOptions{}.max_iter;
  double feas_tol = DykstraOptions{}.feas_tol;

  void add(CLI::App* app) {
    app->add_option("--max-iter", max_iter, "Dykstra iteration cap")->check(CLI::PositiveNumber);
    app->add_option("--feas-tol", feas_tol, "feasibility tolerance")->check(CLI::PositiveNumber);
  }
  DykstraOptions options(Context& ctx) const {
    DykstraOptions o;
    o.max_iter = max_iter;
    o.feas_tol = feas_tol;
    ctx.extra_tol["feas_tol"] = o.feas_tol;
    ctx.extra_tol["gap_tol"] = o.gap_tol;
    ctx.extra_tol["max_iter"] = o.max_iter;
    return o;
  }
};

Json solve_json(const SolveReport& r) {
  Json j;
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["affine_residual"] = num(r.affine_residual);
  j["psd_residual"] = num(r.psd_residual);
  j["symmetry_residual"] = num(r.symmetry_residual);
  j["gap"] = num(r.gap);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream f(path);
  require(f.good(), ErrorKind::InvalidInput, "cannot write " + path);
  f << j.dump() << '\n';
}

std::vector<Indices> parse_parts(const std::string& s, int systems) {
  std::vector<Indices> parts;
  if (s.empty()) {
    for (int i = 0; i < systems; ++i) parts.push_back({i});
    return parts;
  }
  std::stringstream groups(s);
  std::string group;
  while (std::getline(groups, group, ';')) {
    Indices part;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      std::size_t used = 0;
      int v = -1;
      try {
        v = std::stoi(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used > 0 && used == item.size(), ErrorKind::InvalidInput, "bad subsystem index '" + item + "'");
      part.push_back(v);
    }
    require(!part.empty(), ErrorKind::InvalidInput, "empty part in --parts");
    parts.push_back(part);
  }
  return parts;
}

std::vector<double> first_question_marginal(const Game& g) {
  const TupleIndex qi = g.question_index();
  std::vector<double> mu(g.questions[0].size(), 0.0);
  for (std::int64_t q = 0; q < qi.size(); ++q) mu[qi.decode(q)[0]] += g.pi[q];
  return mu;
}

Json brackets(double wc, double wns) {
  Json b;
  b["classical"] = num(wc);
  b["entangled"] = {{"lower", num(wc)}, {"upper", num(wns)}};
  b["non_signaling"] = num(wns);
  std::ostringstream os;
  os << std::setprecision(12) << "w_c = " << wc << " <= w_e <= w_ns = " << wns;
  b["text"] = os.str();
  return b;
}

void print_table(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  const bool nested_array = j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& x) {
                              return x.is_object();
                            });
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) print_table(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (nested_array) {
    for (std::size_t i = 0; i < j.size(); ++i) print_table(j[i], prefix + "." + std::to_string(i), rows);
  } else {
    rows.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

void emit(const Json& doc, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << doc.dump(2) << '\n';
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  print_table(doc, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
}

struct Command {
  CLI::App* app;
  std::function<void(Context&, Json&)> run;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric extensions, de Finetti rounding, nonlocal games and tomography"};
  app.name("definetti");
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx;
  app.add_option("--format", ctx.format, "output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--herm-tol", ctx.tol.herm, "Hermiticity tolerance on inputs")->check(CLI::PositiveNumber);
  app.add_option("--psd-tol", ctx.tol.psd, "positivity tolerance on inputs")->check(CLI::PositiveNumber);
  app.add_option("--trace-tol", ctx.tol.trace, "unit-trace tolerance on inputs")->check(CLI::PositiveNumber);
  app.add_option("--povm-tol", ctx.tol.povm, "POVM completeness tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-dim", ctx.max_dim, "cap on dense operator side")->check(CLI::PositiveNumber);
  app.add_option("--max-tuples", ctx.max_tuples, "cap on enumerated strategy tuples")->check(CLI::PositiveNumber);
  app.add_option("--max-lp-vars", ctx.max_lp_vars, "cap on LP variables")->check(CLI::PositiveNumber);
  app.add_option("--max-branches", ctx.max_branches, "cap on measurement branches")->check(CLI::PositiveNumber);

  std::vector<Command> commands;
  std::string input;
  auto add_input = [&](CLI::App* sub, const std::string& what) { sub->add_option("input", input, what)->required(); };

  // extend
  {
    auto* sub = app.add_subcommand("extend", "search for a k-extension of a bipartite state");
    struct Opts {
      int k = 0;
      std::string mode = "perm", output;
      SolverFlags solver;
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "state JSON on A (x) B");
    sub->add_option("--k", o->k, "number of B copies")->required()->check(CLI::PositiveNumber);
    sub->add_option("--mode", o->mode, "perm: invariant under permuting B copies; sym: B copies in the symmetric subspace")
        ->check(CLI::IsMember({"perm", "sym"}));
    sub->add_option("--output", o->output, "write the extension (PSD part, renormalised) to this file");
    o->solver.add(sub);
    commands.push_back({sub, [&, o](Context& c, Json& doc) {
                          const DensityMatrix rho = state_from_json(read_json_file(input), c.tol);
                          require(rho.num_systems() == 2, ErrorKind::InvalidInput, "state must have two subsystems");
                          ExtensionSpec spec;
                          spec.dim_a = rho.dims()[0];
                          spec.dim_b = rho.dims()[1];
                          spec.k = o->k;
                          spec.mode = o->mode == "sym" ? ExtensionMode::SymmetricSubspace
                                                    : ExtensionMode::PermutationInvariant;
                          const SolveReport r = find_symmetric_extension(rho, spec, o->solver.options(c), c.budget());
                          require(r.status != SolveStatus::IterationLimit, ErrorKind::IterationLimit,
                                  "extension search undecided after " + std::to_string(r.iterations) + " iterations");
                          doc["status"] = to_string(r.status);
                          doc["k"] = o->k;
                          doc["mode"] = to_string(spec.mode);
                          doc["dims"] = spec.extended_dims();
                          doc["solve"] = solve_json(r);
                          if (r.point) {
                            const ExtensionCheck ch = verify_extension(rho, *r.point, spec);
                            doc["check"] = {{"marginal", num(ch.marginal)}, {"trace", num(ch.trace)},
                                            {"psd", num(ch.psd)},           {"symmetry", num(ch.symmetry)},
                                            {"support", num(ch.support)},   {"worst", num(ch.worst(spec.mode))}};
                            if (!o->output.empty())
                              write_file(o->output, state_to_json(DensityMatrix::nearest(spec.extended_dims(), *r.point)));
                          }
                          c.bound("k-extendible one-way LOCC distance to separable",
                                  "sqrt(2 ln|A| / k)", fixed_measurement_guarantee(spec.dim_a, o->k));
                        }});
  }

  // round
  {
    auto* sub = app.add_subcommand("round", "round an extension to a separable state under a fixed B measurement");
    struct Opts {
      std::string povm_b, povm_a, output;
      double sym_tol = 1e-7;
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "extension JSON on A (x) B^k");
    sub->add_option("--povm", o->povm_b, "POVM JSON measured on each B (default: computational basis)");
    sub->add_option("--a-povm", o->povm_a, "POVM JSON applied on A when scoring (default: identity)");
    sub->add_option("--sym-tol", o->sym_tol, "permutation invariance tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--output", o->output, "write the rounded separable state to this file");
    commands.push_back({sub, [&, o](Context& c, Json& doc) {
                          const DensityMatrix ext = state_from_json(read_json_file(input), c.tol);
                          require(ext.num_systems() >= 2, ErrorKind::InvalidInput, "extension needs A and B systems");
                          const int da = ext.dims()[0], db = ext.dims()[1];
                          const QcChannel lambda(o->povm_b.empty() ? Povm::computational(db)
                                                                : povm_from_json(read_json_file(o->povm_b), c.tol));
                          MeasurementFamily fam = MeasurementFamily::identity(da);
                          if (!o->povm_a.empty()) {
                            const Povm pa = povm_from_json(read_json_file(o->povm_a), c.tol);
                            fam.channels = {QcChannel(pa)};
                            fam.out_dim_a = pa.outcomes();
                          }
                          c.extra_tol["sym_tol"] = o->sym_tol;
                          const RoundingResult r = round_fixed_measurement(ext, lambda, fam, o->sym_tol, c.budget());
                          const int k = ext.num_systems() - 1;
                          doc["k"] = k;
                          doc["achieved_error"] = num(r.achieved_error);
                          doc["guarantee"] = num(r.guarantee);
                          doc["guarantee_vacuous"] = r.guarantee_vacuous;
                          doc["within_guarantee"] = r.achieved_error <= r.guarantee;
                          doc["chosen_j"] = r.chosen_j;
                          doc["errors"] = nums(r.errors);
                          doc["ensemble_size"] = r.ensemble.size();
                          if (!o->output.empty()) write_file(o->output, state_to_json(r.sigma));
                          c.bound("fixed-measurement rounding guarantee", "sqrt(2 ln|A~| / k)", r.guarantee);
                        }});
  }

  // round-trace
  {
    auto* sub = app.add_subcommand("round-trace", "trace-norm rounding of a symmetric-subspace extension");
    struct Opts {
      double support_tol = 1e-7;
      std::string output;
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "extension JSON on A (x) B^k, B systems in the symmetric subspace");
    sub->add_option("--support-tol", o->support_tol, "symmetric subspace support tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--output", o->output, "write the rounded separable state to this file");
    commands.push_back({sub, [&, o](Context& c, Json& doc) {
                          const DensityMatrix ext = state_from_json(read_json_file(input), c.tol);
                          c.extra_tol["support_tol"] = o->support_tol;
                          const RoundingResult r = round_trace_norm(ext, o->support_tol, c.budget());
                          doc["k"] = ext.num_systems() - 1;
                          doc["achieved_error"] = num(r.achieved_error);
                          doc["guarantee"] = num(r.guarantee);
                          doc["guarantee_vacuous"] = r.guarantee_vacuous;
                          doc["chosen_j"] = r.chosen_j;
                          doc["cmi"] = nums(r.cmi);
                          doc["cmi_bound"] = num(r.cmi_bound);
                          doc["measurement_outcomes"] = r.measurement.outcomes();
                          if (!o->output.empty()) write_file(o->output, state_to_json(r.sigma));
                          c.bound("trace-norm rounding guarantee", "6 |B|^2 sqrt(ln k / k)", r.guarantee);
                          c.bound("selected conditional mutual information", "|B| ln k / k", r.cmi_bound);
                        }});
  }

  // septest
  {
    auto* sub = app.add_subcommand("septest", "weak-membership separability test via symmetric extensions");
    struct Opts {
      double eps = 0.1;
      int k_override = 0;
      SolverFlags solver;
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "multipartite state JSON, one party per subsystem");
    sub->add_option("--eps", o->eps, "trace-distance promise gap")->check(CLI::Range(1e-12, 2.0));
    sub->add_option("--k", o->k_override, "override the scheduled extension level")->check(CLI::PositiveNumber);
    o->solver.add(sub);
    commands.push_back({sub, [&, o](Context& c, Json& doc) {
                          const DensityMatrix rho = state_from_json(read_json_file(input), c.tol);
                          std::optional<int> k;
                          if (o->k_override > 0) k = o->k_override;
                          const SeparabilityResult r =
                              separability_test(rho, o->eps, k, o->solver.options(c), c.budget());
                          doc["verdict"] = to_string(r.verdict);
                          doc["run"] = r.override_used ? "override" : "scheduled";
                          doc["k"] = r.k;
                          doc["scheduled_k"] = num(r.scheduled_k);
                          doc["eps"] = o->eps;
                          doc["mixing"] = num(r.mixing);
                          doc["solve"] = solve_json(r.report);
                          c.extra_tol["eps"] = o->eps;
                          c.bound("extension level for eps-weak membership (after eps/4 mixing)",
                                  "l + ceil(4 l^2 (eps/2)^-2 sum_j ln|A_j|)", r.scheduled_k);
                        }});
  }

  // hsep
  {
    auto* sub = app.add_subcommand("hsep", "upper bound on the maximum of tr(M rho) over separable rho");
    struct Opts {
      int k = 0;
      double obj_tol = 1e-4;
      bool exact = false;
      SolverFlags solver;
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "Hermitian operator JSON, one party per subsystem");
    sub->add_option("--k", o->k, "extension level")->required()->check(CLI::PositiveNumber);
    sub->add_option("--obj-tol", o->obj_tol, "bisection tolerance on the value")->check(CLI::PositiveNumber);
    sub->add_flag("--exact", o->exact, "also report the relaxation value by eigendecomposition");
    o->solver.add(sub);
    commands.push_back({sub, [&, o](Context& c, Json& doc) {
                          const HermitianOp m = operator_from_json(read_json_file(input), c.tol);
                          const Budget b = c.budget();
                          const HsepResult r = hsep_upper_bound(m, o->k, o->obj_tol, o->solver.options(c), b);
                          c.extra_tol["obj_tol"] = o->obj_tol;
                          doc["value"] = num(r.value);
                          doc["upper"] = num(r.upper);
                          doc["k"] = r.k;
                          doc["parties"] = r.l;
                          doc["unit_interval"] = r.unit_interval;
                          doc["bisection_steps"] = r.solve.steps;
                          doc["solve"] = solve_json(r.solve.report);
                          if (o->exact) doc["relaxation_exact"] = num(hsep_relaxation_exact(m, o->k, b));
                          c.bound("gap between the level-k relaxation and the separable maximum",
                                  "sqrt(2 l^3 ln n / (k - l))", r.sandwich_gap);
                        }});
  }

  // norm2l
  {
    auto* sub = app.add_subcommand("norm2l", "the 2(l) norm over a partition of the subsystems");
    struct Opts {
      std::string parts;
      bool locc = false;
      std::uint64_t seed = 0;
      int restarts = 32;
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "Hermitian operator JSON");
    sub->add_option("--parts", o->parts, "parts as comma lists separated by ';' (default: one per subsystem)");
    sub->add_flag("--locc", o->locc, "also run the one-way LOCC see-saw lower bound (bipartite, needs --seed)");
    auto* seed_opt = sub->add_option("--seed", o->seed, "seed for the see-saw restarts");
    sub->add_option("--restarts", o->restarts, "see-saw restarts")->check(CLI::PositiveNumber);
    commands.push_back({sub, [&, o, seed_opt](Context& c, Json& doc) {
                          const HermitianOp x = operator_from_json(read_json_file(input), c.tol);
                          const auto ps = parse_parts(o->parts, x.num_systems());
                          doc["value"] = num(norm_2l(x, ps));
                          Json pj = Json::array();
                          for (const auto& p : ps) pj.push_back(p);
                          doc["parts"] = pj;
                          if (o->locc) {
                            require(seed_opt->count() > 0, ErrorKind::InvalidInput, "--locc needs --seed");
                            require(x.num_systems() == 2, ErrorKind::InvalidInput, "--locc needs a bipartite operator");
                            const LoccBound lb = one_locc_lower_bound(x, o->restarts, 60, derive_seed(o->seed, 3));
                            doc["seed"] = o->seed;
                            doc["one_way_locc_lower"] = num(lb.value);
                            doc["one_way_locc_outcomes"] = lb.measurement.outcomes();
                          }
                        }});
  }

  // games
  {
    auto* sub = app.add_subcommand("game-classical", "classical value by exhaustive strategy search");
    add_input(sub, "game JSON");
    commands.push_back({sub, [&](Context& c, Json& doc) {
                          const Game g = game_from_json(read_json_file(input));
                          const Budget b = c.budget();
                          const GameValue wc = classical_value(g, b);
                          const GameValue wns = ns_value(g, b);
                          doc["value"] = num(wc.value);
                          doc["strategy"] = wc.strategy;
                          doc["brackets"] = brackets(wc.value, wns.value);
                        }});
  }
  {
    auto* sub = app.add_subcommand("game-ns", "non-signalling value by linear programming");
    struct Opts {
      bool emit_box = false;
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "game JSON");
    sub->add_flag("--box", o->emit_box, "include the optimal box");
    commands.push_back({sub, [&, o](Context& c, Json& doc) {
                          const Game g = game_from_json(read_json_file(input));
                          const Budget b = c.budget();
                          const GameValue wns = ns_value(g, b);
                          const GameValue wc = classical_value(g, b);
                          doc["value"] = num(wns.value);
                          doc["box_violation"] = num(wns.box->violation());
                          if (o->emit_box) doc["box"] = box_to_json(*wns.box);
                          doc["brackets"] = brackets(wc.value, wns.value);
                        }});
  }
  {
    auto* sub = app.add_subcommand("game-extend", "value over boxes extendible to m symmetric second players");
    struct Opts {
      int m = 0;
      bool explicit_game = false, emit_box = false;
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "two-player game JSON");
    sub->add_option("--m", o->m, "number of second-player copies")->required()->check(CLI::PositiveNumber);
    sub->add_flag("--explicit", o->explicit_game, "also solve the non-signalling LP of the explicit extended game");
    sub->add_flag("--box", o->emit_box, "include the optimal two-player box");
    commands.push_back({sub, [&, o](Context& c, Json& doc) {
                          const Game g = game_from_json(read_json_file(input));
                          const Budget b = c.budget();
                          const GameValue vm = k_extendible_ns_value(g, o->m, b);
                          const double wc = classical_value(g, b).value;
                          const double gap = extendible_gap_bound(static_cast<int>(g.answers[0].size()), o->m);
                          doc["value"] = num(vm.value);
                          doc["m"] = o->m;
                          doc["classical"] = num(wc);
                          doc["sandwich"] = {{"lower", num(wc)}, {"upper", num(wc + gap)},
                                             {"holds", wc <= vm.value + 1e-9 && vm.value <= wc + gap + 1e-9}};
                          if (o->explicit_game) doc["explicit_ns_value"] = num(ns_value(extend_game(g, o->m, b), b).value);
                          if (o->emit_box) doc["box"] = box_to_json(*vm.box);
                          c.extra_tol["sandwich_check"] = 1e-9;
                          c.bound("extendible value minus classical value (free games)", "sqrt(ln|A| / (2 m))", gap);
                        }});
  }
  {
    auto* sub = app.add_subcommand("game-free", "additive approximation of the classical value of a free game");
    struct Opts {
      double eps = 0.1;
      int m_cap = 0;
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "two-player free game JSON");
    sub->add_option("--eps", o->eps, "additive error")->required()->check(CLI::Range(1e-9, 1.0));
    sub->add_option("--m-cap", o->m_cap, "cap on the extension level")->check(CLI::PositiveNumber);
    commands.push_back({sub, [&, o](Context& c, Json& doc) {
                          const Game g = game_from_json(read_json_file(input));
                          std::optional<int> cap;
                          if (o->m_cap > 0) cap = o->m_cap;
                          const FreeGameEstimate e = free_game_value(g, o->eps, cap, c.budget());
                          doc["estimate"] = num(e.estimate);
                          doc["m"] = e.m;
                          doc["m_scheduled"] = e.m_scheduled;
                          doc["eps"] = o->eps;
                          doc["eps_effective"] = num(e.eps_effective);
                          doc["capped"] = e.capped;
                          c.bound("estimate minus classical value", "sqrt(ln|A| / (2 m))", e.eps_effective);
                        }});
  }
  {
    auto* sub = app.add_subcommand("nearest-lhv", "distance from a two-player box to the local polytope");
    struct Opts {
      int m = 0;
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "box JSON, or a game JSON whose m-extendible optimal box is used");
    sub->add_option("--m", o->m, "extension level when the input is a game")->check(CLI::PositiveNumber);
    commands.push_back({sub, [&, o](Context& c, Json& doc) {
                          const Json j = read_json_file(input);
                          const Budget b = c.budget();
                          NsBox box;
                          std::vector<double> mu;
                          if (j.contains("players")) {
                            require(o->m > 0, ErrorKind::InvalidInput, "a game input needs --m");
                            const Game g = game_from_json(j);
                            box = *k_extendible_ns_value(g, o->m, b).box;
                            mu = first_question_marginal(g);
                            doc["source"] = "extendible optimum";
                            doc["m"] = o->m;
                          } else {
                            box = box_from_json(j);
                            mu.assign(box.question_sizes.at(0), 1.0 / box.question_sizes.at(0));
                            if (j.contains("mu"))
                              try {
                                mu = j["mu"].get<std::vector<double>>();
                              } catch (const nlohmann::json::exception&) {
                                fail(ErrorKind::InvalidInput, "mu must be an array of numbers");
                              }
                            doc["source"] = "box";
                          }
                          const LhvDistance d = nearest_lhv(box, mu, b);
                          doc["distance"] = num(d.distance);
                          doc["mu"] = nums(mu);
                          doc["model_support"] = d.model.weights.size();
                          if (o->m > 0 && j.contains("players"))
                            c.bound("distance of an extendible box to the local polytope", "sqrt(2 ln|X| / k)",
                                    lhv_rounding_bound(box.answer_sizes[0], o->m));
                        }});
  }

  // tomography
  {
    auto* sub = app.add_subcommand("tomography", "hypothesis-state learning on a permutation-symmetric source");
    struct Opts {
      std::uint64_t seed = 0;
      TomographyParams p;
      std::string family = "random-rank1";
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "state JSON on H^(m+n+k), or an i.i.d. mixture JSON");
    sub->add_option("--seed", o->seed, "random seed")->required();
    sub->add_option("--m", o->p.m, "measured systems")->check(CLI::NonNegativeNumber);
    sub->add_option("--n", o->p.n, "held-out systems")->check(CLI::NonNegativeNumber);
    sub->add_option("--k", o->p.k, "discarded systems")->check(CLI::NonNegativeNumber);
    sub->add_option("--gamma", o->p.gamma, "deviation threshold")->check(CLI::PositiveNumber);
    sub->add_option("--eps", o->p.eps, "schedule accuracy")->check(CLI::PositiveNumber);
    sub->add_option("--delta", o->p.delta, "schedule failure probability")->check(CLI::Range(1e-12, 1.0));
    sub->add_option("--test-samples", o->p.test_samples, "fresh effects for the deviation estimate")
        ->check(CLI::PositiveNumber);
    sub->add_option("--restarts", o->p.fit.restarts, "fit restarts")->check(CLI::PositiveNumber);
    sub->add_option("--fit-tol", o->p.fit.fit_tol, "fit tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--family", o->family, "effect distribution")
        ->check(CLI::IsMember({"random-rank1", "random-effect", "pauli"}));
    commands.push_back({sub, [&, o](Context& c, Json& doc) {
                          const SymmetricSource src = source_from_json(read_json_file(input), c.tol);
                          const int dim = std::holds_alternative<IidMixture>(src)
                                              ? std::get<IidMixture>(src).dim()
                                              : std::get<DensityMatrix>(src).dims().at(0);
                          const EffectDistribution dist{effect_family_from_string(o->family), dim};
                          Rng rng(derive_seed(o->seed, 1));
                          const TomographyReport r = definetti_tomography_run(src, dist, o->p, rng, c.budget());
                          doc["seed"] = o->seed;
                          doc["source"] = std::holds_alternative<IidMixture>(src) ? "iid-mixture" : "explicit";
                          doc["dim"] = r.dim;
                          doc["m"] = o->p.m;
                          doc["n"] = o->p.n;
                          doc["k"] = o->p.k;
                          doc["gamma"] = o->p.gamma;
                          doc["family"] = o->family;
                          doc["training_size"] = r.training.size();
                          if (r.fit) {
                            doc["fit"] = {{"loss", num(r.fit->loss)},
                                          {"gap", num(r.fit->gap)},
                                          {"iterations", r.fit->iterations},
                                          {"state", matrix_to_json(r.fit->state.data())}};
                          }
                          doc["branch_weights"] = nums(r.branch_weights);
                          doc["branch_rates"] = nums(r.branch_rates);
                          if (r.deviation_rate) doc["deviation_rate"] = num(*r.deviation_rate);
                          if (r.fixed_channel_distance) doc["fixed_channel_distance"] = num(*r.fixed_channel_distance);
                          doc["permutation"] = r.permutation;
                          c.extra_tol["fit_tol"] = o->p.fit.fit_tol;
                          c.bound("training-set size for learning (constant K = 1)",
                                  "(1/(g^4 e^2)) ((ln|H|/(g^4 e^2)) ln^2(1/(g e)) + ln(1/delta))", r.m_schedule);
                          c.bound("closeness of held-out systems to an i.i.d. mixture", "sqrt(4 (m+n)^2 ln|H| / k)",
                                  r.nu_implied);
                        }});
  }

  // information theory
  {
    auto* sub = app.add_subcommand("entropy", "von Neumann entropy of a marginal");
    struct Opts {
      std::vector<int> systems;
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "state JSON");
    sub->add_option("--systems", o->systems, "subsystems to keep (default: all)")->delimiter(',');
    commands.push_back({sub, [&, o](Context& c, Json& doc) {
                          const DensityMatrix rho = state_from_json(read_json_file(input), c.tol);
                          Indices keep = o->systems;
                          if (keep.empty())
                            for (int i = 0; i < rho.num_systems(); ++i) keep.push_back(i);
                          const double s = marginal_entropy(rho, keep);
                          doc["systems"] = keep;
                          doc["entropy_nats"] = num(s);
                          doc["entropy_bits"] = num(s / std::log(2.0));
                          c.extra_tol["eigenvalue_cutoff"] = kEntropyCutoff;
                        }});
  }
  {
    auto* sub = app.add_subcommand("mi", "mutual information, conditional on classical systems if given");
    struct Opts {
      std::vector<int> a, b, cond;
    };
    auto o = std::make_shared<Opts>();
    add_input(sub, "state JSON");
    sub->add_option("--a", o->a, "first group")->required()->delimiter(',');
    sub->add_option("--b", o->b, "second group")->required()->delimiter(',');
    sub->add_option("--cond", o->cond, "classical conditioning systems")->delimiter(',');
    commands.push_back({sub, [&, o](Context& c, Json& doc) {
                          const DensityMatrix rho = state_from_json(read_json_file(input), c.tol);
                          const double v = o->cond.empty()
                                               ? mutual_information(rho, o->a, o->b)
                                               : conditional_mutual_information(QqcState(rho, o->cond), o->a, o->b, o->cond);
                          doc["a"] = o->a;
                          doc["b"] = o->b;
                          doc["cond"] = o->cond;
                          doc["value_nats"] = num(v);
                          doc["value_bits"] = num(v / std::log(2.0));
                          c.extra_tol["eigenvalue_cutoff"] = kEntropyCutoff;
                          if (!o->cond.empty()) c.extra_tol["diag_tol"] = kDiagTol;
                        }});
  }
  {
    auto* sub = app.add_subcommand("verify-identities", "check entropy identities on random qqc states");
    struct Opts {
      std::uint64_t seed = 0;
      int states = 200, channels = 100;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--seed", o->seed, "random seed")->required();
    sub->add_option("--states", o->states, "random states")->check(CLI::PositiveNumber);
    sub->add_option("--channels", o->channels, "random channels per state for monotonicity")
        ->check(CLI::PositiveNumber);
    commands.push_back({sub, [&, o](Context&, Json& doc) {
                          Rng rng(derive_seed(o->seed, 2));
                          const auto checks = check_information_identities(o->states, o->channels, rng);
                          doc["seed"] = o->seed;
                          Json arr = Json::array();
                          bool all = true;
                          for (const auto& ch : checks) {
                            arr.push_back({{"name", ch.name},
                                           {"trials", ch.trials},
                                           {"worst", num(ch.worst)},
                                           {"tolerance", num(ch.tolerance)},
                                           {"passed", ch.passed()}});
                            all = all && ch.passed();
                          }
                          doc["checks"] = arr;
                          doc["all_passed"] = all;
                        }});
  }

  auto report_error = [&](const std::string& kind, const std::string& message, int code) {
    Json doc;
    doc["error"] = {{"kind", kind}, {"message", message}};
    emit(doc, ctx.format, out);
    err << "error: " << message << '\n';
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report_error("InvalidInput", e.what(), 2);
  }

  for (const Command& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    Json doc;
    doc["command"] = cmd.app->get_name();
    try {
      cmd.run(ctx, doc);
    } catch (const Error& e) {
      const std::string kind(to_string(e.kind()));
      std::string message = e.what();
      if (message.rfind(kind + ": ", 0) == 0) message.erase(0, kind.size() + 2);
      return report_error(kind, message, exit_code(e.kind()));
    } catch (const std::exception& e) {
      return report_error("Internal", e.what(), 1);
    }
    doc["bounds"] = ctx.bounds;
    Json tol;
    tol["herm_tol"] = ctx.tol.herm;
    tol["psd_tol"] = ctx.tol.psd;
    tol["trace_tol"] = ctx.tol.trace;
    tol["povm_tol"] = ctx.tol.povm;
    for (const auto& [k, v] : ctx.extra_tol.items()) tol[k] = v;
    doc["tolerances"] = tol;
    emit(doc, ctx.format, out);
    return 0;
  }
  return report_error("InvalidInput", "no subcommand given", 2);
}

}  // namespace definetti::cli
