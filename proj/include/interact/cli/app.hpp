#pragma once
// Command-line front end: verify, build, fuzz. Exit status 0 when every
// non-skipped check passes, 1 on a failed check or build stage, 2 on unusable
// input.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "checklist.hpp"

namespace interact::cli {

enum Exit { ok = 0, failed = 1, bad_input = 2 };

struct Invocation {
  std::string command;
  std::string spec_path;
  std::optional<double> tol;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  int amplify = 1;
  std::string emit = "report";
  std::string out;
  bool summary = false;
};

struct Resolved {
  RunOptions run;
  std::string tol_source;
};

inline Resolved resolve(const Invocation& inv, const ProblemSpec& spec) {
  Resolved r;
  double eps = 1e-9;
  r.tol_source = "default";
  if (const char* env = std::getenv("INTERACT_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) throw SpecError("INTERACT_TOL must be a positive number");
    eps = v;
    r.tol_source = "environment";
  }
  if (spec.tolerance) {
    eps = *spec.tolerance;
    r.tol_source = "spec";
  }
  if (inv.tol) {
    if (!(*inv.tol > 0.0)) throw SpecError("--tol must be positive");
    eps = *inv.tol;
    r.tol_source = "flag";
  }
  r.run.tol = Tolerance(eps);
  r.run.samples = inv.samples.value_or(spec.samples.value_or(20));
  r.run.seed = inv.seed.value_or(spec.seed.value_or(0));
  return r;
}

// Throws InteractionRejected or std::invalid_argument when a partial isometry
// does not define an interaction.
inline Subject make_subject(const ProblemSpec& spec, int amplify, Tolerance tol) {
  const auto& A = spec.algebra;
  auto amp = [&](const LinMap& m) { return amplify > 1 ? interact::amplify(m, amplify) : m; };
  switch (spec.mode) {
    case Mode::endo_transfer: {
      LinMap a(A, spec.alpha), L(A, spec.L);
      Subject s{amp(a), amp(L), std::nullopt, std::nullopt};
      s.alpha_L.emplace(s.V, s.H);
      return s;
    }
    case Mode::partial_isometry: {
      auto d = derive_from_partial_isometry(spec.ambient, A, spec.embedding, *spec.S, tol);
      Subject s{amp(d.interaction.V()), amp(d.interaction.H()), std::nullopt, std::nullopt};
      s.derived.emplace(std::move(d));
      return s;
    }
    default:
      return {amp(LinMap(A, spec.V)), amp(LinMap(A, spec.H)), std::nullopt, std::nullopt};
  }
}

inline json environment(const Invocation& inv, const ProblemSpec& spec, const Resolved& r, const Dims& d) {
  json e;
  e["command"] = inv.command;
  e["spec"] = std::filesystem::path(inv.spec_path).filename().string();
  e["mode"] = mode_name(spec.mode);
  e["blocks"] = spec.algebra.blocks();
  e["amplify"] = inv.amplify;
  e["tolerance"] = r.run.tol.eps;
  e["tolerance_source"] = r.tol_source;
  e["samples"] = r.run.samples;
  e["seed"] = r.run.seed;
  if (inv.command == "build") e["emit"] = inv.emit;
  json dims;
  dims["A"] = d.dim_A;
  if (d.r >= 0) dims["X"] = d.r;
  if (d.dimK_V >= 0) dims["K_V"] = d.dimK_V;
  if (d.dimK_H >= 0) dims["K_H"] = d.dimK_H;
  if (d.rep >= 0) dims["H1+H2"] = d.rep;
  e["dims"] = dims;
  return e;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline int write_out(const Invocation& inv, const std::string& text, std::ostream& out, std::ostream& err) {
  if (inv.out.empty()) {
    out << text;
    return ok;
  }
  std::ofstream f(inv.out, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << inv.out << "\n";
    return bad_input;
  }
  f << text;
  return ok;
}

inline void print_summary(const Checklist& cl, std::ostream& err) {
  json j = cl.to_json();
  for (const auto& id : checklist_ids()) {
    const json& r = j[id];
    std::string status = r["status"];
    err << status << " " << id;
    if (r.contains("residual")) err << " " << r["residual"].dump();
    if (r.contains("witness")) err << " " << r["witness"].get<std::string>();
    if (r.contains("reason")) err << " (" << r["reason"].get<std::string>() << ")";
    err << "\n";
  }
}

inline json bimodule_dump(const BimoduleX& X, Tolerance tol) {
  json j;
  j["r"] = X.r();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (X.gram_r() + X.gram_r().adjoint()));
  json spec = json::array();
  for (int k = static_cast<int>(es.eigenvalues().size()) - 1; k >= 0; --k) spec.push_back(num(es.eigenvalues()(k)));
  j["gram_spectrum"] = spec;
  j["spectral_gap"] = num(X.spectral_gap());
  Mat N = interact::detail::null_space(X.gram_r(), tol.eps);
  j["kernel_dim"] = N.cols();
  Mat Nc = N.cols() ? interact::detail::canonical_basis(N) : N;
  j["kernel_basis"] = to_json(Mat(Nc.transpose()));
  j["dimK_V"] = X.bcV().dimK();
  j["dimK_H"] = X.bcH().dimK();
  return j;
}

inline json covrep_dump(const CovariantRep& rep) {
  json j;
  j["r"] = rep.r;
  j["s"] = rep.s;
  json pis = json::array();
  for (const auto& p : rep.pi_basis) pis.push_back(to_json(p));
  j["pi"] = pis;
  j["S"] = to_json(rep.S);
  auto inv = check_rep_invariants(rep);
  auto a = check_axiom_21(rep);
  auto nd = check_nondegeneracy(rep);
  j["residuals"] = {{"homomorphism", num(inv.homomorphism)}, {"star", num(inv.star)},
                    {"partial_isometry", num(inv.partial_isometry)}, {"covariance_V", num(inv.covariance_V)},
                    {"covariance_H", num(inv.covariance_H)}, {"commute_V", num(a.commute_V)},
                    {"commute_H", num(a.commute_H)}};
  j["gates"] = {{"V_range", num(nd.gate_V_range)}, {"V_generated", num(nd.gate_V_generated)},
                {"H_range", num(nd.gate_H_range)}, {"H_generated", num(nd.gate_H_generated)}};
  j["nondegenerate"] = nd.nondegenerate;
  return j;
}

inline int execute(const Invocation& inv, std::ostream& out, std::ostream& err) {
  ProblemSpec spec;
  Resolved res;
  try {
    spec = load_spec(inv.spec_path);
    res = resolve(inv, spec);
  } catch (const json::exception& e) {
    err << "error: " << inv.spec_path << ": " << e.what() << "\n";
    return bad_input;
  } catch (const SpecError& e) {
    err << "error: " << inv.spec_path << ": " << e.what() << "\n";
    return bad_input;
  } catch (const std::exception& e) {
    err << "error: " << inv.spec_path << ": " << e.what() << "\n";
    return bad_input;
  }
  if (inv.amplify < 1) {
    err << "error: --amplify must be at least 1\n";
    return bad_input;
  }

  Subject subj{LinMap::identity(spec.algebra), LinMap::identity(spec.algebra), std::nullopt, std::nullopt};
  try {
    subj = make_subject(spec, inv.amplify, res.run.tol);
  } catch (const std::exception& e) {
    err << "error: no interaction: " << e.what() << "\n";
    return failed;
  }

  if (inv.command == "build" && inv.emit != "report") {
    try {
      Interaction I(subj.V, subj.H, res.run.tol, VerifyOptions{res.run.samples, res.run.seed});
      BimoduleX X(I);
      json j;
      if (inv.emit == "bimodule") {
        j = bimodule_dump(X, res.run.tol);
      } else {
        auto rep = build_covrep(X);
        j = covrep_dump(rep);
        if (!j["nondegenerate"].get<bool>()) {
          err << "error: check 3.6 fails: covariant representation is degenerate\n";
          write_out(inv, dump(j), out, err);
          return failed;
        }
      }
      Dims d{spec.algebra.dim() * inv.amplify * inv.amplify, X.r(), X.bcV().dimK(), X.bcH().dimK(), -1};
      j["environment"] = environment(inv, spec, res, d);
      return write_out(inv, dump(j), out, err);
    } catch (const InteractionRejected& e) {
      err << "error: check " << (e.report() ? e.report()->first_failure(res.run.tol) : std::string("3.1"))
          << " fails: " << e.what() << "\n";
      return failed;
    } catch (const std::exception& e) {
      err << "error: check " << (inv.emit == "bimodule" ? "5.4" : "6.2") << " fails: " << e.what() << "\n";
      return failed;
    }
  }

  Dims d;
  Checklist cl = run_checklist(subj, res.run, d);
  json report;
  report["checks"] = cl.to_json();
  report["environment"] = environment(inv, spec, res, d);
  if (subj.derived)
    report["environment"]["derivation"] = {{"compression_residual", num(subj.derived->compression_residual)},
                                           {"gate_V", num(subj.derived->gate_V)},
                                           {"gate_H", num(subj.derived->gate_H)}};
  report["failed"] = cl.failures();
  report["verdict"] = cl.passed() ? "pass" : "fail";
  if (inv.summary) print_summary(cl, err);
  int w = write_out(inv, dump(report), out, err);
  if (w != ok) return w;
  return cl.passed() ? ok : failed;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Checks interactions over finite-dimensional C*-algebras"};
  app.require_subcommand(1);
  Invocation inv;
  std::optional<double> tol;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;

  auto common = [&](CLI::App* c) {
    c->add_option("spec", inv.spec_path, "problem specification (JSON)")->required();
    c->add_option("--tol", tol, "tolerance (overrides the spec file and INTERACT_TOL)");
    c->add_option("--out", inv.out, "write the output to this file");
    c->add_flag("--summary", inv.summary, "print one line per check to stderr");
  };
  auto* verify = app.add_subcommand("verify", "run the checklist and print the report");
  common(verify);
  verify->add_option("--samples", samples, "random samples per sampled check");
  verify->add_option("--seed", seed, "random seed");
  auto* build = app.add_subcommand("build", "emit the bimodule, the covariant representation or the report");
  common(build);
  build->add_option("--emit", inv.emit, "artifact")->required()->check(CLI::IsMember({"bimodule", "covrep", "report"}));
  build->add_option("--samples", samples, "random samples per sampled check");
  build->add_option("--seed", seed, "random seed");
  auto* fuzz = app.add_subcommand("fuzz", "run the checklist on an amplification");
  common(fuzz);
  fuzz->add_option("--amplify", inv.amplify, "matrix amplification size")->required()->check(CLI::PositiveNumber);
  fuzz->add_option("--samples", samples, "random samples per sampled check")->required()->check(CLI::PositiveNumber);
  fuzz->add_option("--seed", seed, "random seed")->required();

  std::ostringstream cli_out, cli_err;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return bad_input;
  }
  inv.command = verify->parsed() ? "verify" : build->parsed() ? "build" : "fuzz";
  inv.tol = tol;
  inv.samples = samples;
  inv.seed = seed;
  return execute(inv, out, err);
}

}  // namespace interact::cli
