#pragma once
// The proposition checklist run over one interaction. Records are keyed by
// check id; the ids are part of the report format.

#include "../covrep.hpp"
#include "spec.hpp"

namespace interact::cli {

inline const std::vector<std::string>& checklist_ids() {
  static const std::vector<std::string> ids = {
      "2.2",  "2.4",  "2.6",  "2.7",  "2.8",  "2.9",  "3.1.i", "3.1.ii", "3.1.iii", "3.1.iv", "3.1.v",
      "3.3",  "3.6",  "5.2",  "5.3",  "5.4",  "5.6",  "5.9",   "5.10",   "5.11",    "5.13",   "5.14",
      "5.15", "5.17", "6.1",  "6.2",  "6.3",  "7.1",  "7.2",   "7.3-adjoint", "7.8", "7.9",  "7.13"};
  return ids;
}

struct Record {
  enum Status { pass, fail, skipped } status = skipped;
  double residual = 0.0;
  std::map<std::string, double> parts;
  std::map<std::string, double> bounds;  // lower bounds that must exceed eps
  std::string witness;
  std::string reason;

  json to_json() const {
    json j;
    j["status"] = status == pass ? "pass" : status == fail ? "fail" : "skipped";
    if (status == skipped) {
      j["reason"] = reason;
      return j;
    }
    j["residual"] = num(residual);
    if (!parts.empty()) {
      json p = json::object();
      for (const auto& [k, v] : parts) p[k] = num(v);
      j["parts"] = p;
    }
    if (!bounds.empty()) {
      json b = json::object();
      for (const auto& [k, v] : bounds) b[k] = num(v);
      j["bounds"] = b;
    }
    if (status == fail && !witness.empty()) j["witness"] = witness;
    if (!reason.empty()) j["note"] = reason;
    return j;
  }
};

struct RunOptions {
  Tolerance tol;
  int samples = 20;
  std::uint64_t seed = 0;
};

// The interaction under test, together with the data a mode brings along.
struct Subject {
  LinMap V, H;
  std::optional<std::pair<LinMap, LinMap>> alpha_L;  // endo_transfer mode
  std::optional<DerivedInteraction> derived;        // partial_isometry mode
};

class Checklist {
 public:
  explicit Checklist(Tolerance tol) : tol_(tol) {
    for (const auto& id : checklist_ids()) records_[id] = Record{};
  }

  Record& operator[](const std::string& id) { return records_.at(id); }

  void set(const std::string& id, std::map<std::string, double> parts, std::map<std::string, double> bounds = {}) {
    Record& r = records_.at(id);
    r.parts = std::move(parts);
    r.bounds = std::move(bounds);
    r.residual = 0.0;
    for (const auto& [k, v] : r.parts) r.residual = std::max(r.residual, std::isnan(v) ? INFINITY : v);
    bool ok = r.residual <= tol_.eps;
    for (const auto& [k, v] : r.bounds) ok = ok && v > tol_.eps;
    r.status = ok ? Record::pass : Record::fail;
  }

  void skip_pending(const std::string& reason) {
    for (auto& [id, r] : records_)
      if (r.status == Record::skipped && r.reason.empty()) r.reason = reason;
  }

  // Run `body`; on an exception mark the listed ids failed with the message.
  template <class F>
  void stage(const std::vector<std::string>& ids, F body) {
    try {
      body();
    } catch (const std::exception& e) {
      for (const auto& id : ids) {
        Record& r = records_.at(id);
        if (r.status != Record::skipped) continue;
        r.status = Record::fail;
        r.residual = INFINITY;
        r.reason = e.what();
      }
    }
  }

  bool passed() const {
    for (const auto& [id, r] : records_)
      if (r.status == Record::fail) return false;
    return true;
  }

  json to_json() const {
    json j = json::object();
    for (const auto& [id, r] : records_) j[id] = r.to_json();
    return j;
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& id : checklist_ids())
      if (records_.at(id).status == Record::fail) out.push_back(id);
    return out;
  }

 private:
  Tolerance tol_;
  std::map<std::string, Record> records_;
};

namespace detail {

inline double closure_residual(const Subspace& s, Tolerance tol) {
  double worst = 0.0;
  auto xs = s.elements();
  for (const auto& x : xs) {
    worst = std::max(worst, membership(adjoint(x), s, tol).residual);
    for (const auto& y : xs) worst = std::max(worst, membership(x * y, s, tol).residual);
  }
  return worst;
}

inline double excess(double ratio) { return std::max(0.0, ratio - 1.0); }

}  // namespace detail

struct Dims {
  int dim_A = 0, r = -1, dimK_V = -1, dimK_H = -1, rep = -1;
};

inline Checklist run_checklist(const Subject& subj, const RunOptions& opt, Dims& dims) {
  const Tolerance tol = opt.tol;
  Checklist cl(tol);
  dims.dim_A = subj.V.algebra().dim();

  VerifyOptions vo{opt.samples, opt.seed};
  AxiomReport ax = verify_interaction(subj.V, subj.H, tol, vo);
  for (const char* id : {"3.1.i", "3.1.ii", "3.1.iii", "3.1.iv", "3.1.v"}) {
    cl.set(id, {{"residual", ax.residuals.at(id)}});
    auto w = ax.witnesses.find(id);
    if (w != ax.witnesses.end()) cl[id].witness = w->second.text;
  }
  cl.set("2.4", {{"VHV=V", ax.residuals.at("2.4.i")}, {"HVH=H", ax.residuals.at("2.4.ii")}});
  cl.set("3.3", {{"choi_V", std::max(0.0, -ax.choi_min_V)}, {"choi_H", std::max(0.0, -ax.choi_min_H)}});
  if (!ax.pass) {
    cl.skip_pending("interaction rejected at " + ax.first_failure(tol));
    return cl;
  }

  Interaction I(subj.V, subj.H, tol, vo);
  std::mt19937_64 rng(opt.seed);

  cl.stage({"2.6"}, [&] {
    auto ev = check_conditional_expectation(expectation_V(I));
    auto eh = check_conditional_expectation(expectation_H(I));
    cl.set("2.6", {{"E_V", ev.worst()},
                   {"E_H", eh.worst()},
                   {"range_V_closed", detail::closure_residual(I.rangeV(), tol)},
                   {"range_H_closed", detail::closure_residual(I.rangeH(), tol)}});
  });
  cl.stage({"2.7"}, [&] {
    auto p = check_inverse_pair(I);
    cl.set("2.7", {{"HV=id on range H", p.h1v1},
                   {"VH=id on range V", p.v1h1},
                   {"V=V1 E_H", p.v_factor},
                   {"H=H1 E_V", p.h_factor},
                   {"V1 homomorphism", p.v1_hom},
                   {"H1 homomorphism", p.h1_hom}});
  });

  std::optional<BimoduleX> X;
  const std::vector<std::string> later = {"2.2", "2.8", "2.9", "3.6", "5.2",  "5.3",  "5.4", "5.6",
                                          "5.9", "5.10", "5.11", "5.13", "5.14", "5.15", "5.17", "6.1",
                                          "6.2", "6.3", "7.1", "7.2", "7.3-adjoint", "7.8", "7.9", "7.13"};
  cl.stage(later, [&] { X.emplace(I); });
  if (!X) return cl;
  dims.r = X->r();
  dims.dimK_V = X->bcV().dimK();
  dims.dimK_H = X->bcH().dimK();

  cl.stage({"5.2"}, [&] {
    auto p = check_positivity(*X, opt.samples, rng);
    cl.set("5.2", {{"right", std::max(0.0, -p.min_r)}, {"left", std::max(0.0, -p.min_l)}});
  });
  cl.stage({"5.3"}, [&] {
    auto c = check_cauchy_schwarz(*X, opt.samples, rng);
    cl.set("5.3", {{"right", std::max(0.0, -c.min_r)}, {"left", std::max(0.0, -c.min_l)}});
  });
  cl.stage({"5.4"}, [&] {
    auto s = check_seminorms(*X, opt.samples, rng);
    cl.set("5.4", {{"closed_forms", s.closed_form},
                   {"left_right", s.two_sided},
                   {"null_spaces", s.null_space},
                   {"rank", double(std::abs(s.rank_r - s.rank_l) + std::abs(s.rank_r - X->r()))}});
  });
  cl.stage({"5.6"}, [&] { cl.set("5.6", {{"residual", check_56(*X)}}); });
  cl.stage({"5.9"}, [&] { cl.set("5.9", {{"excess", detail::excess(check_59(*X, opt.samples, rng))}}); });
  cl.stage({"5.10"}, [&] { cl.set("5.10", {{"excess", detail::excess(check_module_bound(*X, opt.samples, rng))}}); });
  cl.stage({"5.11"}, [&] {
    auto m = check_module_laws(*X);
    cl.set("5.11", {{"associativity", m.associativity},
                    {"inner", m.inner},
                    {"presentation", m.presentation},
                    {"quotient", m.quotient}});
  });
  cl.stage({"5.13", "5.14"}, [&] {
    auto t = check_ternary(*X);
    cl.set("5.13", {{"compatibility", t.compatibility}});
    cl.set("5.14", {{"right", t.ternary_right}, {"left", t.ternary_left}});
  });
  cl.stage({"5.15"}, [&] {
    auto f = check_fullness(*X);
    cl.set("5.15", {{"span_r_vs_dimK_H", double(std::abs(f.span_r - f.dimK_H))},
                    {"span_l_vs_dimK_V", double(std::abs(f.span_l - f.dimK_V))},
                    {"basic_V", f.basic_V.worst()},
                    {"basic_H", f.basic_H.worst()}});
  });
  cl.stage({"5.17"}, [&] {
    auto s = check_sliding(*X);
    cl.set("5.17", {{"left", s.left}, {"right", s.right}, {"unit", s.unit}, {"assoc", s.assoc}});
  });

  std::optional<CovariantRep> rep;
  cl.stage({"2.2", "2.8", "2.9", "3.6", "6.1", "6.2", "6.3"}, [&] { rep.emplace(build_covrep(*X)); });
  if (rep) {
    dims.rep = rep->dim();
    cl.stage({"2.2", "6.2", "3.6"}, [&] {
      auto inv = check_rep_invariants(*rep);
      auto a = check_axiom_21(*rep);
      auto nd = check_nondegeneracy(*rep);
      cl.set("2.2", {{"V_against_SS*", a.commute_V}, {"H_against_S*S", a.commute_H}});
      cl.set("3.6", {{"implication", nd.implication_holds ? 0.0 : 1.0}},
             {{"V_range", nd.gate_V_range},
              {"V_generated", nd.gate_V_generated},
              {"H_range", nd.gate_H_range},
              {"H_generated", nd.gate_H_generated}});
      cl.set("6.2", {{"homomorphism", inv.homomorphism},
                     {"star", inv.star},
                     {"partial_isometry", inv.partial_isometry},
                     {"covariance_V", inv.covariance_V},
                     {"covariance_H", inv.covariance_H}},
             {{"nondegenerate", nd.nondegenerate ? 1.0 : 0.0}});
      if (inv.worst() > tol.eps) cl["6.2"].witness = inv.worst_element;
    });
    cl.stage({"2.8", "2.9", "6.1"}, [&] {
      auto l = check_linking(*rep, *X);
      cl.set("2.8", {{"multiplicative", l.range_mult}, {"isometric", l.range_iso}, {"projections", l.projections}});
      cl.set("2.9", {{"norm", l.compression_norm}});
      cl.set("6.1", {{"residual", l.unit_support}});
    });
    cl.stage({"6.3"}, [&] {
      auto f = faithful_extension(*rep);
      auto inv = check_rep_invariants(f.rep);
      auto nd = check_nondegeneracy(f.rep);
      cl.set("6.3", {{"invariants", inv.worst()}},
             {{"injectivity", f.injectivity},
              {"V_generated", nd.gate_V_generated},
              {"H_generated", nd.gate_H_generated}});
    });
  }

  AbstractTRO t(*X);
  cl.stage({"7.1"}, [&] {
    auto g = check_correspondence(t);
    cl.set("7.1", {{"(i)", g.law_left}, {"(ii)", g.law_right}, {"lambda", g.lam_hom}, {"rho", g.rho_antihom}});
  });
  cl.stage({"7.2", "7.3-adjoint"}, [&] {
    auto c = check_commutation(t);
    cl.set("7.2", {{"theta", c.theta}, {"actions", c.actions}, {"cube", c.cube}});
    cl.set("7.3-adjoint", {{"left", c.adjoint_left}, {"right", c.adjoint_right}});
  });
  cl.stage({"7.8"}, [&] {
    auto c = check_classical(*X);
    if (!c.applicable(tol)) {
      cl["7.8"].reason = "not classical: right inner products leave lambda_H(A) e_H (distance " +
                         num(c.fit).dump() + ")";
      return;
    }
    cl.set("7.8", {{"residual", c.residual}});
  });
  cl.stage({"7.9"}, [&] {
    std::map<std::string, double> parts;
    for (Side s : {Side::left, Side::right}) {
      auto r = find_redundancies(t, s);
      double worst = 0.0;
      for (const auto& x : r.all) worst = std::max(worst, x.residual);
      std::string side = s == Side::left ? "left" : "right";
      parts[side] = worst;
    }
    cl.set("7.9", parts);
  });
  cl.stage({"7.13"}, [&] {
    if (!subj.alpha_L) {
      cl["7.13"].reason = "specification is not in endo_transfer mode";
      return;
    }
    auto c = check_713(subj.alpha_L->first, subj.alpha_L->second, I, *X);
    cl.set("7.13", {{"density", c.density}, {"isometry", c.isometry}, {"bimodule", c.bimodule}, {"ternary", c.ternary}});
  });
  return cl;
}

// Counts of redundancies, for the report's environment block.
inline json redundancy_summary(const BimoduleX& X) {
  AbstractTRO t(X);
  json j;
  for (Side s : {Side::left, Side::right}) {
    auto r = find_redundancies(t, s);
    j[s == Side::left ? "left" : "right"] = {{"all", r.all.size()}, {"katsura", r.katsura.size()},
                                             {"kernel_blocks", r.kernel_blocks}};
  }
  return j;
}

}  // namespace interact::cli
