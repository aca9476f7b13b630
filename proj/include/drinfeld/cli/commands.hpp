#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "drinfeld/cli/job.hpp"
#include "drinfeld/cli/verify.hpp"
#include "drinfeld/heights.hpp"
#include "drinfeld/module.hpp"
#include "drinfeld/perfect.hpp"
#include "drinfeld/torsion.hpp"

namespace drinfeld::cli {

enum ExitCode { kOk = 0, kViolation = 1, kInputError = 2, kBudget = 3 };

struct Output {
  std::string text;
  json data;
  int exit_code = kOk;
};

namespace detail {

inline std::string frac(const Rational& r) { return to_string(r); }

/// q^-e when r is exactly that, else the fraction.
inline std::string power_form(const Rational& r, std::uint32_t q) {
  if (numerator_of(r) == 1) {
    BigInt d = denominator_of(r);
    std::int64_t e = 0;
    while (d % q == 0) {
      d /= q;
      ++e;
    }
    if (d == 1 && e > 0) return std::to_string(q) + "^-" + std::to_string(e);
  }
  return frac(r);
}

inline json height_json(const HeightValue& h) {
  json j;
  if (h.exact) {
    j["exact"] = frac(h.lo);
  } else {
    j["interval"] = {frac(h.lo), frac(h.hi)};
  }
  j["certificate"] = h.tag_name();
  return j;
}

inline std::string rationals(const std::vector<Rational>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + frac(xs[i]);
  return out + "}";
}

inline std::vector<std::string> rational_strings(const std::vector<Rational>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(frac(x));
  return out;
}

inline std::string list(const std::vector<std::string>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
  return out + "}";
}

/// The module the job's points live on: phi itself, or its rewrite over F_q(u).
inline DrinfeldModule working_module(const JobSpec& job, const DrinfeldModule& phi) {
  if (job.embedding) return phi.push_forward(make_embedding(job, phi.fq()));
  if (job.level == 0) return phi;
  return InsepLevel(phi, job.level, job.ext_var).module;
}

inline const RatFunc& single_point(const std::vector<RatFunc>& pts) {
  if (pts.empty()) throw InputError("job.point: missing");
  return pts.front();
}

}  // namespace detail

inline Output cmd_reduction(const JobSpec& job) {
  const DrinfeldModule phi = detail::working_module(job, make_module(job));
  const auto& k = phi.base();
  phi.require_monic();
  Output out;
  std::ostringstream os;
  os << phi.to_string() << " over F_" << phi.q() << "(" << k.var << ")\n";
  const auto s = bad_reduction_set(phi);
  out.data["N_phi"] = n_phi(phi);
  out.data["places"] = json::array();
  if (s.empty()) {
    os << "S empty; torsion = F_" << phi.q() << "\n";
    out.data["S"] = json::array();
  }
  std::vector<std::string> names;
  for (const auto& v : s) names.push_back(v.to_string(k.var));
  out.data["S"] = names;
  if (!s.empty()) os << "S = " << detail::list(names) << "\n";
  os << "N_phi = " << n_phi(phi) << "\n";
  for (const auto& v : s) {
    auto rd = reduction_data(phi, v);
    json pj;
    pj["place"] = v.to_string(k.var);
    pj["degree"] = detail::frac(v.degree());
    pj["M"] = rd.M ? detail::frac(*rd.M) : "+inf";
    pj["T"] = detail::frac(rd.T);
    std::vector<std::string> slopes;
    for (const auto& seg : rd.newton) slopes.push_back(detail::frac(seg.slope));
    pj["newton_slopes"] = slopes;
    pj["P"] = detail::rational_strings(rd.P);
    pj["P1"] = detail::rational_strings(rd.P1);
    pj["P2"] = detail::rational_strings(rd.P2);
    pj["Q"] = detail::rational_strings(rd.Q);
    json rj = json::object();
    os << v.to_string(k.var) << ": d = " << detail::frac(v.degree()) << ", M = " << pj["M"].get<std::string>()
       << ", T = " << detail::frac(rd.T) << "\n";
    os << "  Newton slopes " << detail::list(slopes) << "\n";
    os << "  P = " << detail::rationals(rd.P) << ", P' = " << detail::rationals(rd.P1) << ", P'' = " << detail::rationals(rd.P2)
       << ", Q = " << detail::rationals(rd.Q) << "\n";
    for (const auto& [a, roots] : rd.R) {
      std::vector<std::string> rs;
      for (const auto& r : roots) rs.push_back(r.to_string(k.var));
      rj[detail::frac(a)] = rs;
      os << "  R(" << detail::frac(a) << ") = " << detail::list(rs) << "\n";
    }
    pj["R"] = rj;
    out.data["places"].push_back(pj);
  }
  out.text = os.str();
  return out;
}

inline Output cmd_height(const JobSpec& job) {
  const DrinfeldModule base = make_module(job);
  base.require_monic();
  const DrinfeldModule phi = detail::working_module(job, base);
  const auto& k = phi.base();
  const RatFunc x = detail::single_point(make_points(job, phi.fq()));
  HeightBreakdown hb = global_height_breakdown(phi, x, job.n_max);
  Output out;
  std::ostringstream os;
  out.data["point"] = k.str(x);
  out.data["level"] = job.level;
  out.data["height"] = detail::height_json(hb.total);
  out.data["local"] = json::array();
  os << "x = " << k.str(x) << (job.level ? " at level " + std::to_string(job.level) : "") << "\n";
  for (const auto& [v, h] : hb.local) {
    json lj = detail::height_json(h);
    lj["place"] = v.to_string(k.var);
    lj["degree"] = detail::frac(v.degree());
    out.data["local"].push_back(lj);
    os << "  " << v.to_string(k.var) << " (d = " << detail::frac(v.degree()) << "): " << h.to_string() << " [" << h.tag_name()
       << "]\n";
  }
  const LehmerBounds lb = lehmer_bounds(base);
  out.data["bounds"] = {{"sharp", detail::frac(lb.sharp)}, {"weak", detail::frac(lb.weak)}};
  if (lb.lehper) out.data["bounds"]["lehper"] = detail::frac(*lb.lehper);
  if (!hb.total.exact) {
    os << hb.total.to_string() << "; interval after " << job.n_max << " iterations\n";
    out.data["verdict"] = "UNDECIDED";
    out.text = os.str();
    out.exit_code = kBudget;
    return out;
  }
  const std::string h = hb.total.to_string();
  if (job.level > 0 && modular_trdeg(base) == 1) {
    LehperReport rep = lehper_check(base, job.level, x, job.n_max);
    const std::string b = detail::power_form(rep.bound, phi.q());
    out.data["lehper"] = {{"bound", detail::frac(rep.bound)}, {"torsion", rep.torsion}, {"pass", rep.pass}};
    if (rep.torsion) {
      os << h << "; torsion, b = " << rep.annihilator.to_string(job.var) << "\n";
    } else {
      out.data["lehper"]["margin"] = detail::frac(rep.margin);
      os << h << "; lehper bound " << b << "; " << (rep.pass ? "PASS" : "FAIL") << "\n";
    }
    out.data["verdict"] = rep.pass ? "PASS" : "FAIL";
    if (!rep.pass) out.exit_code = kViolation;
    out.text = os.str();
    return out;
  }
  T2Certificate c = check_T2mwg(phi, x, job.n_max);
  if (c.kind == T2Certificate::Kind::ConstantOrTorsion) {
    if (c.annihilator) {
      os << h << "; torsion, b = " << c.annihilator->to_string(job.var) << "\n";
      out.data["certificate"] = {{"kind", "ConstantOrTorsion"}, {"annihilator", c.annihilator->to_string(job.var)}};
    } else {
      os << h << "; constant\n";
      out.data["certificate"] = {{"kind", "ConstantOrTorsion"}, {"constant", true}};
    }
  } else {
    const bool s_empty = bad_reduction_set(phi).empty();
    os << h << "; witness " << c.place->to_string(k.var) << "; " << (s_empty ? "bound d(v) " : "sharp bound ")
       << detail::frac(c.bound) << "; PASS\n";
    out.data["certificate"] = {{"kind", "Witness"},
                               {"place", c.place->to_string(k.var)},
                               {"local_height", detail::frac(c.local_height)},
                               {"bound", detail::frac(c.bound)}};
  }
  out.data["verdict"] = "PASS";
  out.text = os.str();
  return out;
}

inline Output cmd_local_height(const JobSpec& job) {
  const DrinfeldModule phi = detail::working_module(job, make_module(job));
  phi.require_monic();
  const auto& k = phi.base();
  if (!job.place) throw InputError("job.place: missing");
  const Place v = make_place(k, *job.place);
  const RatFunc x = detail::single_point(make_points(job, phi.fq()));
  HeightValue h = local_height(phi, v, x, job.n_max);
  Output out;
  out.data = detail::height_json(h);
  out.data["place"] = v.to_string(k.var);
  out.data["point"] = k.str(x);
  out.text = v.to_string(k.var) + "(" + k.str(x) + ") = " + h.to_string() + " [" + h.tag_name() + "]\n";
  if (!h.exact) out.exit_code = kBudget;
  return out;
}

inline Output cmd_torsion(const JobSpec& job) {
  const DrinfeldModule phi = detail::working_module(job, make_module(job));
  phi.require_monic();
  const auto& k = phi.base();
  TorsionModule tm = torsion_enumerate(phi);
  Output out;
  std::ostringstream os;
  out.data["D"] = tm.bound.D;
  out.data["b_lcm"] = tm.bound.b_lcm.to_string(job.var);
  out.data["constants_only"] = tm.bound.constants_only;
  os << "D = " << tm.bound.D << ", b_lcm = " << tm.bound.b_lcm.to_string(job.var)
     << (tm.bound.constants_only ? " (S empty: torsion is F_q)" : "") << "\n";
  std::vector<std::string> names;
  out.data["elements"] = json::array();
  for (std::size_t i = 0; i < tm.elements.size(); ++i) {
    names.push_back(k.str(tm.elements[i]));
    out.data["elements"].push_back({{"x", names.back()}, {"annihilator", tm.minimal_annihilators[i].to_string(job.var)}});
  }
  os << "torsion = " << detail::list(names) << "\n";
  for (std::size_t i = 0; i < tm.elements.size(); ++i) {
    os << "  " << names[i] << " -> " << tm.minimal_annihilators[i].to_string(job.var) << "\n";
  }
  out.text = os.str();
  return out;
}

inline Output cmd_kernel(const JobSpec& job) {
  const DrinfeldModule phi = detail::working_module(job, make_module(job));
  phi.require_monic();
  const auto& k = phi.base();
  const Poly b = make_b(job, phi.fq());
  std::vector<std::string> names;
  for (const auto& x : kernel_in_K(phi, b)) names.push_back(k.str(x));
  Output out;
  out.data["b"] = b.to_string(job.var);
  out.data["kernel"] = names;
  out.text = "ker phi_{" + b.to_string(job.var) + "} = " + detail::list(names) + "\n";
  return out;
}

inline Output cmd_lehmer(const JobSpec& job) {
  const DrinfeldModule phi = detail::working_module(job, make_module(job));
  phi.require_monic();
  LehmerBounds lb = lehmer_bounds(phi);
  Output out;
  std::ostringstream os;
  out.data["sharp"] = detail::frac(lb.sharp);
  out.data["weak"] = detail::frac(lb.weak);
  out.data["torsion_degree"] = lb.torsion_degree;
  os << "sharp = " << detail::frac(lb.sharp) << ", weak = " << detail::frac(lb.weak);
  if (lb.lehper) {
    out.data["lehper"] = detail::frac(*lb.lehper);
    os << ", lehper = " << detail::frac(*lb.lehper);
  }
  os << ", torsion degree = " << lb.torsion_degree << "\n";
  out.text = os.str();
  return out;
}

inline Output cmd_insep_height(const JobSpec& job) {
  const DrinfeldModule base = make_module(job);
  base.require_monic();
  const DrinfeldModule phi = InsepLevel(base, job.level, job.ext_var).module;
  JobSpec lifted = job;
  lifted.level = std::max(job.level, 1);  // points always in the extension variable
  const RatFunc y = detail::single_point(make_points(lifted, phi.fq()));
  HeightValue h = global_height(phi, y, job.n_max);
  Output out;
  out.data = detail::height_json(h);
  out.data["level"] = job.level;
  out.data["point"] = phi.base().str(y);
  out.text = "h(" + phi.base().str(y) + ") at level " + std::to_string(job.level) + " = " + h.to_string() + " [" + h.tag_name() + "]\n";
  if (!h.exact) out.exit_code = kBudget;
  return out;
}

inline Output cmd_dichotomy(const JobSpec& job) {
  const DrinfeldModule base = make_module(job);
  base.require_monic();
  const std::string var = job.level > 0 ? job.ext_var : job.var;
  const DrinfeldModule phi = detail::working_module(job, base);
  const RatFunc x = detail::single_point(make_points(job, phi.fq()));
  DichotomyReport rep = key_dichotomy_check(base, job.level, x, job.n_max);
  Output out;
  std::ostringstream os;
  out.data["degree_bound"] = rep.degree_bound;
  if (rep.branch == DichotomyReport::Branch::One) {
    out.data["branch"] = 1;
    out.data["place"] = rep.place->to_string(var);
    out.data["local_height"] = detail::frac(rep.local_height);
    out.data["threshold"] = detail::frac(rep.threshold);
    os << "branch 1: " << rep.place->to_string(var) << ", local height " << detail::frac(rep.local_height) << " >= "
       << detail::frac(rep.threshold) << "\n";
  } else {
    out.data["branch"] = 2;
    out.data["b"] = rep.b.to_string(job.var);
    os << "branch 2: b = " << rep.b.to_string(job.var) << " (degree bound " << rep.degree_bound << ")\n";
    out.data["valuations"] = json::array();
    for (std::size_t i = 0; i < rep.valuations.size(); ++i) {
      const auto& [v, val] = rep.valuations[i];
      const bool exact = rep.valuations_exact;
      const std::string vs = (exact ? "" : ">= ") + val_to_string(val);
      out.data["valuations"].push_back({{"place", v.to_string(var)}, {"valuation", vs}, {"T", detail::frac(rep.t_values[i].second)}});
      os << "  " << v.to_string(var) << "(phi_b x) " << (exact ? "= " : "") << vs << " > T = " << detail::frac(rep.t_values[i].second)
         << "\n";
    }
  }
  out.text = os.str();
  return out;
}

inline Output cmd_verify(const JobSpec& job, bool inject_bug) {
  verify::Report rep;
  {
    verify::FaultInjection guard(inject_bug);
    rep = verify::run(job.seed, job.count);
  }
  Output out;
  std::ostringstream os;
  os << "seed " << job.seed << ", " << rep.total_cases() << " cases\n";
  out.data["seed"] = job.seed;
  out.data["cases"] = rep.total_cases();
  out.data["properties"] = json::array();
  for (const auto& p : rep.properties) {
    json pj = {{"name", p.name}, {"cases", p.cases}, {"violations", p.violations}};
    os << "  " << p.name << ": " << p.cases << " cases, " << p.violations << " violations\n";
    if (p.smallest) {
      pj["counterexample"] = p.smallest->description;
      os << "    counterexample: " << p.smallest->description << "\n";
    }
    out.data["properties"].push_back(pj);
  }
  out.data["ok"] = rep.ok();
  os << (rep.ok() ? "OK" : "FAILED") << "\n";
  out.text = os.str();
  out.exit_code = rep.ok() ? kOk : kViolation;
  return out;
}

}  // namespace drinfeld::cli
