#pragma once

// JSON encoding of every report the tools emit, and parsing of the config
// mini-language (sets, windows, systems). Key order is fixed so that equal
// results serialize to equal bytes.

#include "intersective/dynamics.hpp"
#include "intersective/experiments.hpp"
#include "intersective/intersect.hpp"

#include <json.hpp>

namespace intersective {

using OJson = nlohmann::ordered_json;

// ------------------------------------------------------------ small pieces

inline std::string rat_str(const BigRat& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline BigRat rat_parse(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return BigRat(BigInt(s));
    return BigRat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error(Errc::parse, "bad rational literal \"" + s + "\"");
  }
}

inline OJson point_json(const Point& u) {
  OJson a = OJson::array();
  for (auto c : u) a.push_back(c);
  return a;
}

inline OJson gap_json(const GapResult& g) {
  OJson j;
  if (g.gap) {
    j["gap"] = *g.gap;
  } else {
    j["gap"] = "INFINITE_ON_WINDOW";
  }
  j["inflation"] = g.inflation_used;
  return j;
}

// --------------------------------------------------------------- verdicts

inline OJson scan_record_json(const PrimeScanRecord& r) {
  OJson j;
  j["ideal"] = r.pf.ideal.str();
  j["rational_prime"] = r.pf.p.str();
  j["disc_valuation"] = r.disc_valuation;
  j["depth_target"] = r.depth_target;
  j["levels"] = r.level_counts;
  j["stop"] = stop_str(r.stop);
  if (r.stop == StopReason::empty_level) j["empty_level"] = r.empty_level;
  return j;
}

inline OJson three_quad_json(const FieldDesc& F, const ThreeQuadCert& c) {
  OJson j;
  j["alpha"] = to_string(F, c.alpha);
  j["beta"] = to_string(F, c.beta);
  j["alphabeta"] = to_string(F, c.alphabeta);
  j["alpha_square_mod_beta"] = c.alpha_square_mod_beta;
  j["beta_square_mod_alpha"] = c.beta_square_mod_alpha;
  j["which_square"] = c.which_square;
  j["square_root"] = to_string(F, c.square_root);
  return j;
}

inline OJson verdict_json(const FieldDesc& F, const Verdict& v, bool with_scan = true) {
  OJson j;
  j["status"] = status_str(v.status);
  if (v.bound) j["bound"] = v.bound->str();
  j["depth_used"] = v.depth_used;
  if (v.witness) j["witness"] = v.witness->str();
  if (v.witness_level) j["witness_level"] = *v.witness_level;
  if (v.exact_root) j["exact_root"] = to_string(F, *v.exact_root);
  if (v.radical_reduced) j["radical_reduced"] = true;
  if (!v.warning.empty()) j["warning"] = v.warning;
  if (v.three_quad) j["certificate"] = three_quad_json(F, *v.three_quad);
  if (with_scan) {
    OJson arr = OJson::array();
    for (const auto& r : v.scan) arr.push_back(scan_record_json(r));
    j["scan"] = std::move(arr);
  }
  return j;
}

inline OJson joint_json(const JointVerdict& v) {
  OJson j;
  j["status"] = status_str(v.status);
  j["bound"] = v.bound.str();
  if (v.witness) j["witness"] = v.witness->str();
  if (v.witness_level) j["witness_level"] = *v.witness_level;
  OJson arr = OJson::array();
  for (const auto& r : v.scan) {
    OJson e;
    e["ideal"] = r.pf.ideal.str();
    e["depth_reached"] = r.depth_reached;
    if (r.empty_level) e["empty_level"] = r.empty_level;
    arr.push_back(std::move(e));
  }
  j["scan"] = std::move(arr);
  return j;
}

inline OJson gcd_report_json(const FieldDesc& F, const GcdReductionReport& r) {
  OJson j;
  j["gcd"] = to_string(r.gcd.g);
  j["delta"] = to_string(F, r.gcd.delta);
  j["unit_gcd"] = r.unit_gcd;
  if (r.gcd_verdict) j["gcd_verdict"] = verdict_json(F, *r.gcd_verdict, false);
  j["joint_verdict"] = joint_json(r.joint_verdict);
  j["consistent"] = r.consistent;
  if (!r.caveat.empty()) j["caveat"] = r.caveat;
  return j;
}

inline OJson decompose_json(const FieldDesc& F, const OPoly& p) {
  ZPolyVector zv = decompose(p);
  OJson j;
  j["field"] = F.str();
  j["poly"] = to_string(p);
  OJson comps = OJson::array();
  auto names = zv.var_names();
  for (const auto& c : zv.comps) comps.push_back(to_string(c, names));
  j["components"] = std::move(comps);
  return j;
}

// --------------------------------------------------------------- dynamics

inline OJson corr_json(const CorrelationReport& r) {
  OJson j;
  j["u"] = point_json(r.u);
  j["value"] = r.value;
  j["method"] = r.method == CorrMethod::exact ? "EXACT" : "MONTE_CARLO";
  if (r.exact_value) j["exact_value"] = rat_str(*r.exact_value);
  if (r.method == CorrMethod::monte_carlo) {
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["stderr"] = r.stderr_est;
  }
  return j;
}

inline OJson return_scan_summary_json(const ReturnScanReport& r) {
  OJson j;
  j["threshold"] = rat_str(r.threshold);
  j["hit_count"] = r.hits.size();
  OJson hits = OJson::array();
  for (const auto& h : r.hits) hits.push_back(point_json(h));
  j["hits"] = std::move(hits);
  j["hit_density"] = rat_str(r.hit_density);
  j["syndeticity"] = gap_json(r.hit_gap);
  return j;
}

inline OJson ghk_json(const GhkReport& r, const std::string& fn_name) {
  OJson j;
  j["f"] = fn_name;
  j["k"] = r.k;
  j["value"] = r.value;
  j["samples"] = r.samples;
  j["u_per_level"] = r.u_per_level;
  j["leaves"] = r.leaves;
  return j;
}

// ------------------------------------------------------------ experiments

inline OJson density_point_json(const DensityPoint& d) {
  OJson j;
  j["u"] = point_json(d.u);
  j["density"] = rat_str(d.density);
  return j;
}

inline OJson density_summary_json(const DensityReturnReport& r) {
  OJson j;
  j["threshold"] = rat_str(r.threshold);
  j["good_count"] = r.good.size();
  OJson good = OJson::array();
  for (const auto& g : r.good) good.push_back(point_json(g));
  j["good"] = std::move(good);
  j["density_of_good"] = rat_str(r.good_density);
  j["syndeticity_gap"] = gap_json(r.good_gap);
  j["boundary_error"] = rat_str(r.boundary_error);
  return j;
}

inline OJson partition_json(const PartitionScanReport& r) {
  OJson j;
  j["cell"] = r.cell;
  j["cell_density"] = rat_str(r.cell_density);
  j["threshold"] = rat_str(r.threshold);
  j["scan"] = density_summary_json(r.scan);
  return j;
}

inline OJson demo_json(const GaussianDemoReport& r) {
  OJson j;
  OJson comps = OJson::array();
  auto names = r.mapping.var_names();
  for (const auto& c : r.mapping.comps) comps.push_back(to_string(c, names));
  j["mapping"] = std::move(comps);
  j["base_density"] = rat_str(r.base_density);
  j["threshold"] = rat_str(r.threshold);
  j["scan"] = density_summary_json(r.scan);
  return j;
}

// ------------------------------------------------------------ config parse

namespace detail {

inline const OJson& need(const OJson& j, const char* key, const char* where) {
  auto it = j.find(key);
  require(it != j.end(), Errc::parse, std::string("missing \"") + key + "\" in " + where);
  return *it;
}

inline std::vector<std::int64_t> i64_list(const OJson& j, const char* where) {
  require(j.is_array(), Errc::parse, std::string(where) + " must be an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& e : j) {
    require(e.is_number_integer(), Errc::parse, std::string(where) + " must hold integers");
    out.push_back(e.get<std::int64_t>());
  }
  return out;
}

inline std::vector<BigRat> unit_list(const OJson& j, const char* where) {
  require(j.is_array(), Errc::parse, std::string(where) + " must be an array of numbers");
  std::vector<BigRat> out;
  for (const auto& e : j) {
    require(e.is_number(), Errc::parse, std::string(where) + " must hold numbers");
    out.push_back(rat_from_double(e.get<double>()));
  }
  return out;
}

}  // namespace detail

inline Window window_from_json(const OJson& j) {
  require(j.is_object(), Errc::parse, "window must be an object with lo/hi");
  return Window(detail::i64_list(detail::need(j, "lo", "window"), "window lo"),
                detail::i64_list(detail::need(j, "hi", "window"), "window hi"));
}

inline SetSpec set_from_json(const OJson& j) {
  require(j.is_object() && j.size() == 1, Errc::parse, "set spec must be a one-key object");
  const std::string kind = j.begin().key();
  const OJson& v = j.begin().value();
  if (kind == "congruence") {
    auto mod = detail::i64_list(detail::need(v, "modulus", "congruence"), "modulus");
    std::vector<std::int64_t> res;
    if (v.contains("residue")) res = detail::i64_list(v["residue"], "residue");
    return SetSpec::congruence(std::move(mod), std::move(res));
  }
  if (kind == "ideal") {
    FieldDesc F = FieldDesc::parse(detail::need(v, "field", "ideal set").get<std::string>());
    Ideal I = [&]() {
      if (v.contains("hnf")) return Ideal::parse(F, v["hnf"].get<std::string>());
      std::vector<AlgInt> gens;
      for (const auto& g : detail::need(v, "gens", "ideal set")) {
        gens.push_back(parse_elem(F, g.get<std::string>()));
      }
      return ideal_from_generators(F, gens);
    }();
    AlgInt r(0);
    if (v.contains("residue")) r = parse_elem(F, v["residue"].get<std::string>());
    return SetSpec::ideal_members(I, r);
  }
  if (kind == "random") {
    require(v.contains("seed"), Errc::parse, "random set requires an explicit seed");
    return SetSpec::random_set(detail::need(v, "density", "random set").get<double>(),
                               v["seed"].get<std::uint64_t>());
  }
  if (kind == "bohr") {
    std::vector<double> alpha;
    for (const auto& a : detail::need(v, "alpha", "bohr set")) alpha.push_back(a.get<double>());
    return SetSpec::bohr(std::move(alpha), detail::need(v, "radius", "bohr set").get<double>());
  }
  if (kind == "explicit") {
    std::vector<Point> pts;
    for (const auto& p : detail::need(v, "points", "explicit set")) {
      pts.push_back(detail::i64_list(p, "point"));
    }
    return SetSpec::explicit_set(std::move(pts));
  }
  if (kind == "complement") return SetSpec::complement(set_from_json(v));
  if (kind == "union" || kind == "intersect") {
    require(v.is_array(), Errc::parse, kind + " takes an array of set specs");
    std::vector<SetSpec> parts;
    for (const auto& e : v) parts.push_back(set_from_json(e));
    return kind == "union" ? SetSpec::union_of(std::move(parts))
                           : SetSpec::intersection_of(std::move(parts));
  }
  if (kind == "shift") {
    return SetSpec::shifted(set_from_json(detail::need(v, "of", "shift")),
                            detail::i64_list(detail::need(v, "by", "shift"), "shift offset"));
  }
  throw Error(Errc::parse, "unknown set kind \"" + kind + "\"");
}

inline TorusBox box_from_json(const OJson& j) {
  return TorusBox(detail::unit_list(detail::need(j, "corner", "box"), "box corner"),
                  detail::unit_list(detail::need(j, "sides", "box"), "box sides"));
}

inline KroneckerSystem kronecker_from_json(const OJson& j) {
  FieldDesc F = FieldDesc::rationals();
  if (j.contains("field")) F = FieldDesc::parse(j["field"].get<std::string>());
  const OJson& rows = detail::need(j, "alpha", "kronecker system");
  require(rows.is_array() && !rows.empty(), Errc::parse, "alpha must be an array of rows");
  std::vector<std::vector<BigRat>> alpha;
  for (const auto& r : rows) alpha.push_back(detail::unit_list(r, "alpha row"));
  TorusBox B = box_from_json(detail::need(j, "B", "kronecker system"));
  if (j.contains("dim")) {
    require(j["dim"].get<int>() == B.dim(), Errc::parse, "dim disagrees with the box shape");
  }
  return KroneckerSystem(F, std::move(alpha), std::move(B));
}

inline HeisenbergSystem heisenberg_from_json(const OJson& j) {
  auto a = detail::unit_list(detail::need(j, "a", "heisenberg system"), "generator");
  require(a.size() == 3, Errc::parse, "generator must have three coordinates");
  return HeisenbergSystem(a[0], a[1], a[2], box_from_json(detail::need(j, "B", "heisenberg system")));
}

inline SampledFn fn_from_json(const OJson& j, const TorusBox& B) {
  std::string name = j.get<std::string>();
  if (name == "one") return fn_one();
  if (name == "cos") return fn_cos();
  if (name == "indicator") return fn_box_indicator(B);
  throw Error(Errc::parse, "unknown function \"" + name + "\" (one, cos, indicator)");
}

inline McOptions mc_from_json(const OJson& j) {
  McOptions o;
  require(j.contains("seed"), Errc::parse, "sampling config requires an explicit seed");
  o.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("samples")) o.samples = j["samples"].get<std::uint64_t>();
  if (j.contains("force_monte_carlo")) o.force_monte_carlo = j["force_monte_carlo"].get<bool>();
  return o;
}

}  // namespace intersective
