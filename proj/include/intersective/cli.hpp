#pragma once

// Command frontend. Every subcommand is runnable in-process through run(),
// so the test suite drives the same code path the binary does; outputs are
// byte-deterministic for a fixed config regardless of the thread count.

#include "intersective/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace intersective {
namespace cli {

constexpr const char* version_string = "intersective-spec-1";

namespace detail {

inline int code_for(Status s) { return s == Status::not_intersective ? 2 : 0; }

inline OJson load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::parse, "cannot open config file \"" + path + "\"");
  return OJson::parse(in);
}

inline BigRat rat_from_json(const OJson& j, const char* what) {
  if (j.is_string()) return rat_parse(j.get<std::string>());
  require(j.is_number(), Errc::parse, std::string(what) + " must be a number or \"p/q\" string");
  return rat_from_double(j.get<double>());
}

inline std::vector<OPoly> polys_from_json(const FieldDesc& F, const OJson& j) {
  require(j.is_array() && !j.empty(), Errc::parse, "polys must be a nonempty array of strings");
  std::vector<OPoly> ps;
  for (const auto& e : j) ps.push_back(parse_opoly(F, e.get<std::string>(), 1));
  return ps;
}

// Sampling happens exactly when no closed form covers the request; a config
// that will sample must carry its own seed.
inline McOptions mc_for(const OJson& cfg, bool will_sample) {
  if (cfg.contains("mc")) return mc_from_json(cfg["mc"]);
  require(!will_sample, Errc::parse, "this configuration samples: provide mc{seed,...}");
  return {};
}

struct Sink {
  std::ostringstream buf;
  void line(const OJson& j) { buf << j.dump() << "\n"; }
  void block(const OJson& j) { buf << j.dump(2) << "\n"; }
};

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact intersectivity and recurrence toolkit"};
  app.set_version_flag("--version", version_string);
  app.require_subcommand(0, 1);

  std::string out_path;
  int threads = 1;
  app.add_option("--out", out_path, "write results to this file instead of stdout");
  app.add_option("--threads", threads, "worker threads for scans")->check(CLI::PositiveNumber);

  std::string poly_src, field_src = "Q", bound_src = "1000";
  int depth_min = 1;
  auto* check = app.add_subcommand("check", "decide intersectivity up to a norm bound");
  check->fallthrough();
  check->add_option("poly", poly_src)->required();
  check->add_option("--field", field_src);
  check->add_option("--bound", bound_src);
  check->add_option("--depth-min", depth_min);

  auto* certify = app.add_subcommand("certify", "certificates for the closed families");
  certify->fallthrough();
  certify->require_subcommand(1);
  std::string qc_c, qc_field = "Q";
  auto* quad = certify->add_subcommand("quad-const", "x^2 + c by exact root or witness prime");
  quad->fallthrough();
  quad->add_option("--c", qc_c)->required();
  quad->add_option("--field", qc_field);
  std::string tq_alpha, tq_beta;
  auto* three = certify->add_subcommand("three-quadratics",
                                        "Gaussian-prime product family certificate");
  three->fallthrough();
  three->add_option("--alpha", tq_alpha)->required();
  three->add_option("--beta", tq_beta)->required();

  std::vector<std::string> joint_polys;
  std::string joint_field = "Q", joint_bound = "100";
  int joint_depth_min = 1;
  auto* joint = app.add_subcommand("joint", "simultaneous prime-power point scan");
  joint->fallthrough();
  joint->add_option("polys", joint_polys)->required()->expected(-1);
  joint->add_option("--field", joint_field);
  joint->add_option("--bound", joint_bound);
  joint->add_option("--depth-min", joint_depth_min);

  std::string dec_poly, dec_field = "Q";
  auto* dec = app.add_subcommand("decompose", "integer component polynomials of p");
  dec->fallthrough();
  dec->add_option("poly", dec_poly)->required();
  dec->add_option("--field", dec_field);

  std::string config_path;
  auto* scan_returns = app.add_subcommand("scan-returns", "correlation scan with largeness report");
  scan_returns->fallthrough();
  scan_returns->add_option("--config", config_path)->required();

  auto* simulate = app.add_subcommand("simulate", "correlations without thresholding");
  simulate->fallthrough();
  simulate->add_option("--config", config_path)->required();

  int ghk_k = 1;
  auto* ghk = app.add_subcommand("ghk", "box-averaged seminorm estimate");
  ghk->fallthrough();
  ghk->add_option("--config", config_path)->required();
  ghk->add_option("--k", ghk_k)->required()->check(CLI::Range(0, 3));

  auto* density = app.add_subcommand("density", "exact intersection densities on windows");
  density->fallthrough();
  density->add_option("--config", config_path)->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  detail::Sink sink;
  int code = 0;
  try {
    if (*check) {
      FieldDesc F = FieldDesc::parse(field_src);
      OPoly p = parse_opoly(F, poly_src, 1);
      ScanOptions o;
      o.bound = BigInt(bound_src);
      o.depth_min = depth_min;
      o.threads = threads;
      Verdict v = is_intersective_up_to(p, o);
      sink.block(verdict_json(F, v));
      err << poly_src << " over " << F.str() << ": " << status_str(v.status);
      if (v.witness) err << " (witness " << v.witness->str() << ")";
      err << "\n";
      code = detail::code_for(v.status);
    } else if (*quad) {
      FieldDesc F = FieldDesc::parse(qc_field);
      AlgInt c = parse_elem(F, qc_c);
      QuadConstOptions o;
      o.threads = threads;
      Verdict v = certify_quadratic_plus_constant(F, c, o);
      sink.block(verdict_json(F, v, false));
      err << "x^2 + (" << qc_c << ") over " << F.str() << ": " << status_str(v.status) << "\n";
      code = detail::code_for(v.status);
    } else if (*three) {
      FieldDesc F = FieldDesc::quadratic(BigInt(-1));
      AlgInt a = parse_elem(F, tq_alpha), b = parse_elem(F, tq_beta);
      Verdict v = certify_three_quadratics(a, b);
      OJson j = verdict_json(F, v, false);
      j["poly"] = to_string(three_quadratics_poly(F, a, b));
      sink.block(j);
      err << "three-quadratics(" << tq_alpha << ", " << tq_beta
          << "): " << status_str(v.status) << "\n";
      code = detail::code_for(v.status);
    } else if (*joint) {
      FieldDesc F = FieldDesc::parse(joint_field);
      std::vector<OPoly> ps;
      for (const auto& s : joint_polys) ps.push_back(parse_opoly(F, s, 1));
      JointOptions o;
      o.bound = BigInt(joint_bound);
      o.depth_min = joint_depth_min;
      o.threads = threads;
      JointVerdict v = jointly_intersective_up_to(ps, o);
      sink.block(joint_json(v));
      err << joint_polys.size() << " polynomials over " << F.str() << ": "
          << status_str(v.status);
      if (v.witness) err << " (witness " << v.witness->str() << ")";
      err << "\n";
      code = detail::code_for(v.status);
    } else if (*dec) {
      FieldDesc F = FieldDesc::parse(dec_field);
      OPoly p = parse_opoly(F, dec_poly);
      sink.block(decompose_json(F, p));
      err << "decomposed " << dec_poly << " over " << F.str() << "\n";
    } else if (*scan_returns || *simulate) {
      OJson cfg = detail::load_config(config_path);
      bool kron = cfg.contains("kronecker");
      require(kron || cfg.contains("heisenberg"), Errc::parse,
              "config needs a kronecker or heisenberg system");
      Window W = window_from_json(intersective::detail::need(cfg, "window", "config"));
      if (kron) {
        KroneckerSystem sys = kronecker_from_json(cfg["kronecker"]);
        auto polys = detail::polys_from_json(sys.field(), intersective::detail::need(cfg, "polys", "config"));
        McOptions mc = detail::mc_for(cfg, polys.size() > 1);
        if (*scan_returns) {
          BigRat c = detail::rat_from_json(intersective::detail::need(cfg, "threshold", "config"), "threshold");
          ReturnScanOptions o;
          o.mc = mc;
          o.threads = threads;
          ReturnScanReport rep = return_set_scan(sys, polys, c, W, o);
          for (const auto& r : rep.per_u) sink.line(corr_json(r));
          sink.line(return_scan_summary_json(rep));
          err << "scan-returns: " << rep.hits.size() << " hits of " << rep.per_u.size() << "\n";
        } else {
          std::uint64_t n = W.size_within(1'000'000);
          for (std::uint64_t i = 0; i < n; ++i) {
            sink.line(corr_json(correlation(sys, polys, W.at(i), mc)));
          }
          err << "simulate: " << n << " correlations\n";
        }
      } else {
        HeisenbergSystem sys = heisenberg_from_json(cfg["heisenberg"]);
        auto polys = detail::polys_from_json(FieldDesc::rationals(),
                                             intersective::detail::need(cfg, "polys", "config"));
        McOptions mc = detail::mc_for(cfg, true);
        if (*scan_returns) {
          BigRat c = detail::rat_from_json(intersective::detail::need(cfg, "threshold", "config"), "threshold");
          ReturnScanOptions o;
          o.mc = mc;
          o.threads = threads;
          ReturnScanReport rep = return_set_scan(sys, polys, c, W, o);
          for (const auto& r : rep.per_u) sink.line(corr_json(r));
          sink.line(return_scan_summary_json(rep));
          err << "scan-returns: " << rep.hits.size() << " hits of " << rep.per_u.size() << "\n";
        } else {
          std::uint64_t n = W.size_within(1'000'000);
          for (std::uint64_t i = 0; i < n; ++i) {
            sink.line(corr_json(correlation(sys, polys, W.at(i), mc)));
          }
          err << "simulate: " << n << " correlations\n";
        }
      }
    } else if (*ghk) {
      OJson cfg = detail::load_config(config_path);
      Window W = window_from_json(intersective::detail::need(cfg, "window", "config"));
      GhkOptions o;
      o.seed = intersective::detail::need(cfg, "seed", "config").get<std::uint64_t>();
      if (cfg.contains("samples")) o.samples = cfg["samples"].get<std::uint64_t>();
      if (cfg.contains("budget")) o.eval_budget = cfg["budget"].get<std::uint64_t>();
      const OJson& fkey = intersective::detail::need(cfg, "f", "config");
      GhkReport rep;
      std::string fname;
      if (cfg.contains("kronecker")) {
        KroneckerSystem sys = kronecker_from_json(cfg["kronecker"]);
        SampledFn f = fn_from_json(fkey, sys.target());
        fname = f.name;
        rep = ghk_estimate(sys, f, ghk_k, W, o);
      } else {
        HeisenbergSystem sys =
            heisenberg_from_json(intersective::detail::need(cfg, "heisenberg", "config"));
        SampledFn f = fn_from_json(fkey, sys.target());
        fname = f.name;
        rep = ghk_estimate(sys, f, ghk_k, W, o);
      }
      sink.block(ghk_json(rep, fname));
      err << "ghk k=" << ghk_k << " " << fname << ": " << rep.value << "\n";
    } else if (*density) {
      OJson cfg = detail::load_config(config_path);
      std::string mode = cfg.value("mode", "scan");
      Window W_set = window_from_json(intersective::detail::need(cfg, "window_set", "config"));
      Window W_u = window_from_json(intersective::detail::need(cfg, "window_u", "config"));
      DensityScanOptions o;
      o.threads = threads;
      if (cfg.contains("budget")) o.budget = cfg["budget"].get<std::uint64_t>();
      if (mode == "scan") {
        FieldDesc F = FieldDesc::parse(intersective::detail::need(cfg, "field", "config").get<std::string>());
        SetSpec E = set_from_json(intersective::detail::need(cfg, "set", "config"));
        auto polys = detail::polys_from_json(F, intersective::detail::need(cfg, "polys", "config"));
        BigRat c = detail::rat_from_json(intersective::detail::need(cfg, "threshold", "config"), "threshold");
        DensityReturnReport rep = density_return_scan(E, polys, W_set, W_u, c, o);
        for (const auto& d : rep.per_u) sink.line(density_point_json(d));
        sink.line(density_summary_json(rep));
        err << "density: " << rep.good.size() << " good of " << rep.per_u.size() << "\n";
      } else if (mode == "partition") {
        FieldDesc F = FieldDesc::parse(intersective::detail::need(cfg, "field", "config").get<std::string>());
        std::vector<SetSpec> parts;
        for (const auto& e : intersective::detail::need(cfg, "parts", "config")) parts.push_back(set_from_json(e));
        auto polys = detail::polys_from_json(F, intersective::detail::need(cfg, "polys", "config"));
        PartitionScanOptions po;
        po.scan = o;
        if (cfg.contains("epsilon")) {
          po.epsilon = detail::rat_from_json(cfg["epsilon"], "epsilon");
        }
        PartitionScanReport rep = partition_scan(parts, polys, W_set, W_u, po);
        for (const auto& d : rep.scan.per_u) sink.line(density_point_json(d));
        sink.line(partition_json(rep));
        err << "partition: cell " << rep.cell << ", " << rep.scan.good.size() << " witnesses\n";
      } else if (mode == "demo") {
        SetSpec E = set_from_json(intersective::detail::need(cfg, "set", "config"));
        BigRat eps(1, 20);
        if (cfg.contains("epsilon")) eps = detail::rat_from_json(cfg["epsilon"], "epsilon");
        GaussianDemoReport rep = gaussian_config_demo(E, W_set, W_u, eps, o);
        for (const auto& d : rep.scan.per_u) sink.line(density_point_json(d));
        sink.line(demo_json(rep));
        err << "demo: " << rep.scan.good.size() << " witnesses\n";
      } else {
        throw Error(Errc::parse, "unknown mode \"" + mode + "\" (scan, partition, demo)");
      }
    } else {
      err << "no subcommand given; see --help\n";
      return 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (out_path.empty()) {
    out << sink.buf.str();
  } else {
    std::ofstream f(out_path);
    require(f.good(), Errc::parse, "cannot open output file \"" + out_path + "\"");
    f << sink.buf.str();
  }
  return code;
}

}  // namespace cli
}  // namespace intersective
