// Command-line front end: generation, analysis, scaling, spectral and errata
// workflows over generalized Vicsek fractals, with stable file formats.
//
// Exit codes: 0 ok, 2 usage/validation, 3 resource cap exceeded,
// 4 internal cross-check failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vicsek/closed_form.hpp"
#include "vicsek/spectral.hpp"
#include "vicsek/tree_core.hpp"
#include "vicsek/vicsek_gen.hpp"
#include "vicsek/walk_oracle.hpp"

namespace {

using namespace vicsek;
using nlohmann::json;

int exit_code_for(errc c) {
  switch (c) {
    case errc::size_cap_exceeded:
    case errc::too_large_for_exact_solve:
    case errc::dense_cap_exceeded:
      return 3;
    case errc::ill_conditioned:
    case errc::no_three_real_roots:
    case errc::internal_inconsistency:
      return 4;
    default:
      return 2;
  }
}

struct SeedOpts {
  long star = 0;
  bool single = false;
  std::string file;
};

Tree resolve_seed(const SeedOpts& opts) {
  if (opts.single) return single_vertex_seed();
  if (!opts.file.empty()) {
    std::ifstream in(opts.file);
    require(in.good(), errc::io_error, "cannot open seed file " + opts.file);
    return read_edge_list(in);
  }
  return star_seed(opts.star);
}

void add_seed_opts(CLI::App* cmd, SeedOpts& opts) {
  auto* group = cmd->add_option_group("seed", "seed tree source");
  group->add_option("--star", opts.star, "star seed with S leaves");
  group->add_flag("--single", opts.single, "single-vertex seed");
  group->add_option("--seed-file", opts.file, "edge-list file to use as seed");
  group->require_option(1);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::io_error, "cannot open output file " + path);
  out << content;
  require(out.good(), errc::io_error, "failed writing " + path);
}

std::vector<long> parse_long_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stol(item));
    } catch (const std::exception&) {
      fail(errc::bad_parameter, "bad integer '" + item + "' in list '" + text + "'");
    }
  }
  require(!out.empty(), errc::bad_parameter, "empty list '" + text + "'");
  return out;
}

json rational_json(const Rational& q) {
  return json{{"num", num_str(q)}, {"den", den_str(q)}, {"approx", to_double(q)}};
}

// Sample counts may be given in scientific notation ("1e6").
std::int64_t parse_count(const std::string& text) {
  try {
    if (text.find_first_of(".eE") != std::string::npos) {
      double d = std::stod(text);
      require(d >= 0 && d <= 9.0e18 && d == std::floor(d), errc::bad_parameter,
              "count '" + text + "' is not a nonnegative integer");
      return static_cast<std::int64_t>(d);
    }
    return std::stoll(text);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(errc::bad_parameter, "bad count '" + text + "'");
  }
}

// ---------------------------------------------------------------------------

struct GenerateConfig {
  SeedOpts seed;
  long s = 0;
  long t = 0;
  std::string out;
  std::int64_t cap = kDefaultVertexCap;
};

int cmd_generate(const GenerateConfig& cfg) {
  Tree seed = resolve_seed(cfg.seed);
  FractalGraph g = generate(seed, cfg.s, cfg.t, cfg.cap);
  write_file(cfg.out, edge_list_string(g.tree));
  write_file(cfg.out + ".json", sidecar_string(g));
  std::cout << g.tree.n() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct AnalyzeConfig {
  SeedOpts seed;
  long s = 0;
  long t = 0;
  std::string modes = "closed";
  std::string out;
  std::string format = "json";
  std::string samples = "1";            // walks per sampled pair
  std::string pair_samples = "10000";   // sampled ordered pairs
  std::uint64_t rng_seed = 12345;
  std::int64_t cap_override = 0;        // 0: per-mode defaults
};

int cmd_analyze(const AnalyzeConfig& cfg) {
  const std::int64_t oracle_cap = cfg.cap_override ? cfg.cap_override : 5000;
  const std::int64_t dense_cap = cfg.cap_override ? cfg.cap_override : kDenseCap;
  const std::int64_t build_cap = cfg.cap_override ? cfg.cap_override : kDefaultVertexCap;

  std::vector<std::string> modes;
  {
    std::stringstream ss(cfg.modes);
    std::string m;
    while (std::getline(ss, m, ',')) {
      if (m.empty()) continue;
      require(m == "closed" || m == "oracle" || m == "spectral" || m == "mc", errc::bad_parameter,
              "unknown mode '" + m + "'");
      modes.push_back(m);
    }
  }
  require(!modes.empty(), errc::bad_parameter, "no analysis mode requested");

  Tree seed = resolve_seed(cfg.seed);
  const BigInt seed_w = wiener_fast_tree(seed);
  const ClosedFormParams params{seed.n(), seed_w, cfg.s, cfg.t};
  const BigInt count = vertex_count(seed.n(), cfg.s, cfg.t);
  require(count >= 2, errc::degenerate_size, "analysis needs at least 2 vertices");

  json report;
  report["seed"] = {{"n", seed.n()}, {"wiener", dec(seed_w)}};
  report["s"] = cfg.s;
  report["t"] = cfg.t;
  report["vertex_count"] = dec(count);

  std::optional<FractalGraph> built;
  auto graph = [&]() -> const Tree& {
    if (!built) built = generate(seed, cfg.s, cfg.t, build_cap);
    return built->tree;
  };

  json methods = json::object();
  std::optional<Rational> closed_mfpt, oracle_mfpt;
  std::optional<BigInt> closed_w, oracle_w;
  std::optional<double> spectral_mfpt;
  std::optional<WalkEstimate> mc_est;

  for (const std::string& m : modes) {
    if (m == "closed") {
      closed_w = wiener_closed(params);
      closed_mfpt = mfpt_closed(params);
      methods["closed"] = {{"wiener", dec(*closed_w)}, {"mfpt", rational_json(*closed_mfpt)}};
    } else if (m == "oracle") {
      require(count <= oracle_cap, errc::too_large_for_exact_solve,
              "oracle mode capped at " + std::to_string(oracle_cap) + " vertices, graph has " +
                  dec(count));
      oracle_w = wiener_brute(graph());
      oracle_mfpt = mfpt_oracle(graph());
      methods["oracle"] = {{"wiener", dec(*oracle_w)}, {"mfpt", rational_json(*oracle_mfpt)}};
    } else if (m == "spectral") {
      SpectrumResult spec = spectrum(graph(), dense_cap);
      spectral_mfpt = mfpt_eigen(spec);
      methods["spectral"] = {
          {"mfpt", *spectral_mfpt},
          {"wiener_kirchhoff", static_cast<double>(graph().n()) * spec.reciprocal_sum}};
    } else {  // mc
      require(count <= build_cap, errc::size_cap_exceeded,
              "mc mode needs the explicit graph; cap is " + std::to_string(build_cap));
      mc_est = mc_mfpt(graph(), parse_count(cfg.pair_samples), parse_count(cfg.samples),
                       cfg.rng_seed);
      methods["mc"] = {{"mean", mc_est->mean},
                       {"ci95", mc_est->half_width_95},
                       {"samples", mc_est->samples},
                       {"seed", mc_est->rng_seed}};
    }
  }

  std::optional<Rational> mfpt_exact = closed_mfpt ? closed_mfpt : oracle_mfpt;
  if (mc_est && mfpt_exact) {
    methods["mc"]["exact_num"] = num_str(*mfpt_exact);
    methods["mc"]["exact_den"] = den_str(*mfpt_exact);
  }
  report["methods"] = methods;

  json checks = json::array();
  bool all_ok = true;
  auto push_check = [&](const std::string& a, const std::string& b, const std::string& quantity,
                        double delta, double tol, bool ok) {
    checks.push_back(json{{"a", a},
                          {"b", b},
                          {"quantity", quantity},
                          {"delta", delta},
                          {"tolerance", tol},
                          {"ok", ok}});
    all_ok = all_ok && ok;
  };

  if (closed_w && oracle_w) {
    bool ok = (*closed_w == *oracle_w) && (*closed_mfpt == *oracle_mfpt);
    double delta = std::fabs(to_double(Rational(*closed_w - *oracle_w)));
    push_check("closed", "oracle", "wiener+mfpt(exact)", delta, 0.0, ok);
  }
  if (spectral_mfpt && mfpt_exact) {
    double exact = to_double(*mfpt_exact);
    double delta = std::fabs(*spectral_mfpt - exact) / exact;
    push_check(closed_w ? "closed" : "oracle", "spectral", "mfpt(relative)", delta, 1e-6,
               delta <= 1e-6);
  }
  if (mc_est && mfpt_exact) {
    double exact = to_double(*mfpt_exact);
    double delta = std::fabs(mc_est->mean - exact);
    double tol = 3.0 * mc_est->half_width_95;
    push_check(closed_w ? "closed" : "oracle", "mc", "mfpt(3 half-widths)", delta, tol,
               delta <= tol);
  }
  report["cross_checks"] = checks;
  report["ok"] = all_ok;

  std::string text;
  if (cfg.format == "json") {
    text = report.dump(2) + "\n";
  } else {  // csv (flag values validated by CLI11)
    std::ostringstream os;
    os << "method,wiener,mfpt_num,mfpt_den,mfpt_float\n";
    if (closed_w) {
      os << "closed," << dec(*closed_w) << ',' << num_str(*closed_mfpt) << ','
         << den_str(*closed_mfpt) << ',' << to_double(*closed_mfpt) << '\n';
    }
    if (oracle_w) {
      os << "oracle," << dec(*oracle_w) << ',' << num_str(*oracle_mfpt) << ','
         << den_str(*oracle_mfpt) << ',' << to_double(*oracle_mfpt) << '\n';
    }
    if (spectral_mfpt) os << "spectral,,,," << *spectral_mfpt << '\n';
    if (mc_est) os << "mc,,,," << mc_est->mean << '\n';
    text = os.str();
  }

  if (!cfg.out.empty()) {
    write_file(cfg.out, text);
    std::cout << (all_ok ? "ok" : "cross-check failure") << " (report written to " << cfg.out
              << ")\n";
  } else {
    std::cout << text;
  }

  require(all_ok, errc::internal_inconsistency,
          "cross-check disagreement beyond tolerance (see report)");
  return 0;
}

// ---------------------------------------------------------------------------

struct ScalingConfig {
  SeedOpts seed;
  std::string s_list;
  long t_max = 0;
  std::string out;
};

int cmd_scaling(const ScalingConfig& cfg) {
  Tree seed = resolve_seed(cfg.seed);
  std::vector<long> s_values = parse_long_list(cfg.s_list);
  for (long s : s_values) {
    require(s >= seed.max_degree() && s >= 2, errc::bad_parameter,
            "s = " + std::to_string(s) + " below the seed's max degree " +
                std::to_string(seed.max_degree()));
  }
  ClosedFormParams base{seed.n(), wiener_fast_tree(seed), s_values.front(), 0};
  std::ostringstream os;
  write_scaling_csv(base, s_values, cfg.t_max, os);
  if (!cfg.out.empty()) {
    write_file(cfg.out, os.str());
    std::cout << "wrote " << cfg.out << "\n";
  } else {
    std::cout << os.str();
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct ErrataConfig {
  std::string s_list = "2,3";
  long t_max = 2;
  std::string out;
  std::int64_t oracle_cap = 3000;
};

int cmd_errata(const ErrataConfig& cfg) {
  std::vector<long> s_values = parse_long_list(cfg.s_list);
  require(cfg.t_max >= 1, errc::bad_parameter, "t-max must be >= 1");

  json grid = json::array();
  bool derived_vs_oracle_ok = true;

  std::cout << "s  t  quantity  derived         printed         oracle          verdict\n";
  auto show = [](const Rational& q) {
    std::string text = num_str(q);
    if (q.get_den() != 1) text += "/" + den_str(q);
    return text;
  };

  for (long s : s_values) {
    Tree seed = star_seed(s);
    const BigInt w0 = wiener_fast_tree(seed);  // s^2
    for (long t = 1; t <= cfg.t_max; ++t) {
      ClosedFormParams p{seed.n(), w0, s, t};
      const BigInt count = vertex_count(seed.n(), s, t);
      const BigInt w_derived = wiener_closed(p);
      const Rational a_derived = mfpt_closed(p);
      const Rational w_thm3 = printed_theorem3_wiener(p);
      const Rational a_cor4 = printed_corollary4_mfpt(p);
      const Rational a_cor5 = printed_corollary5_mfpt(s, t);
      const Ap5Evaluation ap5 = eval_ap5_sums(s, t);

      std::optional<BigInt> w_oracle;
      std::optional<Rational> a_oracle;
      if (count <= cfg.oracle_cap) {
        FractalGraph g = generate(seed, s, t, cfg.oracle_cap);
        w_oracle = wiener_brute(g.tree);
        a_oracle = mfpt_oracle(g.tree);
        if (*w_oracle != w_derived || *a_oracle != a_derived) derived_vs_oracle_ok = false;
      }

      json cell;
      cell["s"] = s;
      cell["t"] = t;
      cell["n0"] = seed.n();
      cell["seed_wiener"] = dec(w0);
      cell["vertex_count"] = dec(count);
      cell["derived"] = {{"wiener", dec(w_derived)}, {"mfpt", rational_json(a_derived)}};
      cell["printed_theorem3"] = {{"wiener", rational_json(w_thm3)},
                                  {"matches_derived", w_thm3 == Rational(w_derived)}};
      cell["printed_corollary4"] = {{"mfpt", rational_json(a_cor4)},
                                    {"matches_derived", a_cor4 == a_derived}};
      cell["printed_corollary5"] = {{"mfpt", rational_json(a_cor5)},
                                    {"matches_derived", a_cor5 == a_derived}};
      // the printed sums reproduce the previous generation's value exactly;
      // report that observation alongside the direct comparison
      const Rational a_prev = (t == 1) ? make_rational(2 * w0, seed.n())
                                       : mfpt_closed({seed.n(), w0, s, t - 1});
      cell["printed_ap5"] = {{"sum1", rational_json(ap5.sum1)},
                             {"sum2", rational_json(ap5.sum2)},
                             {"total", rational_json(ap5.total)},
                             {"matches_derived", ap5.total == a_derived},
                             {"matches_previous_generation", ap5.total == a_prev}};
      cell["variants"] = json::array();
      for (const ClosedFormReport& rep : eval_printed_formulas(p)) {
        cell["variants"].push_back(closed_form_report_json(rep));
      }
      if (w_oracle) {
        cell["oracle"] = {{"wiener", dec(*w_oracle)},
                          {"mfpt", rational_json(*a_oracle)},
                          {"agrees_derived", *w_oracle == w_derived && *a_oracle == a_derived}};
        cell["printed_theorem3"]["matches_oracle"] = w_thm3 == Rational(*w_oracle);
        cell["printed_corollary5"]["matches_oracle"] = a_cor5 == *a_oracle;
        cell["printed_ap5"]["matches_oracle"] = ap5.total == *a_oracle;
      }
      grid.push_back(cell);

      char line[256];
      auto verdict = [](bool same) { return same ? "matches" : "MISMATCH"; };
      std::string oracle_w_text = w_oracle ? dec(*w_oracle) : "-";
      std::string oracle_a_text = a_oracle ? show(*a_oracle) : "-";
      std::snprintf(line, sizeof line, "%-2ld %-2ld W:thm3    %-15s %-15s %-15s %s\n", s, t,
                    dec(w_derived).c_str(), show(w_thm3).c_str(), oracle_w_text.c_str(),
                    verdict(w_thm3 == Rational(w_derived)));
      std::cout << line;
      std::snprintf(line, sizeof line, "%-2ld %-2ld A:cor4    %-15s %-15s %-15s %s\n", s, t,
                    show(a_derived).c_str(), show(a_cor4).c_str(), oracle_a_text.c_str(),
                    verdict(a_cor4 == a_derived));
      std::cout << line;
      std::snprintf(line, sizeof line, "%-2ld %-2ld A:cor5    %-15s %-15s %-15s %s\n", s, t,
                    show(a_derived).c_str(), show(a_cor5).c_str(), oracle_a_text.c_str(),
                    verdict(a_cor5 == a_derived));
      std::cout << line;
      std::snprintf(line, sizeof line, "%-2ld %-2ld A:ap5     %-15s %-15s %-15s %s\n", s, t,
                    show(a_derived).c_str(), show(ap5.total).c_str(), oracle_a_text.c_str(),
                    verdict(ap5.total == a_derived));
      std::cout << line;
    }
  }

  json report;
  report["grid"] = grid;
  report["derived_vs_oracle_ok"] = derived_vs_oracle_ok;
  report["notes"] = json::array(
      {"derived values come from the one-step recursion solved in closed form and are verified "
       "against pairwise-BFS Wiener indices and exact hitting-time averages on built graphs",
       "the printed partition-sum total 2*(sum1+sum2) at generation t reproduces the derived "
       "MFPT of generation t-1 exactly at every grid point (see matches_previous_generation)",
       "pseudoinverse hitting times use the sign convention fixed by exact agreement with the "
       "tree oracle; one published index pattern for that identity differs and fails the oracle",
       "the spectral dimension 2*ln(s+1)/ln(3(s+1)) is below 2 for every s >= 2, so the "
       "return-probability criterion d < 2 holds for all s, not only small ones"});
  if (!cfg.out.empty()) write_file(cfg.out, report.dump(2) + "\n");

  require(derived_vs_oracle_ok, errc::internal_inconsistency,
          "derived closed form disagrees with the brute-force oracle");
  return 0;
}

// ---------------------------------------------------------------------------

struct SpectrumConfig {
  SeedOpts seed;
  long s = 0;
  long t = 0;
  std::string out;
  std::int64_t dense_cap = kDenseCap;
};

int cmd_spectrum(const SpectrumConfig& cfg) {
  Tree seed = resolve_seed(cfg.seed);
  const BigInt count = vertex_count(seed.n(), cfg.s, cfg.t);
  require(count >= 2, errc::bad_parameter, "single vertex has no nonzero eigenvalues");
  require(count <= cfg.dense_cap, errc::dense_cap_exceeded,
          "spectrum needs " + dec(count) + " vertices, dense cap is " +
              std::to_string(cfg.dense_cap));

  FractalGraph g = generate(seed, cfg.s, cfg.t, cfg.dense_cap);
  SpectrumResult spec = spectrum(g.tree, cfg.dense_cap);
  std::ostringstream csv;
  write_spectrum_csv(spec, csv);
  write_file(cfg.out, csv.str());

  const BigInt child_count = vertex_count(seed.n(), cfg.s, cfg.t + 1);
  if (child_count <= cfg.dense_cap) {
    FractalGraph child = generate(seed, cfg.s, cfg.t + 1, cfg.dense_cap);
    DecimationReport rep = decimation_report(spec, spectrum(child.tree, cfg.dense_cap), cfg.s);
    rep.parent_generation = cfg.t;
    rep.child_generation = cfg.t + 1;
    std::ostringstream os;
    write_decimation_json(rep, os);
    write_file(cfg.out + ".decimation.json", os.str());
    std::cout << spec.eigenvalues.size() << " eigenvalues; decimation "
              << (rep.all_matched ? "all matched" : "HAS UNMATCHED CHILDREN") << "\n";
    require(rep.all_matched, errc::internal_inconsistency,
            "decimation children missing from the next generation's spectrum");
  } else {
    json skipped;
    skipped["skipped"] = "child generation exceeds the dense cap";
    skipped["child_vertex_count"] = dec(child_count);
    write_file(cfg.out + ".decimation.json", skipped.dump(2) + "\n");
    std::cout << spec.eigenvalues.size() << " eigenvalues; decimation skipped (child generation "
              << dec(child_count) << " vertices > cap)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized Vicsek fractal toolkit: generation, Wiener index, "
               "mean first-passage time, spectra"};
  app.require_subcommand(1);

  GenerateConfig gen_cfg;
  auto* gen = app.add_subcommand("generate", "build a fractal and write edge list + sidecar");
  add_seed_opts(gen, gen_cfg.seed);
  gen->add_option("--s", gen_cfg.s, "functionality parameter")->required();
  gen->add_option("--t", gen_cfg.t, "generation")->required();
  gen->add_option("--out", gen_cfg.out, "edge-list output path")->required();
  gen->add_option("--cap-vertices", gen_cfg.cap, "explicit-construction cap")
      ->check(CLI::PositiveNumber)
      ->envname("VICSEK_CAP_VERTICES");

  AnalyzeConfig ana_cfg;
  auto* ana = app.add_subcommand("analyze", "Wiener index and MFPT by one or more methods");
  add_seed_opts(ana, ana_cfg.seed);
  ana->add_option("--s", ana_cfg.s, "functionality parameter")->required();
  ana->add_option("--t", ana_cfg.t, "generation")->required();
  ana->add_option("--mode", ana_cfg.modes, "comma list of closed|oracle|spectral|mc");
  ana->add_option("--samples", ana_cfg.samples, "walks per sampled pair (mc)");
  ana->add_option("--pair-samples", ana_cfg.pair_samples, "sampled ordered pairs (mc)");
  ana->add_option("--rng-seed", ana_cfg.rng_seed, "random seed (mc)");
  ana->add_option("--out", ana_cfg.out, "report output path (default stdout)");
  ana->add_option("--format", ana_cfg.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  ana->add_option("--cap-vertices", ana_cfg.cap_override, "override all size caps")
      ->check(CLI::PositiveNumber)
      ->envname("VICSEK_CAP_VERTICES");

  ScalingConfig sca_cfg;
  auto* sca = app.add_subcommand("scaling", "delta/lambda scaling CSV over an (s, t) grid");
  add_seed_opts(sca, sca_cfg.seed);
  sca->add_option("--s-list", sca_cfg.s_list, "comma list of s values")->required();
  sca->add_option("--t-max", sca_cfg.t_max, "largest generation")->required();
  sca->add_option("--out", sca_cfg.out, "CSV output path (default stdout)");

  ErrataConfig err_cfg;
  auto* err = app.add_subcommand("errata",
                                 "compare derived, printed and oracle values on star seeds");
  err->add_option("--s-list", err_cfg.s_list, "comma list of s values");
  err->add_option("--t-max", err_cfg.t_max, "largest generation");
  err->add_option("--out", err_cfg.out, "JSON report path");
  err->add_option("--cap-vertices", err_cfg.oracle_cap, "oracle verification cap")
      ->check(CLI::PositiveNumber)
      ->envname("VICSEK_CAP_VERTICES");

  SpectrumConfig spe_cfg;
  auto* spe = app.add_subcommand("spectrum", "Laplacian spectrum CSV + decimation report");
  add_seed_opts(spe, spe_cfg.seed);
  spe->add_option("--s", spe_cfg.s, "functionality parameter")->required();
  spe->add_option("--t", spe_cfg.t, "generation")->required();
  spe->add_option("--out", spe_cfg.out, "spectrum CSV path")->required();
  spe->add_option("--cap-vertices", spe_cfg.dense_cap, "dense matrix cap")
      ->check(CLI::PositiveNumber)
      ->envname("VICSEK_CAP_VERTICES");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_generate(gen_cfg);
    if (*ana) return cmd_analyze(ana_cfg);
    if (*sca) return cmd_scaling(sca_cfg);
    if (*err) return cmd_errata(err_cfg);
    if (*spe) return cmd_spectrum(spe_cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
