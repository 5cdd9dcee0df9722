// clades: exact tables, distributions, and Monte Carlo experiments for
// maximal clade counts on random binary search trees.

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clades/csvjson.hpp"
#include "clades/enumerate.hpp"
#include "clades/exact.hpp"
#include "clades/mc.hpp"
#include "clades/stats.hpp"
#include "clades/verify.hpp"
#include "json.hpp"

using json = nlohmann::json;
using namespace clades;

namespace {

void deliver(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file_atomic(out_path, content);
  }
}

void echo_config(const json& cfg) { std::cerr << "config: " << cfg.dump() << "\n"; }

std::string csv_with_config(const json& cfg, const std::string& header,
                            const std::vector<std::string>& rows) {
  std::string out = "# config: " + cfg.dump() + "\n" + header + "\n";
  for (const auto& r : rows) {
    out += r;
    out += '\n';
  }
  return out;
}

json config_json(const SimConfig& cfg) {
  json j;
  j["model"] = model_name(cfg.model);
  j["n"] = cfg.n;
  j["lambda"] = cfg.lambda;
  j["cap"] = cfg.cap;
  j["cutoff"] = cfg.cutoff ? json(*cfg.cutoff) : json(nullptr);
  j["chain_depth"] = cfg.chain_depth;
  j["chain_record"] = cfg.chain_record;
  j["replicates"] = cfg.replicates;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["record_gh"] = cfg.record_gh;
  j["store_raw"] = cfg.store_raw.value_or(false);
  j["abs_p"] = cfg.abs_p;
  return j;
}

int cmd_constants(std::int64_t nmax, const std::vector<double>& lambdas, std::int64_t trunc,
                  const std::string& out, const std::string& format) {
  json cfg{{"command", "constants"}, {"nmax", nmax}, {"lambda", lambdas}, {"trunc", trunc}};
  echo_config(cfg);
  std::vector<std::pair<std::string, double>> rows;
  const double closed = alpha_closed();
  const double series = alpha_series(nmax);
  rows.emplace_back("alpha_closed", closed);
  rows.emplace_back("alpha_series", series);
  rows.emplace_back("alpha_series_abs_err", std::abs(series - closed));
  double alt = 0.0;
  for (int k = 1; k <= 30; ++k) alt += (k % 2 == 1 ? 1.0 : -1.0) * e_fk_ct(k);
  rows.emplace_back("chain_alt_sum_30", alt);
  rows.emplace_back("kummer_1f1(1;1;-2)", kummer_1f1_unit(1.0, -2.0));
  rows.emplace_back("kummer_1f1(1;2;-2)", kummer_1f1_unit(2.0, -2.0));
  std::optional<ExactTables> tables;
  for (const double lambda : lambdas) {
    const std::string tag = "(lambda=" + format_g17(lambda) + ")";
    rows.emplace_back("kummer_1f1(1;lambda;-2)" + tag, kummer_1f1_unit(lambda, -2.0));
    rows.emplace_back("e_f_ct" + tag, e_f_ct_lambda(lambda));
    for (int k = 1; k <= 4; ++k)
      rows.emplace_back("e_f" + std::to_string(k) + "_ct" + tag, e_fk_ct_lambda(k, lambda));
    if (lambda > 1.0) {
      rows.emplace_back("e_F_ct" + tag, e_F_ct_lambda(lambda));
      if (!tables) tables = build_mu_nu(trunc);
      rows.emplace_back("genfunc_residual" + tag, genfunc_residual(lambda, trunc, *tables));
    }
  }
  if (format == "json") {
    json j{{"config", cfg}};
    for (const auto& [k, v] : rows) j["values"][k] = v;
    deliver(j.dump(2) + "\n", out);
  } else {
    std::vector<std::string> lines;
    for (const auto& [k, v] : rows) lines.push_back(k + "," + format_g17(v));
    deliver(csv_with_config(cfg, "name,value", lines), out);
  }
  return 0;
}

int cmd_exact(std::int64_t nmax, std::int64_t psi_max, std::optional<std::int64_t> cutoff,
              const std::vector<std::int64_t>& var_at, const std::string& out,
              const std::string& format) {
  if (psi_max < 0) psi_max = std::min<std::int64_t>(nmax, 20000);
  json cfg{{"command", "exact"},
           {"nmax", nmax},
           {"psi_max", psi_max},
           {"cutoff", cutoff ? json(*cutoff) : json(nullptr)},
           {"var_at", var_at}};
  echo_config(cfg);
  ExactTables t = build_mu_nu(nmax);
  if (psi_max >= 1) build_psi(psi_max, t);
  std::optional<CutoffTables> ct;
  if (cutoff) ct = build_cutoff_tables(psi_max >= 1 ? psi_max : nmax, *cutoff, t);

  auto var_g_at = [&](std::int64_t n) -> std::optional<double> {
    if (n < 1 || n > t.psi_max) return std::nullopt;
    return var_G_exact(n, t);
  };
  auto var_gp_at = [&](std::int64_t n) -> std::optional<double> {
    if (!ct || n < 1 || n > ct->nmax) return std::nullopt;
    return var_Gprime_exact(n, *ct);
  };

  if (format == "json") {
    json j{{"config", cfg}};
    auto& rows = j["rows"] = json::array();
    for (std::int64_t n = 0; n <= nmax; ++n) {
      const auto i = static_cast<std::size_t>(n);
      json row{{"n", n}, {"mu", t.mu[i]}, {"nu", t.nu[i]}};
      if (n <= t.psi_max) row["psi"] = t.psi[i];
      if (const auto v = var_g_at(n)) row["var_g"] = *v;
      if (ct && n <= ct->nmax) {
        row["nu_cut"] = ct->nu_cut[i];
        row["psi_cut"] = ct->psi_cut[i];
        if (const auto v = var_gp_at(n)) row["var_gprime"] = *v;
      }
      rows.push_back(std::move(row));
    }
    for (const auto n : var_at) {
      json row{{"n", n}};
      if (const auto v = var_g_at(n)) row["var_g"] = *v;
      if (const auto v = var_gp_at(n)) row["var_gprime"] = *v;
      j["var"].push_back(row);
    }
    deliver(j.dump(2) + "\n", out);
  } else {
    std::string header = "n,mu,nu,psi,var_g";
    if (ct) header += ",nu_cut,psi_cut,var_gprime";
    std::vector<std::string> lines;
    for (std::int64_t n = 0; n <= nmax; ++n) {
      const auto i = static_cast<std::size_t>(n);
      std::string line = std::to_string(n) + "," + format_g17(t.mu[i]) + "," + format_g17(t.nu[i]);
      line += n <= t.psi_max ? "," + format_g17(t.psi[i]) : ",";
      const auto vg = var_g_at(n);
      line += vg ? "," + format_g17(*vg) : ",";
      if (ct) {
        line += "," + format_g17(ct->nu_cut[i]) + "," + format_g17(ct->psi_cut[i]);
        const auto vgp = var_gp_at(n);
        line += vgp ? "," + format_g17(*vgp) : ",";
      }
      lines.push_back(std::move(line));
    }
    deliver(csv_with_config(cfg, header, lines), out);
  }
  return 0;
}

int cmd_dist(std::int64_t cap, std::vector<std::int64_t> ns, const std::vector<double>& ps,
             const std::string& out, const std::string& pmf_out, const std::string& format) {
  json cfg{{"command", "dist"}, {"cap", cap}, {"n", ns}, {"p", ps}};
  echo_config(cfg);
  const FDist d = build_f_dist(cap);
  if (ns.empty()) ns.push_back(cap);
  for (const auto n : ns)
    if (n < 1 || n > cap) throw std::runtime_error("--n must lie in [1, cap]");

  // moments table for every n up to cap
  std::string header = "n,mean,m2,m3,m4,m5,m6";
  for (const double p : ps)
    header += ",abs_p" + format_g17(p) + ",f_abs_p" + format_g17(p) + ",sum_f_abs_p" + format_g17(p);
  std::vector<std::string> lines;
  json jrows = json::array();
  for (std::int64_t n = 1; n <= cap; ++n) {
    std::string line = std::to_string(n) + "," + format_g17(fdist_mean(n, d));
    json jrow{{"n", n}, {"mean", fdist_mean(n, d)}};
    for (int k = 2; k <= 6; ++k) {
      const double m = central_moment(n, k, d);
      line += "," + format_g17(m);
      jrow["m" + std::to_string(k)] = m;
    }
    for (const double p : ps) {
      const double a = abs_central_moment(n, p, d);
      const double fa = f_abs_moment(n, p, d);
      const double sa = sum_f_abs_exact(n, p, d);
      line += "," + format_g17(a) + "," + format_g17(fa) + "," + format_g17(sa);
      jrow["abs_p" + format_g17(p)] = a;
      jrow["f_abs_p" + format_g17(p)] = fa;
      jrow["sum_f_abs_p" + format_g17(p)] = sa;
    }
    lines.push_back(std::move(line));
    jrows.push_back(std::move(jrow));
  }

  if (format == "json") {
    json j{{"config", cfg}, {"moments", jrows}};
    if (!pmf_out.empty()) {
      for (const auto n : ns) {
        json row = json::array();
        for (const double p : d.row(n)) row.push_back(p);
        j["pmf"][std::to_string(n)] = row;
      }
    }
    deliver(j.dump(2) + "\n", out);
  } else {
    deliver(csv_with_config(cfg, header, lines), out);
  }
  if (!pmf_out.empty()) {
    std::vector<std::string> pmf_lines;
    for (const auto n : ns) {
      const auto& row = d.row(n);
      for (std::size_t m = 0; m < row.size(); ++m)
        pmf_lines.push_back(std::to_string(n) + "," + std::to_string(m) + "," + format_g17(row[m]));
    }
    write_file_atomic(pmf_out, csv_with_config(cfg, "n,m,prob", pmf_lines));
  }
  return 0;
}

int cmd_simulate(SimConfig cfg, const std::string& out, const std::string& format,
                 const std::string& raw_out, const std::string& raw_key) {
  const SimConfig resolved = cfg.resolved();
  const json jcfg = config_json(resolved);
  echo_config(jcfg);
  std::optional<ExactTables> tables;
  if (resolved.record_gh) {
    const std::int64_t need = resolved.model == Model::ct_clock ? resolved.cap : resolved.n;
    tables = build_mu_nu(std::max<std::int64_t>(need, 1));
  }
  const ExperimentResult res = run_experiment(resolved, tables ? &*tables : nullptr);

  const bool have_raw = !res.raw.empty();
  auto diag_for = [&](const std::string& key) -> std::optional<Diagnostics> {
    if (!have_raw) return std::nullopt;
    const auto& raw = res.raw.at(key);
    const MomentSummary& s = res.summaries.at(key);
    if (!(s.stddev() > 0.0)) return std::nullopt;
    return normality(raw, s.mean, s.stddev());
  };

  if (format == "json") {
    json j{{"config", jcfg}, {"cap_exceeded", res.cap_exceeded}};
    for (const auto& key : res.keys) {
      const auto& s = res.summaries.at(key);
      json row{{"count", s.count}, {"mean", s.mean}, {"min", s.min}, {"max", s.max}};
      for (int k = 2; k <= 6; ++k) row["m" + std::to_string(k)] = s.moment(k);
      if (const auto d = diag_for(key)) {
        row["ks"] = d->ks;
        row["skewness"] = d->skewness;
        row["excess_kurtosis"] = d->excess_kurtosis;
      }
      if (res.abs_moments.count(key) != 0u)
        for (const auto& [p, v] : res.abs_moments.at(key)) row["abs_p" + format_g17(p)] = v;
      j["results"][key] = std::move(row);
    }
    deliver(j.dump(2) + "\n", out);
  } else {
    std::vector<std::string> lines;
    for (const auto& key : res.keys) {
      const auto& s = res.summaries.at(key);
      std::string line = key + "," + std::to_string(s.count) + "," + format_g17(s.mean);
      for (int k = 2; k <= 6; ++k) line += "," + format_g17(s.moment(k));
      if (const auto d = diag_for(key))
        line += "," + format_g17(d->ks) + "," + format_g17(d->skewness) + "," +
                format_g17(d->excess_kurtosis);
      else
        line += ",,,";
      lines.push_back(std::move(line));
    }
    deliver(csv_with_config(jcfg, "functional,count,mean,m2,m3,m4,m5,m6,ks,skew,kurt", lines), out);
  }
  if (!raw_out.empty()) {
    if (!have_raw) throw std::runtime_error("--raw-out requires store_raw");
    const auto it = res.raw.find(raw_key);
    if (it == res.raw.end()) throw std::runtime_error("unknown raw key " + raw_key);
    std::string content = raw_key + "\n";
    for (const double v : it->second) content += format_g17(v) + "\n";
    write_file_atomic(raw_out, content);
  }
  return 0;
}

int cmd_verify(bool quick, int threads, std::uint64_t seed) {
  json cfg{{"command", "verify"}, {"quick", quick}, {"threads", threads}, {"seed", seed}};
  echo_config(cfg);
  VerifyOptions opt;
  opt.quick = quick;
  opt.threads = threads;
  opt.seed = seed;
  const auto results = run_verification(opt, std::cout);
  std::string failing;
  int failed = 0;
  for (const auto& r : results) {
    if (r.pass) continue;
    ++failed;
    failing += (failing.empty() ? "" : ", ") + std::to_string(r.id);
  }
  std::cout << (failed == 0 ? "VERIFICATION PASSED" : "VERIFICATION FAILED") << " ("
            << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
            << " criteria" << (failed ? "; failing: " + failing : "") << ")\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximal-clade statistics for random binary search trees"};
  app.require_subcommand(1);
  int exit_code = 0;

  // constants
  auto* constants = app.add_subcommand("constants", "alpha, Kummer values, lambda formulas");
  std::int64_t c_nmax = 1000000, c_trunc = 100000;
  std::vector<double> c_lambdas;
  std::string c_out, c_format = "csv";
  constants->add_option("--nmax", c_nmax, "series truncation")->check(CLI::PositiveNumber);
  constants->add_option("--lambda", c_lambdas, "stopping rates to evaluate");
  constants->add_option("--trunc", c_trunc, "generating-function truncation");
  constants->add_option("--out", c_out, "output file (atomic write)");
  constants->add_option("--format", c_format)->check(CLI::IsMember({"csv", "json"}));
  constants->callback(
      [&] { exit_code = cmd_constants(c_nmax, c_lambdas, c_trunc, c_out, c_format); });

  // exact
  auto* exact = app.add_subcommand("exact", "mu/nu/psi tables and variance identities");
  std::int64_t e_nmax = 1000, e_psi_max = -1;
  std::optional<std::int64_t> e_cutoff;
  std::vector<std::int64_t> e_var_at;
  std::string e_out, e_format = "csv";
  exact->add_option("--nmax", e_nmax, "table size")->required()->check(CLI::PositiveNumber);
  exact->add_option("--psi-max", e_psi_max, "psi table size (default min(nmax, 20000))");
  exact->add_option("--cutoff", e_cutoff, "also build the cutoff tables at N");
  exact->add_option("--var-g", e_var_at, "report Var G (and Var G') at these n");
  exact->add_option("--out", e_out, "output file (atomic write)");
  exact->add_option("--format", e_format)->check(CLI::IsMember({"csv", "json"}));
  exact->callback(
      [&] { exit_code = cmd_exact(e_nmax, e_psi_max, e_cutoff, e_var_at, e_out, e_format); });

  // dist
  auto* dist = app.add_subcommand("dist", "exact distribution of F and its moments");
  std::int64_t d_cap = 512;
  std::vector<std::int64_t> d_ns;
  std::vector<double> d_ps;
  std::string d_out, d_pmf_out, d_format = "csv";
  dist->add_option("--cap", d_cap, "largest n (<= 512)")->check(CLI::PositiveNumber);
  dist->add_option("--n", d_ns, "pmf rows to emit (default: cap)");
  dist->add_option("--p", d_ps, "absolute moment orders");
  dist->add_option("--out", d_out, "moments output file");
  dist->add_option("--pmf-out", d_pmf_out, "pmf output file (csv)");
  dist->add_option("--format", d_format)->check(CLI::IsMember({"csv", "json"}));
  dist->callback([&] { exit_code = cmd_dist(d_cap, d_ns, d_ps, d_out, d_pmf_out, d_format); });

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo experiments");
  SimConfig s_cfg;
  std::string s_model = "bst-split";
  std::int64_t s_cutoff = -1;
  std::string s_out, s_format = "csv", s_raw_out, s_raw_key = "F";
  bool s_gh = false;
  int s_store_raw = -1;
  sim->add_option("--model", s_model)->check(CLI::IsMember({"bst-split", "bst-insert", "ct-clock"}));
  sim->add_option("--n", s_cfg.n, "tree size (bst models)");
  sim->add_option("--samples", s_cfg.replicates, "replicates")->required();
  sim->add_option("--seed", s_cfg.seed, "rng seed");
  sim->add_option("--threads", s_cfg.workers, "worker threads");
  sim->add_option("--lambda", s_cfg.lambda, "ct-clock stopping rate");
  sim->add_option("--cap", s_cfg.cap, "ct-clock node cap");
  sim->add_option("--cutoff", s_cutoff, "small-clade cutoff N (default ceil(sqrt(n)))");
  sim->add_option("--chain-depth", s_cfg.chain_depth, "chain order K");
  sim->add_option("--chain-record", s_cfg.chain_record, "record Fk/fk up to this order");
  sim->add_option("--p", s_cfg.abs_p, "absolute central moment orders");
  sim->add_flag("--gh", s_gh, "record the G/H decomposition");
  sim->add_option("--store-raw", s_store_raw, "force raw retention (0/1)");
  sim->add_option("--resample-cap", s_cfg.cap_policy,
                  "0: propagate cap hits, 1: resample")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, CapPolicy>{{"0", CapPolicy::propagate}, {"1", CapPolicy::resample}}));
  sim->add_option("--out", s_out, "output file (atomic write)");
  sim->add_option("--format", s_format)->check(CLI::IsMember({"csv", "json"}));
  sim->add_option("--raw-out", s_raw_out, "single-column raw sample file");
  sim->add_option("--raw-key", s_raw_key, "functional for --raw-out");
  sim->callback([&] {
    s_cfg.model = *model_from_name(s_model);
    s_cfg.record_gh = s_gh;
    if (s_cutoff >= 0) s_cfg.cutoff = s_cutoff;
    if (s_store_raw >= 0) s_cfg.store_raw = s_store_raw != 0;
    exit_code = cmd_simulate(s_cfg, s_out, s_format, s_raw_out, s_raw_key);
  });

  // verify
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  bool v_quick = false;
  int v_threads = 0;
  std::uint64_t v_seed = 20250809;
  verify->add_flag("--quick", v_quick, "reduced replicate counts");
  verify->add_option("--threads", v_threads, "worker threads (0: all cores)");
  verify->add_option("--seed", v_seed, "rng seed");
  verify->callback([&] { exit_code = cmd_verify(v_quick, v_threads, v_seed); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion")
      return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
