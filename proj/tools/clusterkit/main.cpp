// clusterkit command line front end. Every subcommand reads the weights from
// --config (a JSON file holding either a weight spec or {"weights": spec,
// ...}) or --weights (inline JSON), and writes JSON or CSV to --out.
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "clusterkit/asymptotics.hpp"
#include "clusterkit/error.hpp"
#include "clusterkit/hadmissibility.hpp"
#include "clusterkit/harness.hpp"
#include "clusterkit/io.hpp"
#include "clusterkit/sampling.hpp"
#include "clusterkit/special.hpp"

namespace ck = clusterkit;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::string weights;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 42;
  int threads = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON config file");
  app->add_option("--weights", c.weights, "inline JSON weight spec");
  app->add_option("--out", c.out, "output path (default stdout)");
  app->add_option("--format", c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

json load_config(const Common& c) {
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    ck::require(static_cast<bool>(in), ck::ErrorCode::kInvalidParameter,
                "cannot open config " + c.config);
    return json::parse(in);
  }
  if (!c.weights.empty()) return json{{"weights", json::parse(c.weights)}};
  return json{{"weights", {{"kind", "power"}, {"alpha", 1.0}, {"rho", 1.0}}}};
}

ck::WeightSequence load_weights(const json& cfg) {
  return ck::weights_from_json(cfg.contains("weights") ? cfg.at("weights") : cfg);
}

// Values from the config file fill options the user did not pass.
template <typename T>
void fill(const json& cfg, const char* key, const CLI::App* app,
          const char* flag, T& value) {
  const CLI::Option* opt = app->get_option_no_throw(flag);
  if ((opt == nullptr || opt->count() == 0) && cfg.contains(key)) {
    value = cfg.at(key).get<T>();
  }
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(c.out);
  ck::require(static_cast<bool>(f), ck::ErrorCode::kInvalidParameter,
              "cannot write " + c.out);
  f << text;
}

void emit_json(const Common& c, const json& j) { emit(c, j.dump(2)); }

std::vector<std::int64_t> parse_grid(const std::string& s) {
  std::vector<std::int64_t> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stoll(item));
  return v;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  return v;
}

int emit_report(const Common& c, const ck::ExperimentReport& r) {
  if (c.format == "csv") {
    emit(c, ck::to_csv(r));
  } else {
    emit_json(c, ck::to_json(r));
  }
  std::cerr << r.experiment << ": " << (r.verdict ? "pass" : "fail") << " ("
            << r.verdict_reason << ")\n";
  return r.verdict ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clusterkit: weighted set and multiset cluster statistics"};
  app.require_subcommand(1);

  Common c;
  std::string model = "set";
  std::int64_t n = 100;
  int ell = 0;

  auto* count = app.add_subcommand("count", "exact [x^n] and the partition function");
  add_common(count, c);
  count->add_option("--model", model)->check(CLI::IsMember({"set", "multiset"}));
  count->add_option("--n", n, "size")->check(CLI::PositiveNumber);

  std::string est_kind = "count";
  std::int64_t big_n = 0;
  double radius = 0.0;
  std::vector<int> powers;
  auto* estimate = app.add_subcommand("estimate", "asymptotic estimates");
  add_common(estimate, c);
  estimate->add_option("--model", model)->check(CLI::IsMember({"set", "multiset"}));
  estimate->add_option("--n", n)->check(CLI::PositiveNumber);
  estimate->add_option("--kind", est_kind, "count, coeff, moment, bivariate or lemma1")
      ->check(CLI::IsMember({"count", "coeff", "moment", "bivariate", "lemma1"}));
  estimate->add_option("--ell", ell, "power of C (set) or moment order");
  estimate->add_option("--p", powers, "multiset exponents p_1..p_ell");
  estimate->add_option("--N", big_n, "number of clusters (bivariate)");
  estimate->add_option("--r", radius, "radius for lemma1");

  std::string saddle_kind = "set";
  double N_real = 1.0;
  auto* saddle = app.add_subcommand("saddle", "solve a saddle-point equation");
  add_common(saddle, c);
  saddle->add_option("--kind", saddle_kind)
      ->check(CLI::IsMember({"set", "multiset", "ratio"}));
  saddle->add_option("--n", n)->check(CLI::PositiveNumber);
  saddle->add_option("--N", N_real, "cluster count for the ratio equation");

  std::int64_t sample_count = 1000;
  std::string sampler = "auto";
  auto* sample = app.add_subcommand("sample", "draw random cluster structures");
  add_common(sample, c);
  sample->add_option("--model", model)->check(CLI::IsMember({"set", "multiset"}));
  sample->add_option("--n", n)->check(CLI::PositiveNumber);
  sample->add_option("--count", sample_count)->check(CLI::NonNegativeNumber);
  sample->add_option("--sampler", sampler)
      ->check(CLI::IsMember({"auto", "boltzmann", "dp"}));

  auto* gumbel = app.add_subcommand("gumbel-scale", "largest-cluster scaling");
  add_common(gumbel, c);
  gumbel->add_option("--model", model)->check(CLI::IsMember({"set", "multiset"}));
  gumbel->add_option("--n", n)->check(CLI::PositiveNumber);

  double beta = 0.0, gamma = 0.0, chi = 1e-3;
  auto* em = app.add_subcommand("em-lemma", "sum_k k^gamma e^{-chi k}/(1-e^{-chi k})^beta");
  add_common(em, c);
  em->add_option("--beta", beta)->check(CLI::NonNegativeNumber);
  em->add_option("--gamma", gamma)->check(CLI::NonNegativeNumber);
  em->add_option("--chi", chi)->check(CLI::PositiveNumber);

  std::optional<double> delta, theta0, probe_r, probe_chi;
  int grid = 2000;
  auto* hadm = app.add_subcommand("hadm-probe", "numeric H1-H3 diagnostics");
  add_common(hadm, c);
  hadm->add_option("--model", model)->check(CLI::IsMember({"set", "multiset"}));
  hadm->add_option("--ell", ell);
  hadm->add_option("--p", powers);
  hadm->add_option("--chi", probe_chi);
  hadm->add_option("--r", probe_r);
  hadm->add_option("--delta", delta);
  hadm->add_option("--theta0", theta0);
  hadm->add_option("--grid", grid)->check(CLI::PositiveNumber);

  std::string n_grid = "100,200,400,800";
  double tolerance = -1.0;
  std::string mode = "exact";
  std::int64_t samples = 10000;
  std::int64_t s_max = 3;
  int ell_max = 2;
  std::string t_grid = "-1.5,-1,0,1,1.5";
  double n_exponent = 0.5;

  auto add_verify = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, c);
    sub->add_option("--n-grid", n_grid, "comma-separated sizes");
    sub->add_option("--tolerance", tolerance);
    return sub;
  };
  auto* v_coef = add_verify("verify-coefficients", "exact vs estimated coefficients");
  v_coef->add_option("--model", model)->check(CLI::IsMember({"set", "multiset"}));
  v_coef->add_option("--ell", ell);
  auto* v_gum = add_verify("verify-gumbel", "largest-cluster CDF vs Gumbel");
  v_gum->add_option("--model", model)->check(CLI::IsMember({"set", "multiset"}));
  v_gum->add_option("--mode", mode)->check(CLI::IsMember({"exact", "sampled"}));
  v_gum->add_option("--samples", samples);
  auto* v_small = add_verify("verify-smallest", "P(M > s) vs its limit");
  v_small->add_option("--model", model)->check(CLI::IsMember({"set", "multiset"}));
  v_small->add_option("--s-max", s_max);
  auto* v_mom = add_verify("verify-moments", "moments of the number of clusters");
  v_mom->add_option("--model", model)->check(CLI::IsMember({"set", "multiset"}));
  v_mom->add_option("--ell-max", ell_max);
  auto* v_llt = add_verify("verify-llt", "local limit law of the number of clusters");
  v_llt->add_option("--model", model)->check(CLI::IsMember({"set", "multiset"}));
  v_llt->add_option("--t-grid", t_grid);
  auto* v_biv = add_verify("verify-bivariate", "[x^n y^N] S(x,y) vs its estimate");
  v_biv->add_option("--N-exponent", n_exponent, "N = floor(n^e)");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    const json cfg = load_config(c);
    const ck::WeightSequence w = load_weights(cfg);
    fill(cfg, "model", sub, "--model", model);
    fill(cfg, "n", sub, "--n", n);
    const ck::Model m = ck::model_from_string(model);
    const ck::RunOptions opt{c.threads, c.seed};

    if (sub == count) {
      const ck::LogSeries s = m == ck::Model::kSet
                                  ? ck::series_exp(ck::truncate_C(w, n))
                                  : ck::euler_transform(w, n);
      if (c.format == "csv") {
        emit(c, ck::series_to_csv(s));
      } else {
        const double lc = s.log_coeff(n);
        const double lz = m == ck::Model::kSet
                              ? lc + std::lgamma(static_cast<double>(n) + 1.0)
                              : lc;
        emit_json(c, {{"n", n},
                      {"model", model},
                      {"log_coefficient", lc},
                      {"coefficient", std::exp(lc)},
                      {"log_partition_function", lz},
                      {"partition_function", std::exp(lz)}});
      }
      return 0;
    }
    if (sub == estimate) {
      ck::AsymptoticEstimate e;
      if (est_kind == "count") {
        e = ck::count_estimate(w, n, m);
      } else if (est_kind == "coeff") {
        e = m == ck::Model::kSet ? ck::coeff_estimate_set(w, n, ell)
                                 : ck::coeff_estimate_multiset(w, n, powers);
      } else if (est_kind == "moment") {
        e = ck::moment_estimate(w, n, ell, m);
      } else if (est_kind == "bivariate") {
        e = ck::bivariate_set_estimate(w, n, big_n);
      } else {
        const auto f = m == ck::Model::kSet ? ck::FunctionSpec::set(ell)
                                            : ck::FunctionSpec::multiset(powers);
        e = ck::hayman_coeff_general(f, w, n, radius);
      }
      emit_json(c, ck::to_json(e));
      return 0;
    }
    if (sub == saddle) {
      ck::SaddlePoint sp;
      if (saddle_kind == "set") {
        sp = ck::solve_set_saddle(w, static_cast<double>(n));
      } else if (saddle_kind == "multiset") {
        sp = ck::solve_multiset_saddle(w, static_cast<double>(n));
      } else {
        sp = ck::solve_ratio_saddle(w, static_cast<double>(n), N_real);
      }
      emit_json(c, ck::to_json(sp));
      return 0;
    }
    if (sub == sample) {
      ck::SamplerConfig sc;
      sc.model = m;
      sc.n = n;
      sc.seed = c.seed;
      const auto choice = sampler == "boltzmann" ? ck::SamplerChoice::kBoltzmann
                          : sampler == "dp"      ? ck::SamplerChoice::kExactDp
                                                 : ck::SamplerChoice::kAuto;
      const auto draws = ck::sample_many(w, sc, sample_count, choice, c.threads);
      if (c.format == "csv") {
        emit(c, ck::samples_to_csv(draws));
      } else {
        json arr = json::array();
        for (const auto& cs : draws) {
          const auto st = ck::statistics(cs);
          arr.push_back({{"kappa", st.kappa}, {"smallest", st.smallest},
                         {"largest", st.largest}, {"counts", cs.counts()}});
        }
        emit_json(c, {{"n", n}, {"model", model}, {"seed", c.seed}, {"samples", arr}});
      }
      return 0;
    }
    if (sub == gumbel) {
      const auto g = ck::gumbel_scaling(w, n, m);
      json pts = json::array();
      for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        pts.push_back({{"t", t}, {"s", g.s_of_t(t)}, {"cdf", ck::gumbel_cdf(t)}});
      }
      emit_json(c, {{"beta_n", g.beta_n},
                    {"lnX", g.lnX},
                    {"model", ck::to_string(g.model)},
                    {"saddle", ck::to_json(g.saddle)},
                    {"points", pts}});
      return 0;
    }
    if (sub == em) {
      const auto p = ck::euler_maclaurin_sum_asympt(beta, gamma, chi);
      const double direct = ck::em_direct_sum(beta, gamma, chi);
      emit_json(c, {{"beta", beta},
                    {"gamma", gamma},
                    {"chi", chi},
                    {"regime", ck::to_string(p.regime)},
                    {"constant", p.constant},
                    {"predicted", p.value},
                    {"direct_sum", direct},
                    {"ratio", p.value / direct}});
      return 0;
    }
    if (sub == hadm) {
      const auto f = m == ck::Model::kSet ? ck::FunctionSpec::set(ell)
                                          : ck::FunctionSpec::multiset(powers);
      ck::require(probe_chi.has_value() != probe_r.has_value(),
                  ck::ErrorCode::kInvalidParameter, "pass exactly one of --chi, --r");
      const auto rep = probe_chi
                           ? ck::h_admissibility_diagnostics(f, w, *probe_chi, delta,
                                                             grid, c.threads)
                           : ck::h_admissibility_at_radius(f, w, *probe_r, theta0,
                                                           grid, c.threads);
      emit_json(c, ck::to_json(rep));
      return 0;
    }

    fill(cfg, "n_grid", sub, "--n-grid", n_grid);
    const auto grid_n = parse_grid(n_grid);
    auto tol = [&](double fallback) { return tolerance >= 0.0 ? tolerance : fallback; };
    if (sub == v_coef) {
      return emit_report(c, ck::verify_coefficients(w, m, grid_n, ell, tol(0.10), opt));
    }
    if (sub == v_gum) {
      const auto md = mode == "exact" ? ck::CdfMode::kExact : ck::CdfMode::kSampled;
      return emit_report(c, ck::verify_gumbel(w, m, grid_n, md, samples, tol(0.08), opt));
    }
    if (sub == v_small) {
      return emit_report(c, ck::verify_smallest(w, m, grid_n, s_max, tol(0.02), opt));
    }
    if (sub == v_mom) {
      return emit_report(c, ck::verify_moments(w, m, grid_n, ell_max, tol(0.10), opt));
    }
    if (sub == v_llt) {
      return emit_report(
          c, ck::verify_llt(w, m, grid_n, parse_reals(t_grid), tol(0.15), opt));
    }
    if (sub == v_biv) {
      return emit_report(c, ck::verify_bivariate(w, grid_n,
                                                 ck::NRule::floor_power(n_exponent),
                                                 tol(0.10), opt));
    }
  } catch (const ck::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
