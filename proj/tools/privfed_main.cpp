// Copyright 2026 The PrivFed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line driver: parameter calculators, mechanism self-tests,
// reconstruction calculators, accounting, and experiment runs. All
// numeric output uses 17 significant digits; every subcommand is
// deterministic under a fixed --seed. Exit code 0 iff all requested
// checks pass.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "privfed/accountant.hpp"
#include "privfed/common.hpp"
#include "privfed/io.hpp"
#include "privfed/parallel.hpp"
#include "privfed/privunit.hpp"
#include "privfed/privunit_inf.hpp"
#include "privfed/reconguard.hpp"
#include "privfed/rng.hpp"
#include "privfed/scalarmech.hpp"
#include "privfed/separated.hpp"
#include "privfed/simdriver.hpp"

namespace {

using privfed::io::format_double;

struct ParamsArgs {
  double eps1 = 0.0;
  double eps2 = 0.0;
  int64_t d = 0;
  std::string split = "experiment";
  double r_max = 1.0;
  std::string out;
};

int run_params(const ParamsArgs& args) {
  double gamma = 0.0;
  double p = 0.0;
  double certified = 0.0;
  if (args.split == "theory") {
    gamma = privfed::privunit::solve_gamma(args.eps1, args.d);
    p = 0.5;
    certified = args.eps1;
  } else if (args.split == "experiment") {
    gamma = privfed::privunit::solve_gamma(0.99 * args.eps1, args.d);
    p = privfed::sigmoid(0.01 * args.eps1);
    certified = args.eps1;
  } else if (args.split == "logistic") {
    gamma = privfed::privunit::solve_gamma(13.0 * args.eps1 / 16.0, args.d);
    p = privfed::sigmoid(args.eps1 / 16.0);
    certified = 13.0 * args.eps1 / 16.0 + args.eps1 / 16.0;
  } else {
    std::fprintf(stderr, "unknown --split '%s'\n", args.split.c_str());
    return 2;
  }
  double m = 0.0;
  try {
    m = privfed::privunit::norm_constant(args.d, gamma, p);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "infeasible parameters: %s\n", e.what());
    return 1;
  }
  std::printf("gamma=%s\n", format_double(gamma).c_str());
  std::printf("p=%s\n", format_double(p).c_str());
  std::printf("m=%s\n", format_double(m).c_str());
  std::printf("znorm=%s\n", format_double(1.0 / m).c_str());
  std::printf("eps_direction=%s\n", format_double(certified).c_str());
  if (args.eps2 > 0.0) {
    std::printf("eps_total=%s\n", format_double(certified + args.eps2).c_str());
    std::printf("k_magnitude=%lld\n",
                static_cast<long long>(privfed::scalarmech::k_for_eps(args.eps2)));
  }
  if (!args.out.empty()) {
    privfed::io::CsvWriter csv(
        args.out, "privfed.params.v1",
        privfed::io::manifest_hash("params", 0),
        {"eps1", "d", "split", "gamma", "p", "m", "znorm"});
    csv.write_row({format_double(args.eps1), std::to_string(args.d),
                   args.split, format_double(gamma), format_double(p),
                   format_double(m), format_double(1.0 / m)});
  }
  return 0;
}

struct MechTestArgs {
  std::string mech = "privunit";
  int64_t d = 20;
  double eps = 4.0;
  int64_t n = 100000;
  uint64_t seed = 1;
  double r_max = 1.0;
  double alpha = 0.05;
  double nu = 2.0;
};

int check(bool ok, const char* what, double value, double bound) {
  std::printf("%s %s: value=%s bound=%s\n", ok ? "PASS" : "FAIL", what,
              format_double(value).c_str(), format_double(bound).c_str());
  return ok ? 0 : 1;
}

int run_mech_test(const MechTestArgs& args) {
  int failures = 0;
  privfed::Rng rng(args.seed);
  if (args.mech == "privunit") {
    const double gamma = privfed::privunit::solve_gamma(args.eps, args.d);
    const auto params =
        privfed::privunit::make_params(args.d, gamma, 0.5, args.eps);
    const double ratio = privfed::privunit::privacy_log_ratio(params);
    failures += check(ratio <= args.eps + 1e-9, "privacy_ratio", ratio,
                      args.eps);
    std::vector<double> u(static_cast<size_t>(args.d), 0.0);
    u[0] = 1.0;
    std::vector<double> out(static_cast<size_t>(args.d));
    std::vector<double> mean(static_cast<size_t>(args.d), 0.0);
    double worst_norm_dev = 0.0;
    for (int64_t i = 0; i < args.n; ++i) {
      privfed::privunit::sample(u, params, rng, out);
      double sq = 0.0;
      for (int64_t j = 0; j < args.d; ++j) {
        mean[static_cast<size_t>(j)] += out[static_cast<size_t>(j)];
        sq += out[static_cast<size_t>(j)] * out[static_cast<size_t>(j)];
      }
      worst_norm_dev = std::max(
          worst_norm_dev, std::abs(std::sqrt(sq) * params.m - 1.0));
    }
    const double band =
        3.5 / (params.m * std::sqrt(static_cast<double>(args.n)));
    double worst_bias = 0.0;
    for (int64_t j = 0; j < args.d; ++j) {
      worst_bias = std::max(
          worst_bias, std::abs(mean[static_cast<size_t>(j)] /
                                   static_cast<double>(args.n) -
                               u[static_cast<size_t>(j)]));
    }
    failures += check(worst_bias <= band, "bias", worst_bias, band);
    failures += check(worst_norm_dev <= 1e-9, "norm_shell", worst_norm_dev,
                      1e-9);
    std::printf("m=%s znorm=%s gamma=%s\n", format_double(params.m).c_str(),
                format_double(1.0 / params.m).c_str(),
                format_double(gamma).c_str());
  } else if (args.mech == "privunitinf") {
    const auto kappa = privfed::privunit_inf::solve_kappa(args.eps, args.d);
    if (!kappa.has_value()) {
      std::fprintf(stderr, "no feasible kappa at eps=%s, d=%lld\n",
                   format_double(args.eps).c_str(),
                   static_cast<long long>(args.d));
      return 2;
    }
    const auto params =
        privfed::privunit_inf::make_params(args.d, *kappa, 0.5, args.eps);
    const double ratio = privfed::privunit_inf::privacy_log_ratio(params);
    failures += check(ratio <= args.eps + 1e-9, "privacy_ratio", ratio,
                      args.eps);
    std::vector<double> u(static_cast<size_t>(args.d));
    for (int64_t j = 0; j < args.d; ++j) {
      u[static_cast<size_t>(j)] =
          std::sin(1.7 * static_cast<double>(j) + 0.4) * 0.8;
    }
    std::vector<double> out(static_cast<size_t>(args.d));
    std::vector<double> mean(static_cast<size_t>(args.d), 0.0);
    for (int64_t i = 0; i < args.n; ++i) {
      privfed::privunit_inf::sample(u, params, rng, out);
      for (int64_t j = 0; j < args.d; ++j) {
        mean[static_cast<size_t>(j)] += out[static_cast<size_t>(j)];
      }
    }
    const double band =
        3.5 / (params.m * std::sqrt(static_cast<double>(args.n)));
    double worst_bias = 0.0;
    for (int64_t j = 0; j < args.d; ++j) {
      worst_bias = std::max(
          worst_bias, std::abs(mean[static_cast<size_t>(j)] /
                                   static_cast<double>(args.n) -
                               u[static_cast<size_t>(j)]));
    }
    failures += check(worst_bias <= band, "bias", worst_bias, band);
    std::printf("kappa=%lld m=%s\n", static_cast<long long>(*kappa),
                format_double(params.m).c_str());
  } else if (args.mech == "scalardp") {
    const int64_t k = privfed::scalarmech::k_for_eps(args.eps);
    const auto params =
        privfed::scalarmech::make_scalar_dp(args.eps, k, args.r_max);
    // Exact enumeration over the outcome tree on a 33-point grid.
    const double ee = std::exp(args.eps);
    const double keep = ee / (ee + static_cast<double>(k));
    const double other = (1.0 - keep) / static_cast<double>(k);
    double worst_bias = 0.0;
    double worst_gap = privfed::kNegInf;
    for (int i = 0; i <= 32; ++i) {
      const double r = args.r_max * static_cast<double>(i) / 32.0;
      const double x = static_cast<double>(k) * r / args.r_max;
      const double fl = std::floor(x);
      const double frac = x - fl;
      double ez = 0.0;
      double ez2 = 0.0;
      for (int up = 0; up <= 1; ++up) {
        const double pj = up == 1 ? frac : 1.0 - frac;
        if (pj == 0.0) continue;
        const int64_t j = static_cast<int64_t>(fl) + up;
        for (int64_t jh = 0; jh <= k; ++jh) {
          const double pr = jh == j ? keep : other;
          const double z = params.a * (static_cast<double>(jh) - params.b);
          ez += pj * pr * z;
          ez2 += pj * pr * z * z;
        }
      }
      worst_bias = std::max(worst_bias, std::abs(ez - r));
      const double var = ez2 - ez * ez;
      const double kk = static_cast<double>(k);
      const double bound =
          (kk + 1.0) / (ee - 1.0) *
              (r * r + args.r_max * args.r_max / (4.0 * kk * kk) +
               (2.0 * kk + 1.0) * (ee + kk) * args.r_max * args.r_max /
                   (6.0 * kk * (ee - 1.0))) +
          args.r_max * args.r_max / (4.0 * kk * kk);
      worst_gap = std::max(worst_gap, var - bound);
    }
    failures += check(worst_bias <= 1e-12 * args.r_max, "bias", worst_bias,
                      1e-12 * args.r_max);
    failures += check(worst_gap <= 1e-12, "variance_bound_gap", worst_gap,
                      0.0);
    std::printf("k=%lld a=%s b=%s\n", static_cast<long long>(k),
                format_double(params.a).c_str(),
                format_double(params.b).c_str());
  } else if (args.mech == "scalarreldp") {
    const auto params = privfed::scalarmech::make_scalar_rel_dp(
        args.eps, args.alpha, args.nu, args.r_max);
    // Monte Carlo unbiasedness on a small grid.
    double worst = 0.0;
    for (double frac : {0.1, 0.37, 0.8}) {
      const double r = frac * args.r_max;
      double sum = 0.0;
      for (int64_t i = 0; i < args.n; ++i) {
        sum += privfed::scalarmech::scalar_rel_dp(r, params, rng);
      }
      worst = std::max(worst, std::abs(sum / static_cast<double>(args.n) - r));
    }
    const double band = 5.0 * params.a *
                        std::pow(params.nu, static_cast<double>(params.k)) /
                        std::sqrt(static_cast<double>(args.n));
    failures += check(worst <= band, "bias", worst, band);
    std::printf("k=%lld\n", static_cast<long long>(params.k));
  } else {
    std::fprintf(stderr, "unknown --mech '%s'\n", args.mech.c_str());
    return 2;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locally private vector release and federated simulation"};
  app.require_subcommand(1);

  ParamsArgs params_args;
  CLI::App* params = app.add_subcommand(
      "params", "direction-mechanism parameters for a budget and dimension");
  params->add_option("--eps1", params_args.eps1, "direction budget")
      ->required();
  params->add_option("--d", params_args.d, "dimension")->required();
  params->add_option("--split", params_args.split,
                     "theory | experiment | logistic");
  params->add_option("--eps2", params_args.eps2, "magnitude budget");
  params->add_option("--rmax", params_args.r_max, "magnitude bound");
  params->add_option("--out", params_args.out, "CSV output path");

  MechTestArgs mech_args;
  CLI::App* mech = app.add_subcommand(
      "mech-test", "bias/variance/privacy self-checks for one mechanism");
  mech->add_option("--mech", mech_args.mech,
                   "privunit | privunitinf | scalardp | scalarreldp");
  mech->add_option("--d", mech_args.d, "dimension");
  mech->add_option("--eps", mech_args.eps, "privacy budget");
  mech->add_option("--n", mech_args.n, "sample count");
  mech->add_option("--seed", mech_args.seed, "random seed");
  mech->add_option("--rmax", mech_args.r_max, "magnitude bound");
  mech->add_option("--alpha", mech_args.alpha, "relative accuracy floor");
  mech->add_option("--nu", mech_args.nu, "relative interval growth");

  std::string sim_config;
  std::string sim_out = "out";
  uint64_t sim_seed_override = 0;
  bool sim_seed_set = false;
  int sim_threads = 0;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "logistic-regression experiment suite from a config file");
  simulate->add_option("--config", sim_config, "config path")->required();
  simulate->add_option("--out", sim_out, "output directory");
  simulate
      ->add_option_function<uint64_t>(
          "--seed",
          [&](uint64_t v) {
            sim_seed_override = v;
            sim_seed_set = true;
          },
          "override master_seed")
      ->expected(1);
  simulate->add_option("--threads", sim_threads, "worker thread count");

  privfed::recon::SphereQuery sphere_query;
  privfed::recon::ZipfQuery zipf_query;
  bool zipf = false;
  CLI::App* recon = app.add_subcommand(
      "recon", "reconstruction-protection calculators");
  recon->add_flag("--zipf", zipf, "sparse-indicator bounds instead of sphere");
  recon->add_option("--k", sphere_query.k, "target dimension");
  recon->add_option("--a", sphere_query.a, "accuracy level");
  recon->add_option("--rho0", sphere_query.rho0, "prior divergence budget");
  recon->add_option("--eps", sphere_query.eps, "local privacy level");
  recon->add_option("--d", zipf_query.d, "dictionary size");
  recon->add_option("--m", zipf_query.m, "minimum item count");
  recon->add_option("--gamma", zipf_query.gamma, "prediction multiple");
  recon->add_option("--p", zipf_query.p, "precision target");
  recon->add_option("--r", zipf_query.r, "recall target");

  int64_t acct_rounds = 0;
  double acct_q = 0.0;
  double acct_rho = 0.0;
  double acct_sigma = 0.0;
  double acct_eps_renyi = 0.0;
  double acct_lambda = 2.0;
  double acct_delta = 0.0;
  double acct_eps = -1.0;
  bool to_dp = false;
  bool from_dp = false;
  bool per_round = false;
  CLI::App* account =
      app.add_subcommand("account", "central Renyi accounting calculators");
  account->add_option("--T", acct_rounds, "rounds");
  account->add_option("--q", acct_q, "subsampling rate");
  account->add_option("--rho", acct_rho, "clip radius");
  account->add_option("--sigma", acct_sigma, "noise std (update units)");
  account->add_option("--eps-renyi", acct_eps_renyi, "Renyi-2 budget");
  account->add_option("--lambda", acct_lambda, "Renyi order");
  account->add_option("--delta", acct_delta, "DP delta");
  account->add_option("--eps", acct_eps, "pure DP budget");
  account->add_flag("--to-dp", to_dp, "convert Renyi to (eps, delta)");
  account->add_flag("--from-dp", from_dp, "convert pure DP to Renyi");
  account->add_flag("--per-round", per_round, "one-round Renyi-2 cost");

  CLI11_PARSE(app, argc, argv);

  try {
    if (params->parsed()) return run_params(params_args);
    if (mech->parsed()) return run_mech_test(mech_args);
    if (simulate->parsed()) {
      if (sim_threads > 0) privfed::set_threads(sim_threads);
      const auto config = privfed::io::FlatConfig::parse_file(sim_config);
      auto suite = privfed::simdriver::suite_config_from(config);
      if (sim_seed_set) suite.master_seed = sim_seed_override;
      privfed::simdriver::run_and_write(suite, config, sim_config, sim_out);
      std::printf("wrote %s/{trajectories,summary,quantiles}.csv\n",
                  sim_out.c_str());
      return 0;
    }
    if (recon->parsed()) {
      if (zipf) {
        if (zipf_query.p > 0.0) {
          std::printf("precision_bound=%s\n",
                      format_double(
                          privfed::recon::zipf_precision_bound(zipf_query))
                          .c_str());
        }
        if (zipf_query.r > 0.0) {
          std::printf(
              "recall_bound=%s\n",
              format_double(privfed::recon::zipf_recall_bound(zipf_query))
                  .c_str());
        }
      } else {
        std::printf(
            "breach_bound=%s\n",
            format_double(privfed::recon::breach_prob_sphere(sphere_query))
                .c_str());
      }
      return 0;
    }
    if (account->parsed()) {
      if (to_dp) {
        std::printf("eps_dp=%s\n",
                    format_double(privfed::accountant::renyi_to_dp(
                                      acct_eps_renyi, acct_lambda, acct_delta))
                        .c_str());
      } else if (from_dp) {
        std::printf("eps_renyi=%s\n",
                    format_double(privfed::accountant::dp_to_renyi(
                                      acct_eps, acct_lambda))
                        .c_str());
      } else if (per_round) {
        std::printf("renyi2_per_round=%s\n",
                    format_double(privfed::accountant::renyi2_per_round(
                                      acct_q, acct_rho, acct_sigma))
                        .c_str());
      } else {
        const double sigma = privfed::accountant::sigma_for_budget(
            acct_rounds, acct_q, acct_rho, acct_eps_renyi);
        std::printf("sigma=%s\n", format_double(sigma).c_str());
        std::printf("sigma_approx=%s\n",
                    format_double(privfed::accountant::sigma_for_budget_approx(
                                      acct_rounds, acct_q, acct_rho,
                                      acct_eps_renyi))
                        .c_str());
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
