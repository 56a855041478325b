// Command-line front end: simulation, fitting, summarization, evaluation and
// replication, wired through the shared-library C interface.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ziplpcm.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int fail(int rc, const std::string& context) {
  std::fprintf(stderr, "%s: %s\n", context.c_str(), zlp_last_error());
  return rc;
}

std::string default_out_dir() {
  const char* env = std::getenv("ZIPLPCM_OUT_DIR");
  return env && *env ? env : ".";
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
}

struct HyperOpts {
  zlp_hyper h;
  HyperOpts() { zlp_hyper_defaults(&h); }
  void attach(CLI::App* app) {
    app->add_option("--d", h.d, "latent dimension");
    app->add_option("--alpha", h.alpha, "partition prior concentration");
    app->add_option("--alpha1", h.alpha1, "precision prior shape");
    app->add_option("--alpha2", h.alpha2, "precision prior rate scale");
    app->add_option("--omega", h.omega, "group mean prior precision scale");
    app->add_option("--beta1", h.beta1, "unusual-zero prior Beta first parameter");
    app->add_option("--beta2", h.beta2, "unusual-zero prior Beta second parameter");
    app->add_option("--cohesion", h.cohesion, "attribute cohesion weight");
    app->add_option("--p-eject", h.p_eject, "split-vs-merge proposal probability");
    app->add_option("--p0", h.p0, "empty-split abandonment target");
    app->add_option("--beta-lo", h.beta_lo, "intercept prior lower bound");
    app->add_option("--beta-hi", h.beta_hi, "intercept prior upper bound");
    app->add_option("--sigma2-beta", h.sigma2_beta, "initial intercept proposal variance");
    app->add_option("--sigma2-u", h.sigma2_U, "initial position proposal variance");
  }
  void from_json(const json& j) {
    h.d = j.value("d", h.d);
    h.alpha = j.value("alpha", h.alpha);
    h.alpha1 = j.value("alpha1", h.alpha1);
    h.alpha2 = j.value("alpha2", h.alpha2);
    h.omega = j.value("omega", h.omega);
    h.beta1 = j.value("beta1", h.beta1);
    h.beta2 = j.value("beta2", h.beta2);
    h.cohesion = j.value("cohesion", h.cohesion);
    h.p_eject = j.value("p_eject", h.p_eject);
    h.p0 = j.value("p0", h.p0);
    h.beta_lo = j.value("beta_lo", h.beta_lo);
    h.beta_hi = j.value("beta_hi", h.beta_hi);
    h.sigma2_beta = j.value("sigma2_beta", h.sigma2_beta);
    h.sigma2_U = j.value("sigma2_U", h.sigma2_U);
  }
  json to_json() const {
    return json{{"d", h.d},
                {"alpha", h.alpha},
                {"alpha1", h.alpha1},
                {"alpha2", h.alpha2},
                {"omega", h.omega},
                {"beta1", h.beta1},
                {"beta2", h.beta2},
                {"cohesion", h.cohesion},
                {"p_eject", h.p_eject},
                {"p0", h.p0},
                {"beta_lo", h.beta_lo},
                {"beta_hi", h.beta_hi},
                {"sigma2_beta", h.sigma2_beta},
                {"sigma2_U", h.sigma2_U}};
  }
};

struct ConfigOpts {
  zlp_config c;
  std::string positions = "mds";
  std::string partition = "singletons";
  ConfigOpts() { zlp_config_defaults(&c); }
  void attach(CLI::App* app) {
    app->add_option("--iterations", c.iterations, "total MCMC iterations");
    app->add_option("--burnin", c.burn_in, "burn-in iterations");
    app->add_option("--seed", c.seed, "chain seed");
    app->add_option("--thin", c.thin, "position snapshot stride");
    app->add_option("--adapt-until", c.adapt_until,
                    "stop proposal adaptation after this iteration (-1: burn-in)");
    app->add_flag("--no-store-u", [this](std::int64_t) { c.store_U = 0; },
                  "do not store position snapshots");
    app->add_option("--init-positions", positions, "mds or random")
        ->check(CLI::IsMember({"mds", "random"}));
    app->add_option("--init-partition", partition, "singletons or kmeans")
        ->check(CLI::IsMember({"singletons", "kmeans"}));
    app->add_option("--kmeans-k", c.kmeans_k, "initial cluster count for kmeans");
  }
  void finalize() {
    c.position_init = positions == "random" ? ZLP_INIT_POSITIONS_RANDOM
                                            : ZLP_INIT_POSITIONS_MDS;
    c.partition_init = partition == "kmeans" ? ZLP_INIT_PARTITION_KMEANS
                                             : ZLP_INIT_PARTITION_SINGLETONS;
  }
  void from_json(const json& j) {
    c.iterations = j.value("iterations", c.iterations);
    c.burn_in = j.value("burn_in", c.burn_in);
    c.seed = j.value("seed", c.seed);
    c.thin = j.value("thin", c.thin);
    c.adapt_until = j.value("adapt_until", c.adapt_until);
    c.store_U = j.value("store_U", c.store_U);
    positions = j.value("init_positions", positions);
    partition = j.value("init_partition", partition);
    c.kmeans_k = j.value("kmeans_k", c.kmeans_k);
  }
  json to_json() const {
    return json{{"iterations", c.iterations},
                {"burn_in", c.burn_in},
                {"seed", c.seed},
                {"thin", c.thin},
                {"adapt_until", c.adapt_until},
                {"store_U", c.store_U},
                {"init_positions", positions},
                {"init_partition", partition},
                {"kmeans_k", c.kmeans_k}};
  }
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << j.dump(1) << "\n";
}

void write_levels_csv(const std::string& path, const int* c, int n) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  for (int i = 0; i < n; ++i) out << c[i] << "\n";
}

void write_dense_csv(const std::string& path, const double* m, int rows, int cols) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  char buf[64];
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", m[static_cast<std::size_t>(i) * cols + j]);
      out << buf;
    }
    out << '\n';
  }
}

double quantile7(std::vector<double> x, double q) {
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= x.size()) return x.back();
  return x[lo] + (h - lo) * (x[lo + 1] - x[lo]);
}

struct NetworkGuard {
  zlp_network* p = nullptr;
  ~NetworkGuard() { zlp_network_free(p); }
};
struct AttrsGuard {
  zlp_attributes* p = nullptr;
  ~AttrsGuard() { zlp_attributes_free(p); }
};
struct TraceGuard {
  zlp_trace* p = nullptr;
  ~TraceGuard() { zlp_trace_free(p); }
};
struct SummaryGuard {
  zlp_summary* p = nullptr;
  ~SummaryGuard() { zlp_summary_free(p); }
};
struct SimGuard {
  zlp_sim* p = nullptr;
  ~SimGuard() { zlp_sim_free(p); }
};

/* ---- simulate ---- */

struct SimulateArgs {
  std::string preset;
  unsigned long long seed = 1;
  long long attr_seed = -1;
  int contaminate = -1;
  std::string out_dir = default_out_dir();
};

int cmd_simulate(const SimulateArgs& a) {
  ensure_dir(a.out_dir);
  SimGuard sim;
  int rc = zlp_simulate_preset(a.preset.c_str(), a.seed, &sim.p);
  if (rc) return fail(rc, "simulate");
  NetworkGuard net;
  rc = zlp_sim_network(sim.p, &net.p);
  if (rc) return fail(rc, "simulate");
  const std::string net_path = a.out_dir + "/network.csv";
  const std::string truth_path = a.out_dir + "/truth.json";
  const std::string attr_path = a.out_dir + "/attributes.csv";
  rc = zlp_network_save(net.p, net_path.c_str());
  if (rc) return fail(rc, "simulate: writing network");
  rc = zlp_sim_truth_save(sim.p, truth_path.c_str());
  if (rc) return fail(rc, "simulate: writing truth");
  AttrsGuard attrs;
  const unsigned long long aseed =
      a.attr_seed < 0 ? a.seed : static_cast<unsigned long long>(a.attr_seed);
  rc = zlp_sim_attributes(sim.p, a.contaminate, aseed, &attrs.p);
  if (rc) return fail(rc, "simulate: attributes");
  write_levels_csv(attr_path, zlp_attributes_vector(attrs.p), zlp_sim_n(sim.p));

  char hash[17];
  zlp_network_hash(net.p, hash);
  write_json_file(a.out_dir + "/manifest.json",
                  json{{"command", "simulate"},
                       {"preset", a.preset},
                       {"seed", a.seed},
                       {"attr_seed", aseed},
                       {"contaminate", a.contaminate},
                       {"network", net_path},
                       {"truth", truth_path},
                       {"attributes", attr_path},
                       {"data_hash", hash}});
  std::printf("simulate: n=%d -> %s\n", zlp_sim_n(sim.p), a.out_dir.c_str());
  return 0;
}

/* ---- fit ---- */

struct FitArgs {
  std::string network;
  std::string format = "dense";
  bool undirected = false;
  std::string attributes;
  bool unsupervised = false;
  std::string config_file;
  std::string manifest;
  std::string out_dir = default_out_dir();
  HyperOpts hyper;
  ConfigOpts config;
};

int cmd_fit(FitArgs a) {
  if (!a.manifest.empty()) {
    const json m = load_json_file(a.manifest);
    a.network = m.value("network", a.network);
    a.format = m.value("format", a.format);
    a.undirected = !m.value("directed", !a.undirected);
    a.attributes = m.value("attributes", a.attributes);
    a.unsupervised = m.value("attributes", std::string()).empty();
    a.hyper.from_json(m.value("hyper", json::object()));
    a.config.from_json(m.value("sampler", json::object()));
  } else if (!a.config_file.empty()) {
    const json cfg = load_json_file(a.config_file);
    a.hyper.from_json(cfg.value("hyper", json::object()));
    a.config.from_json(cfg.value("sampler", json::object()));
  }
  a.config.finalize();
  if (a.network.empty()) {
    std::fprintf(stderr, "fit: --network is required\n");
    return 2;
  }
  ensure_dir(a.out_dir);

  NetworkGuard net;
  const int fmt = a.format == "edgelist" ? ZLP_FORMAT_EDGELIST : ZLP_FORMAT_DENSE;
  int rc = zlp_network_load(a.network.c_str(), fmt, a.undirected ? 0 : 1, &net.p);
  if (rc) return fail(rc, "fit: loading network");

  AttrsGuard attrs;
  if (!a.attributes.empty() && !a.unsupervised) {
    rc = zlp_attributes_load(a.attributes.c_str(), zlp_network_n(net.p), &attrs.p);
    if (rc) return fail(rc, "fit: loading attributes");
  }

  TraceGuard trace;
  rc = zlp_fit(net.p, attrs.p, &a.hyper.h, &a.config.c, &trace.p);
  if (rc) return fail(rc, "fit");
  const std::string trace_path = a.out_dir + "/trace.json";
  rc = zlp_trace_save(trace.p, trace_path.c_str());
  if (rc) return fail(rc, "fit: writing trace");

  char hash[17];
  zlp_network_hash(net.p, hash);
  write_json_file(a.out_dir + "/manifest.json",
                  json{{"command", "fit"},
                       {"network", a.network},
                       {"format", a.format},
                       {"directed", !a.undirected},
                       {"attributes", attrs.p ? a.attributes : std::string()},
                       {"hyper", a.hyper.to_json()},
                       {"sampler", a.config.to_json()},
                       {"data_hash", hash},
                       {"trace", trace_path}});
  std::printf("fit: %d iterations -> %s\n", zlp_trace_iterations(trace.p),
              trace_path.c_str());
  return 0;
}

/* ---- summarize ---- */

struct SummarizeArgs {
  std::string trace;
  std::string network;
  std::string format = "dense";
  bool undirected = false;
  std::string out_dir = default_out_dir();
};

int cmd_summarize(const SummarizeArgs& a) {
  ensure_dir(a.out_dir);
  TraceGuard trace;
  int rc = zlp_trace_load(a.trace.c_str(), &trace.p);
  if (rc) return fail(rc, "summarize: loading trace");
  SummaryGuard sum;
  rc = zlp_summarize(trace.p, &sum.p);
  if (rc) return fail(rc, "summarize");
  rc = zlp_summary_save(sum.p, (a.out_dir + "/summary.json").c_str());
  if (rc) return fail(rc, "summarize: writing summary");

  const int n = zlp_summary_n(sum.p);
  const int d = zlp_summary_d(sum.p);
  const int* z = zlp_summary_z(sum.p);
  {
    std::ofstream out(a.out_dir + "/z_hat.csv");
    for (int i = 0; i < n; ++i) out << z[i] << "\n";
  }
  if (const double* U = zlp_summary_U(sum.p)) {
    std::ofstream out(a.out_dir + "/U_hat.csv");
    char buf[64];
    for (int a2 = 0; a2 < d; ++a2) out << "u" << (a2 + 1) << ",";
    out << "cluster\n";
    for (int i = 0; i < n; ++i) {
      for (int a2 = 0; a2 < d; ++a2) {
        std::snprintf(buf, sizeof(buf), "%.17g", U[static_cast<std::size_t>(i) * d + a2]);
        out << buf << ",";
      }
      out << z[i] << "\n";
    }
  }
  write_dense_csv(a.out_dir + "/nu_hat.csv", zlp_summary_nu_hat(sum.p), n, n);
  write_dense_csv(a.out_dir + "/dist_hat.csv", zlp_summary_dist_hat(sum.p), n, n);
  write_dense_csv(a.out_dir + "/lambda_hat.csv", zlp_summary_lambda_hat(sum.p), n, n);
  write_dense_csv(a.out_dir + "/p_hat.csv", zlp_summary_p_hat(sum.p), n, n);

  if (!a.network.empty()) {
    NetworkGuard net;
    const int fmt = a.format == "edgelist" ? ZLP_FORMAT_EDGELIST : ZLP_FORMAT_DENSE;
    rc = zlp_network_load(a.network.c_str(), fmt, a.undirected ? 0 : 1, &net.p);
    if (rc) return fail(rc, "summarize: loading network");
    std::vector<double> pnz(static_cast<std::size_t>(n) * n);
    rc = zlp_summary_pnz(sum.p, net.p, pnz.data());
    if (rc) return fail(rc, "summarize: pnz");
    write_dense_csv(a.out_dir + "/pnz.csv", pnz.data(), n, n);
  }
  std::printf("summarize: K_hat=%d beta_hat=%.4f -> %s\n", zlp_summary_K(sum.p),
              zlp_summary_beta(sum.p), a.out_dir.c_str());
  return 0;
}

/* ---- evaluate ---- */

const char* kReportHeader =
    "seed,K_hat,vi,evi,beta_hat,mean_abs_p_err,sd_abs_p_err,mean_abs_dist_err,"
    "sd_abs_dist_err,mean_abs_lambda_err,sd_abs_lambda_err,roc_auc\n";

void append_report_row(std::ofstream& out, unsigned long long seed, const zlp_eval& e) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%llu,%d,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", seed,
                e.K_hat, e.vi, e.evi, e.beta_hat, e.mean_abs_p_err, e.sd_abs_p_err,
                e.mean_abs_dist_err, e.sd_abs_dist_err, e.mean_abs_lambda_err,
                e.sd_abs_lambda_err, e.roc_auc);
  out << buf;
}

struct EvaluateArgs {
  std::string summary;
  std::string truth;
  std::string network;
  std::string format = "dense";
  bool undirected = false;
  std::string trace;
  unsigned long long seed = 0;
  std::string out_dir = default_out_dir();
};

int cmd_evaluate(const EvaluateArgs& a) {
  ensure_dir(a.out_dir);
  SummaryGuard sum;
  int rc = zlp_summary_load(a.summary.c_str(), &sum.p);
  if (rc) return fail(rc, "evaluate: loading summary");
  NetworkGuard net;
  const int fmt = a.format == "edgelist" ? ZLP_FORMAT_EDGELIST : ZLP_FORMAT_DENSE;
  rc = zlp_network_load(a.network.c_str(), fmt, a.undirected ? 0 : 1, &net.p);
  if (rc) return fail(rc, "evaluate: loading network");
  TraceGuard trace;
  if (!a.trace.empty()) {
    rc = zlp_trace_load(a.trace.c_str(), &trace.p);
    if (rc) return fail(rc, "evaluate: loading trace");
  }
  zlp_eval ev;
  rc = zlp_evaluate(sum.p, trace.p, net.p, a.truth.c_str(), &ev);
  if (rc) return fail(rc, "evaluate");
  {
    std::ofstream out(a.out_dir + "/report.csv");
    out << kReportHeader;
    append_report_row(out, a.seed, ev);
  }
  // ROC sidecar only when the truth carries indicators with both classes
  const std::string roc_path = a.out_dir + "/roc.csv";
  if (zlp_roc_csv(sum.p, net.p, a.truth.c_str(), roc_path.c_str()) != 0)
    std::fprintf(stderr, "evaluate: no ROC written (%s)\n", zlp_last_error());
  std::printf("evaluate: K_hat=%d VI=%.4f beta_hat=%.4f -> %s/report.csv\n", ev.K_hat,
              ev.vi, ev.beta_hat, a.out_dir.c_str());
  return 0;
}

/* ---- replicate ---- */

struct ReplicateArgs {
  std::string preset;
  int seeds = 50;
  unsigned long long first_seed = 1;
  int threads = 0;
  bool unsupervised = false;
  std::string out_dir = default_out_dir();
  HyperOpts hyper;
  ConfigOpts config;
};

int cmd_replicate(ReplicateArgs a) {
  a.config.finalize();
  ensure_dir(a.out_dir);
  struct Result {
    bool ok = false;
    std::string error;
    zlp_eval ev{};
  };
  std::vector<Result> results(a.seeds);

  auto worker = [&](int idx) {
    const unsigned long long seed = a.first_seed + static_cast<unsigned long long>(idx);
    Result& res = results[idx];
    const std::string dir = a.out_dir + "/seed_" + std::to_string(seed);
    try {
      ensure_dir(dir);
      SimGuard sim;
      if (zlp_simulate_preset(a.preset.c_str(), seed, &sim.p)) {
        res.error = zlp_last_error();
        return;
      }
      NetworkGuard net;
      if (zlp_sim_network(sim.p, &net.p) ||
          zlp_network_save(net.p, (dir + "/network.csv").c_str()) ||
          zlp_sim_truth_save(sim.p, (dir + "/truth.json").c_str())) {
        res.error = zlp_last_error();
        return;
      }
      AttrsGuard attrs;
      if (!a.unsupervised) {
        if (zlp_sim_attributes(sim.p, -1, seed, &attrs.p)) {
          res.error = zlp_last_error();
          return;
        }
        write_levels_csv(dir + "/attributes.csv", zlp_attributes_vector(attrs.p),
                         zlp_sim_n(sim.p));
      }
      zlp_config cfg = a.config.c;
      cfg.seed = seed;
      TraceGuard trace;
      if (zlp_fit(net.p, attrs.p, &a.hyper.h, &cfg, &trace.p)) {
        res.error = zlp_last_error();
        return;
      }
      SummaryGuard sum;
      if (zlp_summarize(trace.p, &sum.p) ||
          zlp_summary_save(sum.p, (dir + "/summary.json").c_str())) {
        res.error = zlp_last_error();
        return;
      }
      if (zlp_evaluate(sum.p, trace.p, net.p, (dir + "/truth.json").c_str(), &res.ev)) {
        res.error = zlp_last_error();
        return;
      }
      res.ok = true;
    } catch (const std::exception& e) {
      res.error = e.what();
    }
  };

  int nthreads = a.threads > 0 ? a.threads
                               : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  nthreads = std::min(nthreads, a.seeds);
  std::vector<std::thread> pool;
  std::mutex next_mu;
  int next = 0;
  for (int w = 0; w < nthreads; ++w)
    pool.emplace_back([&] {
      while (true) {
        int idx;
        {
          std::lock_guard<std::mutex> lock(next_mu);
          if (next >= a.seeds) return;
          idx = next++;
        }
        worker(idx);
      }
    });
  for (auto& t : pool) t.join();

  std::ofstream rows(a.out_dir + "/rows.csv");
  rows << kReportHeader;
  std::vector<double> vi, beta, evi, khat;
  int failures = 0;
  for (int i = 0; i < a.seeds; ++i) {
    const unsigned long long seed = a.first_seed + static_cast<unsigned long long>(i);
    if (!results[i].ok) {
      ++failures;
      std::fprintf(stderr, "replicate seed %llu failed: %s\n", seed,
                   results[i].error.c_str());
      continue;
    }
    append_report_row(rows, seed, results[i].ev);
    vi.push_back(results[i].ev.vi);
    beta.push_back(results[i].ev.beta_hat);
    evi.push_back(results[i].ev.evi);
    khat.push_back(results[i].ev.K_hat);
  }
  if (vi.empty()) {
    std::fprintf(stderr, "replicate: all seeds failed\n");
    return 4;
  }
  json q;
  auto block = [&](const char* name, const std::vector<double>& x) {
    q[name] = json{{"median", quantile7(x, 0.5)},
                   {"q10", quantile7(x, 0.1)},
                   {"q90", quantile7(x, 0.9)}};
  };
  block("vi", vi);
  block("beta_hat", beta);
  block("evi", evi);
  block("K_hat", khat);
  q["seeds"] = a.seeds;
  q["failures"] = failures;
  write_json_file(a.out_dir + "/quantiles.json", q);
  std::printf("replicate: %d/%d seeds ok, median VI=%.4f median beta=%.4f -> %s\n",
              static_cast<int>(vi.size()), a.seeds, quantile7(vi, 0.5),
              quantile7(beta, 0.5), a.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-inflated Poisson latent position cluster model toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* s = app.add_subcommand("simulate", "generate a synthetic study network");
  s->add_option("--preset", sim.preset, std::string("one of: ") + zlp_preset_names())
      ->required();
  s->add_option("--seed", sim.seed, "generator seed");
  s->add_option("--attr-seed", sim.attr_seed, "attribute contamination seed");
  s->add_option("--contaminate", sim.contaminate,
                "nodes to reassign in the attribute vector (-1: preset default)");
  s->add_option("--out", sim.out_dir, "output directory");

  FitArgs fit;
  CLI::App* f = app.add_subcommand("fit", "run the MCMC sampler on a network");
  f->add_option("--network", fit.network, "adjacency file");
  f->add_option("--format", fit.format, "dense or edgelist")
      ->check(CLI::IsMember({"dense", "edgelist"}));
  f->add_flag("--undirected", fit.undirected, "treat the network as undirected");
  f->add_option("--attributes", fit.attributes,
                "node attribute file; presence enables supervision");
  f->add_flag("--unsupervised", fit.unsupervised, "ignore any attribute file");
  f->add_option("--config", fit.config_file, "JSON settings file (flags override)");
  f->add_option("--manifest", fit.manifest, "replay a previous run's manifest");
  f->add_option("--out", fit.out_dir, "output directory");
  fit.hyper.attach(f);
  fit.config.attach(f);

  SummarizeArgs summ;
  CLI::App* m = app.add_subcommand("summarize", "posterior point estimates from a trace");
  m->add_option("--trace", summ.trace, "trace file from fit")->required();
  m->add_option("--network", summ.network, "adjacency file (enables the pnz sidecar)");
  m->add_option("--format", summ.format, "dense or edgelist")
      ->check(CLI::IsMember({"dense", "edgelist"}));
  m->add_flag("--undirected", summ.undirected, "treat the network as undirected");
  m->add_option("--out", summ.out_dir, "output directory");

  EvaluateArgs ev;
  CLI::App* e = app.add_subcommand("evaluate", "compare a summary against ground truth");
  e->add_option("--summary", ev.summary, "summary file")->required();
  e->add_option("--truth", ev.truth, "ground-truth file")->required();
  e->add_option("--network", ev.network, "adjacency file")->required();
  e->add_option("--format", ev.format, "dense or edgelist")
      ->check(CLI::IsMember({"dense", "edgelist"}));
  e->add_flag("--undirected", ev.undirected, "treat the network as undirected");
  e->add_option("--trace", ev.trace, "trace file (enables the evi column)");
  e->add_option("--seed", ev.seed, "seed tag for the report row");
  e->add_option("--out", ev.out_dir, "output directory");

  ReplicateArgs rep;
  CLI::App* r = app.add_subcommand("replicate", "simulate + fit + evaluate over many seeds");
  r->add_option("--preset", rep.preset, std::string("one of: ") + zlp_preset_names())
      ->required();
  r->add_option("--seeds", rep.seeds, "number of seeds");
  r->add_option("--first-seed", rep.first_seed, "first seed value");
  r->add_option("--threads", rep.threads, "worker threads (0: hardware)");
  r->add_flag("--unsupervised", rep.unsupervised, "fit without attributes");
  r->add_option("--out", rep.out_dir, "output directory");
  rep.hyper.attach(r);
  rep.config.attach(r);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (s->parsed()) return cmd_simulate(sim);
    if (f->parsed()) return cmd_fit(fit);
    if (m->parsed()) return cmd_summarize(summ);
    if (e->parsed()) return cmd_evaluate(ev);
    if (r->parsed()) return cmd_replicate(rep);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 4;
  }
  return 2;
}
