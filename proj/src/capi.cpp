#include "ziplpcm.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "model.hpp"
#include "netdata.hpp"
#include "sampler.hpp"
#include "simgen.hpp"
#include "summary.hpp"

using namespace zlpcm;

namespace {

thread_local std::string g_error;

void set_error(const std::string& msg) { g_error = msg; }

// Runs fn, translating exceptions into status codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    set_error(e.what());
    return ZLP_DATA;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return ZLP_DATA;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return ZLP_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return ZLP_NUMERIC;
  }
}

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

struct zlp_network {
  WeightedNetwork net;
};
struct zlp_attributes {
  NodeAttributes attrs;
};
struct zlp_trace {
  ChainTrace trace;
};
struct zlp_summary {
  FitSummary fit;
};
struct zlp_sim {
  SimResult sim;
  int default_m = 0;
};

extern "C" {

const char* zlp_last_error(void) { return g_error.c_str(); }

/* ---- networks ---- */

int zlp_network_load(const char* path, int format, int directed, zlp_network** out) {
  if (!path || !out || (format != ZLP_FORMAT_DENSE && format != ZLP_FORMAT_EDGELIST)) {
    set_error("zlp_network_load: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    auto* h = new zlp_network;
    h->net = load_network(path,
                          format == ZLP_FORMAT_DENSE ? NetworkFormat::DenseCsv
                                                     : NetworkFormat::EdgeListCsv,
                          directed != 0);
    *out = h;
    return ZLP_OK;
  });
}

int zlp_network_from_dense(const long long* y, int n, int directed, zlp_network** out) {
  if (!y || n < 1 || !out) {
    set_error("zlp_network_from_dense: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    auto* h = new zlp_network;
    h->net.n = n;
    h->net.directed = directed != 0;
    h->net.y.assign(y, y + static_cast<std::size_t>(n) * n);
    validate_network(h->net);
    *out = h;
    return ZLP_OK;
  });
}

int zlp_network_save(const zlp_network* net, const char* path) {
  if (!net || !path) {
    set_error("zlp_network_save: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    write_network(path, net->net);
    return ZLP_OK;
  });
}

int zlp_network_n(const zlp_network* net) { return net ? net->net.n : 0; }
int zlp_network_directed(const zlp_network* net) {
  return net && net->net.directed ? 1 : 0;
}
const long long* zlp_network_matrix(const zlp_network* net) {
  return net ? net->net.y.data() : nullptr;
}
void zlp_network_free(zlp_network* net) { delete net; }

/* ---- attributes ---- */

int zlp_attributes_load(const char* path, int n, zlp_attributes** out) {
  if (!path || n < 1 || !out) {
    set_error("zlp_attributes_load: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    auto* h = new zlp_attributes;
    h->attrs = load_attributes(path, n);
    *out = h;
    return ZLP_OK;
  });
}

int zlp_attributes_from_levels(const int* c, int n, zlp_attributes** out) {
  if (!c || n < 1 || !out) {
    set_error("zlp_attributes_from_levels: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    auto* h = new zlp_attributes;
    h->attrs.c.assign(c, c + n);
    int C = 0;
    for (int v : h->attrs.c) {
      if (v < 1) throw DataError("attribute levels must be >= 1");
      C = std::max(C, v);
    }
    h->attrs.C = C;
    for (int l = 1; l <= C; ++l) h->attrs.level_names.push_back(std::to_string(l));
    *out = h;
    return ZLP_OK;
  });
}

int zlp_attributes_levels(const zlp_attributes* a) { return a ? a->attrs.C : 0; }
const int* zlp_attributes_vector(const zlp_attributes* a) {
  return a ? a->attrs.c.data() : nullptr;
}
void zlp_attributes_free(zlp_attributes* a) { delete a; }

/* ---- settings ---- */

void zlp_hyper_defaults(zlp_hyper* h) {
  if (!h) return;
  Hyperparameters d;
  h->d = d.d;
  h->alpha = d.alpha;
  h->alpha1 = d.alpha1;
  h->alpha2 = d.alpha2;
  h->omega = d.omega;
  h->beta1 = d.beta1;
  h->beta2 = d.beta2;
  h->cohesion = 1.0;
  h->sigma2_beta = d.sigma2_beta;
  h->sigma2_U = d.sigma2_U;
  h->p_eject = d.p_eject;
  h->p0 = d.p0;
  h->beta_lo = d.beta_lo;
  h->beta_hi = d.beta_hi;
}

void zlp_config_defaults(zlp_config* c) {
  if (!c) return;
  SamplerConfig d;
  c->iterations = d.iterations;
  c->burn_in = d.burn_in;
  c->seed = d.seed;
  c->adapt_until = -1;
  c->thin = d.thin;
  c->store_U = d.store_U ? 1 : 0;
  c->position_init = ZLP_INIT_POSITIONS_MDS;
  c->partition_init = ZLP_INIT_PARTITION_SINGLETONS;
  c->kmeans_k = d.kmeans_k;
}

namespace {

Hyperparameters to_hyper(const zlp_hyper* h, const zlp_attributes* attrs) {
  Hyperparameters out;
  out.d = h->d;
  out.alpha = h->alpha;
  out.alpha1 = h->alpha1;
  out.alpha2 = h->alpha2;
  out.omega = h->omega;
  out.beta1 = h->beta1;
  out.beta2 = h->beta2;
  if (attrs) out.cohesion.assign(attrs->attrs.C, h->cohesion);
  out.sigma2_beta = h->sigma2_beta;
  out.sigma2_U = h->sigma2_U;
  out.p_eject = h->p_eject;
  out.p0 = h->p0;
  out.beta_lo = h->beta_lo;
  out.beta_hi = h->beta_hi;
  return out;
}

SamplerConfig to_config(const zlp_config* c) {
  SamplerConfig out;
  out.iterations = c->iterations;
  out.burn_in = c->burn_in;
  out.seed = c->seed;
  out.adapt_until = c->adapt_until;
  out.thin = c->thin;
  out.store_U = c->store_U != 0;
  out.position_init = c->position_init == ZLP_INIT_POSITIONS_RANDOM
                          ? SamplerConfig::PositionInit::Random
                          : SamplerConfig::PositionInit::GeodesicMds;
  out.partition_init = c->partition_init == ZLP_INIT_PARTITION_KMEANS
                           ? SamplerConfig::PartitionInit::KMeans
                           : SamplerConfig::PartitionInit::Singletons;
  out.kmeans_k = c->kmeans_k;
  return out;
}

}  // namespace

/* ---- fitting ---- */

int zlp_fit(const zlp_network* net, const zlp_attributes* attrs, const zlp_hyper* hyper,
            const zlp_config* config, zlp_trace** out) {
  if (!net || !hyper || !config || !out) {
    set_error("zlp_fit: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    std::optional<NodeAttributes> a;
    if (attrs) a = attrs->attrs;
    auto* h = new zlp_trace;
    h->trace = run_chain(net->net, a, to_hyper(hyper, attrs), to_config(config));
    *out = h;
    return ZLP_OK;
  });
}

int zlp_trace_save(const zlp_trace* t, const char* path) {
  if (!t || !path) {
    set_error("zlp_trace_save: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    save_trace(path, t->trace);
    return ZLP_OK;
  });
}

int zlp_trace_load(const char* path, zlp_trace** out) {
  if (!path || !out) {
    set_error("zlp_trace_load: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    auto* h = new zlp_trace;
    h->trace = load_trace(path);
    *out = h;
    return ZLP_OK;
  });
}

int zlp_trace_iterations(const zlp_trace* t) {
  return t ? static_cast<int>(t->trace.beta.size()) : 0;
}
int zlp_trace_n(const zlp_trace* t) { return t ? t->trace.n : 0; }
const double* zlp_trace_beta(const zlp_trace* t) {
  return t ? t->trace.beta.data() : nullptr;
}
const int* zlp_trace_group_counts(const zlp_trace* t) {
  return t ? t->trace.K.data() : nullptr;
}
const double* zlp_trace_loglik(const zlp_trace* t) {
  return t ? t->trace.loglik.data() : nullptr;
}
void zlp_trace_free(zlp_trace* t) { delete t; }

/* ---- summaries ---- */

int zlp_summarize(const zlp_trace* t, zlp_summary** out) {
  if (!t || !out) {
    set_error("zlp_summarize: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    auto* h = new zlp_summary;
    h->fit = summarize(t->trace);
    *out = h;
    return ZLP_OK;
  });
}

int zlp_summary_save(const zlp_summary* s, const char* path) {
  if (!s || !path) {
    set_error("zlp_summary_save: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    write_summary(path, s->fit);
    return ZLP_OK;
  });
}

int zlp_summary_load(const char* path, zlp_summary** out) {
  if (!path || !out) {
    set_error("zlp_summary_load: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    auto* h = new zlp_summary;
    h->fit = load_summary(path);
    *out = h;
    return ZLP_OK;
  });
}

int zlp_summary_n(const zlp_summary* s) { return s ? s->fit.n : 0; }
int zlp_summary_d(const zlp_summary* s) { return s ? s->fit.d : 0; }
int zlp_summary_K(const zlp_summary* s) { return s ? s->fit.K_hat : 0; }
double zlp_summary_beta(const zlp_summary* s) { return s ? s->fit.beta_hat : 0.0; }
double zlp_summary_evi(const zlp_summary* s) {
  return s ? s->fit.mean_vi_to_zhat : 0.0;
}
const int* zlp_summary_z(const zlp_summary* s) {
  return s ? s->fit.z_hat.data() : nullptr;
}
const double* zlp_summary_U(const zlp_summary* s) {
  return s && !s->fit.U_hat.empty() ? s->fit.U_hat.data() : nullptr;
}
const double* zlp_summary_nu_hat(const zlp_summary* s) {
  return s ? s->fit.nu_hat.data() : nullptr;
}
const double* zlp_summary_dist_hat(const zlp_summary* s) {
  return s ? s->fit.dist_hat.data() : nullptr;
}
const double* zlp_summary_p_hat(const zlp_summary* s) {
  return s ? s->fit.p_hat.data() : nullptr;
}
const double* zlp_summary_lambda_hat(const zlp_summary* s) {
  return s ? s->fit.lambda_hat.data() : nullptr;
}

int zlp_summary_pnz(const zlp_summary* s, const zlp_network* net, double* out) {
  if (!s || !net || !out) {
    set_error("zlp_summary_pnz: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    const std::vector<double> pnz = prob_nonzero_given_zero(s->fit, net->net);
    std::memcpy(out, pnz.data(), pnz.size() * sizeof(double));
    return ZLP_OK;
  });
}

void zlp_summary_free(zlp_summary* s) { delete s; }

/* ---- simulation ---- */

const char* zlp_preset_names(void) {
  static std::string names = [] {
    std::string s;
    for (const auto& n : preset_names()) {
      if (!s.empty()) s += ",";
      s += n;
    }
    return s;
  }();
  return names.c_str();
}

int zlp_simulate_preset(const char* preset, unsigned long long seed, zlp_sim** out) {
  if (!preset || !out) {
    set_error("zlp_simulate_preset: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    const Preset p = get_preset(preset);
    auto* h = new zlp_sim;
    h->sim = simulate_preset(p, seed);
    h->default_m = p.contaminate_m;
    *out = h;
    return ZLP_OK;
  });
}

int zlp_sim_network(const zlp_sim* s, zlp_network** out) {
  if (!s || !out) {
    set_error("zlp_sim_network: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    auto* h = new zlp_network;
    h->net = s->sim.network;
    *out = h;
    return ZLP_OK;
  });
}

int zlp_sim_truth_save(const zlp_sim* s, const char* path) {
  if (!s || !path) {
    set_error("zlp_sim_truth_save: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    write_truth(path, s->sim.truth);
    return ZLP_OK;
  });
}

int zlp_sim_n(const zlp_sim* s) { return s ? s->sim.network.n : 0; }
const int* zlp_sim_z_star(const zlp_sim* s) {
  return s ? s->sim.truth.z_star.data() : nullptr;
}

int zlp_sim_attributes(const zlp_sim* s, int m, unsigned long long seed,
                       zlp_attributes** out) {
  if (!s || !out) {
    set_error("zlp_sim_attributes: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    const int eff_m = m < 0 ? s->default_m : m;
    auto* h = new zlp_attributes;
    h->attrs.c = contaminate(s->sim.truth.z_star, eff_m, seed);
    h->attrs.C = num_groups(s->sim.truth.z_star);
    for (int l = 1; l <= h->attrs.C; ++l)
      h->attrs.level_names.push_back(std::to_string(l));
    *out = h;
    return ZLP_OK;
  });
}

void zlp_sim_free(zlp_sim* s) { delete s; }

/* ---- evaluation ---- */

int zlp_evaluate(const zlp_summary* s, const zlp_trace* trace, const zlp_network* net,
                 const char* truth_path, zlp_eval* out) {
  if (!s || !net || !truth_path || !out) {
    set_error("zlp_evaluate: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    const GroundTruth truth = load_truth(truth_path);
    const FitSummary& fit = s->fit;
    const int n = fit.n;
    if (static_cast<int>(truth.z_star.size()) != n)
      throw DataError("truth partition length does not match the summary");
    const int Kstar = num_groups(truth.z_star);

    out->K_hat = fit.K_hat;
    out->vi = vi_distance(fit.z_hat, canonicalize(truth.z_star));
    out->evi = trace ? mean_vi(trace->trace, canonicalize(truth.z_star)) : nan_value();
    out->beta_hat = fit.beta_hat;

    // pairwise absolute errors over unordered pairs i > j
    auto mean_sd = [](const std::vector<double>& v, double* m, double* sd) {
      double s1 = 0.0;
      for (double x : v) s1 += x;
      *m = s1 / static_cast<double>(v.size());
      double s2 = 0.0;
      for (double x : v) s2 += (x - *m) * (x - *m);
      *sd = std::sqrt(s2 / static_cast<double>(v.size()));  // population sd
    };

    out->mean_abs_p_err = out->sd_abs_p_err = nan_value();
    if (!truth.P_star.empty()) {
      std::vector<double> errs;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
          const double pstar =
              truth.P_star[static_cast<std::size_t>(truth.z_star[i] - 1) * Kstar +
                           (truth.z_star[j] - 1)];
          errs.push_back(
              std::abs(fit.p_hat[static_cast<std::size_t>(i) * n + j] - pstar));
        }
      mean_sd(errs, &out->mean_abs_p_err, &out->sd_abs_p_err);
    } else {
      // Poisson truth: distance of p_hat from zero
      std::vector<double> errs;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
          errs.push_back(std::abs(fit.p_hat[static_cast<std::size_t>(i) * n + j]));
      mean_sd(errs, &out->mean_abs_p_err, &out->sd_abs_p_err);
    }

    out->mean_abs_dist_err = out->sd_abs_dist_err = nan_value();
    if (!truth.U_star.empty() && truth.d > 0) {
      std::vector<double> errs;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
          double ssq = 0.0;
          for (int a = 0; a < truth.d; ++a) {
            const double diff =
                truth.U_star[static_cast<std::size_t>(i) * truth.d + a] -
                truth.U_star[static_cast<std::size_t>(j) * truth.d + a];
            ssq += diff * diff;
          }
          errs.push_back(std::abs(fit.dist_hat[static_cast<std::size_t>(i) * n + j] -
                                  std::sqrt(ssq)));
        }
      mean_sd(errs, &out->mean_abs_dist_err, &out->sd_abs_dist_err);
    }

    out->mean_abs_lambda_err = out->sd_abs_lambda_err = nan_value();
    if (!truth.lambda_star.empty()) {
      std::vector<double> errs;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
          const double lstar =
              truth.lambda_star[static_cast<std::size_t>(truth.z_star[i] - 1) * Kstar +
                                (truth.z_star[j] - 1)];
          errs.push_back(
              std::abs(fit.lambda_hat[static_cast<std::size_t>(i) * n + j] - lstar));
        }
      mean_sd(errs, &out->mean_abs_lambda_err, &out->sd_abs_lambda_err);
    }

    out->roc_auc = nan_value();
    if (!truth.nu_star.empty()) {
      std::vector<double> score;
      std::vector<int> label;
      bool has0 = false, has1 = false;
      for (int i = 0; i < n; ++i)
        for (int j = (net->net.directed ? 0 : 0); j < (net->net.directed ? n : i); ++j) {
          if (i == j) continue;
          const std::size_t e = static_cast<std::size_t>(i) * n + j;
          if (net->net.y[e] != 0) continue;
          score.push_back(fit.nu_hat[e]);
          const int l = truth.nu_star[e] ? 1 : 0;
          label.push_back(l);
          (l ? has1 : has0) = true;
        }
      if (has0 && has1) out->roc_auc = roc_auc(score, label);
    }
    return ZLP_OK;
  });
}

int zlp_roc_csv(const zlp_summary* s, const zlp_network* net, const char* truth_path,
                const char* out_path) {
  if (!s || !net || !truth_path || !out_path) {
    set_error("zlp_roc_csv: bad arguments");
    return ZLP_USAGE;
  }
  return guarded([&] {
    const GroundTruth truth = load_truth(truth_path);
    if (truth.nu_star.empty())
      throw DataError("truth file carries no unusual-zero indicators");
    const FitSummary& fit = s->fit;
    const int n = fit.n;
    std::vector<double> score;
    std::vector<int> label;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < (net->net.directed ? n : i); ++j) {
        if (i == j) continue;
        const std::size_t e = static_cast<std::size_t>(i) * n + j;
        if (net->net.y[e] != 0) continue;
        score.push_back(fit.nu_hat[e]);
        label.push_back(truth.nu_star[e] ? 1 : 0);
      }
    const std::vector<RocPoint> pts = roc_curve(score, label);
    std::ofstream out(out_path);
    if (!out) throw DataError(std::string("cannot open for write: ") + out_path);
    out << "fpr,tpr,threshold\n";
    out.precision(17);
    for (const auto& p : pts) out << p.fpr << "," << p.tpr << "," << p.threshold << "\n";
    return ZLP_OK;
  });
}

int zlp_network_hash(const zlp_network* net, char out[17]) {
  if (!net || !out) {
    set_error("zlp_network_hash: bad arguments");
    return ZLP_USAGE;
  }
  const std::string h = data_hash(net->net);
  std::memcpy(out, h.c_str(), 17);
  return ZLP_OK;
}

double zlp_vi_distance(const int* a, const int* b, int n) {
  if (!a || !b || n < 1) return -1.0;
  Partition pa(a, a + n), pb(b, b + n);
  try {
    return vi_distance(canonicalize(pa), canonicalize(pb));
  } catch (const std::exception& e) {
    set_error(e.what());
    return -1.0;
  }
}

}  // extern "C"
