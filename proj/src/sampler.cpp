#include "sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace zlpcm {

void SamplerConfig::validate() const {
  if (iterations < 1) throw DataError("iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations)
    throw DataError("burn_in must be in [0, iterations)");
  if (thin < 1) throw DataError("thin must be >= 1");
  if (partition_init == PartitionInit::KMeans && kmeans_k < 1)
    throw DataError("kmeans_k must be >= 1");
}

Sampler::Sampler(WeightedNetwork data, std::optional<NodeAttributes> attrs,
                 Hyperparameters hyper, SamplerConfig config)
    : data_(std::move(data)),
      attrs_(std::move(attrs)),
      hyper_(hyper),
      config_(config),
      table_(hyper.alpha),
      rng_init_(config.seed, Stream::Init),
      rng_nu_(config.seed, Stream::Nu),
      rng_x_(config.seed, Stream::X),
      rng_beta_(config.seed, Stream::Beta),
      rng_u_(config.seed, Stream::U),
      rng_z_(config.seed, Stream::Z),
      rng_tae_(config.seed, Stream::Tae),
      rng_p_(config.seed, Stream::P) {
  validate_network(data_);
  config_.validate();
  config_.supervised = attrs_.has_value();
  n_ = data_.n;
  d_ = hyper_.d;
  directed_ = data_.directed;
  if (attrs_) {
    if (static_cast<int>(attrs_->c.size()) != n_)
      throw DataError("attribute vector length does not match node count");
    if (hyper_.cohesion.empty()) hyper_.cohesion.assign(attrs_->C, 1.0);
    if (static_cast<int>(hyper_.cohesion.size()) != attrs_->C)
      throw DataError("cohesion vector length does not match attribute levels");
  }
  hyper_.validate();
  if (config_.adapt_until < 0) config_.adapt_until = config_.burn_in;

  const std::size_t max_cnt = static_cast<std::size_t>(n_) * n_ + 2;
  lg_b1_ = ShiftedLgammaTable(hyper_.beta1, max_cnt);
  lg_b2_ = ShiftedLgammaTable(hyper_.beta2, max_cnt);
  lg_b12_ = ShiftedLgammaTable(hyper_.beta1 + hyper_.beta2, max_cnt);
  log_beta0_ = log_beta(hyper_.beta1, hyper_.beta2);
  lg_u_.resize(n_ + 1);
  for (int m = 0; m <= n_; ++m)
    lg_u_[m] = std::lgamma(hyper_.alpha1 + 0.5 * d_ * m);

  init_state();
  rebuild_caches();
}

double Sampler::lb(long long nu, long long cnt) const {
  return lg_b1_(static_cast<std::size_t>(nu)) +
         lg_b2_(static_cast<std::size_t>(cnt - nu)) -
         lg_b12_(static_cast<std::size_t>(cnt)) - log_beta0_;
}

double Sampler::group_term(const GroupStats& g) const {
  if (g.n == 0) return 0.0;
  double norm_sq = 0.0;
  for (int a = 0; a < d_; ++a) norm_sq += g.sum_u[a] * g.sum_u[a];
  const double bracket = hyper_.alpha2 - norm_sq / (g.n + hyper_.omega) + g.sum_sq;
  const double half_dn = 0.5 * d_ * g.n;
  return hyper_.alpha1 * std::log(hyper_.alpha2) - lg_u_[0] + lg_u_[g.n] -
         half_dn * std::log(M_PI) +
         0.5 * d_ * (std::log(hyper_.omega) - std::log(hyper_.omega + g.n)) -
         (half_dn + hyper_.alpha1) * std::log(bracket);
}

void Sampler::init_state() {
  // intercept at the log mean positive weight
  long long s = 0, cnt = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j && data_.at(i, j) > 0) {
        s += data_.at(i, j);
        ++cnt;
      }
  state_.beta = cnt > 0 ? std::log(static_cast<double>(s) / cnt) : 0.0;

  if (config_.position_init == SamplerConfig::PositionInit::GeodesicMds)
    state_.U = init_positions_mds(data_, d_);
  else {
    state_.U.resize(static_cast<std::size_t>(n_) * d_);
    for (double& v : state_.U) v = rng_init_.normal(0.0, 1.0);
  }

  if (config_.partition_init == SamplerConfig::PartitionInit::KMeans) {
    state_.z = init_partition_kmeans(state_.U, n_, d_,
                                     std::min(config_.kmeans_k, n_), rng_init_);
  } else {
    state_.z.resize(n_);
    for (int i = 0; i < n_; ++i) state_.z[i] = i + 1;
  }
  state_.K = num_groups(state_.z);

  state_.nu.assign(static_cast<std::size_t>(n_) * n_, 0);
  state_.X = data_.y;

  const int K = state_.K;
  state_.P.assign(static_cast<std::size_t>(K) * K, 0.0);
  for (int g = 0; g < K; ++g)
    for (int h = (directed_ ? 0 : g); h < K; ++h) {
      const double v = rng_init_.beta(hyper_.beta1, hyper_.beta2);
      state_.P[static_cast<std::size_t>(g) * K + h] = v;
      if (!directed_) state_.P[static_cast<std::size_t>(h) * K + g] = v;
    }
}

void Sampler::rebuild_caches() {
  D_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
  E_.assign(static_cast<std::size_t>(n_) * n_, 1.0);
  SE_ = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      double ssq = 0.0;
      for (int a = 0; a < d_; ++a) {
        const double diff = state_.U[static_cast<std::size_t>(i) * d_ + a] -
                            state_.U[static_cast<std::size_t>(j) * d_ + a];
        ssq += diff * diff;
      }
      const double dij = std::sqrt(ssq);
      const double eij = std::exp(-dij);
      D_[static_cast<std::size_t>(i) * n_ + j] = dij;
      D_[static_cast<std::size_t>(j) * n_ + i] = dij;
      E_[static_cast<std::size_t>(i) * n_ + j] = eij;
      E_[static_cast<std::size_t>(j) * n_ + i] = eij;
      SE_ += eij;
    }

  Sx_ = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = (directed_ ? 0 : i + 1); j < n_; ++j)
      if (i != j) Sx_ += state_.X[static_cast<std::size_t>(i) * n_ + j];

  const int K = state_.K;
  groups_.assign(K, GroupStats{});
  for (auto& g : groups_) g.sum_u.assign(d_, 0.0);
  for (int i = 0; i < n_; ++i) {
    GroupStats& g = groups_[state_.z[i] - 1];
    ++g.n;
    for (int a = 0; a < d_; ++a) {
      const double u = state_.U[static_cast<std::size_t>(i) * d_ + a];
      g.sum_u[a] += u;
      g.sum_sq += u * u;
    }
  }

  if (attrs_) {
    attr_counts_.assign(static_cast<std::size_t>(K) * attrs_->C, 0);
    for (int i = 0; i < n_; ++i)
      ++attr_counts_[static_cast<std::size_t>(state_.z[i] - 1) * attrs_->C +
                     (attrs_->c[i] - 1)];
  } else {
    attr_counts_.clear();
  }

  rebuild_block_nu();
}

void Sampler::rebuild_block_nu() {
  const int K = state_.K;
  block_nu_.assign(static_cast<std::size_t>(K) * K, 0);
  for (int i = 0; i < n_; ++i)
    for (int j = (directed_ ? 0 : i + 1); j < n_; ++j) {
      if (i == j) continue;
      if (!state_.nu[static_cast<std::size_t>(i) * n_ + j]) continue;
      int g = state_.z[i] - 1, h = state_.z[j] - 1;
      if (!directed_ && g > h) std::swap(g, h);
      ++block_nu_[static_cast<std::size_t>(g) * K + h];
    }
}

namespace {

void erase_row_col_d(std::vector<double>& m, int K, int idx) {
  std::vector<double> out(static_cast<std::size_t>(K - 1) * (K - 1));
  for (int g = 0, go = 0; g < K; ++g) {
    if (g == idx) continue;
    for (int h = 0, ho = 0; h < K; ++h) {
      if (h == idx) continue;
      out[static_cast<std::size_t>(go) * (K - 1) + ho] =
          m[static_cast<std::size_t>(g) * K + h];
      ++ho;
    }
    ++go;
  }
  m = std::move(out);
}

void erase_row_col_ll(std::vector<long long>& m, int K, int idx) {
  std::vector<long long> out(static_cast<std::size_t>(K - 1) * (K - 1));
  for (int g = 0, go = 0; g < K; ++g) {
    if (g == idx) continue;
    for (int h = 0, ho = 0; h < K; ++h) {
      if (h == idx) continue;
      out[static_cast<std::size_t>(go) * (K - 1) + ho] =
          m[static_cast<std::size_t>(g) * K + h];
      ++ho;
    }
    ++go;
  }
  m = std::move(out);
}

void expand_row_col_d(std::vector<double>& m, int K, double fill) {
  std::vector<double> out(static_cast<std::size_t>(K + 1) * (K + 1), fill);
  for (int g = 0; g < K; ++g)
    for (int h = 0; h < K; ++h)
      out[static_cast<std::size_t>(g) * (K + 1) + h] =
          m[static_cast<std::size_t>(g) * K + h];
  m = std::move(out);
}

void expand_row_col_ll(std::vector<long long>& m, int K) {
  std::vector<long long> out(static_cast<std::size_t>(K + 1) * (K + 1), 0);
  for (int g = 0; g < K; ++g)
    for (int h = 0; h < K; ++h)
      out[static_cast<std::size_t>(g) * (K + 1) + h] =
          m[static_cast<std::size_t>(g) * K + h];
  m = std::move(out);
}

}  // namespace

void Sampler::canonicalize_labels() {
  const int K = state_.K;
  std::vector<int> perm(K, 0);  // old (0-based) -> new (1-based)
  int next = 0;
  for (int i = 0; i < n_; ++i) {
    const int g = state_.z[i] - 1;
    if (perm[g] == 0) perm[g] = ++next;
  }
  bool identity = true;
  for (int g = 0; g < K; ++g)
    if (perm[g] != g + 1) {
      identity = false;
      break;
    }
  if (identity) return;

  for (int i = 0; i < n_; ++i) state_.z[i] = perm[state_.z[i] - 1];

  std::vector<GroupStats> groups(K);
  for (int g = 0; g < K; ++g) groups[perm[g] - 1] = std::move(groups_[g]);
  groups_ = std::move(groups);

  std::vector<long long> bn(static_cast<std::size_t>(K) * K, 0);
  for (int g = 0; g < K; ++g)
    for (int h = 0; h < K; ++h) {
      int pg = perm[g] - 1, ph = perm[h] - 1;
      if (!directed_) {
        if (g > h) continue;
        if (pg > ph) std::swap(pg, ph);
      }
      bn[static_cast<std::size_t>(pg) * K + ph] =
          block_nu_[static_cast<std::size_t>(g) * K + h];
    }
  block_nu_ = std::move(bn);

  std::vector<double> P(static_cast<std::size_t>(K) * K, 0.0);
  for (int g = 0; g < K; ++g)
    for (int h = 0; h < K; ++h)
      P[static_cast<std::size_t>(perm[g] - 1) * K + (perm[h] - 1)] =
          state_.P[static_cast<std::size_t>(g) * K + h];
  state_.P = std::move(P);

  if (attrs_) {
    const int C = attrs_->C;
    std::vector<int> ac(static_cast<std::size_t>(K) * C, 0);
    for (int g = 0; g < K; ++g)
      for (int c = 0; c < C; ++c)
        ac[static_cast<std::size_t>(perm[g] - 1) * C + c] =
            attr_counts_[static_cast<std::size_t>(g) * C + c];
    attr_counts_ = std::move(ac);
  }
}

Sampler::NuToken Sampler::step_nu() {
  const int K = state_.K;
  const double eb = std::exp(state_.beta);
  for (int i = 0; i < n_; ++i)
    for (int j = (directed_ ? 0 : i + 1); j < n_; ++j) {
      if (i == j) continue;
      const std::size_t idx = static_cast<std::size_t>(i) * n_ + j;
      unsigned char v = 0;
      if (data_.y[idx] == 0) {
        const double p =
            state_.P[static_cast<std::size_t>(state_.z[i] - 1) * K + (state_.z[j] - 1)];
        double pr;
        if (p <= 0.0)
          pr = 0.0;
        else if (p >= 1.0)
          pr = 1.0;
        else {
          const double lam = eb * E_[idx];
          pr = p / (p + (1.0 - p) * std::exp(-lam));
        }
        v = rng_nu_.bernoulli(pr) ? 1 : 0;
      }
      state_.nu[idx] = v;
      if (!directed_) state_.nu[static_cast<std::size_t>(j) * n_ + i] = v;
    }
  return NuToken{};
}

void Sampler::step_X(NuToken) {
  const double eb = std::exp(state_.beta);
  Sx_ = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = (directed_ ? 0 : i + 1); j < n_; ++j) {
      if (i == j) continue;
      const std::size_t idx = static_cast<std::size_t>(i) * n_ + j;
      long long x = data_.y[idx];
      if (state_.nu[idx]) x = rng_x_.poisson(eb * E_[idx]);
      state_.X[idx] = x;
      if (!directed_) state_.X[static_cast<std::size_t>(j) * n_ + i] = x;
      Sx_ += x;
    }
}

bool Sampler::step_beta() {
  ++counters_.beta_prop;
  ++window_beta_prop_;
  const double cur = state_.beta;
  const double prop = cur + rng_beta_.normal(0.0, std::sqrt(hyper_.sigma2_beta));
  const double u = rng_beta_.uniform();
  if (prop < hyper_.beta_lo || prop > hyper_.beta_hi) return false;
  const double se_tot = (directed_ ? 2.0 : 1.0) * SE_;
  const double delta = (prop - cur) * Sx_ - (std::exp(prop) - std::exp(cur)) * se_tot;
  if (std::log(u) < delta) {
    state_.beta = prop;
    ++counters_.beta_acc;
    ++window_beta_acc_;
    return true;
  }
  return false;
}

int Sampler::step_U() {
  const double eb = std::exp(state_.beta);
  const double sd = std::sqrt(hyper_.sigma2_U);
  int accepted = 0;
  std::vector<double> nd(n_), ne(n_), up(d_);
  for (int i = 0; i < n_; ++i) {
    ++counters_.u_prop;
    ++window_u_prop_;
    double up_sq = 0.0;
    for (int a = 0; a < d_; ++a) {
      up[a] = state_.U[static_cast<std::size_t>(i) * d_ + a] + rng_u_.normal(0.0, sd);
      up_sq += up[a] * up[a];
    }
    double dX = 0.0, dE = 0.0;
    for (int j = 0; j < n_; ++j) {
      if (j == i) continue;
      double ssq = 0.0;
      for (int a = 0; a < d_; ++a) {
        const double diff = up[a] - state_.U[static_cast<std::size_t>(j) * d_ + a];
        ssq += diff * diff;
      }
      nd[j] = std::sqrt(ssq);
      ne[j] = std::exp(-nd[j]);
      const std::size_t ij = static_cast<std::size_t>(i) * n_ + j;
      const std::size_t ji = static_cast<std::size_t>(j) * n_ + i;
      const long long x = directed_ ? state_.X[ij] + state_.X[ji] : state_.X[ij];
      dX += x * (D_[ij] - nd[j]);
      dE += ne[j] - E_[ij];
    }
    double delta = dX - (directed_ ? 2.0 : 1.0) * eb * dE;

    GroupStats& g = groups_[state_.z[i] - 1];
    double ui_sq = 0.0;
    GroupStats gp = g;
    for (int a = 0; a < d_; ++a) {
      const double u = state_.U[static_cast<std::size_t>(i) * d_ + a];
      ui_sq += u * u;
      gp.sum_u[a] += up[a] - u;
    }
    gp.sum_sq += up_sq - ui_sq;
    delta += group_term(gp) - group_term(g);

    if (std::log(rng_u_.uniform()) < delta) {
      ++accepted;
      ++counters_.u_acc;
      ++window_u_acc_;
      for (int a = 0; a < d_; ++a)
        state_.U[static_cast<std::size_t>(i) * d_ + a] = up[a];
      for (int j = 0; j < n_; ++j) {
        if (j == i) continue;
        const std::size_t ij = static_cast<std::size_t>(i) * n_ + j;
        const std::size_t ji = static_cast<std::size_t>(j) * n_ + i;
        SE_ += ne[j] - E_[ij];
        D_[ij] = D_[ji] = nd[j];
        E_[ij] = E_[ji] = ne[j];
      }
      g = std::move(gp);
    }
  }
  return accepted;
}

Sampler::ZToken Sampler::step_z() {
  // nu and U moved since the caches were last rebuilt
  rebuild_caches();
  if (n_ == 1) return ZToken{};

  const double alpha = hyper_.alpha;
  const int C = attrs_ ? attrs_->C : 0;
  double omega0 = 0.0;
  for (double o : hyper_.cohesion) omega0 += o;

  std::vector<long long> r_out, r_in;
  std::vector<double> logw;
  GroupStats cand;
  cand.sum_u.resize(d_);

  for (int i = 0; i < n_; ++i) {
    const int ci = attrs_ ? attrs_->c[i] : 0;
    int g = state_.z[i] - 1;
    int K = state_.K;

    // remove node i from its group's sufficient statistics
    GroupStats& gs = groups_[g];
    --gs.n;
    double ui_sq = 0.0;
    for (int a = 0; a < d_; ++a) {
      const double u = state_.U[static_cast<std::size_t>(i) * d_ + a];
      gs.sum_u[a] -= u;
      ui_sq += u * u;
    }
    gs.sum_sq -= ui_sq;
    if (attrs_) --attr_counts_[static_cast<std::size_t>(g) * C + (ci - 1)];

    // i's indicator sums toward each group, excluding i itself
    r_out.assign(K, 0);
    if (directed_) r_in.assign(K, 0);
    for (int j = 0; j < n_; ++j) {
      if (j == i) continue;
      const int h = state_.z[j] - 1;
      r_out[h] += state_.nu[static_cast<std::size_t>(i) * n_ + j];
      if (directed_) r_in[h] += state_.nu[static_cast<std::size_t>(j) * n_ + i];
    }
    if (directed_) {
      for (int h = 0; h < K; ++h) {
        block_nu_[static_cast<std::size_t>(g) * K + h] -= r_out[h];
        block_nu_[static_cast<std::size_t>(h) * K + g] -= r_in[h];
      }
    } else {
      for (int h = 0; h < K; ++h) {
        const int lo = std::min(g, h), hi = std::max(g, h);
        block_nu_[static_cast<std::size_t>(lo) * K + hi] -= r_out[h];
      }
    }

    if (gs.n == 0) {
      // i was a singleton; drop its group
      groups_.erase(groups_.begin() + g);
      erase_row_col_ll(block_nu_, K, g);
      erase_row_col_d(state_.P, K, g);
      if (attrs_)
        attr_counts_.erase(attr_counts_.begin() + static_cast<std::size_t>(g) * C,
                           attr_counts_.begin() + static_cast<std::size_t>(g + 1) * C);
      for (int j = 0; j < n_; ++j)
        if (state_.z[j] > g + 1) --state_.z[j];
      r_out.erase(r_out.begin() + g);
      if (directed_) r_in.erase(r_in.begin() + g);
      --K;
      state_.K = K;
    }

    if (K == 0) {
      // only possible when n == 1 handled above; defensive
      state_.z[i] = 1;
      state_.K = 1;
      groups_.push_back(GroupStats{});
      groups_.back().sum_u.assign(d_, 0.0);
      block_nu_.assign(1, 0);
      state_.P.assign(1, hyper_.beta1 / (hyper_.beta1 + hyper_.beta2));
      if (attrs_) attr_counts_.assign(C, 0);
      g = 0;
    } else {
      logw.assign(K + 1, 0.0);
      for (int k = 0; k < K; ++k) {
        double w = std::log(groups_[k].n + alpha);
        if (attrs_)
          w += std::log(
                   (attr_counts_[static_cast<std::size_t>(k) * C + (ci - 1)] +
                    hyper_.cohesion[ci - 1]) /
                   (groups_[k].n + omega0));
        logw[k] = w;
      }
      {
        double w = std::log(alpha) + table_.log_weight(n_, K + 1) -
                   table_.log_weight(n_, K);
        if (attrs_) w += std::log(hyper_.cohesion[ci - 1] / omega0);
        logw[K] = w;
      }

      if (!flat_) {
        for (int k = 0; k < K; ++k) {
          // collapsed position marginal
          cand = groups_[k];
          for (int a = 0; a < d_; ++a)
            cand.sum_u[a] += state_.U[static_cast<std::size_t>(i) * d_ + a];
          ++cand.n;
          cand.sum_sq += ui_sq;
          logw[k] += group_term(cand) - group_term(groups_[k]);

          // collapsed indicator blocks touched by adding i to group k
          double dnu = 0.0;
          if (directed_) {
            for (int h = 0; h < K; ++h) {
              const long long mh = groups_[h].n;
              if (h == k) {
                const long long c = mh * (mh - 1);
                const long long bn = block_nu_[static_cast<std::size_t>(k) * K + k];
                dnu += lb(bn + r_out[k] + r_in[k], c + 2 * mh) - lb(bn, c);
              } else {
                const long long mk = groups_[k].n;
                const long long c = mk * mh;
                const long long bkh = block_nu_[static_cast<std::size_t>(k) * K + h];
                const long long bhk = block_nu_[static_cast<std::size_t>(h) * K + k];
                dnu += lb(bkh + r_out[h], c + mh) - lb(bkh, c);
                dnu += lb(bhk + r_in[h], c + mh) - lb(bhk, c);
              }
            }
          } else {
            for (int h = 0; h < K; ++h) {
              const long long mh = groups_[h].n;
              if (h == k) {
                const long long c = mh * (mh - 1) / 2;
                const long long bn = block_nu_[static_cast<std::size_t>(k) * K + k];
                dnu += lb(bn + r_out[k], c + mh) - lb(bn, c);
              } else {
                const long long mk = groups_[k].n;
                const long long c = mk * mh;
                const int lo = std::min(k, h), hi = std::max(k, h);
                const long long bn = block_nu_[static_cast<std::size_t>(lo) * K + hi];
                dnu += lb(bn + r_out[h], c + mh) - lb(bn, c);
              }
            }
          }
          logw[k] += dnu;
        }
        {
          // singleton group: empty position term is zero, fresh blocks
          cand.n = 1;
          cand.sum_sq = ui_sq;
          for (int a = 0; a < d_; ++a)
            cand.sum_u[a] = state_.U[static_cast<std::size_t>(i) * d_ + a];
          double w = group_term(cand);
          for (int h = 0; h < K; ++h) {
            const long long mh = groups_[h].n;
            w += lb(r_out[h], mh);
            if (directed_) w += lb(r_in[h], mh);
          }
          logw[K] += w;
        }
      }

      const double lse = log_sum_exp(logw);
      const double u = rng_z_.uniform();
      double acc = 0.0;
      int pick = K;
      for (int k = 0; k <= K; ++k) {
        acc += std::exp(logw[k] - lse);
        if (u <= acc) {
          pick = k;
          break;
        }
      }

      if (pick == K) {
        // open a new group
        groups_.push_back(GroupStats{});
        groups_.back().sum_u.assign(d_, 0.0);
        expand_row_col_ll(block_nu_, K);
        expand_row_col_d(state_.P, K, hyper_.beta1 / (hyper_.beta1 + hyper_.beta2));
        if (attrs_) attr_counts_.insert(attr_counts_.end(), C, 0);
        ++K;
        state_.K = K;
      }
      state_.z[i] = pick + 1;
      g = pick;
    }

    // add node i back under its (possibly new) label
    GroupStats& gn = groups_[g];
    ++gn.n;
    for (int a = 0; a < d_; ++a)
      gn.sum_u[a] += state_.U[static_cast<std::size_t>(i) * d_ + a];
    gn.sum_sq += ui_sq;
    if (attrs_) ++attr_counts_[static_cast<std::size_t>(g) * C + (ci - 1)];
    const int K2 = state_.K;
    if (directed_) {
      for (int h = 0; h < K2; ++h) {
        const long long ro = h < static_cast<int>(r_out.size()) ? r_out[h] : 0;
        const long long ri = h < static_cast<int>(r_in.size()) ? r_in[h] : 0;
        block_nu_[static_cast<std::size_t>(g) * K2 + h] += ro;
        block_nu_[static_cast<std::size_t>(h) * K2 + g] += ri;
      }
    } else {
      for (int h = 0; h < K2; ++h) {
        const long long ro = h < static_cast<int>(r_out.size()) ? r_out[h] : 0;
        const int lo = std::min(g, h), hi = std::max(g, h);
        block_nu_[static_cast<std::size_t>(lo) * K2 + hi] += ro;
      }
    }
  }

  canonicalize_labels();
  return ZToken{};
}

double Sampler::log_f_nu_current(const Partition& z) const {
  return log_f_nu_given_z(state_.nu, n_, directed_, z, hyper_);
}

Sampler::TaeA Sampler::solve_tae_a(int n_g, double p0) {
  auto log_p_empty = [n_g](double a) {
    return std::log(2.0) + std::lgamma(2.0 * a) + std::lgamma(a + n_g) -
           std::lgamma(a) - std::lgamma(2.0 * a + n_g);
  };
  const double target = std::log(p0);
  double lo = -20.0, hi = 20.0;
  if (log_p_empty(std::exp(hi)) >= target) {
    const double a = std::exp(hi);
    return TaeA{a, std::exp(log_p_empty(a)), true};
  }
  if (log_p_empty(std::exp(lo)) <= target) {
    const double a = std::exp(lo);
    return TaeA{a, std::exp(log_p_empty(a)), true};
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (log_p_empty(std::exp(mid)) > target)
      lo = mid;
    else
      hi = mid;
  }
  const double a = std::exp(0.5 * (lo + hi));
  return TaeA{a, std::exp(log_p_empty(a)), false};
}

Sampler::ZToken Sampler::step_tae(ZToken tok) {
  const int K = state_.K;
  if (n_ <= 1) return tok;

  const double lg_alpha = std::lgamma(hyper_.alpha);
  auto la = [&](int m) { return std::lgamma(hyper_.alpha + m) - lg_alpha; };
  const int C = attrs_ ? attrs_->C : 0;

  bool do_eject;
  if (K == 1)
    do_eject = true;
  else if (K == n_)
    do_eject = false;
  else
    do_eject = rng_tae_.bernoulli(hyper_.p_eject);

  if (static_cast<int>(tae_a_.size()) < n_ + 1) tae_a_.resize(n_ + 1, TaeA{0.0, 0.0, false});

  if (do_eject) {
    const int g = static_cast<int>(rng_tae_.below(K));
    const int ng = groups_[g].n;
    if (tae_a_[ng].a == 0.0) tae_a_[ng] = solve_tae_a(ng, hyper_.p0);
    const TaeA& ta = tae_a_[ng];
    const double pe = rng_tae_.beta(ta.a, ta.a);

    std::vector<int> moved;
    int s1 = 0;
    for (int i = 0; i < n_; ++i) {
      if (state_.z[i] != g + 1) continue;
      if (rng_tae_.bernoulli(pe))
        moved.push_back(i);
      else
        ++s1;
    }
    const int s2 = static_cast<int>(moved.size());
    if (s1 == 0 || s2 == 0) {
      ++counters_.eject_abandoned;
      return tok;
    }
    ++counters_.eject_prop;

    Partition zp = state_.z;
    for (int i : moved) zp[i] = K + 1;

    double delta = table_.log_weight(n_, K + 1) - table_.log_weight(n_, K) +
                   la(s1) + la(s2) - la(ng);
    if (attrs_) {
      std::vector<int> c_all(attr_counts_.begin() + static_cast<std::size_t>(g) * C,
                             attr_counts_.begin() + static_cast<std::size_t>(g + 1) * C);
      std::vector<int> c2(C, 0);
      for (int i : moved) ++c2[attrs_->c[i] - 1];
      std::vector<int> c1 = c_all;
      for (int c = 0; c < C; ++c) c1[c] -= c2[c];
      delta += log_cohesion(c1, hyper_.cohesion) + log_cohesion(c2, hyper_.cohesion) -
               log_cohesion(c_all, hyper_.cohesion);
    }

    GroupStats g2;
    g2.sum_u.assign(d_, 0.0);
    if (!flat_) {
      for (int i : moved) {
        ++g2.n;
        for (int a = 0; a < d_; ++a) {
          const double u = state_.U[static_cast<std::size_t>(i) * d_ + a];
          g2.sum_u[a] += u;
          g2.sum_sq += u * u;
        }
      }
      GroupStats g1 = groups_[g];
      g1.n -= g2.n;
      for (int a = 0; a < d_; ++a) g1.sum_u[a] -= g2.sum_u[a];
      g1.sum_sq -= g2.sum_sq;
      delta += group_term(g1) + group_term(g2) - group_term(groups_[g]);
      delta += log_f_nu_current(zp) - log_f_nu_current(state_.z);
    }

    const double mt = std::lgamma(2.0 * ta.a) - 2.0 * std::lgamma(ta.a) +
                      std::lgamma(ta.a + s1) + std::lgamma(ta.a + s2) -
                      std::lgamma(2.0 * ta.a + ng) - std::log1p(-ta.p0_actual);
    const double log_fwd = (K == 1 ? 0.0 : std::log(hyper_.p_eject)) -
                           std::log(static_cast<double>(K)) + mt;
    const double log_rev = (K + 1 == n_ ? 0.0 : std::log1p(-hyper_.p_eject)) -
                           std::log(static_cast<double>(K + 1) * K);

    if (std::log(rng_tae_.uniform()) < delta + log_rev - log_fwd) {
      ++counters_.eject_acc;
      state_.z = std::move(zp);
      state_.K = K + 1;
      if (!flat_) {
        GroupStats g1 = groups_[g];
        g1.n -= g2.n;
        for (int a = 0; a < d_; ++a) g1.sum_u[a] -= g2.sum_u[a];
        g1.sum_sq -= g2.sum_sq;
        groups_[g] = std::move(g1);
        groups_.push_back(std::move(g2));
      } else {
        // group stats were not computed above; recompute both
        GroupStats ga, gb;
        ga.sum_u.assign(d_, 0.0);
        gb.sum_u.assign(d_, 0.0);
        for (int i = 0; i < n_; ++i) {
          GroupStats* t = nullptr;
          if (state_.z[i] == g + 1)
            t = &ga;
          else if (state_.z[i] == K + 1)
            t = &gb;
          if (!t) continue;
          ++t->n;
          for (int a = 0; a < d_; ++a) {
            const double u = state_.U[static_cast<std::size_t>(i) * d_ + a];
            t->sum_u[a] += u;
            t->sum_sq += u * u;
          }
        }
        groups_[g] = std::move(ga);
        groups_.push_back(std::move(gb));
      }
      if (attrs_) {
        std::vector<int> c2(C, 0);
        for (int i : moved) ++c2[attrs_->c[i] - 1];
        for (int c = 0; c < C; ++c)
          attr_counts_[static_cast<std::size_t>(g) * C + c] -= c2[c];
        attr_counts_.insert(attr_counts_.end(), c2.begin(), c2.end());
      }
      expand_row_col_d(state_.P, K, hyper_.beta1 / (hyper_.beta1 + hyper_.beta2));
      rebuild_block_nu();
      canonicalize_labels();
    }
  } else {
    ++counters_.absorb_prop;
    int a1 = static_cast<int>(rng_tae_.below(K));
    int b1 = static_cast<int>(rng_tae_.below(K - 1));
    if (b1 >= a1) ++b1;
    const int g = std::min(a1, b1), h = std::max(a1, b1);
    const int ng = groups_[g].n, nh = groups_[h].n;
    const int ntot = ng + nh;

    Partition zp = state_.z;
    for (int i = 0; i < n_; ++i) {
      if (zp[i] == h + 1)
        zp[i] = g + 1;
      else if (zp[i] > h + 1)
        --zp[i];
    }

    double delta = table_.log_weight(n_, K - 1) - table_.log_weight(n_, K) +
                   la(ntot) - la(ng) - la(nh);
    if (attrs_) {
      std::vector<int> cg(attr_counts_.begin() + static_cast<std::size_t>(g) * C,
                          attr_counts_.begin() + static_cast<std::size_t>(g + 1) * C);
      std::vector<int> ch(attr_counts_.begin() + static_cast<std::size_t>(h) * C,
                          attr_counts_.begin() + static_cast<std::size_t>(h + 1) * C);
      std::vector<int> cm = cg;
      for (int c = 0; c < C; ++c) cm[c] += ch[c];
      delta += log_cohesion(cm, hyper_.cohesion) - log_cohesion(cg, hyper_.cohesion) -
               log_cohesion(ch, hyper_.cohesion);
    }
    if (!flat_) {
      GroupStats gm = groups_[g];
      gm.n += groups_[h].n;
      for (int a = 0; a < d_; ++a) gm.sum_u[a] += groups_[h].sum_u[a];
      gm.sum_sq += groups_[h].sum_sq;
      delta += group_term(gm) - group_term(groups_[g]) - group_term(groups_[h]);
      delta += log_f_nu_current(zp) - log_f_nu_current(state_.z);
    }

    if (tae_a_[ntot].a == 0.0) tae_a_[ntot] = solve_tae_a(ntot, hyper_.p0);
    const TaeA& ta = tae_a_[ntot];
    const double mt = std::lgamma(2.0 * ta.a) - 2.0 * std::lgamma(ta.a) +
                      std::lgamma(ta.a + ng) + std::lgamma(ta.a + nh) -
                      std::lgamma(2.0 * ta.a + ntot) - std::log1p(-ta.p0_actual);
    const double log_fwd = (K == n_ ? 0.0 : std::log1p(-hyper_.p_eject)) -
                           std::log(static_cast<double>(K) * (K - 1));
    const double log_rev = (K - 1 == 1 ? 0.0 : std::log(hyper_.p_eject)) -
                           std::log(static_cast<double>(K - 1)) + mt;

    if (std::log(rng_tae_.uniform()) < delta + log_rev - log_fwd) {
      ++counters_.absorb_acc;
      state_.z = std::move(zp);
      state_.K = K - 1;
      GroupStats gm = std::move(groups_[g]);
      gm.n += groups_[h].n;
      for (int a = 0; a < d_; ++a) gm.sum_u[a] += groups_[h].sum_u[a];
      gm.sum_sq += groups_[h].sum_sq;
      groups_[g] = std::move(gm);
      groups_.erase(groups_.begin() + h);
      if (attrs_) {
        for (int c = 0; c < C; ++c)
          attr_counts_[static_cast<std::size_t>(g) * C + c] +=
              attr_counts_[static_cast<std::size_t>(h) * C + c];
        attr_counts_.erase(attr_counts_.begin() + static_cast<std::size_t>(h) * C,
                           attr_counts_.begin() + static_cast<std::size_t>(h + 1) * C);
      }
      erase_row_col_d(state_.P, K, h);
      rebuild_block_nu();
      canonicalize_labels();
    }
  }
  return tok;
}

void Sampler::step_P(ZToken) {
  const int K = state_.K;
  state_.P.assign(static_cast<std::size_t>(K) * K, 0.0);
  for (int g = 0; g < K; ++g)
    for (int h = (directed_ ? 0 : g); h < K; ++h) {
      const long long mg = groups_[g].n, mh = groups_[h].n;
      long long c;
      if (directed_)
        c = (g == h) ? mg * (mg - 1) : mg * mh;
      else
        c = (g == h) ? mg * (mg - 1) / 2 : mg * mh;
      const long long bn = block_nu_[static_cast<std::size_t>(g) * K + h];
      const double v = rng_p_.beta(bn + hyper_.beta1, c - bn + hyper_.beta2);
      state_.P[static_cast<std::size_t>(g) * K + h] = v;
      if (!directed_) state_.P[static_cast<std::size_t>(h) * K + g] = v;
    }
}

void Sampler::sweep() {
  NuToken nt = step_nu();
  step_X(nt);
  step_beta();
  step_U();
  ZToken zt = step_z();
  ZToken zt2 = step_tae(std::move(zt));
  step_P(std::move(zt2));
}

double Sampler::complete_loglik() const {
  const double eb = std::exp(state_.beta);
  auto lfact = [this](long long x) {
    if (x < static_cast<long long>(lfact_.size())) return lfact_[x];
    while (static_cast<long long>(lfact_.size()) <= x) {
      if (lfact_.empty())
        lfact_.push_back(0.0);
      else
        lfact_.push_back(lfact_.back() + std::log(static_cast<double>(lfact_.size())));
    }
    return lfact_[x];
  };

  double acc = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      const std::size_t ij = static_cast<std::size_t>(i) * n_ + j;
      const std::size_t ji = static_cast<std::size_t>(j) * n_ + i;
      const double ll = state_.beta - D_[ij];
      const double lam = eb * E_[ij];
      acc += state_.X[ij] * ll - lam - lfact(state_.X[ij]);
      if (directed_) acc += state_.X[ji] * ll - lam - lfact(state_.X[ji]);
    }

  const int K = state_.K;
  for (int g = 0; g < K && !is_log_zero(acc); ++g)
    for (int h = (directed_ ? 0 : g); h < K; ++h) {
      const long long mg = groups_[g].n, mh = groups_[h].n;
      long long c;
      if (directed_)
        c = (g == h) ? mg * (mg - 1) : mg * mh;
      else
        c = (g == h) ? mg * (mg - 1) / 2 : mg * mh;
      if (c == 0) continue;
      const long long bn = block_nu_[static_cast<std::size_t>(g) * K + h];
      const double p = state_.P[static_cast<std::size_t>(g) * K + h];
      if (bn > 0 && p <= 0.0) {
        acc = kLogZero;
        break;
      }
      if (bn < c && p >= 1.0) {
        acc = kLogZero;
        break;
      }
      if (bn > 0) acc += bn * std::log(p);
      if (bn < c) acc += (c - bn) * std::log1p(-p);
    }
  if (is_log_zero(acc)) return acc;

  for (int g = 0; g < K; ++g) acc += group_term(groups_[g]);

  if (attrs_)
    acc += log_supervised_partition_pmf(state_.z, attrs_->c, hyper_.cohesion, table_);
  else
    acc += log_partition_pmf(state_.z, table_);
  return acc;
}

double Sampler::adapt_log_step(long long window_index) {
  return std::min(1.0, 10.0 / static_cast<double>(window_index));
}

void Sampler::adapt(int t) {
  constexpr int kWindow = 100;
  if (t > config_.adapt_until || t % kWindow != 0) return;
  const double gamma = adapt_log_step(t / kWindow);
  if (window_beta_prop_ > 0) {
    const double rate = static_cast<double>(window_beta_acc_) / window_beta_prop_;
    hyper_.sigma2_beta *= std::exp(gamma * (rate - 0.23));
  }
  if (window_u_prop_ > 0) {
    const double rate = static_cast<double>(window_u_acc_) / window_u_prop_;
    hyper_.sigma2_U *= std::exp(gamma * (rate - 0.23));
  }
  window_beta_acc_ = window_beta_prop_ = 0;
  window_u_acc_ = window_u_prop_ = 0;
}

void Sampler::record(ChainTrace& trace, int t) {
  trace.beta.push_back(state_.beta);
  trace.K.push_back(state_.K);
  trace.z.push_back(state_.z);
  trace.loglik.push_back(complete_loglik());
  trace.P.push_back(state_.P);

  if (t <= config_.burn_in) return;
  const int K = state_.K;
  const double eb = std::exp(state_.beta);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (i == j) continue;
      const std::size_t idx = static_cast<std::size_t>(i) * n_ + j;
      trace.nu_sum[idx] += state_.nu[idx];
      trace.dist_sum[idx] += D_[idx];
      trace.p_sum[idx] +=
          state_.P[static_cast<std::size_t>(state_.z[i] - 1) * K + (state_.z[j] - 1)];
      trace.lambda_sum[idx] += eb * E_[idx];
    }
  ++trace.post_count;
  if (config_.store_U && (t - config_.burn_in - 1) % config_.thin == 0) {
    trace.u_iters.push_back(t);
    trace.u_snaps.push_back(state_.U);
  }
}

ChainTrace Sampler::run() {
  ChainTrace trace;
  trace.seed = config_.seed;
  trace.n = n_;
  trace.d = d_;
  trace.directed = directed_;
  trace.supervised = config_.supervised;
  trace.hyper = hyper_;
  trace.config = config_;
  trace.data_hash = data_hash(data_);
  const std::size_t nn = static_cast<std::size_t>(n_) * n_;
  trace.nu_sum.assign(nn, 0.0);
  trace.dist_sum.assign(nn, 0.0);
  trace.p_sum.assign(nn, 0.0);
  trace.lambda_sum.assign(nn, 0.0);
  const int T = config_.iterations;
  trace.beta.reserve(T);
  trace.K.reserve(T);
  trace.loglik.reserve(T);
  trace.z.reserve(T);

  for (int t = 1; t <= T; ++t) {
    sweep();
    adapt(t);
    record(trace, t);
  }
  trace.accept = counters_;
  return trace;
}

void Sampler::prior_draw() {
  if (attrs_)
    throw DataError("prior_draw supports unsupervised chains only");

  // partition via its sequential allocation scheme
  Partition z{1};
  for (int i = 1; i < n_; ++i) {
    std::vector<double> w = urn_weights(z, table_);
    double tot = 0.0;
    for (double v : w) tot += v;
    double u = rng_init_.uniform() * tot;
    int pick = static_cast<int>(w.size()) - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      acc += w[k];
      if (u <= acc) {
        pick = static_cast<int>(k);
        break;
      }
    }
    z.push_back(pick + 1);
  }
  state_.z = z;
  state_.K = num_groups(z);
  const int K = state_.K;

  // per-group precision and mean, then positions
  std::vector<double> tau(K), mu(static_cast<std::size_t>(K) * d_);
  for (int g = 0; g < K; ++g) {
    tau[g] = rng_init_.gamma(hyper_.alpha1, 2.0 / hyper_.alpha2);
    const double msd = 1.0 / std::sqrt(hyper_.omega * tau[g]);
    for (int a = 0; a < d_; ++a)
      mu[static_cast<std::size_t>(g) * d_ + a] = rng_init_.normal(0.0, msd);
  }
  state_.U.resize(static_cast<std::size_t>(n_) * d_);
  for (int i = 0; i < n_; ++i) {
    const int g = state_.z[i] - 1;
    const double sd = 1.0 / std::sqrt(tau[g]);
    for (int a = 0; a < d_; ++a)
      state_.U[static_cast<std::size_t>(i) * d_ + a] =
          rng_init_.normal(mu[static_cast<std::size_t>(g) * d_ + a], sd);
  }

  state_.beta = hyper_.beta_lo + rng_init_.uniform() * (hyper_.beta_hi - hyper_.beta_lo);

  state_.P.assign(static_cast<std::size_t>(K) * K, 0.0);
  for (int g = 0; g < K; ++g)
    for (int h = (directed_ ? 0 : g); h < K; ++h) {
      const double v = rng_init_.beta(hyper_.beta1, hyper_.beta2);
      state_.P[static_cast<std::size_t>(g) * K + h] = v;
      if (!directed_) state_.P[static_cast<std::size_t>(h) * K + g] = v;
    }

  state_.nu.assign(static_cast<std::size_t>(n_) * n_, 0);
  state_.X.assign(static_cast<std::size_t>(n_) * n_, 0);
  rebuild_caches();
  regenerate_data();
}

void Sampler::regenerate_data() {
  const int K = state_.K;
  const double eb = std::exp(state_.beta);
  for (int i = 0; i < n_; ++i)
    for (int j = (directed_ ? 0 : i + 1); j < n_; ++j) {
      if (i == j) continue;
      const std::size_t idx = static_cast<std::size_t>(i) * n_ + j;
      const double p =
          state_.P[static_cast<std::size_t>(state_.z[i] - 1) * K + (state_.z[j] - 1)];
      const bool nu = rng_nu_.bernoulli(p);
      const long long w = rng_x_.poisson(eb * E_[idx]);
      state_.nu[idx] = nu ? 1 : 0;
      state_.X[idx] = w;
      data_.y[idx] = nu ? 0 : w;
      if (!directed_) {
        const std::size_t jdx = static_cast<std::size_t>(j) * n_ + i;
        state_.nu[jdx] = state_.nu[idx];
        state_.X[jdx] = w;
        data_.y[jdx] = data_.y[idx];
      }
    }
  Sx_ = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = (directed_ ? 0 : i + 1); j < n_; ++j)
      if (i != j) Sx_ += state_.X[static_cast<std::size_t>(i) * n_ + j];
  rebuild_block_nu();
}

void Sampler::set_state(const LatentState& s) {
  state_ = s;
  state_.K = num_groups(state_.z);
  rebuild_caches();
}

std::vector<double> Sampler::init_positions_mds(const WeightedNetwork& data, int d) {
  const int n = data.n;
  if (n == 1) return std::vector<double>(d, 0.0);

  // hop distances on the binarized graph
  std::vector<int> hop(static_cast<std::size_t>(n) * n, -1);
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    hop[static_cast<std::size_t>(s) * n + s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      const int hv = hop[static_cast<std::size_t>(s) * n + v];
      for (int w = 0; w < n; ++w) {
        if (w == v) continue;
        if (data.at(v, w) == 0 && data.at(w, v) == 0) continue;
        if (hop[static_cast<std::size_t>(s) * n + w] >= 0) continue;
        hop[static_cast<std::size_t>(s) * n + w] = hv + 1;
        q.push(w);
      }
    }
  }
  int max_hop = 0;
  for (int v : hop) max_hop = std::max(max_hop, v);
  const double far = max_hop + 1;

  Eigen::MatrixXd D2(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int h = hop[static_cast<std::size_t>(i) * n + j];
      const double v = h >= 0 ? h : far;
      D2(i, j) = v * v;
    }

  Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n) -
                      Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  Eigen::MatrixXd B = -0.5 * J * D2 * J;
  B = 0.5 * (B + B.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  // eigenvalues ascending; take the top d with positive value
  std::vector<double> U(static_cast<std::size_t>(n) * d, 0.0);
  for (int a = 0; a < d; ++a) {
    const int col = n - 1 - a;
    if (col < 0) break;
    const double ev = es.eigenvalues()(col);
    if (ev <= 0.0) continue;
    Eigen::VectorXd v = es.eigenvectors().col(col) * std::sqrt(ev);
    // deterministic sign: first entry of nonnegligible magnitude positive
    for (int i = 0; i < n; ++i)
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    for (int i = 0; i < n; ++i) U[static_cast<std::size_t>(i) * d + a] = v(i);
  }
  return U;
}

Partition Sampler::init_partition_kmeans(const std::vector<double>& U, int n, int d,
                                         int k, RngStream& rng) {
  k = std::min(k, n);
  std::vector<double> centers(static_cast<std::size_t>(k) * d);
  auto dist2 = [&](int i, const double* c) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      const double diff = U[static_cast<std::size_t>(i) * d + a] - c[a];
      s += diff * diff;
    }
    return s;
  };

  // k-means++ seeding
  {
    const int first = static_cast<int>(rng.below(n));
    for (int a = 0; a < d; ++a) centers[a] = U[static_cast<std::size_t>(first) * d + a];
    std::vector<double> best(n);
    for (int c = 1; c < k; ++c) {
      double tot = 0.0;
      for (int i = 0; i < n; ++i) {
        double b = std::numeric_limits<double>::max();
        for (int cc = 0; cc < c; ++cc)
          b = std::min(b, dist2(i, &centers[static_cast<std::size_t>(cc) * d]));
        best[i] = b;
        tot += b;
      }
      int pick = n - 1;
      if (tot > 0.0) {
        double u = rng.uniform() * tot, acc = 0.0;
        for (int i = 0; i < n; ++i) {
          acc += best[i];
          if (u <= acc) {
            pick = i;
            break;
          }
        }
      } else {
        pick = static_cast<int>(rng.below(n));
      }
      for (int a = 0; a < d; ++a)
        centers[static_cast<std::size_t>(c) * d + a] =
            U[static_cast<std::size_t>(pick) * d + a];
    }
  }

  std::vector<int> assign(n, 0);
  for (int it = 0; it < 50; ++it) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int bestc = 0;
      double bestd = std::numeric_limits<double>::max();
      for (int c = 0; c < k; ++c) {
        const double v = dist2(i, &centers[static_cast<std::size_t>(c) * d]);
        if (v < bestd) {
          bestd = v;
          bestc = c;
        }
      }
      if (assign[i] != bestc) {
        assign[i] = bestc;
        changed = true;
      }
    }
    std::vector<double> sums(static_cast<std::size_t>(k) * d, 0.0);
    std::vector<int> cnt(k, 0);
    for (int i = 0; i < n; ++i) {
      ++cnt[assign[i]];
      for (int a = 0; a < d; ++a)
        sums[static_cast<std::size_t>(assign[i]) * d + a] +=
            U[static_cast<std::size_t>(i) * d + a];
    }
    for (int c = 0; c < k; ++c)
      if (cnt[c] > 0)
        for (int a = 0; a < d; ++a)
          centers[static_cast<std::size_t>(c) * d + a] =
              sums[static_cast<std::size_t>(c) * d + a] / cnt[c];
    if (!changed) break;
  }

  Partition z(n);
  for (int i = 0; i < n; ++i) z[i] = assign[i] + 1;
  return canonicalize(z);
}

ChainTrace run_chain(const WeightedNetwork& data, const std::optional<NodeAttributes>& attrs,
                     const Hyperparameters& hyper, const SamplerConfig& config) {
  Sampler s(data, attrs, hyper, config);
  return s.run();
}

std::string data_hash(const WeightedNetwork& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* p, std::size_t len) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  std::int64_t n = data.n;
  std::int64_t dir = data.directed ? 1 : 0;
  mix(&n, sizeof(n));
  mix(&dir, sizeof(dir));
  mix(data.y.data(), data.y.size() * sizeof(long long));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

namespace {

using nlohmann::json;

json hyper_to_json(const Hyperparameters& h) {
  return json{{"d", h.d},
              {"alpha", h.alpha},
              {"alpha1", h.alpha1},
              {"alpha2", h.alpha2},
              {"omega", h.omega},
              {"beta1", h.beta1},
              {"beta2", h.beta2},
              {"cohesion", h.cohesion},
              {"sigma2_beta", h.sigma2_beta},
              {"sigma2_U", h.sigma2_U},
              {"p_eject", h.p_eject},
              {"p0", h.p0},
              {"beta_lo", h.beta_lo},
              {"beta_hi", h.beta_hi}};
}

Hyperparameters hyper_from_json(const json& j) {
  Hyperparameters h;
  h.d = j.value("d", h.d);
  h.alpha = j.value("alpha", h.alpha);
  h.alpha1 = j.value("alpha1", h.alpha1);
  h.alpha2 = j.value("alpha2", h.alpha2);
  h.omega = j.value("omega", h.omega);
  h.beta1 = j.value("beta1", h.beta1);
  h.beta2 = j.value("beta2", h.beta2);
  h.cohesion = j.value("cohesion", h.cohesion);
  h.sigma2_beta = j.value("sigma2_beta", h.sigma2_beta);
  h.sigma2_U = j.value("sigma2_U", h.sigma2_U);
  h.p_eject = j.value("p_eject", h.p_eject);
  h.p0 = j.value("p0", h.p0);
  h.beta_lo = j.value("beta_lo", h.beta_lo);
  h.beta_hi = j.value("beta_hi", h.beta_hi);
  return h;
}

}  // namespace

void save_trace(const std::string& path, const ChainTrace& trace) {
  json j;
  j["seed"] = trace.seed;
  j["n"] = trace.n;
  j["d"] = trace.d;
  j["directed"] = trace.directed;
  j["supervised"] = trace.supervised;
  j["data_hash"] = trace.data_hash;
  j["hyper"] = hyper_to_json(trace.hyper);
  j["config"] = json{{"iterations", trace.config.iterations},
                     {"burn_in", trace.config.burn_in},
                     {"seed", trace.config.seed},
                     {"adapt_until", trace.config.adapt_until},
                     {"thin", trace.config.thin},
                     {"store_U", trace.config.store_U}};
  j["beta"] = trace.beta;
  j["K"] = trace.K;
  j["loglik"] = trace.loglik;
  j["z"] = trace.z;
  j["P"] = trace.P;
  j["nu_sum"] = trace.nu_sum;
  j["dist_sum"] = trace.dist_sum;
  j["p_sum"] = trace.p_sum;
  j["lambda_sum"] = trace.lambda_sum;
  j["post_count"] = trace.post_count;
  j["u_iters"] = trace.u_iters;
  j["accept"] = json{{"beta_acc", trace.accept.beta_acc},
                     {"beta_prop", trace.accept.beta_prop},
                     {"u_acc", trace.accept.u_acc},
                     {"u_prop", trace.accept.u_prop},
                     {"eject_acc", trace.accept.eject_acc},
                     {"eject_prop", trace.accept.eject_prop},
                     {"eject_abandoned", trace.accept.eject_abandoned},
                     {"absorb_acc", trace.accept.absorb_acc},
                     {"absorb_prop", trace.accept.absorb_prop}};
  const std::string payload = j.dump();
  std::uint64_t cs = 0xcbf29ce484222325ULL;
  for (unsigned char ch : payload) {
    cs ^= ch;
    cs *= 0x100000001b3ULL;
  }
  char csbuf[17];
  std::snprintf(csbuf, sizeof(csbuf), "%016llx", static_cast<unsigned long long>(cs));

  std::ofstream out(path);
  if (!out) throw DataError("cannot open for write: " + path);
  out << "{\"checksum\":\"" << csbuf << "\",\"body\":" << payload << "}\n";

  // binary sidecar for the U snapshots
  std::ofstream ub(path + ".u.bin", std::ios::binary);
  if (!ub) throw DataError("cannot open for write: " + path + ".u.bin");
  const std::int64_t hdr[3] = {trace.n, trace.d,
                               static_cast<std::int64_t>(trace.u_snaps.size())};
  ub.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
  for (const auto& snap : trace.u_snaps)
    ub.write(reinterpret_cast<const char*>(snap.data()),
             static_cast<std::streamsize>(snap.size() * sizeof(double)));
}

ChainTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json outer;
  try {
    in >> outer;
  } catch (const std::exception& e) {
    throw DataError("malformed trace file " + path + ": " + e.what());
  }
  if (!outer.contains("checksum") || !outer.contains("body"))
    throw DataError("trace file " + path + " lacks checksum envelope");
  const json j = outer["body"];
  {
    const std::string payload = j.dump();
    std::uint64_t cs = 0xcbf29ce484222325ULL;
    for (unsigned char ch : payload) {
      cs ^= ch;
      cs *= 0x100000001b3ULL;
    }
    char csbuf[17];
    std::snprintf(csbuf, sizeof(csbuf), "%016llx", static_cast<unsigned long long>(cs));
    if (outer["checksum"].get<std::string>() != csbuf)
      throw DataError("trace file " + path + " failed its checksum");
  }
  ChainTrace t;
  t.seed = j.value("seed", 0ULL);
  t.n = j.value("n", 0);
  t.d = j.value("d", 0);
  t.directed = j.value("directed", true);
  t.supervised = j.value("supervised", false);
  t.data_hash = j.value("data_hash", std::string());
  t.hyper = hyper_from_json(j.value("hyper", json::object()));
  const json jc = j.value("config", json::object());
  t.config.iterations = jc.value("iterations", t.config.iterations);
  t.config.burn_in = jc.value("burn_in", t.config.burn_in);
  t.config.seed = jc.value("seed", t.config.seed);
  t.config.adapt_until = jc.value("adapt_until", t.config.adapt_until);
  t.config.thin = jc.value("thin", t.config.thin);
  t.config.store_U = jc.value("store_U", t.config.store_U);
  t.beta = j.value("beta", std::vector<double>{});
  t.K = j.value("K", std::vector<int>{});
  t.loglik = j.value("loglik", std::vector<double>{});
  t.z = j.value("z", std::vector<Partition>{});
  t.P = j.value("P", std::vector<std::vector<double>>{});
  t.nu_sum = j.value("nu_sum", std::vector<double>{});
  t.dist_sum = j.value("dist_sum", std::vector<double>{});
  t.p_sum = j.value("p_sum", std::vector<double>{});
  t.lambda_sum = j.value("lambda_sum", std::vector<double>{});
  t.post_count = j.value("post_count", 0LL);
  t.u_iters = j.value("u_iters", std::vector<int>{});
  const json ja = j.value("accept", json::object());
  t.accept.beta_acc = ja.value("beta_acc", 0LL);
  t.accept.beta_prop = ja.value("beta_prop", 0LL);
  t.accept.u_acc = ja.value("u_acc", 0LL);
  t.accept.u_prop = ja.value("u_prop", 0LL);
  t.accept.eject_acc = ja.value("eject_acc", 0LL);
  t.accept.eject_prop = ja.value("eject_prop", 0LL);
  t.accept.eject_abandoned = ja.value("eject_abandoned", 0LL);
  t.accept.absorb_acc = ja.value("absorb_acc", 0LL);
  t.accept.absorb_prop = ja.value("absorb_prop", 0LL);

  std::ifstream ub(path + ".u.bin", std::ios::binary);
  if (ub) {
    std::int64_t hdr[3];
    ub.read(reinterpret_cast<char*>(hdr), sizeof(hdr));
    if (ub) {
      const std::size_t len = static_cast<std::size_t>(hdr[0]) * hdr[1];
      for (std::int64_t s = 0; s < hdr[2]; ++s) {
        std::vector<double> snap(len);
        ub.read(reinterpret_cast<char*>(snap.data()),
                static_cast<std::streamsize>(len * sizeof(double)));
        if (!ub) break;
        t.u_snaps.push_back(std::move(snap));
      }
    }
  }
  return t;
}

}  // namespace zlpcm
