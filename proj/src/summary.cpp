#include "summary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <nlohmann/json.hpp>

namespace zlpcm {

double vi_distance(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw DataError("vi_distance: length mismatch");
  const int n = static_cast<int>(a.size());
  if (n == 0) return 0.0;
  const int ka = num_groups(a), kb = num_groups(b);
  std::vector<int> cont(static_cast<std::size_t>(ka) * kb, 0);
  std::vector<int> ra(ka, 0), rb(kb, 0);
  for (int i = 0; i < n; ++i) {
    ++cont[static_cast<std::size_t>(a[i] - 1) * kb + (b[i] - 1)];
    ++ra[a[i] - 1];
    ++rb[b[i] - 1];
  }
  auto ent = [n](const std::vector<int>& cnt) {
    double h = 0.0;
    for (int c : cnt)
      if (c > 0) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
      }
    return h;
  };
  const double ha = ent(ra), hb = ent(rb);
  double mi = 0.0;
  for (int g = 0; g < ka; ++g)
    for (int h = 0; h < kb; ++h) {
      const int c = cont[static_cast<std::size_t>(g) * kb + h];
      if (c == 0) continue;
      const double p = static_cast<double>(c) / n;
      mi += p * std::log(p * n * n / (static_cast<double>(ra[g]) * rb[h]));
    }
  double vi = ha + hb - 2.0 * mi;
  return vi < 0.0 ? 0.0 : vi;  // clip tiny negative rounding
}

namespace {

struct WeightedPartitions {
  std::vector<Partition> z;
  std::vector<int> count;
  long long total = 0;
};

WeightedPartitions post_burn_in_partitions(const ChainTrace& trace) {
  WeightedPartitions out;
  std::map<Partition, int> uniq;
  const int burn = trace.config.burn_in;
  for (std::size_t t = burn; t < trace.z.size(); ++t) ++uniq[trace.z[t]];
  for (auto& [zp, c] : uniq) {
    out.z.push_back(zp);
    out.count.push_back(c);
    out.total += c;
  }
  // keep the 500 most frequent when the posterior is very diffuse
  if (out.z.size() > 500) {
    std::vector<std::size_t> idx(out.z.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return out.count[a] > out.count[b]; });
    idx.resize(500);
    WeightedPartitions kept;
    kept.total = out.total;
    for (std::size_t i : idx) {
      kept.z.push_back(out.z[i]);
      kept.count.push_back(out.count[i]);
    }
    out = std::move(kept);
  }
  return out;
}

double mean_vi_to(const Partition& cand, const WeightedPartitions& wp) {
  double acc = 0.0;
  for (std::size_t j = 0; j < wp.z.size(); ++j)
    acc += wp.count[j] * vi_distance(cand, wp.z[j]);
  return acc / static_cast<double>(wp.total);
}

bool prefer(const Partition& a, const Partition& b) {
  // tie-break: fewer groups, then lexicographically smaller labels
  const int ka = num_groups(a), kb = num_groups(b);
  if (ka != kb) return ka < kb;
  return a < b;
}

}  // namespace

double mean_vi(const ChainTrace& trace, const Partition& ref) {
  const WeightedPartitions wp = post_burn_in_partitions(trace);
  return mean_vi_to(ref, wp);
}

FitSummary summarize(const ChainTrace& trace) {
  if (trace.post_count <= 0) throw DataError("summarize: no post-burn-in samples");
  FitSummary fit;
  fit.n = trace.n;
  fit.d = trace.d;
  fit.directed = trace.directed;
  const int n = trace.n;
  const int burn = trace.config.burn_in;

  const WeightedPartitions wp = post_burn_in_partitions(trace);
  Partition best = wp.z.front();
  double best_obj = mean_vi_to(best, wp);
  for (std::size_t j = 1; j < wp.z.size(); ++j) {
    const double obj = mean_vi_to(wp.z[j], wp);
    if (obj < best_obj - 1e-12 ||
        (std::abs(obj - best_obj) <= 1e-12 && prefer(wp.z[j], best))) {
      best = wp.z[j];
      best_obj = obj;
    }
  }

  // one greedy single-move refinement pass
  for (int i = 0; i < n; ++i) {
    const int K = num_groups(best);
    const int cur = best[i];
    for (int lab = 1; lab <= K + 1; ++lab) {
      if (lab == cur) continue;
      Partition cand = best;
      cand[i] = lab;
      cand = canonicalize(cand);
      const double obj = mean_vi_to(cand, wp);
      if (obj < best_obj - 1e-12) {
        best = cand;
        best_obj = obj;
      }
    }
  }
  fit.z_hat = canonicalize(best);
  fit.K_hat = num_groups(fit.z_hat);
  fit.mean_vi_to_zhat = best_obj;

  {
    std::map<int, int> kc;
    for (std::size_t t = burn; t < trace.K.size(); ++t) ++kc[trace.K[t]];
    int bk = 0, bc = -1;
    for (const auto& [k, c] : kc)
      if (c > bc) {
        bk = k;
        bc = c;
      }
    fit.K_mode = bk;
  }

  {
    double s = 0.0;
    long long c = 0;
    for (std::size_t t = burn; t < trace.beta.size(); ++t) {
      s += trace.beta[t];
      ++c;
    }
    fit.beta_hat = c > 0 ? s / c : 0.0;
  }

  const std::size_t nn = static_cast<std::size_t>(n) * n;
  fit.nu_hat.resize(nn);
  fit.dist_hat.resize(nn);
  fit.p_hat.resize(nn);
  fit.lambda_hat.resize(nn);
  for (std::size_t e = 0; e < nn; ++e) {
    fit.nu_hat[e] = trace.nu_sum[e] / trace.post_count;
    fit.dist_hat[e] = trace.dist_sum[e] / trace.post_count;
    fit.p_hat[e] = trace.p_sum[e] / trace.post_count;
    fit.lambda_hat[e] = trace.lambda_sum[e] / trace.post_count;
  }

  // block means of p_hat under z_hat
  {
    const int K = fit.K_hat;
    fit.P_hat.assign(static_cast<std::size_t>(K) * K, 0.0);
    std::vector<long long> cnt(static_cast<std::size_t>(K) * K, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const std::size_t b =
            static_cast<std::size_t>(fit.z_hat[i] - 1) * K + (fit.z_hat[j] - 1);
        fit.P_hat[b] += fit.p_hat[static_cast<std::size_t>(i) * n + j];
        ++cnt[b];
      }
    const double prior_mean =
        trace.hyper.beta1 / (trace.hyper.beta1 + trace.hyper.beta2);
    for (std::size_t b = 0; b < fit.P_hat.size(); ++b)
      fit.P_hat[b] = cnt[b] > 0 ? fit.P_hat[b] / cnt[b] : prior_mean;
  }

  // representative positions: stored snapshot with the highest complete log
  // likelihood, preferring iterations whose partition equals z_hat
  if (!trace.u_snaps.empty()) {
    std::size_t pick = trace.u_snaps.size();
    double best_ll = -std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 2 && pick == trace.u_snaps.size(); ++pass) {
      for (std::size_t s = 0; s < trace.u_iters.size(); ++s) {
        const int t = trace.u_iters[s];  // 1-based iteration index
        if (t < 1 || t > static_cast<int>(trace.loglik.size())) continue;
        if (pass == 0 && trace.z[t - 1] != fit.z_hat) continue;
        if (pick == trace.u_snaps.size() || trace.loglik[t - 1] > best_ll) {
          best_ll = trace.loglik[t - 1];
          pick = s;
        }
      }
      if (pick != trace.u_snaps.size()) break;
    }
    if (pick < trace.u_snaps.size()) fit.U_hat = trace.u_snaps[pick];
  }
  return fit;
}

std::vector<double> prob_nonzero_given_zero(const FitSummary& fit,
                                            const WeightedNetwork& data) {
  if (data.n != fit.n) throw DataError("prob_nonzero_given_zero: size mismatch");
  const int n = fit.n;
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::size_t e = static_cast<std::size_t>(i) * n + j;
      if (data.y[e] != 0) continue;
      out[e] = (1.0 - std::exp(-fit.lambda_hat[e])) * fit.nu_hat[e];
    }
  return out;
}

std::vector<RocPoint> roc_curve(const std::vector<double>& score,
                                const std::vector<int>& label) {
  if (score.size() != label.size()) throw DataError("roc_curve: length mismatch");
  long long P = 0, N = 0;
  for (int l : label) (l ? ++P : ++N);
  if (P == 0 || N == 0) throw DataError("roc_curve: need both classes");

  std::vector<std::size_t> idx(score.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

  std::vector<RocPoint> out;
  out.push_back(RocPoint{0.0, 0.0, std::numeric_limits<double>::infinity()});
  long long tp = 0, fp = 0;
  for (std::size_t r = 0; r < idx.size();) {
    const double thr = score[idx[r]];
    while (r < idx.size() && score[idx[r]] == thr) {
      (label[idx[r]] ? ++tp : ++fp);
      ++r;
    }
    out.push_back(RocPoint{static_cast<double>(fp) / N, static_cast<double>(tp) / P, thr});
  }
  return out;
}

double roc_auc(const std::vector<double>& score, const std::vector<int>& label) {
  const std::vector<RocPoint> c = roc_curve(score, label);
  double auc = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i)
    auc += 0.5 * (c[i].tpr + c[i - 1].tpr) * (c[i].fpr - c[i - 1].fpr);
  return auc;
}

double quantile(std::vector<double> x, double q) {
  if (x.empty()) throw DataError("quantile: empty sample");
  if (q < 0.0 || q > 1.0) throw DataError("quantile: q must be in [0,1]");
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= x.size()) return x.back();
  return x[lo] + (h - lo) * (x[lo + 1] - x[lo]);
}

double mean(const std::vector<double>& x) {
  if (x.empty()) throw DataError("mean: empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_sd(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

void write_summary(const std::string& path, const FitSummary& fit) {
  nlohmann::json j;
  j["n"] = fit.n;
  j["d"] = fit.d;
  j["directed"] = fit.directed;
  j["z_hat"] = fit.z_hat;
  j["K_hat"] = fit.K_hat;
  j["K_mode"] = fit.K_mode;
  j["beta_hat"] = fit.beta_hat;
  j["mean_vi_to_zhat"] = fit.mean_vi_to_zhat;
  j["U_hat"] = fit.U_hat;
  j["nu_hat"] = fit.nu_hat;
  j["dist_hat"] = fit.dist_hat;
  j["p_hat"] = fit.p_hat;
  j["lambda_hat"] = fit.lambda_hat;
  j["P_hat"] = fit.P_hat;
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for write: " + path);
  out << j.dump() << "\n";
}

FitSummary load_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("malformed summary file " + path + ": " + e.what());
  }
  FitSummary f;
  f.n = j.value("n", 0);
  f.d = j.value("d", 0);
  f.directed = j.value("directed", true);
  f.z_hat = j.value("z_hat", Partition{});
  f.K_hat = j.value("K_hat", 0);
  f.K_mode = j.value("K_mode", 0);
  f.beta_hat = j.value("beta_hat", 0.0);
  f.mean_vi_to_zhat = j.value("mean_vi_to_zhat", 0.0);
  f.U_hat = j.value("U_hat", std::vector<double>{});
  f.nu_hat = j.value("nu_hat", std::vector<double>{});
  f.dist_hat = j.value("dist_hat", std::vector<double>{});
  f.p_hat = j.value("p_hat", std::vector<double>{});
  f.lambda_hat = j.value("lambda_hat", std::vector<double>{});
  f.P_hat = j.value("P_hat", std::vector<double>{});
  return f;
}

}  // namespace zlpcm
