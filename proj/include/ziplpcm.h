/* C interface to the zero-inflated Poisson latent position cluster model
 * library: network I/O, simulation presets, MCMC fitting, posterior
 * summaries, and evaluation against ground truth.
 *
 * All functions returning int use the status codes below and leave a
 * human-readable message in zlp_last_error() on failure. Handles are opaque
 * and freed with their matching *_free function; passing NULL to a free is a
 * no-op.
 */
#ifndef ZIPLPCM_H
#define ZIPLPCM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  ZLP_OK = 0,
  ZLP_USAGE = 2,   /* bad arguments / null handles */
  ZLP_DATA = 3,    /* unreadable or invalid data */
  ZLP_NUMERIC = 4, /* numeric failure */
};

const char* zlp_last_error(void);

/* ---- networks ---- */

typedef struct zlp_network zlp_network;

enum {
  ZLP_FORMAT_DENSE = 0,    /* dense CSV matrix */
  ZLP_FORMAT_EDGELIST = 1, /* src,dst,weight with a header row, 1-based */
};

int zlp_network_load(const char* path, int format, int directed, zlp_network** out);
int zlp_network_from_dense(const long long* y, int n, int directed, zlp_network** out);
int zlp_network_save(const zlp_network* net, const char* path);
int zlp_network_n(const zlp_network* net);
int zlp_network_directed(const zlp_network* net);
const long long* zlp_network_matrix(const zlp_network* net); /* n*n row-major */
void zlp_network_free(zlp_network* net);

/* ---- node attributes ---- */

typedef struct zlp_attributes zlp_attributes;

int zlp_attributes_load(const char* path, int n, zlp_attributes** out);
int zlp_attributes_from_levels(const int* c, int n, zlp_attributes** out);
int zlp_attributes_levels(const zlp_attributes* a); /* number of levels */
const int* zlp_attributes_vector(const zlp_attributes* a); /* length n, 1-based */
void zlp_attributes_free(zlp_attributes* a);

/* ---- model and sampler settings ---- */

typedef struct {
  int d;              /* latent dimension */
  double alpha;       /* partition prior concentration */
  double alpha1;      /* precision prior shape */
  double alpha2;      /* precision prior: tau ~ Gamma(alpha1, alpha2/2) */
  double omega;       /* mean prior precision scale */
  double beta1;       /* unusual-zero probability prior Beta(beta1, beta2) */
  double beta2;
  double cohesion;    /* attribute cohesion weight, shared across levels */
  double sigma2_beta; /* initial proposal variances */
  double sigma2_U;
  double p_eject;     /* split-vs-merge proposal probability */
  double p0;          /* empty-split abandonment target */
  double beta_lo;     /* uniform intercept prior interval */
  double beta_hi;
} zlp_hyper;

void zlp_hyper_defaults(zlp_hyper* h);

enum { ZLP_INIT_POSITIONS_MDS = 0, ZLP_INIT_POSITIONS_RANDOM = 1 };
enum { ZLP_INIT_PARTITION_SINGLETONS = 0, ZLP_INIT_PARTITION_KMEANS = 1 };

typedef struct {
  int iterations;
  int burn_in;
  unsigned long long seed;
  int adapt_until; /* < 0: adapt through burn-in */
  int thin;        /* stride for stored position snapshots */
  int store_U;     /* 0/1 */
  int position_init;
  int partition_init;
  int kmeans_k;
} zlp_config;

void zlp_config_defaults(zlp_config* c);

/* ---- fitting ---- */

typedef struct zlp_trace zlp_trace;

/* attrs may be NULL for an unsupervised fit */
int zlp_fit(const zlp_network* net, const zlp_attributes* attrs, const zlp_hyper* hyper,
            const zlp_config* config, zlp_trace** out);
int zlp_trace_save(const zlp_trace* t, const char* path);
int zlp_trace_load(const char* path, zlp_trace** out);
int zlp_trace_iterations(const zlp_trace* t);
int zlp_trace_n(const zlp_trace* t);
const double* zlp_trace_beta(const zlp_trace* t);
const int* zlp_trace_group_counts(const zlp_trace* t);
const double* zlp_trace_loglik(const zlp_trace* t);
void zlp_trace_free(zlp_trace* t);

/* ---- posterior summaries ---- */

typedef struct zlp_summary zlp_summary;

int zlp_summarize(const zlp_trace* t, zlp_summary** out);
int zlp_summary_save(const zlp_summary* s, const char* path);
int zlp_summary_load(const char* path, zlp_summary** out);
int zlp_summary_n(const zlp_summary* s);
int zlp_summary_d(const zlp_summary* s);
int zlp_summary_K(const zlp_summary* s);
double zlp_summary_beta(const zlp_summary* s);
double zlp_summary_evi(const zlp_summary* s); /* mean VI of samples to z_hat */
const int* zlp_summary_z(const zlp_summary* s);        /* length n, 1-based */
const double* zlp_summary_U(const zlp_summary* s);     /* n*d or NULL */
const double* zlp_summary_nu_hat(const zlp_summary* s);     /* n*n */
const double* zlp_summary_dist_hat(const zlp_summary* s);   /* n*n */
const double* zlp_summary_p_hat(const zlp_summary* s);      /* n*n */
const double* zlp_summary_lambda_hat(const zlp_summary* s); /* n*n */
/* (1 - exp(-lambda_hat)) * nu_hat at zero-weight entries; caller buffer n*n */
int zlp_summary_pnz(const zlp_summary* s, const zlp_network* net, double* out);
void zlp_summary_free(zlp_summary* s);

/* ---- simulation ---- */

typedef struct zlp_sim zlp_sim;

/* preset names: zlp_preset_names() returns a static comma-separated list */
const char* zlp_preset_names(void);
int zlp_simulate_preset(const char* preset, unsigned long long seed, zlp_sim** out);
int zlp_sim_network(const zlp_sim* s, zlp_network** out);
int zlp_sim_truth_save(const zlp_sim* s, const char* path);
int zlp_sim_n(const zlp_sim* s);
const int* zlp_sim_z_star(const zlp_sim* s);
/* attributes from the true partition with m nodes reassigned at random;
 * m < 0 uses the preset's default contamination count */
int zlp_sim_attributes(const zlp_sim* s, int m, unsigned long long seed,
                       zlp_attributes** out);
void zlp_sim_free(zlp_sim* s);

/* ---- evaluation ---- */

typedef struct {
  int K_hat;
  double vi;            /* VI(z_hat, z_star) */
  double evi;           /* posterior mean VI to z_star; NaN without a trace */
  double beta_hat;
  double mean_abs_p_err;      /* NaN when truth lacks P */
  double sd_abs_p_err;
  double mean_abs_dist_err;   /* NaN when truth lacks positions */
  double sd_abs_dist_err;
  double mean_abs_lambda_err; /* NaN when truth lacks rates */
  double sd_abs_lambda_err;
  double roc_auc; /* unusual-zero detection at y=0 entries; NaN if undefined */
} zlp_eval;

/* trace may be NULL (evi reported as NaN) */
int zlp_evaluate(const zlp_summary* s, const zlp_trace* trace, const zlp_network* net,
                 const char* truth_path, zlp_eval* out);

/* Writes the unusual-zero detection ROC (fpr,tpr,threshold rows) to a CSV.
 * Fails with ZLP_DATA when the truth carries no indicators or one class is
 * absent at the zero entries. */
int zlp_roc_csv(const zlp_summary* s, const zlp_network* net, const char* truth_path,
                const char* out_path);

double zlp_vi_distance(const int* a, const int* b, int n);

/* 16 hex characters plus terminator describing the network contents. */
int zlp_network_hash(const zlp_network* net, char out[17]);

#ifdef __cplusplus
}
#endif

#endif /* ZIPLPCM_H */
