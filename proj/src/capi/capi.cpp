// extern "C" surface of the shared library: opaque handles over the core
// types, exceptions mapped to status codes, message text kept thread-local.

#include "specshift.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "../core/divided_difference.hpp"
#include "../core/io.hpp"
#include "../core/moi.hpp"
#include "../core/perturbation.hpp"
#include "../core/rng.hpp"
#include "../core/runner.hpp"

using namespace specshift;

struct ss_matrix {
  CMat m;
};
struct ss_function {
  ScalarFunction f;
};
struct ss_spectral {
  SpectralDecomposition d;
};

namespace {

thread_local std::string g_last_error;

ss_status map_errc(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return SS_ERR_INVALID_ARGUMENT;
    case Errc::not_hermitian: return SS_ERR_NOT_HERMITIAN;
    case Errc::parse: return SS_ERR_PARSE;
    case Errc::unsupported: return SS_ERR_UNSUPPORTED;
    case Errc::pole_proximity: return SS_ERR_POLE_PROXIMITY;
    case Errc::step_size: return SS_ERR_STEP_SIZE;
    case Errc::enlarge_truncation: return SS_ERR_ENLARGE_TRUNCATION;
    case Errc::budget_exceeded: return SS_ERR_BUDGET_EXCEEDED;
    case Errc::convergence: return SS_ERR_CONVERGENCE;
    case Errc::inconsistency: return SS_ERR_INCONSISTENCY;
    case Errc::io: return SS_ERR_IO;
  }
  return SS_ERR_INTERNAL;
}

template <class Fn>
ss_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_errc(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SS_ERR_INTERNAL;
  }
}

CMat matrix_from_raw(int dim, const double* interleaved) {
  require(dim >= 1, Errc::invalid_argument, "dim must be >= 1");
  require(interleaved != nullptr, Errc::invalid_argument, "null entry buffer");
  CMat m(dim);
  size_t idx = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j, idx += 2)
      m(i, j) = cx(interleaved[idx], interleaved[idx + 1]);
  return m;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

MoiSymbol make_symbol(const ss_function* f, const char* symbol, int order) {
  require(f != nullptr && symbol != nullptr, Errc::invalid_argument, "null argument");
  const std::string s = symbol;
  if (s == "divdiff") return MoiSymbol::divided_difference(f->f, order);
  if (s == "phi") return MoiSymbol::phi(f->f, order);
  fail(Errc::invalid_argument, "symbol must be 'divdiff' or 'phi'");
}

}  // namespace

extern "C" {

const char* ss_status_name(ss_status status) {
  switch (status) {
    case SS_OK: return "ok";
    case SS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SS_ERR_NOT_HERMITIAN: return "not_hermitian";
    case SS_ERR_PARSE: return "parse";
    case SS_ERR_UNSUPPORTED: return "unsupported";
    case SS_ERR_POLE_PROXIMITY: return "pole_proximity";
    case SS_ERR_STEP_SIZE: return "step_size";
    case SS_ERR_ENLARGE_TRUNCATION: return "enlarge_truncation";
    case SS_ERR_BUDGET_EXCEEDED: return "budget_exceeded";
    case SS_ERR_CONVERGENCE: return "convergence";
    case SS_ERR_INCONSISTENCY: return "inconsistency";
    case SS_ERR_IO: return "io";
    case SS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* ss_last_error(void) { return g_last_error.c_str(); }

void ss_string_free(char* text) { std::free(text); }
void ss_buffer_free(double* buffer) { std::free(buffer); }

ss_status ss_matrix_create(int dim, const double* interleaved, ss_matrix** out) {
  return guarded([&] {
    require(out != nullptr, Errc::invalid_argument, "null out pointer");
    *out = new ss_matrix{matrix_from_raw(dim, interleaved)};
  });
}

ss_status ss_matrix_create_hermitian(int dim, const double* interleaved, ss_matrix** out) {
  return guarded([&] {
    require(out != nullptr, Errc::invalid_argument, "null out pointer");
    *out = new ss_matrix{HermitianMatrix::from(matrix_from_raw(dim, interleaved)).mat()};
  });
}

ss_status ss_matrix_load_json(const char* path, ss_matrix** out) {
  return guarded([&] {
    require(path && out, Errc::invalid_argument, "null argument");
    *out = new ss_matrix{load_matrix(path)};
  });
}

ss_status ss_matrix_save_json(const ss_matrix* m, const char* path) {
  return guarded([&] {
    require(m && path, Errc::invalid_argument, "null argument");
    save_matrix(m->m, path);
  });
}

ss_status ss_matrix_random(const char* ensemble, int dim, uint64_t seed, ss_matrix** out) {
  return guarded([&] {
    require(ensemble && out, Errc::invalid_argument, "null argument");
    Rng rng(seed);
    const std::string kind = ensemble;
    if (kind == "gue") {
      *out = new ss_matrix{random_gue(dim, rng).mat()};
    } else if (kind == "ginibre") {
      *out = new ss_matrix{random_ginibre(dim, rng)};
    } else if (kind == "haar") {
      *out = new ss_matrix{random_haar_unitary(dim, rng)};
    } else if (kind.rfind("weak_profile:", 0) == 0) {
      const double p = std::stod(kind.substr(13));
      require(p > 0, Errc::invalid_argument, "weak_profile exponent must be > 0");
      *out = new ss_matrix{random_weak_profile(dim, p, rng).mat()};
    } else {
      fail(Errc::invalid_argument, "unknown ensemble: " + kind);
    }
  });
}

int ss_matrix_dim(const ss_matrix* m) { return m ? m->m.dim() : 0; }

ss_status ss_matrix_get(const ss_matrix* m, double* interleaved_out) {
  return guarded([&] {
    require(m && interleaved_out, Errc::invalid_argument, "null argument");
    size_t idx = 0;
    for (int i = 0; i < m->m.dim(); ++i)
      for (int j = 0; j < m->m.dim(); ++j, idx += 2) {
        interleaved_out[idx] = m->m(i, j).real();
        interleaved_out[idx + 1] = m->m(i, j).imag();
      }
  });
}

void ss_matrix_free(ss_matrix* m) { delete m; }

ss_status ss_function_create(const char* json_or_preset, ss_function** out) {
  return guarded([&] {
    require(json_or_preset && out, Errc::invalid_argument, "null argument");
    *out = new ss_function{function_from_spec(json_or_preset)};
  });
}

ss_status ss_function_eval_derivative(const ss_function* f, double x, int order, double* re,
                                      double* im) {
  return guarded([&] {
    require(f && re && im, Errc::invalid_argument, "null argument");
    const cx v = f->f.derivative(x, order);
    *re = v.real();
    *im = v.imag();
  });
}

ss_status ss_function_sup_derivative(const ss_function* f, int order, double* out) {
  return guarded([&] {
    require(f && out, Errc::invalid_argument, "null argument");
    *out = f->f.sup_derivative(order);
  });
}

ss_status ss_function_fourier(const ss_function* f, double t, double* re, double* im) {
  return guarded([&] {
    require(f && re && im, Errc::invalid_argument, "null argument");
    const cx v = f->f.fourier(t);
    *re = v.real();
    *im = v.imag();
  });
}

void ss_function_free(ss_function* f) { delete f; }

ss_status ss_spectral_compute(const ss_matrix* h, double cluster_tol, ss_spectral** out) {
  return guarded([&] {
    require(h && out, Errc::invalid_argument, "null argument");
    *out = new ss_spectral{eigh(HermitianMatrix::from(h->m), cluster_tol)};
  });
}

int ss_spectral_cluster_count(const ss_spectral* s) { return s ? s->d.cluster_count() : 0; }

ss_status ss_spectral_eigenvalues(const ss_spectral* s, double* eigenvalues,
                                  int* multiplicities) {
  return guarded([&] {
    require(s && eigenvalues && multiplicities, Errc::invalid_argument, "null argument");
    for (int c = 0; c < s->d.cluster_count(); ++c) {
      eigenvalues[c] = s->d.eigenvalues[c];
      multiplicities[c] = s->d.multiplicities[c];
    }
  });
}

ss_status ss_spectral_projection(const ss_spectral* s, int cluster, ss_matrix** out) {
  return guarded([&] {
    require(s && out, Errc::invalid_argument, "null argument");
    require(cluster >= 0 && cluster < s->d.cluster_count(), Errc::invalid_argument,
            "cluster index out of range");
    *out = new ss_matrix{s->d.projections[cluster]};
  });
}

void ss_spectral_free(ss_spectral* s) { delete s; }

ss_status ss_apply_function(const ss_function* f, const ss_matrix* h, ss_matrix** out) {
  return guarded([&] {
    require(f && h && out, Errc::invalid_argument, "null argument");
    *out = new ss_matrix{apply_function(f->f, HermitianMatrix::from(h->m)).mat()};
  });
}

ss_status ss_resolvent_power(const ss_matrix* h, double z_re, double z_im, int power,
                             ss_matrix** out) {
  return guarded([&] {
    require(h && out, Errc::invalid_argument, "null argument");
    *out = new ss_matrix{resolvent_power(HermitianMatrix::from(h->m), cx(z_re, z_im), power)};
  });
}

ss_status ss_unitary_exp(const ss_matrix* h, double t, ss_matrix** out) {
  return guarded([&] {
    require(h && out, Errc::invalid_argument, "null argument");
    *out = new ss_matrix{unitary_exp(HermitianMatrix::from(h->m), t)};
  });
}

ss_status ss_divdiff(const ss_function* f, const double* lambda, int count, const char* route,
                     int level, double truncation, double tol, double* re, double* im,
                     double* err_out) {
  return guarded([&] {
    require(f && lambda && route && re && im, Errc::invalid_argument, "null argument");
    require(count >= 1, Errc::invalid_argument, "need at least one lambda");
    const LambdaTuple t = LambdaTuple::make({lambda, lambda + count});
    const std::string r = route;
    cx v;
    double err = 0;
    if (r == "recursive") {
      v = divdiff_recursive(f->f, t).value;
    } else if (r == "rational") {
      v = divdiff_rational(f->f, t);
    } else if (r == "simplex") {
      const SimplexValue sv = divdiff_simplex(f->f, t, tol > 0 ? tol : 1e-8);
      v = sv.value;
      err = sv.error_estimate;
    } else if (r == "fourier") {
      const ConeValue cv = divdiff_fourier_cone(f->f, t, level > 0 ? level : 10,
                                                truncation > 0 ? truncation : 16.0, tol);
      v = cv.value;
      err = cv.tail_bound;
    } else {
      fail(Errc::invalid_argument, "unknown route: " + r);
    }
    *re = v.real();
    *im = v.imag();
    if (err_out) *err_out = err;
  });
}

ss_status ss_phi_eval(const ss_function* f, const double* lambda, int count, double* re,
                      double* im, double* discrepancy) {
  return guarded([&] {
    require(f && lambda && re && im, Errc::invalid_argument, "null argument");
    const PhiValue v = phi_eval(f->f, std::span<const double>(lambda, count));
    *re = v.doubled.real();
    *im = v.doubled.imag();
    if (discrepancy) *discrepancy = v.discrepancy;
  });
}

ss_status ss_moi_spectral(const ss_function* f, const char* symbol, int order,
                          const ss_matrix* h, const ss_matrix* const* args, int arg_count,
                          ss_matrix** out) {
  return guarded([&] {
    require(h && out && (arg_count == 0 || args), Errc::invalid_argument, "null argument");
    MoiRequest req{make_symbol(f, symbol, order), HermitianMatrix::from(h->m), {}};
    for (int i = 0; i < arg_count; ++i) {
      require(args[i], Errc::invalid_argument, "null argument matrix");
      req.args.push_back(args[i]->m);
    }
    *out = new ss_matrix{moi_spectral(req).value};
  });
}

ss_status ss_moi_dyadic(const ss_function* f, const char* symbol, int order,
                        const ss_matrix* h, const ss_matrix* const* args, int arg_count,
                        int m_max, double truncation, double tol, ss_matrix** value_out,
                        double* level_errors, double* level_norms, double* tail_bound,
                        double* fitted_order) {
  return guarded([&] {
    require(h && value_out && args, Errc::invalid_argument, "null argument");
    MoiRequest req{make_symbol(f, symbol, order), HermitianMatrix::from(h->m), {},
                   m_max > 0 ? m_max : 12, truncation > 0 ? truncation : 16.0,
                   tol > 0 ? tol : 1e-3};
    for (int i = 0; i < arg_count; ++i) {
      require(args[i], Errc::invalid_argument, "null argument matrix");
      req.args.push_back(args[i]->m);
    }
    const MoiResult res = moi_dyadic(req);
    for (int m = 0; m < req.m_max; ++m) {
      if (level_errors) level_errors[m] = res.level_errors[m];
      if (level_norms) level_norms[m] = res.level_norms[m];
    }
    if (tail_bound) *tail_bound = res.tail_bound;
    if (fitted_order) *fitted_order = res.fitted_order;
    *value_out = new ss_matrix{res.value};
    if (!res.converged) fail(Errc::convergence, res.note);
  });
}

ss_status ss_singular_values(const ss_matrix* m, double* out) {
  return guarded([&] {
    require(m && out, Errc::invalid_argument, "null argument");
    const auto sv = singular_values(m->m);
    for (size_t i = 0; i < sv.size(); ++i) out[i] = sv[i];
  });
}

ss_status ss_ideal_norm(const ss_matrix* m, const char* kind, double p, double q,
                        double* out) {
  return guarded([&] {
    require(m && kind && out, Errc::invalid_argument, "null argument");
    *out = ideal_norm(m->m, IdealSpec::parse(kind, p, q));
  });
}

ss_status ss_gateaux_moi(const ss_function* f, const ss_matrix* h, const ss_matrix* v,
                         int order, ss_matrix** out) {
  return guarded([&] {
    require(f && h && v && out, Errc::invalid_argument, "null argument");
    const PerturbationPair pair(HermitianMatrix::from(h->m), HermitianMatrix::from(v->m));
    *out = new ss_matrix{gateaux_derivative_moi(f->f, pair, order)};
  });
}

ss_status ss_gateaux_fd(const ss_function* f, const ss_matrix* h, const ss_matrix* v,
                        int order, double step, ss_matrix** out) {
  return guarded([&] {
    require(f && h && v && out, Errc::invalid_argument, "null argument");
    const PerturbationPair pair(HermitianMatrix::from(h->m), HermitianMatrix::from(v->m));
    *out = new ss_matrix{gateaux_derivative_fd_complex(f->f, pair, order, step)};
  });
}

ss_status ss_resolvent_derivative(double z_re, double z_im, int power, const ss_matrix* h,
                                  const ss_matrix* v, int order, ss_matrix** out) {
  return guarded([&] {
    require(h && v && out, Errc::invalid_argument, "null argument");
    const PerturbationPair pair(HermitianMatrix::from(h->m), HermitianMatrix::from(v->m));
    *out = new ss_matrix{resolvent_derivative(power, cx(z_re, z_im), pair, order)};
  });
}

ss_status ss_taylor_remainder(const ss_function* f, const ss_matrix* h, const ss_matrix* v,
                              int order, ss_matrix** out) {
  return guarded([&] {
    require(f && h && v && out, Errc::invalid_argument, "null argument");
    const PerturbationPair pair(HermitianMatrix::from(h->m), HermitianMatrix::from(v->m));
    *out = new ss_matrix{taylor_remainder(f->f, pair, order)};
  });
}

ss_status ss_krein_ssf(const ss_matrix* h, const ss_matrix* v, double** breakpoints,
                       double** values, int* count) {
  return guarded([&] {
    require(h && v && breakpoints && values && count, Errc::invalid_argument,
            "null argument");
    const PerturbationPair pair(HermitianMatrix::from(h->m), HermitianMatrix::from(v->m));
    const StepFunction xi = krein_ssf(pair);
    const size_t nb = xi.breakpoints.size();
    double* bp = static_cast<double*>(std::malloc(sizeof(double) * std::max<size_t>(nb, 1)));
    double* vals =
        static_cast<double*>(std::malloc(sizeof(double) * std::max<size_t>(nb, 1)));
    if (!bp || !vals) {
      std::free(bp);
      std::free(vals);
      throw std::bad_alloc();
    }
    for (size_t i = 0; i < nb; ++i) bp[i] = xi.breakpoints[i];
    for (size_t i = 0; i < xi.values.size(); ++i) vals[i] = xi.values[i];
    *breakpoints = bp;
    *values = vals;
    *count = static_cast<int>(nb);
  });
}

ss_status ss_krein_residual(const ss_function* f, const ss_matrix* h, const ss_matrix* v,
                            double* residual, double* scale) {
  return guarded([&] {
    require(f && h && v && residual, Errc::invalid_argument, "null argument");
    const PerturbationPair pair(HermitianMatrix::from(h->m), HermitianMatrix::from(v->m));
    const KreinResidual kr = krein_residual(f->f, pair);
    *residual = kr.residual;
    if (scale) *scale = kr.scale;
  });
}

ss_status ss_cyclic_residual(const ss_function* f, const ss_matrix* h, const ss_matrix* v,
                             int order, double* residual) {
  return guarded([&] {
    require(f && h && v && residual, Errc::invalid_argument, "null argument");
    const PerturbationPair pair(HermitianMatrix::from(h->m), HermitianMatrix::from(v->m));
    *residual = cyclic_identity_residual(f->f, pair, order);
  });
}

ss_status ss_run_json(const char* config_json, char** report_json, int* pass) {
  return guarded([&] {
    require(config_json && report_json, Errc::invalid_argument, "null argument");
    json config;
    try {
      config = json::parse(config_json);
    } catch (const json::exception& e) {
      fail(Errc::parse, std::string("config: ") + e.what());
    }
    const RunOutcome out = run_config(config);
    *report_json = dup_string(out.report.dump(2));
    if (pass) *pass = out.pass ? 1 : 0;
  });
}

const char* ss_version(void) { return "0.1.0"; }

}  // extern "C"
