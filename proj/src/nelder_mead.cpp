#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "detail.hpp"

namespace epcgh::detail {

namespace {

double trampoline(const gsl_vector* v, void* params) {
  const auto& f = *static_cast<const std::function<double(const double*)>*>(params);
  return f(v->data);
}

struct GslOff {
  GslOff() { gsl_set_error_handler_off(); }
};

}  // namespace

double nelder_mead(const std::function<double(const double*)>& f, std::vector<double>& x, double step,
                   double size_tol, int max_iter) {
  static const GslOff off;
  const std::size_t n = x.size();
  gsl_multimin_function fn{&trampoline, n, const_cast<void*>(static_cast<const void*>(&f))};
  gsl_vector* x0 = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x0, i, x[i]);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x0, ss);
  for (int it = 0; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) break;
  }
  for (std::size_t i = 0; i < n; ++i) x[i] = gsl_vector_get(s->x, i);
  const double fmin = s->fval;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x0);
  return fmin;
}

}  // namespace epcgh::detail
