#ifndef HK_API_H
#define HK_API_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define HK_API __attribute__((visibility("default")))
#else
#define HK_API
#endif

typedef enum {
    HK_OK = 0,
    HK_USER_ERROR = 1,      /* bad input or violated precondition */
    HK_INTERNAL_ERROR = 2   /* internal invariant violated */
} hk_status;

/* Rationals cross the boundary as strings "a/b"; points as "a/b,c/d,e/f".
   Every char** result is owned by the caller and released with hk_string_free. */

typedef struct hk_hfunction hk_hfunction; /* closed-form h-function */
typedef struct hk_lazy hk_lazy;           /* pointwise characteristic-p evaluator */

HK_API const char* hk_last_error(void); /* thread-local, valid until the next call */
HK_API void hk_string_free(char* s);
HK_API const char* hk_version(void);

/* Loads the Han-data cache from DIR/han_cache.json when present; hk_cache_flush writes it
   back. NULL or "" disables the on-disk cache. */
HK_API hk_status hk_set_cache_dir(const char* dir);
HK_API hk_status hk_cache_flush(void);
HK_API hk_status hk_set_orbit_cap(size_t cap);

/* kernels */
HK_API hk_status hk_dp_eval(unsigned p, const char* point, char** out);
HK_API hk_status hk_dinf_eval(const char* point, char** out);
HK_API hk_status hk_syzygy_gap(unsigned p, const char* point, char** out);
HK_API hk_status hk_is_attached(unsigned p, const char* point, int* out);
HK_API hk_status hk_dinf_slice_json(const char* c, char** out);
HK_API hk_status hk_dinf_slice_csv(const char* c, int resolution, char** out);

/* finite-field oracle; polynomials in the "x0^3+x1^3" syntax, bounds as "4,4" */
HK_API hk_status hk_oracle_length(unsigned p, const char* bounds, const char* poly, long r,
                                  char** json);
HK_API hk_status hk_oracle_jordan(unsigned p, const char* bounds, const char* poly, char** json);
HK_API hk_status hk_oracle_h_point(unsigned p, int e, const char* poly, const char* t,
                                   char** json);
HK_API hk_status hk_oracle_threshold(unsigned p, int e, const char* poly, char** json);

/* h-functions */
HK_API hk_status hk_diagonal_inf(const int* degrees, size_t n, hk_hfunction** out);
HK_API hk_status hk_binomial_inf(int a, int b, int u, int v, int c, hk_hfunction** out);
HK_API hk_status hk_fermat_phi(int d, int n, hk_hfunction** out);
HK_API hk_status hk_hfunction_json(const hk_hfunction* h, char** out);
HK_API hk_status hk_hfunction_eval(const hk_hfunction* h, const char* t, char** out);
HK_API hk_status hk_hfunction_csv(const hk_hfunction* h, int resolution, char** out);
HK_API void hk_hfunction_free(hk_hfunction* h);

HK_API hk_status hk_diagonal_p(unsigned p, const int* degrees, size_t n, hk_lazy** out);
HK_API hk_status hk_binomial_p(unsigned p, int a, int b, int u, int v, int c, hk_lazy** out);
HK_API hk_status hk_lazy_eval(const hk_lazy* h, const char* t, char** out);
HK_API hk_status hk_lazy_csv(const hk_lazy* h, int resolution, char** out);
HK_API void hk_lazy_free(hk_lazy* h);

/* binomial suite and diagonal towers against the oracle at t = k/p^e */
HK_API hk_status hk_compose_verify(unsigned p, int e, int* passed, char** json);

/* Fermat towers */
HK_API hk_status hk_fermat_series(int d, int order, char** json);
HK_API hk_status hk_fermat_iterate(int d, int levels, char** json);
HK_API hk_status hk_fermat_char2_cubic(char** json);
HK_API hk_status hk_fermat_verify(int d, int order, int* passed, char** json);

/* acceptance criteria; id 0 runs all */
HK_API int hk_criterion_count(void);
HK_API hk_status hk_verify(int id, int* passed, char** table, char** json);

#ifdef __cplusplus
}
#endif

#endif
