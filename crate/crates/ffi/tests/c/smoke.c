#include <math.h>
#include <stdio.h>
#include "omori.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      const char *msg = omori_last_error_message();                   \
      fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,          \
              msg ? msg : "no error");                                \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  OmoriGrowth *g = NULL;
  CHECK(omori_growth_new("(1+t)^2", 50.0, 1000, &g) == OMORI_STATUS_OK);
  CHECK(omori_growth_is_admissible(g));

  OmoriSlowed *h = NULL;
  CHECK(omori_slowdown_build(g, 50.0, false, &h) == OMORI_STATUS_OK);
  CHECK(omori_slowed_splice_count(h) == 1);
  OmoriSplice s;
  CHECK(omori_slowed_splice(h, 0, &s) == OMORI_STATUS_OK);
  CHECK(fabs(s.a_n - 2.0) < 1e-12);
  CHECK(fabs(s.v_n - sqrt(3.0)) < 1e-8);
  CHECK(omori_slowed_splice(h, 5, &s) == OMORI_STATUS_INVALID_ARGUMENT);
  CHECK(omori_last_error_message() != NULL);

  OmoriViolationSummary v;
  CHECK(omori_counterexample(g, 2, 50.0, 0, &v) == OMORI_STATUS_OK);
  CHECK(v.violated && v.delta_h_min > 1.0);

  OmoriFunction *f = NULL;
  CHECK(omori_function_new("1+*t", 1.0, &f) == OMORI_STATUS_PARSE_ERROR);

  omori_slowed_free(h);
  omori_growth_free(g);
  printf("ok %s\n", omori_version());
  return 0;
}
