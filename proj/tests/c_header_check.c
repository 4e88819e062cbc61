#include <stdio.h>
#include <string.h>

#include "glab.h"

int main(void) {
  glab_curve* c = NULL;
  double s = 0.0, t = 0.0;
  if (glab_curve_circle(&c) != GLAB_OK) return 1;
  if (glab_curve_tube_coords(c, 0.9, 0.0, &s, &t) != GLAB_OK) return 2;
  glab_curve_free(c);
  if (t < 0.099 || t > 0.101) return 3;
  if (strcmp(glab_status_name(GLAB_PARSE), "parse error") != 0) return 4;
  printf("glab %s\n", glab_version());
  return 0;
}
