#include <stdio.h>
#include <string.h>
#include "l2torsion.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, l2t_last_error()); return 1; } } while (0)

int main(void) {
    L2tHom *h = NULL;
    CHECK(l2t_hom_from_json("{\"domain_rank\":2,\"codomain_rank\":2,\"images\":[\"x1 x2^-1\",\"x2^2 x1\"]}", &h) == L2T_STATUS_OK);
    bool taut = false, product = true;
    CHECK(l2t_hom_is_taut(h, &taut) == L2T_STATUS_OK && taut);
    CHECK(l2t_hom_is_product(h, &product) == L2T_STATUS_OK && !product);
    L2tTorsion *t = NULL;
    CHECK(l2t_hom_torsion(h, 8, 0, &t) == L2T_STATUS_OK);
    char *json = NULL;
    CHECK(l2t_torsion_to_json(t, &json) == L2T_STATUS_OK);
    CHECK(strstr(json, "\"zero\":false") != NULL);
    l2t_string_free(json);
    l2t_torsion_free(t);
    l2t_hom_free(h);

    L2tHom *bad = NULL;
    CHECK(l2t_hom_from_json("{oops", &bad) == L2T_STATUS_INVALID_INPUT);
    CHECK(bad == NULL && strlen(l2t_last_error()) > 0);
    printf("ok %s\n", l2t_version());
    return 0;
}
