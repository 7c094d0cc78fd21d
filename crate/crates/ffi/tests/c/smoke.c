#include <math.h>
#include <stdio.h>
#include <string.h>
#include "residuum.h"

int main(void) {
    const char *src = "vars x;\nnum -1;\nden (x - i) (-x - i);\n";
    ResiduumProblem *p = NULL;
    if (residuum_problem_parse(src, 0, &p) != RESIDUUM_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", residuum_last_error());
        return 1;
    }
    double re = 0, im = 0;
    int certified = 0;
    if (residuum_eval(p, 0, &re, &im, &certified) != RESIDUUM_STATUS_OK) return 2;
    if (fabs(re - 3.14159265358979) > 1e-12 || fabs(im) > 1e-12 || !certified) return 3;
    char *json = NULL;
    if (residuum_report_json(p, RESIDUUM_COMMAND_EVAL, 0, 0, NULL, &json) != RESIDUUM_STATUS_OK) return 4;
    if (strstr(json, "\"schema\": 1") == NULL) return 5;
    residuum_string_free(json);
    residuum_problem_free(p);
    ResiduumProblem *bad = NULL;
    if (residuum_problem_parse("vars x;\nden (x);", 0, &bad) != RESIDUUM_STATUS_PARSE_ERROR) return 6;
    if (bad != NULL || strstr(residuum_last_error(), "meets") == NULL) return 7;
    printf("ok\n");
    return 0;
}
