#include <stdio.h>
#include <string.h>

#include "popmatch.h"

static const char *INTRO =
    "students: a a'\ncourses: b b'\npref: a b b'\npref: a' b\npref: b a a'\npref: b' a\n";

int main(void) {
    PmInstance *inst = NULL;
    if (pm_instance_parse(INTRO, &inst) != PM_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", pm_last_error_message());
        return 1;
    }
    PmLevelMatching *lm = NULL;
    PmMatching *m = NULL;
    if (pm_solve_maxpop(inst, &lm) != PM_STATUS_OK || pm_level_matching_projection(lm, &m) != PM_STATUS_OK) {
        return 1;
    }
    PmVerdict verdict;
    int64_t optimum;
    if (pm_verify_popular(inst, m, &verdict, &optimum, NULL) != PM_STATUS_OK) {
        return 1;
    }
    char *text = NULL;
    pm_matching_to_string(inst, m, &text);
    printf("size=%zu verdict=%d optimum=%lld\n%s", pm_matching_size(m), (int)verdict, (long long)optimum, text);
    pm_string_free(text);

    PmInstance *bad = NULL;
    PmStatus st = pm_instance_parse("students: a a\n", &bad);
    printf("bad=%d null=%d msg=%s\n", (int)st, bad == NULL, strlen(pm_last_error_message()) > 0 ? "yes" : "no");

    pm_matching_free(m);
    pm_level_matching_free(lm);
    pm_instance_free(inst);
    return 0;
}
