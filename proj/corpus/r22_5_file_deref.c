/* A stream handle is dereferenced on a branch the configuration never
 * takes. Reachability does not matter here: the pointed-to object may
 * only be used through library calls, so the dereference itself is the
 * violation. */

#include <stdio.h>

extern int always_false_in_this_configuration(void);

void probe(FILE *p) {
    if (always_false_in_this_configuration()) {
        *p;
    }
}
