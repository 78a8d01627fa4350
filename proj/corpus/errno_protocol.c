/* The errno discipline around the string conversion functions: zero it
 * immediately before the call, test it immediately after (one plain copy
 * of the result may sit in between), and never look at it elsewhere.
 * Each function below holds exactly one arrangement. */

#include <errno.h>
#include <stdlib.h>

long compliant_direct(const char *s) {
    char *end;
    long v;
    errno = 0;
    v = strtol(s, &end, 10);
    if (errno == ERANGE) {
        v = 0;
    }
    return v;
}

long compliant_with_copy(const char *s) {
    char *end;
    long v;
    errno = 0;
    v = strtol(s, &end, 10);
    long saved = v;
    if (errno != 0) {
        saved = 0;
    }
    return saved;
}

long missing_zero(const char *s) {
    char *end;
    long v;
    v = strtol(s, &end, 10);
    if (errno == ERANGE) {
        v = 0;
    }
    return v;
}

long missing_test(const char *s) {
    char *end;
    long v;
    errno = 0;
    v = strtol(s, &end, 10);
    return v;
}

long missing_both(const char *s) {
    char *end;
    return strtol(s, &end, 10);
}

int stray_read(void) {
    return errno;
}
