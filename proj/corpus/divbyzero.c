/* Documentation only; never executed. A perfect division-by-zero
 * checker would double as a termination checker: wrap any program so
 * that a division by zero sits immediately after it. The division is
 * reached exactly when the wrapped program terminates, so deciding the
 * division decides termination, which halt.c shows is impossible. */

extern void arbitrary_program(void);

int wrapped(void) {
    int zero = 0;
    arbitrary_program();
    return 1 / zero;
}
