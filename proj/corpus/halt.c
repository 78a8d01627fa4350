/* Documentation only; never executed, and no tool promises anything
 * about it. If the function halts() below could be written so that it
 * returns 1 exactly when running program(input) would terminate, then
 * confound() fed its own address would have to halt and not halt at
 * once. No future cleverness escapes this: the file records why the
 * checker reports approximations instead of answers. */

typedef int (*program_fn)(int);

/* The impossible specification: decide termination of program(input). */
extern int halts(program_fn program, int input);

static int confound(int self) {
    program_fn me = (program_fn)0;
    /* Assume some way of recovering our own address into `me`. */
    if (halts(me, self)) {
        for (;;) {
        }
    }
    return 0;
}

int main(void) {
    return confound(0);
}
