/* Mixed justified and unjustified effectless code. Only the literal
 * x + 0 and x * 1 lines lack any recognizable abstraction; everything
 * else is macro, sizeof, configuration, loop, or value dependent. */

#define OFFSET 0
#define SCALE 1
#define NUM_REPETITIONS 0
#define MAX 100

typedef char T;

extern void do_things(void);

static void do_X_if_necessary(void) {
#ifdef ENABLE_X
    do_X();
#endif
}

int survey(int x) {
    int i;

    x + 0;
    x + OFFSET;

    x * 1;
    x * SCALE;
    x * sizeof(T);

    do_X_if_necessary();

    for (i = 0; i < NUM_REPETITIONS; ++i) {
        do_things();
    }

    /* Saturate. */
    x = (x > MAX) ? MAX : x;
    return x;
}
