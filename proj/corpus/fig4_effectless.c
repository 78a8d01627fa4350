/* Five effectless operations, each carrying a justification the engine
 * can recognize: macro abstraction twice, a sizeof unit, a configured-out
 * function body, and an enumerator shaped like its series siblings. */

#define OFFSET 0
#define SCALE 1

typedef char T;

typedef enum {
    BIT0 = 1U << 0,
    BIT1 = 1U << 1,
    BIT2 = 1U << 2
} Bit_Masks;

static void do_X_if_necessary(void) {
#ifdef ENABLE_X
    do_X();
#endif
}

void survey(unsigned int x) {
    x + OFFSET;
    x * SCALE;
    x * sizeof(T);
    do_X_if_necessary();
}
