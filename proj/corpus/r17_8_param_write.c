/* The parameter is only written on a branch that can never run: x is
 * unsigned, so x < 0 is always false. The whole-body view still treats
 * the parameter as read-only and flags the store. */

typedef unsigned int uint32_t;

void f(uint32_t x) {
    if (x < 0u) {
        x = 0u;
    }
}
