/* Whether g modifies the pointee of the argument cannot be known from
 * this unit. Handing out the parameter's address through a non-const
 * pointer counts as a modification. */

typedef unsigned int uint32_t;

extern void g(uint32_t *p);

void f(uint32_t x) {
    g(&x);
}
