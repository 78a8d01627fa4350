/* The shift-assignment to mask on the last iteration is wasted, but the
 * store is live around the loop-back edge, so the static analysis keeps
 * it. The loop itself is in the accepted determinate shape. */

typedef unsigned char uint8_t;

extern void transmit_bit(uint8_t bit);

void transmit_octet(const uint8_t octet) {
    uint8_t mask = 1U;
    for (uint8_t bit = 0; bit < 8; ++bit) {
        transmit_bit(octet & mask);
        mask <<= 1U;
    }
}
