/* Two small reachable functions whose every line the accompanying
 * evidence files claim to have executed. */
int clamp(int v, int lo, int hi) {
    if (v < lo) {
        v = lo;
    }
    if (v > hi) {
        v = hi;
    }
    return v;
}

int sum_to(int n) {
    int total = 0;
    int i;
    for (i = 0; i < n; ++i) {
        total = total + i;
    }
    return total;
}
