/* A decision no test run can ever exercise on both sides. */
int guarded(int v) {
    if (0) {
        v = v + 1;
    }
    return v;
}
