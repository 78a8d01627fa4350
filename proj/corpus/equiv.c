/* Documentation only; never executed. A perfect program-equivalence
 * checker would decide universal termination: compare any function
 * against spin(), which never terminates on any input. The two agree
 * exactly when the candidate also never terminates, so equivalence
 * answers a question no algorithm can answer. */

int spin(int input) {
    for (;;) {
        input = input + 1;
    }
}

extern int candidate(int input);
