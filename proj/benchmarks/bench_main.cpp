// Whole-pipeline benchmarks: front end through flow analysis, and the
// reference interpreter on a loop-heavy unit.

#include <benchmark/benchmark.h>

#include <sstream>

#include "minicheck/driver.hpp"
#include "minicheck/oracle.hpp"

namespace {

const char* const kAnalysisUnit = R"(
#include <stdio.h>
#include <string.h>

static unsigned crc_step(unsigned crc, unsigned char byte) {
    unsigned mask;
    int i;
    crc = crc ^ byte;
    for (i = 0; i < 8; i++) {
        mask = 0u - (crc & 1u);
        crc = (crc >> 1) ^ (0xEDB88320u & mask);
    }
    return crc;
}

unsigned checksum(const char* text) {
    unsigned crc = 0xFFFFFFFFu;
    size_t n = strlen(text);
    size_t i;
    for (i = 0; i < n; i++) {
        crc = crc_step(crc, (unsigned char)text[i]);
    }
    return ~crc;
}

int copy_config(FILE* dst, FILE* src) {
    int ch;
    int written = 0;
    while ((ch = fgetc(src)) != EOF) {
        if (fputc(ch, dst) == EOF) {
            return -1;
        }
        written++;
    }
    return written;
}

int main(void) {
    printf("%u\n", checksum("benchmark"));
    return 0;
}
)";

const char* const kInterpUnit = R"(
int work(int rounds) {
    int total = 0;
    int i;
    for (i = 0; i < rounds; i++) {
        int j;
        for (j = 0; j < 50; j++) {
            total = total + (i ^ j);
        }
    }
    return total & 0xFF;
}

int main(void) {
    return work(40);
}
)";

void bench_analyze(benchmark::State& state) {
    for (auto _ : state) {
        auto unit = minicheck::driver::analyze_text("bench.c", kAnalysisUnit, {});
        benchmark::DoNotOptimize(unit.functions.size());
    }
}
BENCHMARK(bench_analyze);

void bench_interpret(benchmark::State& state) {
    auto unit = minicheck::driver::analyze_text("interp.c", kInterpUnit, {});
    minicheck::oracle::RunOptions opt;
    opt.fuel = 1000000;
    for (auto _ : state) {
        auto trace = minicheck::oracle::run(*unit.typed, opt);
        benchmark::DoNotOptimize(trace.executed.size());
    }
}
BENCHMARK(bench_interpret);

}  // namespace

BENCHMARK_MAIN();
