// Build-time generator for the embedded null-distribution table. Emits a
// translation unit holding sorted Monte Carlo samples of integral B(u)^2 du,
// drawn from the Karhunen-Loeve series oracle with a fixed recorded seed so
// rebuilds are byte-identical.
#include <cinttypes>
#include <cstdio>
#include <string>

#include "sitest/nulldist.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_null_table <output.cpp>\n");
    return 2;
  }
  const int m = 200000;
  const int terms = 200;
  const sitest::RngSpec spec{987654321u, 7u};
  const sitest::NullTable table = sitest::simulate_null_series(m, terms, spec);

  std::FILE* out = std::fopen(argv[1], "w");
  if (!out) {
    std::fprintf(stderr, "make_null_table: cannot write %s\n", argv[1]);
    return 1;
  }
  std::fprintf(out,
               "// Generated by make_null_table. Do not edit.\n"
               "#include <cstddef>\n#include <cstdint>\n\n"
               "namespace sitest::detail {\n\n"
               "extern const std::uint64_t kNullTableSeed = %" PRIu64 "ull;\n"
               "extern const std::uint64_t kNullTableStream = %" PRIu64
               "ull;\n"
               "extern const int kNullTableTerms = %d;\n"
               "extern const std::size_t kNullTableSize = %zu;\n\n"
               "extern const double kNullTableData[] = {\n",
               table.seed, table.stream, table.resolution,
               table.samples.size());
  for (std::size_t i = 0; i < table.samples.size(); ++i) {
    std::fprintf(out, "%.17g,", table.samples[i]);
    std::fputc((i % 4 == 3) ? '\n' : ' ', out);
  }
  std::fprintf(out, "\n};\n\n}  // namespace sitest::detail\n");
  std::fclose(out);
  return 0;
}
