// Times the serial reference validators against the OpenMP kernels on
// identical generated workloads and reports per-configuration speedups.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "redact/bench.hpp"
#include "redact/dump.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace redact::bench;

struct Pair {
  ValidatorKind serial;
  ValidatorKind parallel;
  const char* label;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP validation benchmark"};
  std::size_t blocks = 1500, tx = 64, reps = 9, entry_bytes = 250;
  double fraction = 0.05;
  std::uint64_t seed = 1;
  std::string out;
  app.add_option("--blocks", blocks, "chain length");
  app.add_option("--tx", tx, "entries per block");
  app.add_option("--redact", fraction, "fraction of blocks rewritten");
  app.add_option("--reps", reps, "timing repetitions");
  app.add_option("--entry-bytes", entry_bytes, "bytes per entry");
  app.add_option("--seed", seed, "workload seed");
  app.add_option("--out", out, "also write the CSV here");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::cout << "OpenMP threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "built without OpenMP; the parallel kernels run serially\n";
#endif

  BenchSpec spec;
  spec.n_blocks = blocks;
  spec.tx_per_block = tx;
  spec.redact_fraction = fraction;
  spec.repetitions = reps;
  spec.seed = seed;
  spec.entry_bytes = entry_bytes;
  check_bench_spec(spec);

  const redact::Chain chain = generate_chain(spec);
  std::cout << "workload: " << chain.length() << " blocks, " << tx << " entries of "
            << entry_bytes << " bytes each, fraction rewritten " << fraction << "\n\n";

  const Pair pairs[] = {
      {ValidatorKind::redactable, ValidatorKind::redactable_parallel, "redactable"},
      {ValidatorKind::redactable_ext, ValidatorKind::redactable_ext_parallel, "redactable_ext"},
      {ValidatorKind::immutable, ValidatorKind::immutable_parallel, "immutable"},
  };

  std::string csv = bench_csv_header() + "\n";
  int failures = 0;
  for (const Pair& p : pairs) {
    // The rewrite-unaware baseline must reject rewritten workloads; skip it there.
    const bool expect_valid = !(p.serial == ValidatorKind::immutable && fraction > 0);
    const auto s = bench_validate(chain, spec.params, p.serial, reps,
                                  std::string(p.label) + "_serial");
    auto par = bench_validate(chain, spec.params, p.parallel, reps,
                              std::string(p.label) + "_parallel");
    set_overhead(par, s);
    csv += bench_csv_row(spec, s) + "\n";
    csv += bench_csv_row(spec, par) + "\n";

    if (s.valid != expect_valid || par.valid != s.valid) {
      std::cout << p.label << ": verdict mismatch (serial " << s.valid << ", parallel "
                << par.valid << ", expected " << expect_valid << ")\n";
      ++failures;
      continue;
    }
    std::printf("%-16s serial %8.2f ms   parallel %8.2f ms   speedup %.2fx\n", p.label,
                s.mean_ms, par.mean_ms, par.mean_ms > 0 ? s.mean_ms / par.mean_ms : 0.0);
  }

  if (!out.empty()) {
    redact::io::write_text_file(out, csv);
    std::cout << "\nwrote " << out << "\n";
  }
  return failures == 0 ? 0 : 1;
}
