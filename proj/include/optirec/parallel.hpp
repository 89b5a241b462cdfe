#pragma once

namespace optirec {

// Execution policy for the data-parallel kernels (Monte Carlo trials,
// per-cell moment quadratures). Serial is the reference implementation the
// tests compare against; results must be bit-identical either way because
// every work item writes its own slot and reductions run in index order.
enum class Exec { Serial, Parallel };

// Effective worker count for Exec::Parallel regions: the OPTIREC_THREADS
// environment variable caps it (0 or unset = all available cores). Returns 1
// when OpenMP is not compiled in.
int thread_cap();

}  // namespace optirec
