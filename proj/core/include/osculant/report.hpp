#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osculant/curvature.hpp"
#include "osculant/gallery.hpp"

namespace osculant {

/// JSON rendering of a report with fixed key order and floats at 17
/// significant digits, so identical inputs give identical bytes. `stamp`,
/// when nonempty, is included verbatim as a trailing key.
std::string report_json(const FlagReport& report, const std::string& stamp = "");

/// CSV rendering: one row per (order, eigenvalue), with a header line.
std::string report_csv(const FlagReport& report);

// ============================================================================
// Verification suite
// ============================================================================

struct SuiteOptions {
  enum class Corpus { gallery, random };
  Corpus corpus = Corpus::gallery;
  int count = 200;          // random corpus size
  std::uint64_t seed = 7;   // random corpus master seed
  RankTolerance tol{};
  int rotations_gallery = 20;  // frame-invariance rotations per gallery item
  int rotations_random = 2;
};

struct SuiteItem {
  std::string label;
  bool ok = false;
  std::string failure;  // first failed check, empty when ok
  std::string dims;     // comma-joined flag dimensions
  double symmetry = 0.0;
  double span = 0.0;
  double invariance = 0.0;
};

struct SuiteResult {
  std::vector<SuiteItem> items;
  int failed = 0;
};

/// Deterministic corpus of random polynomial immersions (n <= 3, m <= 15,
/// degree <= 4, analysis orders <= 3) derived from the master seed.
std::vector<ImmersionSpec> random_corpus(int count, std::uint64_t seed);

/// Runs bound, positivity, oracle-equality, symmetry, span and
/// frame-invariance checks over the gallery or a seeded random corpus.
/// Ill-conditioned levels count as failures.
SuiteResult run_verify_suite(const SuiteOptions& options);

/// Fixed-width summary table, one line per item plus a totals line;
/// byte-identical for identical inputs.
std::string format_suite_table(const SuiteResult& result);

}  // namespace osculant
