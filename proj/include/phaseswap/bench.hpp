#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phaseswap/speckle.hpp"

namespace phaseswap {

enum class BenchMethod { phase_sim, speckle_baseline };
std::string_view to_string(BenchMethod method) noexcept;

struct TimingStats {
  double min_ms = 0;
  double median_ms = 0;
  double mean_ms = 0;
  double p95_ms = 0;

  friend bool operator==(const TimingStats&, const TimingStats&) = default;
};

struct BenchmarkReport {
  BenchMethod method = BenchMethod::phase_sim;
  int image_size = 256;
  int iterations = 1;
  int warmup = 0;
  int jobs = 1;
  std::int64_t scatterers = 0;  // speckle_baseline only
  TimingStats per_image_ms;
  std::optional<double> speedup_vs_baseline;
  std::string host;

  friend bool operator==(const BenchmarkReport&, const BenchmarkReport&) = default;
};

struct BenchOptions {
  int iterations = 100;
  int warmup = 5;
  std::uint64_t seed = 0;
  std::int64_t scatterers = 100'000;
  double alpha = 0.11;
  PSFSpec psf{};
  int jobs = 1;  // >1 times a parallel batch; per-image time = wall / iterations
};

/// Inputs handed to the timed closures; built outside the timed region.
struct BenchInputs {
  RealImage real_image;   // seeded speckle-like texture
  RealImage mask_image;   // disc lesion, phase-source polarity
  PhantomSpec phantom;
  ScattererField field;   // disc region anechoic
};

BenchInputs make_bench_inputs(int size, std::uint64_t seed, std::int64_t scatterers);

/// Min, median, mean and nearest-rank p95 of the samples (milliseconds).
TimingStats summarize(std::vector<double> samples_ms);

/// Times one method on seeded synthetic inputs built before the clock starts.
BenchmarkReport time_method(BenchMethod method, int size, const BenchOptions& options);

struct Comparison {
  BenchmarkReport phase_sim;
  BenchmarkReport baseline;
  double speedup = 0;  // baseline median / phase_sim median
};

/// Runs both methods per size. Throws InvalidArgument on an empty size list.
std::vector<Comparison> compare(const std::vector<int>& sizes, const BenchOptions& phase_options,
                                const BenchOptions& baseline_options);

std::string host_fingerprint();

std::string report_to_json(const std::vector<BenchmarkReport>& reports);
std::vector<BenchmarkReport> reports_from_json(const std::string& text);

/// Plain-text table of the comparison rows.
std::string comparison_table(const std::vector<Comparison>& rows);

}  // namespace phaseswap
