#include "phaseswap/bench.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "parallel.hpp"
#include "phaseswap/phase_sim.hpp"
#include "phaseswap/rng.hpp"

namespace phaseswap {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Disc of radius size/5 centered in the frame.
RealImage disc(int size) {
  RealImage img(size, size, 0.0);
  const double c = size / 2.0;
  const double r = size / 5.0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = x + 0.5 - c;
      const double dy = y + 0.5 - c;
      if (dx * dx + dy * dy <= r * r) img(x, y) = 1.0;
    }
  }
  return img;
}

template <typename Fn>
std::vector<double> run_timed(const BenchOptions& options, Fn&& fn) {
  for (int i = 0; i < options.warmup; ++i) fn();
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(options.iterations));
  for (int i = 0; i < options.iterations; ++i) {
    if (options.jobs <= 1) {
      const auto start = Clock::now();
      fn();
      samples.push_back(elapsed_ms(start));
    } else {
      const auto batch = static_cast<std::size_t>(options.jobs);
      const auto start = Clock::now();
      const auto outcome = detail::parallel_for(batch, options.jobs, [&](std::size_t) { fn(); });
      if (outcome.error) std::rethrow_exception(outcome.error);
      samples.push_back(elapsed_ms(start) / static_cast<double>(batch));
    }
  }
  return samples;
}

}  // namespace

std::string_view to_string(BenchMethod method) noexcept {
  return method == BenchMethod::phase_sim ? "phase_sim" : "speckle_baseline";
}

BenchInputs make_bench_inputs(int size, std::uint64_t seed, std::int64_t scatterers) {
  BenchInputs in;
  in.real_image = RealImage(size, size);
  Rng rng(mix_seed(seed, 1));
  for (auto& v : in.real_image) v = rng.uniform01();
  const auto lesion = disc(size);
  in.mask_image = phase_source_from_mask(lesion);

  in.phantom.num_scatterers = scatterers;
  in.phantom.grid_width = size;
  in.phantom.grid_height = size;
  in.field = apply_anechoic_mask(sample_scatterers(in.phantom, mix_seed(seed, 2)), lesion,
                                 in.phantom);
  return in;
}

TimingStats summarize(std::vector<double> samples) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "no timing samples");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  TimingStats s;
  s.min_ms = samples.front();
  s.median_ms = n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  s.mean_ms = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  s.p95_ms = samples[std::max<std::size_t>(rank, 1) - 1];
  if (n == 1) s.mean_ms = s.median_ms = s.p95_ms = s.min_ms;
  return s;
}

BenchmarkReport time_method(BenchMethod method, int size, const BenchOptions& options) {
  if (options.iterations < 1) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 1");
  if (options.warmup < 0) throw Error(ErrorCode::InvalidArgument, "warmup must be >= 0");
  if (size < 2) throw Error(ErrorCode::InvalidArgument, "benchmark size must be >= 2");
  require_even(size, size, "benchmark size");

  const auto in = make_bench_inputs(
      size, options.seed, method == BenchMethod::speckle_baseline ? options.scatterers : 0);
  const AlphaParam alpha(options.alpha);

  std::vector<double> samples;
  if (method == BenchMethod::phase_sim) {
    samples = run_timed(options, [&] {
      auto out = simulate(in.real_image, in.mask_image, alpha);
      (void)out;
    });
  } else {
    samples = run_timed(options, [&] {
      auto out = render_bmode(in.field, in.phantom, options.psf);
      (void)out;
    });
  }

  BenchmarkReport r;
  r.method = method;
  r.image_size = size;
  r.iterations = options.iterations;
  r.warmup = options.warmup;
  r.jobs = options.jobs;
  r.scatterers = method == BenchMethod::speckle_baseline ? options.scatterers : 0;
  r.per_image_ms = summarize(std::move(samples));
  r.host = host_fingerprint();
  return r;
}

std::vector<Comparison> compare(const std::vector<int>& sizes, const BenchOptions& phase_options,
                                const BenchOptions& baseline_options) {
  if (sizes.empty()) throw Error(ErrorCode::InvalidArgument, "no benchmark sizes given");
  std::vector<Comparison> rows;
  for (int size : sizes) {
    Comparison c;
    c.phase_sim = time_method(BenchMethod::phase_sim, size, phase_options);
    c.baseline = time_method(BenchMethod::speckle_baseline, size, baseline_options);
    c.speedup = c.baseline.per_image_ms.median_ms / c.phase_sim.per_image_ms.median_ms;
    c.phase_sim.speedup_vs_baseline = c.speedup;
    rows.push_back(std::move(c));
  }
  return rows;
}

std::string host_fingerprint() {
  std::string cpu;
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(colon + 2);
      break;
    }
  }
  utsname u{};
  std::string os = "unknown";
  if (uname(&u) == 0) os = std::string(u.sysname) + " " + u.release + " " + u.machine;
  std::ostringstream out;
  out << (cpu.empty() ? "unknown cpu" : cpu) << "; " << std::thread::hardware_concurrency()
      << " hw threads; " << os;
  return out.str();
}

std::string report_to_json(const std::vector<BenchmarkReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j = {
        {"method", std::string(to_string(r.method))},
        {"image_size", r.image_size},
        {"iterations", r.iterations},
        {"warmup", r.warmup},
        {"jobs", r.jobs},
        {"scatterers", r.scatterers},
        {"per_image_ms",
         {{"min", r.per_image_ms.min_ms},
          {"median", r.per_image_ms.median_ms},
          {"mean", r.per_image_ms.mean_ms},
          {"p95", r.per_image_ms.p95_ms}}},
    };
    if (r.speedup_vs_baseline) {
      j["speedup_vs_baseline"] = *r.speedup_vs_baseline;
      j["speedup_reference"] = "vs. in-repo convolutional baseline";
    }
    j["host"] = r.host;
    arr.push_back(std::move(j));
  }
  return nlohmann::ordered_json{{"reports", std::move(arr)}}.dump(2) + "\n";
}

std::vector<BenchmarkReport> reports_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    std::vector<BenchmarkReport> out;
    for (const auto& j : doc.at("reports")) {
      BenchmarkReport r;
      const auto method = j.at("method").get<std::string>();
      if (method == "phase_sim") {
        r.method = BenchMethod::phase_sim;
      } else if (method == "speckle_baseline") {
        r.method = BenchMethod::speckle_baseline;
      } else {
        throw Error(ErrorCode::InvalidArgument, "unknown method '" + method + "'");
      }
      r.image_size = j.at("image_size").get<int>();
      r.iterations = j.at("iterations").get<int>();
      r.warmup = j.at("warmup").get<int>();
      r.jobs = j.value("jobs", 1);
      r.scatterers = j.value("scatterers", std::int64_t{0});
      const auto& t = j.at("per_image_ms");
      r.per_image_ms = {t.at("min").get<double>(), t.at("median").get<double>(),
                        t.at("mean").get<double>(), t.at("p95").get<double>()};
      if (j.contains("speedup_vs_baseline")) {
        r.speedup_vs_baseline = j.at("speedup_vs_baseline").get<double>();
      }
      r.host = j.value("host", std::string());
      out.push_back(std::move(r));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed benchmark report: ") + e.what());
  }
}

std::string comparison_table(const std::vector<Comparison>& rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%8s %16s %16s %12s\n", "size", "phase_sim ms", "baseline ms",
                "speedup");
  out << line;
  for (const auto& c : rows) {
    std::snprintf(line, sizeof line, "%8d %16.4f %16.4f %11.1fx\n", c.phase_sim.image_size,
                  c.phase_sim.per_image_ms.median_ms, c.baseline.per_image_ms.median_ms, c.speedup);
    out << line;
  }
  out << "(median per-image time; speedup is vs. in-repo convolutional baseline)\n";
  return out.str();
}

}  // namespace phaseswap
