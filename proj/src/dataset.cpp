#include "phaseswap/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "parallel.hpp"
#include "phaseswap/image_io.hpp"
#include "phaseswap/rng.hpp"

namespace phaseswap {
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Stream identifiers for mix_seed; each consumer of the global seed gets its own.
constexpr std::uint64_t kPairingStream = 0x7061697200000000ULL;
constexpr std::uint64_t kSplitStream = 0x73706c6974000000ULL;
constexpr std::uint64_t kRecordStream = 0x7265630000000000ULL;

bool is_image_file(const fs::path& p) {
  auto e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ".png" || e == ".pgm";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
}

void check_split(std::size_t total, const SplitSpec& split) {
  if (split.train_count + split.val_count != total) {
    throw Error(ErrorCode::InvalidArgument,
                "split " + std::to_string(split.train_count) + "/" +
                    std::to_string(split.val_count) + " does not sum to " +
                    std::to_string(total) + " records");
  }
}

class Progress {
 public:
  Progress(std::string label, std::size_t total, bool quiet)
      : label_(std::move(label)), total_(total), quiet_(quiet) {}

  void tick() {
    if (quiet_ || total_ == 0) return;
    std::lock_guard lock(mutex_);
    ++done_;
    const auto pct = done_ * 100 / total_;
    if (pct >= next_pct_) {
      std::fprintf(stderr, "%s: %zu%% (%zu/%zu)\n", label_.c_str(), pct, done_, total_);
      next_pct_ = (pct / 10 + 1) * 10;
    }
  }

 private:
  std::string label_;
  std::size_t total_;
  bool quiet_;
  std::mutex mutex_;
  std::size_t done_ = 0;
  std::size_t next_pct_ = 10;
};

RealImage load_ground_truth(const fs::path& path, int width, int height) {
  return binarize_mask(resample(read_image(path), width, height, ResampleMode::nearest));
}

template <typename Fn>
void run_records(const std::string& label, std::size_t n, const DatasetOptions& options, Fn&& fn) {
  Progress progress(label, n, options.quiet);
  const auto outcome = detail::parallel_for(n, options.jobs, [&](std::size_t i) {
    fn(i);
    progress.tick();
  });
  if (!outcome.error) return;
  const std::string partial = "aborted after writing " + std::to_string(outcome.completed) +
                              " of " + std::to_string(n) + " records to " +
                              options.out_dir.string() + ": ";
  try {
    std::rethrow_exception(outcome.error);
  } catch (const Error& e) {
    throw Error(e.code(), partial + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::IoFailure, partial + e.what());
  }
}

void write_outputs(const DatasetManifest& manifest, const fs::path& out_dir) {
  write_text(out_dir / "manifest.json", manifest_to_json(manifest));
  write_text(out_dir / "split.csv", split_csv(manifest));
}

void check_options(const DatasetOptions& options) {
  if (options.out_dir.empty()) throw Error(ErrorCode::InvalidArgument, "empty output directory");
  if (options.target_width < 2 || options.target_height < 2) {
    throw Error(ErrorCode::InvalidArgument, "target size must be at least 2x2");
  }
  require_even(options.target_width, options.target_height, "target size");
  if (options.jobs < 1) throw Error(ErrorCode::InvalidArgument, "jobs must be >= 1");
}

}  // namespace

std::vector<fs::path> list_images(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::IoFailure, dir.string() + " is not a directory");
  }
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) paths.push_back(entry.path());
  }
  if (paths.empty()) {
    throw Error(ErrorCode::EmptyDirectory, dir.string() + " holds no PNG or PGM images");
  }
  std::sort(paths.begin(), paths.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return paths;
}

std::vector<LoadedImage> ingest_images(const fs::path& dir) {
  std::vector<LoadedImage> out;
  for (auto& p : list_images(dir)) {
    auto img = read_image(p);
    out.push_back({std::move(p), std::move(img)});
  }
  return out;
}

RealImage binarize_mask(const RealImage& img, double threshold) {
  RealImage out(img.width(), img.height());
  std::transform(img.begin(), img.end(), out.begin(),
                 [threshold](double v) { return v > threshold ? 1.0 : 0.0; });
  return out;
}

RealImage resample(const RealImage& img, int width, int height, ResampleMode mode) {
  validate(img);
  if (width < 2 || height < 2) {
    throw Error(ErrorCode::InvalidArgument, "resample target must be at least 2x2");
  }
  require_even(width, height, "resample target");

  const int sw = img.width();
  const int sh = img.height();
  const double scale_x = static_cast<double>(sw) / width;
  const double scale_y = static_cast<double>(sh) / height;
  RealImage out(width, height);

  if (mode == ResampleMode::nearest) {
    for (int y = 0; y < height; ++y) {
      const int sy = std::min(sh - 1, static_cast<int>(std::floor((y + 0.5) * scale_y)));
      for (int x = 0; x < width; ++x) {
        const int sx = std::min(sw - 1, static_cast<int>(std::floor((x + 0.5) * scale_x)));
        out(x, y) = img(sx, sy);
      }
    }
    return out;
  }

  // Bilinear with pixel centers aligned; coordinates clamp at the border.
  const auto source = [](int i, double scale, int n, int& i0, int& i1, double& frac) {
    const double s = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(n - 1));
    i0 = static_cast<int>(std::floor(s));
    i1 = std::min(i0 + 1, n - 1);
    frac = s - i0;
  };
  for (int y = 0; y < height; ++y) {
    int y0, y1;
    double fy;
    source(y, scale_y, sh, y0, y1, fy);
    for (int x = 0; x < width; ++x) {
      int x0, x1;
      double fx;
      source(x, scale_x, sw, x0, x1, fx);
      const double top = img(x0, y0) * (1.0 - fx) + img(x1, y0) * fx;
      const double bottom = img(x0, y1) * (1.0 - fx) + img(x1, y1) * fx;
      out(x, y) = top * (1.0 - fy) + bottom * fy;
    }
  }
  return out;
}

std::string_view to_string(Split split) noexcept {
  return split == Split::train ? "train" : "val";
}

std::string record_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04zu", index);
  return buf;
}

std::vector<PairRecord> pair_random(const std::vector<fs::path>& masks,
                                    const std::vector<fs::path>& images,
                                    std::uint64_t global_seed, AlphaParam alpha) {
  if (masks.empty()) throw Error(ErrorCode::EmptyList, "no masks to pair");
  if (images.empty()) throw Error(ErrorCode::EmptyList, "no images to pair");

  Rng rng(mix_seed(global_seed, kPairingStream));
  std::vector<PairRecord> records;
  records.reserve(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const auto pick = rng.uniform_index(images.size());
    const auto stem = record_stem(i);
    PairRecord r;
    r.mask_path = masks[i].string();
    r.image_path = images[pick].string();
    r.alpha = alpha.value();
    r.seed = mix_seed(global_seed, kRecordStream + i);
    r.output_image_path = "images/" + stem + ".png";
    r.output_mask_path = "masks/" + stem + ".png";
    records.push_back(std::move(r));
  }
  return records;
}

void assign_splits(std::vector<PairRecord>& records, const SplitSpec& split,
                   std::uint64_t global_seed) {
  check_split(records.size(), split);
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(mix_seed(global_seed, kSplitStream));
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_index(i)]);
  }
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    records[order[rank]].split = rank < split.train_count ? Split::train : Split::val;
  }
}

DatasetManifest generate_dataset(std::vector<PairRecord> records, const SplitSpec& split,
                                 const DatasetOptions& options) {
  check_options(options);
  if (records.empty()) throw Error(ErrorCode::EmptyList, "no records to generate");
  assign_splits(records, split, options.global_seed);
  const int w = options.target_width;
  const int h = options.target_height;

  // Real images repeat across records; load and resample each one once.
  std::map<std::string, RealImage> real_images;
  for (const auto& r : records) {
    if (!real_images.contains(r.image_path)) {
      real_images.emplace(r.image_path,
                          resample(read_image(r.image_path), w, h, ResampleMode::bilinear));
    }
  }
  std::map<double, PhaseMask> phase_masks;
  for (const auto& r : records) {
    if (!phase_masks.contains(r.alpha)) {
      phase_masks.emplace(r.alpha, build_lowfreq_mask(w, h, AlphaParam(r.alpha)));
    }
  }

  make_dirs(options.out_dir / "images");
  make_dirs(options.out_dir / "masks");

  run_records("dataset", records.size(), options, [&](std::size_t i) {
    const auto& r = records[i];
    const auto truth = load_ground_truth(r.mask_path, w, h);
    const auto source = phase_source_from_mask(truth, options.invert_mask_polarity);
    const auto sim = simulate_raw(real_images.at(r.image_path), source, phase_masks.at(r.alpha));
    write_image(options.out_dir / r.output_image_path, normalize_output(sim.raw));
    write_image(options.out_dir / r.output_mask_path, truth);
  });

  DatasetManifest manifest;
  manifest.method = "phase_sim";
  manifest.records = std::move(records);
  manifest.target_width = w;
  manifest.target_height = h;
  manifest.global_seed = options.global_seed;
  manifest.created_at = options.created_at;
  write_outputs(manifest, options.out_dir);
  return manifest;
}

DatasetManifest generate_speckle_dataset(const std::vector<fs::path>& masks,
                                         const SplitSpec& split, const DatasetOptions& options,
                                         const PhantomSpec& phantom, const PSFSpec& psf,
                                         double dynamic_range_db) {
  check_options(options);
  if (masks.empty()) throw Error(ErrorCode::EmptyList, "no masks for speckle dataset");
  PhantomSpec spec = phantom;
  spec.grid_width = options.target_width;
  spec.grid_height = options.target_height;
  spec.validate();
  psf.validate();

  std::vector<PairRecord> records;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const auto stem = record_stem(i);
    PairRecord r;
    r.mask_path = masks[i].string();
    r.image_path = "speckle_baseline";
    r.alpha = 0.0;
    r.seed = mix_seed(options.global_seed, kRecordStream + i);
    r.output_image_path = "images/" + stem + ".png";
    r.output_mask_path = "masks/" + stem + ".png";
    records.push_back(std::move(r));
  }
  assign_splits(records, split, options.global_seed);

  make_dirs(options.out_dir / "images");
  make_dirs(options.out_dir / "masks");

  run_records("speckle", records.size(), options, [&](std::size_t i) {
    const auto& r = records[i];
    const auto truth = load_ground_truth(r.mask_path, spec.grid_width, spec.grid_height);
    const auto field = apply_anechoic_mask(sample_scatterers(spec, r.seed), truth, spec);
    write_image(options.out_dir / r.output_image_path,
                render_bmode(field, spec, psf, dynamic_range_db));
    write_image(options.out_dir / r.output_mask_path, truth);
  });

  DatasetManifest manifest;
  manifest.method = "speckle_baseline";
  manifest.records = std::move(records);
  manifest.target_width = spec.grid_width;
  manifest.target_height = spec.grid_height;
  manifest.global_seed = options.global_seed;
  manifest.created_at = options.created_at;
  write_outputs(manifest, options.out_dir);
  return manifest;
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  ordered_json records = ordered_json::array();
  for (const auto& r : manifest.records) {
    records.push_back({
        {"mask_path", r.mask_path},
        {"image_path", r.image_path},
        {"alpha", r.alpha},
        {"seed", r.seed},
        {"output_image_path", r.output_image_path},
        {"output_mask_path", r.output_mask_path},
        {"split", std::string(to_string(r.split))},
    });
  }
  ordered_json j = {
      {"method", manifest.method},
      {"global_seed", manifest.global_seed},
      {"target_width", manifest.target_width},
      {"target_height", manifest.target_height},
      {"created_at", manifest.created_at},
      {"records", std::move(records)},
  };
  return j.dump(2) + "\n";
}

DatasetManifest manifest_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    DatasetManifest m;
    m.method = j.value("method", std::string("phase_sim"));
    m.global_seed = j.at("global_seed").get<std::uint64_t>();
    m.target_width = j.at("target_width").get<int>();
    m.target_height = j.at("target_height").get<int>();
    m.created_at = j.at("created_at").get<std::string>();
    for (const auto& jr : j.at("records")) {
      PairRecord r;
      r.mask_path = jr.at("mask_path").get<std::string>();
      r.image_path = jr.at("image_path").get<std::string>();
      r.alpha = jr.at("alpha").get<double>();
      r.seed = jr.at("seed").get<std::uint64_t>();
      r.output_image_path = jr.at("output_image_path").get<std::string>();
      r.output_mask_path = jr.at("output_mask_path").get<std::string>();
      const auto split = jr.at("split").get<std::string>();
      if (split != "train" && split != "val") {
        throw Error(ErrorCode::InvalidArgument, "unknown split '" + split + "'");
      }
      r.split = split == "train" ? Split::train : Split::val;
      m.records.push_back(std::move(r));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed manifest: ") + e.what());
  }
}

std::string split_csv(const DatasetManifest& manifest) {
  std::ostringstream out;
  out << "filename,split\n";
  for (const auto& r : manifest.records) {
    out << fs::path(r.output_image_path).filename().string() << ',' << to_string(r.split) << '\n';
  }
  return out.str();
}

}  // namespace phaseswap
