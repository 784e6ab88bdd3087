#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "phaseswap/bench.hpp"
#include "phaseswap/dataset.hpp"
#include "phaseswap/image_io.hpp"
#include "phaseswap/metrics.hpp"
#include "phaseswap/phase_sim.hpp"
#include "phaseswap/speckle.hpp"

namespace phaseswap::cli {
namespace fs = std::filesystem;

namespace {

struct Size {
  int width = 256;
  int height = 256;
};

// "256" or "320x240".
Size parse_size(const std::string& text) {
  Size s;
  const auto x = text.find('x');
  try {
    std::size_t used = 0;
    if (x == std::string::npos) {
      s.width = s.height = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      s.width = std::stoi(text.substr(0, x), &used);
      if (used != x) throw std::invalid_argument(text);
      const auto rest = text.substr(x + 1);
      s.height = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(text);
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidArgument, "bad size '" + text + "', expected N or WxH");
  }
  if (s.width < 2 || s.height < 2) {
    throw Error(ErrorCode::InvalidArgument, "size must be at least 2x2");
  }
  require_even(s.width, s.height, "target size");
  return s;
}

SplitSpec parse_split(const std::vector<std::int64_t>& split, std::size_t total) {
  if (split.empty()) {
    // 80/20 unless given.
    const auto train = static_cast<std::size_t>(std::llround(0.8 * static_cast<double>(total)));
    return {train, total - train};
  }
  if (split[0] < 0 || split[1] < 0) throw Error(ErrorCode::InvalidArgument, "negative split");
  return {static_cast<std::size_t>(split[0]), static_cast<std::size_t>(split[1])};
}

// SOURCE_DATE_EPOCH keeps manifests reproducible; without it the epoch is used.
std::string default_created_at() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      t = static_cast<std::time_t>(std::stoll(env));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, "SOURCE_DATE_EPOCH is not an integer");
    }
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void add_seed(CLI::App* cmd, std::uint64_t& seed) {
  cmd->add_option("--seed", seed, "Seed for all randomness")
      ->envname("PHASESWAP_SEED")
      ->capture_default_str();
}

void add_config(CLI::App* cmd) {
  // Consumed by expand_config before parsing; listed here for --help.
  cmd->add_option("--config", "Optional key = value file; flags override it");
}

struct SimulateArgs {
  std::string real, mask, out, truth_out;
  double alpha = AlphaParam::kDefault;
  bool invert = false;
  bool resize = false;
  std::string size = "256";
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const AlphaParam alpha(a.alpha);
  auto real = read_image(a.real);
  auto mask = read_image(a.mask);
  RealImage truth;
  if (a.resize) {
    const auto size = parse_size(a.size);
    real = resample(real, size.width, size.height, ResampleMode::bilinear);
    truth = binarize_mask(resample(mask, size.width, size.height, ResampleMode::nearest));
  } else {
    require_same_shape(real, mask, "real image vs mask (pass --resize to resample both)");
    require_even(real.width(), real.height());
    truth = binarize_mask(mask);
  }
  const auto sim = simulate(real, phase_source_from_mask(truth, a.invert), alpha);
  write_image(a.out, sim);
  if (!a.truth_out.empty()) write_image(a.truth_out, truth);
  out << "wrote " << a.out << " (" << sim.width() << "x" << sim.height()
      << ", alpha=" << alpha.value() << ")\n";
  return kExitOk;
}

struct DatasetArgs {
  std::string masks_dir, images_dir, out_dir;
  std::vector<std::int64_t> split;
  std::uint64_t seed = 0;
  double alpha = AlphaParam::kDefault;
  std::string size = "256";
  bool invert = false;
  int jobs = 1;
  bool quiet = false;
};

int cmd_dataset(const DatasetArgs& a, std::ostream& out) {
  const AlphaParam alpha(a.alpha);
  const auto size = parse_size(a.size);
  const auto masks = list_images(a.masks_dir);
  const auto images = list_images(a.images_dir);
  const auto split = parse_split(a.split, masks.size());

  DatasetOptions options;
  options.out_dir = a.out_dir;
  options.target_width = size.width;
  options.target_height = size.height;
  options.global_seed = a.seed;
  options.invert_mask_polarity = a.invert;
  options.jobs = a.jobs;
  options.created_at = default_created_at();
  options.quiet = a.quiet;

  auto records = pair_random(masks, images, a.seed, alpha);
  // Validate before touching the output directory.
  assign_splits(records, split, a.seed);
  const auto manifest = generate_dataset(std::move(records), split, options);
  out << "wrote " << manifest.records.size() << " records (" << split.train_count << " train, "
      << split.val_count << " val) to " << a.out_dir << "\n";
  return kExitOk;
}

struct MaskArgs {
  std::string out;
  int width = 256;
  int height = 256;
  double alpha = AlphaParam::kDefault;
};

int cmd_mask(const MaskArgs& a, std::ostream& out) {
  const auto mask = build_lowfreq_mask(a.width, a.height, AlphaParam(a.alpha));
  RealImage img(mask.width(), mask.height());
  std::transform(mask.begin(), mask.end(), img.begin(), [](std::uint8_t v) { return double(v); });
  write_image(a.out, img);
  out << "popcount " << mask.popcount() << "\n";
  return kExitOk;
}

struct SpeckleArgs {
  std::string out;
  std::string mask;
  std::string masks_dir;
  std::vector<std::int64_t> split;
  std::int64_t scatterers = 100'000;
  std::uint64_t seed = 0;
  std::string size = "256";
  double width_mm = 50.0;
  double depth_mm = 50.0;
  double dynamic_range = kDefaultDynamicRangeDb;
  double carrier = 0.25;
  double sigma_axial = 3.0;
  double sigma_lateral = 6.0;
  int jobs = 1;
  bool quiet = false;
};

int cmd_speckle(const SpeckleArgs& a, std::ostream& out) {
  const auto size = parse_size(a.size);
  PhantomSpec phantom;
  phantom.width_mm = a.width_mm;
  phantom.depth_mm = a.depth_mm;
  phantom.num_scatterers = a.scatterers;
  phantom.grid_width = size.width;
  phantom.grid_height = size.height;
  phantom.validate();
  const auto psf = PSFSpec::with_sigmas(a.carrier, a.sigma_axial, a.sigma_lateral);
  psf.validate();
  if (!(a.dynamic_range > 0.0)) throw Error(ErrorCode::InvalidArgument, "dynamic range must be > 0");

  if (!a.masks_dir.empty()) {
    if (!a.mask.empty()) {
      throw Error(ErrorCode::InvalidArgument, "--mask and --masks-dir are exclusive");
    }
    const auto masks = list_images(a.masks_dir);
    const auto split = parse_split(a.split, masks.size());
    if (split.train_count + split.val_count != masks.size()) {
      throw Error(ErrorCode::InvalidArgument, "split does not sum to the mask count");
    }
    DatasetOptions options;
    options.out_dir = a.out;
    options.target_width = size.width;
    options.target_height = size.height;
    options.global_seed = a.seed;
    options.jobs = a.jobs;
    options.created_at = default_created_at();
    options.quiet = a.quiet;
    const auto manifest =
        generate_speckle_dataset(masks, split, options, phantom, psf, a.dynamic_range);
    out << "wrote " << manifest.records.size() << " speckle records to " << a.out << "\n";
    return kExitOk;
  }

  auto field = sample_scatterers(phantom, a.seed);
  if (!a.mask.empty()) {
    const auto truth = binarize_mask(
        resample(read_image(a.mask), size.width, size.height, ResampleMode::nearest));
    field = apply_anechoic_mask(field, truth, phantom);
  }
  write_image(a.out, render_bmode(field, phantom, psf, a.dynamic_range));
  out << "wrote " << a.out << "\n";
  return kExitOk;
}

struct DscArgs {
  std::string a, b;
  double epsilon = kDefaultDiceEpsilon;
};

int cmd_dsc(const DscArgs& a, std::ostream& out) {
  const auto s = BinaryMask::from_image(read_image(a.a));
  const auto s_hat = BinaryMask::from_image(read_image(a.b));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f\n", dsc(s, s_hat, a.epsilon));
  out << buf;
  return kExitOk;
}

struct BenchArgs {
  std::vector<std::string> sizes;
  int iters = 100;
  int baseline_iters = 10;
  int warmup = 5;
  std::int64_t scatterers = 100'000;
  std::uint64_t seed = 0;
  double alpha = AlphaParam::kDefault;
  int jobs = 1;
  std::string json;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  AlphaParam alpha(a.alpha);
  if (a.scatterers < 0) throw Error(ErrorCode::InvalidArgument, "scatterer count must be >= 0");
  std::vector<int> sizes;
  for (const auto& s : a.sizes) {
    const auto parsed = parse_size(s);
    if (parsed.width != parsed.height) {
      throw Error(ErrorCode::InvalidArgument, "benchmark sizes are square; got " + s);
    }
    sizes.push_back(parsed.width);
  }
  BenchOptions phase;
  phase.iterations = a.iters;
  phase.warmup = a.warmup;
  phase.seed = a.seed;
  phase.alpha = alpha.value();
  phase.jobs = a.jobs;
  BenchOptions baseline = phase;
  baseline.iterations = a.baseline_iters;
  baseline.warmup = std::min(a.warmup, 1);
  baseline.scatterers = a.scatterers;

  const auto rows = compare(sizes, phase, baseline);
  out << comparison_table(rows);
  if (!a.json.empty()) {
    std::vector<BenchmarkReport> reports;
    for (const auto& r : rows) {
      reports.push_back(r.phase_sim);
      reports.push_back(r.baseline);
    }
    std::ofstream f(a.json, std::ios::binary);
    f << report_to_json(reports);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + a.json);
  }
  return kExitOk;
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw Error(ErrorCode::InvalidArgument, "--config needs a file");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config) return rest;

  std::ifstream in(*config);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read config " + *config);
  std::vector<std::string> injected;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument,
                  *config + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw Error(ErrorCode::InvalidArgument,
                  *config + ":" + std::to_string(line_no) + ": empty key");
    }
    std::istringstream tokens(value);
    std::vector<std::string> parts;
    for (std::string t; tokens >> t;) parts.push_back(t);
    if (parts.size() <= 1) {
      injected.push_back("--" + key + "=" + value);
    } else {
      injected.push_back("--" + key);
      injected.insert(injected.end(), parts.begin(), parts.end());
    }
  }
  // Config values go right after the subcommand so later flags override them.
  const auto at = !rest.empty() && rest[0].rfind("-", 0) != 0 ? rest.begin() + 1 : rest.begin();
  rest.insert(at, injected.begin(), injected.end());
  return rest;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-substitution ultrasound image simulator", "phaseswap"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Simulate one image from a real image and a lesion mask");
  simulate_cmd->add_option("real", sim.real, "Real B-mode image (PNG or PGM)")->required();
  simulate_cmd->add_option("mask", sim.mask, "Binary lesion mask, lesion > 0.5")->required();
  simulate_cmd->add_option("out", sim.out, "Output PNG (or .pgm)")->required();
  simulate_cmd->add_option("--alpha", sim.alpha, "Replaced low-frequency fraction, [0, sqrt 2]")
      ->capture_default_str();
  simulate_cmd->add_flag("--invert-mask", sim.invert,
                         "Use the mask file's polarity as-is (default: lesion dark)");
  simulate_cmd->add_flag("--resize", sim.resize, "Resample both inputs to --size first");
  simulate_cmd->add_option("--size", sim.size, "Target size N or WxH for --resize")
      ->capture_default_str();
  simulate_cmd->add_option("--truth-out", sim.truth_out, "Also write the binary ground truth");
  add_config(simulate_cmd);

  DatasetArgs ds;
  auto* dataset_cmd =
      app.add_subcommand("dataset", "Pair masks with real images and simulate a dataset");
  dataset_cmd->add_option("masks_dir", ds.masks_dir, "Directory of mask images")->required();
  dataset_cmd->add_option("images_dir", ds.images_dir, "Directory of real images")->required();
  dataset_cmd->add_option("out_dir", ds.out_dir, "Output directory")->required();
  dataset_cmd->add_option("--split", ds.split, "Train and val counts (default 80/20)")
      ->expected(2);
  add_seed(dataset_cmd, ds.seed);
  dataset_cmd->add_option("--alpha", ds.alpha, "Replaced low-frequency fraction, [0, sqrt 2]")
      ->capture_default_str();
  dataset_cmd->add_option("--size", ds.size, "Target size N or WxH")->capture_default_str();
  dataset_cmd->add_flag("--invert-mask", ds.invert, "Keep the mask file's polarity");
  dataset_cmd->add_option("--jobs", ds.jobs, "Worker threads")->capture_default_str();
  dataset_cmd->add_flag("--quiet", ds.quiet, "No progress lines");
  add_config(dataset_cmd);

  MaskArgs mk;
  auto* mask_cmd = app.add_subcommand("mask", "Write the low-frequency phase mask as a PNG");
  mask_cmd->add_option("out", mk.out, "Output PNG (or .pgm)")->required();
  mask_cmd->add_option("--width", mk.width, "Mask width")->capture_default_str();
  mask_cmd->add_option("--height", mk.height, "Mask height")->capture_default_str();
  mask_cmd->add_option("--alpha", mk.alpha, "Ellipse size, [0, sqrt 2]")->capture_default_str();
  add_config(mask_cmd);

  SpeckleArgs sp;
  auto* speckle_cmd =
      app.add_subcommand("speckle", "Render a convolutional speckle B-mode image or dataset");
  speckle_cmd->add_option("out", sp.out, "Output image, or directory with --masks-dir")
      ->required();
  speckle_cmd->add_option("--mask", sp.mask, "Anechoic region mask");
  speckle_cmd->add_option("--masks-dir", sp.masks_dir, "Render one phantom per mask");
  speckle_cmd->add_option("--split", sp.split, "Train and val counts (default 80/20)")
      ->expected(2);
  speckle_cmd->add_option("--scatterers", sp.scatterers, "Scatterer count")
      ->capture_default_str();
  add_seed(speckle_cmd, sp.seed);
  speckle_cmd->add_option("--size", sp.size, "Grid size N or WxH")->capture_default_str();
  speckle_cmd->add_option("--width-mm", sp.width_mm, "Lateral extent")->capture_default_str();
  speckle_cmd->add_option("--depth-mm", sp.depth_mm, "Axial extent")->capture_default_str();
  speckle_cmd->add_option("--dynamic-range", sp.dynamic_range, "Log compression range in dB")
      ->capture_default_str();
  speckle_cmd->add_option("--carrier", sp.carrier, "Axial carrier, cycles per pixel")
      ->capture_default_str();
  speckle_cmd->add_option("--sigma-axial", sp.sigma_axial, "Axial PSF sigma, pixels")
      ->capture_default_str();
  speckle_cmd->add_option("--sigma-lateral", sp.sigma_lateral, "Lateral PSF sigma, pixels")
      ->capture_default_str();
  speckle_cmd->add_option("--jobs", sp.jobs, "Worker threads (dataset mode)")
      ->capture_default_str();
  speckle_cmd->add_flag("--quiet", sp.quiet, "No progress lines");
  add_config(speckle_cmd);

  DscArgs dc;
  auto* dsc_cmd = app.add_subcommand("dsc", "Dice similarity of two mask files");
  dsc_cmd->add_option("a", dc.a, "First mask")->required();
  dsc_cmd->add_option("b", dc.b, "Second mask")->required();
  dsc_cmd->add_option("--epsilon", dc.epsilon, "Smoothing term")->capture_default_str();
  add_config(dsc_cmd);

  BenchArgs bn;
  auto* bench_cmd =
      app.add_subcommand("bench", "Time phase_sim against the speckle baseline");
  bench_cmd->add_option("--size", bn.sizes, "Square image size; repeat for several")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->default_val(std::vector<std::string>{"256"});
  bench_cmd->add_option("--iters", bn.iters, "Timed phase_sim iterations")->capture_default_str();
  bench_cmd->add_option("--baseline-iters", bn.baseline_iters, "Timed baseline iterations")
      ->capture_default_str();
  bench_cmd->add_option("--warmup", bn.warmup, "Discarded warmup iterations")
      ->capture_default_str();
  bench_cmd->add_option("--scatterers", bn.scatterers, "Baseline scatterer count")
      ->capture_default_str();
  add_seed(bench_cmd, bn.seed);
  bench_cmd->add_option("--alpha", bn.alpha, "phase_sim alpha")->capture_default_str();
  bench_cmd->add_option("--jobs", bn.jobs, "Time a parallel batch of this many images")
      ->capture_default_str();
  bench_cmd->add_option("--json", bn.json, "Write the report as JSON");
  add_config(bench_cmd);

  try {
    auto args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  } catch (const Error& e) {
    err << "phaseswap: " << e.what() << "\n";
    return is_io_error(e.code()) ? kExitIo : kExitValidation;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(sim, out);
    if (*dataset_cmd) return cmd_dataset(ds, out);
    if (*mask_cmd) return cmd_mask(mk, out);
    if (*speckle_cmd) return cmd_speckle(sp, out);
    if (*dsc_cmd) return cmd_dsc(dc, out);
    if (*bench_cmd) return cmd_bench(bn, out);
  } catch (const Error& e) {
    err << "phaseswap: " << e.what() << "\n";
    return is_io_error(e.code()) ? kExitIo : kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "phaseswap: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "phaseswap: internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitValidation;
}

}  // namespace phaseswap::cli
