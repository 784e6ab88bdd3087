#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "phaseswap/grid.hpp"
#include "phaseswap/phase_sim.hpp"
#include "phaseswap/speckle.hpp"

namespace phaseswap {

struct LoadedImage {
  std::filesystem::path path;
  RealImage image;
};

/// Image files (.png / .pgm, case-insensitive) in a directory, sorted by
/// filename. Throws IoFailure for a missing directory and EmptyDirectory
/// when nothing matches.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

/// Loads every image from list_images as values in [0, 1].
std::vector<LoadedImage> ingest_images(const std::filesystem::path& dir);

/// 1 where the input is strictly above threshold, else 0.
RealImage binarize_mask(const RealImage& img, double threshold = 0.5);

enum class ResampleMode { bilinear, nearest };

/// Resizes with pixel-center alignment. Target sides must be even and >= 2.
RealImage resample(const RealImage& img, int width, int height, ResampleMode mode);

enum class Split { train, val };
std::string_view to_string(Split split) noexcept;

struct PairRecord {
  std::string mask_path;
  std::string image_path;
  double alpha = AlphaParam::kDefault;
  std::uint64_t seed = 0;
  std::string output_image_path;  // relative to the dataset root
  std::string output_mask_path;   // relative to the dataset root
  Split split = Split::train;

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

struct SplitSpec {
  std::size_t train_count = 800;
  std::size_t val_count = 200;
};

struct DatasetManifest {
  std::string method = "phase_sim";
  std::vector<PairRecord> records;
  int target_width = 256;
  int target_height = 256;
  std::uint64_t global_seed = 0;
  std::string created_at;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// Output file name for record i, zero padded to four digits.
std::string record_stem(std::size_t index);

/// Pairs each mask with an image drawn uniformly with replacement from a
/// generator seeded by global_seed. Also assigns per-record seeds and
/// output paths. Throws EmptyList.
std::vector<PairRecord> pair_random(const std::vector<std::filesystem::path>& masks,
                                    const std::vector<std::filesystem::path>& images,
                                    std::uint64_t global_seed, AlphaParam alpha = AlphaParam{});

/// Seeded shuffle, then the first train_count shuffled records go to train.
/// Throws InvalidArgument when the counts do not sum to the record count.
void assign_splits(std::vector<PairRecord>& records, const SplitSpec& split,
                   std::uint64_t global_seed);

struct DatasetOptions {
  std::filesystem::path out_dir;
  int target_width = 256;
  int target_height = 256;
  std::uint64_t global_seed = 0;
  bool invert_mask_polarity = false;
  int jobs = 1;
  std::string created_at = "1970-01-01T00:00:00Z";
  bool quiet = true;  // progress lines on stderr when false
};

/// Runs the phase simulator per record and writes images/, masks/,
/// manifest.json and split.csv under out_dir. Splits are (re)assigned from
/// the global seed. On failure throws with the number of records written.
DatasetManifest generate_dataset(std::vector<PairRecord> records, const SplitSpec& split,
                                 const DatasetOptions& options);

/// Speckle-baseline dataset: one phantom per mask with the mask region
/// anechoic. Records carry "speckle_baseline" as image source and the
/// per-record seed drives scatterer sampling.
DatasetManifest generate_speckle_dataset(const std::vector<std::filesystem::path>& masks,
                                         const SplitSpec& split, const DatasetOptions& options,
                                         const PhantomSpec& phantom, const PSFSpec& psf,
                                         double dynamic_range_db = kDefaultDynamicRangeDb);

std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const std::string& text);

/// "filename,split" CSV body for the manifest.
std::string split_csv(const DatasetManifest& manifest);

}  // namespace phaseswap
