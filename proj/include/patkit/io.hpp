#pragma once
#include <string>

#include "patkit/geometry.hpp"

namespace patkit {

// Rasters and sinograms on disk: a short self-describing text header, then
// the samples as little-endian 32-bit floats, row-major. Doubles pass through
// float on the way out, so write, read, write again reproduces the first file
// byte for byte. Headers carry no timestamp unless explicitly requested, to
// keep repeated runs byte-identical.

void write_raster(const std::string& path, const CoefficientImage& x,
                  bool with_timestamp = false);
CoefficientImage read_raster(const std::string& path);

// Provenance recorded alongside the traces so the file stands alone: the
// angular step actually realized and the decimation factor that produced it.
struct SinogramMeta {
  double effective_h_theta = 0.0;  // 0 means: write the geometry's own step
  int subsample = 1;
};

void write_sinogram(const std::string& path, const Sinogram& g, const SinogramMeta& meta,
                    bool with_timestamp = false);
Sinogram read_sinogram(const std::string& path, SinogramMeta* meta = nullptr);

// 16-bit grayscale PGM with the display window recorded in a comment line;
// values are clamped to [lo, hi] and lo == hi maps everything to black.
void write_pgm(const std::string& path, const CoefficientImage& x, double lo, double hi);

}  // namespace patkit
