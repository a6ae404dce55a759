#pragma once

#include <filesystem>

#include "ddae/dde_scalar.hpp"

namespace ddae {

/// CSV with header `re,im,rho,stable`, one row per grid point, iy-major.
void write_raster_csv(const StabilityRaster& raster, const std::filesystem::path& path);

/// Binary PGM (P5), nx by ny, top row = im_max. Stable cells are white,
/// unstable cells grey, pole cells black.
void write_raster_pgm(const StabilityRaster& raster, const std::filesystem::path& path);

}  // namespace ddae
