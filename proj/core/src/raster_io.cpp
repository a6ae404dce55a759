#include "ddae/raster_io.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "ddae/csv.hpp"
#include "ddae/errors.hpp"

namespace ddae {

void write_raster_csv(const StabilityRaster& raster, const std::filesystem::path& path) {
    CsvWriter csv(path, {"re", "im", "rho", "stable"});
    const auto& b = raster.bounds;
    for (int iy = 0; iy < b.ny; ++iy) {
        for (int ix = 0; ix < b.nx; ++ix) {
            csv.field(b.re(ix)).field(b.im(iy)).field(raster.value(ix, iy));
            csv.field(static_cast<long long>(raster.stable(ix, iy) ? 1 : 0));
            csv.end_row();
        }
    }
}

void write_raster_pgm(const StabilityRaster& raster, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    const auto& b = raster.bounds;
    out << "P5\n" << b.nx << ' ' << b.ny << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(b.nx));
    for (int iy = b.ny - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < b.nx; ++ix) {
            const double rho = raster.value(ix, iy);
            unsigned char px = 96;
            if (raster.stable(ix, iy)) {
                px = 255;
            } else if (std::isinf(rho)) {
                px = 0;
            }
            row[static_cast<std::size_t>(ix)] = px;
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
}

}  // namespace ddae
