#include "ddae/csv.hpp"

#include <cmath>
#include <cstdio>

#include "ddae/errors.hpp"

namespace ddae {

std::string format_real(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    for (const auto& h : header) {
        field(h);
    }
    end_row();
}

CsvWriter& CsvWriter::field(std::string_view text) {
    if (row_started_) {
        out_ << ',';
    }
    out_ << text;
    row_started_ = true;
    return *this;
}

CsvWriter& CsvWriter::field(double value) { return field(std::string_view(format_real(value))); }

CsvWriter& CsvWriter::field(long long value) { return field(std::string_view(std::to_string(value))); }

void CsvWriter::end_row() {
    out_ << '\n';
    row_started_ = false;
}

void CsvWriter::close() {
    out_.close();
    if (out_.fail()) {
        throw Error("failed to write CSV output");
    }
}

}  // namespace ddae
