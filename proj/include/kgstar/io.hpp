#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kgstar/network.hpp"
#include "kgstar/transform.hpp"

namespace kgstar {

/// Formats a double with 17 significant digits for lossless round trips.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// FNV-1a 64-bit hash, rendered as fixed-width hex; used to tag outputs
/// with the configuration they came from.
inline std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (const char ch : text) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(ch));
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Minimal CSV emitter; every file starts with a header row.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(const std::vector<std::string>& names) { line(names); }

    void row(const std::vector<std::string>& cells) { line(cells); }

private:
    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

    std::ostream& os_;
};

/// Uniform samples of a branch function: branch,coordinate,re,im.
inline void write_csv(std::ostream& os, const BranchFunction& fn) {
    CsvWriter csv(os);
    csv.header({"branch", "coordinate", "re", "im"});
    const int steps = fn.step > 0.0 ? static_cast<int>(fn.x_max / fn.step) : 0;
    for (int m = 1; m <= fn.size(); ++m) {
        for (int i = 0; i <= steps; ++i) {
            const double x = std::min(i * fn.step, fn.x_max);
            const Complex v = fn.value(m, x);
            csv.row({std::to_string(m), fmt17(x), fmt17(v.real()), fmt17(v.imag())});
        }
    }
}

/// Spectral-vector nodes: branch,coordinate,re,im.
inline void write_csv(std::ostream& os, const SpectralVector& g) {
    CsvWriter csv(os);
    csv.header({"branch", "coordinate", "re", "im"});
    for (int k = 1; k <= g.size(); ++k) {
        const auto& comp = g.comp[static_cast<std::size_t>(k - 1)];
        for (std::size_t i = 0; i < comp.lambda.size(); ++i)
            csv.row({std::to_string(k), fmt17(comp.lambda[i]), fmt17(comp.value[i].real()),
                     fmt17(comp.value[i].imag())});
    }
}

} // namespace kgstar
