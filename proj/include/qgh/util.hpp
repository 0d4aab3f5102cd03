#pragma once

#include <charconv>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace qgh {

using cplx = std::complex<double>;

/// Raised when an operand does not belong to the algebra an operation expects.
struct algebra_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a declared norm fails its norm-property (full-rank) check,
/// e.g. a kernel norm whose vector is not separating for the algebra.
struct norm_property_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a bridge construction fails its validity checks, or when no
/// candidate bridge is feasible for a distance estimate.
struct bridge_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised on malformed or schema-violating configuration input.
struct schema_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Write a file atomically: stream into a sibling temp file, then rename.
/// Guarantees no partial output is ever visible at `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace qgh
