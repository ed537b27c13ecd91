#pragma once

// Curve CSV: header `id,c0,...,c{D-1}`, one point per line, the points of a
// curve contiguous in file order. Numbers use '.' as decimal separator
// regardless of the process locale.

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <vector>

#include "frechet/curve.hpp"
#include "frechet/error.hpp"

namespace frechet {

template <std::floating_point T>
struct NamedCurve {
    std::string id;
    Curve<T> curve;

    friend bool operator==(const NamedCurve&, const NamedCurve&) = default;
};

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

/// Shortest decimal form that parses back to the same value.
template <std::floating_point T>
std::string format_number(T value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

template <std::floating_point T>
T parse_number(std::string_view field, std::size_t line) {
    T value{};
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last || first == last) {
        throw ParseError(line, "invalid number '" + std::string(field) + "'");
    }
    return value;
}

} // namespace detail

template <std::floating_point T>
[[nodiscard]] std::vector<NamedCurve<T>> load_curves_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto read_line = [&]() -> bool {
        if (!std::getline(in, line)) {
            return false;
        }
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        return true;
    };

    if (!read_line()) {
        throw ParseError(0, "empty curve file: missing header");
    }
    if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) {
        line.erase(0, 3);
    }
    const auto header = detail::split_commas(line);
    if (header.size() < 2 || header[0] != "id") {
        throw ParseError(lineno, "header must be 'id,c0,...,c{D-1}'");
    }
    const std::size_t dim = header.size() - 1;
    for (std::size_t k = 0; k < dim; ++k) {
        if (header[k + 1] != "c" + std::to_string(k)) {
            throw ParseError(lineno, "header column " + std::to_string(k + 2) + " must be 'c"
                                         + std::to_string(k) + "'");
        }
    }

    std::vector<NamedCurve<T>> curves;
    std::unordered_set<std::string> finished;
    std::string current_id;
    std::vector<T> coords;
    std::size_t current_start = 0;
    auto flush = [&] {
        if (coords.empty()) {
            return;
        }
        try {
            curves.push_back({current_id, Curve<T>(dim, std::move(coords))});
        } catch (const Error& e) {
            throw ParseError(current_start, "curve '" + current_id + "': " + e.what());
        }
        finished.insert(current_id);
        coords.clear();
    };

    while (read_line()) {
        if (line.empty()) {
            continue;
        }
        const auto fields = detail::split_commas(line);
        if (fields.size() != dim + 1) {
            throw ParseError(lineno, "expected " + std::to_string(dim + 1) + " fields, found "
                                         + std::to_string(fields.size()));
        }
        const std::string id(fields[0]);
        if (id.empty()) {
            throw ParseError(lineno, "empty curve id");
        }
        if (coords.empty() || id != current_id) {
            flush();
            if (finished.contains(id)) {
                throw ParseError(lineno, "points of curve '" + id + "' are not contiguous");
            }
            current_id = id;
            current_start = lineno;
        }
        for (std::size_t k = 0; k < dim; ++k) {
            const T v = detail::parse_number<T>(fields[k + 1], lineno);
            if (!std::isfinite(v)) {
                throw ParseError(lineno, "coordinate must be finite");
            }
            coords.push_back(v);
        }
    }
    if (in.bad()) {
        throw Error("I/O error while reading curve file");
    }
    flush();
    return curves;
}

template <std::floating_point T>
[[nodiscard]] std::vector<NamedCurve<T>> load_curves_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    try {
        return load_curves_csv<T>(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), path);
    }
}

/// Writes curves in the CSV format; all curves must share one dimension.
template <std::floating_point T>
void save_curves_csv(std::ostream& out, std::span<const NamedCurve<T>> curves) {
    if (curves.empty()) {
        throw Error("save_curves_csv: nothing to write");
    }
    const std::size_t dim = curves.front().curve.dim();
    out << "id";
    for (std::size_t k = 0; k < dim; ++k) {
        out << ",c" << k;
    }
    out << '\n';
    std::unordered_set<std::string_view> ids;
    for (const auto& nc : curves) {
        if (nc.curve.dim() != dim) {
            throw DimensionError("save_curves_csv: mixed curve dimensions");
        }
        if (nc.id.empty() || nc.id.find_first_of(",\r\n") != std::string::npos) {
            throw Error("save_curves_csv: curve id must be nonempty and free of commas and newlines");
        }
        if (!ids.insert(nc.id).second) {
            throw Error("save_curves_csv: duplicate curve id '" + nc.id + "'");
        }
        for (std::size_t i = 0; i < nc.curve.size(); ++i) {
            out << nc.id;
            for (T c : nc.curve[i]) {
                out << ',' << detail::format_number(c);
            }
            out << '\n';
        }
    }
}

template <std::floating_point T>
void save_curves_csv(const std::string& path, std::span<const NamedCurve<T>> curves) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    save_curves_csv(out, curves);
    if (!out) {
        throw Error("I/O error while writing '" + path + "'");
    }
}

} // namespace frechet
