#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "circdens/censoring.hpp"

namespace circdens {

//! Raised on malformed input files; carries the offending line when known.
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//! Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, std::size_t line_no) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw data_error("line " + std::to_string(line_no) +
                         ": expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

//! Write `x,delta,l,u` rows; censored rows carry the literal token NA.
inline void write_sample(const CensoredSample& sample, std::ostream& out) {
    out << "x,delta,l,u\n";
    for (const auto& obs : sample.observations) {
        if (obs.delta) {
            out << format_double(obs.x_prime->radians());
        } else {
            out << "NA";
        }
        out << ',' << (obs.delta ? '1' : '0') << ','
            << format_double(obs.l.radians()) << ','
            << format_double(obs.u.radians()) << '\n';
    }
}

inline void write_sample_file(const CensoredSample& sample,
                              const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot open for writing: " + path.string());
    write_sample(sample, out);
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

}  // namespace detail

//! Read a sample file. Censored rows use NA for x; a numeric x within 1e-9
//! of -pi with delta = 0 is also accepted as the censored sentinel.
inline CensoredSample read_sample(std::istream& in) {
    CensoredSample sample;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "x,delta,l,u") {
                throw data_error("line 1: expected header 'x,delta,l,u'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = detail::split_fields(line);
        if (fields.size() != 4) {
            throw data_error("line " + std::to_string(line_no) +
                             ": expected 4 fields, got " +
                             std::to_string(fields.size()));
        }
        CensoredObservation obs;
        const auto delta_field = fields[1];
        if (delta_field == "1") obs.delta = true;
        else if (delta_field == "0") obs.delta = false;
        else {
            throw data_error("line " + std::to_string(line_no) +
                             ": delta must be 0 or 1");
        }
        obs.l = Angle::wrap(parse_double(fields[2], line_no));
        obs.u = Angle::wrap(parse_double(fields[3], line_no));
        if (obs.l == obs.u) {
            throw data_error("line " + std::to_string(line_no) +
                             ": window endpoints must differ");
        }
        if (obs.delta) {
            const Angle x = Angle::wrap(parse_double(fields[0], line_no));
            if (!arc_contains(Arc(obs.l, obs.u), x)) {
                throw data_error("line " + std::to_string(line_no) +
                                 ": delta=1 but x lies outside [l, u]");
            }
            obs.x_prime = x;
        } else if (fields[0] != "NA") {
            const double x = parse_double(fields[0], line_no);
            if (std::abs(x + std::numbers::pi) > 1e-9) {
                throw data_error("line " + std::to_string(line_no) +
                                 ": censored row must carry NA (or the -pi "
                                 "sentinel)");
            }
        }
        sample.observations.push_back(obs);
    }
    if (!header_seen) throw data_error("empty sample file");
    if (sample.observations.empty()) {
        throw data_error("sample file has a header but no rows");
    }
    return sample;
}

inline CensoredSample read_sample_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open for reading: " + path.string());
    return read_sample(in);
}

}  // namespace circdens
