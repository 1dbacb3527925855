// csv.hpp: locale-independent CSV output with a `# key=value` metadata preamble

#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace jcdeco::cli {

// Shortest representation that round-trips the double exactly.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

template <class Int>
std::string format_int(Int x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

template <class T, class Fmt>
std::string join(const std::vector<T>& values, Fmt&& fmt, char sep = ',') {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += sep;
        s += fmt(values[i]);
    }
    return s;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void meta(const std::string& key, const std::string& value) { os_ << "# " << key << '=' << value << '\n'; }
    void meta(const std::string& key, double value) { meta(key, format_double(value)); }

    void header(const std::vector<std::string>& columns) {
        for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
        os_ << '\n';
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_double(values[i]);
        os_ << '\n';
    }

    void raw_row(const std::vector<std::string>& cells) { header(cells); }

private:
    std::ostream& os_;
};

}  // namespace jcdeco::cli
