#include "instance_forge/csv.hpp"

#include <charconv>
#include <cmath>

#include "instance_forge/errors.hpp"

namespace instance_forge::csv {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view field, std::string_view context) {
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto res = std::from_chars(field.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ParseError(std::string(context) + ": '" + std::string(field) + "' is not a number");
    }
    return value;
}

std::vector<std::string> split(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += fields[i];
    }
    return out;
}

}  // namespace instance_forge::csv
