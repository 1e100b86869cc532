#include "instance_forge/io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "instance_forge/errors.hpp"

namespace instance_forge {

using nlohmann::json;

json instance_to_json(const TspInstance& inst) {
    json cities = json::array();
    for (const auto& c : inst.cities()) {
        cities.push_back({c.x, c.y});
    }
    json doc = {{"n", inst.size()}, {"cities", std::move(cities)}};
    if (!inst.id().empty()) {
        doc["id"] = inst.id();
    }
    return doc;
}

TspInstance instance_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw ParseError("instance document must be a JSON object");
    }
    const auto it = doc.find("cities");
    if (it == doc.end()) {
        throw ParseError("missing field 'cities'");
    }
    if (!it->is_array()) {
        throw ParseError("field 'cities' must be an array");
    }
    std::vector<Point> cities;
    cities.reserve(it->size());
    for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& c = (*it)[i];
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
            throw ParseError("field 'cities[" + std::to_string(i) + "]' must be a pair of numbers");
        }
        Point p{c[0].get<double>(), c[1].get<double>()};
        if (!in_unit_square(p)) {
            throw ValidationError("field 'cities[" + std::to_string(i) + "]' lies outside [0,1]^2");
        }
        cities.push_back(p);
    }
    if (const auto n = doc.find("n"); n != doc.end()) {
        if (!n->is_number_unsigned() || n->get<std::size_t>() != cities.size()) {
            throw ParseError("field 'n' does not match the number of cities (" + std::to_string(cities.size()) + ")");
        }
    }
    std::string id;
    if (const auto id_it = doc.find("id"); id_it != doc.end() && !id_it->is_null()) {
        if (!id_it->is_string()) {
            throw ParseError("field 'id' must be a string");
        }
        id = id_it->get<std::string>();
    }
    return TspInstance(std::move(cities), std::move(id));
}

std::string format_instance(const TspInstance& inst) {
    return instance_to_json(inst).dump() + "\n";
}

TspInstance parse_instance(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return instance_from_json(doc);
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

TspInstance parse_tsplib(std::istream& in) {
    std::string name;
    std::size_t dimension = 0;
    std::vector<std::pair<double, double>> raw;
    bool in_coords = false;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw ParseError("TSPLIB line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) {
            continue;
        }
        if (text == "EOF") {
            break;
        }
        if (in_coords) {
            std::istringstream fields(text);
            long long index = 0;
            double x = 0.0;
            double y = 0.0;
            if (!(fields >> index >> x >> y)) {
                fail("expected '<index> <x> <y>' in NODE_COORD_SECTION");
            }
            raw.emplace_back(x, y);
            continue;
        }
        if (text.rfind("NODE_COORD_SECTION", 0) == 0) {
            in_coords = true;
            continue;
        }
        const auto colon = text.find(':');
        if (colon == std::string::npos) {
            fail("expected 'KEY : VALUE'");
        }
        const auto key = trim(std::string_view(text).substr(0, colon));
        const auto value = trim(std::string_view(text).substr(colon + 1));
        if (key == "NAME") {
            name = value;
        } else if (key == "DIMENSION") {
            try {
                dimension = std::stoul(value);
            } catch (const std::exception&) {
                fail("DIMENSION is not a number");
            }
        } else if (key == "EDGE_WEIGHT_TYPE" && value != "EUC_2D") {
            fail("unsupported EDGE_WEIGHT_TYPE '" + value + "' (only EUC_2D)");
        } else if (key == "TYPE" && value != "TSP") {
            fail("unsupported TYPE '" + value + "'");
        }
    }
    if (dimension == 0) {
        throw ParseError("TSPLIB: missing field 'DIMENSION'");
    }
    if (raw.size() != dimension) {
        throw ParseError("TSPLIB: DIMENSION is " + std::to_string(dimension) + " but " + std::to_string(raw.size()) +
                         " coordinates were read");
    }

    double min_x = std::numeric_limits<double>::infinity();
    double min_y = min_x;
    double max_x = -min_x;
    double max_y = -min_x;
    for (const auto& [x, y] : raw) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }
    const double span = std::max(max_x - min_x, max_y - min_y);
    const double scale = span > 0.0 ? 1.0 / span : 1.0;
    std::vector<Point> cities;
    cities.reserve(raw.size());
    for (const auto& [x, y] : raw) {
        cities.push_back({std::clamp((x - min_x) * scale, 0.0, 1.0), std::clamp((y - min_y) * scale, 0.0, 1.0)});
    }
    return TspInstance(std::move(cities), name);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

TspInstance read_instance(const std::filesystem::path& path) {
    const auto text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool json_like = first != std::string::npos && text[first] == '{';
    try {
        if (path.extension() == ".tsp" || !json_like) {
            std::istringstream in(text);
            return parse_tsplib(in);
        }
        return parse_instance(text);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_instance(const TspInstance& inst, const std::filesystem::path& path) {
    write_file_atomic(path, format_instance(inst));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw std::runtime_error("write failed for '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace instance_forge
