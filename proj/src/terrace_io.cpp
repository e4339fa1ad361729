#include <json.hpp>

#include "pterrace/error.hpp"
#include "pterrace/kde.hpp"
#include "pterrace/terrace.hpp"
#include "text_util.hpp"

namespace pterrace {

std::string terrace_to_csv(const TerraceMatrix& matrix) {
    std::string out = "bandwidths";
    for (double x : matrix.xvec) out += ',' + detail::format_exact(x);
    out += '\n';
    for (std::size_t j = 0; j < matrix.rows(); ++j) {
        out += detail::format_exact(matrix.yvec[j]);
        for (std::size_t i = 0; i < matrix.cols(); ++i) out += ',' + std::to_string(matrix.z(j, i));
        out += '\n';
    }
    return out;
}

TerraceMatrix terrace_from_csv(std::string_view text, int k) {
    TerraceMatrix m;
    m.dim = k;
    bool header_seen = false;
    std::size_t line_no = 0;
    for (std::string_view line : detail::split_lines(text)) {
        ++line_no;
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = detail::split(line, ',');
        const auto where = "terrace CSV row " + std::to_string(line_no);
        if (!header_seen) {
            if (detail::trim(fields[0]) != "bandwidths")
                fail(ErrorKind::Data, where + ": expected leading 'bandwidths' header");
            for (std::size_t f = 1; f < fields.size(); ++f) {
                auto x = detail::parse_double(detail::trim(fields[f]));
                if (!x) fail(ErrorKind::Data, where + ": bad bandwidth value");
                m.xvec.push_back(*x);
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != m.xvec.size() + 1)
            fail(ErrorKind::Data, where + ": expected " + std::to_string(m.xvec.size() + 1) +
                                      " fields, got " + std::to_string(fields.size()));
        auto y = detail::parse_double(detail::trim(fields[0]));
        if (!y) fail(ErrorKind::Data, where + ": bad filtration value");
        m.yvec.push_back(*y);
        for (std::size_t f = 1; f < fields.size(); ++f) {
            auto z = detail::parse_int(detail::trim(fields[f]));
            if (!z || *z < 0) fail(ErrorKind::Data, where + ": bad Betti number");
            m.zmat.push_back(static_cast<long>(*z));
        }
    }
    if (!header_seen || m.xvec.empty()) fail(ErrorKind::Data, "terrace CSV has no bandwidth header");
    for (std::size_t i = 1; i < m.xvec.size(); ++i)
        if (!(m.xvec[i - 1] < m.xvec[i]))
            fail(ErrorKind::Data, "terrace CSV bandwidths are not ascending");
    for (std::size_t j = 1; j < m.yvec.size(); ++j)
        if (!(m.yvec[j - 1] > m.yvec[j]))
            fail(ErrorKind::Data, "terrace CSV filtration values are not descending");
    return m;
}

std::string terrace_to_json(const TerraceMatrix& matrix, std::string_view grid_json) {
    nlohmann::ordered_json j;
    j["dim"] = matrix.dim;
    j["xvec"] = matrix.xvec;
    j["yvec"] = matrix.yvec;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < matrix.cols(); ++i) row.push_back(matrix.z(r, i));
        rows.push_back(std::move(row));
    }
    j["zmat"] = std::move(rows);
    j["kde"] = {{"kernel", "gaussian"}, {"normalization", kKdeDescriptor}};
    j["grid"] = grid_json.empty() ? nlohmann::ordered_json::object()
                                  : nlohmann::ordered_json::parse(grid_json);
    return j.dump(1) + '\n';
}

TerraceMatrix terrace_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        TerraceMatrix m;
        m.dim = j.at("dim").get<int>();
        m.xvec = j.at("xvec").get<std::vector<double>>();
        m.yvec = j.at("yvec").get<std::vector<double>>();
        const auto& rows = j.at("zmat");
        if (rows.size() != m.yvec.size()) fail(ErrorKind::Data, "zmat row count != |yvec|");
        for (const auto& row : rows) {
            if (row.size() != m.xvec.size()) fail(ErrorKind::Data, "zmat column count != |xvec|");
            for (const auto& z : row) m.zmat.push_back(z.get<long>());
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Data, std::string("terrace JSON: ") + e.what());
    }
}

std::string area_to_csv(const TerraceAreaSummary& summary) {
    std::string out = "height,area\n";
    for (std::size_t h = 0; h < summary.by_height.size(); ++h)
        out += std::to_string(h + 1) + ',' + detail::format_exact(summary.by_height[h]) + '\n';
    return out;
}

}  // namespace pterrace
