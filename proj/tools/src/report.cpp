#include "cdbundle_cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cdbundle::cli {

std::string format_number(double v) {
    if (!std::isfinite(v)) return "null";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void emit(const Json& j, std::ostringstream& os, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
    const std::string inner(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << inner << Json(it.key()).dump() << ": ";
                emit(it.value(), os, depth + 1);
            }
            os << "\n" << pad << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << inner;
                emit(j[i], os, depth + 1);
            }
            os << "\n" << pad << "]";
            return;
        }
        case Json::value_t::number_float:
            os << format_number(j.get<double>());
            return;
        default:
            os << j.dump();
            return;
    }
}

}  // namespace

std::string write_json(const Json& doc) {
    std::ostringstream os;
    emit(doc, os, 0);
    os << "\n";
    return os.str();
}

Json complex_json(cplx v) {
    Json c = Json::object();
    c["re"] = v.real();
    c["im"] = v.imag();
    return c;
}

Json matrix_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json real_array(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

Json report_skeleton(const std::string& command, const std::vector<std::string>& args) {
    Json doc = Json::object();
    doc["schema"] = kSchema;
    doc["command"] = command;
    doc["args"] = args;
    doc["inputs"] = Json::object();
    doc["outputs"] = Json::object();
    doc["verdicts"] = Json::object();
    doc["tolerances"] = Json::object();
    doc["notes"] = Json::array();
    return doc;
}

}  // namespace cdbundle::cli
