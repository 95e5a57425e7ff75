#include "robopf/model.hpp"

#include <cstdio>
#include <sstream>

namespace robopf {

std::pair<int, int> model_stats(const OptModel& m) {
    return {static_cast<int>(m.rows.size()), static_cast<int>(m.vars.size())};
}

std::string write_lp(const OptModel& m) {
    std::ostringstream out;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    auto expr = [&](const std::vector<std::pair<int, double>>& terms) {
        std::string s;
        bool first = true;
        for (auto [c, v] : terms) {
            if (v >= 0 && !first) s += " + ";
            else if (v < 0) s += first ? "-" : " - ";
            s += num(std::abs(v)) + " " + m.vars[c].name;
            first = false;
        }
        return s.empty() ? "0" : s;
    };
    out << "/* minimize */\nmin:";
    std::vector<std::pair<int, double>> obj;
    for (size_t j = 0; j < m.vars.size(); ++j)
        if (m.vars[j].obj != 0.0) obj.emplace_back(static_cast<int>(j), m.vars[j].obj);
    out << " " << expr(obj) << ";\n";
    for (const auto& r : m.rows) {
        const char* op = r.sense == RowSense::le ? "<=" : r.sense == RowSense::ge ? ">=" : "=";
        out << r.name << ": " << expr(r.coeffs) << " " << op << " " << num(r.rhs) << ";\n";
    }
    for (const auto& v : m.vars) {
        if (v.is_binary) continue;
        if (v.lb == 0.0 && v.ub == kInf) continue;
        if (v.lb == -kInf && v.ub == kInf) out << v.name << " >= -1e30;\nfree " << v.name << ";\n";
        else {
            if (v.lb != 0.0 && v.lb != -kInf) out << v.name << " >= " << num(v.lb) << ";\n";
            if (v.lb == -kInf) out << "-" << v.name << " >= " << num(-v.ub) << ";\nfree " << v.name << ";\n";
            else if (v.ub != kInf) out << v.name << " <= " << num(v.ub) << ";\n";
        }
    }
    bool any_bin = false;
    for (const auto& v : m.vars) any_bin |= v.is_binary;
    if (any_bin) {
        out << "bin";
        for (const auto& v : m.vars)
            if (v.is_binary) out << " " << v.name;
        out << ";\n";
    }
    return out.str();
}

} // namespace robopf
