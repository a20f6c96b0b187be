#include "report.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>

namespace rsvd::cli {

void emit_report(const Json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report to " + path);
    out << j.dump(2) << "\n";
}

}  // namespace rsvd::cli
