#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "mrf/errors.hpp"

namespace mrf {

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) throw DataError("error reading file: " + path);
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw DataError("error writing file: " + path);
}

} // namespace mrf
