#include "invwish/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace invwish {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> parse_grid_spec(const std::string& spec) {
    double lo = 0.0, hi = 0.0;
    long count = 0;
    char tail = 0;
    const int got = std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &count, &tail);
    if (got != 3) throw std::invalid_argument("grid spec must be lo:hi:count, got '" + spec + "'");
    if (count < 1) throw std::invalid_argument("grid spec: count must be >= 1");
    if (count == 1) {
        if (lo != hi) throw std::invalid_argument("grid spec: count 1 requires lo == hi");
        return {lo};
    }
    if (!(lo < hi)) throw std::invalid_argument("grid spec: need lo < hi in '" + spec + "'");
    std::vector<double> pts(count);
    for (long i = 0; i < count; ++i) pts[i] = lo + (hi - lo) * i / (count - 1);
    return pts;
}

std::vector<int> parse_dim_list(const std::string& spec) {
    std::vector<int> dims;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("dims list: empty entry");
        size_t pos = 0;
        const int v = std::stoi(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("dims list: bad entry '" + item + "'");
        if (v < 1) throw std::invalid_argument("dims list: entries must be >= 1");
        if (!dims.empty() && v <= dims.back())
            throw std::invalid_argument("dims list: entries must be strictly increasing");
        dims.push_back(v);
    }
    if (dims.empty()) throw std::invalid_argument("dims list: empty");
    return dims;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

} // namespace invwish
