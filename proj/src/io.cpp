#include "vrrw/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace vrrw {

namespace fs = std::filesystem;

void write_file_atomic(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << content;
        os.flush();
        if (!os)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, p);
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

namespace {

uint64_t parse_u64(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad seed '" + s + "'");
    return std::stoull(s);
}

} // namespace

std::vector<uint64_t> parse_seed_list(const std::string& text) {
    std::vector<uint64_t> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_u64(part));
            continue;
        }
        uint64_t a = parse_u64(part.substr(0, dots)), b = parse_u64(part.substr(dots + 2));
        if (b < a)
            throw std::invalid_argument("empty seed range '" + part + "'");
        if (b - a >= 100000000)
            throw std::invalid_argument("seed range '" + part + "' is too long");
        for (uint64_t s = a; s <= b; ++s)
            out.push_back(s);
    }
    if (out.empty())
        throw std::invalid_argument("empty seed list");
    return out;
}

std::vector<double> parse_sweep(const std::string& text) {
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
        throw std::invalid_argument("sweep must look like lo:hi:n, got '" + text + "'");
    double lo = std::stod(a), hi = std::stod(b);
    int n = std::stoi(c);
    if (n < 2 || !(hi > lo))
        throw std::invalid_argument("sweep needs lo < hi and n >= 2, got '" + text + "'");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    return v;
}

std::pair<int64_t, int64_t> parse_window(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("window must look like lo:hi, got '" + text + "'");
    int64_t lo = std::stoll(text.substr(0, colon)), hi = std::stoll(text.substr(colon + 1));
    if (lo > hi)
        throw std::invalid_argument("window lo exceeds hi in '" + text + "'");
    return {lo, hi};
}

std::string file_tag(const std::string& text) {
    std::string s = text;
    for (char& c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_'))
            c = '_';
    return s;
}

} // namespace vrrw
