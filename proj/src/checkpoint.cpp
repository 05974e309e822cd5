#include "nlslab/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace nlslab {

namespace {

std::string doubles_to_hex(const std::vector<complexd>& v) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(v.size() * 32);
    auto put = [&](double x) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof bits);
        for (int k = 0; k < 16; ++k)
            out.push_back(digits[(bits >> (60 - 4 * k)) & 0xF]);
    };
    for (const auto& z : v) {
        put(z.real());
        put(z.imag());
    }
    return out;
}

std::vector<complexd> hex_to_doubles(const std::string& hex, int n) {
    if (hex.size() != static_cast<std::size_t>(n) * 32)
        throw std::runtime_error("checkpoint: payload length mismatch");
    auto nibble = [](char c) -> std::uint64_t {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return 10 + (c - 'a');
        throw std::runtime_error("checkpoint: bad hex digit");
    };
    auto get = [&](std::size_t off) {
        std::uint64_t bits = 0;
        for (int k = 0; k < 16; ++k) bits = (bits << 4) | nibble(hex[off + k]);
        double x;
        std::memcpy(&x, &bits, sizeof x);
        return x;
    };
    std::vector<complexd> v(n);
    for (int j = 0; j < n; ++j)
        v[j] = complexd{get(32 * j), get(32 * j + 16)};
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const SimState& state) {
    nlohmann::json j;
    j["format"] = kCheckpointFormat;
    j["t"] = state.t;
    j["step_index"] = state.step_index;
    j["grid"] = {{"r0", state.field.grid->r0},
                 {"r_max", state.field.grid->r_max},
                 {"n", state.field.grid->n}};
    j["v_hex"] = doubles_to_hex(state.field.v);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    out << j.dump(2) << "\n";
}

SimState load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    nlohmann::json j;
    in >> j;
    if (j.value("format", "") != kCheckpointFormat)
        throw std::runtime_error("checkpoint: unsupported format tag");
    const auto& g = j.at("grid");
    auto grid = make_grid(g.at("r0").get<double>(), g.at("r_max").get<double>(),
                          g.at("n").get<int>());
    SimState s;
    s.t = j.at("t").get<double>();
    s.step_index = j.at("step_index").get<int>();
    s.field = RadialField(grid);
    s.field.v = hex_to_doubles(j.at("v_hex").get<std::string>(), grid->n);
    return s;
}

}  // namespace nlslab
