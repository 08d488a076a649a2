#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "clothbench/observation.hpp"

namespace clothbench {

namespace {

void write_header(std::ofstream& out, int width, int height, int maxval) {
    out << "P5\n" << width << " " << height << "\n" << maxval << "\n";
}

void read_header(std::ifstream& in, int& width, int& height, int& maxval) {
    std::string magic;
    in >> magic;
    if (magic != "P5") throw std::runtime_error("not a P5 PGM");
    auto next_token = [&]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw std::runtime_error("truncated PGM header");
    };
    width = std::stoi(next_token());
    height = std::stoi(next_token());
    maxval = std::stoi(next_token());
    in.get(); // single whitespace after maxval
}

} // namespace

void write_pgm8(const std::string& path, int width, int height,
                const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_header(out, width, height, 255);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

void write_pgm16(const std::string& path, int width, int height,
                 const std::vector<std::uint16_t>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_header(out, width, height, 65535);
    for (std::uint16_t v : data) { // big-endian per the format
        char bytes[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xff)};
        out.write(bytes, 2);
    }
}

std::vector<std::uint8_t> read_pgm8(const std::string& path, int& width, int& height) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    int maxval = 0;
    read_header(in, width, height, maxval);
    if (maxval != 255) throw std::runtime_error("expected 8-bit PGM: " + path);
    std::vector<std::uint8_t> data(static_cast<size_t>(width) * height);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!in) throw std::runtime_error("truncated PGM: " + path);
    return data;
}

std::vector<std::uint16_t> read_pgm16(const std::string& path, int& width, int& height) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    int maxval = 0;
    read_header(in, width, height, maxval);
    if (maxval != 65535) throw std::runtime_error("expected 16-bit PGM: " + path);
    std::vector<std::uint16_t> data(static_cast<size_t>(width) * height);
    for (auto& v : data) {
        int hi = in.get(), lo = in.get();
        if (hi < 0 || lo < 0) throw std::runtime_error("truncated PGM: " + path);
        v = static_cast<std::uint16_t>((hi << 8) | lo);
    }
    return data;
}

void save_mask_pgm(const Observation& obs, const std::string& path) {
    std::vector<std::uint8_t> bytes(obs.mask.size());
    for (size_t i = 0; i < obs.mask.size(); ++i) bytes[i] = obs.mask[i] ? 255 : 0;
    write_pgm8(path, obs.width, obs.height, bytes);
}

void save_height_pgm(const Observation& obs, const std::string& path) {
    std::vector<std::uint16_t> mm(obs.height_map.size());
    for (size_t i = 0; i < obs.height_map.size(); ++i) {
        double v = std::lround(obs.height_map[i] * 1000.0);
        mm[i] = static_cast<std::uint16_t>(std::min(65535.0, std::max(0.0, v)));
    }
    write_pgm16(path, obs.width, obs.height, mm);
}

} // namespace clothbench
