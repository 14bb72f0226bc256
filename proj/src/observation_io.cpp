// SPDX-License-Identifier: Apache-2.0

#include "isac/observation_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace isac {

namespace {

static_assert(std::endian::native == std::endian::little, "observation files assume a little-endian host");

constexpr char kMagic[8] = {'I', 'S', 'A', 'C', 'O', 'B', 'S', '1'};
constexpr std::uint64_t kMaxDim = 1u << 24;

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("observation file truncated");
    return v;
}

}  // namespace

void write_observations(std::ostream& out, const ObservationTensor& obs) {
    obs.validate();
    out.write(kMagic, sizeof(kMagic));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(obs.subcarriers));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(obs.symbols));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(obs.rx));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(obs.probes));
    put(out, obs.subcarrier_spacing_hz);
    put(out, obs.symbol_duration_s);
    put(out, obs.carrier_hz);
    for (const auto& f : obs.frames) {
        for (Eigen::Index r = 0; r < f.rows(); ++r) {
            for (Eigen::Index p = 0; p < f.cols(); ++p) {
                put(out, f(r, p).real());
                put(out, f(r, p).imag());
            }
        }
    }
    if (!out) throw std::runtime_error("failed to write observation data");
}

ObservationTensor read_observations(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("not an observation file (bad magic)");
    }
    std::uint64_t dims[4];
    for (auto& d : dims) {
        d = get<std::uint64_t>(in);
        if (d < 1 || d > kMaxDim) throw std::runtime_error("observation file has an invalid dimension");
    }
    ObservationTensor obs(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]),
                          static_cast<int>(dims[3]));
    obs.subcarrier_spacing_hz = get<double>(in);
    obs.symbol_duration_s = get<double>(in);
    obs.carrier_hz = get<double>(in);
    for (auto& f : obs.frames) {
        for (Eigen::Index r = 0; r < f.rows(); ++r) {
            for (Eigen::Index p = 0; p < f.cols(); ++p) {
                const double re = get<double>(in);
                const double im = get<double>(in);
                f(r, p) = {re, im};
            }
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) throw std::runtime_error("observation file has trailing bytes");
    return obs;
}

void save_observations(const std::string& path, const ObservationTensor& obs) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_observations(out, obs);
}

ObservationTensor load_observations(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return read_observations(in);
}

}  // namespace isac
