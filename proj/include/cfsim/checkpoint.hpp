#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "cfsim/grid.hpp"

namespace cfsim {

// Binary snapshot format: magic "CFSIM", u32 version, u32 nx, u32 ny,
// f64 lx, ly, t, then row-major f64 dumps of n, c, ux, uy. Little-endian.
inline constexpr char kCheckpointMagic[5] = {'C', 'F', 'S', 'I', 'M'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

namespace detail {

template <class T>
void write_raw(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_raw(std::istream& in, T& v, const char* what) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in)
        throw Error(ErrorCode::FORMAT_ERROR, std::string("truncated checkpoint while reading ") + what);
}

inline void write_doubles(std::ostream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

inline void read_doubles(std::istream& in, std::vector<double>& v, const char* what) {
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in)
        throw Error(ErrorCode::FORMAT_ERROR, std::string("truncated checkpoint while reading ") + what);
}

}  // namespace detail

inline void write_checkpoint(const SimState& state, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot open checkpoint for writing: " + path);
    const Grid& g = state.n.grid();
    out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    detail::write_raw(out, kCheckpointVersion);
    detail::write_raw(out, static_cast<std::uint32_t>(g.nx));
    detail::write_raw(out, static_cast<std::uint32_t>(g.ny));
    detail::write_raw(out, g.lx);
    detail::write_raw(out, g.ly);
    detail::write_raw(out, state.t);
    detail::write_doubles(out, state.n.data());
    detail::write_doubles(out, state.c.data());
    detail::write_doubles(out, state.u.ux_data());
    detail::write_doubles(out, state.u.uy_data());
    if (!out) throw Error(ErrorCode::IO_ERROR, "write failed for checkpoint: " + path);
}

inline SimState read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot open checkpoint for reading: " + path);
    char magic[sizeof(kCheckpointMagic)];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
        throw Error(ErrorCode::FORMAT_ERROR, "bad checkpoint magic in " + path);
    std::uint32_t version = 0;
    detail::read_raw(in, version, "version");
    if (version != kCheckpointVersion)
        throw Error(ErrorCode::FORMAT_ERROR,
                    "checkpoint version " + std::to_string(version) + " unsupported (expected " +
                        std::to_string(kCheckpointVersion) + ")");
    std::uint32_t nx = 0, ny = 0;
    detail::read_raw(in, nx, "nx");
    detail::read_raw(in, ny, "ny");
    double lx = 0, ly = 0, t = 0;
    detail::read_raw(in, lx, "lx");
    detail::read_raw(in, ly, "ly");
    detail::read_raw(in, t, "t");
    const Grid g = make_grid(static_cast<int>(nx), static_cast<int>(ny), lx, ly);
    SimState state = SimState::zeros(g);
    state.t = t;
    detail::read_doubles(in, state.n.data(), "n");
    detail::read_doubles(in, state.c.data(), "c");
    detail::read_doubles(in, state.u.ux_data(), "ux");
    detail::read_doubles(in, state.u.uy_data(), "uy");
    char extra;
    if (in.read(&extra, 1))
        throw Error(ErrorCode::FORMAT_ERROR, "trailing bytes after checkpoint payload in " + path);
    return state;
}

}  // namespace cfsim
