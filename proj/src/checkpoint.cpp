#include "couette/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "couette/error.hpp"

namespace couette {

namespace {

constexpr char kMagic[4] = {'C', 'L', 'M', 'C'};

template <typename T>
void put(std::string& out, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t k = 0; k < sizeof(T) / 2; ++k) std::swap(b[k], b[sizeof(T) - 1 - k]);
    out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
T get(const std::string& in, std::size_t& pos) {
    if (pos > in.size() || in.size() - pos < sizeof(T))
        throw CheckpointError(CheckpointError::Kind::truncated,
                              "truncated payload at byte " + std::to_string(pos));
    unsigned char b[sizeof(T)];
    std::memcpy(b, in.data() + pos, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t k = 0; k < sizeof(T) / 2; ++k) std::swap(b[k], b[sizeof(T) - 1 - k]);
    pos += sizeof(T);
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

}  // namespace

std::string encode_checkpoint(const PerturbationState& s) {
    const Grid& g = s.grid();
    std::string out;
    out.reserve(24 + 4 * sizeof(double) * static_cast<std::size_t>(g.size()));
    out.append(kMagic, 4);
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n1));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n2));
    put<double>(out, s.time);
    for (const ScalarField* f : {&s.phi, &s.psi1, &s.psi2, &s.theta}) {
        // Column-major (n2+1) x n1 storage is already i outer, j inner.
        const auto& v = f->values();
        for (Eigen::Index n = 0; n < v.size(); ++n) put<double>(out, v.data()[n]);
    }
    return out;
}

PerturbationState decode_checkpoint(const std::string& in) {
    if (in.size() < 4 || std::memcmp(in.data(), kMagic, 4) != 0)
        throw CheckpointError(CheckpointError::Kind::bad_magic, "bad magic: not a CLMC checkpoint");
    std::size_t pos = 4;
    const auto version = get<std::uint32_t>(in, pos);
    if (version != kCheckpointVersion)
        throw CheckpointError(CheckpointError::Kind::version_mismatch,
                              "version mismatch: file has " + std::to_string(version) +
                                  ", reader supports " + std::to_string(kCheckpointVersion));
    const auto n1 = get<std::uint32_t>(in, pos);
    const auto n2 = get<std::uint32_t>(in, pos);
    const double time = get<double>(in, pos);
    Grid g;
    try {
        g = Grid::make(static_cast<int>(n1), static_cast<int>(n2));
    } catch (const Error& e) {
        throw CheckpointError(CheckpointError::Kind::shape, std::string("bad shape: ") + e.what());
    }
    const std::size_t need = 4 * sizeof(double) * static_cast<std::size_t>(g.size());
    if (in.size() - pos < need)
        throw CheckpointError(CheckpointError::Kind::truncated,
                              "truncated payload: expected " + std::to_string(need) +
                                  " field bytes, found " + std::to_string(in.size() - pos));
    if (in.size() - pos > need)
        throw CheckpointError(CheckpointError::Kind::shape, "trailing bytes after field blocks");

    PerturbationState s = PerturbationState::zero(g, time);
    ScalarField* f[] = {&s.phi, &s.psi1, &s.psi2, &s.theta};
    for (ScalarField* field : f) {
        auto& v = field->values();
        for (Eigen::Index n = 0; n < v.size(); ++n) v.data()[n] = get<double>(in, pos);
    }
    return s;
}

void write_checkpoint(const PerturbationState& state, const std::string& path) {
    const std::string bytes = encode_checkpoint(state);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw CheckpointError(CheckpointError::Kind::io, "cannot open " + path + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw CheckpointError(CheckpointError::Kind::io, "write failed: " + path);
}

PerturbationState read_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CheckpointError(CheckpointError::Kind::io, "cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

}  // namespace couette
