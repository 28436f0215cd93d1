#include "torusflux/tfld.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace torusflux {

static_assert(std::endian::native == std::endian::little,
              "tfld i/o assumes a little-endian host");

std::vector<std::uint8_t> tfld_serialize(const TorusField& f) {
    const auto samples = f.physical_all();
    std::vector<std::uint8_t> out;
    out.reserve(12 + samples.size() * sizeof(double));
    out.push_back('T');
    out.push_back('F');
    out.push_back('L');
    out.push_back('D');
    const std::uint16_t ver = kTfldVersion;
    const std::uint8_t dim = static_cast<std::uint8_t>(f.grid().dim());
    const std::uint32_t n = static_cast<std::uint32_t>(f.grid().n());
    const std::uint8_t comps = static_cast<std::uint8_t>(f.ncomp());
    auto append = [&](const void* p, std::size_t len) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out.insert(out.end(), b, b + len);
    };
    append(&ver, 2);
    append(&dim, 1);
    append(&n, 4);
    append(&comps, 1);
    append(samples.data(), samples.size() * sizeof(double));
    return out;
}

TorusField tfld_deserialize(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 12 || bytes[0] != 'T' || bytes[1] != 'F' || bytes[2] != 'L' ||
        bytes[3] != 'D')
        throw std::runtime_error("tfld: bad magic");
    std::uint16_t ver;
    std::uint8_t dim, comps;
    std::uint32_t n;
    std::memcpy(&ver, bytes.data() + 4, 2);
    std::memcpy(&dim, bytes.data() + 6, 1);
    std::memcpy(&n, bytes.data() + 7, 4);
    std::memcpy(&comps, bytes.data() + 11, 1);
    if (ver != kTfldVersion) throw std::runtime_error("tfld: unsupported version");
    TorusGrid grid(dim, static_cast<int>(n));
    const std::size_t count = grid.size() * comps;
    if (bytes.size() != 12 + count * sizeof(double))
        throw std::runtime_error("tfld: truncated payload");
    std::vector<double> samples(count);
    std::memcpy(samples.data(), bytes.data() + 12, count * sizeof(double));
    return TorusField::from_physical(grid, comps, std::move(samples));
}

void write_tfld(const std::string& path, const TorusField& f) {
    auto bytes = tfld_serialize(f);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("tfld: cannot open for writing: " + path);
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("tfld: write failed: " + path);
}

TorusField read_tfld(const std::string& path) {
    std::ifstream is(path, std::ios::binary | std::ios::ate);
    if (!is) throw std::runtime_error("tfld: cannot open: " + path);
    const std::streamsize size = is.tellg();
    is.seekg(0);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    is.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!is) throw std::runtime_error("tfld: read failed: " + path);
    return tfld_deserialize(bytes);
}

} // namespace torusflux
