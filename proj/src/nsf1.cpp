#include "nsfs/nsf1.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "nsfs/error.hpp"

namespace nsfs {

namespace {

template <class T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
        return v;
    }
}

template <class T>
void put(std::ostream& os, T v) {
    v = to_little(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const char* what) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
        throw FormatError(std::string("NSF1: truncated header at ") + what);
    return to_little(v);
}

}  // namespace

void write_nsf1(std::ostream& os, const GridSpec& g, const std::vector<const ScalarField*>& components) {
    for (const ScalarField* c : components) require_same_grid(g, c->grid, "NSF1 component");
    os.write("NSF1", 4);
    put<std::uint32_t>(os, kNsf1Version);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
    put<std::uint64_t>(os, static_cast<std::uint64_t>(g.points_per_axis()));
    put<double>(os, g.half_width());
    put<std::uint32_t>(os, static_cast<std::uint32_t>(components.size()));
    for (const ScalarField* c : components) {
        if constexpr (std::endian::native == std::endian::little) {
            os.write(reinterpret_cast<const char*>(c->data.data()),
                     static_cast<std::streamsize>(c->data.size() * sizeof(double)));
        } else {
            for (double v : c->data) put<double>(os, v);
        }
    }
    if (!os) throw Error("NSF1: write failed");
}

void write_nsf1(const std::string& path, const VectorField& v) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    std::vector<const ScalarField*> comps;
    for (const auto& c : v.components) comps.push_back(&c);
    write_nsf1(os, v.grid, comps);
}

void write_nsf1(const std::string& path, const ScalarField& s) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_nsf1(os, s.grid, {&s});
}

Nsf1File read_nsf1(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "NSF1", 4) != 0) throw FormatError("NSF1: bad magic");
    const auto version = get<std::uint32_t>(is, "version");
    if (version != kNsf1Version) throw FormatError("NSF1: unsupported version " + std::to_string(version));
    const auto dim = get<std::uint32_t>(is, "dim");
    const auto npts = get<std::uint64_t>(is, "N");
    const auto half = get<double>(is, "L");
    const auto ncomp = get<std::uint32_t>(is, "component count");
    Nsf1File out;
    try {
        out.grid = GridSpec(static_cast<int>(dim), static_cast<std::int64_t>(npts), half);
    } catch (const Error& e) {
        throw FormatError(std::string("NSF1: invalid grid header: ") + e.what());
    }
    if (ncomp == 0 || ncomp > 64) throw FormatError("NSF1: implausible component count " + std::to_string(ncomp));
    out.components.reserve(ncomp);
    for (std::uint32_t c = 0; c < ncomp; ++c) {
        ScalarField s(out.grid);
        const auto bytes = static_cast<std::streamsize>(s.data.size() * sizeof(double));
        if (!is.read(reinterpret_cast<char*>(s.data.data()), bytes))
            throw FormatError("NSF1: truncated data in component " + std::to_string(c));
        if constexpr (std::endian::native != std::endian::little)
            for (double& v : s.data) v = to_little(v);
        out.components.push_back(std::move(s));
    }
    if (is.peek() != std::char_traits<char>::eof()) throw FormatError("NSF1: trailing bytes after data");
    return out;
}

Nsf1File read_nsf1(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path);
    try {
        return read_nsf1(is);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

VectorField read_vector_field(const std::string& path) {
    Nsf1File f = read_nsf1(path);
    if (static_cast<int>(f.components.size()) != f.grid.dim())
        throw FormatError(path + ": expected " + std::to_string(f.grid.dim()) + " components, found " +
                          std::to_string(f.components.size()));
    VectorField v;
    v.grid = f.grid;
    v.components = std::move(f.components);
    return v;
}

ScalarField read_scalar_field(const std::string& path) {
    Nsf1File f = read_nsf1(path);
    if (f.components.size() != 1)
        throw FormatError(path + ": expected 1 component, found " + std::to_string(f.components.size()));
    return std::move(f.components.front());
}

}  // namespace nsfs
