#include "inls/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace inls {

static_assert(std::endian::native == std::endian::little,
              "field container writes raw little-endian scalars");

namespace {

constexpr char kMagic[8] = {'I', 'N', 'L', 'S', 'F', 'L', 'D', '1'};

template <class T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw DomainError("field container truncated");
    return v;
}

}  // namespace

void write_field(std::ostream& out, const Field& f) {
    out.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.dim));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.M));
    put<double>(out, f.grid.L);
    put<std::uint32_t>(out, f.space == Space::Physical ? 0u : 1u);
    for (const cplx& z : f.values) {
        put<double>(out, z.real());
        put<double>(out, z.imag());
    }
    if (!out) throw DomainError("field container write failed");
}

Field read_field(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw DomainError("not a field container (bad magic)");
    auto dim = get<std::uint32_t>(in);
    auto M = get<std::uint32_t>(in);
    auto L = get<double>(in);
    auto space_tag = get<std::uint32_t>(in);
    if (space_tag > 1) throw DomainError("field container has an unknown space tag");
    Grid g(static_cast<int>(dim), static_cast<int>(M), L);
    Field f(g, space_tag == 0 ? Space::Physical : Space::Frequency);
    for (cplx& z : f.values) {
        double re = get<double>(in);
        double im = get<double>(in);
        z = cplx(re, im);
    }
    return f;
}

void write_field_file(const std::string& path, const Field& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open for writing: " + path);
    write_field(out, f);
}

Field read_field_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open for reading: " + path);
    return read_field(in);
}

}  // namespace inls
