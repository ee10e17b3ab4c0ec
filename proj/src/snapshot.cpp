#include "qwalk/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <type_traits>

#include "qwalk/error.hpp"

namespace qwalk {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes little-endian");

namespace {

constexpr std::array<char, 8> kMagic = {'Q', 'W', 'S', 'N', 'A', 'P', '0', '1'};

template <typename T>
void put(std::ostream& out, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw Error("snapshot '" + path + "' is truncated");
    return v;
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& s) {
    const std::string tmp = path + ".part";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write snapshot '" + path + "'");
        out.write(kMagic.data(), kMagic.size());
        put<std::int32_t>(out, s.table.particles());
        put<std::int32_t>(out, s.table.vertices());
        put<std::int32_t>(out, s.table.coin_order());
        put<std::int64_t>(out, s.step);
        put<double>(out, s.table.norm_factor());
        put<std::uint32_t>(out, static_cast<std::uint32_t>(s.fingerprint.size()));
        out.write(s.fingerprint.data(), static_cast<std::streamsize>(s.fingerprint.size()));
        put<std::uint64_t>(out, s.table.size());
        for (const auto& e : s.table.entries()) {
            put<std::int32_t>(out, e.chirality + 1);
            put<std::uint64_t>(out, e.rank);
            put<double>(out, e.amplitude.real());
            put<double>(out, e.amplitude.imag());
        }
        out.flush();
        if (!out) throw Error("failed while writing snapshot '" + path + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("cannot move snapshot into place at '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open snapshot '" + path + "'");
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw Error("'" + path + "' is not a snapshot file");

    const auto n = get<std::int32_t>(in, path);
    const auto m = get<std::int32_t>(in, path);
    const auto d = get<std::int32_t>(in, path);
    Snapshot s;
    s.step = get<std::int64_t>(in, path);
    const auto k = get<double>(in, path);
    const auto len = get<std::uint32_t>(in, path);
    s.fingerprint.resize(len);
    in.read(s.fingerprint.data(), len);
    if (!in) throw Error("snapshot '" + path + "' is truncated");
    const auto count = get<std::uint64_t>(in, path);

    const ConfigurationSpace space(n, m);
    std::vector<AmplitudeEntry> entries;
    entries.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        AmplitudeEntry e;
        e.chirality = get<std::int32_t>(in, path) - 1;
        e.rank = get<std::uint64_t>(in, path);
        const double re = get<double>(in, path);
        const double im = get<double>(in, path);
        e.amplitude = {re, im};
        if (e.chirality < 0 || e.chirality >= d || e.rank >= space.size())
            throw Error("snapshot '" + path + "' has an entry outside the state space");
        if (!entries.empty()) {
            const auto& p = entries.back();
            if (p.chirality > e.chirality || (p.chirality == e.chirality && p.rank >= e.rank))
                throw Error("snapshot '" + path + "' entries are not in key order");
        }
        entries.push_back(e);
    }
    s.table = AmplitudeTable(n, m, d);
    s.table.assign_sorted(std::move(entries));
    s.table.set_norm_factor(k);
    return s;
}

}  // namespace qwalk
