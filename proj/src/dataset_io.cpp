#include "tacsel/dataset_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tacsel/errors.hpp"

namespace tacsel {

namespace {

constexpr char kMagic[4] = {'H', 'V', 'T', 'S'};
constexpr uint16_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
    // Little-endian hosts only; static_assert keeps this honest.
    static_assert(std::endian::native == std::endian::little);
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T take(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

}  // namespace

void write_video(const std::string& path, const PressVideo& video, bool selected) {
    if (video.frames.empty()) throw DataError("refusing to write empty video: " + path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path);

    const uint32_t h = static_cast<uint32_t>(video.frames[0].rows);
    const uint32_t w = static_cast<uint32_t>(video.frames[0].cols);
    const uint32_t n_frames = static_cast<uint32_t>(video.frames.size());
    const uint32_t n_markers =
        video.markers.empty() ? 0 : static_cast<uint32_t>(video.markers[0].size());

    out.write(kMagic, 4);
    put<uint16_t>(out, kVersion);
    put<uint16_t>(out, selected ? 1 : 0);
    put<uint32_t>(out, h);
    put<uint32_t>(out, w);
    put<uint32_t>(out, n_frames);
    put<uint32_t>(out, n_markers);
    put<uint32_t>(out, static_cast<uint32_t>(video.label));
    put<double>(out, video.compliance);

    for (const auto& f : video.frames) {
        out.write(reinterpret_cast<const char*>(f.px.data()),
                  static_cast<std::streamsize>(f.px.size() * sizeof(float)));
    }
    for (const auto& pts : video.markers) {
        for (const auto& p : pts) {
            put<float>(out, static_cast<float>(p.x));
            put<float>(out, static_cast<float>(p.y));
        }
    }
    for (double t : video.timestamps) put<double>(out, t);
    if (!out) throw DataError("write failed: " + path);
}

PressVideo read_video(const std::string& path, bool* selected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw DataError("bad magic in " + path);
    const uint16_t version = take<uint16_t>(in);
    if (version != kVersion) {
        throw DataError("unsupported version " + std::to_string(version) + " in " + path);
    }
    const uint16_t sel = take<uint16_t>(in);
    if (selected) *selected = sel != 0;
    const uint32_t h = take<uint32_t>(in);
    const uint32_t w = take<uint32_t>(in);
    const uint32_t n_frames = take<uint32_t>(in);
    const uint32_t n_markers = take<uint32_t>(in);
    PressVideo video;
    video.label = static_cast<int>(take<uint32_t>(in));
    video.compliance = take<double>(in);

    for (uint32_t k = 0; k < n_frames; ++k) {
        Image f(static_cast<int>(h), static_cast<int>(w));
        in.read(reinterpret_cast<char*>(f.px.data()),
                static_cast<std::streamsize>(f.px.size() * sizeof(float)));
        video.frames.push_back(std::move(f));
    }
    for (uint32_t k = 0; k < n_frames; ++k) {
        std::vector<Vec2> pts(n_markers);
        for (auto& p : pts) {
            p.x = take<float>(in);
            p.y = take<float>(in);
        }
        video.markers.push_back(std::move(pts));
    }
    video.timestamps.resize(n_frames);
    for (auto& t : video.timestamps) t = take<double>(in);
    if (!in) throw DataError("truncated file: " + path);
    return video;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path);
    char buf[512];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof(buf), "%s %d %.17g %.17g %llu\n", e.path.c_str(), e.label,
                      e.f_push, e.v_push, static_cast<unsigned long long>(e.seed));
        out << buf;
    }
    if (!out) throw DataError("write failed: " + path);
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path);
    std::vector<ManifestEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ManifestEntry e;
        unsigned long long seed = 0;
        if (!(ls >> e.path >> e.label >> e.f_push >> e.v_push >> seed)) {
            throw DataError("bad manifest line in " + path + ": " + line);
        }
        e.seed = seed;
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace tacsel
