#include "corrector/regions.hpp"

#include <cstdio>
#include <deque>
#include <fstream>

#include "corrector/errors.hpp"

namespace corrector {

namespace {

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

RegionMap classify_regions(const CorrectorSolution& solution) {
    const Grid& grid = solution.grid;
    const std::int64_t size = grid.size();
    if (solution.bindingSets.size() != static_cast<std::size_t>(size) ||
        solution.w.size() != size) {
        throw Error(Errc::DegenerateInput, "solution carries no classification data");
    }

    RegionMap map;
    map.grid = grid;
    map.aBar = solution.aBar;
    map.tolBind = solution.tolBind;
    map.labels = solution.bindingSets;
    map.w = solution.w;

    const std::int64_t origin = grid.origin();
    if (map.labels[static_cast<std::size_t>(origin)] != 0) {
        throw Error(Errc::EmptyNTRegion,
                    "a transfer constraint binds at the origin; no-transaction region is empty");
    }

    std::int64_t total = 0;
    for (std::int64_t k = 0; k < size; ++k) {
        if (map.labels[static_cast<std::size_t>(k)] == 0) ++total;
    }

    std::vector<std::uint8_t> seen(static_cast<std::size_t>(size), 0);
    std::deque<std::int64_t> queue;
    seen[static_cast<std::size_t>(origin)] = 1;
    queue.push_back(origin);
    std::int64_t reached = 0;
    while (!queue.empty()) {
        const std::int64_t k = queue.front();
        queue.pop_front();
        ++reached;
        for (int a = 0; a < grid.d; ++a) {
            for (int s = -1; s <= 1; s += 2) {
                std::array<int, 3> dir{0, 0, 0};
                dir[static_cast<std::size_t>(a)] = s;
                const std::int64_t nb = grid.shift(k, dir);
                if (nb < 0 || seen[static_cast<std::size_t>(nb)]) continue;
                if (map.labels[static_cast<std::size_t>(nb)] != 0) continue;
                seen[static_cast<std::size_t>(nb)] = 1;
                queue.push_back(nb);
            }
        }
    }
    if (reached != total) {
        throw Error(Errc::EmptyNTRegion,
                    "no-transaction region is disconnected from the origin");
    }
    map.ntCells = total;
    return map;
}

std::string label_text(int d, std::uint8_t mask) {
    if (mask == 0) return "NT";
    std::string out;
    int slot = 0;
    for (int a = 0; a <= d; ++a) {
        for (int b = a + 1; b <= d; ++b) {
            if (mask & (1u << slot)) {
                if (!out.empty()) out += '+';
                out += std::to_string(a);
                out += '/';
                out += std::to_string(b);
            }
            ++slot;
        }
    }
    return out;
}

std::array<unsigned char, 3> label_color(std::uint8_t mask) {
    switch (mask) {
        case 0:
            return {255, 255, 255};  // no transaction
        case 1:
            return {255, 0, 0};  // cash <-> asset 1
        case 2:
            return {255, 255, 0};  // cash <-> asset 2
        case 3:
            return {255, 165, 0};  // both cash constraints
        case 4:
            return {0, 0, 255};  // asset 1 <-> asset 2
        case 5:
            return {238, 130, 238};  // asset swap plus cash <-> asset 1
        case 6:
            return {0, 128, 0};  // asset swap plus cash <-> asset 2
        default:
            return {0, 0, 0};  // everything binds
    }
}

void emit_csv(const RegionMap& map, const std::string& path) {
    const Grid& grid = map.grid;
    std::string out;
    out.reserve(static_cast<std::size_t>(grid.size()) * 64);
    out += "# tolBind=";
    append_double(out, map.tolBind);
    out += '\n';
    for (int a = 0; a < grid.d; ++a) {
        out += "rho";
        out += std::to_string(a + 1);
        out += ',';
    }
    out += "label,w,aBar\n";
    for (std::int64_t k = 0; k < grid.size(); ++k) {
        const Eigen::VectorXd rho = grid.rho(k);
        for (int a = 0; a < grid.d; ++a) {
            append_double(out, rho(a));
            out += ',';
        }
        out += label_text(grid.d, map.labels[static_cast<std::size_t>(k)]);
        out += ',';
        append_double(out, map.w(k));
        out += ',';
        append_double(out, map.aBar);
        out += '\n';
    }
    std::ofstream file(path, std::ios::binary);
    if (!file || !file.write(out.data(), static_cast<std::streamsize>(out.size()))) {
        throw Error(Errc::IoError, "cannot write " + path);
    }
}

void emit_image(const RegionMap& map, const std::string& path, int scale) {
    if (map.grid.d != 2) {
        throw Error(Errc::UnsupportedDimension, "region images require exactly two assets");
    }
    if (scale < 1) {
        throw Error(Errc::DegenerateInput, "image scale must be at least 1");
    }
    const int n = map.grid.n;
    const int side = n * scale;
    std::string out;
    {
        char header[64];
        std::snprintf(header, sizeof header, "P6\n%d %d\n255\n", side, side);
        out += header;
    }
    out.reserve(out.size() + static_cast<std::size_t>(side) * side * 3);
    for (int py = 0; py < side; ++py) {
        const int i2 = n - 1 - py / scale;  // top pixel row holds the largest rho2
        for (int px = 0; px < side; ++px) {
            const int i1 = px / scale;
            const std::int64_t k = map.grid.pack({i1, i2, 0});
            const auto rgb = label_color(map.labels[static_cast<std::size_t>(k)]);
            out += static_cast<char>(rgb[0]);
            out += static_cast<char>(rgb[1]);
            out += static_cast<char>(rgb[2]);
        }
    }
    std::ofstream file(path, std::ios::binary);
    if (!file || !file.write(out.data(), static_cast<std::streamsize>(out.size()))) {
        throw Error(Errc::IoError, "cannot write " + path);
    }
}

}  // namespace corrector
