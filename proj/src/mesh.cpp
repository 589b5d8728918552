#include "lbm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace lbm {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

double TriMesh::total_area() const {
    double area = 0.0;
    for (const auto& t : triangles)
        area += triangle_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
    return area;
}

void TriMesh::bounds(Vec3& lo, Vec3& hi) const {
    lo = {1e300, 1e300, 1e300};
    hi = {-1e300, -1e300, -1e300};
    for (const auto& v : vertices)
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], v[a]);
            hi[a] = std::max(hi[a], v[a]);
        }
}

namespace {

void push_triangle(TriMesh& m, const Vec3& a, const Vec3& b, const Vec3& c) {
    std::uint32_t base = static_cast<std::uint32_t>(m.vertices.size());
    m.vertices.push_back(a);
    m.vertices.push_back(b);
    m.vertices.push_back(c);
    m.triangles.push_back({base, base + 1, base + 2});
}

TriMesh load_stl_ascii(std::ifstream& in) {
    TriMesh m;
    std::string tok;
    std::vector<Vec3> tri;
    while (in >> tok) {
        if (tok == "vertex") {
            Vec3 v;
            in >> v.x >> v.y >> v.z;
            tri.push_back(v);
            if (tri.size() == 3) {
                push_triangle(m, tri[0], tri[1], tri[2]);
                tri.clear();
            }
        }
    }
    return m;
}

TriMesh load_stl_binary(std::ifstream& in) {
    in.seekg(80);
    std::uint32_t count = 0;
    in.read(reinterpret_cast<char*>(&count), 4);
    TriMesh m;
    for (std::uint32_t t = 0; t < count; ++t) {
        float raw[12];
        in.read(reinterpret_cast<char*>(raw), sizeof raw);
        std::uint16_t attr;
        in.read(reinterpret_cast<char*>(&attr), 2);
        if (!in) throw IoError("stl: truncated binary facet data");
        Vec3 a{raw[3], raw[4], raw[5]};
        Vec3 b{raw[6], raw[7], raw[8]};
        Vec3 c{raw[9], raw[10], raw[11]};
        push_triangle(m, a, b, c);
    }
    return m;
}

}  // namespace

TriMesh load_stl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open mesh file: " + path);
    char head[6] = {};
    in.read(head, 5);
    in.seekg(0);
    // ASCII files start with "solid", but some binary exporters do too; use
    // the facet count consistency check to disambiguate.
    if (std::strncmp(head, "solid", 5) == 0) {
        in.seekg(0, std::ios::end);
        auto size = in.tellg();
        in.seekg(80);
        std::uint32_t count = 0;
        if (size >= 84) in.read(reinterpret_cast<char*>(&count), 4);
        in.seekg(0);
        if (size == static_cast<std::streamoff>(84 + 50ull * count)) return load_stl_binary(in);
        return load_stl_ascii(in);
    }
    return load_stl_binary(in);
}

TriMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh file: " + path);
    TriMesh m;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "v") {
            Vec3 v;
            ss >> v.x >> v.y >> v.z;
            m.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<std::uint32_t> idx;
            std::string f;
            while (ss >> f) {
                // "i", "i/t", "i/t/n" and "i//n" forms; 1-based, negatives relative
                long v = std::strtol(f.c_str(), nullptr, 10);
                if (v < 0) v = static_cast<long>(m.vertices.size()) + v + 1;
                if (v < 1 || v > static_cast<long>(m.vertices.size()))
                    throw IoError("obj: vertex index out of range in " + path);
                idx.push_back(static_cast<std::uint32_t>(v - 1));
            }
            if (idx.size() != 3) throw IoError("obj: only triangle faces are supported");
            m.triangles.push_back({idx[0], idx[1], idx[2]});
        }
    }
    return m;
}

TriMesh load_mesh(const std::string& path) {
    auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), [](char c) { return std::tolower(c); });
    if (ext == "stl") return load_stl(path);
    if (ext == "obj") return load_obj(path);
    throw IoError("unsupported mesh format: " + path);
}

TriMesh make_quad(double size, double z) {
    TriMesh m;
    push_triangle(m, {0, 0, z}, {size, 0, z}, {size, size, z});
    push_triangle(m, {0, 0, z}, {size, size, z}, {0, size, z});
    return m;
}

TriMesh make_box(const Vec3& lo, const Vec3& hi) {
    TriMesh m;
    Vec3 v[8];
    for (int i = 0; i < 8; ++i)
        v[i] = {i & 1 ? hi.x : lo.x, i & 2 ? hi.y : lo.y, i & 4 ? hi.z : lo.z};
    const int faces[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                             {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    for (const auto& f : faces) {
        push_triangle(m, v[f[0]], v[f[1]], v[f[2]]);
        push_triangle(m, v[f[0]], v[f[2]], v[f[3]]);
    }
    return m;
}

TriMesh make_icosphere(const Vec3& center, double radius, int subdivisions) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                               {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                               {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    std::vector<std::array<std::uint32_t, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    auto normalize = [](const Vec3& v) {
        double n = v.norm();
        return Vec3{v.x / n, v.y / n, v.z / n};
    };
    for (auto& v : verts) v = normalize(v);

    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
        auto mid = [&](std::uint32_t a, std::uint32_t b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            verts.push_back(normalize((verts[a] + verts[b]) * 0.5));
            std::uint32_t idx = static_cast<std::uint32_t>(verts.size() - 1);
            midpoint[key] = idx;
            return idx;
        };
        std::vector<std::array<std::uint32_t, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            std::uint32_t ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    TriMesh m;
    m.vertices.reserve(verts.size());
    for (const auto& v : verts) m.vertices.push_back(center + v * radius);
    m.triangles = std::move(faces);
    return m;
}

TriMesh make_fin_comb(const Vec3& origin, int fins, double fin_length, double fin_height,
                      double fin_spacing) {
    TriMesh m;
    const double depth = (fins - 1) * fin_spacing;
    // Base plate in the xy-plane.
    Vec3 p0 = origin, p1 = origin + Vec3{fin_length, 0, 0};
    Vec3 p2 = origin + Vec3{fin_length, depth, 0}, p3 = origin + Vec3{0, depth, 0};
    push_triangle(m, p0, p1, p2);
    push_triangle(m, p0, p2, p3);
    // Vertical fins (double-sided sheets normal to y).
    for (int f = 0; f < fins; ++f) {
        double y = origin.y + f * fin_spacing;
        Vec3 a = {origin.x, y, origin.z};
        Vec3 b = {origin.x + fin_length, y, origin.z};
        Vec3 c = {origin.x + fin_length, y, origin.z + fin_height};
        Vec3 d = {origin.x, y, origin.z + fin_height};
        push_triangle(m, a, b, c);
        push_triangle(m, a, c, d);
    }
    return m;
}

}  // namespace lbm
