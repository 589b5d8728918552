/// @file mesh.hpp
/// @brief Triangle meshes: STL/OBJ input and procedural test shapes.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lbm/core.hpp"

namespace lbm {

struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;

    double total_area() const;
    void bounds(Vec3& lo, Vec3& hi) const;
};

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

/// Loads .stl (ASCII or binary) or .obj (triangles only). Throws IoError.
TriMesh load_mesh(const std::string& path);
TriMesh load_stl(const std::string& path);
TriMesh load_obj(const std::string& path);

/// Axis-aligned unit quad in the plane z = `z`, spanning [0,size]^2, two triangles.
TriMesh make_quad(double size = 1.0, double z = 0.0);

/// Axis-aligned box surface.
TriMesh make_box(const Vec3& lo, const Vec3& hi);

/// Subdivided icosahedron; subdivisions >= 0.
TriMesh make_icosphere(const Vec3& center, double radius, int subdivisions);

/// Concave stress shape for load-balance measurements: a base plate with
/// `fins` thin vertical fins. Nodes at the fin roots see several surface
/// sheets inside one kernel neighborhood; nodes at the tips see one.
TriMesh make_fin_comb(const Vec3& origin, int fins, double fin_length, double fin_height,
                      double fin_spacing);

}  // namespace lbm
