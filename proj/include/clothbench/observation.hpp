#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "clothbench/garment.hpp"
#include "clothbench/sim.hpp"
#include "clothbench/vec3.hpp"

namespace clothbench {

struct NoFabricVisible : std::runtime_error {
    NoFabricVisible() : std::runtime_error("no fabric visible in observation") {}
};

struct WorldRect {
    double x0 = -0.5, y0 = -0.5; // upper-left corner in world meters
    double width = 1.0, height = 1.0;
};

// Orthographic world<->pixel mapping. Pixel (px, py) center sits at world
// (origin_x + (px + 0.5) * mpp, origin_y + (py + 0.5) * mpp); image row 0 is
// the minimum world y (top of the image).
struct Calibration {
    double origin_x = 0.0, origin_y = 0.0;
    double meters_per_pixel = 1.0;

    Vec2 to_pixel(double wx, double wy) const {
        return {(wx - origin_x) / meters_per_pixel - 0.5,
                (wy - origin_y) / meters_per_pixel - 0.5};
    }
    Vec2 to_world(double px, double py) const {
        return {origin_x + (px + 0.5) * meters_per_pixel,
                origin_y + (py + 0.5) * meters_per_pixel};
    }
};

struct Observation {
    int width = 0, height = 0;
    std::vector<std::uint8_t> mask;  // 0/1, row-major
    std::vector<float> height_map;   // meters above table, 0 where empty
    Calibration cal;
    double coverage = 0.0;
    int mask_pixels = 0;

    bool at(int px, int py) const { return mask[static_cast<size_t>(py) * width + px] != 0; }
    float height_at(int px, int py) const {
        return height_map[static_cast<size_t>(py) * width + px];
    }
};

// Rasterizes the cloth triangles orthographically (top-left fill rule,
// pixel-center sampling). The height map keeps the per-pixel maximum surface
// height, where the surface sits params.cloth_thickness above the particle
// plane. Throws std::invalid_argument for a zero-size image or a world_rect
// whose aspect does not match the image.
Observation render_topdown(const ClothState& state, const GarmentTemplate& tmpl,
                           const SimParams& params, int width, int height,
                           const WorldRect& world_rect);

// Same, restricted to triangles with keep[t] != 0 (part silhouettes).
Observation render_topdown(const ClothState& state, const GarmentTemplate& tmpl,
                           const SimParams& params, int width, int height,
                           const WorldRect& world_rect, const std::vector<std::uint8_t>& keep);

double coverage(const Observation& obs, const GarmentTemplate& tmpl);

struct MaskGeometry {
    std::vector<std::pair<int, int>> boundary; // outer contour pixels, raster order
    Vec2 centroid;                             // pixel coordinates
    double principal_axis = 0.0;               // radians in (-pi/2, pi/2]
    double diameter_px = 0.0;                  // largest mask extent
};

// Outer 8-connected contour, centroid and principal axis of the mask.
// Throws NoFabricVisible when the mask is empty.
MaskGeometry mask_geometry(const Observation& obs);

// Portable graymap export/import (P5; 8-bit mask as 0/255, 16-bit height in
// millimeters, big-endian). Bit-exact round trips.
void write_pgm8(const std::string& path, int width, int height,
                const std::vector<std::uint8_t>& data);
void write_pgm16(const std::string& path, int width, int height,
                 const std::vector<std::uint16_t>& data);
std::vector<std::uint8_t> read_pgm8(const std::string& path, int& width, int& height);
std::vector<std::uint16_t> read_pgm16(const std::string& path, int& width, int& height);

void save_mask_pgm(const Observation& obs, const std::string& path);
void save_height_pgm(const Observation& obs, const std::string& path);

// FNV-1a digest of the mask bytes; used by episode logs.
std::uint64_t mask_digest(const Observation& obs);

} // namespace clothbench
