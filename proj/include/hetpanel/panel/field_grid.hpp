#pragma once

#include <array>
#include <string>
#include <vector>

namespace hetpanel {

/// Response channels stored for every structural unit.
enum class Channel : int { u1 = 0, u2 = 1, u3 = 2, stress = 3 };

const char* channel_name(Channel c);
Channel channel_from_string(const std::string& s);
constexpr int kNumChannels = 4;

/// Fixed-resolution response field on one structural unit's mid-surface:
/// 10 rows across the short direction x 20 columns along the long direction,
/// for 4 channels (displacements u1/u2/u3 in mm, von Mises stress proxy in
/// MPa). Grid points sit at cell centres of the unit rectangle.
struct FieldGrid {
    static constexpr int kRows = 10;   // across (local v)
    static constexpr int kCols = 20;   // along (local u)
    static constexpr int kSize = kNumChannels * kRows * kCols;

    int unit_id = 0;
    std::vector<double> data;  // [channel][row][col], size kSize

    FieldGrid() : data(kSize, 0.0) {}
    explicit FieldGrid(int uid) : unit_id(uid), data(kSize, 0.0) {}

    double& at(Channel c, int row, int col) {
        return data[(static_cast<int>(c) * kRows + row) * kCols + col];
    }
    double at(Channel c, int row, int col) const {
        return data[(static_cast<int>(c) * kRows + row) * kCols + col];
    }
};

/// Parametric coordinate of grid cell centres: (i+0.5)/n in [0,1].
inline double grid_coord(int i, int n) { return (i + 0.5) / n; }

}  // namespace hetpanel
