#pragma once

// Numerical policy. These constants are contractual: tests pin them, and the
// CLI reports them in run manifests. Change here, nowhere else.
namespace seba::tol {

inline constexpr double degeneracy_rel = 1e-10;    // energy clustering, relative
inline constexpr double zero_amplitude = 1e-12;    // lines below this are dropped
inline constexpr double weight_rel = 1e-14;        // weight vs |amplitude|^2
inline constexpr double bracket_rel = 1e-9;        // bracket margin, fraction of gap
inline constexpr double residual = 1e-9;           // accepted |F(root)|
inline constexpr double bracket_stop_rel = 1e-12;  // stop width, times max(1,|x|)
inline constexpr double pole_rel = 1e-12;          // pole guard, times max(1,|x|)
inline constexpr double min_gap = 1e-10;           // narrower gaps are skipped
inline constexpr double singular_theta = 1e-12;    // |1-cos(theta)| guard

}  // namespace seba::tol
