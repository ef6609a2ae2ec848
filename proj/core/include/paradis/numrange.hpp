#pragma once

// Angular numerical range of a single operator A and the copy count it
// dictates. The numerical range W(A) is scanned through its support
// function: for each direction theta, min_support(a, theta) is the
// least eigenvalue of the rotated Hermitian part, and the set of
// directions where it stays positive determines the cone swept by W(A).

#include <optional>

#include "paradis/linalg.hpp"

namespace paradis {

enum class ConeClass {
    PointedCone,    // W(A) spans a pointed cone off 0 (a ray counts, angle 0)
    HalfPlane,      // 0 sits on the boundary of W(A), no full line through it
    FullPlane,      // 0 interior to W(A)
    DegenerateLine, // W(A) lies on a line through 0
};

const char* cone_class_name(ConeClass c) noexcept;

struct FieldAngleReport {
    double theta = 0.0;       // cone angle; pi for half-plane and line, 2*pi for full plane
    ConeClass classification = ConeClass::FullPlane;
    bool zero_in_range = false;
    std::optional<int> optimal_n; // least copy count; absent = never distinguishable
};

// lambda_min of the Hermitian part of e^{-i theta} a. ZeroMatrix for a = 0.
double min_support(const CMat& a, double theta);

// Cone classification of W(a). The support function is scanned on a
// 2048-direction grid; intervals that could still hide a sign change
// (Lipschitz bound on the normalized operator) are subdivided down to
// 2^20 directions before the positive set is declared empty. Arc
// endpoints are bisected to resolution tol.
FieldAngleReport field_angle(const CMat& a, double tol = 1e-9);

// Density operator rho on n copies with tr(a^{tensor n} rho) = 0.
// n defaults to the least sufficient count; fewer copies raise
// InsufficientCopies, and a never-distinguishable a raises
// NotDistinguishable. Extra copies beyond the least count are padded
// with maximally mixed factors.
CMat onedim_witness(const CMat& a, std::optional<int> copies = std::nullopt);

} // namespace paradis
